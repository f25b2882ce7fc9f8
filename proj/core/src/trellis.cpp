#include "irntc/trellis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "irntc/rng.hpp"

namespace irntc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_message(const ConvCode& code, int k, size_t msg_size) {
  if (k < code.nu)
    throw std::invalid_argument("tail-biting needs k >= nu");
  if (msg_size != static_cast<size_t>(k))
    throw std::invalid_argument("message length mismatch");
}

int initial_state(const ConvCode& code, const std::vector<uint8_t>& msg) {
  // Register convention: bit nu-1 holds the previous input, bit 0 the oldest.
  int s = 0;
  int k = static_cast<int>(msg.size());
  for (int i = 1; i <= code.nu; ++i) s |= (msg[static_cast<size_t>(k - i)] & 1) << (code.nu - i);
  return s;
}

// Shared Viterbi machinery over the tail-biting trellis. Branch costs are
// normalized to be nonnegative so partial metrics lower-bound completions,
// making the incumbent prune admissible.
struct Trellis {
  const ConvCode& code;
  int k;
  int states;
  int lowmask;
  std::vector<uint8_t> ptab;  // packed generator parities over (u << nu) | s
  std::vector<double> cost;   // normalized: 2 entries per mother bit
  double shift = 0.0;         // sum of subtracted minima (restored in results)
  std::vector<uint8_t> back;  // k * states traceback: chosen shifted-out bit
  std::vector<double> cur, nxt;

  Trellis(const ConvCode& c, int k_, const std::vector<double>& raw_cost)
      : code(c), k(k_), states(c.states()), lowmask((1 << (c.nu - 1)) - 1) {
    if (raw_cost.size() != static_cast<size_t>(6 * k))
      throw std::invalid_argument("cost array must hold 2 entries per mother bit");
    ptab.resize(static_cast<size_t>(2 * states));
    for (int w = 0; w < 2 * states; ++w) {
      uint8_t packed = 0;
      for (int c2 = 0; c2 < 3; ++c2)
        packed |= static_cast<uint8_t>(
            std::popcount(static_cast<uint32_t>(w) & code.gen[static_cast<size_t>(c2)]) & 1)
            << c2;
      ptab[static_cast<size_t>(w)] = packed;
    }
    cost.resize(raw_cost.size());
    for (int i = 0; i < 3 * k; ++i) {
      double lo = std::min(raw_cost[static_cast<size_t>(2 * i)],
                           raw_cost[static_cast<size_t>(2 * i + 1)]);
      if (!std::isfinite(lo)) throw std::invalid_argument("branch costs must be finite");
      cost[static_cast<size_t>(2 * i)] = raw_cost[static_cast<size_t>(2 * i)] - lo;
      cost[static_cast<size_t>(2 * i + 1)] = raw_cost[static_cast<size_t>(2 * i + 1)] - lo;
      shift += lo;
    }
    back.resize(static_cast<size_t>(k) * static_cast<size_t>(states));
    cur.resize(static_cast<size_t>(states));
    nxt.resize(static_cast<size_t>(states));
  }

  double branch(int t, int w) const {
    uint8_t b = ptab[static_cast<size_t>(w)];
    const double* ct = &cost[static_cast<size_t>(6 * t)];
    return ct[b & 1] + ct[2 + ((b >> 1) & 1)] + ct[4 + ((b >> 2) & 1)];
  }

  // Add-compare-select over all k sections from `init`; returns false when
  // every state's partial metric exceeds `prune_above` (search abandoned).
  bool run(const std::vector<double>& init, double prune_above = kInf) {
    cur = init;
    for (int t = 0; t < k; ++t) {
      double rowmin = kInf;
      uint8_t* bk = &back[static_cast<size_t>(t) * static_cast<size_t>(states)];
      for (int sn = 0; sn < states; ++sn) {
        int u = sn >> (code.nu - 1);
        int low = (sn & lowmask) << 1;
        int w = (u << code.nu) | low;
        double m0 = cur[static_cast<size_t>(low)] + branch(t, w);
        double m1 = cur[static_cast<size_t>(low | 1)] + branch(t, w | 1);
        if (m0 <= m1) {
          nxt[static_cast<size_t>(sn)] = m0;
          bk[sn] = 0;
        } else {
          nxt[static_cast<size_t>(sn)] = m1;
          bk[sn] = 1;
        }
        if (nxt[static_cast<size_t>(sn)] < rowmin) rowmin = nxt[static_cast<size_t>(sn)];
      }
      cur.swap(nxt);
      if (rowmin > prune_above) return false;
    }
    return true;
  }

  // Walk the survivors back from `end`; fills the message, returns the start
  // state of the traced path.
  int traceback(int end, std::vector<uint8_t>* msg) const {
    msg->resize(static_cast<size_t>(k));
    int s = end;
    for (int t = k - 1; t >= 0; --t) {
      (*msg)[static_cast<size_t>(t)] = static_cast<uint8_t>(s >> (code.nu - 1));
      int lost = back[static_cast<size_t>(t) * static_cast<size_t>(states) +
                      static_cast<size_t>(s)];
      s = ((s & lowmask) << 1) | lost;
    }
    return s;
  }

  int best_end() const {
    int e = 0;
    for (int s = 1; s < states; ++s)
      if (cur[static_cast<size_t>(s)] < cur[static_cast<size_t>(e)]) e = s;
    return e;
  }

  // Normalized metric of a given message's tail-biting codeword.
  double message_metric(const std::vector<uint8_t>& msg) const {
    std::vector<uint8_t> mother = tb_encode(code, msg);
    double m = 0.0;
    for (int i = 0; i < 3 * k; ++i)
      m += cost[static_cast<size_t>(2 * i + mother[static_cast<size_t>(i)])];
    return m;
  }
};

}  // namespace

ConvCode ConvCode::cc64() {
  ConvCode c;
  c.nu = 6;
  c.gen = {0133, 0171, 0165};
  return c;
}

ConvCode ConvCode::cc1024() {
  ConvCode c;
  c.nu = 10;
  c.gen = {02325, 02731, 03747};
  return c;
}

std::vector<uint8_t> tb_encode(const ConvCode& code, const std::vector<uint8_t>& message) {
  check_message(code, static_cast<int>(message.size()), message.size());
  const int k = static_cast<int>(message.size());
  std::vector<uint8_t> out(static_cast<size_t>(3 * k));
  int s = initial_state(code, message);
  for (int t = 0; t < k; ++t) {
    int u = message[static_cast<size_t>(t)] & 1;
    uint32_t w = (static_cast<uint32_t>(u) << code.nu) | static_cast<uint32_t>(s);
    for (int c = 0; c < 3; ++c)
      out[static_cast<size_t>(3 * t + c)] =
          static_cast<uint8_t>(std::popcount(w & code.gen[static_cast<size_t>(c)]) & 1);
    s = (s >> 1) | (u << (code.nu - 1));
  }
  return out;
}

std::vector<int> rate_match_order(int k, uint64_t seed) {
  if (k < 1) throw std::invalid_argument("rate_match_order: k >= 1 required");
  std::vector<int> order(static_cast<size_t>(3 * k));
  for (int c = 0; c < 3; ++c) {
    std::vector<int> perm(static_cast<size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    RngStream rng(seed, static_cast<uint64_t>(c));
    for (int i = k - 1; i > 0; --i) {
      std::uniform_int_distribution<int> d(0, i);
      std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(d(rng.engine()))]);
    }
    for (int i = 0; i < k; ++i)
      order[static_cast<size_t>(c * k + i)] = 3 * perm[static_cast<size_t>(i)] + c;
  }
  return order;
}

TbDecodeResult tb_ml_decode(const ConvCode& code, int k, const std::vector<double>& cost,
                            const std::vector<uint8_t>* hint) {
  if (k < code.nu) throw std::invalid_argument("tb_ml_decode: k >= nu required");
  Trellis tr(code, k, cost);
  TbDecodeResult res;

  // Fast path: the unconstrained winner, when tail-biting, is the TB-ML
  // decision (no tail-biting path can beat the unconstrained minimum).
  std::vector<double> init(static_cast<size_t>(tr.states), 0.0);
  tr.run(init);
  int e = tr.best_end();
  int start = tr.traceback(e, &res.message);
  if (start == e) {
    res.metric = tr.cur[static_cast<size_t>(e)] + tr.shift;
    return res;
  }

  // Exhaustive per-start search. The incumbent starts at the hint metric when
  // provided; pruning is strict, so equal-metric candidates always survive
  // and the decision matches the unseeded search exactly.
  double incumbent = hint ? tr.message_metric(*hint) : kInf;
  double best_metric = kInf;
  int best_start = -1;
  for (int s0 = 0; s0 < tr.states; ++s0) {
    std::fill(init.begin(), init.end(), kInf);
    init[static_cast<size_t>(s0)] = 0.0;
    if (!tr.run(init, incumbent)) continue;
    double me = tr.cur[static_cast<size_t>(s0)];
    if (me < best_metric) {
      best_metric = me;
      best_start = s0;
      if (me < incumbent) incumbent = me;
    }
  }
  if (best_start < 0)
    throw std::logic_error("tb_ml_decode: search eliminated every start state");
  std::fill(init.begin(), init.end(), kInf);
  init[static_cast<size_t>(best_start)] = 0.0;
  tr.run(init);
  tr.traceback(best_start, &res.message);
  res.metric = best_metric + tr.shift;
  return res;
}

TbDecodeResult wava_decode(const ConvCode& code, int k, const std::vector<double>& cost,
                           int max_wraps) {
  if (k < code.nu) throw std::invalid_argument("wava_decode: k >= nu required");
  if (max_wraps < 1) throw std::invalid_argument("wava_decode: max_wraps >= 1 required");
  Trellis tr(code, k, cost);
  TbDecodeResult res;
  res.exact = false;

  std::vector<double> init(static_cast<size_t>(tr.states), 0.0);
  double best_metric = kInf;
  std::vector<uint8_t> best_msg, msg;
  std::vector<uint8_t> fallback_msg;
  double fallback_metric = 0.0;
  for (int wrap = 1; wrap <= max_wraps; ++wrap) {
    tr.run(init);
    res.wraps_used = wrap;
    int free_end = tr.best_end();
    if (wrap == 1) {
      int start = tr.traceback(free_end, &msg);
      fallback_msg = msg;
      fallback_metric = tr.cur[static_cast<size_t>(free_end)];
      if (start == free_end) {
        // First unconstrained pass closed on itself: exact TB-ML.
        res.message = msg;
        res.metric = tr.cur[static_cast<size_t>(free_end)] + tr.shift;
        res.exact = true;
        return res;
      }
    }
    for (int e2 = 0; e2 < tr.states; ++e2) {
      if (tr.cur[static_cast<size_t>(e2)] - init[static_cast<size_t>(e2)] >= best_metric)
        continue;
      int start = tr.traceback(e2, &msg);
      if (start != e2) continue;
      // Single-cycle metric of this tail-biting survivor: accumulated metric
      // minus the warm-start credit at its start state.
      double m = tr.cur[static_cast<size_t>(e2)] - init[static_cast<size_t>(start)];
      if (m < best_metric) {
        best_metric = m;
        best_msg = msg;
      }
    }
    // Warm-start the next pass from this pass's final metrics.
    double lo = *std::min_element(tr.cur.begin(), tr.cur.end());
    for (int s = 0; s < tr.states; ++s) init[static_cast<size_t>(s)] = tr.cur[static_cast<size_t>(s)] - lo;
  }
  if (!best_msg.empty()) {
    res.message = best_msg;
    res.metric = best_metric + tr.shift;
    return res;
  }
  // No tail-biting survivor in any pass: fall back to the first pass's
  // unconstrained winner.
  res.message = fallback_msg;
  res.metric = fallback_metric + tr.shift;
  res.tb_path = false;
  return res;
}

}  // namespace irntc
