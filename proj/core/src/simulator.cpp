#include "irntc/simulator.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "irntc/rng.hpp"
#include "irntc/trellis.hpp"

namespace irntc {

void SimConfig::validate() const {
  schedule.validate();
  channel.validate();
  if (trials < 1) throw std::invalid_argument("SimConfig: trials >= 1 required");
  if (wava_wraps < 1) throw std::invalid_argument("SimConfig: wava_wraps >= 1 required");
  if (max_rounds < 1) throw std::invalid_argument("SimConfig: max_rounds >= 1 required");
  if (schedule.n.front() < schedule.k)
    throw std::invalid_argument("SimConfig: first attempt needs n1 >= k");
  if (decoder != DecoderKind::IDEAL_BD) {
    ConvCode code = decoder == DecoderKind::CC64_ML ? ConvCode::cc64() : ConvCode::cc1024();
    if (schedule.k < code.nu)
      throw std::invalid_argument("SimConfig: k >= code memory required");
    if (schedule.N() > 3 * schedule.k)
      throw std::invalid_argument("SimConfig: schedule exceeds the mother-code length");
  }
}

namespace {

struct CodeSim {
  const SimConfig& cfg;
  ConvCode code;
  std::vector<int> order;  // transmit position -> mother bit index
  bool awgn;
  double amp;  // BPSK amplitude sqrt(eta)
  std::vector<uint8_t> msg, mother;
  std::vector<double> cost;

  explicit CodeSim(const SimConfig& c)
      : cfg(c),
        code(c.decoder == DecoderKind::CC64_ML ? ConvCode::cc64() : ConvCode::cc1024()),
        order(rate_match_order(c.schedule.k, c.rate_match_seed)),
        awgn(c.channel.kind == ChannelKind::AWGN),
        amp(awgn ? std::sqrt(c.channel.eta) : 0.0) {}

  void new_message(RngStream& rng) {
    const int k = cfg.schedule.k;
    msg.resize(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) msg[static_cast<size_t>(i)] = rng.bernoulli(0.5);
    mother = tb_encode(code, msg);
  }

  // One transmission of the (fixed) codeword over fresh noise. Returns the
  // attempt index (1-based) of the first acknowledgement, 0 when all fail.
  int round(RngStream& rng, SimResult& res) {
    const int k = cfg.schedule.k;
    cost.assign(static_cast<size_t>(6 * k), 0.0);
    int revealed = 0;
    for (int j = 0; j < cfg.schedule.m(); ++j) {
      const int nj = cfg.schedule.n[static_cast<size_t>(j)];
      for (; revealed < nj; ++revealed) {
        int idx = order[static_cast<size_t>(revealed)];
        int b = mother[static_cast<size_t>(idx)];
        if (awgn) {
          double y = (1 - 2 * b) * amp + rng.gaussian();
          // ML branch costs: negative correlation with the BPSK symbol.
          cost[static_cast<size_t>(2 * idx)] = -y * amp;
          cost[static_cast<size_t>(2 * idx + 1)] = y * amp;
        } else {
          int r = b ^ (rng.bernoulli(cfg.channel.p) ? 1 : 0);
          cost[static_cast<size_t>(2 * idx)] = r != 0 ? 1.0 : 0.0;
          cost[static_cast<size_t>(2 * idx + 1)] = r != 1 ? 1.0 : 0.0;
        }
      }
      TbDecodeResult dec;
      if (cfg.decoder == DecoderKind::CC1024_WAVA) {
        dec = wava_decode(code, k, cost, cfg.wava_wraps);
      } else {
        // The true message only seeds the branch-and-bound incumbent; the
        // decision is the exact TB-ML decision either way.
        dec = tb_ml_decode(code, k, cost, &msg);
      }
      if (dec.exact)
        ++res.exact_decodes;
      else
        ++res.heuristic_decodes;
      if (dec.message == msg) return j + 1;
    }
    return 0;
  }
};

struct BallSim {
  const SimConfig& cfg;
  DecodingRadii radii;
  bool awgn;

  explicit BallSim(const SimConfig& c)
      : cfg(c), radii(bd_radii(c.schedule, c.channel)),
        awgn(c.channel.kind == ChannelKind::AWGN) {}

  int round(RngStream& rng, SimResult& res) const {
    ++res.exact_decodes;
    double energy = 0.0;
    int64_t weight = 0;
    int used = 0;
    for (int j = 0; j < cfg.schedule.m(); ++j) {
      const int nj = cfg.schedule.n[static_cast<size_t>(j)];
      for (; used < nj; ++used) {
        if (awgn) {
          double z = rng.gaussian();
          energy += z * z;
        } else {
          weight += rng.bernoulli(cfg.channel.p) ? 1 : 0;
        }
      }
      bool ok = awgn ? energy <= radii.r2[static_cast<size_t>(j)]
                     : weight <= radii.r[static_cast<size_t>(j)].r;
      if (ok) return j + 1;
    }
    return 0;
  }
};

}  // namespace

SimResult simulate_genie(const SimConfig& cfg) {
  cfg.validate();
  SimResult res;
  res.trials = cfg.trials;
  const int m = cfg.schedule.m();
  res.stop_counts.assign(static_cast<size_t>(m), 0);
  res.joint_fail_counts.assign(static_cast<size_t>(m), 0);
  const int N = cfg.schedule.N();
  const bool ball = cfg.decoder == DecoderKind::IDEAL_BD;
  std::optional<CodeSim> code_sim;
  std::optional<BallSim> ball_sim;
  if (ball)
    ball_sim.emplace(cfg);
  else
    code_sim.emplace(cfg);

  double sum = 0.0, sum2 = 0.0;
  int64_t counted_trials = 0;
  for (int64_t trial = 0; trial < cfg.trials; ++trial) {
    RngStream rng(cfg.seed, static_cast<uint64_t>(trial) + 1);
    if (!ball) code_sim->new_message(rng);
    int64_t uses = 0;
    int trial_rounds = 0;
    bool acked = false, outage = false, abort = false;
    while (true) {
      ++res.rounds;
      ++trial_rounds;
      int stop = ball ? ball_sim->round(rng, res) : code_sim->round(rng, res);
      // Joint failure indicators: attempt j failed for all j before the stop.
      for (int j = 0; j + 1 < (stop > 0 ? stop : m + 1) && j < m; ++j)
        ++res.joint_fail_counts[static_cast<size_t>(j)];
      if (stop > 0) {
        uses += cfg.schedule.n[static_cast<size_t>(stop - 1)];
        ++res.stop_counts[static_cast<size_t>(stop - 1)];
        acked = true;
        break;
      }
      uses += N;
      if (cfg.mode == RepeatMode::NON_REPEATING) {
        outage = true;
        break;
      }
      if (trial_rounds >= cfg.max_rounds) {
        abort = true;
        break;
      }
    }
    if (static_cast<size_t>(trial_rounds) > res.rounds_histogram.size())
      res.rounds_histogram.resize(static_cast<size_t>(trial_rounds), 0);
    ++res.rounds_histogram[static_cast<size_t>(trial_rounds - 1)];
    if (abort) {
      ++res.aborted;
      res.aborted_uses += uses;
      continue;
    }
    if (acked) ++res.completed;
    if (outage) ++res.outages;
    res.channel_uses += uses;
    sum += static_cast<double>(uses);
    sum2 += static_cast<double>(uses) * static_cast<double>(uses);
    ++counted_trials;
  }
  // Bookkeeping identity: ell_hat = channel uses / acknowledged messages in
  // the repeated protocol; in the non-repeating protocol every trial spends
  // its symbols, acknowledged or not.
  const int64_t denom =
      cfg.mode == RepeatMode::REPEATED ? res.completed : counted_trials;
  if (denom > 0) {
    res.ell_hat = static_cast<double>(res.channel_uses) / static_cast<double>(denom);
    if (denom > 1) {
      double nd = static_cast<double>(denom);
      double var = (sum2 - sum * sum / nd) / (nd - 1.0);
      res.ell_se = std::sqrt(std::max(0.0, var) / nd);
    }
  }
  res.rate = res.channel_uses > 0
                 ? static_cast<double>(cfg.schedule.k) *
                       static_cast<double>(res.completed) /
                       static_cast<double>(res.channel_uses)
                 : 0.0;
  return res;
}

std::vector<EmpiricalTrajectoryRow> empirical_trajectory(const SimConfig& cfg) {
  SimResult res = simulate_genie(cfg);
  std::vector<EmpiricalTrajectoryRow> rows;
  const double nr = static_cast<double>(res.rounds);
  for (size_t j = 0; j < res.joint_fail_counts.size(); ++j) {
    EmpiricalTrajectoryRow r;
    r.j = static_cast<int>(j + 1);
    r.n_j = cfg.schedule.n[j];
    double f = static_cast<double>(res.joint_fail_counts[j]) / nr;
    r.fail_rate = f;
    r.se = std::sqrt(std::max(0.0, f * (1.0 - f) / nr));
    rows.push_back(r);
  }
  return rows;
}

}  // namespace irntc
