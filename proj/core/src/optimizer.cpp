#include "irntc/optimizer.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "irntc/chernoff.hpp"
#include "irntc/special.hpp"

namespace irntc {

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

// P[zeta at blocklength n] for n in [k, n_cap], marginal BD decoding.
struct FailTable {
  int k = 0;
  int n_cap = 0;
  std::vector<double> f;
  double at(int n) const { return f[static_cast<size_t>(n - k)]; }
};

FailTable build_fail_table(int k, const ChannelSpec& ch, int n_cap) {
  FailTable t;
  t.k = k;
  t.n_cap = n_cap;
  t.f.resize(static_cast<size_t>(n_cap - k + 1));
  if (ch.kind == ChannelKind::AWGN) {
    for (int n = k; n <= n_cap; ++n)
      t.f[static_cast<size_t>(n - k)] =
          chi_square_tail(n, awgn_decoding_radius2(n, k, ch.eta));
    return t;
  }
  // BSC: advance the exact decoding radius incrementally. With
  // cum = sum_{t<=r} C(n,t), term = C(n,r) and target = 2^(n-k):
  //   cum(n+1, r) = 2 cum(n, r) - C(n, r),
  //   C(n+1, r)   = C(n, r) (n+1) / (n+1-r),
  // so each blocklength step costs O(1) big-integer operations plus the
  // (rare) radius adjustments.
  int n = k;
  int64_t r = bsc_hamming_radius(n, k).r;
  mpz_class term, cum = 0, target = 1;
  mpz_bin_uiui(term.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(r));
  mpz_class tt = 1;  // C(n, t) running over t
  for (int64_t tr = 0; tr <= r; ++tr) {
    if (tr > 0) {
      tt *= n - tr + 1;
      mpz_divexact_ui(tt.get_mpz_t(), tt.get_mpz_t(), static_cast<unsigned long>(tr));
    }
    cum += tt;
  }
  mpz_mul_2exp(target.get_mpz_t(), target.get_mpz_t(), static_cast<mp_bitcnt_t>(n - k));
  t.f[0] = binomial_tail(n, r, ch.p);
  while (n < n_cap) {
    cum *= 2;
    cum -= term;
    term *= n + 1;
    mpz_divexact_ui(term.get_mpz_t(), term.get_mpz_t(),
                    static_cast<unsigned long>(n + 1 - r));
    target *= 2;
    ++n;
    while (cum < target && r < n) {
      ++r;
      term *= n - r + 1;
      mpz_divexact_ui(term.get_mpz_t(), term.get_mpz_t(),
                      static_cast<unsigned long>(r));
      cum += term;
    }
    // The smallest sufficient radius almost always grows with n; handle the
    // opposite direction too so the invariant never depends on monotonicity.
    while (r > 0 && cum - term >= target) {
      cum -= term;
      term *= r;
      mpz_divexact_ui(term.get_mpz_t(), term.get_mpz_t(),
                      static_cast<unsigned long>(n - r + 1));
      --r;
    }
    t.f[static_cast<size_t>(n - k)] = binomial_tail(n, r, ch.p);
  }
  return t;
}

constexpr double kBadEll = std::numeric_limits<double>::infinity();

// Marginal-substituted expected latency of the repeated scheme with
// cumulative attempt lengths ns; infinite when restarts almost surely loop.
double marginal_ell_repeated(const FailTable& t, const std::vector<int>& ns) {
  double num = ns[0];
  for (size_t j = 1; j < ns.size(); ++j)
    num += (ns[j] - ns[j - 1]) * t.at(ns[j - 1]);
  double qm = t.at(ns.back());
  if (!(qm < 1.0)) return kBadEll;
  return num / (1.0 - qm);
}

double marginal_ell_nonrepeating(const FailTable& t, const std::vector<int>& ns) {
  double num = ns[0];
  for (size_t j = 1; j < ns.size(); ++j)
    num += (ns[j] - ns[j - 1]) * t.at(ns[j - 1]);
  return num;
}

// Candidate ordering: higher throughput first (1e-9 tolerance), then the
// shorter final blocklength, then lexicographically smaller schedule.
bool better_candidate(int k, double ell_a, const std::vector<int>& na, double ell_b,
                      const std::vector<int>& nb) {
  if (ell_b == kBadEll) return ell_a != kBadEll;
  if (ell_a == kBadEll) return false;
  double ra = k / ell_a, rb = k / ell_b;
  if (std::abs(ra - rb) > 1e-9) return ra > rb;
  if (na.back() != nb.back()) return na.back() < nb.back();
  return na < nb;
}

void sort_frontier(std::vector<PerformancePoint>& f) {
  std::sort(f.begin(), f.end(), [](const PerformancePoint& a, const PerformancePoint& b) {
    return a.ell < b.ell;
  });
}

OptimizationResult finish_marginal(const IncrementSchedule& s, const ChannelSpec& ch,
                                   RepeatMode mode) {
  OptimizationResult res;
  res.schedule = s;
  res.profile = marginal_profile_bd(s, ch);
  res.point = expected_latency(res.profile, mode);
  res.mode = mode;
  return res;
}

ErrorProfile joint_profile_retry(const IncrementSchedule& s, const ChannelSpec& ch,
                                 double tol) {
  // The adaptive quadrature refuses to return an uncertified value; relax the
  // target a decade at a time rather than fail the whole search.
  for (int attempt = 0; attempt < 3; ++attempt) {
    try {
      return joint_profile_bd(s, ch, tol);
    } catch (const std::runtime_error&) {
      tol *= 10.0;
    }
  }
  return joint_profile_bd(s, ch, tol);
}

// Structured increment grid for the free-increment searches: fractions of k,
// de-duplicated, ascending.
std::vector<int> increment_grid(int k, int cap) {
  static const double fr[] = {0.04,   0.06, 0.08,  0.10, 0.125, 0.15, 0.1875, 0.22,
                              0.25,   0.28, 0.3125, 0.375, 0.45, 0.5,  0.625,  0.75,
                              1.0};
  std::vector<int> s;
  for (double f : fr) {
    int v = static_cast<int>(std::llround(f * k));
    if (v >= 1 && v <= cap) s.push_back(v);
  }
  for (int v : {1, 2, 3, 4}) {
    if (v <= cap) s.push_back(v);
  }
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

struct GridCandidate {
  double score = 0.0;  // ell for latency searches, -delivered for outage
  std::vector<int> ns;
};

bool grid_less(const GridCandidate& a, const GridCandidate& b) {
  if (a.score != b.score) return a.score < b.score;
  if (a.ns.back() != b.ns.back()) return a.ns.back() < b.ns.back();
  return a.ns < b.ns;
}

// Bounded sorted pool of the best candidates seen so far.
struct TopPool {
  size_t cap;
  std::vector<GridCandidate> v;
  explicit TopPool(size_t c) : cap(c) {}
  void offer(double score, const std::vector<int>& ns) {
    GridCandidate c{score, ns};
    auto it = std::lower_bound(v.begin(), v.end(), c, grid_less);
    if (it == v.end() && v.size() >= cap) return;
    v.insert(it, std::move(c));
    if (v.size() > cap) v.pop_back();
  }
};

}  // namespace

int SearchSpec::n_cap() const {
  double c = channel.capacity_bits();
  return static_cast<int>(std::ceil(6.0 * k / c));
}

void SearchSpec::validate() const {
  if (k < 1) throw std::invalid_argument("SearchSpec: k >= 1 required");
  if (m < 0) throw std::invalid_argument("SearchSpec: m >= 0 required");
  if (!(p_outage > 0.0) || p_outage > 1.0)
    throw std::invalid_argument("SearchSpec: p_outage in (0, 1] required");
  if (ell_max < 0.0) throw std::invalid_argument("SearchSpec: ell_max >= 0 required");
  if (!(joint_tol > 0.0)) throw std::invalid_argument("SearchSpec: joint_tol > 0 required");
  channel.validate();
  if (m >= 2 && k + m - 1 > n_cap())
    throw std::invalid_argument(
        "SearchSpec: m attempts cannot fit between n1 = k and the blocklength cap");
}

OptimizationResult optimize_arq(int k, const ChannelSpec& ch) {
  if (k < 1) throw std::invalid_argument("optimize_arq: k >= 1 required");
  ch.validate();
  Timer timer;
  SearchSpec spec;
  spec.k = k;
  spec.channel = ch;
  const int cap = spec.n_cap();
  FailTable table = build_fail_table(k, ch, cap);
  int64_t evals = 0;
  auto ell = [&](int n1) {
    ++evals;
    double q = table.at(n1);
    return q < 1.0 ? n1 / (1.0 - q) : kBadEll;
  };

  // Integer ternary search (ell is unimodal in n1 up to flat stretches).
  int lo = k, hi = cap;
  while (hi - lo > 2) {
    int m1 = lo + (hi - lo) / 3;
    int m2 = hi - (hi - lo) / 3;
    if (ell(m1) <= ell(m2))
      hi = m2;
    else
      lo = m1;
  }
  int best = lo;
  double best_ell = ell(lo);
  for (int n1 = lo + 1; n1 <= hi; ++n1) {
    double e = ell(n1);
    if (e < best_ell) {
      best_ell = e;
      best = n1;
    }
  }
  // Verification sweep around the ternary optimum; a strict improvement
  // means the unimodality shortcut missed, so fall back to the full scan.
  int swept = best;
  double swept_ell = best_ell;
  for (int n1 = std::max(k, best - 5); n1 <= std::min(cap, best + 5); ++n1) {
    double e = ell(n1);
    if (e < swept_ell) {
      swept_ell = e;
      swept = n1;
    }
  }
  if (swept != best) {
    for (int n1 = k; n1 <= cap; ++n1) {
      double e = ell(n1);
      if (e < swept_ell) {
        swept_ell = e;
        swept = n1;
      }
    }
  }
  best = swept;

  IncrementSchedule s;
  s.k = k;
  s.n = {best};
  OptimizationResult res;
  res.schedule = s;
  res.profile = marginal_profile_bd(s, ch);
  res.point = arq_throughput(k, best, ch);
  res.mode = RepeatMode::REPEATED;
  res.evaluations = evals;
  res.boundary_hit = (best == cap);
  const int stride = std::max(1, (cap - k) / 256);
  for (int n1 = k; n1 <= cap; n1 += stride) {
    double e = ell(n1);
    if (e == kBadEll) continue;
    res.frontier.push_back({e, k / e, 0.0});
  }
  sort_frontier(res.frontier);
  res.wall_seconds = timer.seconds();
  return res;
}

OptimizationResult optimize_uniform(const SearchSpec& spec) {
  spec.validate();
  const int k = spec.k;
  const ChannelSpec& ch = spec.channel;
  Timer timer;
  if (spec.m == 1) {
    OptimizationResult res = optimize_arq(k, ch);
    if (spec.ell_max > 0.0 && res.point.ell > spec.ell_max) res.feasible = false;
    res.wall_seconds = timer.seconds();
    return res;
  }
  const int cap = spec.n_cap();
  FailTable table = build_fail_table(k, ch, cap);
  int64_t evals = 0;

  double best_ell = kBadEll;
  std::vector<int> best_ns;
  int best_I = 0;
  std::vector<int> ns;
  std::vector<double> n1_best(static_cast<size_t>(cap - k + 1), kBadEll);
  for (int n1 = k; n1 <= cap; ++n1) {
    double& row_best = n1_best[static_cast<size_t>(n1 - k)];
    const int imax = spec.m >= 2 ? (cap - n1) / (spec.m - 1) : cap - n1;
    for (int I = 1; I <= imax; ++I) {
      int m_eff = spec.m >= 2 ? spec.m : 1 + (cap - n1) / I;
      ns.resize(static_cast<size_t>(m_eff));
      for (int j = 0; j < m_eff; ++j) ns[static_cast<size_t>(j)] = n1 + j * I;
      ++evals;
      double e = marginal_ell_repeated(table, ns);
      if (e < row_best) row_best = e;
      if (better_candidate(k, e, ns, best_ell, best_ns)) {
        best_ell = e;
        best_ns = ns;
        best_I = I;
      }
    }
    if (spec.m == 0 && n1 < cap) {
      // as-many-as-fit also admits the single-attempt schedule
      ns.assign(1, n1);
      ++evals;
      double e = marginal_ell_repeated(table, ns);
      if (e < row_best) row_best = e;
      if (better_candidate(k, e, ns, best_ell, best_ns)) {
        best_ell = e;
        best_ns = ns;
        best_I = 0;
      }
    }
  }
  if (best_ns.empty())
    throw std::runtime_error("optimize_uniform: no schedule fits under the cap");

  IncrementSchedule s;
  s.k = k;
  s.n = best_ns;
  OptimizationResult res = finish_marginal(s, ch, RepeatMode::REPEATED);
  res.evaluations = evals;
  res.boundary_hit = best_ns.back() + std::max(1, best_I) > cap;
  const int stride = std::max(1, (cap - k) / 512);
  for (int n1 = k; n1 <= cap; n1 += stride) {
    double e = n1_best[static_cast<size_t>(n1 - k)];
    if (e == kBadEll) continue;
    res.frontier.push_back({e, k / e, 0.0});
  }
  sort_frontier(res.frontier);
  if (spec.ell_max > 0.0 && res.point.ell > spec.ell_max) res.feasible = false;
  res.wall_seconds = timer.seconds();
  return res;
}

namespace {

// Enumerate increment vectors (I_2..I_m from the grid) for every first length
// in `first_lengths`, offering each schedule's marginal score to the pool.
template <typename Score>
int64_t enumerate_grid(const std::vector<int>& first_lengths,
                       const std::vector<int>& grid, int m, int cap, TopPool& pool,
                       const Score& score) {
  int64_t evals = 0;
  std::vector<int> ns(static_cast<size_t>(m));
  const int gmin = grid.front();
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == m) {
      ++evals;
      pool.offer(score(ns), ns);
      return;
    }
    const int remaining = m - 1 - pos;  // increments still to place after this one
    for (int g : grid) {
      int next = ns[static_cast<size_t>(pos - 1)] + g;
      if (next + remaining * gmin > cap) break;  // grid is ascending
      ns[static_cast<size_t>(pos)] = next;
      self(self, pos + 1);
    }
  };
  for (int n1 : first_lengths) {
    ns[0] = n1;
    rec(rec, 1);
  }
  return evals;
}

}  // namespace

OptimizationResult optimize_nonuniform(const SearchSpec& spec) {
  spec.validate();
  if (spec.channel.kind != ChannelKind::AWGN)
    throw std::invalid_argument(
        "optimize_nonuniform: joint refinement requires the AWGN channel");
  if (spec.m == 1) return optimize_arq(spec.k, spec.channel);
  if (spec.m < 2 || spec.m > 6)
    throw std::invalid_argument("optimize_nonuniform: m in [2, 6] required");
  const int k = spec.k;
  const ChannelSpec& ch = spec.channel;
  const int m = spec.m;
  Timer timer;
  const int cap = spec.n_cap();
  FailTable table = build_fail_table(k, ch, cap);
  int64_t evals = 0;

  // Center the first-length window on the uniform optimum.
  SearchSpec uspec = spec;
  uspec.uniform = true;
  uspec.ell_max = 0.0;
  OptimizationResult uni = optimize_uniform(uspec);
  evals += uni.evaluations;
  const int c = uni.schedule.n.front();
  std::vector<int> first_lengths;
  {
    int lo = std::max(k, static_cast<int>(std::llround(0.70 * c)));
    int hi = std::min(cap - (m - 1), static_cast<int>(std::llround(1.30 * c)));
    int step = std::max(1, (hi - lo) / 44);
    for (int n1 = lo; n1 <= hi; n1 += step) first_lengths.push_back(n1);
  }
  std::vector<int> grid = increment_grid(k, cap);

  TopPool pool(60);
  auto score = [&](const std::vector<int>& ns) {
    return marginal_ell_repeated(table, ns);
  };
  evals += enumerate_grid(first_lengths, grid, m, cap, pool, score);

  // Local neighborhood of the marginal leaders (off-grid increments).
  {
    std::vector<GridCandidate> leaders(pool.v.begin(),
                                       pool.v.begin() + std::min<size_t>(10, pool.v.size()));
    std::vector<int> inc(static_cast<size_t>(m));
    for (const auto& lead : leaders) {
      for (int j = 0; j < m; ++j)
        inc[static_cast<size_t>(j)] =
            j == 0 ? lead.ns[0] : lead.ns[static_cast<size_t>(j)] -
                                      lead.ns[static_cast<size_t>(j - 1)];
      for (int coord = 0; coord < m; ++coord) {
        for (int d : {-2, -1, 1, 2}) {
          std::vector<int> inc2 = inc;
          inc2[static_cast<size_t>(coord)] += d;
          if (inc2[static_cast<size_t>(coord)] < 1) continue;
          std::vector<int> ns2(static_cast<size_t>(m));
          int run = 0;
          for (int j = 0; j < m; ++j) {
            run += inc2[static_cast<size_t>(j)];
            ns2[static_cast<size_t>(j)] = run;
          }
          if (ns2[0] < k || ns2.back() > cap) continue;
          ++evals;
          pool.offer(score(ns2), ns2);
        }
      }
    }
  }

  // Joint refinement: coarse pass over the pool, fine pass over the leaders.
  struct Ranked {
    double ell;
    std::vector<int> ns;
  };
  std::vector<Ranked> coarse;
  std::vector<PerformancePoint> frontier;
  for (const auto& cand : pool.v) {
    if (cand.score == kBadEll) continue;
    IncrementSchedule s;
    s.k = k;
    s.n = cand.ns;
    ErrorProfile prof = joint_profile_retry(s, ch, 1e-4);
    ++evals;
    PerformancePoint pt = expected_latency(prof, RepeatMode::REPEATED);
    coarse.push_back({pt.ell, cand.ns});
    frontier.push_back(pt);
  }
  if (coarse.empty())
    throw std::runtime_error("optimize_nonuniform: no feasible schedule found");
  std::sort(coarse.begin(), coarse.end(), [](const Ranked& a, const Ranked& b) {
    if (a.ell != b.ell) return a.ell < b.ell;
    if (a.ns.back() != b.ns.back()) return a.ns.back() < b.ns.back();
    return a.ns < b.ns;
  });

  double best_ell = kBadEll;
  std::vector<int> best_ns;
  ErrorProfile best_prof;
  for (size_t i = 0; i < coarse.size() && i < 6; ++i) {
    IncrementSchedule s;
    s.k = k;
    s.n = coarse[i].ns;
    ErrorProfile prof = joint_profile_retry(s, ch, spec.joint_tol);
    ++evals;
    PerformancePoint pt = expected_latency(prof, RepeatMode::REPEATED);
    if (better_candidate(k, pt.ell, coarse[i].ns, best_ell, best_ns)) {
      best_ell = pt.ell;
      best_ns = coarse[i].ns;
      best_prof = prof;
    }
  }

  IncrementSchedule s;
  s.k = k;
  s.n = best_ns;
  OptimizationResult res;
  res.schedule = s;
  res.profile = best_prof;
  res.point = expected_latency(best_prof, RepeatMode::REPEATED);
  res.mode = RepeatMode::REPEATED;
  res.evaluations = evals;
  std::vector<int> inc = s.increments();
  res.boundary_hit = best_ns.back() + inc.back() > cap ||
                     best_ns.front() <= first_lengths.front() ||
                     best_ns.front() >= first_lengths.back();
  if (spec.ell_max > 0.0 && res.point.ell > spec.ell_max) res.feasible = false;
  res.frontier = std::move(frontier);
  sort_frontier(res.frontier);
  res.wall_seconds = timer.seconds();
  return res;
}

OptimizationResult optimize_outage(const SearchSpec& spec) {
  spec.validate();
  if (spec.channel.kind != ChannelKind::AWGN)
    throw std::invalid_argument(
        "optimize_outage: certified outage bounds require the AWGN channel");
  const int k = spec.k;
  const ChannelSpec& ch = spec.channel;
  const double p = spec.p_outage;
  Timer timer;
  const int cap = spec.n_cap();
  FailTable table = build_fail_table(k, ch, cap);
  int64_t evals = 0;

  if (spec.m == 1) {
    // Single attempt: the marginal is exact, scan n1 directly.
    int best = -1;
    double best_d = -1.0;
    std::vector<PerformancePoint> frontier;
    const int stride = std::max(1, (cap - k) / 256);
    for (int n1 = k; n1 <= cap; ++n1) {
      ++evals;
      double q = table.at(n1);
      if (q > p) continue;
      double d = k * (1.0 - q) / n1;
      if ((n1 - k) % stride == 0) frontier.push_back({static_cast<double>(n1), d, q});
      if (d > best_d) {
        best_d = d;
        best = n1;
      }
    }
    OptimizationResult res;
    res.frontier = std::move(frontier);
    res.mode = RepeatMode::NON_REPEATING;
    res.evaluations = evals;
    res.feasible = best >= 0;
    if (best < 0) {
      // closest to feasibility: smallest achievable outage
      best = cap;
    }
    IncrementSchedule s;
    s.k = k;
    s.n = {best};
    res.schedule = s;
    res.profile = marginal_profile_bd(s, ch);
    res.point = expected_latency(res.profile, RepeatMode::NON_REPEATING);
    res.boundary_hit = best == cap;
    res.wall_seconds = timer.seconds();
    return res;
  }
  if (spec.m < 2 || spec.m > 6)
    throw std::invalid_argument("optimize_outage: m in [1, 6] required");
  const int m = spec.m;

  // First-length window from the uniform repeated optimum (same cost scale).
  SearchSpec uspec = spec;
  uspec.uniform = true;
  uspec.ell_max = 0.0;
  uspec.p_outage = 1.0;
  OptimizationResult uni = optimize_uniform(uspec);
  evals += uni.evaluations;
  const int c = uni.schedule.n.front();
  std::vector<int> first_lengths;
  {
    int lo = std::max(k, static_cast<int>(std::llround(0.70 * c)));
    int hi = std::min(cap - (m - 1), static_cast<int>(std::llround(1.45 * c)));
    int step = std::max(1, (hi - lo) / 54);
    for (int n1 = lo; n1 <= hi; n1 += step) first_lengths.push_back(n1);
  }
  std::vector<int> grid = increment_grid(k, cap);

  // Prescreen on the marginal substitution: maximize delivered throughput
  // k (1 - q_m) / ell; only candidates whose marginal outage is within two
  // orders of the cap can possibly certify below it.
  const double marg_cap = std::min(1.0, 100.0 * p);
  TopPool pool(200);
  auto score = [&](const std::vector<int>& ns) {
    double qm = table.at(ns.back());
    if (qm > marg_cap) return kBadEll;
    double e = marginal_ell_nonrepeating(table, ns);
    return -(k * (1.0 - qm) / e);  // pool keeps the smallest scores
  };
  evals += enumerate_grid(first_lengths, grid, m, cap, pool, score);
  // A second pass keeps only schedules whose last marginal already meets the
  // cap (they certify unconditionally); otherwise high-throughput candidates
  // that can never certify can crowd the pool and hide every feasible one.
  std::vector<GridCandidate> candidates = pool.v;
  if (p < 1.0) {
    TopPool strict(60);
    auto score_strict = [&](const std::vector<int>& ns) {
      double qm = table.at(ns.back());
      if (qm > p) return kBadEll;
      double e = marginal_ell_nonrepeating(table, ns);
      return -(k * (1.0 - qm) / e);
    };
    evals += enumerate_grid(first_lengths, grid, m, cap, strict, score_strict);
    candidates.insert(candidates.end(), strict.v.begin(), strict.v.end());
    std::sort(candidates.begin(), candidates.end(), grid_less);
    candidates.erase(std::unique(candidates.begin(), candidates.end(),
                                 [](const GridCandidate& a, const GridCandidate& b) {
                                   return a.ns == b.ns;
                                 }),
                     candidates.end());
  }

  struct Certified {
    double delivered;
    double ub;
    std::vector<int> ns;
  };
  std::vector<Certified> certified;
  std::vector<Certified> all;  // for the infeasible fallback
  std::vector<PerformancePoint> res_frontier;
  for (const auto& cand : candidates) {
    if (cand.score == kBadEll) continue;
    IncrementSchedule s;
    s.k = k;
    s.n = cand.ns;
    double ub = joint_ub_recursive(s, ch).back();
    ++evals;
    double e = marginal_ell_nonrepeating(table, cand.ns);
    Certified cert{k * (1.0 - ub) / e, ub, cand.ns};
    all.push_back(cert);
    if (ub <= p) {
      certified.push_back(cert);
      res_frontier.push_back({e, cert.delivered, ub});
    }
  }

  OptimizationResult res;
  res.mode = RepeatMode::NON_REPEATING;
  bool feasible = !certified.empty();
  if (!feasible) {
    if (all.empty())
      throw std::runtime_error("optimize_outage: no candidate schedule under the cap");
    // Report the nearest miss so the caller can see how far the cap is.
    std::sort(all.begin(), all.end(), [](const Certified& a, const Certified& b) {
      if (a.ub != b.ub) return a.ub < b.ub;
      return a.ns < b.ns;
    });
    certified.push_back(all.front());
  }

  std::sort(certified.begin(), certified.end(),
            [](const Certified& a, const Certified& b) {
              if (a.delivered != b.delivered) return a.delivered > b.delivered;
              if (a.ns.back() != b.ns.back()) return a.ns.back() < b.ns.back();
              return a.ns < b.ns;
            });

  // Joint refinement of the leaders; the certified bound stays authoritative
  // for the outage, the quadrature only sharpens the latency weights.
  double best_obj = -1.0;
  std::vector<int> best_ns;
  ErrorProfile best_prof;
  double best_ub = 1.0;
  for (size_t i = 0; i < certified.size() && i < 6; ++i) {
    IncrementSchedule s;
    s.k = k;
    s.n = certified[i].ns;
    ErrorProfile prof = joint_profile_retry(s, ch, spec.joint_tol);
    ++evals;
    PerformancePoint pt = expected_latency(prof, RepeatMode::NON_REPEATING);
    double obj = k * (1.0 - certified[i].ub) / pt.ell;
    bool take = obj > best_obj + 1e-12 ||
                (std::abs(obj - best_obj) <= 1e-12 &&
                 (best_ns.empty() || certified[i].ns < best_ns));
    if (take) {
      best_obj = obj;
      best_ns = certified[i].ns;
      best_prof = prof;
      best_ub = certified[i].ub;
    }
  }

  IncrementSchedule s;
  s.k = k;
  s.n = best_ns;
  res.schedule = s;
  res.profile = best_prof;
  res.point = expected_latency(best_prof, RepeatMode::NON_REPEATING);
  // Report the certified bound, not the quadrature estimate, as the outage.
  res.point.outage = best_ub;
  res.evaluations = evals;
  res.feasible = feasible;
  if (spec.ell_max > 0.0 && res.point.ell > spec.ell_max) res.feasible = false;
  std::vector<int> inc = s.increments();
  res.boundary_hit = best_ns.back() + inc.back() > cap ||
                     best_ns.front() <= first_lengths.front() ||
                     best_ns.front() >= first_lengths.back();
  res.frontier = std::move(res_frontier);
  sort_frontier(res.frontier);
  res.wall_seconds = timer.seconds();
  return res;
}

std::vector<SweepRow> sweep_snr(const std::vector<double>& snr_db_grid,
                                const std::vector<int>& m_list, double ell_max) {
  if (!(ell_max > 0.0)) throw std::invalid_argument("sweep_snr: ell_max > 0 required");
  std::vector<SweepRow> rows;
  for (double snr_db : snr_db_grid) {
    ChannelSpec ch = ChannelSpec::awgn_db(snr_db);
    const double cbits = ch.capacity_bits();
    for (int m : m_list) {
      auto solve = [&](int k) -> OptimizationResult {
        if (m == 1) return optimize_arq(k, ch);
        SearchSpec spec;
        spec.k = k;
        spec.m = m;
        spec.channel = ch;
        spec.uniform = true;
        return optimize_uniform(spec);
      };
      auto fits_cap = [&](int k) {
        // m attempts need n1 = k, ..., k + (m-1) under the blocklength cap.
        SearchSpec probe;
        probe.k = k;
        probe.m = m;
        probe.channel = ch;
        return m < 2 || k + m - 1 <= probe.n_cap();
      };
      auto feasible = [&](int k) { return fits_cap(k) && solve(k).point.ell <= ell_max; };
      // The cap scales with k, so the smallest admissible k can exceed 1.
      int k_hi = std::max(2, static_cast<int>(std::ceil(cbits * ell_max)) + 4);
      int k_fit = 1;
      while (!fits_cap(k_fit) && k_fit < k_hi) ++k_fit;
      int lo = k_fit, hi = k_hi;  // invariant target: lo feasible, hi infeasible
      if (!feasible(k_fit)) {
        rows.push_back({snr_db, m, 0, 0, 0, 0.0, 0.0, cbits, cbits});
        continue;
      }
      while (feasible(hi)) hi += std::max(4, hi / 2);
      while (hi - lo > 1) {
        int mid = lo + (hi - lo) / 2;
        if (feasible(mid))
          lo = mid;
        else
          hi = mid;
      }
      // Feasibility in k is monotone in practice; confirm locally.
      while (feasible(lo + 1)) ++lo;
      OptimizationResult best = solve(lo);
      SweepRow row;
      row.snr_db = snr_db;
      row.m = m;
      row.k = lo;
      row.n1 = best.schedule.n.front();
      std::vector<int> inc = best.schedule.increments();
      row.I = inc.size() > 1 ? inc[1] : 0;
      row.ell = best.point.ell;
      row.rate = best.point.rate;
      row.capacity = cbits;
      row.gap = cbits - best.point.rate;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<TrajectoryRow> error_trajectory(const OptimizationResult& res) {
  const ErrorProfile& prof = res.profile;
  const std::vector<double>& stop = prof.stop_probs();
  std::vector<TrajectoryRow> rows;
  rows.reserve(stop.size());
  for (size_t j = 0; j < stop.size(); ++j) {
    TrajectoryRow r;
    r.j = static_cast<int>(j + 1);
    r.n_j = prof.schedule.n[j];
    r.error_prob = stop[j];
    r.marginal = prof.marginal[j];
    rows.push_back(r);
  }
  return rows;
}

}  // namespace irntc
