// Acceptance gate: one verdict line per criterion, nonzero exit on failure.
// Run with --list to enumerate criteria, --only SUBSTR to run a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "irntc/channel.hpp"
#include "irntc/chernoff.hpp"
#include "irntc/io.hpp"
#include "irntc/optimizer.hpp"
#include "irntc/rcsp.hpp"
#include "irntc/rcu.hpp"
#include "irntc/recipe.hpp"
#include "irntc/schedule.hpp"
#include "irntc/simulator.hpp"
#include "irntc/special.hpp"
#include "oracles/mpfr_gamma.hpp"

using namespace irntc;

namespace {

struct Gate {
  bool ok = true;
  std::vector<std::string> notes;
  void require(bool cond, const std::string& what) {
    if (!cond) ok = false;
    notes.push_back(std::string(cond ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { notes.push_back("     " + what); }
};

std::string fmt(double v, int prec = 6) {
  std::ostringstream ss;
  ss << std::setprecision(prec) << v;
  return ss.str();
}

const ChannelSpec kBsc = ChannelSpec::bsc(0.0789);
const ChannelSpec kAwgn = ChannelSpec::awgn_db(2.0);

// Rate of a piecewise-linear (ell, rate) curve at a given ell.
double curve_rate_at(std::vector<std::pair<double, double>> curve, double ell) {
  std::sort(curve.begin(), curve.end());
  size_t i = 0;
  while (i + 2 < curve.size() && curve[i + 1].first < ell) ++i;
  double x0 = curve[i].first, y0 = curve[i].second;
  double x1 = curve[i + 1].first, y1 = curve[i + 1].second;
  return y0 + (y1 - y0) * (ell - x0) / (x1 - x0);
}

// Fixed pool of randomized AWGN schedules shared by the sandwich and radius
// criteria: k in [16, 256], 2..6 attempts, first rate between C/1.35 and 1.
std::vector<IncrementSchedule> random_schedules(size_t count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double cap = kAwgn.capacity_bits();
  std::vector<IncrementSchedule> out;
  while (out.size() < count) {
    int k = std::uniform_int_distribution<int>(16, 256)(rng);
    int m = std::uniform_int_distribution<int>(2, 6)(rng);
    int n1_hi = static_cast<int>(std::ceil(1.35 * k / cap));
    int n1 = std::uniform_int_distribution<int>(k, std::max(k, n1_hi))(rng);
    std::vector<int> inc{n1};
    int imax = std::max(2, k / 6);
    for (int j = 1; j < m; ++j)
      inc.push_back(std::uniform_int_distribution<int>(1, imax)(rng));
    out.push_back(IncrementSchedule::from_increments(k, inc));
  }
  return out;
}

// Monte-Carlo joint failure probabilities for the chi-square chain implied by
// an AWGN schedule, with early exit at the first acknowledged attempt.
std::vector<double> mc_chain_joint(const IncrementSchedule& s,
                                   const std::vector<double>& r2, int64_t samples,
                                   uint64_t seed) {
  const size_t m = s.n.size();
  std::vector<std::gamma_distribution<double>> inc;
  int prev = 0;
  for (size_t j = 0; j < m; ++j) {
    inc.emplace_back(0.5 * (s.n[j] - prev), 2.0);
    prev = s.n[j];
  }
  std::vector<int64_t> cnt(m, 0);
  std::mt19937_64 rng(seed);
  for (int64_t t = 0; t < samples; ++t) {
    double sum = 0.0;
    for (size_t j = 0; j < m; ++j) {
      sum += inc[j](rng);
      if (sum <= r2[j]) break;
      ++cnt[j];
    }
  }
  std::vector<double> est(m);
  for (size_t j = 0; j < m; ++j)
    est[j] = static_cast<double>(cnt[j]) / static_cast<double>(samples);
  return est;
}

void crit_capacity(Gate& g) {
  double cb = kBsc.capacity_bits();
  double ca = kAwgn.capacity_bits();
  g.require(std::abs(cb - 0.6017) <= 1e-4,
            "BSC p=0.0789 capacity " + fmt(cb, 10) + " = 0.6017 +- 1e-4");
  g.require(std::abs(ca - 0.6851) <= 1e-4,
            "AWGN 2 dB capacity " + fmt(ca, 10) + " = 0.6851 +- 1e-4");
}

void crit_arq(Gate& g) {
  const std::vector<int> ks = {16, 32, 64, 128, 256};
  const std::vector<int> n1s = {31, 60, 116, 222, 429};
  const std::vector<double> rcs = {0.516, 0.533, 0.552, 0.577, 0.597};
  for (size_t i = 0; i < ks.size(); ++i) {
    OptimizationResult r = optimize_arq(ks[i], kAwgn);
    int n1 = r.schedule.n.front();
    double rc = static_cast<double>(ks[i]) / n1;  // code rate of the attempt
    bool pass = n1 == n1s[i] && std::abs(rc - rcs[i]) <= 1e-3;
    g.require(pass, "k=" + std::to_string(ks[i]) + ": n1=" + std::to_string(n1) +
                        " (want " + std::to_string(n1s[i]) + "), R_c=" + fmt(rc) +
                        " (want " + fmt(rcs[i]) + " +- 1e-3), R_t=" +
                        fmt(r.point.rate));
  }
}

void crit_joint_eval(Gate& g) {
  const std::vector<double> want = {0.6019, 0.6208, 0.6363, 0.6494, 0.6593};
  std::vector<IncrementSchedule> sched = benchmark_schedules_awgn2db();
  for (size_t i = 0; i < sched.size(); ++i) {
    ErrorProfile prof = joint_profile_bd(sched[i], kAwgn, 1e-7);
    PerformancePoint pt = expected_latency(prof, RepeatMode::REPEATED);
    g.require(std::abs(pt.rate - want[i]) <= 1e-3,
              "k=" + std::to_string(sched[i].k) + ": R_t=" + fmt(pt.rate, 8) +
                  " (want " + fmt(want[i]) + " +- 1e-3), ell=" + fmt(pt.ell, 8));
  }
}

void crit_uniform_eval(Gate& g) {
  struct Row {
    int k, n1, I;
    double rt;
  };
  const std::vector<Row> rows = {{16, 17, 6, 0.5944},
                                 {32, 39, 8, 0.6164},
                                 {64, 83, 12, 0.6341},
                                 {128, 172, 18, 0.6475},
                                 {256, 353, 26, 0.6576}};
  for (const Row& r : rows) {
    IncrementSchedule s = IncrementSchedule::uniform(r.k, r.n1, r.I, 5);
    PerformancePoint pt =
        expected_latency(marginal_profile_bd(s, kAwgn), RepeatMode::REPEATED);
    g.require(std::abs(pt.rate - r.rt) <= 1e-3,
              "k=" + std::to_string(r.k) + " (n1=" + std::to_string(r.n1) +
                  ",I=" + std::to_string(r.I) + "): R_t=" + fmt(pt.rate, 8) +
                  " (want " + fmt(r.rt) + " +- 1e-3)");
  }
  for (const Row& r : rows) {
    SearchSpec spec;
    spec.k = r.k;
    spec.m = 5;
    spec.channel = kAwgn;
    spec.uniform = true;
    OptimizationResult opt = optimize_uniform(spec);
    g.require(opt.point.rate >= r.rt - 1e-3,
              "k=" + std::to_string(r.k) + ": search R_t=" + fmt(opt.point.rate, 8) +
                  " >= " + fmt(r.rt) + " - 1e-3 at (n1=" +
                  std::to_string(opt.schedule.n.front()) + ",I=" +
                  std::to_string(opt.schedule.m() > 1
                                     ? opt.schedule.n[1] - opt.schedule.n[0]
                                     : 0) +
                  ")");
  }
}

void crit_k64_anchor(Gate& g) {
  SearchSpec spec;
  spec.k = 64;
  spec.m = 5;
  spec.channel = kAwgn;
  OptimizationResult r = optimize_nonuniform(spec);
  g.require(std::abs(r.point.ell - 101.0) <= 2.0,
            "k=64 m=5 ell=" + fmt(r.point.ell, 8) + " = 101 +- 2");
  g.require(std::abs(r.point.rate - 0.636) <= 0.002,
            "k=64 m=5 R_t=" + fmt(r.point.rate, 8) + " = 0.636 +- 0.002");
  g.note("increments " + join_increments(r.schedule.increments()));
}

void crit_sweep_gaps(Gate& g) {
  const std::vector<int> ms = {1, 4, 8};
  const std::vector<double> want = {0.155, 0.046, 0.025};
  std::vector<SweepRow> rows = sweep_snr({4.0}, ms, 200.0);
  for (size_t i = 0; i < ms.size(); ++i) {
    const SweepRow* row = nullptr;
    for (const SweepRow& r : rows)
      if (r.m == ms[i]) row = &r;
    if (!row || row->k == 0) {
      g.require(false, "m=" + std::to_string(ms[i]) + ": no feasible scheme");
      continue;
    }
    g.require(std::abs(row->gap - want[i]) <= 0.01,
              "m=" + std::to_string(ms[i]) + ": gap=" + fmt(row->gap, 6) +
                  " (want " + fmt(want[i]) + " +- 0.01) at k=" +
                  std::to_string(row->k) + ", n1=" + std::to_string(row->n1));
  }
}

void crit_outage(Gate& g) {
  SearchSpec spec;
  spec.k = 128;
  spec.m = 4;
  spec.channel = kAwgn;
  OptimizationResult unc = optimize_outage(spec);
  spec.p_outage = 1e-10;
  OptimizationResult con = optimize_outage(spec);
  g.require(con.feasible, "constrained search feasible");
  g.require(con.point.outage <= 1e-10 * (1 + 1e-9),
            "certified outage " + fmt(con.point.outage, 6) + " <= 1e-10");
  double loss = unc.point.rate - con.point.rate;
  g.require(loss >= -1e-9 && loss <= 0.03,
            "throughput loss " + fmt(loss, 6) + " <= 0.03 (unconstrained R_t=" +
                fmt(unc.point.rate, 8) + " at ell=" + fmt(unc.point.ell, 6) +
                ", constrained R_t=" + fmt(con.point.rate, 8) + " at ell=" +
                fmt(con.point.ell, 6) + ")");
}

void crit_sandwich(Gate& g) {
  std::vector<IncrementSchedule> pool = random_schedules(50, 20260815);
  double worst_lb = 1e9, worst_marg = 1e9, worst_ub = 1e9, worst_z = 0.0;
  int z_checks = 0, z_skipped = 0;
  const int64_t samples = 10000000;
  for (size_t idx = 0; idx < pool.size(); ++idx) {
    const IncrementSchedule& s = pool[idx];
    // Tightest certifiable quadrature tolerance; slack scales with it.
    ErrorProfile prof;
    double tol = 1e-8;
    for (;; tol *= 10.0) {
      try {
        prof = joint_profile_bd(s, kAwgn, tol);
        break;
      } catch (const std::runtime_error&) {
        if (tol >= 1e-6) throw;
      }
    }
    const double slack = 3.0 * tol;
    std::vector<double> ub = joint_ub_recursive(s, kAwgn);
    std::vector<double> lb = joint_lb(s, kAwgn);
    std::vector<double> mc =
        mc_chain_joint(s, bd_radii(s, kAwgn).r2, samples, 777000 + idx);
    for (size_t j = 0; j < prof.joint.size(); ++j) {
      worst_lb = std::min(worst_lb, prof.joint[j] - lb[j] + slack);
      worst_marg = std::min(worst_marg, prof.marginal[j] - prof.joint[j] + slack);
      worst_ub = std::min(worst_ub, ub[j] - prof.joint[j] + slack);
      if (prof.joint[j] * static_cast<double>(samples) < 50.0) {
        ++z_skipped;  // too rare for a 4-sigma resolution at this sample size
        continue;
      }
      double se = std::sqrt(prof.joint[j] * (1.0 - prof.joint[j]) /
                            static_cast<double>(samples));
      worst_z = std::max(worst_z, std::abs(mc[j] - prof.joint[j]) / se);
      ++z_checks;
    }
  }
  g.require(worst_lb >= 0.0, "chernoff LB <= exact joint on 50 schedules (min margin " +
                                 fmt(worst_lb, 4) + ")");
  g.require(worst_marg >= 0.0,
            "exact joint <= marginal on 50 schedules (min margin " +
                fmt(worst_marg, 4) + ")");
  g.require(worst_ub >= 0.0, "exact joint <= chernoff UB on 50 schedules (min margin " +
                                 fmt(worst_ub, 4) + ")");
  g.require(worst_z <= 4.0,
            "exact joint within 4 sigma of 1e7-sample MC oracle (worst |z|=" +
                fmt(worst_z, 4) + " over " + std::to_string(z_checks) +
                " attempts, " + std::to_string(z_skipped) + " below resolution)");
}

void crit_dominance(Gate& g) {
  for (int k : {16, 32, 64, 128}) {
    VlftPoint arq = vlft_arq_best(k, kBsc);
    int n1 = arq.config.n1;
    int I = increment_loglog(k);
    int N0 = std::max(horizon_log(k, kBsc), n1 + I);
    int steps = (N0 - n1 + I - 1) / I;
    int N = n1 + steps * I;
    VlftPoint spaced = vlft_repeated(k, N, I, n1, kBsc);
    VlftPoint dense = vlft_repeated(k, N, 1, n1, kBsc);
    VlftPoint inf = vlft_infinite(k, kBsc);
    bool conv_ok = true;
    for (const VlftPoint& p : {inf, dense, spaced, arq})
      conv_ok = conv_ok && vlft_converse_rate(p.ell, kBsc) >= p.rate - 1e-9;
    bool chain_ok = inf.rate >= dense.rate - 1e-9 &&
                    dense.rate >= spaced.rate - 1e-9 &&
                    spaced.rate >= arq.rate - 1e-9;
    g.require(conv_ok && chain_ok,
              "k=" + std::to_string(k) + ": converse " +
                  fmt(vlft_converse_rate(inf.ell, kBsc), 5) + " >= infinite " +
                  fmt(inf.rate, 5) + " >= I=1 " + fmt(dense.rate, 5) + " >= I=" +
                  std::to_string(I) + " " + fmt(spaced.rate, 5) + " >= ARQ " +
                  fmt(arq.rate, 5) + " (n1=" + std::to_string(n1) + ", N=" +
                  std::to_string(N) + ")");
  }
}

void crit_sim_bsc(Gate& g) {
  std::vector<std::pair<double, double>> curve_inf, curve_rcsp;
  for (int kk = 8; kk <= 48; kk += 2) {
    VlftPoint p = vlft_infinite(kk, kBsc);
    curve_inf.emplace_back(p.ell, p.rate);
    IncrementSchedule s = IncrementSchedule::uniform(kk, kk, 1, 2 * kk + 1);
    PerformancePoint pt =
        expected_latency(marginal_profile_bd(s, kBsc), RepeatMode::REPEATED);
    curve_rcsp.emplace_back(pt.ell, pt.rate);
  }
  for (int k : {16, 20, 32}) {
    SimConfig cfg;
    cfg.schedule = IncrementSchedule::uniform(k, k, 1, 2 * k + 1);
    cfg.channel = kBsc;
    cfg.decoder = DecoderKind::CC64_ML;
    cfg.mode = RepeatMode::REPEATED;
    cfg.trials = 100000;
    cfg.seed = 2026;
    SimResult res = simulate_genie(cfg);
    double r_inf = curve_rate_at(curve_inf, res.ell_hat);
    g.require(res.rate > r_inf,
              "k=" + std::to_string(k) + ": sim R_t=" + fmt(res.rate, 6) +
                  " exceeds random-coding achievability " + fmt(r_inf, 6) +
                  " at ell=" + fmt(res.ell_hat, 6) + " (+- " +
                  fmt(res.ell_se, 3) + ")");
    if (res.ell_hat < 50.0) {
      double r_rcsp = curve_rate_at(curve_rcsp, res.ell_hat);
      g.require(std::abs(res.rate - r_rcsp) <= 0.03,
                "k=" + std::to_string(k) + ": |sim R_t - marginal RCSP| = " +
                    fmt(std::abs(res.rate - r_rcsp), 4) +
                    " <= 0.03 (RCSP R_t=" + fmt(r_rcsp, 6) + " at ell=" +
                    fmt(res.ell_hat, 6) + ")");
    }
  }
}

void crit_sim_awgn(Gate& g) {
  std::vector<std::pair<double, double>> dt;
  for (int kk = 10; kk <= 44; kk += 4) {
    DtVlft d = dt_vlft_infinite(kk, kAwgn, 200000, 99000 + kk);
    dt.emplace_back(d.ell, d.rate);
  }
  std::vector<IncrementSchedule> sched = benchmark_schedules_awgn2db();
  for (size_t i = 0; i < 2; ++i) {
    SimConfig cfg;
    cfg.schedule = sched[i];
    cfg.channel = kAwgn;
    cfg.decoder = DecoderKind::CC1024_WAVA;
    cfg.mode = RepeatMode::REPEATED;
    cfg.trials = 20000;
    cfg.seed = 2026;
    SimResult res = simulate_genie(cfg);
    double r_dt = curve_rate_at(dt, res.ell_hat);
    g.require(res.rate > r_dt,
              "k=" + std::to_string(cfg.schedule.k) + ": sim R_t=" +
                  fmt(res.rate, 6) + " exceeds DT achievability " + fmt(r_dt, 6) +
                  " at ell=" + fmt(res.ell_hat, 6) + " (exact decodes " +
                  fmt(100.0 * res.exact_decodes /
                          (res.exact_decodes + res.heuristic_decodes), 4) +
                  "%)");
  }
}

void crit_selftest_bd(Gate& g) {
  for (const IncrementSchedule& s : benchmark_schedules_awgn2db()) {
    ErrorProfile prof = joint_profile_bd(s, kAwgn, 1e-8);
    SimConfig cfg;
    cfg.schedule = s;
    cfg.channel = kAwgn;
    cfg.decoder = DecoderKind::IDEAL_BD;
    cfg.mode = RepeatMode::NON_REPEATING;
    cfg.trials = 200000;
    cfg.seed = 555;
    SimResult res = simulate_genie(cfg);
    double worst_z = 0.0;
    for (size_t j = 0; j < prof.joint.size(); ++j) {
      double p = prof.joint[j];
      double f = static_cast<double>(res.joint_fail_counts[j]) /
                 static_cast<double>(res.rounds);
      double se = std::sqrt(p * (1.0 - p) / static_cast<double>(res.rounds));
      worst_z = std::max(worst_z, std::abs(f - p) / std::max(se, 1e-300));
    }
    g.require(worst_z <= 4.0, "k=" + std::to_string(s.k) +
                                  ": ideal-BD joint failure rates within 4 sigma "
                                  "(worst |z|=" +
                                  fmt(worst_z, 4) + ")");
  }
}

void crit_chi_square(Gate& g) {
  const std::vector<double> mult = {0.03125, 0.125, 0.5, 1.0, 2.0, 4.0, 16.0};
  double worst = 0.0;
  int n = 0, worst_dof = 0;
  double worst_x = 0.0;
  for (int dof = 1; dof <= 2000; ++dof)
    for (double t : mult) {
      double x = t * dof;
      double got = chi_square_tail(dof, x);
      double want = oracle::chi_square_tail_mpfr(dof, x);
      double err = std::abs(got - want);
      if (err > worst) {
        worst = err;
        worst_dof = dof;
        worst_x = x;
      }
      ++n;
    }
  g.require(worst <= 1e-12,
            "max |chi_square_tail - mpfr| = " + fmt(worst, 4) + " <= 1e-12 over " +
                std::to_string(n) + " points (worst at dof=" +
                std::to_string(worst_dof) + ", x=" + fmt(worst_x, 6) + ")");
}

void crit_radius_invariant(Gate& g) {
  std::vector<IncrementSchedule> pool = random_schedules(50, 20260815);
  std::vector<IncrementSchedule> bench = benchmark_schedules_awgn2db();
  pool.insert(pool.end(), bench.begin(), bench.end());
  const double cap = kAwgn.capacity_bits();
  int applicable = 0;
  double worst = 1e9;
  for (const IncrementSchedule& s : pool) {
    DecodingRadii radii = bd_radii(s, kAwgn);
    for (size_t j = 0; j < s.n.size(); ++j) {
      if (static_cast<double>(s.k) / s.n[j] > cap) continue;
      ++applicable;
      worst = std::min(worst, radii.r2[j] - s.n[j]);
    }
  }
  g.require(applicable > 0 && worst >= -1e-9,
            "r_j^2 >= n_j whenever k/n_j <= capacity: min(r^2 - n) = " +
            fmt(worst, 6) + " over " + std::to_string(applicable) + " attempts");
}

struct Criterion {
  std::string id;
  std::function<void(Gate&)> fn;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> kAll = {
      {"01 capacity-anchors", crit_capacity},
      {"02 arq-blocklengths", crit_arq},
      {"03 joint-eval-anchors", crit_joint_eval},
      {"04 uniform-eval-anchors", crit_uniform_eval},
      {"05 k64-operating-point", crit_k64_anchor},
      {"06 latency-capped-gaps", crit_sweep_gaps},
      {"07 outage-constrained-loss", crit_outage},
      {"08 bound-sandwich", crit_sandwich},
      {"09 dominance-chain", crit_dominance},
      {"10 bsc-code-simulation", crit_sim_bsc},
      {"11 awgn-code-simulation", crit_sim_awgn},
      {"12 ideal-bd-selftest", crit_selftest_bd},
      {"13 chi-square-oracle", crit_chi_square},
      {"14 radius-invariant", crit_radius_invariant},
  };
  return kAll;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> only;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--list") {
      for (const Criterion& c : criteria()) std::cout << c.id << "\n";
      return 0;
    }
    if (arg == "--only" && i + 1 < argc) {
      only.push_back(argv[++i]);
    } else if (arg != "--only") {
      std::cerr << "usage: acceptance [--list] [--only SUBSTR]...\n";
      return 2;
    }
  }

  int ran = 0, failed = 0;
  for (const Criterion& c : criteria()) {
    if (!only.empty()) {
      bool match = false;
      for (const std::string& o : only) match = match || c.id.find(o) != std::string::npos;
      if (!match) continue;
    }
    ++ran;
    std::cout << "[RUN ] " << c.id << std::endl;
    Gate gate;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.fn(gate);
    } catch (const std::exception& e) {
      gate.require(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const std::string& note : gate.notes) std::cout << "    " << note << std::endl;
    if (!gate.ok) ++failed;
    std::cout << (gate.ok ? "[PASS] " : "[FAIL] ") << c.id << " ("
              << fmt(secs, 3) << " s)" << std::endl;
  }
  std::cout << "acceptance: " << (ran - failed) << "/" << ran << " criteria passed"
            << std::endl;
  return failed == 0 && ran > 0 ? 0 : 1;
}
