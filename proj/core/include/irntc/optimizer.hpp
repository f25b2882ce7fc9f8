#pragma once

#include <cstdint>
#include <vector>

#include "irntc/rcsp.hpp"

namespace irntc {

struct SearchSpec {
  int k = 0;
  int m = 1;  // decoding attempts; 0 means as many as fit under the cap
  ChannelSpec channel;
  bool uniform = false;
  double p_outage = 1.0;    // outage cap (non-repeating search only)
  double ell_max = 0.0;     // 0: no latency constraint
  double joint_tol = 1e-6;  // fine joint-evaluation tolerance

  // Longest blocklength considered by every search: ceil(6 k / C).
  int n_cap() const;
  void validate() const;
};

struct OptimizationResult {
  IncrementSchedule schedule;
  ErrorProfile profile;       // profile used for the reported point
  PerformancePoint point;
  RepeatMode mode = RepeatMode::REPEATED;
  int64_t evaluations = 0;
  double wall_seconds = 0.0;
  bool feasible = true;
  bool boundary_hit = false;  // optimum sits on the search-grid boundary
  // Latency/throughput curve traced by the search (search-stage evaluations,
  // sorted by ell): ARQ and uniform sample the best point per first length,
  // the grid searches report their evaluated leaders.
  std::vector<PerformancePoint> frontier;
};

// ARQ (m = 1): integer ternary search on n1 with a +-5 verification sweep
// (full scan fallback when the sweep disagrees).
OptimizationResult optimize_arq(int k, const ChannelSpec& ch);

// Repeated IR with uniform increments after n1: exhaustive (n1, I) search
// minimizing the marginal-substituted expected latency (equivalently
// maximizing R_t = k/ell). Honors ell_max when set.
OptimizationResult optimize_uniform(const SearchSpec&);

// Repeated IR with free increments, m <= 6: marginal prescreen over a
// structured grid, then joint-evaluation refinement of the leaders.
OptimizationResult optimize_nonuniform(const SearchSpec&);

// Non-repeating IR: maximizes delivered throughput k (1 - P[E_m]) / ell
// subject to a certified outage bound P[E_m] <= p_outage; reports
// R_t = k/ell and the achieved outage. p_outage = 1 gives the unconstrained
// non-repeating optimum.
OptimizationResult optimize_outage(const SearchSpec&);

struct SweepRow {
  double snr_db = 0.0;
  int m = 0;
  int k = 0;
  int n1 = 0;
  int I = 0;
  double ell = 0.0;
  double rate = 0.0;
  double capacity = 0.0;
  double gap = 0.0;  // capacity - rate
};
// Largest k whose optimized uniform scheme (ARQ when m = 1) meets
// ell <= ell_max, per SNR point and per m.
std::vector<SweepRow> sweep_snr(const std::vector<double>& snr_db_grid,
                                const std::vector<int>& m_list, double ell_max);

struct TrajectoryRow {
  int j = 0;
  int n_j = 0;
  double error_prob = 0.0;  // P[E_j] when available, else marginal
  double marginal = 0.0;    // P[zeta_j]
};
std::vector<TrajectoryRow> error_trajectory(const OptimizationResult&);

}  // namespace irntc
