#pragma once

#include <vector>

#include "irntc/rcsp.hpp"

namespace irntc {

struct ChernoffParams {
  double u_tol = 1e-6;  // golden-section tolerance on each tilt parameter
  int sweeps = 3;       // coordinate sweeps for multi-parameter chains
};

// Chains of events {S_t > rho2_t}, t = 1..q, where S_t is the partial sum of
// independent chi-square increments with dofs[t-1] degrees of freedom.
// All bounds are exact Chernoff/tilting expressions, optimized numerically;
// every parameter choice yields a valid bound so numerical optimality is not
// required for correctness. Results are clamped to [0, 1].
double chain_joint_ub(const std::vector<int>& dofs, const std::vector<double>& rho2,
                      const ChernoffParams& = {});
// Same chain with the first event complemented: P[S_1 <= rho2_1, rest > ...].
double chain_first_complement_ub(const std::vector<int>& dofs,
                                 const std::vector<double>& rho2,
                                 const ChernoffParams& = {});
// Lower bound: P[last] minus the chain complement bounds of every prefix.
double chain_joint_lb(const std::vector<int>& dofs, const std::vector<double>& rho2,
                      const ChernoffParams& = {});

// Schedule-level pair bounds for attempts j < i (1-based), AWGN BD radii:
//   P[zeta_j ∩ zeta_i]   <= inf_u P[chi2_{n_j} > (1-2u) r_j^2] e^{-u r_i^2} (1-2u)^{-n_i/2}
//   P[zeta_j^c ∩ zeta_i] <= inf_u P[chi2_{n_j} <= (1-2u) r_j^2] e^{-u r_i^2} (1-2u)^{-n_i/2}
double pair_joint_ub(const IncrementSchedule&, int j, int i, const ChannelSpec&,
                     const ChernoffParams& = {});
// Evaluate the pair joint bound at a fixed tilt u (no optimization).
double pair_joint_ub_at(const IncrementSchedule&, int j, int i, const ChannelSpec&,
                        double u);

struct PairComplement {
  double optimized = 0.0;        // infimum over the u grid search
  double at_convenient_u = 0.0;  // value at u = 1/2 - n_i/(2 r_i^2 + 2k)
  double convenient_u = 0.0;
};
PairComplement pair_complement_ub(const IncrementSchedule&, int j, int i,
                                  const ChannelSpec&, const ChernoffParams& = {});

// Per-attempt certified bounds on P[E_i] = P[zeta_1 ... zeta_i]:
// UB_i = min(marginal_i, pair(i-1, i), chained prefix bound, alternative
// three-term expansion); LB_i = max(0, marginal_i - sum of complement pair
// bounds, recursive chain lower bound).
std::vector<double> joint_ub_recursive(const IncrementSchedule&, const ChannelSpec&,
                                       const ChernoffParams& = {});
std::vector<double> joint_lb(const IncrementSchedule&, const ChannelSpec&,
                             const ChernoffParams& = {});

// Profile wrapper used by the CLI (--jointness chernoff_ub|chernoff_lb).
ErrorProfile chernoff_profile(const IncrementSchedule&, const ChannelSpec&,
                              bool upper, const ChernoffParams& = {});

namespace detail {
// Accumulated tilt recursion h_t = h_{t-1} + u_t (1 - 2 h_{t-1}); satisfies
// 1 - 2 h_t = prod_{s<=t} (1 - 2 u_s).
std::vector<double> tilt_h_sequence(const std::vector<double>& u);
// log of the chain bound at a fixed parameter vector u (size q-1).
double chain_log_eval(const std::vector<int>& dofs, const std::vector<double>& rho2,
                      const std::vector<double>& u, bool complement_first);
}  // namespace detail

}  // namespace irntc
