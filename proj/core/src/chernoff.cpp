#include "irntc/chernoff.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace irntc {

namespace {

constexpr double kUMax = 0.5 - 1e-9;

double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
  const double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

void check_chain(const std::vector<int>& dofs, const std::vector<double>& rho2) {
  if (dofs.empty() || dofs.size() != rho2.size())
    throw std::invalid_argument("chernoff chain: dofs/rho2 size mismatch");
  for (size_t t = 0; t < dofs.size(); ++t)
    if (dofs[t] < 1 || !(rho2[t] > 0.0))
      throw std::invalid_argument("chernoff chain: need dofs >= 1, rho2 > 0");
}

double clamp_prob(double v) { return std::min(1.0, std::max(0.0, v)); }

// Optimize the chain bound over its q-1 tilt parameters: golden-section for a
// single parameter, cyclic coordinate descent otherwise. Any u is valid, so
// the search only needs to find a good point, not the exact infimum.
double optimize_chain(const std::vector<int>& dofs, const std::vector<double>& rho2,
                      bool complement_first, const ChernoffParams& params) {
  const size_t q = dofs.size();
  if (q == 1) {
    double arg = rho2[0];
    return complement_first ? chi_square_cdf(dofs[0], arg)
                            : chi_square_tail(dofs[0], arg);
  }
  std::vector<double> u(q - 1, 0.0);
  double best = detail::chain_log_eval(dofs, rho2, u, complement_first);
  if (q == 2) {
    auto f = [&](double v) {
      u[0] = v;
      return detail::chain_log_eval(dofs, rho2, u, complement_first);
    };
    double v = golden_min(f, 0.0, kUMax, params.u_tol);
    u[0] = v;
    best = std::min(best, detail::chain_log_eval(dofs, rho2, u, complement_first));
  } else {
    for (int sweep = 0; sweep < params.sweeps; ++sweep) {
      for (size_t c = 0; c < u.size(); ++c) {
        auto f = [&](double v) {
          double saved = u[c];
          u[c] = v;
          double val = detail::chain_log_eval(dofs, rho2, u, complement_first);
          u[c] = saved;
          return val;
        };
        u[c] = golden_min(f, 0.0, kUMax, params.u_tol);
      }
      best = std::min(best, detail::chain_log_eval(dofs, rho2, u, complement_first));
    }
  }
  return clamp_prob(std::exp(best));
}

struct ScheduleChain {
  std::vector<int> dofs;    // increments I_1..I_m
  std::vector<double> rho2; // decoding radii squared
  std::vector<int> n;       // cumulative lengths
};

ScheduleChain schedule_chain(const IncrementSchedule& s, const ChannelSpec& ch) {
  if (ch.kind != ChannelKind::AWGN)
    throw std::invalid_argument("chernoff bounds: AWGN channel required");
  ScheduleChain c;
  c.dofs = s.increments();
  c.rho2 = bd_radii(s, ch).r2;
  c.n = s.n;
  return c;
}

// Sub-chain starting at attempt a (0-based) and ending at attempt b: the
// first event is the partial sum S_{a+1} with its full dof.
void sub_chain(const ScheduleChain& c, int a, int b, std::vector<int>& dofs,
               std::vector<double>& rho2) {
  dofs.assign(1, c.n[a]);
  rho2.assign(1, c.rho2[a]);
  for (int t = a + 1; t <= b; ++t) {
    dofs.push_back(c.n[t] - c.n[t - 1]);
    rho2.push_back(c.rho2[t]);
  }
}

}  // namespace

namespace detail {

std::vector<double> tilt_h_sequence(const std::vector<double>& u) {
  std::vector<double> h(u.size());
  double cur = 0.0;
  for (size_t t = 0; t < u.size(); ++t) {
    cur = cur + u[t] * (1.0 - 2.0 * cur);
    h[t] = cur;
  }
  return h;
}

double chain_log_eval(const std::vector<int>& dofs, const std::vector<double>& rho2,
                      const std::vector<double>& u, bool complement_first) {
  const size_t q = dofs.size();
  if (u.size() + 1 != q)
    throw std::invalid_argument("chain_log_eval: need q-1 tilt parameters");
  // Process events q, q-1, ..., 2: tilt event t by u (rescaled by the tilt
  // already accumulated), then integrate its chi-square increment out.
  // om2h tracks 1 - 2 h_t = prod (1 - 2 u_s) exactly.
  double om2h = 1.0;
  double logg = 0.0;
  for (size_t s = 0; s < q - 1; ++s) {
    size_t t = q - 1 - s;
    if (!(u[s] >= 0.0) || u[s] >= 0.5)
      throw std::invalid_argument("chain_log_eval: u outside [0, 1/2)");
    logg -= u[s] * om2h * rho2[t];
    om2h *= 1.0 - 2.0 * u[s];
    logg -= 0.5 * dofs[t] * std::log(om2h);
  }
  double arg = om2h * rho2[0];
  double tail = complement_first ? chi_square_cdf(dofs[0], arg)
                                 : chi_square_tail(dofs[0], arg);
  logg -= 0.5 * dofs[0] * std::log(om2h);
  return logg + (tail > 0.0 ? std::log(tail)
                            : -std::numeric_limits<double>::infinity());
}

}  // namespace detail

double chain_joint_ub(const std::vector<int>& dofs, const std::vector<double>& rho2,
                      const ChernoffParams& params) {
  check_chain(dofs, rho2);
  return optimize_chain(dofs, rho2, false, params);
}

double chain_first_complement_ub(const std::vector<int>& dofs,
                                 const std::vector<double>& rho2,
                                 const ChernoffParams& params) {
  check_chain(dofs, rho2);
  return optimize_chain(dofs, rho2, true, params);
}

double chain_joint_lb(const std::vector<int>& dofs, const std::vector<double>& rho2,
                      const ChernoffParams& params) {
  check_chain(dofs, rho2);
  const size_t q = dofs.size();
  int total_dof = 0;
  for (int d : dofs) total_dof += d;
  double lb = chi_square_tail(total_dof, rho2.back());
  if (q == 1) return lb;
  // P[all] >= P[last] - sum_s P[first s complemented, s+1..q hold].
  int prefix_dof = 0;
  for (size_t s = 0; s + 1 < q; ++s) {
    prefix_dof += dofs[s];
    std::vector<int> sub_dofs(1, prefix_dof);
    std::vector<double> sub_rho(1, rho2[s]);
    for (size_t t = s + 1; t < q; ++t) {
      sub_dofs.push_back(dofs[t]);
      sub_rho.push_back(rho2[t]);
    }
    double multi = optimize_chain(sub_dofs, sub_rho, true, params);
    // Two-event specialization (complemented prefix vs final sum) can beat
    // the longer chain; keep the smaller complement bound.
    std::vector<int> pair_dofs{prefix_dof, total_dof - prefix_dof};
    std::vector<double> pair_rho{rho2[s], rho2.back()};
    double pair = optimize_chain(pair_dofs, pair_rho, true, params);
    lb -= std::min(multi, pair);
  }
  return std::max(0.0, lb);
}

double pair_joint_ub(const IncrementSchedule& s, int j, int i, const ChannelSpec& ch,
                     const ChernoffParams& params) {
  ScheduleChain c = schedule_chain(s, ch);
  if (j < 1 || i <= j || i > s.m())
    throw std::invalid_argument("pair_joint_ub: need 1 <= j < i <= m");
  std::vector<int> dofs;
  std::vector<double> rho2;
  sub_chain(c, j - 1, j - 1, dofs, rho2);
  dofs.push_back(c.n[i - 1] - c.n[j - 1]);
  rho2.push_back(c.rho2[i - 1]);
  return chain_joint_ub(dofs, rho2, params);
}

double pair_joint_ub_at(const IncrementSchedule& s, int j, int i,
                        const ChannelSpec& ch, double u) {
  ScheduleChain c = schedule_chain(s, ch);
  if (j < 1 || i <= j || i > s.m())
    throw std::invalid_argument("pair_joint_ub_at: need 1 <= j < i <= m");
  if (!(u >= 0.0) || u >= 0.5)
    throw std::invalid_argument("pair_joint_ub_at: u outside [0, 1/2)");
  std::vector<int> dofs{c.n[j - 1], c.n[i - 1] - c.n[j - 1]};
  std::vector<double> rho2{c.rho2[j - 1], c.rho2[i - 1]};
  return clamp_prob(std::exp(detail::chain_log_eval(dofs, rho2, {u}, false)));
}

PairComplement pair_complement_ub(const IncrementSchedule& s, int j, int i,
                                  const ChannelSpec& ch, const ChernoffParams& params) {
  ScheduleChain c = schedule_chain(s, ch);
  if (j < 1 || i <= j || i > s.m())
    throw std::invalid_argument("pair_complement_ub: need 1 <= j < i <= m");
  std::vector<int> dofs{c.n[j - 1], c.n[i - 1] - c.n[j - 1]};
  std::vector<double> rho2{c.rho2[j - 1], c.rho2[i - 1]};

  PairComplement out;
  double u_conv = 0.5 - c.n[i - 1] / (2.0 * c.rho2[i - 1] + 2.0 * s.k);
  u_conv = std::min(std::max(u_conv, 0.0), kUMax);
  out.convenient_u = u_conv;
  out.at_convenient_u =
      clamp_prob(std::exp(detail::chain_log_eval(dofs, rho2, {u_conv}, true)));
  double searched = chain_first_complement_ub(dofs, rho2, params);
  out.optimized = std::min(searched, out.at_convenient_u);
  return out;
}

std::vector<double> joint_ub_recursive(const IncrementSchedule& s,
                                       const ChannelSpec& ch,
                                       const ChernoffParams& params) {
  ScheduleChain c = schedule_chain(s, ch);
  const int m = s.m();
  ErrorProfile marg = marginal_profile_bd(s, ch);
  std::vector<double> ub(m);
  std::vector<int> dofs;
  std::vector<double> rho2;
  for (int i = 1; i <= m; ++i) {
    double v = marg.marginal[i - 1];
    if (i >= 2) {
      v = std::min(v, pair_joint_ub(s, i - 1, i, ch, params));
      dofs.assign(c.dofs.begin(), c.dofs.begin() + i);
      rho2.assign(c.rho2.begin(), c.rho2.begin() + i);
      v = std::min(v, chain_joint_ub(dofs, rho2, params));
    }
    if (i >= 2 && i < m) {
      // Alternative expansion: P[E_i] <= P[zeta_i, zeta_m] +
      // P[zeta_{i-1}, zeta_i] - P[zeta_{i-1}, zeta_i, zeta_m].
      std::vector<int> d1{c.n[i - 1], c.n[m - 1] - c.n[i - 1]};
      std::vector<double> r1{c.rho2[i - 1], c.rho2[m - 1]};
      std::vector<int> d2{c.n[i - 2], c.n[i - 1] - c.n[i - 2]};
      std::vector<double> r2{c.rho2[i - 2], c.rho2[i - 1]};
      std::vector<int> d3{c.n[i - 2], c.n[i - 1] - c.n[i - 2], c.n[m - 1] - c.n[i - 1]};
      std::vector<double> r3{c.rho2[i - 2], c.rho2[i - 1], c.rho2[m - 1]};
      double eg = chain_joint_ub(d1, r1, params) + chain_joint_ub(d2, r2, params) -
                  chain_joint_lb(d3, r3, params);
      v = std::min(v, clamp_prob(eg));
    }
    ub[i - 1] = clamp_prob(v);
  }
  return ub;
}

std::vector<double> joint_lb(const IncrementSchedule& s, const ChannelSpec& ch,
                             const ChernoffParams& params) {
  ScheduleChain c = schedule_chain(s, ch);
  const int m = s.m();
  ErrorProfile marg = marginal_profile_bd(s, ch);
  std::vector<double> lb(m);
  for (int i = 1; i <= m; ++i) {
    if (i == 1) {
      lb[0] = marg.marginal[0];
      continue;
    }
    double gap = 0.0;
    for (int j = 1; j < i; ++j)
      gap += pair_complement_ub(s, j, i, ch, params).optimized;
    double v1 = marg.marginal[i - 1] - gap;
    std::vector<int> dofs(c.dofs.begin(), c.dofs.begin() + i);
    std::vector<double> rho2(c.rho2.begin(), c.rho2.begin() + i);
    double v2 = chain_joint_lb(dofs, rho2, params);
    lb[i - 1] = clamp_prob(std::max(v1, v2));
  }
  return lb;
}

ErrorProfile chernoff_profile(const IncrementSchedule& s, const ChannelSpec& ch,
                              bool upper, const ChernoffParams& params) {
  ErrorProfile prof = marginal_profile_bd(s, ch);
  prof.jointness = upper ? Jointness::JOINT_CHERNOFF_UB : Jointness::JOINT_CHERNOFF_LB;
  prof.joint = upper ? joint_ub_recursive(s, ch, params) : joint_lb(s, ch, params);
  return prof;
}

}  // namespace irntc
