#include "irntc/rcsp.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace irntc {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

void require_awgn(const ChannelSpec& ch, const char* who) {
  if (ch.kind != ChannelKind::AWGN)
    throw std::invalid_argument(std::string(who) + ": AWGN channel required");
  ch.validate();
}

}  // namespace

BscRadius bsc_hamming_radius(int n, int k) {
  if (n < 1 || k < 1) throw std::invalid_argument("bsc_hamming_radius: n, k >= 1 required");
  if (k > n) throw std::invalid_argument("bsc_hamming_radius: k > n leaves no packing");
  // Smallest r with sum_{t<=r} C(n,t) >= 2^(n-k); exact integer arithmetic.
  mpz_class target = 1;
  mpz_mul_2exp(target.get_mpz_t(), target.get_mpz_t(), n - k);
  mpz_class term = 1;  // C(n, 0)
  mpz_class cum = 1;
  int64_t r = 0;
  while (cum < target && r < n) {
    ++r;
    term *= n - r + 1;
    mpz_divexact_ui(term.get_mpz_t(), term.get_mpz_t(), static_cast<unsigned long>(r));
    cum += term;
  }
  BscRadius out;
  out.r = r;
  out.degenerate = (cum == target);
  return out;
}

double awgn_decoding_radius2(int n, int k, double eta) {
  if (n < 1 || k < 1) throw std::invalid_argument("awgn_decoding_radius2: n, k >= 1 required");
  if (!(eta > 0.0)) throw std::invalid_argument("awgn_decoding_radius2: eta <= 0");
  return n * (1.0 + eta) / std::exp2(2.0 * k / n);
}

DecodingRadii bd_radii(const IncrementSchedule& s, const ChannelSpec& ch) {
  s.validate();
  ch.validate();
  DecodingRadii out;
  if (ch.kind == ChannelKind::AWGN) {
    out.r2.reserve(s.n.size());
    for (int nj : s.n) out.r2.push_back(awgn_decoding_radius2(nj, s.k, ch.eta));
  } else {
    out.r.reserve(s.n.size());
    for (int nj : s.n) out.r.push_back(bsc_hamming_radius(nj, s.k));
  }
  return out;
}

ErrorProfile marginal_profile_bd(const IncrementSchedule& s, const ChannelSpec& ch) {
  DecodingRadii radii = bd_radii(s, ch);
  ErrorProfile prof;
  prof.schedule = s;
  prof.decoding = DecodeApprox::BD;
  prof.jointness = Jointness::MARGINAL;
  prof.marginal.reserve(s.n.size());
  for (size_t j = 0; j < s.n.size(); ++j) {
    if (ch.kind == ChannelKind::AWGN)
      prof.marginal.push_back(chi_square_tail(s.n[j], radii.r2[j]));
    else
      prof.marginal.push_back(binomial_tail(s.n[j], radii.r[j].r, ch.p));
  }
  return prof;
}

double sp59_cone_half_angle(int n, int k) {
  if (n < 2 || k < 1) throw std::invalid_argument("sp59_cone_half_angle: need n >= 2, k >= 1");
  // Surface fraction of a cone with half-angle t in n dimensions:
  //   Omega(t)/Omega_full = (1/2) I_{sin^2 t}((n-1)/2, 1/2),  t <= pi/2.
  const double frac = std::exp2(-static_cast<double>(k));
  const double a = 0.5 * (n - 1);
  double lo = 1e-12, hi = 0.5 * kPi;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    double mid = 0.5 * (lo + hi);
    double st = std::sin(mid);
    double f = 0.5 * beta_inc(a, 0.5, st * st);
    (f < frac ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double sp59_error_asymptotic(int n, double eta, double theta) {
  if (n < 2 || !(eta > 0.0) || !(theta > 0.0) || !(theta < 0.5 * kPi))
    throw std::invalid_argument("sp59_error_asymptotic: bad arguments");
  const double a = std::sqrt(eta);
  const double ct = std::cos(theta), st = std::sin(theta);
  if (!(a * st / ct > 1.0)) return std::numeric_limits<double>::quiet_NaN();
  // Geometric root G solving G^2 = A G cos(theta) + 1.
  const double g = 0.5 * (a * ct + std::sqrt(a * a * ct * ct + 4.0));
  const double el = 0.5 * (a * a - a * g * ct) - std::log(g * st);
  const double denom =
      std::sqrt(n * kPi) * g * st * std::sqrt(g * g + 1.0) * (a - g * ct);
  if (!(denom > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::exp(-n * el) / denom;
}

ErrorProfile marginal_profile_ml(const IncrementSchedule& s, const ChannelSpec& ch) {
  require_awgn(ch, "marginal_profile_ml");
  ErrorProfile bd = marginal_profile_bd(s, ch);
  ErrorProfile prof;
  prof.schedule = s;
  prof.decoding = DecodeApprox::ML;
  prof.jointness = Jointness::MARGINAL;
  prof.marginal.resize(s.n.size());
  for (size_t j = 0; j < s.n.size(); ++j) {
    // Cone analysis lives in n+1 dimensions with per-dimension power eta.
    int dim = s.n[j] + 1;
    double theta = sp59_cone_half_angle(dim, s.k);
    double v = sp59_error_asymptotic(dim, ch.eta, theta);
    prof.marginal[j] =
        (std::isfinite(v) && v > 0.0 && v < 1.0) ? v : bd.marginal[j];
  }
  return prof;
}

namespace {

// One density-propagation pass at grid pitch h. Cell masses of the
// cumulative noise energy live on a grid starting exactly at the current
// decoding radius; each stage transfers them through the chi-square
// increment kernel (exact CDF differences), drops the decoded mass below the
// next radius, and keeps a scalar bucket for mass above `cap`, which stays an
// error contributor at every later attempt because cap >= all radii.
std::vector<double> propagate_joint(const std::vector<int>& dofs,
                                    const std::vector<double>& r2, double h,
                                    double cap) {
  const int m = static_cast<int>(dofs.size());
  std::vector<double> joint(m);
  joint[0] = chi_square_tail(dofs[0], r2[0]);

  double base = r2[0];
  int cells = std::max(1, static_cast<int>(std::ceil((cap - base) / h)));
  std::vector<double> mass(cells);
  {
    double prev_cdf = chi_square_cdf(dofs[0], base);
    for (int i = 0; i < cells; ++i) {
      double cdf = chi_square_cdf(dofs[0], base + (i + 1) * h);
      mass[i] = cdf - prev_cdf;
      prev_cdf = cdf;
    }
  }
  double overflow = chi_square_tail(dofs[0], base + cells * h);

  for (int j = 1; j < m; ++j) {
    const int dof = dofs[j];
    const double nbase = r2[j];
    const int ncells = std::max(1, static_cast<int>(std::ceil((cap - nbase) / h)));
    // Kernel CDF at (nbase - base - h/2) + d*h for all source-mid/dest-edge
    // offsets d; saturation bounds keep the transfer loop band-limited.
    const double delta0 = nbase - base - 0.5 * h;
    const int dmin = -(cells - 1), dmax = ncells;
    const double qhi = chi_square_quantile(dof, 1.0 - 1e-16);
    std::vector<double> kernel(dmax - dmin + 1);
    int d0 = dmax, d1 = dmax;  // first d with kernel > 0, first with kernel ~ 1
    bool d0_set = false, d1_set = false;
    for (int d = dmin; d <= dmax; ++d) {
      double arg = delta0 + d * h;
      double v = arg <= 0.0 ? 0.0 : (arg >= qhi ? 1.0 : chi_square_cdf(dof, arg));
      kernel[d - dmin] = v;
      if (!d0_set && v > 0.0) { d0 = d; d0_set = true; }
      if (!d1_set && v >= 1.0) { d1 = d; d1_set = true; }
    }
    std::vector<double> out(ncells, 0.0);
    for (int b = 0; b < cells; ++b) {
      const double mb = mass[b];
      if (mb <= 0.0) continue;
      const int ilo = std::max(0, b + d0 - 1);
      const int ihi = std::min(ncells - 1, b + d1);
      const double* kb = kernel.data() - dmin - b;  // kb[i] = F(dest edge i - mid b)
      for (int i = ilo; i <= ihi; ++i) out[i] += mb * (kb[i + 1] - kb[i]);
      overflow += mb * (1.0 - kernel[ncells - b - dmin]);
    }
    KahanSum tot;
    for (double v : out) tot.add(v);
    joint[j] = tot.s + overflow;
    mass.swap(out);
    cells = ncells;
    base = nbase;
  }
  return joint;
}

}  // namespace

ErrorProfile joint_profile_bd(const IncrementSchedule& s, const ChannelSpec& ch,
                              double tol) {
  require_awgn(ch, "joint_profile_bd");
  if (!(tol > 0.0)) throw std::invalid_argument("joint_profile_bd: tol <= 0");
  ErrorProfile prof = marginal_profile_bd(s, ch);
  prof.jointness = Jointness::JOINT_EXACT;
  const int m = s.m();
  if (m == 1) {
    prof.joint = prof.marginal;
    return prof;
  }
  std::vector<int> dofs = s.increments();
  const std::vector<double>& r2 = bd_radii(s, ch).r2;
  const double cap =
      std::max(chi_square_quantile(s.N(), 1.0 - 3e-14), r2.back()) + 10.0;

  double h = 0.5;
  std::vector<double> prev = propagate_joint(dofs, r2, h, cap);
  for (int level = 0; level < 9; ++level) {
    h *= 0.5;
    std::vector<double> cur = propagate_joint(dofs, r2, h, cap);
    double est = 0.0;
    for (int j = 0; j < m; ++j)
      est = std::max(est, std::abs(cur[j] - prev[j]) / 3.0);
    if (est < tol) {
      prof.joint.resize(m);
      prof.joint_error_estimate = est;
      for (int j = 0; j < m; ++j) {
        // Richardson extrapolation of the O(h^2) midpoint error, then
        // projection onto the known constraints P[E_1] >= P[E_2] >= ... and
        // P[E_j] <= P[zeta_j].
        double v = cur[j] + (cur[j] - prev[j]) / 3.0;
        v = std::min(v, prof.marginal[j]);
        if (j > 0) v = std::min(v, prof.joint[j - 1]);
        prof.joint[j] = std::max(v, 0.0);
      }
      return prof;
    }
    prev.swap(cur);
  }
  throw std::runtime_error("joint_profile_bd: accuracy target unattainable");
}

PerformancePoint expected_latency(const ErrorProfile& prof, RepeatMode mode) {
  prof.schedule.validate();
  const std::vector<double>& q = prof.stop_probs();
  const std::vector<int> inc = prof.schedule.increments();
  const int m = prof.schedule.m();
  if (static_cast<int>(q.size()) != m)
    throw std::invalid_argument("expected_latency: profile/schedule size mismatch");
  KahanSum num;
  num.add(inc[0]);
  for (int j = 1; j < m; ++j) num.add(inc[j] * q[j - 1]);
  PerformancePoint pt;
  if (mode == RepeatMode::REPEATED) {
    if (!(q[m - 1] < 1.0))
      throw std::domain_error("expected_latency: P[E_m] = 1, latency diverges");
    pt.ell = num.s / (1.0 - q[m - 1]);
    pt.outage = 0.0;
  } else {
    pt.ell = num.s;
    pt.outage = q[m - 1];
  }
  pt.rate = prof.schedule.k / pt.ell;
  return pt;
}

PerformancePoint arq_throughput(int k, int n1, const ChannelSpec& ch) {
  ch.validate();
  double success;
  if (ch.kind == ChannelKind::AWGN) {
    success = chi_square_cdf(n1, awgn_decoding_radius2(n1, k, ch.eta));
  } else {
    BscRadius rad = bsc_hamming_radius(n1, k);
    success = 1.0 - binomial_tail(n1, rad.r, ch.p);
  }
  if (!(success > 0.0))
    throw std::domain_error("arq_throughput: zero decoding probability");
  PerformancePoint pt;
  pt.ell = n1 / success;
  pt.rate = k / pt.ell;
  return pt;
}

PerformancePoint chase_throughput(int k, int n1, const ChannelSpec& ch, int L_max) {
  require_awgn(ch, "chase_throughput");
  if (L_max < 1) throw std::invalid_argument("chase_throughput: L_max < 1");
  // Attempt L decodes the n1-symbol block at combined SNR L*eta; attempts
  // beyond L_max keep the L_max failure probability.
  std::vector<double> fail(L_max);
  for (int L = 1; L <= L_max; ++L) {
    double r2 = n1 * (1.0 + L * ch.eta) / std::exp2(2.0 * k / static_cast<double>(n1));
    fail[L - 1] = chi_square_tail(n1, r2);
  }
  const double q_cap = fail[L_max - 1];
  if (!(q_cap < 1.0))
    throw std::domain_error("chase_throughput: failure probability stuck at 1");
  double attempts = 0.0;
  double c = 1.0;  // P[first j attempts all fail]
  for (int j = 0; j < L_max; ++j) {
    attempts += c;
    c *= fail[j];
  }
  attempts += c / (1.0 - q_cap);
  PerformancePoint pt;
  pt.ell = n1 * attempts;
  pt.rate = k / pt.ell;
  return pt;
}

}  // namespace irntc
