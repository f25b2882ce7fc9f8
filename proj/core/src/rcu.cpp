#include "irntc/rcu.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "irntc/rng.hpp"
#include "irntc/special.hpp"

namespace irntc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.6931471805599453094;

struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

// log(n!) table shared across the series evaluation.
std::vector<double> log_factorials(int n_max) {
  std::vector<double> lf(n_max + 1, 0.0);
  for (int i = 2; i <= n_max; ++i) lf[i] = lf[i - 1] + std::log(i);
  return lf;
}

double xi_from_tables(int n, int k, double p, const std::vector<double>& lf) {
  if (n == 0) return 1.0;
  const double lp = std::log(p), lq = std::log1p(-p);
  const double log_m = k * kLn2;
  const double log_half_n = -n * kLn2;
  double prefix = kNegInf;  // log sum_{j<=t} C(n,j) 2^-n
  KahanSum sum;
  for (int t = 0; t <= n; ++t) {
    double lbin = lf[n] - lf[t] - lf[n - t];
    prefix = log_sum_exp(prefix, lbin + log_half_n);
    double inner = log_m + prefix;
    if (inner > 0.0) inner = 0.0;
    sum.add(std::exp(lbin + t * lp + (n - t) * lq + inner));
  }
  return sum.s < 1.0 ? sum.s : 1.0;
}

// Certified geometric envelopes for the series tail (both families are
// Chernoff arguments; any grid point yields a valid bound, so the min does).
//
// Family A: xi_n <= M gamma_a(s)^n with
//   gamma_a(s) = ((1 + e^-s)/2)(q + p e^s), s > 0,
// from bounding E[P[Bin(n,1/2) <= T]] with T ~ Bin(n,p).
// Family B: xi_n <= M^lam gamma_b(lam)^n with
//   gamma_b(lam) = 2^-lam (q^(1-lam) + p^(1-lam)), lam in (0,1),
// from min{1, MW} <= (MW)^lam and subadditivity of x^lam.
double certified_tail(int n0, int k, double p) {
  const double q = 1.0 - p;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 60; ++i) {
    double s = 0.05 * i;
    double g = 0.5 * (1.0 + std::exp(-s)) * (q + p * std::exp(s));
    if (g < 1.0) {
      double log_t = k * kLn2 + (n0 + 1) * std::log(g) - std::log1p(-g);
      best = std::min(best, std::exp(log_t));
    }
  }
  for (int i = 1; i < 40; ++i) {
    double lam = i / 40.0;
    double g = std::exp2(-lam) * (std::pow(q, 1.0 - lam) + std::pow(p, 1.0 - lam));
    if (g < 1.0) {
      double log_t = lam * k * kLn2 + (n0 + 1) * std::log(g) - std::log1p(-g);
      best = std::min(best, std::exp(log_t));
    }
  }
  return best;
}

void require_bsc(const ChannelSpec& ch, const char* who) {
  if (ch.kind != ChannelKind::BSC)
    throw std::invalid_argument(std::string(who) + ": BSC channel required");
  ch.validate();
}

}  // namespace

double bsc_rcu(int n, int k, const ChannelSpec& bsc) {
  require_bsc(bsc, "bsc_rcu");
  if (n < 0 || n > 100000) throw std::invalid_argument("bsc_rcu: n outside [0, 1e5]");
  if (k < 1) throw std::invalid_argument("bsc_rcu: k < 1");
  return xi_from_tables(n, k, bsc.p, log_factorials(n));
}

std::vector<double> bsc_rcu_series(int k, const ChannelSpec& bsc, int n_max) {
  require_bsc(bsc, "bsc_rcu_series");
  if (n_max < 0 || n_max > 100000)
    throw std::invalid_argument("bsc_rcu_series: n_max outside [0, 1e5]");
  auto lf = log_factorials(n_max);
  std::vector<double> xi(n_max + 1);
  for (int n = 0; n <= n_max; ++n) xi[n] = xi_from_tables(n, k, bsc.p, lf);
  return xi;
}

VlftPoint vlft_infinite(int k, const ChannelSpec& bsc, double tail_tol) {
  require_bsc(bsc, "vlft_infinite");
  if (!(tail_tol > 0.0)) throw std::invalid_argument("vlft_infinite: tail_tol <= 0");
  const int guard = 64 * k + 4096;
  auto lf = log_factorials(guard);
  KahanSum ell;
  double tail = std::numeric_limits<double>::infinity();
  int n = 0;
  for (; n <= guard; ++n) {
    ell.add(xi_from_tables(n, k, bsc.p, lf));
    if ((n & 15) == 0 || n > guard - 2) {
      tail = certified_tail(n, k, bsc.p);
      if (tail < tail_tol) break;
    }
  }
  if (!(tail < tail_tol))
    throw std::runtime_error("vlft_infinite: series did not certify convergence");
  VlftPoint pt;
  pt.ell = ell.s + tail;
  pt.rate = k / pt.ell;
  pt.config = {k, -1, 1, 1};
  return pt;
}

VlftPoint vlft_truncated(int k, int N, const ChannelSpec& bsc) {
  require_bsc(bsc, "vlft_truncated");
  if (N < 1) throw std::invalid_argument("vlft_truncated: N < 1");
  auto xi = bsc_rcu_series(k, bsc, N);
  KahanSum ell;
  for (int n = 0; n < N; ++n) ell.add(xi[n]);
  VlftPoint pt;
  pt.ell = ell.s;
  pt.rate = k / pt.ell;
  pt.epsilon = xi[N];
  pt.config = {k, N, 1, 1};
  return pt;
}

VlftPoint vlft_repeated(int k, int N, int I, int n1, const ChannelSpec& bsc) {
  require_bsc(bsc, "vlft_repeated");
  if (n1 < 1 || I < 1 || N < n1)
    throw std::invalid_argument("vlft_repeated: need 1 <= n1 <= N, I >= 1");
  if ((N - n1) % I != 0)
    throw std::invalid_argument("vlft_repeated: N must lie on the attempt grid n1 + j*I");
  auto xi = bsc_rcu_series(k, bsc, N);
  if (!(xi[N] < 1.0))
    throw std::runtime_error("vlft_repeated: xi_N = 1, expected latency diverges");
  KahanSum num;
  num.add(n1);
  for (int nj = n1; nj + I <= N; nj += I) num.add(I * xi[nj]);
  VlftPoint pt;
  pt.ell = num.s / (1.0 - xi[N]);
  pt.rate = k / pt.ell;
  pt.config = {k, N, I, n1};
  return pt;
}

double vlft_converse_rate(double ell, const ChannelSpec& ch) {
  if (!(ell > 0.0)) throw std::invalid_argument("vlft_converse_rate: ell <= 0");
  const double c = ch.capacity_bits();
  return c + (std::log2(ell + 1.0) + std::log2(std::exp(1.0))) / ell;
}

VlftPoint vlft_arq_best(int k, const ChannelSpec& bsc, int n_cap) {
  require_bsc(bsc, "vlft_arq_best");
  if (k < 1) throw std::invalid_argument("vlft_arq_best: k < 1");
  if (n_cap < 1)
    n_cap = static_cast<int>(std::ceil(6.0 * k / bsc.capacity_bits()));
  auto xi = bsc_rcu_series(k, bsc, n_cap);
  VlftPoint best;
  best.ell = std::numeric_limits<double>::infinity();
  for (int n1 = 1; n1 <= n_cap; ++n1) {
    if (!(xi[n1] < 1.0)) continue;
    double ell = n1 / (1.0 - xi[n1]);
    if (ell < best.ell) {
      best.ell = ell;
      best.config = {k, n1, n1, n1};
    }
  }
  if (!std::isfinite(best.ell))
    throw std::runtime_error("vlft_arq_best: no finite-latency blocklength under the cap");
  best.rate = k / best.ell;
  return best;
}

int horizon_backoff(int k, const ChannelSpec& ch, double delta_frac) {
  if (!(delta_frac >= 0.0) || !(delta_frac < 1.0))
    throw std::invalid_argument("horizon_backoff: delta_frac outside [0,1)");
  double c = ch.capacity_bits();
  return static_cast<int>(std::ceil(k / ((1.0 - delta_frac) * c)));
}

int horizon_log(int k, const ChannelSpec& ch, double a, double b) {
  double base = k / ch.capacity_bits();
  return static_cast<int>(std::ceil(base + a * std::log2(base) + b));
}

int increment_loglog(int k) {
  if (k < 2) return 1;
  return static_cast<int>(std::ceil(std::log2(static_cast<double>(k))));
}

int increment_fraction(int k) {
  return static_cast<int>(std::ceil(0.15 * k));
}

namespace {

void require_awgn(const ChannelSpec& ch, const char* who) {
  if (ch.kind != ChannelKind::AWGN)
    throw std::invalid_argument(std::string(who) + ": AWGN channel required");
  ch.validate();
}

}  // namespace

std::vector<DtPoint> dt_bound_awgn(const std::vector<int>& n_grid, int k,
                                   const ChannelSpec& awgn, int64_t samples,
                                   uint64_t seed) {
  require_awgn(awgn, "dt_bound_awgn");
  if (n_grid.empty() || samples < 1)
    throw std::invalid_argument("dt_bound_awgn: empty grid or no samples");
  for (size_t i = 0; i < n_grid.size(); ++i)
    if (n_grid[i] < 1 || (i > 0 && n_grid[i] <= n_grid[i - 1]))
      throw std::invalid_argument("dt_bound_awgn: grid must be positive increasing");

  const double eta = awgn.eta;
  const double sigma_x = std::sqrt(eta);
  const double log_m = k * kLn2;
  const double half_log = 0.5 * std::log1p(eta);
  const int n_max = n_grid.back();
  RngStream rng(seed, 0);

  std::vector<KahanSum> sums(n_grid.size()), sq(n_grid.size());
  for (int64_t s = 0; s < samples; ++s) {
    double info = 0.0;  // accumulated information density, nats
    size_t g = 0;
    for (int n = 1; n <= n_max && g < n_grid.size(); ++n) {
      double x = rng.gaussian(sigma_x);
      double z = rng.gaussian();
      double y = x + z;
      info += half_log + y * y / (2.0 * (1.0 + eta)) - z * z / 2.0;
      if (n == n_grid[g]) {
        double gap = info - log_m;
        double v = gap > 0.0 ? std::exp(-gap) : 1.0;
        sums[g].add(v);
        sq[g].add(v * v);
        ++g;
      }
    }
  }
  std::vector<DtPoint> out(n_grid.size());
  for (size_t g = 0; g < n_grid.size(); ++g) {
    double mean = sums[g].s / samples;
    double var = std::max(0.0, sq[g].s / samples - mean * mean);
    out[g] = {n_grid[g], mean, std::sqrt(var / samples)};
  }
  return out;
}

DtVlft dt_vlft_infinite(int k, const ChannelSpec& awgn, int64_t samples,
                        uint64_t seed) {
  require_awgn(awgn, "dt_vlft_infinite");
  if (samples < 2) throw std::invalid_argument("dt_vlft_infinite: samples < 2");
  const double eta = awgn.eta;
  const double sigma_x = std::sqrt(eta);
  const double log_m = k * kLn2;
  const double half_log = 0.5 * std::log1p(eta);
  const int64_t guard = 64LL * k + 4096;
  RngStream rng(seed, 0);

  KahanSum total, total_sq;
  for (int64_t s = 0; s < samples; ++s) {
    double info = 0.0;
    double tau = 1.0;  // n = 0 term
    for (int64_t n = 1; n <= guard; ++n) {
      double x = rng.gaussian(sigma_x);
      double z = rng.gaussian();
      double y = x + z;
      info += half_log + y * y / (2.0 * (1.0 + eta)) - z * z / 2.0;
      double gap = info - log_m;
      if (gap > 40.0) break;  // remaining summands < 4e-18 each and shrinking
      tau += gap > 0.0 ? std::exp(-gap) : 1.0;
      if (n == guard)
        throw std::runtime_error("dt_vlft_infinite: sample did not converge");
    }
    total.add(tau);
    total_sq.add(tau * tau);
  }
  double mean = total.s / samples;
  double var = std::max(0.0, total_sq.s / samples - mean * mean);
  DtVlft out;
  out.ell = mean;
  out.rate = k / mean;
  out.se = std::sqrt(var / samples);
  return out;
}

}  // namespace irntc
