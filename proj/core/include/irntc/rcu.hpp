#pragma once

#include <cstdint>
#include <vector>

#include "irntc/channel.hpp"

namespace irntc {

// Random-coding union achievability xi_n for M = 2^k messages on the BSC:
//   xi_n <= sum_t C(n,t) p^t q^(n-t) min{1, M sum_{j<=t} C(n,j) 2^-n},
// evaluated in the log domain. xi_0 = 1. Requires 0 <= n <= 1e5.
double bsc_rcu(int n, int k, const ChannelSpec& bsc);

// xi_0..xi_n_max in one pass (shared factorial tables).
std::vector<double> bsc_rcu_series(int k, const ChannelSpec& bsc, int n_max);

struct VlftConfig {
  int k = 0;
  int64_t N = -1;  // decoding horizon; -1 means unbounded
  int I = 1;       // decoding-attempt spacing after n1
  int n1 = 1;      // first decoding attempt
};

struct VlftPoint {
  double ell = 0.0;
  double rate = 0.0;     // k / ell
  double epsilon = 0.0;  // residual error (0 for repeated/infinite variants)
  VlftConfig config;
};

// Unbounded-horizon expected latency ell <= sum_n xi_n; the series is
// truncated once a certified geometric tail bound drops below tail_tol and
// that bound is added to the sum, so the result remains an upper bound.
VlftPoint vlft_infinite(int k, const ChannelSpec& bsc, double tail_tol = 1e-9);

// Single-codeword transmission truncated at N: ell = sum_{n<N} xi_n,
// epsilon = xi_N.
VlftPoint vlft_truncated(int k, int N, const ChannelSpec& bsc);

// Repeated transmission with decoding attempts at n_j = n1 + (j-1) I up to N,
// then retransmission with fresh noise: zero error probability,
// ell = (n1 + I sum_{j>=2} xi_{n_{j-1}}) / (1 - xi_N).
// Requires (N - n1) % I == 0.
VlftPoint vlft_repeated(int k, int N, int I, int n1, const ChannelSpec& bsc);

// Converse: max rate of any variable-length feedback code with expected
// latency ell on channel ch.
double vlft_converse_rate(double ell, const ChannelSpec& ch);

// ARQ special case (decode only at n1, then retransmit): best n1 <= n_cap
// minimizing ell = n1 / (1 - xi_{n1}); n_cap < 1 selects ceil(6k/C).
VlftPoint vlft_arq_best(int k, const ChannelSpec& bsc, int n_cap = -1);

// Horizon / increment scaling rules used to build curves over k.
int horizon_backoff(int k, const ChannelSpec& ch, double delta_frac);
int horizon_log(int k, const ChannelSpec& ch, double a = 10.0, double b = 30.0);
int increment_loglog(int k);    // ceil(log2 log2 M) = ceil(log2 k)
int increment_fraction(int k);  // ceil(0.15 k)

// Dependence-testing achievability on the AWGN channel, Monte-Carlo over a
// Gaussian random codebook. xi_n <= E[exp(-max(0, i_n - ln M))].
struct DtPoint {
  int n = 0;
  double xi = 0.0;
  double se = 0.0;  // standard error of the estimate
};
std::vector<DtPoint> dt_bound_awgn(const std::vector<int>& n_grid, int k,
                                   const ChannelSpec& awgn, int64_t samples,
                                   uint64_t seed);

struct DtVlft {
  double ell = 0.0;
  double rate = 0.0;
  double se = 0.0;  // standard error on ell
};
// Unbounded-horizon DT latency: ell ~ E[sum_n exp(-max(0, i_n - ln M))],
// accumulated per sample until the summand is negligible.
DtVlft dt_vlft_infinite(int k, const ChannelSpec& awgn, int64_t samples,
                        uint64_t seed);

}  // namespace irntc
