#pragma once

#include <cstdint>
#include <vector>

#include "irntc/channel.hpp"
#include "irntc/schedule.hpp"
#include "irntc/special.hpp"

namespace irntc {

enum class DecodeApprox { BD, ML };
enum class Jointness { MARGINAL, JOINT_EXACT, JOINT_CHERNOFF_UB, JOINT_CHERNOFF_LB };
enum class RepeatMode { REPEATED, NON_REPEATING };

// Smallest Hamming radius r such that M = 2^k balls of radius r have total
// volume at least 2^n (exact integer computation), so that
// M V(r-1) < 2^n <= M V(r). When the volumes tie exactly, the sphere-packing
// argument degenerates and `degenerate` is set.
struct BscRadius {
  int64_t r = 0;
  bool degenerate = false;
};
BscRadius bsc_hamming_radius(int n, int k);

// Squared decoding radius for sphere-packing 2^k cells inside the n-sphere
// of squared radius n(1+eta): r^2 = n (1+eta) / 2^(2k/n).
double awgn_decoding_radius2(int n, int k, double eta);

struct DecodingRadii {
  std::vector<double> r2;      // AWGN (empty for BSC)
  std::vector<BscRadius> r;    // BSC (empty for AWGN)
};
DecodingRadii bd_radii(const IncrementSchedule& s, const ChannelSpec& ch);

struct ErrorProfile {
  IncrementSchedule schedule;
  DecodeApprox decoding = DecodeApprox::BD;
  Jointness jointness = Jointness::MARGINAL;
  std::vector<double> marginal;        // P[zeta_j], per attempt
  std::vector<double> joint;           // P[E_j]; empty when MARGINAL
  double joint_error_estimate = 0.0;   // quadrature error estimate (JOINT_EXACT)

  // Probabilities used for latency evaluation: joint when available,
  // otherwise the marginal substitution (an upper bound on ell).
  const std::vector<double>& stop_probs() const {
    return joint.empty() ? marginal : joint;
  }
};

// Marginal profile P[zeta_j] under bounded-distance decoding (both channels).
ErrorProfile marginal_profile_bd(const IncrementSchedule&, const ChannelSpec&);

// Marginal profile under ML decoding via the sphere-packing cone-error
// asymptotic (AWGN only); falls back to the BD marginal outside its
// validity region (rates at or above capacity).
ErrorProfile marginal_profile_ml(const IncrementSchedule&, const ChannelSpec&);

// Joint profile P[E_j] = P[zeta_1, ..., zeta_j] under BD decoding (AWGN),
// by propagating the noise-energy density between decoding attempts.
// tol is the absolute accuracy target per attempt; throws std::runtime_error
// when the adaptive grid cannot certify it.
ErrorProfile joint_profile_bd(const IncrementSchedule&, const ChannelSpec&,
                              double tol = 1e-6);

struct PerformancePoint {
  double ell = 0.0;
  double rate = 0.0;    // k / ell
  double outage = 0.0;  // P[E_m] for NON_REPEATING, else 0
};

// Expected latency / throughput of the feedback scheme implied by a profile:
// REPEATED restarts with fresh noise after attempt m fails; NON_REPEATING
// declares an outage.
PerformancePoint expected_latency(const ErrorProfile&, RepeatMode);

// ARQ (m = 1, full retransmissions): ell = n1 / P[decode], R_t = (k/n1) P[decode].
PerformancePoint arq_throughput(int k, int n1, const ChannelSpec&);

// ARQ with Chase combining of up to L_max repeated copies (AWGN): attempt L
// decodes with the combined SNR L*eta; attempts beyond L_max keep the L_max
// success probability. Independence across attempts makes this an upper bound
// on throughput.
PerformancePoint chase_throughput(int k, int n1, const ChannelSpec&, int L_max);

// Half-angle of a cone covering 2^-k of the unit n-sphere's surface.
double sp59_cone_half_angle(int n, int k);

// Asymptotic probability that AWGN noise carries a codeword outside a cone
// of half-angle theta at blocklength n and amplitude sqrt(eta) (Shannon's
// sphere-packing analysis). Returns NaN outside the validity region
// A tan(theta) > 1 (i.e. rate at or above capacity).
double sp59_error_asymptotic(int n, double eta, double theta);

}  // namespace irntc
