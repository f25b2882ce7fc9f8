#pragma once

#include <cstdint>
#include <vector>

#include "irntc/rcsp.hpp"
#include "irntc/schedule.hpp"

namespace irntc {

enum class DecoderKind {
  CC64_ML,      // 64-state tail-biting code, exact ML decoding
  CC1024_ML,    // 1024-state code, exact ML (slow; for validation)
  CC1024_WAVA,  // 1024-state code, wrap-around Viterbi
  IDEAL_BD,     // no code: success iff the noise falls in the decoding ball
};

struct SimConfig {
  IncrementSchedule schedule;
  ChannelSpec channel;
  DecoderKind decoder = DecoderKind::CC64_ML;
  RepeatMode mode = RepeatMode::REPEATED;
  int64_t trials = 10000;
  uint64_t seed = 1;
  uint64_t rate_match_seed = 0x1905;  // fixed per-code puncturing order
  int wava_wraps = 4;
  int max_rounds = 1000;  // REPEATED: abort the trial beyond this many rounds

  void validate() const;
};

struct SimResult {
  int64_t trials = 0;
  int64_t completed = 0;     // trials acknowledged (REPEATED: not aborted)
  int64_t aborted = 0;       // trials stopped at max_rounds, reported not dropped
  int64_t outages = 0;       // NON_REPEATING: messages never acknowledged
  int64_t rounds = 0;        // transmissions, including restarts
  int64_t channel_uses = 0;  // symbols sent in completed + outage trials
  int64_t aborted_uses = 0;  // symbols sent in aborted trials (kept separate)
  std::vector<int64_t> stop_counts;        // acknowledgements at attempt j
  std::vector<int64_t> joint_fail_counts;  // rounds with attempts 1..j all failed
  std::vector<int64_t> rounds_histogram;   // trials that took exactly r rounds
  int64_t exact_decodes = 0;      // decoder decisions certified exact
  int64_t heuristic_decodes = 0;  // WAVA decisions without the certificate
  double ell_hat = 0.0;  // channel_uses / completed (REPEATED) or / trials
  double ell_se = 0.0;   // standard error of ell_hat
  double rate = 0.0;     // k * acknowledged / channel_uses
};

// Monte-Carlo run of the incremental-redundancy scheme with a genie
// acknowledgement: transmission stops at the first decoding attempt whose
// output equals the true message (for IDEAL_BD, the first attempt whose
// noise lies inside the decoding ball). REPEATED restarts after the last
// attempt fails, retransmitting the same codeword over fresh noise;
// NON_REPEATING declares an outage instead. Trials draw from independent
// (seed, trial) random streams, so results do not depend on execution order.
SimResult simulate_genie(const SimConfig&);

struct EmpiricalTrajectoryRow {
  int j = 0;
  int n_j = 0;
  double fail_rate = 0.0;  // empirical P[attempts 1..j all fail], per round
  double se = 0.0;         // binomial standard error
};
// Empirical joint decoding-error trajectory of a configuration.
std::vector<EmpiricalTrajectoryRow> empirical_trajectory(const SimConfig&);

}  // namespace irntc
