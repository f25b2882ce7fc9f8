#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace irntc {

// Rate-1/3 feedforward convolutional code with memory nu. Generator taps are
// MSB-first: bit nu of each generator multiplies the current input bit,
// bit nu-i the input from i steps back.
struct ConvCode {
  int nu = 0;
  std::array<uint32_t, 3> gen{};

  // 64-state code, generators (133, 171, 165) octal (the LTE tail-biting
  // convolutional code).
  static ConvCode cc64();
  // 1024-state code, generators (2325, 2731, 3747) octal.
  static ConvCode cc1024();

  int states() const { return 1 << nu; }
};

// Tail-biting encoding of a k-bit message (k >= nu): the encoder starts in
// the state given by the last nu message bits, so it ends in the same state.
// Output holds 3k mother-code bits, index 3t + c for generator c at time t.
std::vector<uint8_t> tb_encode(const ConvCode&, const std::vector<uint8_t>& message);

// Transmission order of the 3k mother-code bits: the generator-0 parities in
// a seeded random time order, then generator 1, then generator 2. Every
// prefix of the order is the puncturing pattern of the corresponding
// decoding attempt, so incremental transmissions are nested.
std::vector<int> rate_match_order(int k, uint64_t seed);

struct TbDecodeResult {
  std::vector<uint8_t> message;
  double metric = 0.0;
  bool tb_path = true;  // the decoded path is tail-biting
  bool exact = true;    // the decision is the exact tail-biting ML decision
  int wraps_used = 0;   // wrap-around passes (WAVA only)
};

// Exact tail-biting ML decoding. `cost` holds two additive branch costs per
// mother-code bit (coded bit = 0 / 1); untransmitted bits carry equal costs.
// Fast path: one unconstrained Viterbi pass whose winner, when tail-biting,
// is already the TB-ML decision. Otherwise each start state is searched
// exhaustively with an admissible prune against the incumbent metric.
// `hint`, when given, seeds the incumbent with that message's metric; it only
// accelerates the pruning and provably never changes the decision.
TbDecodeResult tb_ml_decode(const ConvCode&, int k, const std::vector<double>& cost,
                            const std::vector<uint8_t>* hint = nullptr);

// Wrap-around Viterbi: repeated unconstrained passes, each warm-started from
// the previous pass's final metrics, keeping the best tail-biting path seen.
// Exact when the first pass already closes on itself; otherwise a
// near-ML heuristic suitable for large state counts.
TbDecodeResult wava_decode(const ConvCode&, int k, const std::vector<double>& cost,
                           int max_wraps = 4);

}  // namespace irntc
