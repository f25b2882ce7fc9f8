#pragma once

#include <string>

namespace irntc {

enum class ChannelKind { BSC, AWGN };

double db_to_linear(double db);
double linear_to_db(double linear);

// Memoryless channel description. BSC holds the crossover probability p in
// (0, 1/2); AWGN holds the linear SNR eta > 0 (unit noise variance, per-symbol
// power eta). dB values appear only at the interface boundary.
struct ChannelSpec {
  ChannelKind kind = ChannelKind::BSC;
  double p = 0.0;
  double eta = 0.0;

  static ChannelSpec bsc(double p);
  static ChannelSpec awgn_linear(double eta);
  static ChannelSpec awgn_db(double snr_db);

  // JSON form: {"kind":"bsc","p":0.0789} or {"kind":"awgn","snr_db":2.0}.
  static ChannelSpec from_json(const std::string& text);
  std::string to_json() const;

  double capacity_bits() const;
  double snr_db() const;  // AWGN only
  void validate() const;  // throws std::invalid_argument
  std::string describe() const;
};

}  // namespace irntc
