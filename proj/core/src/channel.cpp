#include "irntc/channel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "irntc/special.hpp"
#include "json.hpp"

namespace irntc {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) {
  if (!(linear > 0.0)) throw std::invalid_argument("linear_to_db: value <= 0");
  return 10.0 * std::log10(linear);
}

ChannelSpec ChannelSpec::bsc(double p) {
  ChannelSpec ch;
  ch.kind = ChannelKind::BSC;
  ch.p = p;
  ch.validate();
  return ch;
}

ChannelSpec ChannelSpec::awgn_linear(double eta) {
  ChannelSpec ch;
  ch.kind = ChannelKind::AWGN;
  ch.eta = eta;
  ch.validate();
  return ch;
}

ChannelSpec ChannelSpec::awgn_db(double snr_db) {
  return awgn_linear(db_to_linear(snr_db));
}

ChannelSpec ChannelSpec::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "bsc") return bsc(j.at("p").get<double>());
  if (kind == "awgn") {
    if (j.contains("snr_db")) return awgn_db(j.at("snr_db").get<double>());
    return awgn_linear(j.at("eta").get<double>());
  }
  throw std::invalid_argument("ChannelSpec: unknown kind '" + kind + "'");
}

std::string ChannelSpec::to_json() const {
  nlohmann::json j;
  if (kind == ChannelKind::BSC) {
    j["kind"] = "bsc";
    j["p"] = p;
  } else {
    j["kind"] = "awgn";
    j["snr_db"] = snr_db();
  }
  return j.dump();
}

double ChannelSpec::capacity_bits() const {
  validate();
  if (kind == ChannelKind::BSC) return 1.0 - binary_entropy(p);
  return 0.5 * std::log2(1.0 + eta);
}

double ChannelSpec::snr_db() const {
  if (kind != ChannelKind::AWGN)
    throw std::logic_error("snr_db: not an AWGN channel");
  return linear_to_db(eta);
}

void ChannelSpec::validate() const {
  if (kind == ChannelKind::BSC) {
    if (!(p > 0.0) || !(p < 0.5))
      throw std::invalid_argument("ChannelSpec: BSC requires p in (0, 1/2)");
  } else {
    if (!(eta > 0.0) || !std::isfinite(eta))
      throw std::invalid_argument("ChannelSpec: AWGN requires eta > 0");
  }
}

std::string ChannelSpec::describe() const {
  std::ostringstream os;
  if (kind == ChannelKind::BSC)
    os << "BSC(p=" << p << ")";
  else
    os << "AWGN(" << snr_db() << " dB)";
  return os.str();
}

}  // namespace irntc
