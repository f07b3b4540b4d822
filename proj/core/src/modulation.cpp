#include "amc/modulation.hpp"

#include "amc/error.hpp"

namespace amc {

ClassLabel class_of(const ModulationScheme& scheme) noexcept {
  if (scheme.family == Family::OFDM) return ClassLabel::Ofdm;
  switch (scheme.order) {
    case Order::BPSK: return ClassLabel::ScBpsk;
    case Order::QPSK: return ClassLabel::ScQpsk;
    case Order::QAM16: return ClassLabel::Sc16Qam;
    case Order::QAM64: return ClassLabel::Sc64Qam;
  }
  return ClassLabel::ScBpsk;
}

int bits_per_symbol(Order order) noexcept {
  switch (order) {
    case Order::BPSK: return 1;
    case Order::QPSK: return 2;
    case Order::QAM16: return 4;
    case Order::QAM64: return 6;
  }
  return 1;
}

std::string to_string(Family family) { return family == Family::SC ? "SC" : "OFDM"; }

std::string to_string(Order order) {
  switch (order) {
    case Order::BPSK: return "BPSK";
    case Order::QPSK: return "QPSK";
    case Order::QAM16: return "16QAM";
    case Order::QAM64: return "64QAM";
  }
  return "?";
}

std::string to_string(const ModulationScheme& scheme) {
  return to_string(scheme.family) + "-" + to_string(scheme.order);
}

std::string to_string(ClassLabel label) {
  switch (label) {
    case ClassLabel::ScBpsk: return "SC-BPSK";
    case ClassLabel::ScQpsk: return "SC-QPSK";
    case ClassLabel::Sc16Qam: return "SC-16QAM";
    case ClassLabel::Sc64Qam: return "SC-64QAM";
    case ClassLabel::Ofdm: return "OFDM";
  }
  return "?";
}

ModulationScheme parse_scheme(std::string_view name) {
  const auto dash = name.find('-');
  if (dash == std::string_view::npos) throw ParameterError("unknown modulation scheme '" + std::string(name) + "'");
  const auto fam = name.substr(0, dash);
  const auto ord = name.substr(dash + 1);
  ModulationScheme s;
  if (fam == "SC") s.family = Family::SC;
  else if (fam == "OFDM") s.family = Family::OFDM;
  else throw ParameterError("unknown carrier family '" + std::string(fam) + "'");
  if (ord == "BPSK") s.order = Order::BPSK;
  else if (ord == "QPSK") s.order = Order::QPSK;
  else if (ord == "16QAM") s.order = Order::QAM16;
  else if (ord == "64QAM") s.order = Order::QAM64;
  else throw ParameterError("unknown modulation order '" + std::string(ord) + "'");
  return s;
}

std::optional<ClassLabel> try_parse_class(std::string_view name) noexcept {
  for (ClassLabel c : kAllClasses)
    if (to_string(c) == name) return c;
  return std::nullopt;
}

ClassLabel parse_class(std::string_view name) {
  if (auto c = try_parse_class(name)) return *c;
  throw ParameterError("unknown class label '" + std::string(name) + "'");
}

}  // namespace amc
