#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace amc {

enum class Family : std::uint8_t { SC, OFDM };
enum class Order : std::uint8_t { BPSK, QPSK, QAM16, QAM64 };

inline constexpr std::array<Order, 4> kAllOrders = {Order::BPSK, Order::QPSK, Order::QAM16,
                                                   Order::QAM64};

/// Transmitted waveform: carrier family plus the (sub)carrier constellation.
struct ModulationScheme {
  Family family = Family::SC;
  Order order = Order::BPSK;

  friend bool operator==(const ModulationScheme&, const ModulationScheme&) = default;
};

/// The five classification targets. All OFDM orders collapse into one class.
enum class ClassLabel : std::uint8_t { ScBpsk = 0, ScQpsk = 1, Sc16Qam = 2, Sc64Qam = 3, Ofdm = 4 };

inline constexpr std::size_t kNumClasses = 5;
inline constexpr std::array<ClassLabel, kNumClasses> kAllClasses = {
    ClassLabel::ScBpsk, ClassLabel::ScQpsk, ClassLabel::Sc16Qam, ClassLabel::Sc64Qam,
    ClassLabel::Ofdm};

ClassLabel class_of(const ModulationScheme& scheme) noexcept;

constexpr std::size_t class_index(ClassLabel label) noexcept {
  return static_cast<std::size_t>(label);
}

/// Bits per symbol of a constellation.
int bits_per_symbol(Order order) noexcept;

std::string to_string(Family family);
std::string to_string(Order order);
/// "SC-BPSK", "OFDM-64QAM", ...
std::string to_string(const ModulationScheme& scheme);
/// "SC-BPSK", "SC-QPSK", "SC-16QAM", "SC-64QAM", "OFDM".
std::string to_string(ClassLabel label);

/// Inverse of to_string(ModulationScheme); throws ParameterError on unknown names.
ModulationScheme parse_scheme(std::string_view name);
/// Inverse of to_string(ClassLabel); throws ParameterError on unknown names.
ClassLabel parse_class(std::string_view name);
std::optional<ClassLabel> try_parse_class(std::string_view name) noexcept;

}  // namespace amc
