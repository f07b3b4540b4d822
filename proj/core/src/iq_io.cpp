#include "amc/iq_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "amc/error.hpp"
#include "json.hpp"

namespace amc {
namespace {

using nlohmann::json;

std::uint32_t to_le(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big)
    v = ((v & 0xFFU) << 24) | ((v & 0xFF00U) << 8) | ((v >> 8) & 0xFF00U) | (v >> 24);
  return v;
}

std::uint32_t float_bits(float f) { return std::bit_cast<std::uint32_t>(f); }
float bits_float(std::uint32_t u) { return std::bit_cast<float>(u); }

}  // namespace

std::string to_json(const IqMetadata& meta) {
  json j;
  j["segment_id"] = meta.segment_id;
  j["sample_rate"] = meta.sample_rate;
  j["scheme"] = to_string(meta.scheme);
  j["class"] = to_string(class_of(meta.scheme));
  j["seed"] = meta.seed;
  j["format"] = "cf32le";
  j["impairments"] = {
      {"snr_class_db", meta.snr_class_db},
      {"sir_class_db", meta.sir_class_db ? json(*meta.sir_class_db) : json(nullptr)},
      {"interferer", meta.interferer ? json(to_string(*meta.interferer)) : json(nullptr)},
      {"tx_profile", meta.tx_profile},
      {"rx_profile", meta.rx_profile},
  };
  return j.dump(2);
}

IqMetadata iq_metadata_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    IqMetadata m;
    m.segment_id = j.at("segment_id").get<std::uint64_t>();
    m.sample_rate = j.at("sample_rate").get<double>();
    m.scheme = parse_scheme(j.at("scheme").get<std::string>());
    m.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("format") && j["format"] != "cf32le")
      throw FormatError("unsupported sample format " + j["format"].dump());
    const json& imp = j.at("impairments");
    m.snr_class_db = imp.at("snr_class_db").get<double>();
    if (imp.contains("sir_class_db") && !imp["sir_class_db"].is_null())
      m.sir_class_db = imp["sir_class_db"].get<double>();
    if (imp.contains("interferer") && !imp["interferer"].is_null())
      m.interferer = parse_scheme(imp["interferer"].get<std::string>());
    m.tx_profile = imp.value("tx_profile", "LAB");
    m.rx_profile = imp.value("rx_profile", "LAB");
    if (!(m.sample_rate > 0.0)) throw FormatError("sample_rate must be positive");
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("IQ sidecar: ") + e.what());
  } catch (const ParameterError& e) {
    throw FormatError(std::string("IQ sidecar: ") + e.what());
  }
}

std::filesystem::path write_iq(const std::filesystem::path& stem, const IqSegment& segment,
                               const IqMetadata& meta) {
  auto samples_path = stem;
  samples_path += ".cf32";
  auto meta_path = stem;
  meta_path += ".json";

  std::vector<std::uint32_t> words(segment.samples.size() * 2);
  for (std::size_t i = 0; i < segment.samples.size(); ++i) {
    words[2 * i] = to_le(float_bits(static_cast<float>(segment.samples[i].real())));
    words[2 * i + 1] = to_le(float_bits(static_cast<float>(segment.samples[i].imag())));
  }
  std::ofstream out(samples_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + samples_path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(words.data()),
            static_cast<std::streamsize>(words.size() * sizeof(std::uint32_t)));
  if (!out) throw IoError("write failed: " + samples_path.string());

  IqMetadata m = meta;
  m.sample_rate = segment.sample_rate;
  std::ofstream side(meta_path, std::ios::trunc);
  if (!side) throw IoError("cannot open " + meta_path.string() + " for writing");
  side << to_json(m) << '\n';
  if (!side) throw IoError("write failed: " + meta_path.string());
  return samples_path;
}

IqRecording read_iq(const std::filesystem::path& samples_path) {
  auto meta_path = samples_path;
  meta_path.replace_extension(".json");
  std::ifstream side(meta_path);
  if (!side) throw IoError("missing sidecar " + meta_path.string());
  std::stringstream ss;
  ss << side.rdbuf();
  IqRecording rec;
  rec.meta = iq_metadata_from_json(ss.str());

  std::ifstream in(samples_path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot open " + samples_path.string());
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes % 8 != 0) throw FormatError(samples_path.string() + ": size is not a multiple of 8 bytes");
  in.seekg(0);
  std::vector<std::uint32_t> words(bytes / 4);
  in.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw IoError("read failed: " + samples_path.string());

  rec.segment.sample_rate = rec.meta.sample_rate;
  rec.segment.samples.resize(words.size() / 2);
  for (std::size_t i = 0; i < rec.segment.samples.size(); ++i)
    rec.segment.samples[i] = {bits_float(to_le(words[2 * i])), bits_float(to_le(words[2 * i + 1]))};
  return rec;
}

}  // namespace amc
