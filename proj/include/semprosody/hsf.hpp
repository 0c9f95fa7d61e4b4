#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "semprosody/error.hpp"

// HSF1 layout, all integers little-endian:
//   "HSF1" | u32 header length | JSON header | n_items label bytes (0/1) |
//   f32 vectors, item-major, layers enc_1..enc_N then dec_1..dec_M.

namespace semprosody {

enum class Pooling { MEAN, LAST, MARKER };

inline std::string_view to_string(Pooling p) {
  switch (p) {
  case Pooling::MEAN:
    return "MEAN";
  case Pooling::LAST:
    return "LAST";
  case Pooling::MARKER:
    return "MARKER";
  }
  return "?";
}

inline std::optional<Pooling> parse_pooling(std::string_view s) {
  for (auto p : {Pooling::MEAN, Pooling::LAST, Pooling::MARKER})
    if (s == to_string(p))
      return p;
  return std::nullopt;
}

struct HsfHeader {
  std::string model_name;
  std::size_t n_enc_layers = 0;
  std::size_t n_dec_layers = 0;
  std::size_t hidden_dim = 0;
  std::size_t n_items = 0;
  Pooling pooling = Pooling::MEAN;
  /// Free-form extraction metadata (e.g. how decoder states were produced).
  nlohmann::json meta = nlohmann::json::object();

  std::size_t n_layers() const { return n_enc_layers + n_dec_layers; }
  std::size_t payload_floats() const { return n_items * n_layers() * hidden_dim; }

  bool operator==(const HsfHeader &) const = default;
};

enum class LayerSide { ENC, DEC };

inline std::string_view to_string(LayerSide s) {
  return s == LayerSide::ENC ? "enc" : "dec";
}

/// Layer i is the output of transformer block i, counted from 1.
struct LayerId {
  LayerSide side = LayerSide::ENC;
  std::size_t index = 1;

  bool operator==(const LayerId &) const = default;
};

struct ProbeDataset {
  HsfHeader header;
  std::vector<std::uint8_t> labels;
  std::vector<float> vectors;

  std::size_t flat_layer(LayerId id) const {
    const auto count =
        id.side == LayerSide::ENC ? header.n_enc_layers : header.n_dec_layers;
    if (id.index < 1 || id.index > count)
      throw DataError("layer " + std::string(to_string(id.side)) +
                      std::to_string(id.index) + " out of range");
    return id.side == LayerSide::ENC ? id.index - 1
                                     : header.n_enc_layers + id.index - 1;
  }

  std::vector<LayerId> layers() const {
    std::vector<LayerId> out;
    for (std::size_t i = 1; i <= header.n_enc_layers; ++i)
      out.push_back({LayerSide::ENC, i});
    for (std::size_t i = 1; i <= header.n_dec_layers; ++i)
      out.push_back({LayerSide::DEC, i});
    return out;
  }

  std::span<const float> vector(std::size_t item, LayerId layer) const {
    const auto d = header.hidden_dim;
    const auto off = (item * header.n_layers() + flat_layer(layer)) * d;
    return {vectors.data() + off, d};
  }
  std::span<float> vector(std::size_t item, LayerId layer) {
    const auto d = header.hidden_dim;
    const auto off = (item * header.n_layers() + flat_layer(layer)) * d;
    return {vectors.data() + off, d};
  }

  bool operator==(const ProbeDataset &) const = default;
};

class HsfError : public DataError {
public:
  enum class Kind { BadMagic, BadHeader, Truncated, SizeMismatch, BadLabel };
  HsfError(Kind kind, const std::string &what) : DataError(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

inline constexpr char kHsfMagic[4] = {'H', 'S', 'F', '1'};

inline nlohmann::json to_json(const HsfHeader &h) {
  nlohmann::json j;
  j["model_name"] = h.model_name;
  j["n_enc_layers"] = h.n_enc_layers;
  j["n_dec_layers"] = h.n_dec_layers;
  j["hidden_dim"] = h.hidden_dim;
  j["n_items"] = h.n_items;
  j["pooling"] = std::string(to_string(h.pooling));
  j["dtype"] = "f32";
  if (!h.meta.empty())
    j["meta"] = h.meta;
  return j;
}

inline void validate_header(const HsfHeader &h) {
  if (h.n_enc_layers == 0 || h.n_dec_layers == 0 || h.hidden_dim == 0 || h.n_items == 0)
    throw HsfError(HsfError::Kind::BadHeader, "HSF1 header counts must all be positive");
}

inline HsfHeader header_from_json(const nlohmann::json &j) {
  auto bad = [](const std::string &m) { return HsfError(HsfError::Kind::BadHeader, m); };
  if (!j.is_object())
    throw bad("HSF1 header is not a JSON object");
  HsfHeader h;
  auto count = [&](const char *key) -> std::size_t {
    if (!j.contains(key) || !j[key].is_number_unsigned())
      throw bad(std::string("HSF1 header field '") + key + "' must be a non-negative integer");
    return j[key].get<std::size_t>();
  };
  if (!j.contains("model_name") || !j["model_name"].is_string())
    throw bad("HSF1 header field 'model_name' must be a string");
  h.model_name = j["model_name"].get<std::string>();
  h.n_enc_layers = count("n_enc_layers");
  h.n_dec_layers = count("n_dec_layers");
  h.hidden_dim = count("hidden_dim");
  h.n_items = count("n_items");
  if (!j.contains("pooling") || !j["pooling"].is_string() ||
      !parse_pooling(j["pooling"].get<std::string>()))
    throw bad("HSF1 header field 'pooling' must be MEAN, LAST or MARKER");
  h.pooling = *parse_pooling(j["pooling"].get<std::string>());
  if (!j.contains("dtype") || j["dtype"] != "f32")
    throw bad("HSF1 dtype must be \"f32\"");
  if (j.contains("meta")) {
    if (!j["meta"].is_object())
      throw bad("HSF1 header field 'meta' must be an object");
    h.meta = j["meta"];
  }
  validate_header(h);
  return h;
}

inline std::vector<std::uint8_t> encode_hsf(const ProbeDataset &d) {
  validate_header(d.header);
  if (d.labels.size() != d.header.n_items)
    throw DataError("label count does not match header n_items");
  if (d.vectors.size() != d.header.payload_floats())
    throw DataError("vector count does not match header dimensions");
  for (auto l : d.labels)
    if (l > 1)
      throw DataError("labels must be 0 or 1");
  const auto header = to_json(d.header).dump();
  std::vector<std::uint8_t> out;
  out.reserve(8 + header.size() + d.labels.size() + 4 * d.vectors.size());
  out.insert(out.end(), std::begin(kHsfMagic), std::end(kHsfMagic));
  const auto hl = static_cast<std::uint32_t>(header.size());
  for (int b = 0; b < 4; ++b)
    out.push_back(static_cast<std::uint8_t>(hl >> (8 * b)));
  out.insert(out.end(), header.begin(), header.end());
  out.insert(out.end(), d.labels.begin(), d.labels.end());
  for (float f : d.vectors) {
    const auto bits = std::bit_cast<std::uint32_t>(f);
    for (int b = 0; b < 4; ++b)
      out.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
  }
  return out;
}

inline ProbeDataset decode_hsf(std::span<const std::uint8_t> bytes) {
  using K = HsfError::Kind;
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kHsfMagic, 4) != 0)
    throw HsfError(K::BadMagic, "bad magic: not an HSF1 file");
  if (bytes.size() < 8)
    throw HsfError(K::Truncated, "truncated header");
  std::uint32_t hl = 0;
  for (int b = 0; b < 4; ++b)
    hl |= static_cast<std::uint32_t>(bytes[4 + b]) << (8 * b);
  if (bytes.size() < 8 + static_cast<std::size_t>(hl))
    throw HsfError(K::Truncated, "truncated header");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes.begin() + 8, bytes.begin() + 8 + hl);
  } catch (const nlohmann::json::parse_error &e) {
    throw HsfError(K::BadHeader, std::string("HSF1 header is not valid JSON: ") + e.what());
  }
  ProbeDataset d;
  d.header = header_from_json(j);
  const std::size_t body = bytes.size() - 8 - hl;
  const std::size_t want = d.header.n_items + 4 * d.header.payload_floats();
  if (body < want)
    throw HsfError(K::Truncated, "truncated payload: expected " + std::to_string(want) +
                                     " bytes, found " + std::to_string(body));
  if (body > want)
    throw HsfError(K::SizeMismatch, "header/payload size mismatch: expected " +
                                        std::to_string(want) + " bytes, found " +
                                        std::to_string(body));
  auto p = bytes.begin() + 8 + hl;
  d.labels.assign(p, p + static_cast<std::ptrdiff_t>(d.header.n_items));
  for (auto l : d.labels)
    if (l > 1)
      throw HsfError(K::BadLabel, "label byte outside {0,1}");
  p += static_cast<std::ptrdiff_t>(d.header.n_items);
  d.vectors.resize(d.header.payload_floats());
  for (auto &f : d.vectors) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b)
      bits |= static_cast<std::uint32_t>(*p++) << (8 * b);
    f = std::bit_cast<float>(bits);
  }
  return d;
}

inline void write_hsf(const ProbeDataset &d, const std::string &path) {
  const auto bytes = encode_hsf(d);
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw DataError("cannot write " + path);
  out.write(reinterpret_cast<const char *>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw DataError("write failed: " + path);
}

inline ProbeDataset read_hsf(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DataError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_hsf(bytes);
}

} // namespace semprosody
