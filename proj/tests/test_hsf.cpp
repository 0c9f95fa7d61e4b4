#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <limits>
#include <random>

#include "support.hpp"

using namespace semprosody;
using namespace testing_support;

namespace {

ProbeDataset random_dataset(std::mt19937_64 &gen) {
  ProbeDataset d;
  d.header.model_name = "m" + std::to_string(gen() % 1000) + (gen() % 2 ? "-ü" : "");
  d.header.n_enc_layers = 1 + gen() % 4;
  d.header.n_dec_layers = 1 + gen() % 4;
  d.header.hidden_dim = 1 + gen() % 16;
  d.header.n_items = 1 + gen() % 12;
  d.header.pooling = static_cast<Pooling>(gen() % 3);
  if (gen() % 2)
    d.header.meta = {{"seed", gen() % 100}, {"note", "x"}};
  d.labels.resize(d.header.n_items);
  for (auto &l : d.labels)
    l = gen() % 2;
  d.vectors.resize(d.header.payload_floats());
  const float specials[] = {0.0f, -0.0f, std::numeric_limits<float>::infinity(),
                            std::numeric_limits<float>::denorm_min(),
                            std::numeric_limits<float>::quiet_NaN(), 1e38f};
  for (auto &v : d.vectors)
    v = gen() % 10 == 0 ? specials[gen() % 6]
                        : std::bit_cast<float>(static_cast<std::uint32_t>(gen()) & 0x7F7FFFFFu);
  return d;
}

bool bit_identical(const std::vector<float> &a, const std::vector<float> &b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), 4 * a.size()) == 0;
}

HsfError::Kind error_kind(const std::vector<std::uint8_t> &bytes) {
  try {
    decode_hsf(bytes);
  } catch (const HsfError &e) {
    return e.kind();
  }
  ADD_FAILURE() << "decode succeeded";
  return HsfError::Kind::BadHeader;
}

std::vector<std::uint8_t> with_header(const std::string &json, std::size_t body) {
  std::vector<std::uint8_t> out = {'H', 'S', 'F', '1'};
  const auto n = static_cast<std::uint32_t>(json.size());
  for (int b = 0; b < 4; ++b)
    out.push_back(static_cast<std::uint8_t>(n >> (8 * b)));
  out.insert(out.end(), json.begin(), json.end());
  out.resize(out.size() + body, 0);
  return out;
}

} // namespace

TEST(Hsf, RoundTripRandomized) {
  std::mt19937_64 gen(53);
  TempDir tmp;
  for (int i = 0; i < 50; ++i) {
    const auto d = random_dataset(gen);
    const auto path = tmp.file("d" + std::to_string(i) + ".hsf");
    write_hsf(d, path);
    const auto back = read_hsf(path);
    EXPECT_EQ(back.header, d.header);
    EXPECT_EQ(back.labels, d.labels);
    EXPECT_TRUE(bit_identical(back.vectors, d.vectors));
    EXPECT_EQ(encode_hsf(back), encode_hsf(d));
  }
}

TEST(Hsf, ByteLayout) {
  ProbeDataset d;
  d.header = {"tiny", 1, 1, 1, 2, Pooling::LAST, nlohmann::json::object()};
  d.labels = {1, 0};
  d.vectors = {1.0f, -2.0f, 0.5f, 0.0f};
  const auto bytes = encode_hsf(d);
  ASSERT_GE(bytes.size(), 8u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "HSF1");
  const std::uint32_t hl = bytes[4] | bytes[5] << 8 | bytes[6] << 16 | bytes[7] << 24;
  const auto header = nlohmann::json::parse(bytes.begin() + 8, bytes.begin() + 8 + hl);
  EXPECT_EQ(header["dtype"], "f32");
  EXPECT_EQ(header["pooling"], "LAST");
  EXPECT_EQ(bytes.size(), 8 + hl + 2 + 4 * 4);
  EXPECT_EQ(bytes[8 + hl], 1);
  EXPECT_EQ(bytes[8 + hl + 1], 0);
  // 1.0f little-endian: 00 00 80 3F
  const std::vector<std::uint8_t> one = {0x00, 0x00, 0x80, 0x3F};
  EXPECT_TRUE(std::equal(one.begin(), one.end(), bytes.begin() + 8 + hl + 2));
  // item 0 holds enc then dec, item 1 follows.
  EXPECT_EQ(d.vector(0, {LayerSide::DEC, 1})[0], -2.0f);
  EXPECT_EQ(d.vector(1, {LayerSide::ENC, 1})[0], 0.5f);
}

TEST(Hsf, SizeArithmeticForReferenceShape) {
  ProbeDataset d;
  d.header = {"nllb-600m", 12, 12, 1024, 225, Pooling::MEAN, nlohmann::json::object()};
  d.labels.assign(225, 0);
  d.vectors.assign(d.header.payload_floats(), 0.25f);
  EXPECT_EQ(d.header.payload_floats(), 225u * 24 * 1024);
  const auto bytes = encode_hsf(d);
  const auto header_len = to_json(d.header).dump().size();
  EXPECT_EQ(bytes.size(), 8 + header_len + 225 + 225u * 24 * 1024 * 4);
}

TEST(Hsf, DeterministicBytes) {
  const auto a = synth_hsf(20, 2, 2, 8, 1.0, 4);
  const auto b = synth_hsf(20, 2, 2, 8, 1.0, 4);
  EXPECT_EQ(encode_hsf(a), encode_hsf(b));
}

TEST(Hsf, MalformedClasses) {
  std::mt19937_64 gen(59);
  const auto good = encode_hsf(random_dataset(gen));

  auto bad_magic = good;
  bad_magic[3] = '2';
  EXPECT_EQ(error_kind(bad_magic), HsfError::Kind::BadMagic);
  EXPECT_EQ(error_kind({'H', 'S'}), HsfError::Kind::BadMagic);

  auto truncated = good;
  truncated.pop_back();
  EXPECT_EQ(error_kind(truncated), HsfError::Kind::Truncated);
  EXPECT_EQ(error_kind({good.begin(), good.begin() + 6}), HsfError::Kind::Truncated);
  EXPECT_EQ(error_kind({good.begin(), good.begin() + 12}), HsfError::Kind::Truncated);

  auto extra = good;
  extra.push_back(0);
  EXPECT_EQ(error_kind(extra), HsfError::Kind::SizeMismatch);

  EXPECT_EQ(error_kind(with_header("{not json", 0)), HsfError::Kind::BadHeader);
  EXPECT_EQ(error_kind(with_header(R"({"model_name":"m"})", 0)), HsfError::Kind::BadHeader);
  const std::string h =
      R"({"model_name":"m","n_enc_layers":1,"n_dec_layers":1,"hidden_dim":1,"n_items":1,"pooling":"MEAN","dtype":"f16"})";
  EXPECT_EQ(error_kind(with_header(h, 9)), HsfError::Kind::BadHeader);
  const std::string zero =
      R"({"model_name":"m","n_enc_layers":0,"n_dec_layers":1,"hidden_dim":1,"n_items":1,"pooling":"MEAN","dtype":"f32"})";
  EXPECT_EQ(error_kind(with_header(zero, 5)), HsfError::Kind::BadHeader);

  const std::string ok =
      R"({"model_name":"m","n_enc_layers":1,"n_dec_layers":1,"hidden_dim":1,"n_items":1,"pooling":"MEAN","dtype":"f32"})";
  auto label = with_header(ok, 9);
  EXPECT_NO_THROW(decode_hsf(label));
  label[8 + ok.size()] = 2;
  EXPECT_EQ(error_kind(label), HsfError::Kind::BadLabel);
}

TEST(Hsf, ErrorMessages) {
  std::mt19937_64 gen(61);
  auto bytes = encode_hsf(random_dataset(gen));
  bytes.resize(bytes.size() - 3);
  try {
    decode_hsf(bytes);
    FAIL();
  } catch (const HsfError &e) {
    EXPECT_NE(std::string(e.what()).find("truncated payload"), std::string::npos);
  }
}

TEST(Hsf, EncodeRejectsInconsistentDataset) {
  auto d = synth_hsf(4, 1, 1, 2, 1.0, 1);
  d.vectors.pop_back();
  EXPECT_THROW(encode_hsf(d), DataError);
  auto e = synth_hsf(4, 1, 1, 2, 1.0, 1);
  e.labels[0] = 3;
  EXPECT_THROW(encode_hsf(e), DataError);
}

TEST(Hsf, MissingFileAndLayerRange) {
  EXPECT_THROW(read_hsf("/nonexistent/x.hsf"), DataError);
  const auto d = synth_hsf(4, 2, 3, 2, 1.0, 1);
  EXPECT_EQ(d.layers().size(), 5u);
  EXPECT_EQ(d.flat_layer({LayerSide::DEC, 1}), 2u);
  EXPECT_THROW(d.flat_layer({LayerSide::ENC, 3}), DataError);
  EXPECT_THROW(d.flat_layer({LayerSide::DEC, 0}), DataError);
}
