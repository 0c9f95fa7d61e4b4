#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <semprosody.hpp>

namespace testing_support {

namespace fs = std::filesystem;

inline std::string data_path(const std::string &rel) {
  return std::string(SEMPROSODY_DATA_DIR) + "/" + rel;
}

/// Scratch directory removed on destruction.
class TempDir {
public:
  TempDir() {
    static std::mt19937_64 gen(std::random_device{}());
    path_ = fs::temp_directory_path() / ("semprosody-test-" + std::to_string(gen()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  std::string file(const std::string &name) const { return (path_ / name).string(); }
  std::string write(const std::string &name, const std::string &content) const {
    const auto p = file(name);
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }
  const fs::path &path() const { return path_; }

private:
  fs::path path_;
};

inline std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<std::string> lines_of(const std::string &text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line))
    out.push_back(line);
  return out;
}

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

inline std::string shell_quote(const std::string &s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'')
      q += "'\\''";
    else
      q += c;
  }
  return q + "'";
}

/// Runs the CLI binary; stdin comes from `input` when given.
inline CliResult run_cli(const std::vector<std::string> &args, const std::string *input = nullptr) {
  TempDir tmp;
  std::string cmd = shell_quote(SEMPROSODY_CLI);
  for (const auto &a : args)
    cmd += " " + shell_quote(a);
  if (input)
    cmd += " < " + shell_quote(tmp.write("stdin", *input));
  else
    cmd += " < /dev/null";
  cmd += " > " + shell_quote(tmp.file("out")) + " 2> " + shell_quote(tmp.file("err"));
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(tmp.file("out"));
  r.err = slurp(tmp.file("err"));
  return r;
}

inline semprosody::SegmentationDict default_dict() {
  return semprosody::SegmentationDict(semprosody::resources::zh_segmentation_words());
}

inline semprosody::Tokenizer default_tokenizer() {
  return semprosody::Tokenizer(default_dict());
}


/// Corpus from (src, tgt) text pairs with ids p1, p2, ...
inline semprosody::Corpus corpus_from(const std::vector<std::pair<std::string, std::string>> &texts,
                                      semprosody::Language src = semprosody::Language::EN,
                                      semprosody::Language tgt = semprosody::Language::ZH) {
  static const auto tok = default_tokenizer();
  std::vector<semprosody::ParallelPair> pairs;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    semprosody::ParallelPair p;
    p.id = "p" + std::to_string(i + 1);
    p.src = tok(texts[i].first, src);
    p.tgt = tok(texts[i].second, tgt);
    pairs.push_back(std::move(p));
  }
  return semprosody::Corpus(std::move(pairs));
}

/// Monolingual English corpus.
inline semprosody::Corpus en_corpus(const std::vector<std::string> &texts) {
  std::vector<semprosody::ParallelPair> pairs;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    semprosody::ParallelPair p;
    p.id = "s" + std::to_string(i + 1);
    p.src = semprosody::tokenize_en(texts[i]);
    pairs.push_back(std::move(p));
  }
  return semprosody::Corpus(std::move(pairs));
}

struct FixtureRow {
  std::string id;
  semprosody::Language lang = semprosody::Language::EN;
  std::string text;
  nlohmann::json expected;
  std::optional<nlohmann::json> exact;
};

inline std::vector<FixtureRow> load_fixtures() {
  std::vector<FixtureRow> rows;
  std::ifstream in(data_path("fixtures/detectors.jsonl"));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    const auto j = nlohmann::json::parse(line);
    FixtureRow r;
    r.id = j.at("id");
    r.lang = *semprosody::parse_language(j.at("lang").get<std::string>());
    r.text = j.at("text");
    r.expected = j.at("expected");
    if (j.contains("exact"))
      r.exact = j.at("exact");
    rows.push_back(std::move(r));
  }
  return rows;
}

inline semprosody::TokenizedSentence tokenize_fixture(const FixtureRow &r) {
  static const auto tok = default_tokenizer();
  return tok(r.text, r.lang);
}

struct PrfCounts {
  std::size_t tp = 0, fp = 0, fn = 0;
  double precision() const { return tp + fp ? double(tp) / double(tp + fp) : 1.0; }
  double recall() const { return tp + fn ? double(tp) / double(tp + fn) : 1.0; }
  double f1() const {
    const double p = precision(), r = recall();
    return p + r > 0 ? 2 * p * r / (p + r) : 0.0;
  }
};

/// Scores one language's kind (BE for en, BEI for zh) against the labels.
/// A prediction counts when kind, marker and verb surfaces all agree.
inline PrfCounts score_fixtures(semprosody::Language lang) {
  using namespace semprosody;
  const auto kind = lang == Language::ZH ? PassiveKind::BEI : PassiveKind::BE;
  PrfCounts c;
  for (const auto &row : load_fixtures()) {
    if (row.lang != lang)
      continue;
    const auto s = tokenize_fixture(row);
    std::multiset<std::pair<std::string, std::string>> gold, pred;
    for (const auto &e : row.expected)
      if (e.at("kind").get<std::string>() == to_string(kind))
        gold.emplace(e.at("marker").get<std::string>(), e.at("verb").get<std::string>());
    for (const auto &m : detect(s))
      if (m.kind == kind)
        pred.insert({s[m.marker_index], m.verb_index ? s[*m.verb_index] : ""});
    for (const auto &p : pred) {
      if (auto it = gold.find(p); it != gold.end()) {
        ++c.tp;
        gold.erase(it);
      } else {
        ++c.fp;
      }
    }
    c.fn += gold.size();
  }
  return c;
}

/// Compares detector output with an "exact" row: every listed field must agree.
inline bool matches_exact(const FixtureRow &row, std::string *why = nullptr) {
  using namespace semprosody;
  const auto s = tokenize_fixture(row);
  const auto got = detect(s);
  const auto &want = *row.exact;
  auto fail = [&](const std::string &msg) {
    if (why)
      *why = row.id + ": " + msg;
    return false;
  };
  if (got.size() != want.size())
    return fail("expected " + std::to_string(want.size()) + " matches, got " +
                std::to_string(got.size()));
  for (std::size_t i = 0; i < got.size(); ++i) {
    const auto &w = want[i];
    if (w.at("kind") != to_string(got[i].kind))
      return fail("kind differs at " + std::to_string(i));
    if (w.contains("marker_index") && w["marker_index"] != got[i].marker_index)
      return fail("marker_index differs");
    if (w.contains("verb_index") && (!got[i].verb_index || w["verb_index"] != *got[i].verb_index))
      return fail("verb_index differs");
    if (w.contains("agent_present") && w["agent_present"] != got[i].agent_present)
      return fail("agent_present differs");
  }
  return true;
}

} // namespace testing_support
