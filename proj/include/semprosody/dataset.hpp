#pragma once

#include <array>
#include <cstdio>
#include <set>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "semprosody/corpus.hpp"
#include "semprosody/error.hpp"
#include "semprosody/passive.hpp"
#include "semprosody/prosody.hpp"
#include "semprosody/random.hpp"

namespace semprosody {

enum class Evidence { POSITIVE, NEGATIVE };

inline std::string_view to_string(Evidence e) {
  return e == Evidence::POSITIVE ? "pos" : "neg";
}

inline std::optional<Evidence> parse_evidence(std::string_view s) {
  if (s == "pos")
    return Evidence::POSITIVE;
  if (s == "neg")
    return Evidence::NEGATIVE;
  return std::nullopt;
}

struct EvidencePair {
  ParallelPair pair;
  Evidence evidence = Evidence::POSITIVE;
  std::vector<PassiveMatch> src_matches;
  Voice tgt_voice = Voice::UNMARKED;
  Polarity polarity = Polarity::NEU;
  /// Accepted through the allow list despite failing the polarity gate.
  bool overridden = false;
};

struct SelectionConfig {
  DetectorConfig detector;
  SidePolicy side_policy = SidePolicy::BOTH;
  Window window;
  /// Drop NEG-polarity pairs from the negative evidence.
  bool filter_negative_polarity = true;
  /// Manual overrides by pair id.
  WordSet allow;
  WordSet deny;
};

inline nlohmann::json to_json(const DetectorConfig &c) {
  nlohmann::json j;
  j["max_gap"] = c.max_gap;
  j["count_get"] = c.count_get;
  j["count_light_verb_as_passive"] = c.count_light_verb_as_passive;
  j["emit_notional_hints"] = c.emit_notional_hints;
  j["light_verb_set"] = c.light_verb_set;
  j["irregular_participles_en"] = c.irregular_participles_en;
  j["irregular_participles_es"] = c.irregular_participles_es;
  j["bei_exclusion"] = c.bei_exclusion;
  j["patient_lexicon"] = c.patient_lexicon;
  return j;
}

inline nlohmann::json to_json(const SelectionConfig &c) {
  nlohmann::json j;
  j["detector"] = to_json(c.detector);
  j["side_policy"] = std::string(to_string(c.side_policy));
  j["window"] = {c.window.left, c.window.right};
  j["filter_negative_polarity"] = c.filter_negative_polarity;
  j["allow"] = c.allow;
  j["deny"] = c.deny;
  return j;
}

namespace detail {

inline void require_en_zh(const ParallelPair &p) {
  if (p.src.language != Language::EN || !p.tgt || p.tgt->language != Language::ZH)
    throw PreconditionError("pair '" + p.id + "' is not an EN->ZH parallel pair");
}

inline std::vector<PassiveMatch> be_matches(const TokenizedSentence &s,
                                            const DetectorConfig &cfg) {
  std::vector<PassiveMatch> out;
  for (const auto &m : detect_en(s, cfg))
    if (m.kind == PassiveKind::BE)
      out.push_back(m);
  return out;
}

inline std::vector<EvidencePair> select_evidence(const Corpus &corpus,
                                                 const PolarityLexicon &lexicon,
                                                 const SelectionConfig &cfg,
                                                 Evidence which) {
  // BE-only detection; GET passives never qualify a pair.
  DetectorConfig det = cfg.detector;
  det.count_get = false;
  std::vector<EvidencePair> out;
  for (const auto &pair : corpus) {
    detail::require_en_zh(pair);
    if (cfg.deny.count(pair.id))
      continue;
    auto matches = be_matches(pair.src, det);
    if (matches.empty())
      continue;
    const auto voice = classify_voice_zh(*pair.tgt, det);
    const auto wanted_voice =
        which == Evidence::POSITIVE ? Voice::MARKED_PASSIVE : Voice::UNMARKED;
    if (voice != wanted_voice)
      continue;
    const auto pol = pair_polarity(pair, lexicon, cfg.side_policy, cfg.window, det);
    const bool allowed = cfg.allow.count(pair.id) > 0;
    bool passes_gate = true;
    if (which == Evidence::POSITIVE)
      passes_gate = pol == Polarity::NEG;
    else if (cfg.filter_negative_polarity)
      passes_gate = pol != Polarity::NEG;
    if (!passes_gate && !allowed)
      continue;
    out.push_back({pair, which, std::move(matches), voice, pol, !passes_gate});
  }
  return out;
}

} // namespace detail

/// BE passive rendered as a BEI passive in a negative context.
inline std::vector<EvidencePair>
select_positive_evidence(const Corpus &corpus, const PolarityLexicon &lexicon,
                         const SelectionConfig &cfg = {}) {
  return detail::select_evidence(corpus, lexicon, cfg, Evidence::POSITIVE);
}

/// BE passive rendered in the active voice.
inline std::vector<EvidencePair>
select_negative_evidence(const Corpus &corpus, const PolarityLexicon &lexicon,
                         const SelectionConfig &cfg = {}) {
  return detail::select_evidence(corpus, lexicon, cfg, Evidence::NEGATIVE);
}

/// Checks the per-item evidence invariants; throws on violation.
inline void check_evidence_invariants(const EvidencePair &e) {
  bool has_be = false;
  for (const auto &m : e.src_matches)
    has_be = has_be || m.kind == PassiveKind::BE;
  const bool ok =
      has_be && (e.evidence == Evidence::POSITIVE
                     ? e.tgt_voice == Voice::MARKED_PASSIVE &&
                           (e.polarity == Polarity::NEG || e.overridden)
                     : e.tgt_voice == Voice::UNMARKED);
  if (!ok)
    throw DataError("evidence invariant violated for pair '" + e.pair.id + "'");
}

/// Positive evidence followed by negative evidence, each in corpus order.
inline std::vector<EvidencePair> build_evidence(const Corpus &corpus,
                                                const PolarityLexicon &lexicon,
                                                const SelectionConfig &cfg = {}) {
  auto pos = select_positive_evidence(corpus, lexicon, cfg);
  auto neg = select_negative_evidence(corpus, lexicon, cfg);
  std::set<std::string> pos_ids;
  for (const auto &e : pos) {
    check_evidence_invariants(e);
    pos_ids.insert(e.pair.id);
  }
  for (const auto &e : neg) {
    check_evidence_invariants(e);
    if (pos_ids.count(e.pair.id))
      throw DataError("pair '" + e.pair.id + "' selected as both positive and negative evidence");
  }
  pos.insert(pos.end(), std::make_move_iterator(neg.begin()),
             std::make_move_iterator(neg.end()));
  return pos;
}

using SplitRatios = std::array<double, 3>;
using SplitCounts = std::array<std::size_t, 3>;

inline constexpr SplitRatios kDefaultRatios{0.75, 0.1125, 0.1375};

inline void validate_ratios(const SplitRatios &r) {
  double sum = 0;
  for (double x : r) {
    if (!(x >= 0.0))
      throw ConfigError("split ratios must be non-negative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ConfigError("split ratios must sum to 1");
}

/// Largest-remainder apportionment of n items. Ties in the remainder go to
/// the earlier bucket.
inline SplitCounts apportion(std::size_t n, const SplitRatios &r) {
  validate_ratios(r);
  SplitCounts counts{};
  std::array<double, 3> rem{};
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double quota = r[k] * static_cast<double>(n);
    // Guard against 0.1125 * 900 landing a hair under its integer value.
    const double fl = std::floor(quota + 1e-9);
    counts[k] = static_cast<std::size_t>(fl);
    rem[k] = std::max(0.0, quota - fl);
    assigned += counts[k];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned)
    ++counts[order[i % 3]];
  return counts;
}

namespace detail {

/// Rounds a per-stratum quota matrix to integers whose row sums are the
/// stratum sizes and whose column sums are `totals`. Each cell moves at most
/// one unit above its floor; larger remainders are preferred.
inline std::vector<SplitCounts>
reconcile_strata(const std::vector<std::size_t> &stratum_sizes,
                 const SplitRatios &r, const SplitCounts &totals) {
  const auto S = stratum_sizes.size();
  std::vector<SplitCounts> cells(S);
  std::vector<std::array<double, 3>> rem(S);
  std::vector<long> row_need(S);
  std::array<long, 3> col_need{};
  for (std::size_t k = 0; k < 3; ++k)
    col_need[k] = static_cast<long>(totals[k]);
  for (std::size_t s = 0; s < S; ++s) {
    row_need[s] = static_cast<long>(stratum_sizes[s]);
    for (std::size_t k = 0; k < 3; ++k) {
      const double quota = r[k] * static_cast<double>(stratum_sizes[s]);
      const double fl = std::floor(quota + 1e-9);
      cells[s][k] = static_cast<std::size_t>(fl);
      rem[s][k] = std::max(0.0, quota - fl);
      row_need[s] -= static_cast<long>(fl);
      col_need[k] -= static_cast<long>(fl);
    }
  }
  // Bipartite flow: rows -> columns through cells with a positive remainder.
  // Augmenting paths over a residual graph that allows undoing a unit.
  std::vector<std::array<int, 3>> flow(S, {0, 0, 0});
  auto capacity_ok = [&](std::size_t s, std::size_t k) {
    return rem[s][k] > 1e-12 && flow[s][k] == 0;
  };
  std::vector<std::pair<std::size_t, std::size_t>> cell_order;
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t k = 0; k < 3; ++k)
      cell_order.emplace_back(s, k);
  std::stable_sort(cell_order.begin(), cell_order.end(), [&](auto a, auto b) {
    return rem[a.first][a.second] > rem[b.first][b.second];
  });
  // Greedy pass in remainder order.
  for (auto [s, k] : cell_order)
    if (row_need[s] > 0 && col_need[k] > 0 && capacity_ok(s, k)) {
      flow[s][k] = 1;
      --row_need[s];
      --col_need[k];
    }
  // Repair pass: alternating paths row -> col (unused cell) -> row (used cell).
  for (std::size_t s0 = 0; s0 < S; ++s0) {
    while (row_need[s0] > 0) {
      std::vector<bool> row_seen(S, false);
      std::vector<std::pair<std::size_t, std::size_t>> path;
      std::function<bool(std::size_t)> dfs = [&](std::size_t s) -> bool {
        row_seen[s] = true;
        for (std::size_t k = 0; k < 3; ++k) {
          if (!capacity_ok(s, k))
            continue;
          if (col_need[k] > 0) {
            path.emplace_back(s, k);
            return true;
          }
          for (std::size_t t = 0; t < S; ++t) {
            if (row_seen[t] || flow[t][k] == 0)
              continue;
            path.emplace_back(s, k);
            path.emplace_back(t, k);
            if (dfs(t))
              return true;
            path.pop_back();
            path.pop_back();
          }
        }
        return false;
      };
      if (!dfs(s0))
        throw DataError("stratified split cannot be reconciled with global counts");
      for (std::size_t i = 0; i < path.size(); ++i) {
        auto [s, k] = path[i];
        flow[s][k] += (i % 2 == 0) ? 1 : -1;
      }
      --row_need[s0];
      --col_need[path.back().second];
    }
  }
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t k = 0; k < 3; ++k)
      cells[s][k] += static_cast<std::size_t>(flow[s][k]);
  return cells;
}

} // namespace detail

struct SplitOptions {
  SplitRatios ratios = kDefaultRatios;
  std::uint64_t seed = 42;
  bool stratify = false;
  /// Explicit per-stratum (train, valid, test) sizes; implies stratify.
  std::map<Evidence, SplitCounts> stratum_counts;
};

struct DatasetSplit {
  std::vector<EvidencePair> train;
  std::vector<EvidencePair> valid;
  std::vector<EvidencePair> test;
  std::uint64_t seed = 0;
  SplitRatios ratios = kDefaultRatios;
  bool stratified = false;

  SplitCounts sizes() const { return {train.size(), valid.size(), test.size()}; }
};

/// Assigns each of `labels.size()` items to bucket 0/1/2 (train/valid/test).
/// Depends only on the labels, options and seed.
inline std::vector<int> split_assignment(const std::vector<Evidence> &labels,
                                         const SplitOptions &opt) {
  validate_ratios(opt.ratios);
  const auto n = labels.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(opt.seed);
  rng.shuffle(std::span<std::size_t>(perm));

  std::vector<int> bucket(n, 2);
  const bool stratify = opt.stratify || !opt.stratum_counts.empty();
  if (!stratify) {
    const auto counts = apportion(n, opt.ratios);
    for (std::size_t i = 0; i < n; ++i)
      bucket[perm[i]] = i < counts[0] ? 0 : i < counts[0] + counts[1] ? 1 : 2;
    return bucket;
  }
  const std::array<Evidence, 2> strata{Evidence::POSITIVE, Evidence::NEGATIVE};
  std::vector<std::size_t> sizes(2, 0);
  for (auto l : labels)
    ++sizes[l == Evidence::POSITIVE ? 0 : 1];
  std::vector<SplitCounts> cells;
  if (!opt.stratum_counts.empty()) {
    for (std::size_t s = 0; s < 2; ++s) {
      auto it = opt.stratum_counts.find(strata[s]);
      if (it == opt.stratum_counts.end()) {
        cells.push_back(apportion(sizes[s], opt.ratios));
        continue;
      }
      const auto &c = it->second;
      if (c[0] + c[1] + c[2] != sizes[s])
        throw ConfigError("stratum counts for '" + std::string(to_string(strata[s])) +
                          "' sum to " + std::to_string(c[0] + c[1] + c[2]) +
                          ", stratum has " + std::to_string(sizes[s]));
      cells.push_back(c);
    }
  } else {
    cells = detail::reconcile_strata(sizes, opt.ratios, apportion(n, opt.ratios));
  }
  std::array<std::size_t, 2> seen{0, 0};
  for (auto idx : perm) {
    const std::size_t s = labels[idx] == Evidence::POSITIVE ? 0 : 1;
    const auto i = seen[s]++;
    const auto &c = cells[s];
    bucket[idx] = i < c[0] ? 0 : i < c[0] + c[1] ? 1 : 2;
  }
  return bucket;
}

/// Seeded shuffle then largest-remainder apportionment. Buckets keep the
/// shuffled order.
inline DatasetSplit split_dataset(const std::vector<EvidencePair> &pairs,
                                  const SplitOptions &opt = {}) {
  std::vector<Evidence> labels;
  labels.reserve(pairs.size());
  for (const auto &p : pairs)
    labels.push_back(p.evidence);
  const auto bucket = split_assignment(labels, opt);

  std::vector<std::size_t> perm(pairs.size());
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(opt.seed);
  rng.shuffle(std::span<std::size_t>(perm));

  DatasetSplit out;
  out.seed = opt.seed;
  out.ratios = opt.ratios;
  out.stratified = opt.stratify || !opt.stratum_counts.empty();
  for (auto idx : perm) {
    auto &dst = bucket[idx] == 0 ? out.train : bucket[idx] == 1 ? out.valid : out.test;
    dst.push_back(pairs[idx]);
  }
  return out;
}

inline nlohmann::json to_json(const EvidencePair &e) {
  nlohmann::json j;
  j["id"] = e.pair.id;
  j["src"] = e.pair.src.raw;
  j["src_lang"] = std::string(to_string(e.pair.src.language));
  if (e.pair.tgt) {
    j["tgt"] = e.pair.tgt->raw;
    j["tgt_lang"] = std::string(to_string(e.pair.tgt->language));
  }
  if (!e.pair.meta.empty())
    j["meta"] = e.pair.meta;
  j["evidence"] = std::string(to_string(e.evidence));
  j["polarity"] = std::string(to_string(e.polarity));
  j["tgt_voice"] = std::string(to_string(e.tgt_voice));
  if (e.overridden)
    j["override"] = true;
  nlohmann::json matches = nlohmann::json::array();
  for (const auto &m : e.src_matches)
    matches.push_back(to_json(m, e.pair.src));
  j["src_matches"] = matches;
  return j;
}

inline void write_evidence_jsonl(std::ostream &os, const std::vector<EvidencePair> &items) {
  for (const auto &e : items)
    os << to_json(e).dump() << '\n';
}

inline std::string config_hash(const nlohmann::json &config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(config.dump())));
  return buf;
}

/// Writes train/valid/test JSONL and manifest.json into `dir`.
inline void export_dataset(const DatasetSplit &split, const std::string &dir,
                           const nlohmann::json &config) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw DataError("cannot create output directory: " + dir);
  auto write = [&](const char *name, const std::vector<EvidencePair> &items) {
    const auto path = (fs::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out)
      throw DataError("cannot write " + path);
    write_evidence_jsonl(out, items);
    if (!out)
      throw DataError("write failed: " + path);
  };
  write("train.jsonl", split.train);
  write("valid.jsonl", split.valid);
  write("test.jsonl", split.test);

  nlohmann::json manifest;
  manifest["seed"] = split.seed;
  manifest["ratios"] = split.ratios;
  manifest["stratified"] = split.stratified;
  const auto sizes = split.sizes();
  manifest["sizes"] = {{"train", sizes[0]}, {"valid", sizes[1]}, {"test", sizes[2]}};
  manifest["config"] = config;
  manifest["config_hash"] = config_hash(config);
  const auto path = (fs::path(dir) / "manifest.json").string();
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw DataError("cannot write " + path);
  out << manifest.dump(2) << '\n';
}

/// Reads evidence JSONL written by export_dataset. Matches and target voice
/// are recomputed with `cfg`.
inline std::vector<EvidencePair> read_evidence_jsonl(std::istream &in,
                                                     const Tokenizer &tokenize,
                                                     const DetectorConfig &cfg = {}) {
  std::vector<EvidencePair> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error &e) {
      throw DataError(at_line(lineno, std::string("malformed JSON: ") + e.what()));
    }
    for (const char *key : {"id", "src", "tgt", "evidence"})
      if (!j.contains(key) || !j[key].is_string())
        throw DataError(at_line(lineno, std::string("missing string field '") + key + "'"));
    const auto ev = parse_evidence(j["evidence"].get<std::string>());
    if (!ev)
      throw DataError(at_line(lineno, "evidence must be 'pos' or 'neg'"));
    auto lang = [&](const char *key, Language fallback) {
      if (!j.contains(key))
        return fallback;
      const auto l = parse_language(j[key].get<std::string>());
      if (!l)
        throw DataError(at_line(lineno, std::string("bad ") + key));
      return *l;
    };
    EvidencePair e;
    e.pair.id = j["id"].get<std::string>();
    e.pair.src = tokenize(j["src"].get<std::string>(), lang("src_lang", Language::EN));
    e.pair.tgt = tokenize(j["tgt"].get<std::string>(), lang("tgt_lang", Language::ZH));
    if (j.contains("meta") && j["meta"].is_object())
      for (const auto &[k, v] : j["meta"].items())
        e.pair.meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
    e.evidence = *ev;
    if (j.contains("polarity") && j["polarity"].is_string())
      e.polarity = parse_polarity(j["polarity"].get<std::string>()).value_or(Polarity::NEU);
    e.overridden = j.value("override", false);
    e.src_matches = detect(e.pair.src, cfg);
    if (e.pair.tgt->language == Language::ZH)
      e.tgt_voice = classify_voice_zh(*e.pair.tgt, cfg);
    out.push_back(std::move(e));
  }
  return out;
}

inline std::vector<EvidencePair> load_evidence_jsonl(const std::string &path,
                                                     const Tokenizer &tokenize,
                                                     const DetectorConfig &cfg = {}) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open " + path);
  return read_evidence_jsonl(in, tokenize, cfg);
}

} // namespace semprosody
