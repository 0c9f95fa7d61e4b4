#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "semprosody/corpus.hpp"
#include "semprosody/error.hpp"
#include "semprosody/passive.hpp"

namespace semprosody {

/// What to look for: a literal token sequence, or every match of a
/// detector kind (written "kind:BEI" on the command line).
struct NodeQuery {
  std::vector<std::string> tokens;
  std::optional<PassiveKind> kind;

  static NodeQuery literal(std::vector<std::string> toks) {
    return {std::move(toks), std::nullopt};
  }
  static NodeQuery detector(PassiveKind k) { return {{}, k}; }

  /// "kind:BEI" selects a detector kind; anything else is split on spaces.
  static NodeQuery parse(std::string_view text) {
    constexpr std::string_view prefix = "kind:";
    if (text.substr(0, prefix.size()) == prefix) {
      const auto name = text.substr(prefix.size());
      const auto k = parse_passive_kind(name);
      if (!k)
        throw ConfigError("unknown detector kind '" + std::string(name) + "'");
      return detector(*k);
    }
    std::vector<std::string> toks;
    std::istringstream in{std::string(text)};
    for (std::string t; in >> t;)
      toks.push_back(t);
    if (toks.empty())
      throw ConfigError("empty query");
    return literal(std::move(toks));
  }

  std::string label() const {
    if (kind)
      return "kind:" + std::string(to_string(*kind));
    std::string out;
    for (const auto &t : tokens) {
      if (!out.empty())
        out += ' ';
      out += t;
    }
    return out;
  }
};

/// One hit of a query in a sentence. [first, last] is the whole node span;
/// [node_first, node_last] is the part that is the node itself (the full
/// span for literal queries, the marker for detector kinds).
struct Occurrence {
  std::size_t pair_index = 0;
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t node_first = 0;
  std::size_t node_last = 0;
};

inline std::vector<Occurrence> find_in_sentence(const TokenizedSentence &s,
                                                const NodeQuery &q,
                                                const DetectorConfig &cfg,
                                                std::size_t pair_index = 0) {
  std::vector<Occurrence> out;
  if (q.kind) {
    if (s.language != language_of(*q.kind))
      return out;
    DetectorConfig local = cfg;
    if (*q.kind == PassiveKind::GET)
      local.count_get = true;
    if (*q.kind == PassiveKind::NOTIONAL_HINT) {
      for (const auto &m : detect_notional_hint(s, cfg.patient_lexicon))
        out.push_back({pair_index, m.first, m.last, m.marker_index, m.marker_index});
      return out;
    }
    for (const auto &m : detect(s, local))
      if (m.kind == *q.kind)
        out.push_back({pair_index, m.first, m.last, m.marker_index, m.marker_index});
    return out;
  }
  const auto n = q.tokens.size();
  if (n == 0 || s.size() < n)
    return out;
  for (std::size_t i = 0; i + n <= s.size(); ++i) {
    bool hit = true;
    for (std::size_t k = 0; k < n && hit; ++k)
      hit = s[i + k] == q.tokens[k];
    if (hit)
      out.push_back({pair_index, i, i + n - 1, i, i + n - 1});
  }
  return out;
}

/// All occurrences on one side of the corpus, in file order.
inline std::vector<Occurrence> find_occurrences(const Corpus &corpus, Side side,
                                                const NodeQuery &q,
                                                const DetectorConfig &cfg = {}) {
  std::vector<Occurrence> out;
  for (std::size_t p = 0; p < corpus.size(); ++p) {
    const auto *s = corpus[p].side(side);
    if (!s)
      continue;
    auto hits = find_in_sentence(*s, q, cfg, p);
    out.insert(out.end(), hits.begin(), hits.end());
  }
  return out;
}

struct ConcordanceLine {
  std::vector<std::string> left_context;
  std::vector<std::string> node;
  std::vector<std::string> right_context;
  std::string source_id;
};

inline std::vector<ConcordanceLine> kwic(const Corpus &corpus, Side side,
                                         const NodeQuery &q, std::size_t width,
                                         const DetectorConfig &cfg = {}) {
  std::vector<ConcordanceLine> out;
  for (const auto &occ : find_occurrences(corpus, side, q, cfg)) {
    const auto &pair = corpus[occ.pair_index];
    const auto &s = *pair.side(side);
    ConcordanceLine line;
    line.source_id = pair.id;
    const auto lb = occ.first >= width ? occ.first - width : 0;
    for (auto k = lb; k < occ.first; ++k)
      line.left_context.push_back(s[k]);
    for (auto k = occ.first; k <= occ.last; ++k)
      line.node.push_back(s[k]);
    const auto re = std::min(s.size(), occ.last + 1 + width);
    for (auto k = occ.last + 1; k < re; ++k)
      line.right_context.push_back(s[k]);
    out.push_back(std::move(line));
  }
  return out;
}

namespace detail {

inline std::string join(const std::vector<std::string> &toks) {
  std::string out;
  for (const auto &t : toks) {
    if (!out.empty())
      out += ' ';
    out += t;
  }
  return out;
}

/// Terminal columns: CJK and fullwidth forms take two.
inline std::size_t display_width(std::string_view s) {
  std::size_t w = 0;
  for (const auto &cp : utf8::decode(s)) {
    const auto c = cp.value;
    const bool wide = utf8::is_cjk(c) || (c >= 0x3000 && c <= 0x303F) ||
                      (c >= 0xFF01 && c <= 0xFF60) || (c >= 0xFFE0 && c <= 0xFFE6);
    w += wide ? 2 : 1;
  }
  return w;
}

} // namespace detail

/// Layout: id, right-aligned left context, node, right context.
inline void write_kwic_text(std::ostream &os, const std::vector<ConcordanceLine> &lines) {
  std::size_t id_w = 0, left_w = 0, node_w = 0;
  for (const auto &l : lines) {
    id_w = std::max(id_w, detail::display_width(l.source_id));
    left_w = std::max(left_w, detail::display_width(detail::join(l.left_context)));
    node_w = std::max(node_w, detail::display_width(detail::join(l.node)));
  }
  for (const auto &l : lines) {
    const auto left = detail::join(l.left_context);
    const auto node = detail::join(l.node);
    os << l.source_id << std::string(id_w - detail::display_width(l.source_id), ' ')
       << "  " << std::string(left_w - detail::display_width(left), ' ') << left
       << "  " << node << std::string(node_w - detail::display_width(node), ' ')
       << "  " << detail::join(l.right_context) << '\n';
  }
}

inline void write_kwic_jsonl(std::ostream &os, const std::vector<ConcordanceLine> &lines) {
  for (const auto &l : lines) {
    nlohmann::json j;
    j["id"] = l.source_id;
    j["left"] = l.left_context;
    j["node"] = l.node;
    j["right"] = l.right_context;
    os << j.dump() << '\n';
  }
}

struct Window {
  std::size_t left = 4;
  std::size_t right = 4;
};

struct CollocateRow {
  std::string collocate;
  std::size_t freq = 0;
  std::size_t left = 0;
  std::size_t right = 0;
};

struct CollocateTable {
  std::string node;
  Window window;
  std::vector<CollocateRow> rows;
  std::size_t total_windows = 0;

  std::size_t mass() const {
    std::size_t m = 0;
    for (const auto &r : rows)
      m += r.freq;
    return m;
  }
};

/// Counts tokens within `window` of each occurrence, outside the node span.
/// Windows stop at sentence edges. Punctuation is skipped unless asked for.
inline CollocateTable collocates(const Corpus &corpus, Side side,
                                 const NodeQuery &q, Window window,
                                 const DetectorConfig &cfg = {},
                                 bool include_punct = false) {
  CollocateTable table;
  table.node = q.label();
  table.window = window;
  std::map<std::string, CollocateRow> rows;
  for (const auto &occ : find_occurrences(corpus, side, q, cfg)) {
    ++table.total_windows;
    const auto &s = *corpus[occ.pair_index].side(side);
    auto count = [&](std::size_t k, bool is_left) {
      if (!include_punct && utf8::is_punct_token(s[k]))
        return;
      auto &row = rows[s[k]];
      row.collocate = s[k];
      ++row.freq;
      ++(is_left ? row.left : row.right);
    };
    const auto lb = occ.first >= window.left ? occ.first - window.left : 0;
    for (auto k = lb; k < occ.first; ++k)
      count(k, true);
    const auto re = std::min(s.size(), occ.last + 1 + window.right);
    for (auto k = occ.last + 1; k < re; ++k)
      count(k, false);
  }
  for (auto &[_, row] : rows)
    table.rows.push_back(std::move(row));
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const CollocateRow &a, const CollocateRow &b) {
                     if (a.freq != b.freq)
                       return a.freq > b.freq;
                     return a.collocate < b.collocate;
                   });
  return table;
}

inline void write_collocates_tsv(std::ostream &os, const CollocateTable &t) {
  for (const auto &r : t.rows)
    os << r.collocate << '\t' << r.freq << '\t' << r.left << '\t' << r.right << '\n';
}

inline double per_100k(std::size_t count, std::size_t tokens) {
  if (tokens == 0)
    throw DataError("normalized frequency of an empty corpus side");
  return static_cast<double>(count) * 100000.0 / static_cast<double>(tokens);
}

/// Detector matches of `kind` per 100,000 tokens of the chosen side.
inline double normalized_frequency(const Corpus &corpus, Side side,
                                   PassiveKind kind,
                                   const DetectorConfig &cfg = {}) {
  const auto tokens = corpus.token_count(side);
  if (tokens == 0)
    throw DataError("normalized frequency of an empty corpus side");
  const auto hits =
      find_occurrences(corpus, side, NodeQuery::detector(kind), cfg).size();
  return per_100k(hits, tokens);
}

} // namespace semprosody
