#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "semprosody/concordance.hpp"
#include "semprosody/corpus.hpp"
#include "semprosody/error.hpp"
#include "semprosody/passive.hpp"

namespace semprosody {

/// Signed weight sum: POS adds, NEG subtracts, the sign is the verdict.
inline Polarity polarity_of_window(std::span<const std::string> window,
                                   const PolarityLexicon &lexicon) {
  double score = 0.0;
  for (const auto &tok : window) {
    const auto e = lexicon.lookup(tok);
    if (e.polarity == Polarity::POS)
      score += e.weight;
    else if (e.polarity == Polarity::NEG)
      score -= e.weight;
  }
  if (score < 0)
    return Polarity::NEG;
  if (score > 0)
    return Polarity::POS;
  return Polarity::NEU;
}

/// Token indices whose polarity describes an occurrence: the window
/// around the span plus the span interior, minus the node itself.
inline std::vector<std::size_t> polarity_indices(const TokenizedSentence &s,
                                                 const Occurrence &occ,
                                                 Window window) {
  std::vector<std::size_t> out;
  const auto lb = occ.first >= window.left ? occ.first - window.left : 0;
  const auto re = std::min(s.size(), occ.last + 1 + window.right);
  for (auto k = lb; k < re; ++k)
    if (k < occ.node_first || k > occ.node_last)
      out.push_back(k);
  return out;
}

inline std::vector<std::string> polarity_window(const TokenizedSentence &s,
                                                const Occurrence &occ,
                                                Window window) {
  std::vector<std::string> out;
  for (auto k : polarity_indices(s, occ, window))
    out.push_back(s[k]);
  return out;
}

enum class ProsodyLabel { NEGATIVE, POSITIVE, NEUTRAL, MIXED };

inline std::string_view to_string(ProsodyLabel l) {
  switch (l) {
  case ProsodyLabel::NEGATIVE:
    return "NEGATIVE";
  case ProsodyLabel::POSITIVE:
    return "POSITIVE";
  case ProsodyLabel::NEUTRAL:
    return "NEUTRAL";
  case ProsodyLabel::MIXED:
    return "MIXED";
  }
  return "?";
}

struct ProsodyThresholds {
  double dominant = 0.5;
};

struct ProsodyProfile {
  std::string node;
  std::size_t n_occurrences = 0;
  double neg_ratio = 0.0;
  double pos_ratio = 0.0;
  double neu_ratio = 0.0;
  ProsodyLabel label = ProsodyLabel::NEUTRAL;
};

/// A label is assigned when its ratio strictly exceeds the threshold.
inline ProsodyLabel classify_prosody(const ProsodyProfile &p,
                                     ProsodyThresholds t = {}) {
  if (!(t.dominant > 0.0 && t.dominant <= 1.0))
    throw ConfigError("prosody threshold must lie in (0, 1]");
  if (p.neg_ratio > t.dominant)
    return ProsodyLabel::NEGATIVE;
  if (p.pos_ratio > t.dominant)
    return ProsodyLabel::POSITIVE;
  if (p.neu_ratio > t.dominant)
    return ProsodyLabel::NEUTRAL;
  return ProsodyLabel::MIXED;
}

/// Builds a profile from per-occurrence verdicts.
inline ProsodyProfile profile_from_verdicts(std::string node,
                                            std::span<const Polarity> verdicts,
                                            ProsodyThresholds t = {}) {
  ProsodyProfile p;
  p.node = std::move(node);
  p.n_occurrences = verdicts.size();
  if (verdicts.empty()) {
    p.label = ProsodyLabel::NEUTRAL;
    return p;
  }
  std::size_t neg = 0, pos = 0, neu = 0;
  for (auto v : verdicts)
    (v == Polarity::NEG ? neg : v == Polarity::POS ? pos : neu)++;
  const auto n = static_cast<double>(verdicts.size());
  p.neg_ratio = static_cast<double>(neg) / n;
  p.pos_ratio = static_cast<double>(pos) / n;
  p.neu_ratio = static_cast<double>(neu) / n;
  p.label = classify_prosody(p, t);
  return p;
}

inline ProsodyProfile prosody_profile(const Corpus &corpus, Side side,
                                      const NodeQuery &node,
                                      const PolarityLexicon &lexicon,
                                      Window window = {},
                                      ProsodyThresholds t = {},
                                      const DetectorConfig &cfg = {}) {
  if (corpus.empty())
    throw DataError("prosody profile of an empty corpus");
  std::vector<Polarity> verdicts;
  for (const auto &occ : find_occurrences(corpus, side, node, cfg)) {
    const auto &s = *corpus[occ.pair_index].side(side);
    const auto win = polarity_window(s, occ, window);
    verdicts.push_back(polarity_of_window(win, lexicon));
  }
  return profile_from_verdicts(node.label(), verdicts, t);
}

inline nlohmann::json to_json(const ProsodyProfile &p) {
  nlohmann::json j;
  j["node"] = p.node;
  j["n"] = p.n_occurrences;
  j["ratios"] = {{"neg", p.neg_ratio}, {"pos", p.pos_ratio}, {"neu", p.neu_ratio}};
  j["label"] = std::string(to_string(p.label));
  return j;
}

enum class SidePolicy { SRC, TGT, BOTH };

inline std::optional<SidePolicy> parse_side_policy(std::string_view s) {
  const auto l = utf8::to_lower(s);
  if (l == "src")
    return SidePolicy::SRC;
  if (l == "tgt")
    return SidePolicy::TGT;
  if (l == "both")
    return SidePolicy::BOTH;
  return std::nullopt;
}

inline std::string_view to_string(SidePolicy p) {
  switch (p) {
  case SidePolicy::SRC:
    return "src";
  case SidePolicy::TGT:
    return "tgt";
  case SidePolicy::BOTH:
    return "both";
  }
  return "?";
}

namespace detail {

inline Polarity side_polarity(const TokenizedSentence &s,
                              const std::vector<PassiveMatch> &matches,
                              const PolarityLexicon &lexicon, Window window) {
  std::set<std::size_t> idx;
  if (matches.empty()) {
    // An active-voice side has no anchor; the whole sentence is the window.
    for (std::size_t k = 0; k < s.size(); ++k)
      idx.insert(k);
  }
  for (const auto &m : matches) {
    const Occurrence occ{0, m.first, m.last, m.marker_index, m.marker_index};
    for (auto k : polarity_indices(s, occ, window))
      idx.insert(k);
  }
  std::vector<std::string> toks;
  for (auto k : idx)
    toks.push_back(s[k]);
  return polarity_of_window(toks, lexicon);
}

} // namespace detail

/// Polarity of the context around a pair's passives. BOTH combines the two
/// sides with NEG taking precedence, then POS.
inline Polarity pair_polarity(const ParallelPair &pair,
                              const PolarityLexicon &lexicon,
                              SidePolicy policy = SidePolicy::BOTH,
                              Window window = {},
                              const DetectorConfig &cfg = {}) {
  const auto src_matches = detect(pair.src, cfg);
  if (src_matches.empty())
    throw PreconditionError("pair '" + pair.id + "' has no source-side passive");
  const auto src_pol = detail::side_polarity(pair.src, src_matches, lexicon, window);
  if (policy == SidePolicy::SRC)
    return src_pol;
  if (!pair.tgt)
    throw PreconditionError("pair '" + pair.id + "' has no target side");
  std::vector<PassiveMatch> tgt_matches;
  for (const auto &m : detect(*pair.tgt, cfg))
    if (m.kind != PassiveKind::NOTIONAL_HINT)
      tgt_matches.push_back(m);
  const auto tgt_pol = detail::side_polarity(*pair.tgt, tgt_matches, lexicon, window);
  if (policy == SidePolicy::TGT)
    return tgt_pol;
  if (src_pol == Polarity::NEG || tgt_pol == Polarity::NEG)
    return Polarity::NEG;
  if (src_pol == Polarity::POS || tgt_pol == Polarity::POS)
    return Polarity::POS;
  return Polarity::NEU;
}

} // namespace semprosody
