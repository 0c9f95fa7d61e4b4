#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "semprosody/corpus.hpp"
#include "semprosody/error.hpp"
#include "semprosody/resources.hpp"
#include "semprosody/utf8.hpp"

namespace semprosody {

enum class PassiveKind { BE, GET, BEI, LIGHT_VERB, SER_ESTAR, NOTIONAL_HINT };

inline std::string_view to_string(PassiveKind k) {
  switch (k) {
  case PassiveKind::BE:
    return "BE";
  case PassiveKind::GET:
    return "GET";
  case PassiveKind::BEI:
    return "BEI";
  case PassiveKind::LIGHT_VERB:
    return "LIGHT_VERB";
  case PassiveKind::SER_ESTAR:
    return "SER_ESTAR";
  case PassiveKind::NOTIONAL_HINT:
    return "NOTIONAL_HINT";
  }
  return "?";
}

inline std::optional<PassiveKind> parse_passive_kind(std::string_view s) {
  for (auto k : {PassiveKind::BE, PassiveKind::GET, PassiveKind::BEI,
                 PassiveKind::LIGHT_VERB, PassiveKind::SER_ESTAR,
                 PassiveKind::NOTIONAL_HINT})
    if (s == to_string(k))
      return k;
  return std::nullopt;
}

inline Language language_of(PassiveKind k) {
  switch (k) {
  case PassiveKind::BE:
  case PassiveKind::GET:
    return Language::EN;
  case PassiveKind::SER_ESTAR:
    return Language::ES;
  default:
    return Language::ZH;
  }
}

struct PassiveMatch {
  PassiveKind kind = PassiveKind::BE;
  std::size_t marker_index = 0;
  /// Participle or main verb; absent for notional-passive hints.
  std::optional<std::size_t> verb_index;
  bool agent_present = false;
  /// Inclusive token range covered by the construction.
  std::size_t first = 0;
  std::size_t last = 0;

  bool operator==(const PassiveMatch &) const = default;
};

struct DetectorConfig {
  /// Maximum number of tokens allowed between marker and verb.
  std::size_t max_gap = 3;
  bool count_get = false;
  bool count_light_verb_as_passive = false;
  /// Append notional-passive hints to detect_zh output.
  bool emit_notional_hints = false;
  WordSet light_verb_set = resources::zh_light_verbs();
  WordSet irregular_participles_en = resources::en_irregular_participles();
  WordSet irregular_participles_es = resources::es_irregular_participles();
  WordSet bei_exclusion = resources::zh_bei_exclusion();
  WordSet patient_lexicon = resources::zh_patient_lexicon();
};

namespace detail {

inline void require_language(const TokenizedSentence &s, Language expected,
                             std::string_view op) {
  if (s.language != expected)
    throw PreconditionError(std::string(op) + " requires a '" +
                            std::string(to_string(expected)) +
                            "' sentence, got '" +
                            std::string(to_string(s.language)) + "'");
}

inline bool contains(const WordSet &set, std::string_view w) {
  return set.find(w) != set.end();
}

inline bool is_en_participle(const std::string &w, const DetectorConfig &cfg) {
  static const WordSet exceptions = resources::en_ed_exceptions();
  if (contains(cfg.irregular_participles_en, w))
    return true;
  return w.size() >= 4 && utf8::ends_with(w, "ed") && !contains(exceptions, w);
}

inline bool is_en_intervening(const std::string &w) {
  static const WordSet negation = resources::en_negation();
  static const WordSet adverbs = resources::en_adverbs();
  if (w == "being" || contains(negation, w) || contains(adverbs, w))
    return true;
  return w.size() >= 4 && utf8::ends_with(w, "ly");
}

inline bool is_es_participle(const std::string &w, const DetectorConfig &cfg) {
  static const WordSet exceptions = resources::es_participle_exceptions();
  if (contains(exceptions, w))
    return false;
  if (contains(cfg.irregular_participles_es, w))
    return true;
  // Inflected irregulars: hecha, hechos, hechas.
  for (std::string_view suffix : {"a", "os", "as"}) {
    if (utf8::ends_with(w, suffix)) {
      const auto stem = w.substr(0, w.size() - suffix.size()) + "o";
      if (contains(cfg.irregular_participles_es, stem))
        return true;
    }
  }
  if (utf8::length(w) < 5)
    return false;
  for (std::string_view suffix :
       {"ado", "ada", "ados", "adas", "ido", "ida", "idos", "idas", "ído",
        "ída", "ídos", "ídas"})
    if (utf8::ends_with(w, suffix))
      return true;
  return false;
}

inline bool is_es_intervening(const std::string &w) {
  static const WordSet negation = resources::es_negation();
  static const WordSet adverbs = resources::es_adverbs();
  return contains(negation, w) || contains(adverbs, w) ||
         (utf8::length(w) >= 6 && utf8::ends_with(w, "mente"));
}

/// Shared scan for marker + (intervening)* + participle languages.
template <typename IsMarker, typename IsParticiple, typename IsIntervening>
std::vector<PassiveMatch>
scan_auxiliary_passives(const TokenizedSentence &s, const DetectorConfig &cfg,
                        IsMarker is_marker, IsParticiple is_participle,
                        IsIntervening is_intervening, std::string_view agent_word) {
  std::vector<std::string> lower;
  lower.reserve(s.size());
  for (const auto &t : s.tokens)
    lower.push_back(utf8::to_lower(t.surface));

  std::vector<PassiveMatch> out;
  std::size_t i = 0;
  while (i < lower.size()) {
    const auto kind = is_marker(lower[i]);
    if (!kind) {
      ++i;
      continue;
    }
    std::optional<std::size_t> verb;
    std::size_t gap = 0;
    for (std::size_t j = i + 1; j < lower.size(); ++j) {
      if (is_participle(lower[j])) {
        verb = j;
        break;
      }
      if (gap < cfg.max_gap && is_intervening(lower[j])) {
        ++gap;
        continue;
      }
      break;
    }
    if (!verb) {
      ++i;
      continue;
    }
    PassiveMatch m;
    m.kind = *kind;
    m.marker_index = i;
    m.verb_index = verb;
    m.first = i;
    m.last = *verb;
    for (std::size_t k = *verb + 1; k <= *verb + 2 && k < lower.size(); ++k)
      if (lower[k] == agent_word)
        m.agent_present = true;
    out.push_back(m);
    i = *verb + 1;
  }
  return out;
}

inline bool is_zh_verbish(std::string_view tok) {
  static const WordSet verbs = resources::zh_verbs();
  static const WordSet nominal = resources::zh_nominal_chars();
  static const WordSet particles = resources::zh_particles();
  if (contains(verbs, tok))
    return true;
  const auto cps = utf8::decode(tok);
  return cps.size() == 1 && utf8::is_cjk(cps[0].value) &&
         !contains(nominal, tok) && !contains(particles, tok);
}

inline bool is_zh_particle(std::string_view tok) {
  static const WordSet particles = resources::zh_particles();
  return contains(particles, tok);
}

/// Longest agent phrase scanned between 被 and its verb.
inline constexpr std::size_t kMaxAgentTokens = 6;

} // namespace detail

/// English BE passives (and GET passives when enabled).
inline std::vector<PassiveMatch> detect_en(const TokenizedSentence &s,
                                           const DetectorConfig &cfg = {}) {
  detail::require_language(s, Language::EN, "detect_en");
  static const WordSet be = resources::en_be_forms();
  static const WordSet get = resources::en_get_forms();
  auto marker = [&](const std::string &w) -> std::optional<PassiveKind> {
    if (detail::contains(be, w))
      return PassiveKind::BE;
    if (cfg.count_get && detail::contains(get, w))
      return PassiveKind::GET;
    return std::nullopt;
  };
  return detail::scan_auxiliary_passives(
      s, cfg, marker,
      [&](const std::string &w) { return detail::is_en_participle(w, cfg); },
      detail::is_en_intervening, "by");
}

/// Spanish SER/ESTAR + participle passives, agent introduced by "por".
inline std::vector<PassiveMatch> detect_es(const TokenizedSentence &s,
                                           const DetectorConfig &cfg = {}) {
  detail::require_language(s, Language::ES, "detect_es");
  static const WordSet forms = resources::es_ser_estar_forms();
  auto marker = [&](const std::string &w) -> std::optional<PassiveKind> {
    if (detail::contains(forms, w))
      return PassiveKind::SER_ESTAR;
    return std::nullopt;
  };
  return detail::scan_auxiliary_passives(
      s, cfg, marker,
      [&](const std::string &w) { return detail::is_es_participle(w, cfg); },
      detail::is_es_intervening, "por");
}

/// Topic-comment sentences whose initial inanimate subject is directly
/// followed by a transitive verb. Advisory only.
inline std::vector<PassiveMatch>
detect_notional_hint(const TokenizedSentence &s, const WordSet &patient_lexicon) {
  detail::require_language(s, Language::ZH, "detect_notional_hint");
  static const WordSet adverbs = resources::zh_topic_adverbs();
  if (s.size() < 2 || !detail::contains(patient_lexicon, s[0]))
    return {};
  std::size_t j = 1;
  while (j < s.size() && detail::contains(adverbs, s[j]))
    ++j;
  static const WordSet verbs = resources::zh_verbs();
  if (j >= s.size() || !detail::contains(verbs, s[j]))
    return {};
  PassiveMatch m;
  m.kind = PassiveKind::NOTIONAL_HINT;
  m.marker_index = 0;
  m.first = 0;
  m.last = j;
  return {m};
}

/// Chinese BEI passives (被 [NP] V) and light-verb passives, in token order.
inline std::vector<PassiveMatch> detect_zh(const TokenizedSentence &s,
                                           const DetectorConfig &cfg = {}) {
  detail::require_language(s, Language::ZH, "detect_zh");
  const auto n = s.size();
  auto is_content = [&](std::size_t k) {
    return k < n && !utf8::is_punct_token(s[k]);
  };
  auto excluded = [&](std::size_t i) {
    if (detail::contains(cfg.bei_exclusion, s[i]))
      return true;
    if (i > 0 && detail::contains(cfg.bei_exclusion, s[i - 1] + s[i]))
      return true;
    return i + 1 < n && detail::contains(cfg.bei_exclusion, s[i] + s[i + 1]);
  };

  std::vector<PassiveMatch> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (s[i] == "被") {
      if (excluded(i) || !is_content(i + 1))
        continue;
      PassiveMatch m;
      m.kind = PassiveKind::BEI;
      m.marker_index = i;
      const auto k = i + 1;
      if (detail::is_zh_verbish(s[k])) {
        m.verb_index = k;
      } else {
        for (std::size_t j = k + 1;
             is_content(j) && j <= k + detail::kMaxAgentTokens; ++j) {
          if (detail::is_zh_particle(s[j]))
            continue;
          if (detail::is_zh_verbish(s[j])) {
            m.verb_index = j;
            break;
          }
        }
        if (!m.verb_index && is_content(k + 1))
          m.verb_index = k + 1;
        m.agent_present = m.verb_index.has_value();
        if (!m.verb_index)
          m.verb_index = k;
      }
      m.first = i;
      m.last = *m.verb_index;
      out.push_back(m);
    } else if (detail::contains(cfg.light_verb_set, s[i])) {
      std::vector<std::size_t> complement;
      for (std::size_t j = i + 1; is_content(j); ++j) {
        if (detail::is_zh_particle(s[j]))
          continue;
        complement.push_back(j);
        if (complement.size() > cfg.max_gap)
          break;
      }
      if (complement.empty())
        continue;
      std::size_t verb = complement.back();
      static const WordSet verbs = resources::zh_verbs();
      for (auto j : complement)
        if (detail::contains(verbs, s[j])) {
          verb = j;
          break;
        }
      PassiveMatch m;
      m.kind = PassiveKind::LIGHT_VERB;
      m.marker_index = i;
      m.verb_index = verb;
      m.agent_present = complement.front() < verb;
      m.first = i;
      m.last = verb;
      out.push_back(m);
    }
  }
  if (cfg.emit_notional_hints && out.empty())
    for (const auto &h : detect_notional_hint(s, cfg.patient_lexicon))
      out.push_back(h);
  return out;
}

/// Dispatches on the sentence language.
inline std::vector<PassiveMatch> detect(const TokenizedSentence &s,
                                        const DetectorConfig &cfg = {}) {
  switch (s.language) {
  case Language::EN:
    return detect_en(s, cfg);
  case Language::ZH:
    return detect_zh(s, cfg);
  case Language::ES:
    return detect_es(s, cfg);
  }
  return {};
}

enum class Voice { MARKED_PASSIVE, UNMARKED };

inline std::string_view to_string(Voice v) {
  return v == Voice::MARKED_PASSIVE ? "MARKED_PASSIVE" : "UNMARKED";
}

/// Whether a match kind counts as a marked passive under `cfg`.
inline bool counts_as_marked(PassiveKind k, const DetectorConfig &cfg) {
  return k == PassiveKind::BEI ||
         (k == PassiveKind::LIGHT_VERB && cfg.count_light_verb_as_passive);
}

inline Voice classify_voice_zh(const TokenizedSentence &s,
                               const DetectorConfig &cfg = {}) {
  for (const auto &m : detect_zh(s, cfg))
    if (counts_as_marked(m.kind, cfg))
      return Voice::MARKED_PASSIVE;
  return Voice::UNMARKED;
}

inline nlohmann::json to_json(const PassiveMatch &m, const TokenizedSentence &s) {
  nlohmann::json j;
  j["kind"] = std::string(to_string(m.kind));
  j["marker_index"] = m.marker_index;
  j["marker"] = s[m.marker_index];
  if (m.verb_index) {
    j["verb_index"] = *m.verb_index;
    j["verb"] = s[*m.verb_index];
  } else {
    j["verb_index"] = nullptr;
    j["verb"] = nullptr;
  }
  j["agent_present"] = m.agent_present;
  j["span"] = {m.first, m.last};
  return j;
}

} // namespace semprosody
