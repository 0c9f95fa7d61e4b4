#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "semprosody/corpus.hpp"
#include "semprosody/dataset.hpp"
#include "semprosody/error.hpp"
#include "semprosody/passive.hpp"
#include "semprosody/utf8.hpp"

namespace semprosody {

struct BleuConfig {
  std::size_t max_ngram = 4;
  enum class Smoothing { NONE, ADD_K } smoothing = Smoothing::NONE;
  double k = 1.0;
  /// Split CJK text into single characters (latin runs stay whole).
  bool zh_char_tokenize = true;
};

/// Tokens for BLEU. With `zh_char` every CJK character and punctuation mark
/// is its own token; otherwise plain whitespace splitting.
inline std::vector<std::string> bleu_tokenize(std::string_view text, bool zh_char) {
  std::vector<std::string> out;
  std::string run;
  auto flush = [&] {
    if (!run.empty())
      out.push_back(std::move(run));
    run.clear();
  };
  for (const auto &cp : utf8::decode(text)) {
    if (utf8::is_space(cp.value)) {
      flush();
    } else if (zh_char && (utf8::is_cjk(cp.value) || utf8::is_punct(cp.value))) {
      flush();
      std::string t;
      utf8::append(t, cp.value);
      out.push_back(std::move(t));
    } else {
      utf8::append(run, cp.value);
    }
  }
  flush();
  return out;
}

namespace detail {

using NgramCounts = std::unordered_map<std::string, std::size_t>;

template <typename Seq>
NgramCounts count_ngrams(const Seq &units, std::size_t n) {
  NgramCounts counts;
  if (units.size() < n)
    return counts;
  for (std::size_t i = 0; i + n <= units.size(); ++i) {
    std::string key;
    for (std::size_t k = 0; k < n; ++k) {
      if (k)
        key.push_back('\x1f');
      key += units[i + k];
    }
    ++counts[key];
  }
  return counts;
}

inline std::size_t clipped_matches(const NgramCounts &hyp, const NgramCounts &ref) {
  std::size_t m = 0;
  for (const auto &[g, c] : hyp)
    if (auto it = ref.find(g); it != ref.end())
      m += std::min(c, it->second);
  return m;
}

inline void require_aligned(std::size_t hyps, std::size_t refs) {
  if (hyps != refs)
    throw DataError("hypothesis/reference count mismatch: " + std::to_string(hyps) +
                    " vs " + std::to_string(refs));
  if (hyps == 0)
    throw DataError("empty hypothesis set");
}

} // namespace detail

/// Corpus-level n-gram statistics behind a BLEU score.
struct BleuStats {
  std::vector<std::size_t> matches;
  std::vector<std::size_t> totals;
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
};

inline BleuStats bleu_stats(const std::vector<std::string> &hyps,
                            const std::vector<std::string> &refs,
                            const BleuConfig &cfg = {}) {
  detail::require_aligned(hyps.size(), refs.size());
  if (cfg.max_ngram < 1)
    throw ConfigError("max_ngram must be at least 1");
  BleuStats st;
  st.matches.assign(cfg.max_ngram, 0);
  st.totals.assign(cfg.max_ngram, 0);
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    const auto h = bleu_tokenize(hyps[i], cfg.zh_char_tokenize);
    const auto r = bleu_tokenize(refs[i], cfg.zh_char_tokenize);
    st.hyp_len += h.size();
    st.ref_len += r.size();
    for (std::size_t n = 1; n <= cfg.max_ngram; ++n) {
      const auto hc = detail::count_ngrams(h, n);
      const auto rc = detail::count_ngrams(r, n);
      st.matches[n - 1] += detail::clipped_matches(hc, rc);
      if (h.size() >= n)
        st.totals[n - 1] += h.size() - n + 1;
    }
  }
  return st;
}

inline double brevity_penalty(std::size_t hyp_len, std::size_t ref_len) {
  if (hyp_len == 0)
    return 0.0;
  if (hyp_len >= ref_len)
    return 1.0;
  return std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len));
}

/// Score from statistics. Orders for which the hypotheses contain no n-grams
/// at all are left out of the geometric mean.
inline double bleu_from_stats(const BleuStats &st, const BleuConfig &cfg = {}) {
  if (st.hyp_len == 0)
    return 0.0;
  double log_sum = 0.0;
  std::size_t orders = 0;
  for (std::size_t n = 1; n <= st.totals.size(); ++n) {
    double m = static_cast<double>(st.matches[n - 1]);
    double t = static_cast<double>(st.totals[n - 1]);
    if (t == 0.0)
      continue;
    if (cfg.smoothing == BleuConfig::Smoothing::ADD_K && n > 1) {
      m += cfg.k;
      t += cfg.k;
    }
    if (m == 0.0)
      return 0.0;
    log_sum += std::log(m / t);
    ++orders;
  }
  if (orders == 0)
    return 0.0;
  const double score = 100.0 * brevity_penalty(st.hyp_len, st.ref_len) *
                       std::exp(log_sum / static_cast<double>(orders));
  return std::clamp(score, 0.0, 100.0);
}

inline double bleu(const std::vector<std::string> &hyps,
                   const std::vector<std::string> &refs,
                   const BleuConfig &cfg = {}) {
  return bleu_from_stats(bleu_stats(hyps, refs, cfg), cfg);
}

struct ChrfConfig {
  double beta = 2.0;
  std::size_t char_order = 6;
  /// Word n-gram order; 2 gives chrF++.
  std::size_t word_order = 0;
};

/// Character n-gram F-score. Per-order precision and recall come from
/// corpus-level counts, are averaged over orders, and then combined.
/// Orders with no n-grams on either side are skipped.
inline double chrf(const std::vector<std::string> &hyps,
                   const std::vector<std::string> &refs,
                   const ChrfConfig &cfg = {}) {
  detail::require_aligned(hyps.size(), refs.size());
  const auto orders = cfg.char_order + cfg.word_order;
  std::vector<std::size_t> match(orders, 0), hyp_n(orders, 0), ref_n(orders, 0);
  auto chars = [](std::string_view s) {
    std::vector<std::string> out;
    for (const auto &cp : utf8::decode(s)) {
      if (utf8::is_space(cp.value))
        continue;
      std::string c;
      utf8::append(c, cp.value);
      out.push_back(std::move(c));
    }
    return out;
  };
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    const auto hc = chars(hyps[i]);
    const auto rc = chars(refs[i]);
    const auto hw = bleu_tokenize(hyps[i], false);
    const auto rw = bleu_tokenize(refs[i], false);
    for (std::size_t o = 0; o < orders; ++o) {
      const bool is_char = o < cfg.char_order;
      const auto n = is_char ? o + 1 : o - cfg.char_order + 1;
      const auto hgrams = is_char ? detail::count_ngrams(hc, n) : detail::count_ngrams(hw, n);
      const auto rgrams = is_char ? detail::count_ngrams(rc, n) : detail::count_ngrams(rw, n);
      match[o] += detail::clipped_matches(hgrams, rgrams);
      for (const auto &[_, c] : hgrams)
        hyp_n[o] += c;
      for (const auto &[_, c] : rgrams)
        ref_n[o] += c;
    }
  }
  double p_sum = 0.0, r_sum = 0.0;
  std::size_t effective = 0;
  for (std::size_t o = 0; o < orders; ++o) {
    if (hyp_n[o] == 0 && ref_n[o] == 0)
      continue;
    ++effective;
    if (hyp_n[o])
      p_sum += static_cast<double>(match[o]) / static_cast<double>(hyp_n[o]);
    if (ref_n[o])
      r_sum += static_cast<double>(match[o]) / static_cast<double>(ref_n[o]);
  }
  if (effective == 0)
    return 0.0;
  const double p = p_sum / static_cast<double>(effective);
  const double r = r_sum / static_cast<double>(effective);
  const double b2 = cfg.beta * cfg.beta;
  const double denom = b2 * p + r;
  if (denom <= 0.0)
    return 0.0;
  return std::clamp(100.0 * (1.0 + b2) * p * r / denom, 0.0, 100.0);
}

struct BeiAccuracy {
  std::size_t pos_total = 0;
  std::size_t pos_correct = 0;
  std::size_t neg_total = 0;
  std::size_t neg_correct = 0;
  double pos_acc = 0.0;
  double neg_acc = 0.0;
};

/// Positive items are correct when the hypothesis uses a marked passive,
/// negative items when it does not. Hypotheses are raw Chinese text.
inline BeiAccuracy bei_accuracy(const std::vector<EvidencePair> &items,
                                const std::vector<std::string> &hypotheses,
                                const SegmentationDict &dict,
                                const DetectorConfig &cfg = {}) {
  if (items.size() != hypotheses.size())
    throw DataError("test items and hypotheses are not aligned: " +
                    std::to_string(items.size()) + " vs " +
                    std::to_string(hypotheses.size()));
  BeiAccuracy acc;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto voice = classify_voice_zh(segment_zh(hypotheses[i], dict), cfg);
    if (items[i].evidence == Evidence::POSITIVE) {
      ++acc.pos_total;
      acc.pos_correct += voice == Voice::MARKED_PASSIVE;
    } else {
      ++acc.neg_total;
      acc.neg_correct += voice == Voice::UNMARKED;
    }
  }
  auto ratio = [](std::size_t c, std::size_t t) {
    return t == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(t);
  };
  acc.pos_acc = ratio(acc.pos_correct, acc.pos_total);
  acc.neg_acc = ratio(acc.neg_correct, acc.neg_total);
  return acc;
}

} // namespace semprosody
