#pragma once

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "semprosody/error.hpp"
#include "semprosody/utf8.hpp"

namespace semprosody {

enum class Language { EN, ZH, ES };

inline std::string_view to_string(Language lang) {
  switch (lang) {
  case Language::EN:
    return "en";
  case Language::ZH:
    return "zh";
  case Language::ES:
    return "es";
  }
  return "?";
}

inline std::optional<Language> parse_language(std::string_view s) {
  const auto l = utf8::to_lower(s);
  if (l == "en")
    return Language::EN;
  if (l == "zh")
    return Language::ZH;
  if (l == "es")
    return Language::ES;
  return std::nullopt;
}

/// A token with half-open code-point offsets into the raw sentence.
struct Token {
  std::string surface;
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  bool operator==(const Token &) const = default;
};

struct TokenizedSentence {
  Language language = Language::EN;
  std::vector<Token> tokens;
  std::string raw;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  const std::string &operator[](std::size_t i) const {
    return tokens[i].surface;
  }
  std::vector<std::string> surfaces() const {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto &t : tokens)
      out.push_back(t.surface);
    return out;
  }

  bool operator==(const TokenizedSentence &) const = default;
};

/// Rebuilds the raw text from token surfaces and the original gaps between
/// their offsets. Equals `s.raw` whenever the offset invariants hold.
inline std::string reconstruct(const TokenizedSentence &s) {
  const auto cps = utf8::decode(s.raw);
  auto slice = [&](std::size_t from, std::size_t to) {
    if (from >= to || from >= cps.size())
      return std::string();
    to = std::min(to, cps.size());
    const auto b0 = cps[from].byte_offset;
    const auto b1 = to == cps.size() ? s.raw.size() : cps[to].byte_offset;
    return s.raw.substr(b0, b1 - b0);
  };
  std::string out;
  std::size_t pos = 0;
  for (const auto &t : s.tokens) {
    out += slice(pos, t.char_start);
    out += t.surface;
    pos = t.char_end;
  }
  out += slice(pos, cps.size());
  return out;
}

namespace detail {

struct Chunk {
  std::size_t begin; // code-point index
  std::size_t end;
};

inline std::vector<Chunk> whitespace_chunks(const std::vector<utf8::CodePoint> &cps) {
  std::vector<Chunk> out;
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && utf8::is_space(cps[i].value))
      ++i;
    if (i == cps.size())
      break;
    std::size_t j = i;
    while (j < cps.size() && !utf8::is_space(cps[j].value))
      ++j;
    out.push_back({i, j});
    i = j;
  }
  return out;
}

class TokenBuilder {
public:
  TokenBuilder(std::string_view raw, const std::vector<utf8::CodePoint> &cps)
      : raw_(raw), cps_(cps) {}

  void emit(std::size_t begin, std::size_t end) {
    if (begin >= end)
      return;
    const auto b0 = cps_[begin].byte_offset;
    const auto b1 = end == cps_.size() ? raw_.size() : cps_[end].byte_offset;
    tokens_.push_back({std::string(raw_.substr(b0, b1 - b0)), begin, end});
  }

  std::vector<Token> take() { return std::move(tokens_); }

private:
  std::string_view raw_;
  const std::vector<utf8::CodePoint> &cps_;
  std::vector<Token> tokens_;
};

inline bool is_apostrophe(char32_t c) { return c == U'\'' || c == 0x2019; }

/// Splits an English clitic off the end of [begin, end); returns the split
/// point or `end` when there is none.
inline std::size_t clitic_split(const std::vector<utf8::CodePoint> &cps,
                                std::size_t begin, std::size_t end) {
  const auto n = end - begin;
  auto lower_at = [&](std::size_t i) { return utf8::to_lower(cps[i].value); };
  if (n > 3 && lower_at(end - 3) == U'n' && is_apostrophe(cps[end - 2].value) &&
      lower_at(end - 1) == U't')
    return end - 3;
  for (std::size_t p = end; p-- > begin + 1;) {
    if (!is_apostrophe(cps[p].value))
      continue;
    std::u32string suffix;
    for (std::size_t k = p + 1; k < end; ++k)
      suffix.push_back(lower_at(k));
    if (suffix == U"s" || suffix == U"re" || suffix == U"m" || suffix == U"ve" ||
        suffix == U"d" || suffix == U"ll")
      return p;
    break;
  }
  return end;
}

inline TokenizedSentence tokenize_latin(std::string_view text, Language lang,
                                        bool english_clitics) {
  TokenizedSentence out{lang, {}, std::string(text)};
  const auto cps = utf8::decode(text);
  TokenBuilder tb(text, cps);
  for (auto [b, e] : whitespace_chunks(cps)) {
    std::size_t lead = b;
    while (lead < e && utf8::is_punct(cps[lead].value)) {
      tb.emit(lead, lead + 1);
      ++lead;
    }
    std::size_t trail = e;
    while (trail > lead && utf8::is_punct(cps[trail - 1].value))
      --trail;
    if (lead < trail) {
      const auto split =
          english_clitics ? clitic_split(cps, lead, trail) : trail;
      tb.emit(lead, split);
      tb.emit(split, trail);
    }
    for (std::size_t k = trail; k < e; ++k)
      tb.emit(k, k + 1);
  }
  out.tokens = tb.take();
  return out;
}

} // namespace detail

/// Whitespace tokenization with punctuation peeled off chunk edges and
/// English clitics ('s, n't, 're, 'm, 've, 'd, 'll) split off.
inline TokenizedSentence tokenize_en(std::string_view text) {
  return detail::tokenize_latin(text, Language::EN, true);
}

inline TokenizedSentence tokenize_es(std::string_view text) {
  return detail::tokenize_latin(text, Language::ES, false);
}

/// Word list for forward maximum matching. Lengths are in code points.
/// An entry written with inner spaces ("被 告知") matches its joined
/// surface but is emitted as the space-separated pieces.
class SegmentationDict {
public:
  SegmentationDict() = default;
  SegmentationDict(std::initializer_list<std::string_view> words) {
    for (auto w : words)
      insert(w);
  }
  template <typename Range> explicit SegmentationDict(const Range &words) {
    for (const auto &w : words)
      insert(w);
  }

  void insert(std::string_view entry) {
    std::string surface;
    std::vector<std::size_t> pieces;
    std::size_t run = 0;
    for (const auto &cp : utf8::decode(entry)) {
      if (utf8::is_space(cp.value)) {
        if (run > 0)
          pieces.push_back(run);
        run = 0;
        continue;
      }
      utf8::append(surface, cp.value);
      ++run;
    }
    if (run > 0)
      pieces.push_back(run);
    if (surface.empty())
      return;
    if (pieces.size() == 1)
      pieces.clear();
    max_word_len_ = std::max(max_word_len_, utf8::length(surface));
    words_[surface] = std::move(pieces);
  }

  bool contains(std::string_view word) const {
    return words_.find(std::string(word)) != words_.end();
  }
  /// Code-point lengths of the emitted pieces; empty for a plain word.
  const std::vector<std::size_t> &pieces(std::string_view word) const {
    static const std::vector<std::size_t> none;
    auto it = words_.find(std::string(word));
    return it == words_.end() ? none : it->second;
  }
  std::size_t max_word_len() const { return max_word_len_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

  static SegmentationDict load(const std::string &path) {
    std::ifstream in(path);
    if (!in)
      throw DataError("cannot open segmentation dictionary: " + path);
    SegmentationDict dict;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos)
        continue;
      const auto last = line.find_last_not_of(" \t");
      dict.insert(std::string_view(line).substr(first, last - first + 1));
    }
    return dict;
  }

private:
  std::unordered_map<std::string, std::vector<std::size_t>> words_;
  std::size_t max_word_len_ = 0;
};

/// Forward maximum matching. Whitespace always separates tokens, so
/// pre-segmented input keeps its boundaries. Inside a chunk the longest
/// dictionary word (two or more code points) wins; otherwise punctuation
/// and CJK characters become single tokens and any other run (latin
/// letters, digits) stays whole.
inline TokenizedSentence segment_zh(std::string_view text,
                                    const SegmentationDict &dict) {
  TokenizedSentence out{Language::ZH, {}, std::string(text)};
  const auto cps = utf8::decode(text);
  detail::TokenBuilder tb(text, cps);
  auto slice = [&](std::size_t b, std::size_t e) {
    const auto b0 = cps[b].byte_offset;
    const auto b1 = e == cps.size() ? text.size() : cps[e].byte_offset;
    return text.substr(b0, b1 - b0);
  };
  auto is_run_char = [](char32_t c) {
    return !utf8::is_cjk(c) && !utf8::is_punct(c) && !utf8::is_space(c);
  };
  for (auto [b, e] : detail::whitespace_chunks(cps)) {
    std::size_t i = b;
    while (i < e) {
      std::size_t take = 0;
      const auto longest = std::min(dict.max_word_len(), e - i);
      for (std::size_t len = longest; len >= 2; --len) {
        if (dict.contains(slice(i, i + len))) {
          take = len;
          break;
        }
      }
      if (take > 0 && !dict.pieces(slice(i, i + take)).empty()) {
        for (auto n : dict.pieces(slice(i, i + take))) {
          tb.emit(i, i + n);
          i += n;
        }
        continue;
      }
      if (take == 0) {
        take = 1;
        if (is_run_char(cps[i].value))
          while (i + take < e && is_run_char(cps[i + take].value))
            ++take;
      }
      tb.emit(i, i + take);
      i += take;
    }
  }
  out.tokens = tb.take();
  return out;
}

/// Which half of a parallel pair an operation looks at.
enum class Side { Src, Tgt };

inline std::optional<Side> parse_side(std::string_view s) {
  const auto l = utf8::to_lower(s);
  if (l == "src" || l == "source")
    return Side::Src;
  if (l == "tgt" || l == "target")
    return Side::Tgt;
  return std::nullopt;
}

struct ParallelPair {
  std::string id;
  TokenizedSentence src;
  std::optional<TokenizedSentence> tgt;
  std::map<std::string, std::string> meta;

  const TokenizedSentence *side(Side s) const {
    if (s == Side::Src)
      return &src;
    return tgt ? &*tgt : nullptr;
  }
};

/// Ordered, immutable collection of pairs. Monolingual corpora leave tgt
/// empty.
class Corpus {
public:
  Corpus() = default;
  explicit Corpus(std::vector<ParallelPair> pairs) : pairs_(std::move(pairs)) {
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      const auto &p = pairs_[i];
      if (!seen.insert(p.id).second)
        throw DataError("duplicate pair id '" + p.id + "'");
      if (p.tgt && p.tgt->language == p.src.language)
        throw DataError("pair '" + p.id + "': source and target share a language");
      src_tokens_ += p.src.size();
      if (p.tgt)
        tgt_tokens_ += p.tgt->size();
    }
  }

  const std::vector<ParallelPair> &pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  const ParallelPair &operator[](std::size_t i) const { return pairs_[i]; }
  auto begin() const { return pairs_.begin(); }
  auto end() const { return pairs_.end(); }

  std::size_t token_count(Side s) const {
    return s == Side::Src ? src_tokens_ : tgt_tokens_;
  }

private:
  std::vector<ParallelPair> pairs_;
  std::size_t src_tokens_ = 0;
  std::size_t tgt_tokens_ = 0;
};

/// Language-dispatching tokenizer; Chinese goes through `segment_zh`.
class Tokenizer {
public:
  explicit Tokenizer(SegmentationDict zh_dict) : zh_dict_(std::move(zh_dict)) {}

  TokenizedSentence operator()(std::string_view text, Language lang) const {
    switch (lang) {
    case Language::EN:
      return tokenize_en(text);
    case Language::ES:
      return tokenize_es(text);
    case Language::ZH:
      return segment_zh(text, zh_dict_);
    }
    return tokenize_en(text);
  }

  const SegmentationDict &zh_dict() const { return zh_dict_; }

private:
  SegmentationDict zh_dict_;
};

enum class CorpusFormat { JSONL, TSV };

inline std::optional<CorpusFormat> parse_corpus_format(std::string_view s) {
  const auto l = utf8::to_lower(s);
  if (l == "jsonl")
    return CorpusFormat::JSONL;
  if (l == "tsv")
    return CorpusFormat::TSV;
  return std::nullopt;
}

struct LoadOptions {
  /// When false, records without a target are accepted (monolingual).
  bool parallel = true;
  /// Languages for TSV input and for JSONL records that omit them.
  Language default_src = Language::EN;
  Language default_tgt = Language::ZH;
};

namespace detail {

inline std::string json_scalar_text(const nlohmann::json &v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

inline Language record_language(const nlohmann::json &rec, const char *key,
                                Language fallback, std::size_t line) {
  if (!rec.contains(key))
    return fallback;
  if (!rec[key].is_string())
    throw DataError(at_line(line, std::string("field '") + key + "' must be a string"));
  const auto lang = parse_language(rec[key].get<std::string>());
  if (!lang)
    throw DataError(at_line(line, "unknown language '" + rec[key].get<std::string>() + "'"));
  return *lang;
}

} // namespace detail

/// Parses parallel text from a stream; `load_parallel` wraps this for files.
inline Corpus read_parallel(std::istream &in, CorpusFormat format,
                            const Tokenizer &tokenize,
                            const LoadOptions &opts = {}) {
  std::vector<ParallelPair> pairs;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos)
      continue;
    ParallelPair pair;
    std::optional<std::string> tgt_text;
    Language src_lang = opts.default_src;
    Language tgt_lang = opts.default_tgt;
    std::string src_text;
    if (format == CorpusFormat::JSONL) {
      nlohmann::json rec;
      try {
        rec = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error &e) {
        throw DataError(at_line(lineno, std::string("malformed JSON: ") + e.what()));
      }
      if (!rec.is_object())
        throw DataError(at_line(lineno, "record is not a JSON object"));
      if (!rec.contains("id"))
        throw DataError(at_line(lineno, "missing field 'id'"));
      if (!rec.contains("src") || !rec["src"].is_string())
        throw DataError(at_line(lineno, "missing string field 'src'"));
      pair.id = detail::json_scalar_text(rec["id"]);
      src_text = rec["src"].get<std::string>();
      if (rec.contains("tgt") && !rec["tgt"].is_null()) {
        if (!rec["tgt"].is_string())
          throw DataError(at_line(lineno, "field 'tgt' must be a string"));
        tgt_text = rec["tgt"].get<std::string>();
      }
      src_lang = detail::record_language(rec, "src_lang", src_lang, lineno);
      tgt_lang = detail::record_language(rec, "tgt_lang", tgt_lang, lineno);
      if (rec.contains("meta")) {
        if (!rec["meta"].is_object())
          throw DataError(at_line(lineno, "field 'meta' must be an object"));
        for (const auto &[k, v] : rec["meta"].items())
          pair.meta[k] = detail::json_scalar_text(v);
      }
    } else {
      std::vector<std::string> cols;
      std::size_t start = 0;
      for (;;) {
        const auto tab = line.find('\t', start);
        cols.push_back(line.substr(start, tab - start));
        if (tab == std::string::npos)
          break;
        start = tab + 1;
      }
      if (cols.size() < 2 || cols.size() > 3)
        throw DataError(at_line(lineno, "expected id<TAB>src<TAB>tgt"));
      pair.id = cols[0];
      src_text = cols[1];
      if (cols.size() == 3)
        tgt_text = cols[2];
    }
    if (opts.parallel && !tgt_text)
      throw DataError(at_line(lineno, "missing field 'tgt'"));
    if (tgt_text && src_lang == tgt_lang)
      throw DataError(at_line(lineno, "src_lang equals tgt_lang"));
    if (!ids.insert(pair.id).second)
      throw DataError(at_line(lineno, "duplicate id '" + pair.id + "'"));
    pair.src = tokenize(src_text, src_lang);
    if (tgt_text)
      pair.tgt = tokenize(*tgt_text, tgt_lang);
    pairs.push_back(std::move(pair));
  }
  return Corpus(std::move(pairs));
}

inline Corpus load_parallel(const std::string &path, CorpusFormat format,
                            const Tokenizer &tokenize,
                            const LoadOptions &opts = {}) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open corpus: " + path);
  return read_parallel(in, format, tokenize, opts);
}

enum class Polarity { POS, NEG, NEU };

inline std::string_view to_string(Polarity p) {
  switch (p) {
  case Polarity::POS:
    return "POS";
  case Polarity::NEG:
    return "NEG";
  case Polarity::NEU:
    return "NEU";
  }
  return "?";
}

inline std::optional<Polarity> parse_polarity(std::string_view s) {
  const auto l = utf8::to_lower(s);
  if (l == "pos")
    return Polarity::POS;
  if (l == "neg")
    return Polarity::NEG;
  if (l == "neu")
    return Polarity::NEU;
  return std::nullopt;
}

struct LexiconEntry {
  Polarity polarity = Polarity::NEU;
  double weight = 0.0;
};

/// Token polarity lookup. Total: unknown tokens are NEU with weight 0.
class PolarityLexicon {
public:
  void set(std::string token, Polarity polarity, double weight = 1.0) {
    entries_[std::move(token)] = {polarity, weight};
  }

  /// Exact match first, then the lower-cased form.
  LexiconEntry lookup(std::string_view token) const {
    if (auto it = entries_.find(std::string(token)); it != entries_.end())
      return it->second;
    if (auto it = entries_.find(utf8::to_lower(token)); it != entries_.end())
      return it->second;
    return {};
  }

  bool contains(std::string_view token) const {
    return entries_.count(std::string(token)) > 0;
  }
  std::size_t size() const { return entries_.size(); }

  /// Multiplies every weight by `factor`.
  PolarityLexicon scaled(double factor) const {
    PolarityLexicon out = *this;
    for (auto &[_, e] : out.entries_)
      e.weight *= factor;
    return out;
  }

private:
  std::unordered_map<std::string, LexiconEntry> entries_;
};

using WarningSink = std::function<void(const std::string &)>;

inline void warn_to_stderr(const std::string &msg) {
  std::cerr << "warning: " << msg << '\n';
}

/// Reads `token<TAB>polarity[<TAB>weight]` rows; `#` starts a comment line.
/// Duplicate tokens: the last row wins and a warning is emitted.
inline PolarityLexicon read_lexicon(std::istream &in,
                                    const WarningSink &warn = warn_to_stderr) {
  PolarityLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line[0] == '#')
      continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (;;) {
      const auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos)
        break;
      start = tab + 1;
    }
    if (cols.size() < 2 || cols.size() > 3 || cols[0].empty())
      throw DataError(at_line(lineno, "expected token<TAB>polarity[<TAB>weight]"));
    const auto pol = parse_polarity(cols[1]);
    if (!pol)
      throw DataError(at_line(lineno, "unknown polarity label '" + cols[1] + "'"));
    double weight = 1.0;
    if (cols.size() == 3) {
      try {
        std::size_t used = 0;
        weight = std::stod(cols[2], &used);
        if (used != cols[2].size())
          throw std::invalid_argument("trailing characters");
      } catch (const std::exception &) {
        throw DataError(at_line(lineno, "bad weight '" + cols[2] + "'"));
      }
      if (weight < 0)
        throw DataError(at_line(lineno, "negative weight"));
    }
    if (lex.contains(cols[0]) && warn)
      warn(at_line(lineno, "duplicate lexicon token '" + cols[0] + "', last row wins"));
    lex.set(cols[0], *pol, weight);
  }
  return lex;
}

inline PolarityLexicon load_lexicon(const std::string &path,
                                    const WarningSink &warn = warn_to_stderr) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open lexicon: " + path);
  return read_lexicon(in, warn);
}

} // namespace semprosody
