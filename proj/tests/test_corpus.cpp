#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "support.hpp"

using namespace semprosody;
using namespace testing_support;

namespace {

std::vector<std::string> surfaces(const TokenizedSentence &s) { return s.surfaces(); }

using Strings = std::vector<std::string>;

} // namespace

TEST(TokenizeEn, SplitsTrailingPunctuation) {
  EXPECT_EQ(surfaces(tokenize_en("I was praised by my teacher.")),
            (Strings{"I", "was", "praised", "by", "my", "teacher", "."}));
}

TEST(TokenizeEn, EmptyText) { EXPECT_TRUE(tokenize_en("").empty()); }

TEST(TokenizeEn, SplitsClitics) {
  EXPECT_EQ(surfaces(tokenize_en("It wasn't told.")),
            (Strings{"It", "was", "n't", "told", "."}));
  EXPECT_EQ(surfaces(tokenize_en("We're sure he'd go, they'll see I'm right and you've won.")),
            (Strings{"We", "'re", "sure", "he", "'d", "go", ",", "they", "'ll", "see", "I",
                     "'m", "right", "and", "you", "'ve", "won", "."}));
  EXPECT_EQ(surfaces(tokenize_en("my friend's house")),
            (Strings{"my", "friend", "'s", "house"}));
}

TEST(TokenizeEn, CurlyApostropheClitic) {
  EXPECT_EQ(surfaces(tokenize_en("my friend’s house")),
            (Strings{"my", "friend", "’s", "house"}));
}

TEST(TokenizeEn, CasePreservedAndOffsetsInCodePoints) {
  const auto s = tokenize_en("Ünïcode Was");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.tokens[0].surface, "Ünïcode");
  EXPECT_EQ(s.tokens[0].char_start, 0u);
  EXPECT_EQ(s.tokens[0].char_end, 7u);
  EXPECT_EQ(s.tokens[1].char_start, 8u);
  EXPECT_EQ(s.tokens[1].surface, "Was");
}

TEST(TokenizeEs, Examples) {
  EXPECT_EQ(surfaces(tokenize_es("Fuiste tratado como un hijo.")),
            (Strings{"Fuiste", "tratado", "como", "un", "hijo", "."}));
  EXPECT_TRUE(tokenize_es("").empty());
  EXPECT_EQ(surfaces(tokenize_es("¿Fue visto?")), (Strings{"¿", "Fue", "visto", "?"}));
}

TEST(TokenizeEs, NoEnglishClitics) {
  EXPECT_EQ(surfaces(tokenize_es("it's")), (Strings{"it's"}));
}

TEST(SegmentZh, LongestMatchWithSmallDict) {
  const SegmentationDict dict{"李四", "张三", "打"};
  EXPECT_EQ(surfaces(segment_zh("李四被张三打了", dict)),
            (Strings{"李四", "被", "张三", "打", "了"}));
}

TEST(SegmentZh, EmptyText) { EXPECT_TRUE(segment_zh("", SegmentationDict{"被子"}).empty()); }

TEST(SegmentZh, BeiAbsorbedIntoWord) {
  const SegmentationDict dict{"被子"};
  EXPECT_EQ(surfaces(segment_zh("他有一床被子", dict)),
            (Strings{"他", "有", "一", "床", "被子"}));
}

TEST(SegmentZh, LatinAndDigitRunsStayWhole) {
  const SegmentationDict dict{"老师"};
  EXPECT_EQ(surfaces(segment_zh("老师用iPhone15拍照。", dict)),
            (Strings{"老师", "用", "iPhone15", "拍", "照", "。"}));
}

TEST(SegmentZh, WhitespaceAlwaysSplits) {
  const SegmentationDict dict{"老师", "老师的"};
  EXPECT_EQ(surfaces(segment_zh("老师的", dict)), (Strings{"老师的"}));
  EXPECT_EQ(surfaces(segment_zh("老师 的", dict)), (Strings{"老师", "的"}));
}

TEST(SegmentZh, SplitEntriesEmitPieces) {
  const SegmentationDict dict{"被告", "被 告知", "告知"};
  EXPECT_EQ(surfaces(segment_zh("我被告知了", dict)), (Strings{"我", "被", "告知", "了"}));
  EXPECT_EQ(surfaces(segment_zh("被告说", dict)), (Strings{"被告", "说"}));
  EXPECT_EQ(dict.max_word_len(), 3u);
}

TEST(SegmentZh, BundledDictionaryKeepsBeiWordsWhole) {
  const auto dict = default_dict();
  for (const char *w : {"被子", "棉被", "被动", "被告"})
    EXPECT_EQ(surfaces(segment_zh(w, dict)), (Strings{w})) << w;
}

TEST(SegmentationDictTest, MaxWordLenIsLongestEntry) {
  SegmentationDict dict;
  EXPECT_EQ(dict.max_word_len(), 0u);
  dict.insert("一");
  dict.insert("恶作剧");
  dict.insert("被子");
  dict.insert("");
  EXPECT_EQ(dict.max_word_len(), 3u);
  EXPECT_EQ(dict.size(), 3u);
}

TEST(SegmentationDictTest, LoadsWordPerLineFile) {
  TempDir tmp;
  const auto path = tmp.write("dict.txt", "李四\n\n  张三  \r\n打\n");
  const auto dict = SegmentationDict::load(path);
  EXPECT_TRUE(dict.contains("张三"));
  EXPECT_EQ(dict.size(), 3u);
  EXPECT_THROW(SegmentationDict::load(tmp.file("missing.txt")), DataError);
}

// Random strings over a mixed alphabet for the round-trip properties.
namespace {

std::string random_text(std::mt19937_64 &gen, bool chinese) {
  static const std::vector<std::string> zh_alpha = {
      "被", "子", "老", "师", "我", "了", "，", "。", " ", "a", "Z", "9",
      "受", "到", "表", "扬", "「", "」", "\t", "被子", "告", "知"};
  static const std::vector<std::string> en_alpha = {
      "a", "b", "I", "'", "s", "n", "t", " ", "  ", ".", ",", "!", "é", "ñ",
      "¿", "?", "’", "-", "\"", "(", ")", "x", "ll", "ve", "\n"};
  const auto &alpha = chinese ? zh_alpha : en_alpha;
  std::uniform_int_distribution<std::size_t> len(0, 30), pick(0, alpha.size() - 1);
  std::string s;
  for (auto n = len(gen); n > 0; --n)
    s += alpha[pick(gen)];
  return s;
}

void expect_offsets_valid(const TokenizedSentence &s) {
  const auto n = utf8::length(s.raw);
  std::size_t prev_end = 0;
  for (const auto &t : s.tokens) {
    EXPECT_LT(t.char_start, t.char_end);
    EXPECT_GE(t.char_start, prev_end);
    EXPECT_LE(t.char_end, n);
    prev_end = t.char_end;
  }
}

} // namespace

TEST(TokenizationProperty, RoundTripReconstructsRaw) {
  std::mt19937_64 gen(7);
  const auto dict = default_dict();
  for (int i = 0; i < 500; ++i) {
    const auto en = random_text(gen, false);
    for (const auto &s : {tokenize_en(en), tokenize_es(en)}) {
      EXPECT_EQ(reconstruct(s), en);
      expect_offsets_valid(s);
    }
    const auto zh = random_text(gen, true);
    const auto s = segment_zh(zh, dict);
    EXPECT_EQ(reconstruct(s), zh);
    expect_offsets_valid(s);
  }
}

TEST(TokenizationProperty, SegmentationIsIdempotent) {
  std::mt19937_64 gen(11);
  const auto dict = default_dict();
  for (int i = 0; i < 500; ++i) {
    const auto text = random_text(gen, true);
    const auto first = segment_zh(text, dict);
    std::string joined;
    for (const auto &t : first.tokens)
      joined += (joined.empty() ? "" : " ") + t.surface;
    EXPECT_EQ(segment_zh(joined, dict).surfaces(), first.surfaces()) << text;
  }
}

TEST(TokenizationProperty, Deterministic) {
  const auto dict = default_dict();
  const std::string text = "家珍被拖出去时，双手紧紧捂着凸起的肚子。";
  EXPECT_EQ(segment_zh(text, dict), segment_zh(text, dict));
}

TEST(LoadParallel, JsonlTwoPairs) {
  std::istringstream in(
      R"({"id":"a","src":"I was praised.","tgt":"我被表扬了。","src_lang":"en","tgt_lang":"zh"})"
      "\n"
      R"({"id":"b","src":"He slept.","tgt":"他睡了。","meta":{"genre":"fiction"}})"
      "\n");
  const auto corpus = read_parallel(in, CorpusFormat::JSONL, default_tokenizer());
  ASSERT_EQ(corpus.size(), 2u);
  EXPECT_EQ(corpus[0].id, "a");
  EXPECT_EQ(corpus[1].id, "b");
  EXPECT_EQ(corpus[1].meta.at("genre"), "fiction");
  EXPECT_EQ(corpus[0].tgt->language, Language::ZH);
}

TEST(LoadParallel, MissingTargetReportsLine) {
  std::istringstream in(
      "{\"id\":\"a\",\"src\":\"x\",\"tgt\":\"y\"}\n{\"id\":\"b\",\"src\":\"x\"}\n");
  try {
    read_parallel(in, CorpusFormat::JSONL, default_tokenizer());
    FAIL() << "expected an error";
  } catch (const DataError &e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(LoadParallel, MonolingualModeAcceptsMissingTarget) {
  std::istringstream in("{\"id\":\"b\",\"src\":\"x\"}\n");
  LoadOptions opts;
  opts.parallel = false;
  const auto corpus = read_parallel(in, CorpusFormat::JSONL, default_tokenizer(), opts);
  ASSERT_EQ(corpus.size(), 1u);
  EXPECT_FALSE(corpus[0].tgt.has_value());
}

TEST(LoadParallel, DuplicateIdAndMalformedJson) {
  std::istringstream dup("{\"id\":\"a\",\"src\":\"x\",\"tgt\":\"y\"}\n"
                         "{\"id\":\"a\",\"src\":\"x\",\"tgt\":\"y\"}\n");
  EXPECT_THROW(read_parallel(dup, CorpusFormat::JSONL, default_tokenizer()), DataError);
  std::istringstream bad("{\"id\":\"a\",\n");
  EXPECT_THROW(read_parallel(bad, CorpusFormat::JSONL, default_tokenizer()), DataError);
}

TEST(LoadParallel, TsvFallback) {
  std::istringstream in("p1\tThe door was opened.\t门被打开了。\n");
  const auto corpus = read_parallel(in, CorpusFormat::TSV, default_tokenizer());
  ASSERT_EQ(corpus.size(), 1u);
  EXPECT_EQ(corpus[0].src.surfaces().back(), ".");
}

TEST(LoadParallel, SameLanguagesRejected) {
  std::istringstream in(R"({"id":"a","src":"x","tgt":"y","src_lang":"en","tgt_lang":"en"})");
  EXPECT_THROW(read_parallel(in, CorpusFormat::JSONL, default_tokenizer()), DataError);
}

TEST(LoadParallel, TokenCountMatchesIndependentRecount) {
  const auto tok = default_tokenizer();
  const auto corpus = load_parallel(data_path("synthetic/pairs120.jsonl"), CorpusFormat::JSONL, tok);
  ASSERT_EQ(corpus.size(), 120u);
  std::size_t src = 0, tgt = 0;
  std::ifstream in(data_path("synthetic/pairs120.jsonl"));
  std::string line;
  std::size_t i = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(corpus[i].id, j["id"].get<std::string>());
    src += tokenize_en(j["src"].get<std::string>()).size();
    tgt += segment_zh(j["tgt"].get<std::string>(), tok.zh_dict()).size();
    ++i;
  }
  EXPECT_EQ(corpus.token_count(Side::Src), src);
  EXPECT_EQ(corpus.token_count(Side::Tgt), tgt);
}

TEST(LoadParallel, MissingFile) {
  EXPECT_THROW(load_parallel("/nonexistent/corpus.jsonl", CorpusFormat::JSONL,
                             default_tokenizer()),
               DataError);
}

TEST(Lexicon, LookupAndCaseInsensitiveLabels) {
  std::istringstream in("# comment\nmisery\tNEG\npraise\tpos\t2.5\nUS\tNEU\n");
  const auto lex = read_lexicon(in);
  EXPECT_EQ(lex.lookup("misery").polarity, Polarity::NEG);
  EXPECT_EQ(lex.lookup("praise").polarity, Polarity::POS);
  EXPECT_DOUBLE_EQ(lex.lookup("praise").weight, 2.5);
  EXPECT_EQ(lex.lookup("Praise").polarity, Polarity::POS);
  EXPECT_TRUE(lex.contains("US"));
  EXPECT_FALSE(lex.contains("us"));
}

TEST(Lexicon, EmptyLexiconIsTotal) {
  std::istringstream in("");
  const auto lex = read_lexicon(in);
  const auto e = lex.lookup("anything");
  EXPECT_EQ(e.polarity, Polarity::NEU);
  EXPECT_DOUBLE_EQ(e.weight, 0.0);
}

TEST(Lexicon, DuplicateLastWinsWithWarning) {
  std::istringstream in("harm\tPOS\nharm\tNEG\n");
  std::vector<std::string> warnings;
  const auto lex = read_lexicon(in, [&](const std::string &w) { warnings.push_back(w); });
  EXPECT_EQ(lex.lookup("harm").polarity, Polarity::NEG);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("line 2"), std::string::npos);
}

TEST(Lexicon, UnknownLabelReportsLine) {
  std::istringstream in("ok\tNEU\nbad\tSAD\n");
  try {
    read_lexicon(in);
    FAIL() << "expected an error";
  } catch (const DataError &e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Lexicon, BundledFileLoads) {
  const auto lex = load_lexicon(data_path("lexicon/polarity.tsv"));
  EXPECT_EQ(lex.lookup("表扬").polarity, Polarity::POS);
  EXPECT_EQ(lex.lookup("misery").polarity, Polarity::NEG);
}

TEST(Utf8, ValidityCheck) {
  EXPECT_TRUE(utf8::valid("被子 ok"));
  EXPECT_TRUE(utf8::valid("\xEF\xBF\xBD"));
  EXPECT_FALSE(utf8::valid("bad \xFF byte"));
  EXPECT_FALSE(utf8::valid("\xE8\xA2"));
}
