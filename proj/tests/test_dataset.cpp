#include <gtest/gtest.h>

#include <random>
#include <set>

#include "support.hpp"

using namespace semprosody;
using namespace testing_support;

namespace {

const PolarityLexicon &lexicon() {
  static const auto lex = load_lexicon(data_path("lexicon/polarity.tsv"));
  return lex;
}

std::vector<EvidencePair> dummy_items(std::size_t n_pos, std::size_t n_neg) {
  std::vector<EvidencePair> out;
  for (std::size_t i = 0; i < n_pos + n_neg; ++i) {
    EvidencePair e;
    e.pair.id = "d" + std::to_string(i);
    e.pair.src = tokenize_en("It was done.");
    e.evidence = i < n_pos ? Evidence::POSITIVE : Evidence::NEGATIVE;
    out.push_back(std::move(e));
  }
  return out;
}

std::set<std::string> ids(const std::vector<EvidencePair> &items) {
  std::set<std::string> out;
  for (const auto &e : items)
    out.insert(e.pair.id);
  return out;
}

/// Independent largest-remainder oracle using exact rational arithmetic on
/// ratios expressed in ten-thousandths.
SplitCounts oracle_apportion(std::size_t n, std::array<long, 3> parts_per_10k) {
  SplitCounts c{};
  std::array<long, 3> rem{};
  std::size_t assigned = 0;
  for (int k = 0; k < 3; ++k) {
    const long q = static_cast<long>(n) * parts_per_10k[k];
    c[k] = static_cast<std::size_t>(q / 10000);
    rem[k] = q % 10000;
    assigned += c[k];
  }
  while (assigned < n) {
    int best = 0;
    for (int k = 1; k < 3; ++k)
      if (rem[k] > rem[best])
        best = k;
    ++c[best];
    rem[best] = -1;
    ++assigned;
  }
  return c;
}

} // namespace

TEST(SelectEvidence, ExampleSentences) {
  const auto corpus = corpus_from({
      {"As Jiazhen was carried out, her hands firmly clasped her protruding belly, which held my son.",
       "家珍被拖出去时，双手紧紧捂着凸起的肚子，那里面有我的儿子呵。"},
      {"I was praised by my teacher.", "我被老师表扬了。"},
      {"Oh yes, and I have been told they played all sorts of mad pranks.",
       "有的。人家和我说，他们做了好多发疯似的把戏。"},
      {"You were treated as a son in my friend's house.", "在我朋友家里是待你同儿子一样的。"},
      {"The door was opened.", "门被打开了。"},
  });
  const auto pos = select_positive_evidence(corpus, lexicon());
  ASSERT_EQ(ids(pos), (std::set<std::string>{"p1"}));
  EXPECT_EQ(pos[0].polarity, Polarity::NEG);
  const auto neg = select_negative_evidence(corpus, lexicon());
  EXPECT_EQ(ids(neg), (std::set<std::string>{"p3", "p4"}));
}

TEST(SelectEvidence, EmptyCorpus) {
  EXPECT_TRUE(select_positive_evidence(Corpus{}, lexicon()).empty());
  EXPECT_TRUE(select_negative_evidence(Corpus{}, lexicon()).empty());
}

TEST(SelectEvidence, NegativePolarityFilterIsConfigurable) {
  const auto corpus = corpus_from({{"The man was attacked.", "敌人袭击了那个人，他差点死了。"}});
  EXPECT_TRUE(select_negative_evidence(corpus, lexicon()).empty());
  SelectionConfig cfg;
  cfg.filter_negative_polarity = false;
  EXPECT_EQ(select_negative_evidence(corpus, lexicon(), cfg).size(), 1u);
}

TEST(SelectEvidence, AllowAndDenyLists) {
  const auto corpus = corpus_from({{"I was praised by my teacher.", "我被老师表扬了。"},
                                   {"The man was beaten.", "那个人被打伤了。"}});
  SelectionConfig cfg;
  cfg.allow = {"p1"};
  cfg.deny = {"p2"};
  const auto pos = select_positive_evidence(corpus, lexicon(), cfg);
  ASSERT_EQ(pos.size(), 1u);
  EXPECT_EQ(pos[0].pair.id, "p1");
  EXPECT_TRUE(pos[0].overridden);
  EXPECT_NO_THROW(check_evidence_invariants(pos[0]));
}

TEST(SelectEvidence, MultipleBeMatchesSelectedOnce) {
  const auto corpus = corpus_from(
      {{"The money was stolen and the car was wrecked.", "钱被偷走了，车也被毁了，他非常痛苦。"}});
  const auto pos = select_positive_evidence(corpus, lexicon());
  ASSERT_EQ(pos.size(), 1u);
  EXPECT_EQ(pos[0].src_matches.size(), 2u);
}

TEST(SelectEvidence, RequiresEnglishToChinese) {
  const auto corpus = corpus_from({{"La casa fue construida.", "房子被建好了。"}}, Language::ES);
  EXPECT_THROW(select_positive_evidence(corpus, lexicon()), PreconditionError);
}

TEST(BuildEvidence, SyntheticCorpusMatchesIntent) {
  const auto corpus = load_parallel(data_path("synthetic/pairs120.jsonl"), CorpusFormat::JSONL,
                                    default_tokenizer());
  const auto items = build_evidence(corpus, lexicon());
  std::size_t pos = 0, neg = 0;
  for (const auto &e : items) {
    const auto &intent = e.pair.meta.at("intent");
    if (e.evidence == Evidence::POSITIVE) {
      ++pos;
      EXPECT_EQ(intent, "pos") << e.pair.id;
    } else {
      ++neg;
      EXPECT_EQ(intent, "neg") << e.pair.id;
    }
    EXPECT_NO_THROW(check_evidence_invariants(e));
  }
  EXPECT_EQ(pos, 50u);
  EXPECT_EQ(neg, 40u);
}

TEST(BuildEvidence, SelectionIsIdempotentAndDisjoint) {
  const auto corpus = load_parallel(data_path("synthetic/pairs120.jsonl"), CorpusFormat::JSONL,
                                    default_tokenizer());
  const auto a = build_evidence(corpus, lexicon());
  const auto b = build_evidence(corpus, lexicon());
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_EQ(a[i].pair.id, b[i].pair.id);
  std::set<std::string> pos, neg;
  for (const auto &e : a)
    (e.evidence == Evidence::POSITIVE ? pos : neg).insert(e.pair.id);
  for (const auto &id : pos)
    EXPECT_EQ(neg.count(id), 0u);
}

TEST(Apportion, NineHundredItems) {
  EXPECT_EQ(apportion(900, kDefaultRatios), (SplitCounts{675, 101, 124}));
  EXPECT_EQ(apportion(0, kDefaultRatios), (SplitCounts{0, 0, 0}));
  EXPECT_EQ(apportion(8, {0.5, 0.25, 0.25}), (SplitCounts{4, 2, 2}));
}

TEST(Apportion, RatiosMustSumToOne) {
  EXPECT_THROW(apportion(10, {0.5, 0.5, 0.5}), ConfigError);
  EXPECT_THROW(apportion(10, {1.5, -0.5, 0.0}), ConfigError);
}

TEST(Apportion, MatchesExactOracle) {
  std::mt19937_64 gen(31);
  for (int i = 0; i < 2000; ++i) {
    const long a = static_cast<long>(gen() % 10001);
    const long b = static_cast<long>(gen() % (10001 - a));
    const std::array<long, 3> parts{a, b, 10000 - a - b};
    const std::size_t n = gen() % 3000;
    const SplitRatios r{a / 10000.0, b / 10000.0, (10000 - a - b) / 10000.0};
    const auto got = apportion(n, r);
    const auto want = oracle_apportion(n, parts);
    // Remainder ties are the only place the two can legitimately differ.
    if (got != want) {
      std::array<long, 3> rem{};
      for (int k = 0; k < 3; ++k)
        rem[k] = static_cast<long>(n) * parts[k] % 10000;
      EXPECT_TRUE(rem[0] == rem[1] || rem[1] == rem[2] || rem[0] == rem[2])
          << n << " " << a << " " << b;
    }
    EXPECT_EQ(got[0] + got[1] + got[2], n);
    for (int k = 0; k < 3; ++k)
      EXPECT_LT(std::abs(static_cast<double>(got[k]) - r[k] * n), 1.0);
  }
}

TEST(SplitDataset, SizesAndPartition) {
  const auto items = dummy_items(476, 424);
  const auto split = split_dataset(items);
  EXPECT_EQ(split.sizes(), (SplitCounts{675, 101, 124}));
  std::set<std::string> all;
  for (const auto *part : {&split.train, &split.valid, &split.test})
    for (const auto &e : *part)
      EXPECT_TRUE(all.insert(e.pair.id).second);
  EXPECT_EQ(all, ids(items));
}

TEST(SplitDataset, EmptyInput) {
  EXPECT_EQ(split_dataset({}).sizes(), (SplitCounts{0, 0, 0}));
}

TEST(SplitDataset, Deterministic) {
  const auto items = dummy_items(30, 30);
  SplitOptions opt;
  opt.seed = 7;
  const auto a = split_dataset(items, opt);
  const auto b = split_dataset(items, opt);
  for (std::size_t i = 0; i < a.test.size(); ++i)
    EXPECT_EQ(a.test[i].pair.id, b.test[i].pair.id);
  opt.seed = 8;
  const auto c = split_dataset(items, opt);
  EXPECT_NE(ids(a.test), ids(c.test));
}

TEST(SplitDataset, StratifiedTotalsMatchUnstratified) {
  SplitOptions opt;
  opt.stratify = true;
  for (auto [p, n] : {std::pair{476, 424}, {10, 3}, {1, 0}, {333, 567}}) {
    const auto items = dummy_items(p, n);
    const auto split = split_dataset(items, opt);
    EXPECT_EQ(split.sizes(), apportion(p + n, kDefaultRatios));
    std::size_t pos_test = 0;
    for (const auto &e : split.test)
      pos_test += e.evidence == Evidence::POSITIVE;
    EXPECT_LT(std::abs(static_cast<double>(pos_test) - p * kDefaultRatios[2]), 1.0);
  }
}

TEST(SplitDataset, ExplicitStratumCounts) {
  SplitOptions opt;
  opt.stratum_counts[Evidence::POSITIVE] = {357, 54, 65};
  opt.stratum_counts[Evidence::NEGATIVE] = {318, 47, 59};
  const auto split = split_dataset(dummy_items(476, 424), opt);
  std::size_t pos = 0, neg = 0;
  for (const auto &e : split.test)
    (e.evidence == Evidence::POSITIVE ? pos : neg)++;
  EXPECT_EQ(pos, 65u);
  EXPECT_EQ(neg, 59u);
  opt.stratum_counts[Evidence::NEGATIVE] = {1, 1, 1};
  EXPECT_THROW(split_dataset(dummy_items(476, 424), opt), ConfigError);
}

TEST(ExportDataset, FilesLineCountsAndManifest) {
  TempDir tmp;
  const auto split = split_dataset(dummy_items(476, 424));
  const nlohmann::json cfg = {{"k", 1}};
  export_dataset(split, tmp.file("out"), cfg);
  EXPECT_EQ(lines_of(slurp(tmp.file("out/train.jsonl"))).size(), 675u);
  EXPECT_EQ(lines_of(slurp(tmp.file("out/valid.jsonl"))).size(), 101u);
  EXPECT_EQ(lines_of(slurp(tmp.file("out/test.jsonl"))).size(), 124u);
  const auto manifest = nlohmann::json::parse(slurp(tmp.file("out/manifest.json")));
  EXPECT_EQ(manifest["seed"], 42);
  EXPECT_EQ(manifest["sizes"]["test"], 124);
  EXPECT_EQ(manifest["config_hash"], config_hash(cfg));
}

TEST(ExportDataset, ReexportIsByteIdentical) {
  TempDir tmp;
  const auto split = split_dataset(dummy_items(20, 20));
  export_dataset(split, tmp.file("a"), {});
  export_dataset(split_dataset(dummy_items(20, 20)), tmp.file("b"), {});
  for (const char *f : {"train.jsonl", "valid.jsonl", "test.jsonl", "manifest.json"})
    EXPECT_EQ(slurp(tmp.file(std::string("a/") + f)), slurp(tmp.file(std::string("b/") + f)));
}

TEST(ExportDataset, HashChangesWithConfig) {
  EXPECT_NE(config_hash({{"window", 4}}), config_hash({{"window", 5}}));
  EXPECT_EQ(config_hash({{"window", 4}}), config_hash({{"window", 4}}));
}

TEST(ExportDataset, UnwritableDirectory) {
  TempDir tmp;
  const auto blocker = tmp.write("file", "x");
  EXPECT_THROW(export_dataset(split_dataset({}), blocker + "/sub", {}), DataError);
}

TEST(ExportDataset, RoundTripThroughJsonl) {
  const auto corpus = load_parallel(data_path("synthetic/pairs120.jsonl"), CorpusFormat::JSONL,
                                    default_tokenizer());
  const auto items = build_evidence(corpus, lexicon());
  std::stringstream ss;
  write_evidence_jsonl(ss, items);
  const auto back = read_evidence_jsonl(ss, default_tokenizer());
  ASSERT_EQ(back.size(), items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    EXPECT_EQ(back[i].pair.id, items[i].pair.id);
    EXPECT_EQ(back[i].evidence, items[i].evidence);
    EXPECT_EQ(back[i].polarity, items[i].polarity);
    EXPECT_EQ(back[i].tgt_voice, items[i].tgt_voice);
    EXPECT_EQ(back[i].pair.meta, items[i].pair.meta);
  }
}

TEST(ExportDataset, MalformedEvidenceLine) {
  std::istringstream in("{\"id\":\"a\",\"src\":\"x\",\"tgt\":\"y\",\"evidence\":\"maybe\"}\n");
  EXPECT_THROW(read_evidence_jsonl(in, default_tokenizer()), DataError);
}
