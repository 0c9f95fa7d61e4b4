// semprosody command-line driver.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <semprosody.hpp>

namespace sp = semprosody;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> read_lines(const std::string &path) {
  std::ifstream file;
  std::istream *in = &std::cin;
  if (path != "-") {
    file.open(path, std::ios::binary);
    if (!file)
      throw sp::DataError("cannot open " + path);
    in = &file;
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(*in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

/// Destination stream: a file, or stdout for "" and "-".
class Output {
public:
  explicit Output(const std::string &path) : path_(path) {
    if (path.empty() || path == "-")
      return;
    if (auto parent = fs::path(path).parent_path(); !parent.empty())
      fs::create_directories(parent);
    file_.open(path, std::ios::binary);
    if (!file_)
      throw sp::DataError("cannot write " + path);
  }
  std::ostream &stream() { return file_.is_open() ? file_ : std::cout; }
  bool to_stdout() const { return !file_.is_open(); }
  void close() {
    if (!file_.is_open())
      return;
    file_.close();
    if (!file_)
      throw sp::DataError("write failed: " + path_);
  }

private:
  std::string path_;
  std::ofstream file_;
};

sp::Language language(sp::RunConfig &cfg, const std::string &key, const std::string &def) {
  const auto v = cfg.str(key, def);
  const auto lang = sp::parse_language(v);
  if (!lang)
    throw sp::ConfigError(key + " must be en, zh or es, got '" + v + "'");
  return *lang;
}

sp::WordSet word_set(sp::RunConfig &cfg, const std::string &key, sp::WordSet builtin) {
  const auto path = cfg.str(key, "");
  return path.empty() ? builtin : sp::load_word_set(path);
}

sp::DetectorConfig detector_config(sp::RunConfig &cfg) {
  sp::DetectorConfig d;
  const auto gap = cfg.number<long long>("detector.max_gap", 3);
  if (gap < 0)
    throw sp::ConfigError("detector.max_gap must be >= 0");
  d.max_gap = static_cast<std::size_t>(gap);
  d.count_get = cfg.flag("detector.count_get", false);
  d.count_light_verb_as_passive = cfg.flag("detector.count_light_verb_as_passive", false);
  d.emit_notional_hints = cfg.flag("detector.emit_notional_hints", false);
  d.light_verb_set = word_set(cfg, "detector.light_verbs", sp::resources::zh_light_verbs());
  d.irregular_participles_en =
      word_set(cfg, "detector.participles_en", sp::resources::en_irregular_participles());
  d.irregular_participles_es =
      word_set(cfg, "detector.participles_es", sp::resources::es_irregular_participles());
  d.bei_exclusion = word_set(cfg, "detector.bei_exclusion", sp::resources::zh_bei_exclusion());
  d.patient_lexicon =
      word_set(cfg, "detector.patient_lexicon", sp::resources::zh_patient_lexicon());
  return d;
}

sp::SegmentationDict segmentation_dict(sp::RunConfig &cfg) {
  const auto path = cfg.str("segmentation.dict", "");
  return path.empty() ? sp::SegmentationDict(sp::resources::zh_segmentation_words())
                      : sp::SegmentationDict::load(path);
}

/// Resolves the corpus settings now; the returned loader reads the file.
std::function<sp::Corpus()> corpus_loader(sp::RunConfig &cfg, const sp::Tokenizer &tok) {
  const auto path = cfg.required("input.corpus");
  const auto def_format = fs::path(path).extension() == ".tsv" ? "tsv" : "jsonl";
  const auto fmt_name = cfg.str("input.format", def_format);
  const auto fmt = sp::parse_corpus_format(fmt_name);
  if (!fmt)
    throw sp::ConfigError("input.format must be jsonl or tsv, got '" + fmt_name + "'");
  sp::LoadOptions opts;
  opts.default_src = language(cfg, "input.src_lang", "en");
  opts.default_tgt = language(cfg, "input.tgt_lang", "zh");
  opts.parallel = cfg.flag("input.parallel", true);
  return [path, fmt = *fmt, &tok, opts] { return sp::load_parallel(path, fmt, tok, opts); };
}

sp::PolarityLexicon load_lexicon(sp::RunConfig &cfg) {
  return sp::load_lexicon(cfg.required("lexicon.path"));
}

sp::Side side(sp::RunConfig &cfg, const std::string &def) {
  const auto v = cfg.str("concordance.side", def);
  const auto s = sp::parse_side(v);
  if (!s)
    throw sp::ConfigError("concordance.side must be src or tgt, got '" + v + "'");
  return *s;
}

sp::Window window(sp::RunConfig &cfg) {
  const auto l = cfg.number<long long>("concordance.left", 4);
  const auto r = cfg.number<long long>("concordance.right", 4);
  if (l < 0 || r < 0)
    throw sp::ConfigError("window sizes must be >= 0");
  return {static_cast<std::size_t>(l), static_cast<std::size_t>(r)};
}

std::size_t count(sp::RunConfig &cfg, const std::string &key, long long def) {
  const auto v = cfg.number<long long>(key, def);
  if (v < 0)
    throw sp::ConfigError(key + " must be >= 0");
  return static_cast<std::size_t>(v);
}

/// Every setting that influences the produced files. Input files are
/// recorded by content fingerprint, not by path.
json content_config(const sp::RunConfig &cfg, const std::string &input_key) {
  json j = json::object();
  for (const auto &[k, v] : cfg.values())
    if (k.rfind("output.", 0) != 0 && k.rfind("run.", 0) != 0 && k != input_key)
      j[k] = v;
  const auto it = cfg.values().find(input_key);
  std::ifstream in(it == cfg.values().end() ? std::string() : it->second, std::ios::binary);
  const std::string bytes{std::istreambuf_iterator<char>(in), {}};
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(sp::fnv1a64(bytes)));
  j[input_key + "_fnv1a64"] = hex;
  return j;
}

// ---- commands -------------------------------------------------------------

using Command = std::function<void(sp::RunConfig &, const std::function<void()> &)>;

void cmd_detect(sp::RunConfig &cfg, const std::function<void()> &dump) {
  const auto input = cfg.required("input.file");
  const auto lang = language(cfg, "input.lang", "");
  const auto det = detector_config(cfg);
  const sp::Tokenizer tok(segmentation_dict(cfg));
  Output out(cfg.str("output.path", ""));
  dump();
  const auto lines = read_lines(input);
  std::size_t lineno = 0;
  for (const auto &line : lines) {
    ++lineno;
    if (!sp::utf8::valid(line))
      throw sp::DataError(sp::at_line(lineno, "invalid UTF-8 in " + input));
    const auto s = tok(line, lang);
    json rec;
    rec["line"] = lineno;
    rec["tokens"] = s.surfaces();
    rec["matches"] = json::array();
    for (const auto &m : sp::detect(s, det))
      rec["matches"].push_back(sp::to_json(m, s));
    if (lang == sp::Language::ZH)
      rec["voice"] = std::string(sp::to_string(sp::classify_voice_zh(s, det)));
    out.stream() << rec.dump() << '\n';
  }
  out.close();
}

void cmd_kwic(sp::RunConfig &cfg, const std::function<void()> &dump) {
  const sp::Tokenizer tok(segmentation_dict(cfg));
  const auto det = detector_config(cfg);
  const auto which = side(cfg, "src");
  const auto query = sp::NodeQuery::parse(cfg.required("concordance.node"));
  const auto width = count(cfg, "concordance.width", 5);
  const auto format = cfg.str("output.format", "text");
  if (format != "text" && format != "jsonl")
    throw sp::ConfigError("output.format must be text or jsonl");
  const auto load = corpus_loader(cfg, tok);
  Output out(cfg.str("output.path", ""));
  dump();
  const auto corpus = load();
  const auto lines = sp::kwic(corpus, which, query, width, det);
  if (format == "text")
    sp::write_kwic_text(out.stream(), lines);
  else
    sp::write_kwic_jsonl(out.stream(), lines);
  out.close();
}

void cmd_collocates(sp::RunConfig &cfg, const std::function<void()> &dump) {
  const sp::Tokenizer tok(segmentation_dict(cfg));
  const auto det = detector_config(cfg);
  const auto which = side(cfg, "src");
  const auto query = sp::NodeQuery::parse(cfg.required("concordance.node"));
  const auto win = window(cfg);
  const auto punct = cfg.flag("concordance.include_punct", false);
  const auto load = corpus_loader(cfg, tok);
  Output out(cfg.str("output.path", ""));
  dump();
  const auto corpus = load();
  sp::write_collocates_tsv(out.stream(), sp::collocates(corpus, which, query, win, det, punct));
  out.close();
}

void cmd_prosody(sp::RunConfig &cfg, const std::function<void()> &dump) {
  const sp::Tokenizer tok(segmentation_dict(cfg));
  const auto det = detector_config(cfg);
  const auto which = side(cfg, "tgt");
  const auto win = window(cfg);
  sp::ProsodyThresholds th;
  th.dominant = cfg.number<double>("prosody.dominant", 0.5);
  if (!(th.dominant > 0.0 && th.dominant <= 1.0))
    throw sp::ConfigError("prosody.dominant must lie in (0, 1]");
  std::vector<std::string> nodes;
  if (const auto list = cfg.str("prosody.nodes", ""); !list.empty()) {
    for (auto &l : read_lines(list))
      if (l.find_first_not_of(" \t") != std::string::npos)
        nodes.push_back(l);
  } else {
    nodes.push_back(cfg.required("concordance.node"));
  }
  std::vector<sp::NodeQuery> queries;
  for (const auto &n : nodes)
    queries.push_back(sp::NodeQuery::parse(n));
  const auto load = corpus_loader(cfg, tok);
  Output out(cfg.str("output.path", ""));
  dump();
  const auto lex = load_lexicon(cfg);
  const auto corpus = load();
  for (const auto &q : queries) {
    const auto profile = sp::prosody_profile(corpus, which, q, lex, win, th, det);
    out.stream() << sp::to_json(profile).dump() << '\n';
  }
  out.close();
}

sp::SelectionConfig selection_config(sp::RunConfig &cfg) {
  sp::SelectionConfig sel;
  sel.detector = detector_config(cfg);
  const auto pol = cfg.str("dataset.side_policy", "BOTH");
  const auto parsed = sp::parse_side_policy(pol);
  if (!parsed)
    throw sp::ConfigError("dataset.side_policy must be SRC, TGT or BOTH");
  sel.side_policy = *parsed;
  sel.window = window(cfg);
  sel.filter_negative_polarity = cfg.flag("dataset.filter_negative_polarity", true);
  if (const auto p = cfg.str("dataset.allow", ""); !p.empty())
    sel.allow = sp::load_word_set(p);
  if (const auto p = cfg.str("dataset.deny", ""); !p.empty())
    sel.deny = sp::load_word_set(p);
  return sel;
}

void cmd_build_dataset(sp::RunConfig &cfg, const std::function<void()> &dump) {
  const sp::Tokenizer tok(segmentation_dict(cfg));
  const auto sel = selection_config(cfg);
  const auto load = corpus_loader(cfg, tok);
  Output out(cfg.required("output.path"));
  const auto review_path = cfg.str("output.review", "");
  dump();
  const auto lex = load_lexicon(cfg);
  const auto corpus = load();
  const auto evidence = sp::build_evidence(corpus, lex, sel);
  sp::write_evidence_jsonl(out.stream(), evidence);
  out.close();
  if (!review_path.empty()) {
    Output review(review_path);
    for (const auto &e : evidence) {
      const auto &src = e.pair.src;
      for (const auto &m : e.src_matches) {
        std::vector<std::string> left, node, right;
        for (std::size_t i = 0; i < src.size(); ++i)
          (i < m.first ? left : i > m.last ? right : node).push_back(src[i]);
        review.stream() << e.pair.id << '\t' << sp::to_string(e.evidence) << '\t'
                        << sp::to_string(e.polarity) << '\t' << sp::detail::join(left) << '\t'
                        << sp::detail::join(node) << '\t' << sp::detail::join(right) << '\t'
                        << e.pair.tgt->raw << '\n';
      }
    }
    review.close();
  }
  std::size_t pos = 0;
  for (const auto &e : evidence)
    pos += e.evidence == sp::Evidence::POSITIVE;
  std::cerr << "positive " << pos << "\nnegative " << evidence.size() - pos << '\n';
}

sp::SplitCounts triple(sp::RunConfig &cfg, const std::string &key) {
  const auto parts = cfg.list(key, "");
  if (parts.size() != 3)
    throw sp::ConfigError(key + " needs three comma-separated values");
  sp::SplitCounts c{};
  for (std::size_t k = 0; k < 3; ++k) {
    try {
      const auto v = std::stoll(parts[k]);
      if (v < 0)
        throw sp::ConfigError(key + " values must be >= 0");
      c[k] = static_cast<std::size_t>(v);
    } catch (const std::logic_error &) {
      throw sp::ConfigError(key + " values must be integers");
    }
  }
  return c;
}

void cmd_split(sp::RunConfig &cfg, const std::function<void()> &dump) {
  const sp::Tokenizer tok(segmentation_dict(cfg));
  const auto det = detector_config(cfg);
  const auto input = cfg.required("input.evidence");
  sp::SplitOptions opt;
  const auto ratios = cfg.list("split.ratios", "0.75,0.1125,0.1375");
  if (ratios.size() != 3)
    throw sp::ConfigError("split.ratios needs three comma-separated values");
  for (std::size_t k = 0; k < 3; ++k) {
    try {
      opt.ratios[k] = std::stod(ratios[k]);
    } catch (const std::logic_error &) {
      throw sp::ConfigError("split.ratios values must be numbers");
    }
  }
  sp::validate_ratios(opt.ratios);
  opt.seed = cfg.number<std::uint64_t>("split.seed", 42);
  opt.stratify = cfg.flag("split.stratify", false);
  if (cfg.has("split.pos_counts") || cfg.has("split.neg_counts")) {
    opt.stratum_counts[sp::Evidence::POSITIVE] = triple(cfg, "split.pos_counts");
    opt.stratum_counts[sp::Evidence::NEGATIVE] = triple(cfg, "split.neg_counts");
  }
  const auto dir = cfg.required("output.dir");
  dump();
  const auto pairs = sp::load_evidence_jsonl(input, tok, det);
  const auto split = sp::split_dataset(pairs, opt);
  sp::export_dataset(split, dir, content_config(cfg, "input.evidence"));
  const auto sizes = split.sizes();
  std::cerr << "train " << sizes[0] << "\nvalid " << sizes[1] << "\ntest " << sizes[2] << '\n';
}

void cmd_score(sp::RunConfig &cfg, const std::function<void()> &dump) {
  const sp::Tokenizer tok(segmentation_dict(cfg));
  const auto det = detector_config(cfg);
  const auto test_path = cfg.required("input.test");
  const auto hyp_path = cfg.required("input.hyps");
  const auto metrics = cfg.list("score.metrics", "bleu,chrf,bei");
  if (metrics.empty())
    throw sp::ConfigError("score.metrics names no metric");
  for (const auto &m : metrics)
    if (m != "bleu" && m != "chrf" && m != "bei")
      throw sp::ConfigError("unknown metric '" + m + "' (expected bleu, chrf or bei)");
  const auto system = cfg.str("score.system", "system");
  sp::BleuConfig bcfg;
  bcfg.max_ngram = count(cfg, "bleu.max_ngram", 4);
  if (bcfg.max_ngram == 0)
    throw sp::ConfigError("bleu.max_ngram must be >= 1");
  const auto smoothing = cfg.str("bleu.smoothing", "none");
  if (smoothing == "add_k")
    bcfg.smoothing = sp::BleuConfig::Smoothing::ADD_K;
  else if (smoothing != "none")
    throw sp::ConfigError("bleu.smoothing must be none or add_k");
  bcfg.k = cfg.number<double>("bleu.k", 1.0);
  bcfg.zh_char_tokenize = cfg.flag("bleu.zh_char_tokenize", true);
  sp::ChrfConfig ccfg;
  ccfg.beta = cfg.number<double>("chrf.beta", 2.0);
  ccfg.char_order = count(cfg, "chrf.char_order", 6);
  ccfg.word_order = count(cfg, "chrf.word_order", 0);
  Output out(cfg.str("output.path", ""));
  dump();

  const auto items = sp::load_evidence_jsonl(test_path, tok, det);
  const auto hyps = read_lines(hyp_path);
  if (hyps.size() != items.size())
    throw sp::DataError("test items and hypotheses are not aligned: " +
                        std::to_string(items.size()) + " vs " + std::to_string(hyps.size()));
  std::vector<std::string> refs;
  for (const auto &e : items)
    refs.push_back(e.pair.tgt->raw);
  sp::ScoreReport report;
  for (const auto &m : metrics) {
    if (m == "bleu") {
      report.add(system, "BLEU", sp::bleu(hyps, refs, bcfg));
    } else if (m == "chrf") {
      const auto beta = ccfg.beta == std::floor(ccfg.beta)
                            ? std::to_string(static_cast<long long>(ccfg.beta))
                            : sp::format_one_decimal(ccfg.beta);
      const auto name = "chrF" + beta + (ccfg.word_order > 0 ? "++" : "");
      report.add(system, name, sp::chrf(hyps, refs, ccfg));
    } else {
      const auto acc = sp::bei_accuracy(items, hyps, tok.zh_dict(), det);
      report.add(system, "BEI pos", 100.0 * acc.pos_acc);
      report.add(system, "BEI neg", 100.0 * acc.neg_acc);
      std::cerr << "bei positive " << acc.pos_correct << '/' << acc.pos_total
                << "\nbei negative " << acc.neg_correct << '/' << acc.neg_total << '\n';
    }
  }
  report.write_text(std::cout);
  if (!out.to_stdout())
    report.write_tsv(out.stream());
  out.close();
}

void cmd_probe(sp::RunConfig &cfg, const std::function<void()> &dump) {
  const auto path = cfg.required("input.hsf");
  sp::ProbeConfig pc;
  pc.train_frac = cfg.number<double>("probe.train_frac", 0.8);
  pc.lr = cfg.number<double>("probe.lr", 0.1);
  pc.epochs = count(cfg, "probe.epochs", 500);
  pc.l2 = cfg.number<double>("probe.l2", 0.0);
  pc.seed = cfg.number<std::uint64_t>("probe.seed", 13);
  pc.init_seed = cfg.number<std::uint64_t>("probe.init_seed", sp::kProbeInitSeed);
  pc.threads = std::max<std::size_t>(1, count(cfg, "probe.threads", 1));
  Output out(cfg.str("output.path", ""));
  dump();
  const auto data = sp::read_hsf(path);
  const auto result = sp::layer_sweep(data, pc);
  sp::write_sweep_csv(out.stream(), result);
  auto &summary = out.to_stdout() ? std::cerr : std::cout;
  out.close();
  char buf[64];
  summary << "model " << data.header.model_name << "\nlayers " << result.rows.size() << '\n';
  std::snprintf(buf, sizeof buf, "mean_enc_acc %.6f\nmean_dec_acc %.6f\n", result.mean_enc_acc,
                result.mean_dec_acc);
  summary << buf;
}

void cmd_report(sp::RunConfig &cfg, const std::function<void()> &dump) {
  const auto tables = cfg.list("report.scores", "");
  const auto externals = cfg.list("report.external", "");
  Output out(cfg.str("output.path", ""));
  dump();
  sp::ScoreReport report;
  for (const auto &path : tables) {
    std::ifstream in(path);
    if (!in)
      throw sp::DataError("cannot open " + path);
    const auto part = sp::read_score_tsv(in);
    for (const auto &c : part.columns)
      report.declare(c);
    for (const auto &[system, cells] : part.rows)
      for (const auto &[column, v] : cells)
        report.add(system, column, v);
  }
  for (const auto &spec : externals) {
    const auto colon = spec.find(':');
    const auto eq = spec.find('=');
    if (colon == std::string::npos || eq == std::string::npos || eq < colon)
      throw sp::ConfigError("report.external entries look like SYSTEM:COLUMN=PATH, got '" +
                            spec + "'");
    const auto system = spec.substr(0, colon);
    const auto column = spec.substr(colon + 1, eq - colon - 1);
    report.declare(column);
    if (const auto v = sp::load_external_scores(spec.substr(eq + 1)))
      report.add(system, column, *v);
  }
  report.write_text(std::cout);
  if (!out.to_stdout())
    report.write_tsv(out.stream());
  out.close();
}

void cmd_translate(sp::RunConfig &cfg, const std::function<void()> &dump) {
  const auto input = cfg.required("input.file");
  const auto out_path = cfg.required("output.path");
  sp::TranslateOptions opt;
  opt.endpoint = cfg.required("translate.endpoint");
  opt.src = cfg.str("translate.src", "en");
  opt.tgt = cfg.str("translate.tgt", "zh");
  opt.batch_size = count(cfg, "translate.batch_size", 16);
  opt.attempts = count(cfg, "translate.attempts", 3);
  opt.backoff = std::chrono::milliseconds(count(cfg, "translate.backoff_ms", 200));
  opt.timeout = std::chrono::seconds(count(cfg, "translate.timeout_s", 60));
  opt.parallel = count(cfg, "translate.parallel", 1);
  const auto resume = cfg.flag("translate.resume", false);
  opt.token = sp::token_from_env();
  dump();

  const auto lines = read_lines(input);
  const auto partial_path = out_path + ".partial.jsonl";
  const auto manifest_path = out_path + ".failed.json";
  std::vector<std::optional<std::string>> done;
  if (resume && fs::exists(partial_path)) {
    done.resize(lines.size());
    std::size_t lineno = 0;
    for (const auto &l : read_lines(partial_path)) {
      ++lineno;
      try {
        const auto j = json::parse(l);
        const auto i = j.at("i").get<std::size_t>();
        if (i >= lines.size())
          throw sp::DataError(sp::at_line(lineno, "line index out of range in " + partial_path));
        done[i] = j.at("text").get<std::string>();
      } catch (const json::exception &e) {
        throw sp::DataError(sp::at_line(lineno, partial_path + ": " + e.what()));
      }
    }
  }
  const auto result = sp::translate_remote(lines, opt, std::move(done));
  if (!result.complete()) {
    Output partial(partial_path);
    for (std::size_t i = 0; i < result.outputs.size(); ++i)
      if (result.outputs[i])
        partial.stream() << json{{"i", i}, {"text", *result.outputs[i]}}.dump() << '\n';
    partial.close();
    json manifest;
    manifest["endpoint"] = opt.endpoint;
    manifest["input"] = input;
    manifest["n_lines"] = lines.size();
    manifest["partial"] = partial_path;
    manifest["failed_batches"] = json::array();
    for (const auto &f : result.failed)
      manifest["failed_batches"].push_back({{"lines", f.lines}, {"error", f.error}});
    Output m(manifest_path);
    m.stream() << manifest.dump(2) << '\n';
    m.close();
    throw sp::RemoteError(std::to_string(result.failed.size()) +
                          " batch(es) failed; rerun with --resume (see " + manifest_path + ")");
  }
  Output out(out_path);
  for (const auto &t : result.outputs) {
    std::string line = *t;
    for (auto &c : line)
      if (c == '\n' || c == '\r')
        c = ' ';
    out.stream() << line << '\n';
  }
  out.close();
  std::error_code ec;
  fs::remove(partial_path, ec);
  fs::remove(manifest_path, ec);
}

void cmd_synth_hsf(sp::RunConfig &cfg, const std::function<void()> &dump) {
  const auto n = count(cfg, "synth.n_items", 200);
  const auto enc = count(cfg, "synth.n_enc", 12);
  const auto dec = count(cfg, "synth.n_dec", 12);
  const auto dim = count(cfg, "synth.dim", 64);
  const auto sep = cfg.number<double>("synth.separability", 10.0);
  const auto seed = cfg.number<std::uint64_t>("synth.seed", 1);
  const auto path = cfg.required("output.path");
  dump();
  sp::write_hsf(sp::synth_hsf(n, enc, dec, dim, sep, seed), path);
}

// ---- option wiring --------------------------------------------------------

struct Cli {
  CLI::App app{"Semantic-prosody corpus and evaluation toolkit"};
  sp::RunConfig overrides;
  std::string config_path;
  std::string dump_path;
  std::vector<std::string> sets;
  std::map<std::string, Command> commands;
  std::map<CLI::App *, std::string> names;

  CLI::App *sub(const std::string &name, const std::string &desc, Command fn) {
    auto *s = app.add_subcommand(name, desc);
    commands[name] = std::move(fn);
    names[s] = name;
    return s;
  }

  void opt(CLI::App *s, const std::string &flags, const std::string &key,
           const std::string &desc) {
    s->add_option_function<std::string>(
        flags, [this, key](const std::string &v) { overrides.set(key, v); }, desc);
  }

  void multi(CLI::App *s, const std::string &flags, const std::string &key,
             const std::string &desc) {
    s->add_option_function<std::vector<std::string>>(
        flags,
        [this, key](const std::vector<std::string> &v) {
          std::string joined;
          for (const auto &x : v)
            joined += (joined.empty() ? "" : ",") + x;
          overrides.set(key, joined);
        },
        desc);
  }

  void flag(CLI::App *s, const std::string &flags, const std::string &key, bool value,
            const std::string &desc) {
    s->add_flag_function(
        flags, [this, key, value](std::int64_t) { overrides.set(key, value ? "true" : "false"); },
        desc);
  }

  void detector_opts(CLI::App *s) {
    opt(s, "--max-gap", "detector.max_gap", "Tokens allowed between marker and verb");
    flag(s, "--count-get", "detector.count_get", true, "Also match GET passives");
    flag(s, "--count-light-verb", "detector.count_light_verb_as_passive", true,
         "Count light-verb passives as marked");
    flag(s, "--notional-hints", "detector.emit_notional_hints", true,
         "Emit notional-passive hints");
    opt(s, "--dict", "segmentation.dict", "Chinese segmentation dictionary (word per line)");
  }

  void corpus_opts(CLI::App *s) {
    opt(s, "--corpus", "input.corpus", "Parallel corpus (JSONL or TSV)");
    opt(s, "--format", "input.format", "Corpus format: jsonl|tsv");
    opt(s, "--src-lang", "input.src_lang", "Source language for TSV input");
    opt(s, "--tgt-lang", "input.tgt_lang", "Target language for TSV input");
  }

  void window_opts(CLI::App *s) {
    opt(s, "--left", "concordance.left", "Left window size");
    opt(s, "--right", "concordance.right", "Right window size");
  }

  Cli() {
    app.require_subcommand(0, 1);
    app.fallthrough();
    app.add_option("--config", config_path, "TOML-style run configuration");
    app.add_option("--dump-config", dump_path,
                   "Write the resolved configuration here instead of stderr");
    app.add_option("--set", sets, "Override any setting: section.key=value");

    auto *s = sub("detect", "Detect passive constructions, one JSON object per line", cmd_detect);
    opt(s, "input,--input", "input.file", "Text file, one sentence per line (- for stdin)");
    opt(s, "--lang", "input.lang", "en|zh|es");
    opt(s, "-o,--output", "output.path", "Output JSONL (default stdout)");
    detector_opts(s);

    s = sub("kwic", "Key-word-in-context concordance", cmd_kwic);
    corpus_opts(s);
    detector_opts(s);
    opt(s, "--side", "concordance.side", "src|tgt");
    opt(s, "--node", "concordance.node", "Token sequence or kind:BEI etc.");
    opt(s, "--width", "concordance.width", "Context tokens on each side");
    opt(s, "--output-format", "output.format", "text|jsonl");
    opt(s, "-o,--output", "output.path", "Output file (default stdout)");

    s = sub("collocates", "Collocate frequency table (TSV)", cmd_collocates);
    corpus_opts(s);
    detector_opts(s);
    window_opts(s);
    opt(s, "--side", "concordance.side", "src|tgt");
    opt(s, "--node", "concordance.node", "Token sequence or kind:BEI etc.");
    flag(s, "--include-punct", "concordance.include_punct", true, "Count punctuation");
    opt(s, "-o,--output", "output.path", "Output TSV (default stdout)");

    s = sub("prosody", "Semantic-prosody profile of a node", cmd_prosody);
    corpus_opts(s);
    detector_opts(s);
    window_opts(s);
    opt(s, "--lexicon", "lexicon.path", "Polarity lexicon TSV");
    opt(s, "--side", "concordance.side", "src|tgt");
    opt(s, "--node", "concordance.node", "Token sequence or kind:BEI etc.");
    opt(s, "--nodes", "prosody.nodes", "File with one node per line");
    opt(s, "--dominant", "prosody.dominant", "Dominant-ratio threshold");
    opt(s, "-o,--output", "output.path", "Output JSONL (default stdout)");

    s = sub("build-dataset", "Select positive and negative evidence pairs", cmd_build_dataset);
    corpus_opts(s);
    detector_opts(s);
    window_opts(s);
    opt(s, "--lexicon", "lexicon.path", "Polarity lexicon TSV");
    opt(s, "--side-policy", "dataset.side_policy", "SRC|TGT|BOTH");
    flag(s, "--keep-negative-polarity", "dataset.filter_negative_polarity", false,
         "Keep NEG-polarity pairs in the negative evidence");
    opt(s, "--allow", "dataset.allow", "Pair ids to accept regardless of polarity");
    opt(s, "--deny", "dataset.deny", "Pair ids to reject");
    opt(s, "--review", "output.review", "Write a KWIC review table of selected pairs");
    opt(s, "-o,--output", "output.path", "Evidence JSONL");

    s = sub("split", "Seeded train/valid/test split of an evidence file", cmd_split);
    detector_opts(s);
    opt(s, "--evidence", "input.evidence", "Evidence JSONL from build-dataset");
    opt(s, "--seed", "split.seed", "Shuffle seed");
    opt(s, "--ratios", "split.ratios", "train,valid,test ratios");
    flag(s, "--stratify", "split.stratify", true, "Apportion per evidence class");
    opt(s, "--pos-counts", "split.pos_counts", "Explicit positive train,valid,test sizes");
    opt(s, "--neg-counts", "split.neg_counts", "Explicit negative train,valid,test sizes");
    opt(s, "-o,--out-dir", "output.dir", "Output directory");

    s = sub("score", "Score hypotheses against an evidence test set", cmd_score);
    detector_opts(s);
    opt(s, "--test", "input.test", "Test JSONL");
    opt(s, "--hyps", "input.hyps", "Hypotheses, one per line");
    opt(s, "--metrics", "score.metrics", "Comma list of bleu,chrf,bei");
    opt(s, "--system", "score.system", "System name for the report row");
    opt(s, "--smoothing", "bleu.smoothing", "BLEU smoothing: none|add_k");
    opt(s, "--word-order", "chrf.word_order", "chrF word n-gram order (2 for chrF++)");
    opt(s, "-o,--output", "output.path", "Report TSV");

    s = sub("bei-acc", "BEI accuracy on positive/negative evidence", [](auto &cfg, auto &dump) {
      cfg.set("score.metrics", "bei");
      cmd_score(cfg, dump);
    });
    detector_opts(s);
    opt(s, "--test", "input.test", "Test JSONL");
    opt(s, "--hyps", "input.hyps", "Hypotheses, one per line");
    opt(s, "--system", "score.system", "System name for the report row");
    opt(s, "-o,--output", "output.path", "Report TSV");

    s = sub("probe", "Layer-wise linear probing sweep over an HSF1 file", cmd_probe);
    opt(s, "hsf,--hsf", "input.hsf", "HSF1 hidden-state file");
    opt(s, "--seed", "probe.seed", "Train/test split seed");
    opt(s, "--init-seed", "probe.init_seed", "Weight initialisation seed");
    opt(s, "--epochs", "probe.epochs", "Gradient-descent epochs");
    opt(s, "--lr", "probe.lr", "Learning rate");
    opt(s, "--l2", "probe.l2", "L2 penalty");
    opt(s, "--train-frac", "probe.train_frac", "Training fraction");
    opt(s, "--threads", "probe.threads", "Layers trained concurrently");
    opt(s, "-o,--output", "output.path", "Sweep CSV (default stdout)");

    s = sub("report", "Merge score tables and external score files", cmd_report);
    multi(s, "--scores", "report.scores", "Score TSVs written by score");
    multi(s, "--external", "report.external", "SYSTEM:COLUMN=PATH score files");
    opt(s, "-o,--output", "output.path", "Merged TSV");

    s = sub("translate", "Translate through the HTTP-JSON endpoint", cmd_translate);
    opt(s, "input,--input", "input.file", "Source sentences, one per line");
    opt(s, "--endpoint", "translate.endpoint", "http://host:port/path");
    opt(s, "--src", "translate.src", "Source language code");
    opt(s, "--tgt", "translate.tgt", "Target language code");
    opt(s, "--batch-size", "translate.batch_size", "Lines per request");
    opt(s, "--parallel", "translate.parallel", "Requests in flight");
    opt(s, "--attempts", "translate.attempts", "Attempts per batch");
    opt(s, "--backoff-ms", "translate.backoff_ms", "Initial retry delay");
    opt(s, "--timeout", "translate.timeout_s", "Per-request timeout in seconds");
    flag(s, "--resume", "translate.resume", true, "Reuse results of a failed run");
    opt(s, "-o,--output", "output.path", "Hypothesis file");

    s = sub("synth-hsf", "Write a synthetic HSF1 file", cmd_synth_hsf);
    opt(s, "--items", "synth.n_items", "Number of items");
    opt(s, "--enc", "synth.n_enc", "Encoder layers");
    opt(s, "--dec", "synth.n_dec", "Decoder layers");
    opt(s, "--dim", "synth.dim", "Hidden size");
    opt(s, "--separability", "synth.separability", "Distance between class means");
    opt(s, "--seed", "synth.seed", "Generator seed");
    opt(s, "-o,--output", "output.path", "HSF1 file");
  }

  int run(int argc, char **argv) {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
      const int rc = app.exit(e);
      return rc == 0 ? 0 : static_cast<int>(sp::ExitCode::Config);
    }
    try {
      sp::RunConfig cfg;
      if (!config_path.empty())
        cfg = sp::RunConfig::load(config_path);
      cfg.merge(overrides);
      for (const auto &kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw sp::ConfigError("--set expects section.key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
      }
      std::string name;
      for (auto *s : app.get_subcommands())
        name = names.at(s);
      if (name.empty())
        name = cfg.str("run.command", "");
      if (name.empty()) {
        std::cerr << app.help();
        return static_cast<int>(sp::ExitCode::Config);
      }
      auto it = commands.find(name);
      if (it == commands.end())
        throw sp::ConfigError("unknown command '" + name + "'");
      cfg.set("run.command", name);
      auto dump = [&] {
        if (dump_path.empty()) {
          cfg.dump(std::cerr);
          return;
        }
        Output out(dump_path);
        cfg.dump(out.stream());
        out.close();
      };
      it->second(cfg, dump);
      std::cout.flush();
      return 0;
    } catch (const sp::Error &e) {
      std::cout.flush();
      std::cerr << "error: " << e.what() << '\n';
      return static_cast<int>(e.code());
    } catch (const fs::filesystem_error &e) {
      std::cerr << "error: " << e.what() << '\n';
      return static_cast<int>(sp::ExitCode::Data);
    }
  }
};

} // namespace

int main(int argc, char **argv) {
  Cli cli;
  return cli.run(argc, argv);
}
