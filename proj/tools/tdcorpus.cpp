// Command-line front end. Every pipeline stage is a subcommand that reads
// and writes the tab-separated stage files, and `run` chains them all from
// one config file.

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "tdcorpus/aligner.h"
#include "tdcorpus/config.h"
#include "tdcorpus/dictionary.h"
#include "tdcorpus/error.h"
#include "tdcorpus/ingest.h"
#include "tdcorpus/langid.h"
#include "tdcorpus/mt_eval.h"
#include "tdcorpus/pipeline.h"
#include "tdcorpus/quality_eval.h"
#include "tdcorpus/segmenter.h"
#include "tdcorpus/stats.h"
#include "tdcorpus/store.h"
#include "tdcorpus/text.h"
#include "tdcorpus/tmx.h"

namespace fs = std::filesystem;
using namespace tdcorpus;

namespace {

std::string data_dir_or_default(const std::string& d) { return d.empty() ? default_data_dir().string() : d; }

std::vector<langid::LanguageProfile> load_profiles(const std::vector<std::string>& paths,
                                                   const std::string& data_dir) {
  if (paths.empty()) return langid::bundled_profiles(data_dir_or_default(data_dir));
  std::vector<langid::LanguageProfile> out;
  for (const auto& p : paths) out.push_back(langid::load_profile(p));
  return out;
}

AlignParams load_params(const std::string& path) {
  if (path.empty()) return AlignParams{};
  return AlignParams::from_config(Config::load(path));
}

// ---- ingest ---------------------------------------------------------------

struct IngestOpts {
  std::vector<std::string> inputs;
  std::string column_map;
  std::string out;
  bool no_filter = false;
  bool no_normalize = false;
  unsigned workers = 1;
};

int cmd_ingest(const IngestOpts& o) {
  const ColumnMap map = ColumnMap::load(o.column_map);
  std::vector<fs::path> paths(o.inputs.begin(), o.inputs.end());
  IngestResult r = parse_files(paths, map, o.workers);
  std::size_t n = r.records.size();
  auto records = std::move(r.records);
  if (!o.no_filter) records = filter_bilingual(std::move(records));
  if (!o.no_normalize) {
    for (auto& rec : records) rec = normalize(std::move(rec));
  }
  write_records_tsv(o.out, records);
  spdlog::info("{} rows, {} skipped, {} duplicate ids, {} records, {} kept", r.rows, r.skipped_rows,
               r.duplicate_ids, n, records.size());
  return 0;
}

// ---- langid ---------------------------------------------------------------

struct LangidOpts {
  std::string lang;
  std::vector<std::string> texts;
  int n_max = 3;
  double smoothing = 0.5;
  std::string out;
  std::vector<std::string> profiles;
  std::string data_dir;
  std::string in;
  std::string policy = "drop";
};

int cmd_langid_train(const LangidOpts& o) {
  std::vector<std::string> texts;
  for (const auto& f : o.texts) {
    auto lines = langid::read_seed_text(f);
    texts.insert(texts.end(), lines.begin(), lines.end());
  }
  langid::save_profile(o.out, langid::train_profile(texts, o.lang, o.n_max, o.smoothing));
  return 0;
}

int cmd_langid_detect(const LangidOpts& o) {
  const auto profiles = load_profiles(o.profiles, o.data_dir);
  std::string line;
  while (std::getline(std::cin, line)) {
    const auto d = langid::detect(line, profiles);
    std::cout << d.lang << '\t' << fmt::format("{:.4f}", d.margin) << '\n';
  }
  return 0;
}

int cmd_langid_check(const LangidOpts& o) {
  const auto profiles = load_profiles(o.profiles, o.data_dir);
  if (o.policy != "drop" && o.policy != "swap") throw ConfigError("--policy must be drop or swap");
  auto records = read_records_tsv(o.in);
  std::vector<DocumentRecord> kept;
  std::size_t counts[3] = {0, 0, 0};
  for (auto& r : records) {
    const auto c = langid::check_consistency(r, profiles);
    ++counts[static_cast<int>(c)];
    if (c == langid::Consistency::ok) {
      kept.push_back(std::move(r));
    } else if (c == langid::Consistency::swapped && o.policy == "swap") {
      std::swap(r.abstract_native, r.abstract_foreign);
      kept.push_back(std::move(r));
    }
  }
  write_records_tsv(o.out, kept);
  spdlog::info("{} ok, {} swapped, {} inconsistent, {} kept", counts[0], counts[1], counts[2],
               kept.size());
  return 0;
}

// ---- segment --------------------------------------------------------------

struct SegmentOpts {
  std::string lang;
  bool semicolon = false;
  std::string records;
  std::string out;
  std::string data_dir;
};

int cmd_segment(const SegmentOpts& o) {
  const std::string data_dir = data_dir_or_default(o.data_dir);
  if (!o.records.empty()) {
    if (o.out.empty()) throw ConfigError("--records needs --out");
    const Segmenter pt = Segmenter::for_language("pt", data_dir, o.semicolon);
    const Segmenter en = Segmenter::for_language("en", data_dir, o.semicolon);
    std::vector<DocumentBitext> docs;
    for (const auto& r : read_records_tsv(o.records)) {
      docs.push_back({r.id, pt.segment(r.abstract_native), en.segment(r.abstract_foreign)});
    }
    write_bitexts_tsv(o.out, docs);
    return 0;
  }
  if (o.lang.empty()) throw ConfigError("--lang is required when reading stdin");
  const Segmenter seg = Segmenter::for_language(o.lang, data_dir, o.semicolon);
  std::string line;
  while (std::getline(std::cin, line)) {
    for (const auto& s : seg.segment(text::clean_whitespace(line))) std::cout << s.text << '\n';
  }
  return 0;
}

// ---- align ----------------------------------------------------------------

struct AlignOpts {
  std::string in;
  std::string out;
  std::string dict;
  std::string params;
  std::size_t chunk_limit = 0;
  unsigned workers = 1;
  bool all_beads = false;
  std::string dict_out;
};

int cmd_align(const AlignOpts& o) {
  AlignParams params = load_params(o.params);
  if (o.chunk_limit) params.chunk_limit = o.chunk_limit;
  params.validate();
  const auto docs = read_bitexts_tsv(o.in);
  std::optional<BilingualDictionary> dict;
  if (!o.dict.empty()) dict = load_dictionary(o.dict);
  const BatchAlignment aligned = chunked_align(docs, params, dict ? &*dict : nullptr, o.workers);
  std::vector<AlignedPair> pairs;
  for (std::size_t d = 0; d < aligned.documents(); ++d) {
    const auto beads = aligned.local_beads(d);
    if (o.all_beads) {
      for (const auto& b : beads) {
        auto join = [](const std::vector<Sentence>& s, Span sp) {
          std::string t;
          for (std::size_t i = sp.begin; i < sp.end; ++i) t += (t.empty() ? "" : " ") + s[i].text;
          return t;
        };
        pairs.push_back({docs[d].doc_id, join(docs[d].src, b.src), join(docs[d].tgt, b.tgt), b.kind,
                         b.cost});
      }
    } else {
      auto p = postprocess(beads, docs[d].src, docs[d].tgt, docs[d].doc_id);
      pairs.insert(pairs.end(), p.begin(), p.end());
    }
  }
  write_pairs_tsv(o.out.empty() || o.out == "-" ? "/dev/stdout" : o.out, pairs);
  spdlog::info("{} documents, {} chunk(s), {} pairs", docs.size(), aligned.chunks, pairs.size());
  return 0;
}

// ---- export / stats -------------------------------------------------------

struct ExportOpts {
  std::string pairs;
  std::string records;
  std::string tmx;
  std::string store;
  bool tsv = false;
};

int cmd_export(const ExportOpts& o) {
  if (o.tmx.empty() && o.store.empty()) throw ConfigError("nothing to do: give --tmx and/or --store");
  auto pairs = read_pairs_tsv(o.pairs);
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const AlignedPair& a, const AlignedPair& b) { return a.doc_id < b.doc_id; });
  if (!o.tmx.empty()) tmx::write_tmx(pairs, o.tmx);
  if (!o.store.empty()) {
    if (o.records.empty()) throw ConfigError("--store needs --records");
    write_store(pairs, read_records_tsv(o.records), o.store);
  }
  return 0;
}

int cmd_stats(const ExportOpts& o) {
  std::vector<AlignedPair> pairs;
  std::vector<DocumentRecord> records;
  if (!o.store.empty()) {
    StoreReader store(o.store);
    pairs = store.all_pairs();
    for (const auto& p : pairs) {
      if (records.empty() || records.back().id != p.doc_id) records.push_back(*store.document(p.doc_id));
    }
  } else {
    if (o.pairs.empty() || o.records.empty()) throw ConfigError("give --store, or --pairs and --records");
    pairs = read_pairs_tsv(o.pairs);
    records = read_records_tsv(o.records);
  }
  const CorpusStats stats = compute_stats(pairs, records);
  std::cout << (o.tsv ? format_tsv(stats) : format_table(stats));
  return 0;
}

// ---- split / bleu ---------------------------------------------------------

struct SplitOpts {
  std::string pairs;
  std::size_t dev = 0;
  std::size_t test = 0;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

int cmd_split(const SplitOpts& o) {
  const auto parts = split(read_pairs_tsv(o.pairs), {o.dev, o.test, o.seed});
  fs::create_directories(o.out_dir);
  write_pairs_tsv(fs::path(o.out_dir) / "train.tsv", parts.train);
  write_pairs_tsv(fs::path(o.out_dir) / "dev.tsv", parts.dev);
  write_pairs_tsv(fs::path(o.out_dir) / "test.tsv", parts.test);
  spdlog::info("train {} / dev {} / test {}", parts.train.size(), parts.dev.size(), parts.test.size());
  return 0;
}

struct BleuOpts {
  std::string hyp;
  std::string ref;
  bool percent = false;
  bool smooth = false;
};

int cmd_bleu(const BleuOpts& o) {
  std::vector<Tokens> hyps, refs;
  for (const auto& l : read_lines(o.hyp)) hyps.push_back(tokenize(l));
  for (const auto& l : read_lines(o.ref)) refs.push_back(tokenize(l));
  std::cout << format_report(bleu(hyps, refs, o.smooth), o.percent);
  return 0;
}

// ---- manual evaluation ----------------------------------------------------

struct EvalOpts {
  std::string pairs;
  std::size_t n = 400;
  std::uint64_t seed = 0;
  std::string samples;
  std::string log;
};

int cmd_sample_eval(const EvalOpts& o) {
  write_samples(o.samples, sample_pairs(read_pairs_tsv(o.pairs), o.n, o.seed));
  return 0;
}

int cmd_annotate(const EvalOpts& o) {
  auto samples = read_samples(o.samples);
  LabelLog log(o.log);
  const auto r = annotate(samples, std::cin, std::cout, log);
  std::size_t left = 0;
  for (const auto& s : samples) left += s.label == Label::unlabeled;
  std::cout << fmt::format("{} answered, {} skipped, {} still unlabeled\n", r.answered, r.skipped, left);
  return 0;
}

int cmd_eval_report(const EvalOpts& o) {
  auto samples = read_samples(o.samples);
  apply_labels(samples, read_label_log(o.log));
  std::cout << format_summary(summarize(samples));
  return 0;
}

// ---- run ------------------------------------------------------------------

int cmd_run(const std::string& config_path) {
  PipelineConfig cfg;
  try {
    cfg = PipelineConfig::load(config_path);
  } catch (const std::exception& e) {
    throw StageError("config", e.what());
  }
  const RunReport report = run_pipeline(cfg);
  std::cout << report.to_text();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel corpus construction from bilingual thesis abstracts"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  IngestOpts ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Parse delimited record dumps into a record file");
  c_ingest->add_option("inputs", ingest.inputs, "Delimited input files")->required()->check(CLI::ExistingFile);
  c_ingest->add_option("--column-map", ingest.column_map, "Column map config")->required()->check(CLI::ExistingFile);
  c_ingest->add_option("-o,--out", ingest.out, "Output record TSV")->required();
  c_ingest->add_flag("--no-filter", ingest.no_filter, "Keep records lacking an abstract");
  c_ingest->add_flag("--no-normalize", ingest.no_normalize, "Skip case folding and cleanup");
  c_ingest->add_option("--workers", ingest.workers, "Files parsed in parallel")->check(CLI::PositiveNumber);

  LangidOpts lid;
  auto* c_langid = app.add_subcommand("langid", "Language profiles, detection and record checks");
  c_langid->require_subcommand(1);
  auto* c_train = c_langid->add_subcommand("train", "Train a profile from text files");
  c_train->add_option("--lang", lid.lang, "Language code")->required();
  c_train->add_option("texts", lid.texts, "Training text, one sentence per line")->required()->check(CLI::ExistingFile);
  c_train->add_option("--n-max", lid.n_max, "Highest n-gram order")->check(CLI::Range(1, 3));
  c_train->add_option("--smoothing", lid.smoothing, "Additive smoothing constant")->check(CLI::PositiveNumber);
  c_train->add_option("-o,--out", lid.out, "Profile file")->required();
  auto* c_detect = c_langid->add_subcommand("detect", "Detect the language of each stdin line");
  c_detect->add_option("--profile", lid.profiles, "Profile files (default: bundled pt/en)");
  c_detect->add_option("--data-dir", lid.data_dir, "Bundled data directory");
  auto* c_check = c_langid->add_subcommand("check", "Drop or repair records whose abstracts are misplaced");
  c_check->add_option("--in", lid.in, "Record TSV")->required()->check(CLI::ExistingFile);
  c_check->add_option("-o,--out", lid.out, "Checked record TSV")->required();
  c_check->add_option("--policy", lid.policy, "drop | swap")->check(CLI::IsMember({"drop", "swap"}));
  c_check->add_option("--profile", lid.profiles, "Profile files (default: bundled pt/en)");
  c_check->add_option("--data-dir", lid.data_dir, "Bundled data directory");

  SegmentOpts seg;
  auto* c_segment = app.add_subcommand("segment", "Split text into sentences");
  c_segment->add_option("--lang", seg.lang, "pt | en (stdin mode)")->check(CLI::IsMember({"pt", "en"}));
  c_segment->add_flag("--semicolon", seg.semicolon, "Treat a terminal ';' as a boundary");
  c_segment->add_option("--records", seg.records, "Segment a record TSV instead of stdin")->check(CLI::ExistingFile);
  c_segment->add_option("-o,--out", seg.out, "Sentence TSV (with --records)");
  c_segment->add_option("--data-dir", seg.data_dir, "Bundled data directory");

  AlignOpts al;
  auto* c_align = app.add_subcommand("align", "Two-pass sentence alignment of a sentence TSV");
  c_align->add_option("--in", al.in, "Sentence TSV from `segment --records`")->required()->check(CLI::ExistingFile);
  c_align->add_option("-o,--out", al.out, "Pair TSV (default stdout)");
  c_align->add_option("--dict", al.dict, "Bilingual dictionary; skips the first pass")->check(CLI::ExistingFile);
  c_align->add_option("--params", al.params, "Config file with an [align] section")->check(CLI::ExistingFile);
  c_align->add_option("--chunk-limit", al.chunk_limit, "Sentences per chunk");
  c_align->add_option("--workers", al.workers, "Documents aligned in parallel")->check(CLI::PositiveNumber);
  c_align->add_flag("--all-beads", al.all_beads, "Emit every bead, skipping post-processing");

  ExportOpts ex;
  auto* c_export = app.add_subcommand("export", "Write TMX and/or the relational store");
  c_export->add_option("--pairs", ex.pairs, "Pair TSV")->required()->check(CLI::ExistingFile);
  c_export->add_option("--records", ex.records, "Record TSV (metadata for the store)")->check(CLI::ExistingFile);
  c_export->add_option("--tmx", ex.tmx, "TMX output");
  c_export->add_option("--store", ex.store, "SQLite output");

  ExportOpts st;
  auto* c_stats = app.add_subcommand("stats", "Per-knowledge-area corpus statistics");
  c_stats->add_option("--store", st.store, "Read pairs and metadata from a store")->check(CLI::ExistingFile);
  c_stats->add_option("--pairs", st.pairs, "Pair TSV")->check(CLI::ExistingFile);
  c_stats->add_option("--records", st.records, "Record TSV")->check(CLI::ExistingFile);
  c_stats->add_flag("--tsv", st.tsv, "Tab-separated output");

  SplitOpts sp;
  auto* c_split = app.add_subcommand("split", "Seeded train/dev/test split of a pair TSV");
  c_split->add_option("--pairs", sp.pairs, "Pair TSV")->required()->check(CLI::ExistingFile);
  c_split->add_option("--dev", sp.dev, "Development set size")->required();
  c_split->add_option("--test", sp.test, "Test set size")->required();
  c_split->add_option("--seed", sp.seed, "Shuffle seed")->required();
  c_split->add_option("--out-dir", sp.out_dir, "Directory for train/dev/test.tsv");

  BleuOpts bl;
  auto* c_bleu = app.add_subcommand("bleu", "Corpus BLEU of a hypothesis file against a reference");
  c_bleu->add_option("--hyp", bl.hyp, "Hypotheses, one per line")->required()->check(CLI::ExistingFile);
  c_bleu->add_option("--ref", bl.ref, "References, one per line")->required()->check(CLI::ExistingFile);
  c_bleu->add_flag("--percent", bl.percent, "Report on a 0-100 scale");
  c_bleu->add_flag("--smooth", bl.smooth, "Add-one smoothing for orders 2-4");

  EvalOpts ev;
  auto* c_sample = app.add_subcommand("sample-eval", "Draw pairs for manual evaluation");
  c_sample->add_option("--pairs", ev.pairs, "Pair TSV")->required()->check(CLI::ExistingFile);
  c_sample->add_option("--n", ev.n, "Sample size");
  c_sample->add_option("--seed", ev.seed, "Sampling seed")->required();
  c_sample->add_option("-o,--out", ev.samples, "Sample TSV")->required();
  auto* c_annotate = app.add_subcommand("annotate", "Label samples interactively (c/p/n/s/q)");
  c_annotate->add_option("--samples", ev.samples, "Sample TSV")->required()->check(CLI::ExistingFile);
  c_annotate->add_option("--log", ev.log, "Label log (appended, resumable)")->required();
  auto* c_report = app.add_subcommand("eval-report", "Summarize the label log");
  c_report->add_option("--samples", ev.samples, "Sample TSV")->required()->check(CLI::ExistingFile);
  c_report->add_option("--log", ev.log, "Label log")->required()->check(CLI::ExistingFile);

  std::string run_config;
  auto* c_run = app.add_subcommand("run", "Full pipeline from one config file");
  c_run->add_option("-c,--config", run_config, "Pipeline config")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  // Diagnostics go to stderr so stdout stays machine-readable.
  spdlog::set_default_logger(spdlog::stderr_color_mt("tdcorpus"));
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);
  spdlog::set_pattern("%^%l%$: %v");

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (*c_ingest) return cmd_ingest(ingest);
    if (*c_langid) {
      if (*c_train) return cmd_langid_train(lid);
      if (*c_detect) return cmd_langid_detect(lid);
      return cmd_langid_check(lid);
    }
    if (*c_segment) return cmd_segment(seg);
    if (*c_align) return cmd_align(al);
    if (*c_export) return cmd_export(ex);
    if (*c_stats) return cmd_stats(st);
    if (*c_split) return cmd_split(sp);
    if (*c_bleu) return cmd_bleu(bl);
    if (*c_sample) return cmd_sample_eval(ev);
    if (*c_annotate) return cmd_annotate(ev);
    if (*c_report) return cmd_eval_report(ev);
    if (*c_run) return cmd_run(run_config);
  } catch (const StageError& e) {
    std::cerr << "error [" << e.stage() << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error [" << name << "]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
