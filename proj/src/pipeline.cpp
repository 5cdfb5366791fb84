#include "tdcorpus/pipeline.h"

#include <spdlog/spdlog.h>

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <fstream>

#include "tdcorpus/aligner.h"
#include "tdcorpus/dictionary.h"
#include "tdcorpus/langid.h"
#include "tdcorpus/parallel.h"
#include "tdcorpus/segmenter.h"
#include "tdcorpus/stats.h"
#include "tdcorpus/store.h"
#include "tdcorpus/text.h"
#include "tdcorpus/tmx.h"

namespace tdcorpus {

namespace {

std::filesystem::path required_path(const Config& cfg, std::string_view key) {
  auto p = cfg.get_path(key);
  if (!p) throw ConfigError(fmt::format("missing required setting {}", key));
  return *p;
}

std::filesystem::path output_path(const Config& cfg, const std::filesystem::path& dir,
                                  std::string_view key, std::string_view fallback) {
  const std::string name = cfg.get_or(std::string(key), std::string(fallback));
  const std::filesystem::path p(name);
  return p.is_absolute() ? p : dir / p;
}

// Removes the files of a failed run.
class OutputGuard {
 public:
  ~OutputGuard() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : written_) std::filesystem::remove(p, ec);
  }
  void add(const std::filesystem::path& p) { written_.push_back(p); }
  void commit() { committed_ = true; }
  const std::vector<std::filesystem::path>& written() const { return written_; }

 private:
  std::vector<std::filesystem::path> written_;
  bool committed_ = false;
};

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  out.close();
  if (out.fail()) throw IoError("write failed: " + path.string());
}

template <class Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace

PipelineConfig PipelineConfig::from_config(const Config& cfg) {
  PipelineConfig pc;
  const std::string files = cfg.get_or("input.files", "");
  for (const auto& f : text::split(files, ',')) {
    const auto item = text::trim(f);
    if (item.empty()) continue;
    std::filesystem::path p{std::string(item)};
    pc.inputs.push_back(p.is_absolute() ? p : cfg.base_dir() / p);
  }
  if (pc.inputs.empty()) throw ConfigError("input.files lists no input file");
  pc.column_map = ColumnMap::load(required_path(cfg, "input.column_map"));

  const std::string policy = cfg.get_or("langid.policy", "drop");
  if (policy == "drop") {
    pc.swap_policy = SwapPolicy::drop;
  } else if (policy == "swap") {
    pc.swap_policy = SwapPolicy::swap;
  } else {
    throw ConfigError("langid.policy must be drop or swap, got '" + policy + "'");
  }
  pc.profile_pt = cfg.get_path("langid.profile_pt");
  pc.profile_en = cfg.get_path("langid.profile_en");
  if (pc.profile_pt.has_value() != pc.profile_en.has_value()) {
    throw ConfigError("langid.profile_pt and langid.profile_en must be given together");
  }

  pc.split_on_semicolon = cfg.get_bool("segment.split_on_semicolon", false);
  pc.align = AlignParams::from_config(cfg);
  pc.dictionary = cfg.get_path("align.dictionary");

  pc.output_dir = cfg.get_path("output.dir").value_or(cfg.base_dir() / "out");
  pc.tmx_path = output_path(cfg, pc.output_dir, "output.tmx", "corpus.tmx");
  pc.store_path = output_path(cfg, pc.output_dir, "output.store", "corpus.sqlite");
  pc.stats_path = output_path(cfg, pc.output_dir, "output.stats", "stats.txt");
  pc.stats_tsv_path = output_path(cfg, pc.output_dir, "output.stats_tsv", "stats.tsv");
  pc.report_path = output_path(cfg, pc.output_dir, "output.report", "report.json");

  if (!cfg.keys("split").empty()) {
    if (!cfg.has("split.seed")) throw ConfigError("split.seed is required when [split] is present");
    SplitSpec s;
    s.dev_size = static_cast<std::size_t>(cfg.get_int("split.dev", 0));
    s.test_size = static_cast<std::size_t>(cfg.get_int("split.test", 0));
    s.seed = static_cast<std::uint64_t>(cfg.get_int("split.seed", 0));
    pc.split = s;
  }
  const long long workers = cfg.get_int("run.workers", 1);
  if (workers < 1) throw ConfigError("run.workers must be at least 1");
  pc.workers = static_cast<unsigned>(workers);
  pc.data_dir = cfg.get_path("run.data_dir").value_or(default_data_dir());
  return pc;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  return from_config(Config::load(path));
}

void PipelineConfig::validate() const {
  auto need = [](const std::filesystem::path& p, std::string_view what) {
    if (!std::filesystem::exists(p)) {
      throw ConfigError(fmt::format("{} not found: {}", what, p.string()));
    }
  };
  for (const auto& p : inputs) need(p, "input file");
  if (profile_pt) need(*profile_pt, "language profile");
  if (profile_en) need(*profile_en, "language profile");
  if (dictionary) need(*dictionary, "dictionary");
  if (!profile_pt) {
    need(data_dir / "langid" / "pt.txt", "seed text");
    need(data_dir / "langid" / "en.txt", "seed text");
  }
  column_map.validate();
  align.validate();
}

RunReport run_pipeline(const PipelineConfig& config) {
  stage("config", [&] { config.validate(); });
  RunReport report;
  report.files = config.inputs.size();

  // ingest, filter, normalize
  std::vector<DocumentRecord> records = stage("ingest", [&] {
    IngestResult r = parse_files(config.inputs, config.column_map, config.workers);
    report.rows = r.rows;
    report.skipped_rows = r.skipped_rows;
    report.duplicate_ids = r.duplicate_ids;
    report.records_ingested = r.records.size();
    return std::move(r.records);
  });
  records = stage("filter", [&] { return filter_bilingual(std::move(records)); });
  report.records_bilingual = records.size();
  report.dropped_monolingual = report.records_ingested - report.records_bilingual;
  stage("normalize", [&] {
    for (auto& r : records) r = normalize(std::move(r));
  });

  // language check
  stage("langid", [&] {
    std::vector<langid::LanguageProfile> profiles;
    if (config.profile_pt) {
      profiles.push_back(langid::load_profile(*config.profile_pt));
      profiles.push_back(langid::load_profile(*config.profile_en));
    } else if (!records.empty()) {
      profiles = langid::bundled_profiles(config.data_dir);
    }
    std::vector<langid::Consistency> verdicts(records.size());
    parallel_for(records.size(), config.workers, [&](std::size_t i) {
      verdicts[i] = langid::check_consistency(records[i], profiles);
    });
    std::vector<DocumentRecord> kept;
    for (std::size_t i = 0; i < records.size(); ++i) {
      switch (verdicts[i]) {
        case langid::Consistency::ok:
          ++report.langid_ok;
          kept.push_back(std::move(records[i]));
          break;
        case langid::Consistency::swapped:
          ++report.langid_swapped;
          if (config.swap_policy == SwapPolicy::swap) {
            std::swap(records[i].abstract_native, records[i].abstract_foreign);
            kept.push_back(std::move(records[i]));
          }
          break;
        case langid::Consistency::inconsistent:
          ++report.langid_inconsistent;
          break;
      }
    }
    records = std::move(kept);
  });
  report.records_checked = records.size();
  std::stable_sort(records.begin(), records.end(),
                   [](const DocumentRecord& a, const DocumentRecord& b) { return a.id < b.id; });

  // segment
  std::vector<DocumentBitext> docs = stage("segment", [&] {
    const Segmenter pt = Segmenter::for_language("pt", config.data_dir, config.split_on_semicolon);
    const Segmenter en = Segmenter::for_language("en", config.data_dir, config.split_on_semicolon);
    std::vector<DocumentBitext> out(records.size());
    parallel_for(records.size(), config.workers, [&](std::size_t i) {
      out[i].doc_id = records[i].id;
      out[i].src = pt.segment(records[i].abstract_native);
      out[i].tgt = en.segment(records[i].abstract_foreign);
    });
    return out;
  });
  for (const auto& d : docs) {
    report.src_sentences += d.src.size();
    report.tgt_sentences += d.tgt.size();
  }

  // align and postprocess
  std::vector<AlignedPair> pairs = stage("align", [&] {
    std::optional<BilingualDictionary> dict;
    if (config.dictionary) dict = load_dictionary(*config.dictionary);
    const BatchAlignment aligned =
        chunked_align(docs, config.align, dict ? &*dict : nullptr, config.workers);
    report.chunks = aligned.chunks;
    for (std::size_t n : aligned.dictionary_sizes) report.dictionary_entries += n;
    std::vector<AlignedPair> out;
    std::size_t substitutions = 0;
    for (std::size_t d = 0; d < aligned.documents(); ++d) {
      const auto beads = aligned.local_beads(d);
      for (const auto& b : beads) {
        ++report.beads_by_kind[std::string(to_string(b.kind))];
        if (is_substitution(b.kind)) {
          ++substitutions;
        } else {
          ++report.dropped_unaligned;
        }
      }
      auto doc_pairs = postprocess(beads, docs[d].src, docs[d].tgt, docs[d].doc_id);
      out.insert(out.end(), std::make_move_iterator(doc_pairs.begin()),
                 std::make_move_iterator(doc_pairs.end()));
    }
    report.dropped_short = substitutions - out.size();
    return out;
  });
  report.pairs = pairs.size();

  if (pairs.empty()) {
    spdlog::warn("no sentence pairs survived; nothing written");
    return report;
  }

  OutputGuard guard;
  stage("export", [&] {
    std::filesystem::create_directories(config.output_dir);
    guard.add(config.tmx_path);
    tmx::write_tmx(pairs, config.tmx_path);
    guard.add(config.store_path);
    write_store(pairs, records, config.store_path);
    const CorpusStats stats = compute_stats(pairs, records);
    guard.add(config.stats_path);
    write_text(config.stats_path, format_table(stats));
    guard.add(config.stats_tsv_path);
    write_text(config.stats_tsv_path, format_tsv(stats));
  });

  if (config.split) {
    stage("split", [&] {
      SplitIndices idx = split_indices(pairs.size(), *config.split);
      auto write_part = [&](const std::vector<std::size_t>& ids, const char* name) {
        std::vector<AlignedPair> part;
        part.reserve(ids.size());
        for (std::size_t i : ids) part.push_back(pairs[i]);
        const auto path = config.output_dir / fmt::format("{}.tsv", name);
        guard.add(path);
        write_pairs_tsv(path, part);
      };
      write_part(idx.train, "train");
      write_part(idx.dev, "dev");
      write_part(idx.test, "test");
      report.split = std::move(idx);
    });
  }

  stage("report", [&] {
    report.outputs = guard.written();
    report.outputs.push_back(config.report_path);
    guard.add(config.report_path);
    write_text(config.report_path, report.to_json());
  });
  guard.commit();
  return report;
}

std::string RunReport::to_text() const {
  std::string out;
  out += fmt::format("ingest:    {} file(s), {} rows, {} skipped, {} duplicate ids -> {} records\n",
                     files, rows, skipped_rows, duplicate_ids, records_ingested);
  out += fmt::format("filter:    {} -> {} records ({} without both abstracts)\n", records_ingested,
                     records_bilingual, dropped_monolingual);
  out += fmt::format("langid:    {} -> {} records ({} ok, {} swapped, {} inconsistent)\n",
                     records_bilingual, records_checked, langid_ok, langid_swapped,
                     langid_inconsistent);
  out += fmt::format("segment:   {} pt / {} en sentences\n", src_sentences, tgt_sentences);
  out += fmt::format("align:     {} chunk(s), {} dictionary entries, beads", chunks,
                     dictionary_entries);
  for (const auto& [kind, n] : beads_by_kind) out += fmt::format(" {}:{}", kind, n);
  out += "\n";
  out += fmt::format("postproc:  {} unaligned and {} short beads dropped -> {} pairs\n",
                     dropped_unaligned, dropped_short, pairs);
  if (split) {
    out += fmt::format("split:     train {} / dev {} / test {}\n", split->train.size(),
                       split->dev.size(), split->test.size());
  }
  for (const auto& p : outputs) out += fmt::format("wrote      {}\n", p.string());
  return out;
}

std::string RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["ingest"] = {{"files", files},
                 {"rows", rows},
                 {"skipped_rows", skipped_rows},
                 {"duplicate_ids", duplicate_ids},
                 {"records", records_ingested}};
  j["filter"] = {{"records_in", records_ingested},
                 {"records_out", records_bilingual},
                 {"dropped_monolingual", dropped_monolingual}};
  j["langid"] = {{"records_in", records_bilingual},
                 {"records_out", records_checked},
                 {"ok", langid_ok},
                 {"swapped", langid_swapped},
                 {"inconsistent", langid_inconsistent}};
  j["segment"] = {{"src_sentences", src_sentences}, {"tgt_sentences", tgt_sentences}};
  j["align"] = {{"chunks", chunks},
                {"dictionary_entries", dictionary_entries},
                {"beads", beads_by_kind}};
  j["postprocess"] = {{"dropped_unaligned", dropped_unaligned},
                      {"dropped_short", dropped_short},
                      {"pairs", pairs}};
  if (split) {
    j["split"] = {{"train", split->train.size()},
                  {"dev", split->dev.size()},
                  {"test", split->test.size()}};
  }
  // Output paths are left out so that reruns into another directory
  // produce identical reports.
  return j.dump(2) + "\n";
}

}  // namespace tdcorpus
