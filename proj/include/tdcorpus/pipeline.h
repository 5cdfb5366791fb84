#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tdcorpus/error.h"
#include "tdcorpus/ingest.h"
#include "tdcorpus/length_model.h"
#include "tdcorpus/mt_eval.h"

namespace tdcorpus {

enum class SwapPolicy { drop, swap };

/// Everything one `run` needs, read from an INI file:
///
///   [input]   files (comma separated), column_map
///   [langid]  policy = drop | swap, profile_pt, profile_en (optional)
///   [segment] split_on_semicolon
///   [align]   AlignParams keys, dictionary (optional)
///   [output]  dir, tmx, store, stats, stats_tsv, report
///   [split]   dev, test, seed (optional; seed is mandatory when present)
///   [run]     workers, data_dir
///
/// Relative paths resolve against the config file's directory; output
/// names resolve against [output] dir.
struct PipelineConfig {
  std::vector<std::filesystem::path> inputs;
  ColumnMap column_map;
  SwapPolicy swap_policy = SwapPolicy::drop;
  std::optional<std::filesystem::path> profile_pt;
  std::optional<std::filesystem::path> profile_en;
  bool split_on_semicolon = false;
  AlignParams align;
  std::optional<std::filesystem::path> dictionary;
  std::filesystem::path output_dir;
  std::filesystem::path tmx_path;
  std::filesystem::path store_path;
  std::filesystem::path stats_path;
  std::filesystem::path stats_tsv_path;
  std::filesystem::path report_path;
  std::optional<SplitSpec> split;
  unsigned workers = 1;
  std::filesystem::path data_dir;

  static PipelineConfig from_config(const Config& cfg);
  static PipelineConfig load(const std::filesystem::path& path);

  /// Throws ConfigError when an input, the column map, a profile or the
  /// dictionary does not exist.
  void validate() const;
};

/// Error raised by run_pipeline; `stage()` names the failing step.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& cause)
      : Error(stage + ": " + cause), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct RunReport {
  // ingest
  std::size_t files = 0;
  std::size_t rows = 0;
  std::size_t skipped_rows = 0;
  std::size_t duplicate_ids = 0;
  std::size_t records_ingested = 0;
  // filter / language check
  std::size_t records_bilingual = 0;
  std::size_t dropped_monolingual = 0;
  std::size_t langid_ok = 0;
  std::size_t langid_swapped = 0;
  std::size_t langid_inconsistent = 0;
  std::size_t records_checked = 0;  // records entering segmentation
  // segment / align
  std::size_t src_sentences = 0;
  std::size_t tgt_sentences = 0;
  std::size_t chunks = 0;
  std::size_t dictionary_entries = 0;  // summed over chunks
  std::map<std::string, std::size_t> beads_by_kind;
  // postprocess / export
  std::size_t dropped_unaligned = 0;
  std::size_t dropped_short = 0;
  std::size_t pairs = 0;
  std::optional<SplitIndices> split;
  std::vector<std::filesystem::path> outputs;

  std::string to_text() const;
  std::string to_json() const;
};

/// ingest -> filter -> normalize -> language check -> segment ->
/// two-pass chunked alignment -> postprocess -> TMX, store and stats.
/// Pairs are exported ordered by document id, then position. When no
/// pair survives, nothing is written. On failure the files written so far
/// are removed and a StageError is thrown.
RunReport run_pipeline(const PipelineConfig& config);

}  // namespace tdcorpus
