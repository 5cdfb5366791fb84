#pragma once

#include <array>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tdcorpus/config.h"
#include "tdcorpus/record.h"

namespace tdcorpus {

/// DocumentRecord fields that a ColumnMap may bind to source columns.
inline constexpr std::array<std::string_view, 12> kRecordFields = {
    "id",           "year",           "university",       "title_native",
    "doc_type",     "keywords_native", "keywords_foreign", "knowledge_area",
    "subareas",     "url_pdf",        "abstract_native",  "abstract_foreign"};

/// Binds record fields to the column headers of a delimited dump.
struct ColumnMap {
  std::map<std::string, std::string> columns;  // field -> header
  char delimiter = ',';
  bool quoted = true;
  char list_separator = ';';
  /// Rows that are not valid UTF-8 are re-decoded as Latin-1 instead of
  /// being skipped.
  bool latin1_fallback = false;

  /// Reads `[format]` and `[columns]` sections. Delimiter accepts a single
  /// character or the names "tab", "comma", "semicolon".
  static ColumnMap from_config(const Config& cfg);
  static ColumnMap load(const std::filesystem::path& path);

  /// Throws ConfigError when id / abstract_native / abstract_foreign are
  /// unmapped or an unknown field name is used.
  void validate() const;
};

struct IngestWarning {
  std::string source;
  std::size_t line = 0;
  std::string message;
};

struct IngestResult {
  std::vector<DocumentRecord> records;
  std::size_t rows = 0;          // data rows seen
  std::size_t skipped_rows = 0;  // malformed or undecodable
  std::size_t duplicate_ids = 0;
  std::vector<IngestWarning> warnings;
};

/// Parses one delimited file. Missing mapped columns raise ConfigError, an
/// unreadable file IoError; malformed rows are skipped with a warning.
/// Duplicate ids keep the first occurrence.
IngestResult parse_records(const std::filesystem::path& path, const ColumnMap& map);
IngestResult parse_records(std::istream& in, const ColumnMap& map,
                           const std::string& source = "<stream>");

/// Parses several files (up to `workers` at a time) and merges them in file
/// order; ids are deduplicated across files.
IngestResult parse_files(const std::vector<std::filesystem::path>& paths,
                         const ColumnMap& map, unsigned workers = 1);

/// Writes records back in the layout described by `map` (mapped fields only).
void write_records(const std::filesystem::path& path,
                   const std::vector<DocumentRecord>& records, const ColumnMap& map);

/// Keeps records whose two abstracts are non-blank; order preserved.
std::vector<DocumentRecord> filter_bilingual(std::vector<DocumentRecord> records);

/// Case-folds every text field except id and url_pdf, turns control
/// characters (CR, LF included) into spaces, collapses whitespace and trims.
DocumentRecord normalize(DocumentRecord record);

}  // namespace tdcorpus
