#include "tdcorpus/ingest.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <unordered_set>

#include "tdcorpus/error.h"
#include "tdcorpus/parallel.h"
#include "tdcorpus/text.h"

namespace tdcorpus {

namespace {

char parse_delimiter(const std::string& raw, const char* key) {
  const std::string v = text::fold_case(text::trim(raw));
  if (v == "tab" || v == "\\t") return '\t';
  if (v == "comma") return ',';
  if (v == "semicolon") return ';';
  if (v == "pipe") return '|';
  if (raw.size() == 1) return raw[0];
  if (v.size() == 1) return v[0];
  throw ConfigError(std::string(key) + ": expected a single character, got '" +
                    raw + "'");
}

struct CsvRow {
  std::vector<std::string> fields;
  std::size_t line = 0;
  std::string problem;  // non-empty when the row is malformed
};

// RFC 4180 reader; quoted fields may span lines.
class CsvReader {
 public:
  CsvReader(std::istream& in, char delim, bool quoted)
      : buf_(*in.rdbuf()), delim_(delim), quoted_(quoted) {}

  bool next(CsvRow& row) {
    for (;;) {
      if (!read_row(row)) return false;
      const bool blank = row.fields.size() == 1 && row.fields[0].empty() &&
                         row.problem.empty();
      if (!blank) return true;
    }
  }

  std::size_t line() const { return line_; }

 private:
  using traits = std::char_traits<char>;

  int get() {
    const int c = buf_.sbumpc();
    if (c == '\n') ++line_;
    return c;
  }
  int peek() { return buf_.sgetc(); }

  bool read_row(CsvRow& row) {
    row.fields.clear();
    row.problem.clear();
    row.line = line_;
    if (peek() == traits::eof()) return false;
    std::string field;
    bool in_quotes = false;
    bool field_started_quoted = false;
    for (;;) {
      const int c = get();
      if (c == traits::eof()) {
        if (in_quotes) row.problem = "unterminated quoted field";
        row.fields.push_back(std::move(field));
        return true;
      }
      const char ch = static_cast<char>(c);
      if (in_quotes) {
        if (ch != '"') {
          field.push_back(ch);
          continue;
        }
        if (peek() == '"') {
          get();
          field.push_back('"');
          continue;
        }
        in_quotes = false;
        const int n = peek();
        if (n != traits::eof() && n != delim_ && n != '\n' && n != '\r') {
          row.problem = "unexpected character after closing quote";
        }
        continue;
      }
      if (ch == delim_) {
        row.fields.push_back(std::move(field));
        field.clear();
        field_started_quoted = false;
        continue;
      }
      if (ch == '\n' || (ch == '\r' && peek() == '\n')) {
        if (ch == '\r') get();
        row.fields.push_back(std::move(field));
        return true;
      }
      if (quoted_ && ch == '"' && field.empty() && !field_started_quoted) {
        in_quotes = true;
        field_started_quoted = true;
        continue;
      }
      field.push_back(ch);
    }
  }

  std::streambuf& buf_;
  char delim_;
  bool quoted_;
  std::size_t line_ = 1;
};

std::vector<std::string> split_list(std::string_view raw, char sep) {
  std::vector<std::string> out;
  for (auto& item : text::split(raw, sep)) {
    auto t = text::trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

std::string quote_field(const std::string& v, const ColumnMap& map) {
  if (!map.quoted) {
    if (v.find(map.delimiter) != std::string::npos ||
        v.find_first_of("\r\n") != std::string::npos) {
      throw Error("value cannot be written without quoting: " + v.substr(0, 40));
    }
    return v;
  }
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

ColumnMap ColumnMap::from_config(const Config& cfg) {
  ColumnMap map;
  if (auto d = cfg.get("format.delimiter")) map.delimiter = parse_delimiter(*d, "delimiter");
  map.quoted = cfg.get_bool("format.quoted", true);
  if (auto s = cfg.get("format.list_separator")) {
    map.list_separator = parse_delimiter(*s, "list_separator");
  }
  const std::string enc = text::fold_case(cfg.get_or("format.fallback_encoding", "none"));
  if (enc == "latin1" || enc == "latin-1" || enc == "iso-8859-1") {
    map.latin1_fallback = true;
  } else if (enc != "none" && !enc.empty()) {
    throw ConfigError("fallback_encoding: unsupported value '" + enc + "'");
  }
  for (const auto& field : cfg.keys("columns")) {
    auto header = std::string(text::trim(*cfg.get("columns." + field)));
    if (!header.empty()) map.columns[field] = header;
  }
  map.validate();
  return map;
}

ColumnMap ColumnMap::load(const std::filesystem::path& path) {
  try {
    return from_config(Config::load(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void ColumnMap::validate() const {
  for (const auto& [field, header] : columns) {
    if (std::find(kRecordFields.begin(), kRecordFields.end(), field) ==
        kRecordFields.end()) {
      throw ConfigError("unknown record field '" + field + "' in column map");
    }
  }
  for (const char* required : {"id", "abstract_native", "abstract_foreign"}) {
    if (!columns.count(required)) {
      throw ConfigError(std::string("column map has no column for required field '") +
                        required + "'");
    }
  }
  if (delimiter == '"' || delimiter == '\n' || delimiter == '\r') {
    throw ConfigError("invalid delimiter");
  }
}

IngestResult parse_records(std::istream& in, const ColumnMap& map,
                           const std::string& source) {
  map.validate();
  IngestResult result;
  CsvReader reader(in, map.delimiter, map.quoted);
  CsvRow row;
  if (!reader.next(row)) return result;  // empty file: nothing to ingest

  if (!row.problem.empty()) throw ParseError(source + ": malformed header", row.line);
  std::vector<std::string> header;
  for (auto& h : row.fields) {
    std::string name(text::trim(h));
    if (!text::is_valid_utf8(name)) name = text::latin1_to_utf8(name);
    header.push_back(std::move(name));
  }
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) {
    header[0].erase(0, 3);
  }

  std::map<std::string, std::size_t> field_col;
  for (const auto& [field, column] : map.columns) {
    auto it = std::find(header.begin(), header.end(), column);
    if (it == header.end()) {
      throw ConfigError(source + ": column '" + column + "' (field " + field +
                        ") not found in header");
    }
    field_col[field] = static_cast<std::size_t>(it - header.begin());
  }

  std::unordered_set<std::string> seen;
  auto warn = [&](std::size_t line, std::string msg) {
    spdlog::warn("{}:{}: {}", source, line, msg);
    result.warnings.push_back({source, line, std::move(msg)});
  };

  while (reader.next(row)) {
    ++result.rows;
    if (!row.problem.empty()) {
      ++result.skipped_rows;
      warn(row.line, "skipped row: " + row.problem);
      continue;
    }
    if (row.fields.size() != header.size()) {
      ++result.skipped_rows;
      warn(row.line, "skipped row: expected " + std::to_string(header.size()) +
                         " fields, found " + std::to_string(row.fields.size()));
      continue;
    }
    bool valid = std::all_of(row.fields.begin(), row.fields.end(),
                             [](const std::string& f) { return text::is_valid_utf8(f); });
    if (!valid) {
      if (!map.latin1_fallback) {
        ++result.skipped_rows;
        warn(row.line, "skipped row: invalid UTF-8");
        continue;
      }
      for (auto& f : row.fields) f = text::latin1_to_utf8(f);
    }

    auto value = [&](std::string_view field) -> std::string {
      auto it = field_col.find(std::string(field));
      return it == field_col.end() ? std::string() : row.fields[it->second];
    };

    DocumentRecord rec;
    rec.id = std::string(text::trim(value("id")));
    if (rec.id.empty()) {
      ++result.skipped_rows;
      warn(row.line, "skipped row: empty id");
      continue;
    }
    if (!seen.insert(rec.id).second) {
      ++result.duplicate_ids;
      warn(row.line, "duplicate id '" + rec.id + "' ignored");
      continue;
    }
    const std::string year(text::trim(value("year")));
    if (!year.empty()) {
      auto [p, ec] = std::from_chars(year.data(), year.data() + year.size(), rec.year);
      if (ec != std::errc() || p != year.data() + year.size()) {
        rec.year = 0;
        warn(row.line, "unparseable year '" + year + "'");
      }
    }
    rec.university = value("university");
    rec.title_native = value("title_native");
    rec.doc_type = parse_doc_type(value("doc_type"));
    rec.keywords_native = split_list(value("keywords_native"), map.list_separator);
    rec.keywords_foreign = split_list(value("keywords_foreign"), map.list_separator);
    rec.knowledge_area = value("knowledge_area");
    rec.subareas = split_list(value("subareas"), map.list_separator);
    rec.url_pdf = value("url_pdf");
    rec.abstract_native = value("abstract_native");
    rec.abstract_foreign = value("abstract_foreign");
    result.records.push_back(std::move(rec));
  }
  return result;
}

IngestResult parse_records(const std::filesystem::path& path, const ColumnMap& map) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return parse_records(in, map, path.string());
}

IngestResult parse_files(const std::vector<std::filesystem::path>& paths,
                         const ColumnMap& map, unsigned workers) {
  std::vector<IngestResult> parts(paths.size());
  parallel_for(paths.size(), workers,
               [&](std::size_t i) { parts[i] = parse_records(paths[i], map); });
  IngestResult merged;
  std::unordered_set<std::string> seen;
  for (auto& part : parts) {
    merged.rows += part.rows;
    merged.skipped_rows += part.skipped_rows;
    merged.duplicate_ids += part.duplicate_ids;
    for (auto& w : part.warnings) merged.warnings.push_back(std::move(w));
    for (auto& rec : part.records) {
      if (!seen.insert(rec.id).second) {
        ++merged.duplicate_ids;
        merged.warnings.push_back({"", 0, "duplicate id '" + rec.id + "' ignored"});
        spdlog::warn("duplicate id '{}' across input files ignored", rec.id);
        continue;
      }
      merged.records.push_back(std::move(rec));
    }
  }
  return merged;
}

void write_records(const std::filesystem::path& path,
                   const std::vector<DocumentRecord>& records, const ColumnMap& map) {
  map.validate();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  std::vector<std::string> fields;
  for (auto f : kRecordFields) {
    if (map.columns.count(std::string(f))) fields.emplace_back(f);
  }
  const std::string sep(1, map.list_separator);
  auto cell = [&](const DocumentRecord& r, const std::string& f) -> std::string {
    if (f == "id") return r.id;
    if (f == "year") return r.year ? std::to_string(r.year) : std::string();
    if (f == "university") return r.university;
    if (f == "title_native") return r.title_native;
    if (f == "doc_type") return std::string(to_string(r.doc_type));
    if (f == "keywords_native") return text::join(r.keywords_native, sep);
    if (f == "keywords_foreign") return text::join(r.keywords_foreign, sep);
    if (f == "knowledge_area") return r.knowledge_area;
    if (f == "subareas") return text::join(r.subareas, sep);
    if (f == "url_pdf") return r.url_pdf;
    if (f == "abstract_native") return r.abstract_native;
    return r.abstract_foreign;
  };
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.put(map.delimiter);
    out << quote_field(map.columns.at(fields[i]), map);
  }
  out.put('\n');
  for (const auto& r : records) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out.put(map.delimiter);
      out << quote_field(cell(r, fields[i]), map);
    }
    out.put('\n');
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<DocumentRecord> filter_bilingual(std::vector<DocumentRecord> records) {
  std::vector<DocumentRecord> out;
  out.reserve(records.size());
  for (auto& r : records) {
    if (text::clean_whitespace(r.abstract_native).empty() ||
        text::clean_whitespace(r.abstract_foreign).empty()) {
      continue;
    }
    out.push_back(std::move(r));
  }
  return out;
}

DocumentRecord normalize(DocumentRecord r) {
  auto fold = [](const std::string& s) {
    return text::clean_whitespace(text::fold_case(s));
  };
  auto fold_list = [&](std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (auto& item : items) {
      auto v = fold(item);
      if (!v.empty()) out.push_back(std::move(v));
    }
    items = std::move(out);
  };
  r.id = text::clean_whitespace(r.id);
  r.url_pdf = text::clean_whitespace(r.url_pdf);
  r.university = fold(r.university);
  r.title_native = fold(r.title_native);
  fold_list(r.keywords_native);
  fold_list(r.keywords_foreign);
  r.knowledge_area = fold(r.knowledge_area);
  fold_list(r.subareas);
  r.abstract_native = fold(r.abstract_native);
  r.abstract_foreign = fold(r.abstract_foreign);
  return r;
}

}  // namespace tdcorpus
