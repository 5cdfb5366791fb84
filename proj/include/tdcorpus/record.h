#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tdcorpus {

enum class DocType { thesis, dissertation, other };

std::string_view to_string(DocType t);

/// Accepts the canonical names plus the catalog's degree labels
/// ("DOUTORADO" -> thesis, "MESTRADO PROFISSIONAL" -> dissertation).
DocType parse_doc_type(std::string_view s);

/// One thesis or dissertation with both abstracts. The native side is
/// Portuguese, the foreign side English.
struct DocumentRecord {
  std::string id;
  int year = 0;
  std::string university;
  std::string title_native;
  DocType doc_type = DocType::other;
  std::vector<std::string> keywords_native;
  std::vector<std::string> keywords_foreign;
  std::string knowledge_area;
  std::vector<std::string> subareas;
  std::string url_pdf;
  std::string abstract_native;
  std::string abstract_foreign;

  bool operator==(const DocumentRecord&) const = default;
};

/// Intermediate stage file: tab-separated, one header line, list fields
/// joined with ';' (a literal ';' inside an item is written as "\;").
void write_records_tsv(const std::filesystem::path& path,
                       const std::vector<DocumentRecord>& records);
std::vector<DocumentRecord> read_records_tsv(const std::filesystem::path& path);

std::string encode_list(const std::vector<std::string>& items);
std::vector<std::string> decode_list(std::string_view encoded);

}  // namespace tdcorpus
