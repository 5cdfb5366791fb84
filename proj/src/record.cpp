#include "tdcorpus/record.h"

#include <charconv>

#include "tdcorpus/error.h"
#include "tdcorpus/text.h"
#include "tdcorpus/tsv.h"

namespace tdcorpus {

std::string_view to_string(DocType t) {
  switch (t) {
    case DocType::thesis: return "thesis";
    case DocType::dissertation: return "dissertation";
    case DocType::other: return "other";
  }
  return "other";
}

DocType parse_doc_type(std::string_view s) {
  const std::string v = text::fold_case(text::trim(s));
  auto starts = [&](std::string_view p) { return v.rfind(p, 0) == 0; };
  if (v == "thesis" || starts("tese") || starts("doutor")) return DocType::thesis;
  if (v == "dissertation" || starts("disserta") || starts("mestr")) {
    return DocType::dissertation;
  }
  return DocType::other;
}

std::string encode_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out.push_back(';');
    for (char c : items[i]) {
      if (c == '\\' || c == ';') out.push_back('\\');
      out.push_back(c);
    }
  }
  return out;
}

std::vector<std::string> decode_list(std::string_view encoded) {
  std::vector<std::string> out;
  if (encoded.empty()) return out;
  std::string cur;
  for (std::size_t i = 0; i < encoded.size(); ++i) {
    const char c = encoded[i];
    if (c == '\\' && i + 1 < encoded.size()) {
      cur.push_back(encoded[++i]);
    } else if (c == ';') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

namespace {

const std::vector<std::string> kHeader = {
    "id",           "year",           "university",       "title_native",
    "doc_type",     "keywords_native", "keywords_foreign", "knowledge_area",
    "subareas",     "url_pdf",        "abstract_native",  "abstract_foreign"};

}  // namespace

void write_records_tsv(const std::filesystem::path& path,
                       const std::vector<DocumentRecord>& records) {
  tsv::Writer w(path.string(), kHeader);
  for (const auto& r : records) {
    w.row({r.id, std::to_string(r.year), r.university, r.title_native,
           std::string(to_string(r.doc_type)), encode_list(r.keywords_native),
           encode_list(r.keywords_foreign), r.knowledge_area,
           encode_list(r.subareas), r.url_pdf, r.abstract_native,
           r.abstract_foreign});
  }
  w.close();
}

std::vector<DocumentRecord> read_records_tsv(const std::filesystem::path& path) {
  tsv::Reader reader(path.string(), kHeader);
  std::vector<std::size_t> col;
  for (const auto& name : kHeader) col.push_back(reader.column(name));
  std::vector<DocumentRecord> out;
  std::vector<std::string> f;
  while (reader.next(f)) {
    DocumentRecord r;
    r.id = f[col[0]];
    const std::string& y = f[col[1]];
    if (!y.empty()) {
      auto [p, ec] = std::from_chars(y.data(), y.data() + y.size(), r.year);
      if (ec != std::errc() || p != y.data() + y.size()) {
        throw ParseError(path.string() + ": bad year '" + y + "'", reader.line());
      }
    }
    r.university = f[col[2]];
    r.title_native = f[col[3]];
    r.doc_type = parse_doc_type(f[col[4]]);
    r.keywords_native = decode_list(f[col[5]]);
    r.keywords_foreign = decode_list(f[col[6]]);
    r.knowledge_area = f[col[7]];
    r.subareas = decode_list(f[col[8]]);
    r.url_pdf = f[col[9]];
    r.abstract_native = f[col[10]];
    r.abstract_foreign = f[col[11]];
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace tdcorpus
