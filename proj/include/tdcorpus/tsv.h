#pragma once

#include <fstream>
#include <string>
#include <string_view>
#include <vector>

// Tab-separated intermediate files exchanged between pipeline stages: one
// header line naming the columns, then one record per line. Backslash,
// tab, CR and LF inside a field are written as \\, \t, \r and \n.
namespace tdcorpus::tsv {

std::string escape(std::string_view field);
std::string unescape(std::string_view field);

class Writer {
 public:
  Writer(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& fields);
  void close();

 private:
  std::string path_;
  std::ofstream out_;
  std::size_t width_;
};

class Reader {
 public:
  /// Opens `path` and checks that every name in `required` is present in
  /// the header. Throws IoError / ParseError.
  Reader(const std::string& path, const std::vector<std::string>& required);

  /// Column index for a header name; throws ParseError when absent.
  std::size_t column(std::string_view name) const;

  /// Reads the next row into `fields` (unescaped). Returns false at EOF.
  bool next(std::vector<std::string>& fields);

  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::vector<std::string> header_;
  std::size_t line_ = 0;
};

}  // namespace tdcorpus::tsv
