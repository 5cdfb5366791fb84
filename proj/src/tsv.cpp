#include "tdcorpus/tsv.h"

#include <algorithm>

#include "tdcorpus/error.h"
#include "tdcorpus/text.h"

namespace tdcorpus::tsv {

std::string escape(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (char c : field) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] != '\\' || i + 1 == field.size()) {
      out.push_back(field[i]);
      continue;
    }
    switch (field[++i]) {
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case '\\': out.push_back('\\'); break;
      default:
        out.push_back('\\');
        out.push_back(field[i]);
    }
  }
  return out;
}

Writer::Writer(const std::string& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc),
      width_(header.size()) {
  if (!out_) throw IoError("cannot write " + path);
  row(header);
}

void Writer::row(const std::vector<std::string>& fields) {
  if (fields.size() != width_) {
    throw Error("tsv row width " + std::to_string(fields.size()) +
                " does not match header width " + std::to_string(width_));
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_.put('\t');
    out_ << escape(fields[i]);
  }
  out_.put('\n');
  if (!out_) throw IoError("write failed: " + path_);
}

void Writer::close() {
  out_.close();
  if (out_.fail()) throw IoError("write failed: " + path_);
}

Reader::Reader(const std::string& path, const std::vector<std::string>& required)
    : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw IoError("cannot read " + path);
  std::string line;
  if (!std::getline(in_, line)) throw ParseError(path + ": missing header", 1);
  line_ = 1;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  for (auto& name : text::split(line, '\t')) header_.push_back(unescape(name));
  for (const auto& name : required) column(name);
}

std::size_t Reader::column(std::string_view name) const {
  auto it = std::find(header_.begin(), header_.end(), name);
  if (it == header_.end()) {
    throw ParseError(path_ + ": missing column '" + std::string(name) + "'", 1);
  }
  return static_cast<std::size_t>(it - header_.begin());
}

bool Reader::next(std::vector<std::string>& fields) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto raw = text::split(line, '\t');
    if (raw.size() != header_.size()) {
      throw ParseError(path_ + ": expected " + std::to_string(header_.size()) +
                           " fields, found " + std::to_string(raw.size()),
                       line_);
    }
    fields.clear();
    for (auto& f : raw) fields.push_back(unescape(f));
    return true;
  }
  return false;
}

}  // namespace tdcorpus::tsv
