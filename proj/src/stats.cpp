#include "tdcorpus/stats.h"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <unordered_map>

#include "tdcorpus/text.h"

namespace tdcorpus {

namespace {

std::string thousands(std::uint64_t v) {
  std::string digits = std::to_string(v);
  std::string out;
  const std::size_t n = digits.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i && (n - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return out;
}

}  // namespace

CorpusStats compute_stats(const std::vector<AlignedPair>& pairs,
                          const std::vector<DocumentRecord>& records) {
  std::unordered_map<std::string_view, std::string_view> area_of;
  for (const auto& r : records) area_of.emplace(r.id, r.knowledge_area);

  std::map<std::string, AreaStats> by_area;
  std::set<std::string_view> seen_docs;
  for (const auto& p : pairs) {
    std::string area = kUnknownArea;
    if (auto it = area_of.find(p.doc_id); it != area_of.end() && !it->second.empty()) {
      area = std::string(it->second);
    }
    AreaStats& a = by_area[area];
    a.area = area;
    if (seen_docs.insert(p.doc_id).second) ++a.documents;
    ++a.pairs;
    a.tokens_pt += text::split_whitespace(p.src_text).size();
    a.tokens_en += text::split_whitespace(p.tgt_text).size();
  }

  CorpusStats stats;
  stats.total.area = "Total";
  for (auto& [name, a] : by_area) {
    stats.total.documents += a.documents;
    stats.total.pairs += a.pairs;
    stats.total.tokens_en += a.tokens_en;
    stats.total.tokens_pt += a.tokens_pt;
    stats.areas.push_back(std::move(a));
  }
  std::stable_sort(stats.areas.begin(), stats.areas.end(),
                   [](const AreaStats& x, const AreaStats& y) { return x.pairs > y.pairs; });
  return stats;
}

std::string format_table(const CorpusStats& stats) {
  std::vector<std::array<std::string, 5>> rows;
  rows.push_back({"Knowledge Area", "Docs", "Sents", "Tokens EN", "Tokens PT"});
  auto add = [&](const AreaStats& a) {
    rows.push_back({a.area, thousands(a.documents), thousands(a.pairs), thousands(a.tokens_en),
                    thousands(a.tokens_pt)});
  };
  for (const auto& a : stats.areas) add(a);
  add(stats.total);

  std::array<std::size_t, 5> width{};
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < 5; ++c) width[c] = std::max(width[c], text::code_point_count(r[c]));
  }
  auto pad = [](const std::string& s, std::size_t w, bool left) {
    const std::string fill(w - text::code_point_count(s), ' ');
    return left ? s + fill : fill + s;
  };
  std::string out;
  std::size_t line_width = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::string line = pad(rows[i][0], width[0], true);
    for (std::size_t c = 1; c < 5; ++c) line += "  " + pad(rows[i][c], width[c], false);
    line_width = text::code_point_count(line);
    if (i + 1 == rows.size()) out += std::string(line_width, '-') + "\n";
    out += line + "\n";
    if (i == 0) out += std::string(line_width, '-') + "\n";
  }
  return out;
}

std::string format_tsv(const CorpusStats& stats) {
  std::string out = "knowledge_area\tdocs\tsents\ttokens_en\ttokens_pt\n";
  auto add = [&](const AreaStats& a) {
    out += fmt::format("{}\t{}\t{}\t{}\t{}\n", a.area, a.documents, a.pairs, a.tokens_en,
                       a.tokens_pt);
  };
  for (const auto& a : stats.areas) add(a);
  add(stats.total);
  return out;
}

}  // namespace tdcorpus
