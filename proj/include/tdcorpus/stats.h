#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tdcorpus/aligner.h"
#include "tdcorpus/record.h"

namespace tdcorpus {

/// Documents without a knowledge area are counted under this name.
inline constexpr const char* kUnknownArea = "unknown";

struct AreaStats {
  std::string area;
  std::uint64_t documents = 0;  // documents with at least one pair
  std::uint64_t pairs = 0;
  std::uint64_t tokens_en = 0;  // whitespace tokens, target side
  std::uint64_t tokens_pt = 0;  // whitespace tokens, source side

  bool operator==(const AreaStats&) const = default;
};

struct CorpusStats {
  std::vector<AreaStats> areas;  // by pairs descending, then name
  AreaStats total;

  bool operator==(const CorpusStats&) const = default;
};

/// Groups pairs by their document's knowledge area. Pairs whose document
/// is not among `records` land in the unknown bucket.
CorpusStats compute_stats(const std::vector<AlignedPair>& pairs,
                          const std::vector<DocumentRecord>& records);

/// Column-aligned table: Knowledge Area, Docs, Sents, Tokens EN, Tokens PT,
/// with a closing Total row.
std::string format_table(const CorpusStats& stats);

/// Tab-separated variant of format_table with exact counts.
std::string format_tsv(const CorpusStats& stats);

}  // namespace tdcorpus
