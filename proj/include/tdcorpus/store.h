#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tdcorpus/aligner.h"
#include "tdcorpus/record.h"

struct sqlite3;

namespace tdcorpus {

/// Writes the aligned corpus and its metadata to a single SQLite file:
///
///   documents(id PRIMARY KEY, year, university, title_native, doc_type,
///             knowledge_area, url_pdf)
///   keywords(doc_id, lang, keyword)        lang is "pt" or "en"
///   subareas(doc_id, subarea)
///   pairs(doc_id, seq, src_text, tgt_text, bead_kind, cost)
///
/// `seq` numbers the pairs of one document from 0 in the order given.
/// A pair whose doc_id has no record throws IntegrityError before anything
/// is written. The file is built beside `path` and renamed into place, so
/// an existing store is replaced only by a complete one.
void write_store(const std::vector<AlignedPair>& pairs,
                 const std::vector<DocumentRecord>& records,
                 const std::filesystem::path& path);

struct StoredPair {
  std::string doc_id;
  long long seq = 0;
  AlignedPair pair;
};

/// Read-only access to a store produced by write_store.
class StoreReader {
 public:
  explicit StoreReader(const std::filesystem::path& path);
  ~StoreReader();
  StoreReader(const StoreReader&) = delete;
  StoreReader& operator=(const StoreReader&) = delete;

  std::size_t document_count() const;
  std::size_t pair_count() const;
  std::size_t keyword_count() const;

  /// Full metadata of one document, or nullopt.
  std::optional<DocumentRecord> document(const std::string& id) const;

  /// Pairs ordered by (doc_id, seq).
  std::vector<AlignedPair> all_pairs() const;
  std::vector<AlignedPair> pairs_for_area(const std::string& knowledge_area) const;

  /// Every row of every table, one line per row in primary order.
  std::string dump() const;

 private:
  sqlite3* db_ = nullptr;
};

}  // namespace tdcorpus
