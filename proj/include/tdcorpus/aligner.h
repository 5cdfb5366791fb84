#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tdcorpus/dictionary.h"
#include "tdcorpus/length_model.h"
#include "tdcorpus/segmenter.h"

namespace tdcorpus {

/// Half-open index range [begin, end).
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  bool operator==(const Span&) const = default;
};

struct Bead {
  BeadKind kind = BeadKind::k11;
  Span src;
  Span tgt;
  double cost = 0;
  bool operator==(const Bead&) const = default;
};

double total_cost(std::span<const Bead> beads);

/// True when the beads are in order, sized per their kind, and jointly
/// cover [0, n_src) and [0, n_tgt) exactly once. `why` receives the first
/// violation.
bool is_valid_cover(std::span<const Bead> beads, std::size_t n_src, std::size_t n_tgt,
                    std::string* why = nullptr);

/// Cost of every candidate bead of one document. With a dictionary, each
/// substitution bead's length cost drops by dict_weight * similarity,
/// floored at zero. Similarity is the number of distinct source word types
/// that have a listed translation among the target span's word types,
/// divided by the larger whitespace-token count of the two spans.
class BeadScorer {
 public:
  BeadScorer(std::span<const Sentence> src, std::span<const Sentence> tgt,
             const AlignParams& params, const BilingualDictionary* dict);

  /// Bead of `kind` starting at source index i and target index j.
  double cost(BeadKind kind, std::size_t i, std::size_t j) const;
  double similarity(BeadKind kind, std::size_t i, std::size_t j) const;

  std::size_t source_count() const { return src_.size(); }
  std::size_t target_count() const { return tgt_.size(); }

 private:
  std::span<const Sentence> src_;
  std::span<const Sentence> tgt_;
  const AlignParams& params_;
  const BilingualDictionary* dict_;
  // Per source sentence: for each word type, the document-local ids of its
  // translations that occur in some target sentence.
  std::vector<std::vector<std::vector<std::uint32_t>>> src_translations_;
  std::vector<std::vector<std::string>> src_words_;
  // Per target sentence: sorted document-local word ids.
  std::vector<std::vector<std::uint32_t>> tgt_ids_;
};

/// Minimum-cost monotone bead sequence by dynamic programming. Ties are
/// broken in the order 1-1, 2-1, 1-2, 2-2, 1-0, 0-1.
std::vector<Bead> align_pass(std::span<const Sentence> src, std::span<const Sentence> tgt,
                             const AlignParams& params,
                             const BilingualDictionary* dict = nullptr);

struct DocumentBitext {
  std::string doc_id;
  std::vector<Sentence> src;
  std::vector<Sentence> tgt;
};

/// Alignment of a batch of documents. Bead spans index the concatenation
/// of all documents' sentences (per side), in document order.
struct BatchAlignment {
  std::vector<Bead> beads;
  std::vector<std::size_t> doc_begin;   // beads of doc d: [doc_begin[d], doc_begin[d+1])
  std::vector<std::size_t> src_offset;  // first global source index of doc d
  std::vector<std::size_t> tgt_offset;
  std::size_t chunks = 0;
  std::vector<std::size_t> dictionary_sizes;  // per chunk

  std::size_t documents() const { return doc_begin.empty() ? 0 : doc_begin.size() - 1; }
  /// Beads of document d with indices local to that document.
  std::vector<Bead> local_beads(std::size_t d) const;
};

/// Two-pass alignment of one batch: a length-only pass over every document,
/// a dictionary built from all of its beads, then a dictionary-aware pass
/// per document. A supplied dictionary skips the first pass.
BatchAlignment align_batch(std::span<const DocumentBitext> docs, const AlignParams& params,
                           const BilingualDictionary* dict = nullptr, unsigned workers = 1);

/// Two-pass alignment of a single document.
std::vector<Bead> align_document(std::span<const Sentence> src, std::span<const Sentence> tgt,
                                 const AlignParams& params,
                                 const BilingualDictionary* dict = nullptr);

/// Groups consecutive documents into chunks of at most `limit` sentences
/// per side. Returns [first, last) document ranges. Throws InputError when
/// a single document exceeds the limit.
std::vector<Span> plan_chunks(std::span<const DocumentBitext> docs, std::size_t limit);

/// align_batch applied per chunk when the batch exceeds chunk_limit
/// sentences on either side; each chunk bootstraps its own dictionary.
BatchAlignment chunked_align(std::span<const DocumentBitext> docs, const AlignParams& params,
                             const BilingualDictionary* dict = nullptr, unsigned workers = 1);

/// One exported segment pair.
struct AlignedPair {
  std::string doc_id;
  std::string src_text;
  std::string tgt_text;
  BeadKind kind = BeadKind::k11;
  double cost = 0;
  bool operator==(const AlignedPair&) const = default;
};

inline constexpr std::size_t kMinPairChars = 3;

/// Drops 1-0 / 0-1 beads, joins merged sentences with one space and drops
/// pairs where either side has fewer than three characters.
std::vector<AlignedPair> postprocess(std::span<const Bead> beads,
                                     std::span<const Sentence> src,
                                     std::span<const Sentence> tgt,
                                     const std::string& doc_id);

/// Stage file of aligned pairs: doc_id, kind, src_text, tgt_text, cost.
void write_pairs_tsv(const std::filesystem::path& path, const std::vector<AlignedPair>& pairs);
std::vector<AlignedPair> read_pairs_tsv(const std::filesystem::path& path);

/// Stage file of segmented documents: doc_id, side ("pt" or "en"), index,
/// text. Documents keep their first-appearance order.
void write_bitexts_tsv(const std::filesystem::path& path, const std::vector<DocumentBitext>& docs);
std::vector<DocumentBitext> read_bitexts_tsv(const std::filesystem::path& path);

}  // namespace tdcorpus
