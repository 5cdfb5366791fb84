#include "tdcorpus/aligner.h"

#include <fmt/format.h>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "tdcorpus/error.h"
#include "tdcorpus/parallel.h"
#include "tdcorpus/text.h"
#include "tdcorpus/tsv.h"

namespace tdcorpus {

double total_cost(std::span<const Bead> beads) {
  double total = 0;
  for (const auto& b : beads) total += b.cost;
  return total;
}

bool is_valid_cover(std::span<const Bead> beads, std::size_t n_src, std::size_t n_tgt,
                    std::string* why) {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  std::size_t i = 0;
  std::size_t j = 0;
  for (std::size_t k = 0; k < beads.size(); ++k) {
    const Bead& b = beads[k];
    if (b.src.begin != i || b.tgt.begin != j) {
      return fail("bead " + std::to_string(k) + " does not start where the previous ended");
    }
    if (b.src.end < b.src.begin || b.tgt.end < b.tgt.begin ||
        b.src.size() != source_size(b.kind) || b.tgt.size() != target_size(b.kind)) {
      return fail("bead " + std::to_string(k) + " spans do not match kind " +
                  std::string(to_string(b.kind)));
    }
    if (b.cost < 0) return fail("bead " + std::to_string(k) + " has negative cost");
    i = b.src.end;
    j = b.tgt.end;
  }
  if (i != n_src || j != n_tgt) return fail("beads do not cover every sentence");
  return true;
}

BeadScorer::BeadScorer(std::span<const Sentence> src, std::span<const Sentence> tgt,
                       const AlignParams& params, const BilingualDictionary* dict)
    : src_(src), tgt_(tgt), params_(params),
      dict_(dict && !dict->empty() && params.dict_weight > 0 ? dict : nullptr) {
  if (!dict_) return;
  std::unordered_map<std::string, std::uint32_t> local;
  tgt_ids_.resize(tgt.size());
  for (std::size_t j = 0; j < tgt.size(); ++j) {
    for (auto& w : word_types(tgt[j].text)) {
      auto [it, _] = local.try_emplace(std::move(w), static_cast<std::uint32_t>(local.size()));
      tgt_ids_[j].push_back(it->second);
    }
    std::sort(tgt_ids_[j].begin(), tgt_ids_[j].end());
  }
  src_words_.resize(src.size());
  src_translations_.resize(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    src_words_[i] = word_types(src[i].text);
    for (const auto& w : src_words_[i]) {
      std::vector<std::uint32_t> ids;
      if (const auto* targets = dict_->translations(w)) {
        for (const auto& t : *targets) {
          if (auto it = local.find(t); it != local.end()) ids.push_back(it->second);
        }
      }
      src_translations_[i].push_back(std::move(ids));
    }
  }
}

double BeadScorer::similarity(BeadKind kind, std::size_t i, std::size_t j) const {
  if (!dict_ || !is_substitution(kind)) return 0.0;
  const std::size_t a = source_size(kind);
  const std::size_t b = target_size(kind);

  std::size_t src_tokens = 0;
  std::size_t tgt_tokens = 0;
  for (std::size_t k = 0; k < a; ++k) src_tokens += src_[i + k].token_count;
  for (std::size_t k = 0; k < b; ++k) tgt_tokens += tgt_[j + k].token_count;
  const std::size_t denom = std::max(src_tokens, tgt_tokens);
  if (denom == 0) return 0.0;

  auto in_target = [&](std::uint32_t id) {
    for (std::size_t k = 0; k < b; ++k) {
      const auto& ids = tgt_ids_[j + k];
      if (std::binary_search(ids.begin(), ids.end(), id)) return true;
    }
    return false;
  };
  auto matched = [&](const std::vector<std::uint32_t>& ids) {
    return std::any_of(ids.begin(), ids.end(), in_target);
  };

  std::size_t hits = 0;
  const auto& w0 = src_words_[i];
  const auto& t0 = src_translations_[i];
  if (a == 1) {
    for (const auto& ids : t0) hits += matched(ids);
  } else {
    // Merge the two sorted word lists so a shared word counts once.
    const auto& w1 = src_words_[i + 1];
    const auto& t1 = src_translations_[i + 1];
    std::size_t p = 0;
    std::size_t q = 0;
    while (p < w0.size() || q < w1.size()) {
      if (q == w1.size() || (p < w0.size() && w0[p] < w1[q])) {
        hits += matched(t0[p++]);
      } else if (p == w0.size() || w1[q] < w0[p]) {
        hits += matched(t1[q++]);
      } else {
        hits += matched(t0[p]);
        ++p;
        ++q;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(denom);
}

double BeadScorer::cost(BeadKind kind, std::size_t i, std::size_t j) const {
  std::size_t l1 = 0;
  std::size_t l2 = 0;
  for (std::size_t k = 0; k < source_size(kind); ++k) l1 += src_[i + k].char_len;
  for (std::size_t k = 0; k < target_size(kind); ++k) l2 += tgt_[j + k].char_len;
  const double base = length_cost(l1, l2, kind, params_);
  if (!dict_ || !is_substitution(kind)) return base;
  return std::max(0.0, base - params_.dict_weight * similarity(kind, i, j));
}

std::vector<Bead> align_pass(std::span<const Sentence> src, std::span<const Sentence> tgt,
                             const AlignParams& params, const BilingualDictionary* dict) {
  const std::size_t n = src.size();
  const std::size_t m = tgt.size();
  if (n == 0 && m == 0) return {};
  const BeadScorer scorer(src, tgt, params, dict);

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::size_t width = m + 1;
  std::vector<double> best((n + 1) * width, kInf);
  std::vector<std::int8_t> back((n + 1) * width, -1);
  best[0] = 0.0;

  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      if (i == 0 && j == 0) continue;
      double cell = kInf;
      std::int8_t choice = -1;
      for (std::size_t k = 0; k < kBeadKinds.size(); ++k) {
        const BeadKind kind = kBeadKinds[k];
        const std::size_t a = source_size(kind);
        const std::size_t b = target_size(kind);
        if (i < a || j < b) continue;
        const double prev = best[(i - a) * width + (j - b)];
        if (prev == kInf) continue;
        const double c = prev + scorer.cost(kind, i - a, j - b);
        if (c < cell) {
          cell = c;
          choice = static_cast<std::int8_t>(k);
        }
      }
      best[i * width + j] = cell;
      back[i * width + j] = choice;
    }
  }

  std::vector<Bead> beads;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    const BeadKind kind = kBeadKinds[static_cast<std::size_t>(back[i * width + j])];
    const std::size_t a = source_size(kind);
    const std::size_t b = target_size(kind);
    beads.push_back({kind, {i - a, i}, {j - b, j}, scorer.cost(kind, i - a, j - b)});
    i -= a;
    j -= b;
  }
  std::reverse(beads.begin(), beads.end());
  return beads;
}

std::vector<Bead> BatchAlignment::local_beads(std::size_t d) const {
  std::vector<Bead> out(beads.begin() + static_cast<std::ptrdiff_t>(doc_begin[d]),
                        beads.begin() + static_cast<std::ptrdiff_t>(doc_begin[d + 1]));
  for (auto& b : out) {
    b.src.begin -= src_offset[d];
    b.src.end -= src_offset[d];
    b.tgt.begin -= tgt_offset[d];
    b.tgt.end -= tgt_offset[d];
  }
  return out;
}

namespace {

std::string join_span(std::span<const Sentence> s, Span span) {
  std::string out;
  for (std::size_t k = span.begin; k < span.end; ++k) {
    if (k > span.begin) out.push_back(' ');
    out += s[k].text;
  }
  return out;
}

void append_document(BatchAlignment& out, const DocumentBitext& doc,
                     const std::vector<Bead>& local, std::size_t& src_base,
                     std::size_t& tgt_base) {
  out.src_offset.push_back(src_base);
  out.tgt_offset.push_back(tgt_base);
  for (Bead b : local) {
    b.src.begin += src_base;
    b.src.end += src_base;
    b.tgt.begin += tgt_base;
    b.tgt.end += tgt_base;
    out.beads.push_back(b);
  }
  out.doc_begin.push_back(out.beads.size());
  src_base += doc.src.size();
  tgt_base += doc.tgt.size();
}

}  // namespace

BatchAlignment align_batch(std::span<const DocumentBitext> docs, const AlignParams& params,
                           const BilingualDictionary* dict, unsigned workers) {
  params.validate();
  std::vector<std::vector<Bead>> per_doc(docs.size());
  BilingualDictionary bootstrapped;
  const BilingualDictionary* active = dict;

  if (!dict) {
    parallel_for(docs.size(), workers, [&](std::size_t d) {
      per_doc[d] = align_pass(docs[d].src, docs[d].tgt, params, nullptr);
    });
    CooccurrenceCounts counts;
    for (std::size_t d = 0; d < docs.size(); ++d) {
      for (const auto& b : per_doc[d]) {
        if (!is_substitution(b.kind)) continue;
        counts.add_bead(join_span(docs[d].src, b.src), join_span(docs[d].tgt, b.tgt));
      }
    }
    bootstrapped = counts.build(params.dict_min_count, params.dict_min_assoc);
    active = &bootstrapped;
  }

  if (dict || !active->empty()) {
    parallel_for(docs.size(), workers, [&](std::size_t d) {
      per_doc[d] = align_pass(docs[d].src, docs[d].tgt, params, active);
    });
  }

  BatchAlignment out;
  out.chunks = 1;
  out.dictionary_sizes.push_back(active->size());
  out.doc_begin.push_back(0);
  std::size_t src_base = 0;
  std::size_t tgt_base = 0;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    append_document(out, docs[d], per_doc[d], src_base, tgt_base);
  }
  return out;
}

std::vector<Bead> align_document(std::span<const Sentence> src, std::span<const Sentence> tgt,
                                 const AlignParams& params, const BilingualDictionary* dict) {
  DocumentBitext doc{"", {src.begin(), src.end()}, {tgt.begin(), tgt.end()}};
  return align_batch(std::span<const DocumentBitext>(&doc, 1), params, dict).local_beads(0);
}

std::vector<Span> plan_chunks(std::span<const DocumentBitext> docs, std::size_t limit) {
  std::vector<Span> chunks;
  std::size_t first = 0;
  std::size_t n_src = 0;
  std::size_t n_tgt = 0;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const std::size_t s = docs[d].src.size();
    const std::size_t t = docs[d].tgt.size();
    if (s > limit || t > limit) {
      throw InputError("document '" + docs[d].doc_id + "' has " + std::to_string(std::max(s, t)) +
                       " sentences, above the chunk limit of " + std::to_string(limit));
    }
    if (d > first && (n_src + s > limit || n_tgt + t > limit)) {
      chunks.push_back({first, d});
      first = d;
      n_src = 0;
      n_tgt = 0;
    }
    n_src += s;
    n_tgt += t;
  }
  if (first < docs.size()) chunks.push_back({first, docs.size()});
  return chunks;
}

BatchAlignment chunked_align(std::span<const DocumentBitext> docs, const AlignParams& params,
                             const BilingualDictionary* dict, unsigned workers) {
  params.validate();
  const auto chunks = plan_chunks(docs, params.chunk_limit);
  if (chunks.size() <= 1) return align_batch(docs, params, dict, workers);

  BatchAlignment out;
  out.chunks = chunks.size();
  out.doc_begin.push_back(0);
  std::size_t src_base = 0;
  std::size_t tgt_base = 0;
  for (const Span& chunk : chunks) {
    const auto sub = docs.subspan(chunk.begin, chunk.size());
    const BatchAlignment part = align_batch(sub, params, dict, workers);
    out.dictionary_sizes.push_back(part.dictionary_sizes.front());
    for (std::size_t d = 0; d < sub.size(); ++d) {
      append_document(out, sub[d], part.local_beads(d), src_base, tgt_base);
    }
  }
  return out;
}

std::vector<AlignedPair> postprocess(std::span<const Bead> beads,
                                     std::span<const Sentence> src,
                                     std::span<const Sentence> tgt,
                                     const std::string& doc_id) {
  std::vector<AlignedPair> out;
  for (const auto& b : beads) {
    if (!is_substitution(b.kind)) continue;
    AlignedPair pair{doc_id, join_span(src, b.src), join_span(tgt, b.tgt), b.kind, b.cost};
    if (text::code_point_count(text::trim(pair.src_text)) < kMinPairChars ||
        text::code_point_count(text::trim(pair.tgt_text)) < kMinPairChars) {
      continue;
    }
    out.push_back(std::move(pair));
  }
  return out;
}

namespace {
const std::vector<std::string> kPairHeader = {"doc_id", "kind", "src_text", "tgt_text", "cost"};
const std::vector<std::string> kBitextHeader = {"doc_id", "side", "index", "text"};
}  // namespace

void write_pairs_tsv(const std::filesystem::path& path, const std::vector<AlignedPair>& pairs) {
  tsv::Writer w(path.string(), kPairHeader);
  for (const auto& p : pairs) {
    w.row({p.doc_id, std::string(to_string(p.kind)), p.src_text, p.tgt_text,
           fmt::format("{:.17g}", p.cost)});
  }
  w.close();
}

std::vector<AlignedPair> read_pairs_tsv(const std::filesystem::path& path) {
  tsv::Reader r(path.string(), kPairHeader);
  const std::size_t c_doc = r.column("doc_id"), c_kind = r.column("kind"),
                    c_src = r.column("src_text"), c_tgt = r.column("tgt_text"),
                    c_cost = r.column("cost");
  std::vector<AlignedPair> out;
  std::vector<std::string> f;
  while (r.next(f)) {
    AlignedPair p;
    p.doc_id = f[c_doc];
    const auto kind = parse_bead_kind(f[c_kind]);
    if (!kind) throw ParseError(path.string() + ": bad bead kind '" + f[c_kind] + "'", r.line());
    p.kind = *kind;
    p.src_text = f[c_src];
    p.tgt_text = f[c_tgt];
    try {
      p.cost = std::stod(f[c_cost]);
    } catch (const std::logic_error&) {
      throw ParseError(path.string() + ": bad cost '" + f[c_cost] + "'", r.line());
    }
    out.push_back(std::move(p));
  }
  return out;
}

void write_bitexts_tsv(const std::filesystem::path& path, const std::vector<DocumentBitext>& docs) {
  tsv::Writer w(path.string(), kBitextHeader);
  for (const auto& d : docs) {
    for (std::size_t i = 0; i < d.src.size(); ++i) w.row({d.doc_id, "pt", std::to_string(i), d.src[i].text});
    for (std::size_t i = 0; i < d.tgt.size(); ++i) w.row({d.doc_id, "en", std::to_string(i), d.tgt[i].text});
  }
  w.close();
}

std::vector<DocumentBitext> read_bitexts_tsv(const std::filesystem::path& path) {
  tsv::Reader r(path.string(), kBitextHeader);
  const std::size_t c_doc = r.column("doc_id"), c_side = r.column("side"),
                    c_text = r.column("text");
  std::vector<DocumentBitext> out;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::string> f;
  while (r.next(f)) {
    auto [it, fresh] = index.emplace(f[c_doc], out.size());
    if (fresh) out.push_back({f[c_doc], {}, {}});
    DocumentBitext& d = out[it->second];
    if (f[c_side] == "pt") {
      d.src.push_back(make_sentence(f[c_text]));
    } else if (f[c_side] == "en") {
      d.tgt.push_back(make_sentence(f[c_text]));
    } else {
      throw ParseError(path.string() + ": side must be pt or en, got '" + f[c_side] + "'", r.line());
    }
  }
  return out;
}

}  // namespace tdcorpus
