#include <doctest.h>

#include <cmath>
#include <fstream>

#include "fixtures.h"
#include "oracle.h"
#include "synth.h"
#include "tdcorpus/aligner.h"
#include "tdcorpus/error.h"

using namespace tdcorpus;

namespace {

std::vector<Sentence> sized(std::initializer_list<std::size_t> lengths) {
  Rng rng(77);
  std::vector<Sentence> out;
  for (auto l : lengths) out.push_back(synth::random_sentence(rng, l));
  return out;
}

std::vector<BeadKind> kinds(const std::vector<Bead>& beads) {
  std::vector<BeadKind> out;
  for (const auto& b : beads) out.push_back(b.kind);
  return out;
}

Bead transposed(const Bead& b) { return {transpose(b.kind), b.tgt, b.src, b.cost}; }

AlignParams transposed(AlignParams p) {
  std::swap(p.prior(BeadKind::k21), p.prior(BeadKind::k12));
  std::swap(p.prior(BeadKind::k10), p.prior(BeadKind::k01));
  p.c = 1.0 / p.c;
  return p;
}

}  // namespace

TEST_CASE("documented alignment examples") {
  const AlignParams p;
  SUBCASE("equal lengths give 1-1 beads") {
    const auto s = sized({80, 60, 120});
    const auto t = sized({80, 60, 120});
    CHECK(kinds(align_pass(s, t, p)) ==
          std::vector<BeadKind>{BeadKind::k11, BeadKind::k11, BeadKind::k11});
  }
  SUBCASE("merged target sentence") {
    const auto s = sized({100, 50, 50});
    const auto t = sized({100, 100});
    const auto beads = align_pass(s, t, p);
    CHECK(kinds(beads) == std::vector<BeadKind>{BeadKind::k11, BeadKind::k21});
    const auto bf = oracle::brute_force(s, t, p);
    CHECK(bf.best == beads);
    CHECK(total_cost(beads) == doctest::Approx(bf.best_cost).epsilon(1e-12));
  }
  SUBCASE("empty source") {
    const auto beads = align_pass({}, sized({30, 40}), p);
    CHECK(kinds(beads) == std::vector<BeadKind>{BeadKind::k01, BeadKind::k01});
    CHECK(beads[1].tgt == Span{1, 2});
  }
  SUBCASE("both empty") { CHECK(align_pass({}, {}, p).empty()); }
  SUBCASE("one sentence each side, two-pass") {
    const auto beads = align_document(sized({40}), sized({45}), p);
    REQUIRE(beads.size() == 1);
    CHECK(beads[0].kind == BeadKind::k11);
  }
}

TEST_CASE("dynamic program matches exhaustive enumeration") {
  Rng rng(2024);
  AlignParams p;
  for (int it = 0; it < 300; ++it) {
    const auto doc = synth::random_document(rng, 5, 5, 150);
    const auto beads = align_pass(doc.src, doc.tgt, p);
    const auto bf = oracle::brute_force(doc.src, doc.tgt, p);
    REQUIRE(is_valid_cover(beads, doc.src.size(), doc.tgt.size()));
    CHECK(total_cost(beads) == doctest::Approx(bf.best_cost).epsilon(1e-12));
    CHECK(oracle::cover_cost(beads, doc.src, doc.tgt, p) ==
          doctest::Approx(bf.best_cost).epsilon(1e-12));
    if (bf.near_optimal == 1) CHECK(beads == bf.best);
  }
}

TEST_CASE("dictionary-aware costs match the oracle") {
  auto corpus = synth::planted_corpus(5, 30, 2, 5, 60);
  BilingualDictionary dict;
  for (std::size_t k = 0; k < corpus.lexicon.size(); k += 2) {
    dict.add(corpus.lexicon[k].first, corpus.lexicon[k].second, 1.0);
  }
  AlignParams p;
  p.dict_weight = 3.0;
  for (const auto& pd : corpus.docs) {
    const auto& d = pd.doc;
    if (d.src.size() > 5 || d.tgt.size() > 5) continue;
    const BeadScorer scorer(d.src, d.tgt, p, &dict);
    for (std::size_t i = 0; i < d.src.size(); ++i) {
      for (std::size_t j = 0; j < d.tgt.size(); ++j) {
        for (BeadKind k : kBeadKinds) {
          if (i + source_size(k) > d.src.size() || j + target_size(k) > d.tgt.size()) continue;
          if (!is_substitution(k)) continue;
          std::vector<std::string> st, tt;
          for (std::size_t a = 0; a < source_size(k); ++a) st.push_back(d.src[i + a].text);
          for (std::size_t b = 0; b < target_size(k); ++b) tt.push_back(d.tgt[j + b].text);
          CHECK(scorer.similarity(k, i, j) ==
                doctest::Approx(oracle::similarity(st, tt, dict)).epsilon(1e-12));
        }
      }
    }
    const auto beads = align_pass(d.src, d.tgt, p, &dict);
    const auto bf = oracle::brute_force(d.src, d.tgt, p, &dict);
    CHECK(total_cost(beads) == doctest::Approx(bf.best_cost).epsilon(1e-12));
  }
}

TEST_CASE("cover validator") {
  std::string why;
  const std::vector<Bead> good = {{BeadKind::k11, {0, 1}, {0, 1}, 0.1},
                                  {BeadKind::k21, {1, 3}, {1, 2}, 3.0}};
  CHECK(is_valid_cover(good, 3, 2));
  CHECK_FALSE(is_valid_cover(good, 4, 2, &why));
  CHECK_FALSE(why.empty());
  const std::vector<Bead> gap = {{BeadKind::k11, {0, 1}, {0, 1}, 0.1},
                                 {BeadKind::k11, {2, 3}, {1, 2}, 0.1}};
  CHECK_FALSE(is_valid_cover(gap, 3, 2));
  const std::vector<Bead> wrong_shape = {{BeadKind::k11, {0, 2}, {0, 1}, 0.1}};
  CHECK_FALSE(is_valid_cover(wrong_shape, 2, 1));
}

TEST_CASE("adding an entry for a chosen 1-1 bead keeps it chosen") {
  // Every sentence carries a marker word found nowhere else, so a new
  // entry between two markers only rewards beads spanning both sentences.
  // dict_weight stays below the smallest substitution cost, so no bead
  // reaches the zero floor.
  Rng rng(31);
  AlignParams p;
  p.dict_weight = 0.1;
  int checked = 0;
  for (int it = 0; it < 200; ++it) {
    auto doc = synth::random_document(rng, 6, 20, 160);
    for (std::size_t i = 0; i < doc.src.size(); ++i) {
      doc.src[i] = make_sentence(doc.src[i].text + " src" + std::to_string(i) + "x");
    }
    for (std::size_t j = 0; j < doc.tgt.size(); ++j) {
      doc.tgt[j] = make_sentence(doc.tgt[j].text + " tgt" + std::to_string(j) + "x");
    }
    BilingualDictionary dict;
    for (int k = 0; k < 5 && !doc.src.empty() && !doc.tgt.empty(); ++k) {
      const auto sw = word_types(doc.src[rng.below(doc.src.size())].text);
      const auto tw = word_types(doc.tgt[rng.below(doc.tgt.size())].text);
      const auto& s = sw[rng.below(sw.size())];
      const auto& t = tw[rng.below(tw.size())];
      if (s.rfind("src", 0) != 0 && t.rfind("tgt", 0) != 0) dict.add(s, t, 1.0);
    }
    const auto before = align_pass(doc.src, doc.tgt, p, &dict);
    for (const auto& b : before) {
      if (b.kind != BeadKind::k11) continue;
      BilingualDictionary more = dict;
      more.add("src" + std::to_string(b.src.begin) + "x", "tgt" + std::to_string(b.tgt.begin) + "x",
               1.0);
      const auto after = align_pass(doc.src, doc.tgt, p, &more);
      CHECK(std::find_if(after.begin(), after.end(), [&](const Bead& a) {
              return a.kind == BeadKind::k11 && a.src == b.src && a.tgt == b.tgt;
            }) != after.end());
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("swapping sides transposes a unique optimum at c = 1") {
  Rng rng(8);
  const AlignParams p;
  int unique = 0;
  for (int it = 0; it < 300; ++it) {
    const auto doc = synth::random_document(rng, 5, 5, 150);
    const auto bf = oracle::brute_force(doc.src, doc.tgt, p);
    if (bf.near_optimal != 1) continue;
    ++unique;
    const auto forward = align_pass(doc.src, doc.tgt, p);
    const auto backward = align_pass(doc.tgt, doc.src, transposed(p));
    REQUIRE(forward.size() == backward.size());
    for (std::size_t k = 0; k < forward.size(); ++k) {
      const Bead t = transposed(backward[k]);
      CHECK(t.kind == forward[k].kind);
      CHECK(t.src == forward[k].src);
      CHECK(t.tgt == forward[k].tgt);
      CHECK(t.cost == doctest::Approx(forward[k].cost).epsilon(1e-12));
    }
  }
  CHECK(unique > 200);
}

TEST_CASE("alignment is deterministic across runs and worker counts") {
  const auto corpus = synth::planted_corpus(11, 40, 5, 15, 80);
  std::vector<DocumentBitext> docs;
  for (const auto& d : corpus.docs) docs.push_back(d.doc);
  const auto a = align_batch(docs, AlignParams{}, nullptr, 1);
  const auto b = align_batch(docs, AlignParams{}, nullptr, 1);
  const auto c = align_batch(docs, AlignParams{}, nullptr, 4);
  CHECK(a.beads == b.beads);
  CHECK(a.beads == c.beads);
  CHECK(a.doc_begin == c.doc_begin);
}

TEST_CASE("two-pass protocol") {
  const auto corpus = synth::planted_corpus(12, 30, 5, 12, 80);
  std::vector<DocumentBitext> docs;
  for (const auto& d : corpus.docs) docs.push_back(d.doc);
  const AlignParams p;

  SUBCASE("supplied dictionary equals align_pass with it") {
    BilingualDictionary dict;
    for (const auto& [s, t] : corpus.lexicon) dict.add(s, t, 0.8);
    const auto batch = align_batch(docs, p, &dict);
    CHECK(batch.dictionary_sizes == std::vector<std::size_t>{dict.size()});
    for (std::size_t d = 0; d < docs.size(); ++d) {
      CHECK(batch.local_beads(d) == align_pass(docs[d].src, docs[d].tgt, p, &dict));
    }
  }
  SUBCASE("bootstrapped dictionary is built from pass-1 beads of all documents") {
    std::vector<BeadText> texts;
    for (const auto& doc : docs) {
      for (const auto& b : align_pass(doc.src, doc.tgt, p)) {
        BeadText t{b.kind, "", ""};
        for (auto i = b.src.begin; i < b.src.end; ++i) t.src_text += doc.src[i].text + " ";
        for (auto j = b.tgt.begin; j < b.tgt.end; ++j) t.tgt_text += doc.tgt[j].text + " ";
        texts.push_back(t);
      }
    }
    const auto dict = build_dictionary(texts, p.dict_min_count, p.dict_min_assoc);
    CHECK(dict.size() > 0);
    const auto batch = align_batch(docs, p);
    CHECK(batch.dictionary_sizes.front() == dict.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
      CHECK(batch.local_beads(d) == align_pass(docs[d].src, docs[d].tgt, p, &dict));
    }
  }
  SUBCASE("identical-length lists: pass 2 equals pass 1") {
    Rng rng(3);
    std::vector<DocumentBitext> same;
    for (int d = 0; d < 20; ++d) {
      DocumentBitext doc;
      const auto n = 1 + rng.below(8);
      for (std::size_t i = 0; i < n; ++i) {
        const auto len = 20 + rng.below(150);
        doc.src.push_back(synth::random_sentence(rng, len));
        doc.tgt.push_back(synth::random_sentence(rng, len));
      }
      same.push_back(doc);
    }
    const auto batch = align_batch(same, p);
    for (std::size_t d = 0; d < same.size(); ++d) {
      const auto pass1 = align_pass(same[d].src, same[d].tgt, p);
      const auto pass2 = batch.local_beads(d);
      CHECK(kinds(pass2) == kinds(pass1));
      for (std::size_t k = 0; k < pass1.size(); ++k) {
        CHECK(pass2[k].src == pass1[k].src);
        CHECK(pass2[k].tgt == pass1[k].tgt);
      }
    }
  }
}

TEST_CASE("chunked alignment") {
  Rng rng(40);
  std::vector<DocumentBitext> docs;
  for (int d = 0; d < 120; ++d) {
    auto doc = synth::random_document(rng, 6, 10, 120);
    doc.doc_id = "d" + std::to_string(d);
    docs.push_back(doc);
  }
  AlignParams p;
  p.chunk_limit = 100;

  const auto chunks = plan_chunks(docs, p.chunk_limit);
  CHECK(chunks.size() >= 3);
  std::size_t next = 0;
  for (const auto& c : chunks) {
    CHECK(c.begin == next);
    next = c.end;
    std::size_t s = 0, t = 0;
    for (auto d = c.begin; d < c.end; ++d) {
      s += docs[d].src.size();
      t += docs[d].tgt.size();
    }
    CHECK(s <= p.chunk_limit);
    CHECK(t <= p.chunk_limit);
  }
  CHECK(next == docs.size());

  const auto out = chunked_align(docs, p);
  CHECK(out.chunks == chunks.size());
  std::size_t ns = 0, nt = 0;
  for (const auto& d : docs) {
    ns += d.src.size();
    nt += d.tgt.size();
  }
  std::string why;
  CHECK_MESSAGE(is_valid_cover(out.beads, ns, nt, &why), why);

  // Each chunk is an independent batch.
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    const auto sub = std::span<const DocumentBitext>(docs).subspan(chunks[c].begin, chunks[c].size());
    const auto part = align_batch(sub, p);
    for (std::size_t d = 0; d < sub.size(); ++d) {
      CHECK(out.local_beads(chunks[c].begin + d) == part.local_beads(d));
    }
  }

  // Under the limit the batch path is taken unchanged.
  p.chunk_limit = 10000;
  CHECK(chunked_align(docs, p).beads == align_batch(docs, p).beads);

  DocumentBitext huge;
  huge.doc_id = "huge";
  for (int i = 0; i < 101; ++i) huge.src.push_back(make_sentence("frase longa."));
  CHECK_THROWS_AS(plan_chunks(std::vector<DocumentBitext>{huge}, 100), InputError);
}

TEST_CASE("postprocess") {
  const std::vector<Sentence> src = {make_sentence("a b."), make_sentence("c d."),
                                     make_sentence("sozinha."), make_sentence("ok, fim.")};
  const std::vector<Sentence> tgt = {make_sentence("a b c d."), make_sentence("lone."),
                                     make_sentence("ab")};
  const std::vector<Bead> beads = {{BeadKind::k21, {0, 2}, {0, 1}, 1.0},
                                   {BeadKind::k10, {2, 3}, {1, 1}, 2.0},
                                   {BeadKind::k01, {3, 3}, {1, 2}, 2.0},
                                   {BeadKind::k11, {3, 4}, {2, 3}, 0.5}};
  const auto pairs = postprocess(beads, src, tgt, "42");
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].src_text == "a b. c d.");
  CHECK(pairs[0].tgt_text == "a b c d.");
  CHECK(pairs[0].doc_id == "42");
  CHECK(pairs[0].kind == BeadKind::k21);
  CHECK(pairs[0].cost == 1.0);
}

TEST_CASE("stage files round-trip") {
  fixtures::TempDir dir("align");
  const std::vector<AlignedPair> pairs = {
      {"1", "um\ttab", "one\ttab", BeadKind::k11, 0.11650687737847148},
      {"1", "linha\nnova", "new\\line", BeadKind::k12, 3.25},
      {"2", "ç é ã", "plain", BeadKind::k22, 1e-300}};
  write_pairs_tsv(dir / "p.tsv", pairs);
  CHECK(read_pairs_tsv(dir / "p.tsv") == pairs);

  std::vector<DocumentBitext> docs = {{"b", {make_sentence("x y.")}, {}},
                                      {"a", {make_sentence("um.")}, {make_sentence("one."), make_sentence("two.")}}};
  write_bitexts_tsv(dir / "b.tsv", docs);
  const auto back = read_bitexts_tsv(dir / "b.tsv");
  REQUIRE(back.size() == 2);
  CHECK(back[0].doc_id == "b");
  CHECK(back[0].src == docs[0].src);
  CHECK(back[1].tgt == docs[1].tgt);

  std::ofstream(dir / "bad.tsv") << "doc_id\tkind\tsrc_text\ttgt_text\tcost\n1\t3-3\ta\tb\t0\n";
  CHECK_THROWS_AS(read_pairs_tsv(dir / "bad.tsv"), ParseError);
}
