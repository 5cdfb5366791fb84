#include <doctest.h>

#include <fstream>

#include "fixtures.h"
#include "tdcorpus/error.h"
#include "tdcorpus/random.h"
#include "tdcorpus/segmenter.h"
#include "tdcorpus/text.h"

using namespace tdcorpus;

namespace {

const Segmenter& pt() {
  static const Segmenter s = Segmenter::for_language("pt", fixtures::bundled());
  return s;
}

std::vector<std::string> texts(const std::vector<Sentence>& ss) {
  std::vector<std::string> out;
  for (const auto& s : ss) out.push_back(s.text);
  return out;
}

using V = std::vector<std::string>;

}  // namespace

TEST_CASE("lowercase abstract splits at periods without a capital follower") {
  const std::string first =
      "a coleta de dados se deu por meio de entrevista semiestruturada com 12 familiares "
      "cuidadores de crianças atendidas em pronto-socorro pediátrico de um hospital de ensino.";
  const std::string second =
      "os dados foram submetidos à análise de conteúdo temático conforme bardin (2011).";
  CHECK(texts(pt().segment(first + " " + second)) == V{first, second});
}

TEST_CASE("basic cases") {
  CHECK(texts(pt().segment("x.")) == V{"x."});
  CHECK(texts(pt().segment("o valor foi 3.14 metros. fim.")) == V{"o valor foi 3.14 metros.", "fim."});
  CHECK(pt().segment("").empty());
  CHECK(pt().segment("   ").empty());
  CHECK(texts(pt().segment("sem pontuação final")) == V{"sem pontuação final"});
}

TEST_CASE("question and exclamation marks, runs and closing quotes") {
  CHECK(texts(pt().segment("funciona? sim! ok.")) == V{"funciona?", "sim!", "ok."});
  CHECK(texts(pt().segment("sério?! sim.")) == V{"sério?!", "sim."});
  CHECK(texts(pt().segment("ele disse \"fim.\" depois saiu.")) ==
        V{"ele disse \"fim.\"", "depois saiu."});
  CHECK(texts(pt().segment("espera... continua.")) == V{"espera...", "continua."});
}

TEST_CASE("guards") {
  SUBCASE("digit-flanked periods") {
    CHECK(pt().segment("foram 10.000 pacientes. fim.").size() == 2);
    CHECK(pt().segment("versão 2.0.1 instalada.").size() == 1);
  }
  SUBCASE("abbreviations") {
    CHECK(texts(pt().segment("o dr. silva chegou. fim.")) == V{"o dr. silva chegou.", "fim."});
    CHECK(pt().segment("segundo silva et al. os dados mostram isso.").size() == 1);
    CHECK(pt().segment("ver fig. 3 e cap. 2 para detalhes.").size() == 1);
    CHECK(pt().segment("métodos, e.g. entrevistas, foram usados.").size() == 1);
    CHECK(pt().segment("(cf. anexo) e o resto.").size() == 1);
    // Only whole tokens match: "radar." is not "dr.".
    CHECK(pt().segment("o radar. fim.").size() == 2);
  }
  SUBCASE("single-letter tokens") {
    CHECK(pt().segment("proposto por j. r. silva em estudo anterior.").size() == 1);
  }
  SUBCASE("ordinal indicators") {
    CHECK(pt().segment("ficou em 1º. lugar na seleção.").size() == 1);
    CHECK(pt().segment("no 2ª. fase do estudo.").size() == 1);
  }
  SUBCASE("short parenthesized spans") {
    CHECK(pt().segment("o teste (ver nota. e anexo!) passou.").size() == 1);
    const std::string long_span =
        "(esta observação entre parênteses é bem longa. e continua por mais palavras) fim.";
    CHECK(pt().segment(long_span).size() == 2);
  }
}

TEST_CASE("semicolon boundary is behind a flag") {
  CHECK(pt().segment("primeiro; segundo.").size() == 1);
  const Segmenter with(pt().abbreviations(), true);
  CHECK(texts(with.segment("primeiro; segundo.")) == V{"primeiro;", "segundo."});
}

TEST_CASE("sentence lengths") {
  const auto s = make_sentence("ação de  saúde.");
  CHECK(s.char_len == 12);
  CHECK(s.token_count == 3);
}

TEST_CASE("abbreviation files ignore comments and case") {
  fixtures::TempDir dir("abbrev");
  std::ofstream(dir / "x.txt") << "# comment\nDR.\n\n  etc.  # trailing\n";
  CHECK(read_abbreviations(dir / "x.txt") == V{"dr.", "etc."});
  CHECK_THROWS_AS(read_abbreviations(dir / "missing.txt"), IoError);
}

namespace {

// Random normalized text built from pieces that exercise every rule.
std::string random_text(Rng& rng) {
  static const std::vector<std::string> pieces = {
      "dados", "análise", "3.14", "10.000", "dr.", "et al.", "fim.", "ok!", "sim?", "(ver",
      "nota.)", "\"citação.\"", "e.g.", "x.", "1º.", "j.", "(a. b)", ";", "...", "isto.", "y",
      "((", "))", "(curto.)", "«texto.»", "p.", "etc."};
  std::string s;
  const std::size_t n = 1 + rng.below(25);
  for (std::size_t i = 0; i < n; ++i) s += (s.empty() ? "" : " ") + pieces[rng.below(pieces.size())];
  return text::clean_whitespace(s);
}

// Offsets (in code points) of the short parenthesized spans, matched as
// innermost pairs.
std::vector<std::pair<std::size_t, std::size_t>> short_spans(const std::u32string& s) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == U'(') stack.push_back(i);
    if (s[i] == U')' && !stack.empty()) {
      if (i - stack.back() + 1 <= 40) out.emplace_back(stack.back(), i);
      stack.pop_back();
    }
  }
  return out;
}

}  // namespace

TEST_CASE("property: lossless, idempotent, no boundary inside short parentheses") {
  Rng rng(2024);
  for (int t = 0; t < 2000; ++t) {
    const std::string input = random_text(rng);
    for (bool semicolon : {false, true}) {
      const Segmenter seg(pt().abbreviations(), semicolon);
      const auto out = seg.segment(input);
      CHECK(text::join(texts(out), " ") == input);
      std::size_t offset = 0;
      const auto spans = short_spans(text::decode(input));
      for (std::size_t k = 0; k < out.size(); ++k) {
        const auto& s = out[k];
        CHECK_FALSE(s.text.empty());
        CHECK(s.text == std::string(text::trim(s.text)));
        CHECK(s.char_len > 0);
        CHECK(texts(seg.segment(s.text)) == V{s.text});
        offset += text::code_point_count(s.text);
        if (k + 1 < out.size()) {
          for (const auto& [b, e] : spans) CHECK_FALSE((b < offset && offset <= e));
        }
        offset += 1;
      }
      CHECK(texts(seg.segment(input)) == texts(out));
    }
  }
}
