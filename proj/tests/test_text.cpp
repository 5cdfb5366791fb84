#include <doctest.h>

#include "fixtures.h"
#include "tdcorpus/config.h"
#include "tdcorpus/error.h"
#include "tdcorpus/text.h"
#include "tdcorpus/tsv.h"

#include <fstream>

using namespace tdcorpus;

TEST_CASE("utf8 validation and latin1 fallback") {
  CHECK(text::is_valid_utf8("análise"));
  CHECK_FALSE(text::is_valid_utf8("an\xE1lise"));
  CHECK(text::latin1_to_utf8("an\xE1lise") == "análise");
  CHECK(text::decode("a\xFF") == std::u32string(U"a�"));
  CHECK(text::code_point_count("ação") == 4);
}

TEST_CASE("non-space length counts code points outside whitespace") {
  CHECK(text::non_space_length("a b  c") == 3);
  CHECK(text::non_space_length("ção é") == 4);
  CHECK(text::non_space_length("   ") == 0);
}

TEST_CASE("full case folding") {
  CHECK(text::fold_case("ANÁLISE DE DADOS") == "análise de dados");
  CHECK(text::fold_case("ÇÃO") == "ção");
  CHECK(text::fold_case("Straße") == "strasse");
  CHECK(text::fold_case("already lower") == "already lower");
}

TEST_CASE("whitespace cleanup") {
  CHECK(text::clean_whitespace("  a\r\n\tb  ") == "a b");
  CHECK(text::clean_whitespace("a\x01" "b") == "a b");
  CHECK(text::clean_whitespace("a b") == "a b");
  CHECK(text::clean_whitespace("") == "");
}

TEST_CASE("splitting helpers") {
  CHECK(text::split_whitespace("  a  bb c ").size() == 3);
  CHECK(text::split("a;;b", ';') == std::vector<std::string>{"a", "", "b"});
  CHECK(text::strip_punctuation("(2011).") == "2011");
  CHECK(text::strip_punctuation("«saúde»") == "saúde");
  CHECK(text::strip_punctuation("...") == "");
  CHECK(text::join({"a", "b"}, ", ") == "a, b");
}

TEST_CASE("tsv escaping round-trips every special character") {
  const std::string nasty = "tab\there\nnew\\line\rcr";
  CHECK(tsv::unescape(tsv::escape(nasty)) == nasty);
  CHECK(tsv::escape(nasty).find('\t') == std::string::npos);
  CHECK(tsv::escape(nasty).find('\n') == std::string::npos);
}

TEST_CASE("tsv writer and reader") {
  fixtures::TempDir dir("tsv");
  const auto path = (dir / "x.tsv").string();
  {
    tsv::Writer w(path, {"a", "b"});
    w.row({"1", "x\ty"});
    w.row({"2", ""});
    CHECK_THROWS_AS(w.row({"only one"}), Error);
    w.close();
  }
  tsv::Reader r(path, {"b"});
  CHECK(r.column("a") == 0);
  std::vector<std::string> f;
  REQUIRE(r.next(f));
  CHECK(f[1] == "x\ty");
  REQUIRE(r.next(f));
  CHECK(f[1] == "");
  CHECK_FALSE(r.next(f));
  CHECK_THROWS_AS(tsv::Reader(path, {"missing"}), ParseError);
}

TEST_CASE("tsv reader reports the line of a short row") {
  fixtures::TempDir dir("tsv");
  const auto path = dir / "bad.tsv";
  std::ofstream(path) << "a\tb\n1\t2\n3\n";
  tsv::Reader r(path.string(), {});
  std::vector<std::string> f;
  CHECK(r.next(f));
  try {
    r.next(f);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("config sections, types and relative paths") {
  const auto cfg = Config::parse(
      "[align]\nc = 1.5\nchunk_limit = 200\n[segment]\nsplit_on_semicolon = yes\n"
      "[input]\ncolumn_map = maps/x.conf\n",
      "/base");
  CHECK(cfg.get_double("align.c", 0) == doctest::Approx(1.5));
  CHECK(cfg.get_int("align.chunk_limit", 0) == 200);
  CHECK(cfg.get_bool("segment.split_on_semicolon", false));
  CHECK(cfg.get_path("input.column_map") == std::filesystem::path("/base/maps/x.conf"));
  CHECK(cfg.get_or("missing.key", "d") == "d");
  CHECK(cfg.keys("align") == std::vector<std::string>{"c", "chunk_limit"});
  CHECK_THROWS_AS(Config::parse("[a]\nx = notanumber\n").get_double("a.x", 0), ConfigError);
}
