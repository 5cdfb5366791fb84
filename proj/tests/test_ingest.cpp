#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fixtures.h"
#include "tdcorpus/error.h"
#include "tdcorpus/ingest.h"
#include "tdcorpus/random.h"
#include "tdcorpus/text.h"

using namespace tdcorpus;

namespace {

ColumnMap simple_map() {
  ColumnMap m;
  m.columns = {{"id", "ID"},
               {"year", "YEAR"},
               {"title_native", "TITLE"},
               {"doc_type", "TYPE"},
               {"keywords_native", "KW"},
               {"knowledge_area", "AREA"},
               {"abstract_native", "PT"},
               {"abstract_foreign", "EN"}};
  return m;
}

IngestResult parse(const std::string& csv, const ColumnMap& m = simple_map()) {
  std::istringstream in(csv);
  return parse_records(in, m, "test.csv");
}

DocumentRecord rec(std::string id, std::string pt, std::string en) {
  DocumentRecord r;
  r.id = std::move(id);
  r.abstract_native = std::move(pt);
  r.abstract_foreign = std::move(en);
  return r;
}

}  // namespace

TEST_CASE("three complete rows come back in file order") {
  const auto r = parse(
      "ID,YEAR,TITLE,TYPE,KW,AREA,PT,EN\n"
      "1,2013,T1,DOUTORADO,a;b,X,pt one,en one\n"
      "2,2014,T2,MESTRADO,c,Y,pt two,en two\n"
      "3,2015,T3,OUTRO,,Z,pt three,en three\n");
  REQUIRE(r.records.size() == 3);
  CHECK(r.records[0].id == "1");
  CHECK(r.records[1].id == "2");
  CHECK(r.records[2].id == "3");
  CHECK(r.records[0].year == 2013);
  CHECK(r.records[0].doc_type == DocType::thesis);
  CHECK(r.records[1].doc_type == DocType::dissertation);
  CHECK(r.records[2].doc_type == DocType::other);
  CHECK(r.records[0].keywords_native == std::vector<std::string>{"a", "b"});
  CHECK(r.records[2].keywords_native.empty());
  CHECK(r.rows == 3);
  CHECK(r.skipped_rows == 0);
}

TEST_CASE("empty foreign abstract is kept at parse time") {
  const auto r = parse("ID,YEAR,TITLE,TYPE,KW,AREA,PT,EN\n1,2013,T,x,,A,resumo,\n");
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].abstract_foreign.empty());
}

TEST_CASE("quoted delimiter, doubled quote and line break survive") {
  const auto r = parse(
      "ID,YEAR,TITLE,TYPE,KW,AREA,PT,EN\n"
      "7,2016,\"saúde, educação e \"\"cuidado\"\"\",x,,A,\"linha um\nlinha dois\",en\n");
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].title_native == "saúde, educação e \"cuidado\"");
  CHECK(r.records[0].abstract_native == "linha um\nlinha dois");
}

TEST_CASE("missing mapped column is a configuration error") {
  CHECK_THROWS_AS(parse("ID,YEAR,TITLE,TYPE,KW,AREA,PT\n1,2,3,4,5,6,7\n"), ConfigError);
}

TEST_CASE("unreadable file is an I/O error") {
  CHECK_THROWS_AS(parse_records("/nonexistent/file.csv", simple_map()), IoError);
}

TEST_CASE("malformed rows are skipped with a warning") {
  const auto r = parse(
      "ID,YEAR,TITLE,TYPE,KW,AREA,PT,EN\n"
      "1,2013,T,x,,A,pt,en\n"
      "2,2013,T,x,,A,pt\n"
      "3,2013,\"bad\"x,x,,A,pt,en\n"
      ",2013,T,x,,A,pt,en\n"
      "5,2013,T,x,,A,pt,en\n");
  CHECK(r.records.size() == 2);
  CHECK(r.skipped_rows == 3);
  CHECK(r.warnings.size() == 3);
  CHECK(r.warnings[0].line == 3);
}

TEST_CASE("duplicate ids keep the first occurrence") {
  const auto r = parse(
      "ID,YEAR,TITLE,TYPE,KW,AREA,PT,EN\n"
      "1,2013,first,x,,A,pt,en\n"
      "1,2014,second,x,,A,pt,en\n");
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].title_native == "first");
  CHECK(r.duplicate_ids == 1);
}

TEST_CASE("invalid utf-8 is skipped unless latin-1 fallback is enabled") {
  const std::string csv = "ID,YEAR,TITLE,TYPE,KW,AREA,PT,EN\n1,2013,an\xE1lise,x,,A,pt,en\n";
  CHECK(parse(csv).records.empty());
  auto m = simple_map();
  m.latin1_fallback = true;
  const auto r = parse(csv, m);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].title_native == "análise");
}

TEST_CASE("unparseable year becomes zero") {
  const auto r = parse("ID,YEAR,TITLE,TYPE,KW,AREA,PT,EN\n1,n/a,T,x,,A,pt,en\n");
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].year == 0);
}

TEST_CASE("column map validation") {
  ColumnMap m = simple_map();
  m.columns.erase("abstract_foreign");
  CHECK_THROWS_AS(m.validate(), ConfigError);
  m = simple_map();
  m.columns["no_such_field"] = "X";
  CHECK_THROWS_AS(m.validate(), ConfigError);
}

TEST_CASE("bundled catalog column map loads") {
  const auto m = ColumnMap::load(fixtures::bundled() / "columns" / "tdc_2013_2016.conf");
  CHECK(m.delimiter == ';');
  CHECK(m.latin1_fallback);
  CHECK(m.columns.at("abstract_foreign") == "DS_ABSTRACT");
  const auto r = parse_records(fixtures::data("tdc_fixture.csv"), m);
  CHECK(r.records.size() == 10);
  CHECK(r.records[2].title_native == "DETECÇÃO DE FALHAS EM ROLAMENTOS; UMA ABORDAGEM HÍBRIDA");
  CHECK(r.records[2].keywords_native == std::vector<std::string>{"FALHAS", "ROLAMENTOS", "WAVELET"});
}

TEST_CASE("filter_bilingual") {
  SUBCASE("drops a record with an empty foreign abstract") {
    const auto out = filter_bilingual({rec("a", "pt", "en"), rec("b", "pt", "")});
    REQUIRE(out.size() == 1);
    CHECK(out[0].id == "a");
  }
  SUBCASE("identity on an all-bilingual list") {
    const std::vector<DocumentRecord> in = {rec("a", "x", "y"), rec("b", "z", "w")};
    CHECK(filter_bilingual(in) == in);
  }
  SUBCASE("whitespace-only abstract counts as empty") {
    const std::vector<DocumentRecord> in = {rec("a", " \t\r\n ", "en"), rec("b", "pt", "\n")};
    // Oracle: trim, then test for emptiness.
    std::vector<DocumentRecord> expected;
    for (const auto& r : in) {
      auto blank = [](const std::string& s) {
        return s.find_first_not_of(" \t\r\n") == std::string::npos;
      };
      if (!blank(r.abstract_native) && !blank(r.abstract_foreign)) expected.push_back(r);
    }
    CHECK(filter_bilingual(in) == expected);
    CHECK(expected.empty());
  }
}

TEST_CASE("normalize") {
  CHECK(normalize(rec("1", "Análise\r\nde Dados", "x")).abstract_native == "análise de dados");
  CHECK(normalize(rec("1", "A\n\nB", "x")).abstract_native == "a b");
  const auto lower = rec("1", "já normalizado", "already normal");
  CHECK(normalize(lower) == lower);
  DocumentRecord r = rec("ID-9", "X", "Y");
  r.url_pdf = "http://Example.org/A.pdf";
  r.title_native = "TÍTULO";
  r.keywords_foreign = {"  Health  ", "CARE"};
  const auto n = normalize(r);
  CHECK(n.id == "ID-9");
  CHECK(n.url_pdf == "http://Example.org/A.pdf");
  CHECK(n.title_native == "título");
  CHECK(n.keywords_foreign == std::vector<std::string>{"health", "care"});
}

TEST_CASE("property: filter and normalize are idempotent, normalized text has no CR/LF or capitals") {
  Rng rng(11);
  const std::string alphabet[] = {"A", "b", "Ç", "é", " ", "\r", "\n", "\t", "ß", "Z", "  "};
  for (int t = 0; t < 300; ++t) {
    std::vector<DocumentRecord> recs;
    for (int k = 0; k < 5; ++k) {
      std::string pt, en;
      for (std::uint64_t i = rng.below(12); i > 0; --i) pt += alphabet[rng.below(11)];
      for (std::uint64_t i = rng.below(12); i > 0; --i) en += alphabet[rng.below(11)];
      recs.push_back(rec(std::to_string(k), pt, en));
    }
    const auto once = filter_bilingual(recs);
    CHECK(filter_bilingual(once) == once);
    for (const auto& r : recs) {
      const auto n = normalize(r);
      CHECK(normalize(n) == n);
      CHECK(n.abstract_native.find_first_of("\r\n") == std::string::npos);
      CHECK(text::fold_case(n.abstract_native) == n.abstract_native);
      CHECK(text::fold_case(n.abstract_foreign) == n.abstract_foreign);
    }
  }
}

TEST_CASE("property: write_records then parse_records round-trips") {
  fixtures::TempDir dir("ingest");
  ColumnMap m = ColumnMap::load(fixtures::bundled() / "columns" / "tdc_2013_2016.conf");
  const auto original = parse_records(fixtures::data("tdc_fixture.csv"), m).records;
  write_records(dir / "out.csv", original, m);
  CHECK(parse_records(dir / "out.csv", m).records == original);

  Rng rng(5);
  std::vector<DocumentRecord> random;
  const std::string pieces[] = {"a", "\"", ";", ",", "\n", "ç", " x ", "\\", "\t"};
  for (int i = 0; i < 200; ++i) {
    DocumentRecord r;
    r.id = "r" + std::to_string(i);
    r.year = 2013 + i % 4;
    r.doc_type = static_cast<DocType>(i % 3);
    for (int k = 0; k < 8; ++k) r.abstract_native += pieces[rng.below(9)];
    for (int k = 0; k < 8; ++k) r.title_native += pieces[rng.below(9)];
    r.abstract_foreign = "en " + std::to_string(i);
    r.keywords_native = {"kw" + std::to_string(i), "k w"};
    random.push_back(r);
  }
  write_records(dir / "random.csv", random, m);
  CHECK(parse_records(dir / "random.csv", m).records == random);
}

TEST_CASE("record stage file round-trips") {
  fixtures::TempDir dir("records");
  DocumentRecord r = rec("1", "a\tb", "c\nd");
  r.keywords_native = {"x;y", "z"};
  r.subareas = {"s"};
  r.year = 2015;
  write_records_tsv(dir / "r.tsv", {r});
  CHECK(read_records_tsv(dir / "r.tsv") == std::vector<DocumentRecord>{r});
}

TEST_CASE("parse_files merges in file order and dedups across files") {
  fixtures::TempDir dir("files");
  const std::string head = "ID,YEAR,TITLE,TYPE,KW,AREA,PT,EN\n";
  std::ofstream(dir / "a.csv") << head << "1,2013,a,x,,A,p,e\n2,2013,a,x,,A,p,e\n";
  std::ofstream(dir / "b.csv") << head << "2,2013,b,x,,A,p,e\n3,2013,b,x,,A,p,e\n";
  const auto r = parse_files({dir / "a.csv", dir / "b.csv"}, simple_map(), 2);
  REQUIRE(r.records.size() == 3);
  CHECK(r.records[1].title_native == "a");
  CHECK(r.records[2].id == "3");
  CHECK(r.duplicate_ids == 1);
}
