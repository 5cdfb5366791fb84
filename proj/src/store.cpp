#include "tdcorpus/store.h"

#include <sqlite3.h>

#include <fmt/format.h>

#include <map>
#include <set>
#include <system_error>

#include "tdcorpus/error.h"

namespace tdcorpus {

namespace {

constexpr const char* kSchema = R"sql(
CREATE TABLE documents (
  id             TEXT PRIMARY KEY NOT NULL,
  year           INTEGER,
  university     TEXT NOT NULL,
  title_native   TEXT NOT NULL,
  doc_type       TEXT NOT NULL,
  knowledge_area TEXT NOT NULL,
  url_pdf        TEXT NOT NULL
);
CREATE TABLE keywords (
  doc_id  TEXT NOT NULL REFERENCES documents(id),
  lang    TEXT NOT NULL,
  keyword TEXT NOT NULL
);
CREATE TABLE subareas (
  doc_id  TEXT NOT NULL REFERENCES documents(id),
  subarea TEXT NOT NULL
);
CREATE TABLE pairs (
  doc_id    TEXT NOT NULL REFERENCES documents(id),
  seq       INTEGER NOT NULL,
  src_text  TEXT NOT NULL,
  tgt_text  TEXT NOT NULL,
  bead_kind TEXT NOT NULL,
  cost      REAL NOT NULL,
  PRIMARY KEY (doc_id, seq)
);
CREATE INDEX keywords_doc ON keywords(doc_id);
CREATE INDEX subareas_doc ON subareas(doc_id);
CREATE INDEX documents_area ON documents(knowledge_area);
)sql";

class Db {
 public:
  Db(const std::filesystem::path& path, int flags) {
    if (sqlite3_open_v2(path.c_str(), &db_, flags, nullptr) != SQLITE_OK) {
      const std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
      sqlite3_close(db_);
      throw IoError("cannot open store " + path.string() + ": " + msg);
    }
  }
  ~Db() { sqlite3_close(db_); }
  Db(const Db&) = delete;
  Db& operator=(const Db&) = delete;

  sqlite3* get() const { return db_; }
  sqlite3* release() {
    sqlite3* d = db_;
    db_ = nullptr;
    return d;
  }

 private:
  sqlite3* db_ = nullptr;
};

void exec(sqlite3* db, const char* sql) {
  char* err = nullptr;
  if (sqlite3_exec(db, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    const std::string msg = err ? err : "unknown error";
    sqlite3_free(err);
    throw Error(std::string("store: ") + msg);
  }
}

class Stmt {
 public:
  Stmt(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &st_, nullptr) != SQLITE_OK) {
      throw Error(std::string("store: ") + sqlite3_errmsg(db));
    }
  }
  ~Stmt() { sqlite3_finalize(st_); }
  Stmt(const Stmt&) = delete;
  Stmt& operator=(const Stmt&) = delete;

  Stmt& bind(int i, const std::string& v) {
    check(sqlite3_bind_text(st_, i, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT));
    return *this;
  }
  Stmt& bind(int i, long long v) {
    check(sqlite3_bind_int64(st_, i, v));
    return *this;
  }
  Stmt& bind(int i, double v) {
    check(sqlite3_bind_double(st_, i, v));
    return *this;
  }
  Stmt& bind_null(int i) {
    check(sqlite3_bind_null(st_, i));
    return *this;
  }

  /// Runs an INSERT to completion and resets for the next row.
  void run() {
    const int rc = sqlite3_step(st_);
    if (rc != SQLITE_DONE) {
      const int ext = sqlite3_extended_errcode(db_);
      const std::string msg = sqlite3_errmsg(db_);
      sqlite3_reset(st_);
      if ((ext & 0xff) == SQLITE_CONSTRAINT) throw IntegrityError("store: " + msg);
      throw Error("store: " + msg);
    }
    sqlite3_reset(st_);
    sqlite3_clear_bindings(st_);
  }

  bool step() {
    const int rc = sqlite3_step(st_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw Error(std::string("store: ") + sqlite3_errmsg(db_));
  }

  std::string text(int col) const {
    const auto* p = sqlite3_column_text(st_, col);
    return p ? std::string(reinterpret_cast<const char*>(p),
                           static_cast<std::size_t>(sqlite3_column_bytes(st_, col)))
             : std::string();
  }
  long long integer(int col) const { return sqlite3_column_int64(st_, col); }
  double real(int col) const { return sqlite3_column_double(st_, col); }
  bool is_null(int col) const { return sqlite3_column_type(st_, col) == SQLITE_NULL; }

 private:
  void check(int rc) {
    if (rc != SQLITE_OK) throw Error(std::string("store: ") + sqlite3_errmsg(db_));
  }
  sqlite3* db_;
  sqlite3_stmt* st_ = nullptr;
};

AlignedPair pair_from_row(const Stmt& s) {
  AlignedPair p;
  p.doc_id = s.text(0);
  p.src_text = s.text(2);
  p.tgt_text = s.text(3);
  const auto kind = parse_bead_kind(s.text(4));
  if (!kind) throw Error("store: unknown bead kind '" + s.text(4) + "'");
  p.kind = *kind;
  p.cost = s.real(5);
  return p;
}

}  // namespace

void write_store(const std::vector<AlignedPair>& pairs,
                 const std::vector<DocumentRecord>& records,
                 const std::filesystem::path& path) {
  std::set<std::string_view> ids;
  for (const auto& r : records) {
    if (!ids.insert(r.id).second) throw IntegrityError("store: duplicate document id " + r.id);
  }
  for (const auto& p : pairs) {
    if (!ids.count(p.doc_id)) {
      throw IntegrityError("store: pair references unknown document id '" + p.doc_id + "'");
    }
  }

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  std::error_code ec;
  std::filesystem::remove(tmp, ec);
  try {
    {
      Db db(tmp, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE);
      exec(db.get(), "PRAGMA foreign_keys = ON; PRAGMA journal_mode = MEMORY; PRAGMA synchronous = OFF;");
      exec(db.get(), "BEGIN");
      exec(db.get(), kSchema);
      {
        Stmt doc(db.get(),
                 "INSERT INTO documents(id, year, university, title_native, doc_type, "
                 "knowledge_area, url_pdf) VALUES (?, ?, ?, ?, ?, ?, ?)");
        Stmt kw(db.get(), "INSERT INTO keywords(doc_id, lang, keyword) VALUES (?, ?, ?)");
        Stmt sub(db.get(), "INSERT INTO subareas(doc_id, subarea) VALUES (?, ?)");
        for (const auto& r : records) {
          doc.bind(1, r.id);
          if (r.year) {
            doc.bind(2, static_cast<long long>(r.year));
          } else {
            doc.bind_null(2);
          }
          doc.bind(3, r.university)
              .bind(4, r.title_native)
              .bind(5, std::string(to_string(r.doc_type)))
              .bind(6, r.knowledge_area)
              .bind(7, r.url_pdf)
              .run();
          for (const auto& k : r.keywords_native) kw.bind(1, r.id).bind(2, std::string("pt")).bind(3, k).run();
          for (const auto& k : r.keywords_foreign) kw.bind(1, r.id).bind(2, std::string("en")).bind(3, k).run();
          for (const auto& s : r.subareas) sub.bind(1, r.id).bind(2, s).run();
        }
        Stmt pair(db.get(),
                  "INSERT INTO pairs(doc_id, seq, src_text, tgt_text, bead_kind, cost) "
                  "VALUES (?, ?, ?, ?, ?, ?)");
        std::map<std::string_view, long long> seq;
        for (const auto& p : pairs) {
          pair.bind(1, p.doc_id)
              .bind(2, seq[p.doc_id]++)
              .bind(3, p.src_text)
              .bind(4, p.tgt_text)
              .bind(5, std::string(to_string(p.kind)))
              .bind(6, p.cost)
              .run();
        }
      }
      exec(db.get(), "COMMIT");
    }
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

StoreReader::StoreReader(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("store not found: " + path.string());
  Db db(path, SQLITE_OPEN_READONLY);
  db_ = db.release();
}

StoreReader::~StoreReader() { sqlite3_close(db_); }

namespace {
std::size_t count_rows(sqlite3* db, const char* sql) {
  Stmt s(db, sql);
  return s.step() ? static_cast<std::size_t>(s.integer(0)) : 0;
}
}  // namespace

std::size_t StoreReader::document_count() const {
  return count_rows(db_, "SELECT COUNT(*) FROM documents");
}
std::size_t StoreReader::pair_count() const { return count_rows(db_, "SELECT COUNT(*) FROM pairs"); }
std::size_t StoreReader::keyword_count() const {
  return count_rows(db_, "SELECT COUNT(*) FROM keywords");
}

std::optional<DocumentRecord> StoreReader::document(const std::string& id) const {
  Stmt s(db_,
         "SELECT id, year, university, title_native, doc_type, knowledge_area, url_pdf "
         "FROM documents WHERE id = ?");
  s.bind(1, id);
  if (!s.step()) return std::nullopt;
  DocumentRecord r;
  r.id = s.text(0);
  r.year = s.is_null(1) ? 0 : static_cast<int>(s.integer(1));
  r.university = s.text(2);
  r.title_native = s.text(3);
  r.doc_type = parse_doc_type(s.text(4));
  r.knowledge_area = s.text(5);
  r.url_pdf = s.text(6);
  Stmt kw(db_, "SELECT lang, keyword FROM keywords WHERE doc_id = ? ORDER BY rowid");
  kw.bind(1, id);
  while (kw.step()) {
    (kw.text(0) == "pt" ? r.keywords_native : r.keywords_foreign).push_back(kw.text(1));
  }
  Stmt sub(db_, "SELECT subarea FROM subareas WHERE doc_id = ? ORDER BY rowid");
  sub.bind(1, id);
  while (sub.step()) r.subareas.push_back(sub.text(0));
  return r;
}

std::vector<AlignedPair> StoreReader::all_pairs() const {
  Stmt s(db_,
         "SELECT doc_id, seq, src_text, tgt_text, bead_kind, cost FROM pairs "
         "ORDER BY doc_id, seq");
  std::vector<AlignedPair> out;
  while (s.step()) out.push_back(pair_from_row(s));
  return out;
}

std::vector<AlignedPair> StoreReader::pairs_for_area(const std::string& knowledge_area) const {
  Stmt s(db_,
         "SELECT p.doc_id, p.seq, p.src_text, p.tgt_text, p.bead_kind, p.cost "
         "FROM pairs p JOIN documents d ON d.id = p.doc_id "
         "WHERE d.knowledge_area = ? ORDER BY p.doc_id, p.seq");
  s.bind(1, knowledge_area);
  std::vector<AlignedPair> out;
  while (s.step()) out.push_back(pair_from_row(s));
  return out;
}

std::string StoreReader::dump() const {
  std::string out;
  {
    Stmt s(db_,
           "SELECT id, year, university, title_native, doc_type, knowledge_area, url_pdf "
           "FROM documents ORDER BY id");
    while (s.step()) {
      out += fmt::format("documents|{}|{}|{}|{}|{}|{}|{}\n", s.text(0),
                         s.is_null(1) ? std::string("NULL") : std::to_string(s.integer(1)),
                         s.text(2), s.text(3), s.text(4), s.text(5), s.text(6));
    }
  }
  {
    Stmt s(db_, "SELECT doc_id, lang, keyword FROM keywords ORDER BY doc_id, rowid");
    while (s.step()) out += fmt::format("keywords|{}|{}|{}\n", s.text(0), s.text(1), s.text(2));
  }
  {
    Stmt s(db_, "SELECT doc_id, subarea FROM subareas ORDER BY doc_id, rowid");
    while (s.step()) out += fmt::format("subareas|{}|{}\n", s.text(0), s.text(1));
  }
  {
    Stmt s(db_,
           "SELECT doc_id, seq, src_text, tgt_text, bead_kind, cost FROM pairs "
           "ORDER BY doc_id, seq");
    while (s.step()) {
      out += fmt::format("pairs|{}|{}|{}|{}|{}|{:.17g}\n", s.text(0), s.integer(1), s.text(2),
                         s.text(3), s.text(4), s.real(5));
    }
  }
  return out;
}

}  // namespace tdcorpus
