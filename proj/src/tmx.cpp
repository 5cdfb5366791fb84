#include "tdcorpus/tmx.h"

#include <spdlog/spdlog.h>

#include <fstream>
#include <memory>
#include <sstream>
#include <string_view>

#include "tdcorpus/error.h"
#include "tdcorpus/text.h"

namespace tdcorpus::tmx {

namespace {

// Minimal XML reader: elements, attributes, character data, CDATA,
// comments, processing instructions and a skipped DOCTYPE.
struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<std::unique_ptr<Element>> children;
  std::string text;  // character data directly inside this element
  std::size_t line = 0;

  const std::string* attr(std::string_view key) const {
    for (const auto& [k, v] : attrs) {
      if (k == key) return &v;
    }
    return nullptr;
  }
  const Element* child(std::string_view n) const {
    for (const auto& c : children) {
      if (c->name == n) return c.get();
    }
    return nullptr;
  }
};

bool xml_char(char32_t c) {
  return c == 0x9 || c == 0xA || c == 0xD || (c >= 0x20 && c <= 0xD7FF) ||
         (c >= 0xE000 && c <= 0xFFFD) || (c >= 0x10000 && c <= 0x10FFFF);
}

class XmlParser {
 public:
  explicit XmlParser(std::string_view doc) : s_(doc) {}

  std::unique_ptr<Element> parse() {
    if (!text::is_valid_utf8(s_)) fail("document is not valid UTF-8");
    if (s_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
    std::unique_ptr<Element> root;
    while (pos_ < s_.size()) {
      if (is_ws(s_[pos_])) {
        advance(1);
      } else if (starts("<?")) {
        skip_until("?>");
      } else if (starts("<!--")) {
        skip_until("-->");
      } else if (starts("<!DOCTYPE")) {
        skip_doctype();
      } else if (starts("<")) {
        if (root) fail("content after the root element");
        root = parse_element();
      } else {
        fail("text outside the root element");
      }
    }
    if (!root) fail("no root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("TMX: " + msg, line_); }

  static bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
  bool starts(std::string_view p) const { return s_.substr(pos_, p.size()) == p; }

  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && pos_ < s_.size(); ++k) {
      if (s_[pos_++] == '\n') ++line_;
    }
  }

  void skip_until(std::string_view end) {
    const auto found = s_.find(end, pos_);
    if (found == std::string_view::npos) fail("unterminated construct");
    advance(found + end.size() - pos_);
  }

  void skip_doctype() {
    int depth = 0;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      advance(1);
      if (c == '[') ++depth;
      if (c == ']') --depth;
      if (c == '>' && depth <= 0) return;
    }
    fail("unterminated DOCTYPE");
  }

  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
           c == ':' || static_cast<unsigned char>(c) >= 0x80;
  }

  std::string parse_name() {
    const std::size_t b = pos_;
    while (pos_ < s_.size() && name_char(s_[pos_])) ++pos_;
    if (pos_ == b) fail("expected a name");
    return std::string(s_.substr(b, pos_ - b));
  }

  void skip_ws() {
    while (pos_ < s_.size() && is_ws(s_[pos_])) advance(1);
  }

  void decode_entity(std::string& out) {
    const auto semi = s_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 12) fail("unterminated entity reference");
    const std::string_view ent = s_.substr(pos_ + 1, semi - pos_ - 1);
    if (ent == "amp") out.push_back('&');
    else if (ent == "lt") out.push_back('<');
    else if (ent == "gt") out.push_back('>');
    else if (ent == "quot") out.push_back('"');
    else if (ent == "apos") out.push_back('\'');
    else if (ent.size() > 1 && ent[0] == '#') {
      unsigned long cp = 0;
      const bool hex = ent[1] == 'x';
      const std::string digits(ent.substr(hex ? 2 : 1));
      if (digits.empty()) fail("empty character reference");
      try {
        std::size_t used = 0;
        cp = std::stoul(digits, &used, hex ? 16 : 10);
        if (used != digits.size()) fail("bad character reference");
      } catch (const std::logic_error&) {
        fail("bad character reference");
      }
      if (cp > 0x10FFFF || !xml_char(static_cast<char32_t>(cp))) fail("invalid character reference");
      text::append_utf8(out, static_cast<char32_t>(cp));
    } else {
      fail("unknown entity '&" + std::string(ent) + ";'");
    }
    advance(semi + 1 - pos_);
  }

  std::string parse_attr_value() {
    if (pos_ >= s_.size() || (s_[pos_] != '"' && s_[pos_] != '\'')) fail("expected quoted attribute value");
    const char q = s_[pos_];
    advance(1);
    std::string v;
    while (pos_ < s_.size() && s_[pos_] != q) {
      const char c = s_[pos_];
      if (c == '<') fail("'<' in attribute value");
      if (c == '&') {
        decode_entity(v);
        continue;
      }
      v.push_back(c);
      advance(1);
    }
    if (pos_ >= s_.size()) fail("unterminated attribute value");
    advance(1);
    return v;
  }

  std::unique_ptr<Element> parse_element() {
    auto el = std::make_unique<Element>();
    el->line = line_;
    advance(1);  // '<'
    el->name = parse_name();
    for (;;) {
      skip_ws();
      if (pos_ >= s_.size()) fail("unterminated start tag <" + el->name + ">");
      if (starts("/>")) {
        advance(2);
        return el;
      }
      if (s_[pos_] == '>') {
        advance(1);
        break;
      }
      std::string key = parse_name();
      skip_ws();
      if (pos_ >= s_.size() || s_[pos_] != '=') fail("expected '=' after attribute " + key);
      advance(1);
      skip_ws();
      if (el->attr(key)) fail("duplicate attribute " + key);
      el->attrs.emplace_back(std::move(key), parse_attr_value());
    }
    // content
    for (;;) {
      if (pos_ >= s_.size()) fail("element <" + el->name + "> is not closed");
      if (starts("</")) {
        advance(2);
        const std::string closing = parse_name();
        skip_ws();
        if (closing != el->name) fail("mismatched </" + closing + ">, expected </" + el->name + ">");
        if (pos_ >= s_.size() || s_[pos_] != '>') fail("malformed end tag");
        advance(1);
        return el;
      }
      if (starts("<!--")) {
        skip_until("-->");
      } else if (starts("<![CDATA[")) {
        advance(9);
        const auto end = s_.find("]]>", pos_);
        if (end == std::string_view::npos) fail("unterminated CDATA section");
        const std::size_t b = pos_;
        advance(end - pos_);
        el->text.append(s_.substr(b, end - b));
        advance(3);
      } else if (starts("<?")) {
        skip_until("?>");
      } else if (s_[pos_] == '<') {
        el->children.push_back(parse_element());
      } else if (s_[pos_] == '&') {
        decode_entity(el->text);
      } else {
        el->text.push_back(s_[pos_]);
        advance(1);
      }
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

void escape_into(std::string& out, std::string_view v, bool attribute) {
  for (char32_t cp : text::decode(v)) {
    if (!xml_char(cp)) {
      throw Error("text contains a character not allowed in XML (U+" +
                  fmt::format("{:04X}", static_cast<unsigned>(cp)) + ")");
    }
    switch (cp) {
      case U'&': out += "&amp;"; break;
      case U'<': out += "&lt;"; break;
      case U'>': out += "&gt;"; break;
      case U'\r': out += "&#13;"; break;
      case U'"':
        if (attribute) {
          out += "&quot;";
        } else {
          out.push_back('"');
        }
        break;
      case U'\n':
      case U'\t':
        if (attribute) {
          out += cp == U'\n' ? "&#10;" : "&#9;";
        } else {
          out.push_back(static_cast<char>(cp));
        }
        break;
      default: text::append_utf8(out, cp);
    }
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string primary_lang(const Element& tuv) {
  const std::string* lang = tuv.attr("xml:lang");
  if (!lang) lang = tuv.attr("lang");
  if (!lang) return {};
  std::string v = text::fold_case(*lang);
  if (auto dash = v.find_first_of("-_"); dash != std::string::npos) v.resize(dash);
  return v;
}

// Text of <seg>, including the character data of any inline elements.
void collect_text(const Element& el, std::string& out) {
  // Inline markup is outside the supported subset; its text is appended
  // after the element's own character data.
  out += el.text;
  for (const auto& c : el.children) collect_text(*c, out);
}

constexpr const char* kRequiredHeaderAttrs[] = {
    "creationtool", "creationtoolversion", "segtype", "o-tmf",
    "adminlang",    "srclang",             "datatype"};

}  // namespace

std::string to_tmx(const std::vector<AlignedPair>& pairs) {
  std::string out;
  out.reserve(256 + pairs.size() * 256);
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<tmx version=\"1.4\">\n";
  out += "  <header creationtool=\"tdcorpus\" creationtoolversion=\"1.0\" "
         "datatype=\"plaintext\" segtype=\"sentence\" adminlang=\"en\" "
         "srclang=\"pt\" o-tmf=\"tdcorpus\"/>\n";
  out += "  <body>\n";
  for (const auto& p : pairs) {
    out += "    <tu>\n      <prop type=\"doc_id\">";
    escape_into(out, p.doc_id, false);
    out += "</prop>\n      <prop type=\"bead_kind\">";
    out += to_string(p.kind);
    out += "</prop>\n      <tuv xml:lang=\"pt\"><seg>";
    escape_into(out, p.src_text, false);
    out += "</seg></tuv>\n      <tuv xml:lang=\"en\"><seg>";
    escape_into(out, p.tgt_text, false);
    out += "</seg></tuv>\n    </tu>\n";
  }
  out += "  </body>\n</tmx>\n";
  return out;
}

void write_tmx(const std::vector<AlignedPair>& pairs, const std::filesystem::path& path) {
  const std::string doc = to_tmx(pairs);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc;
  out.close();
  if (out.fail()) throw IoError("write failed: " + path.string());
}

ReadResult parse_tmx(const std::string& document) {
  const auto root = XmlParser(document).parse();
  if (root->name != "tmx") throw ParseError("TMX: root element is <" + root->name + ">", root->line);
  ReadResult result;
  const Element* body = root->child("body");
  if (!body) return result;
  for (const auto& tu : body->children) {
    if (tu->name != "tu") continue;
    AlignedPair pair;
    bool has_pt = false;
    bool has_en = false;
    std::string unknown;
    for (const auto& c : tu->children) {
      if (c->name == "prop") {
        const std::string* type = c->attr("type");
        if (!type) continue;
        if (*type == "doc_id") {
          pair.doc_id = c->text;
        } else if (*type == "bead_kind") {
          auto k = parse_bead_kind(c->text);
          if (!k) {
            result.warnings.push_back("line " + std::to_string(c->line) + ": unknown bead_kind '" +
                                      c->text + "', using 1-1");
          }
          pair.kind = k.value_or(BeadKind::k11);
        }
      } else if (c->name == "tuv") {
        const std::string lang = primary_lang(*c);
        const Element* seg = c->child("seg");
        std::string t;
        if (seg) collect_text(*seg, t);
        if (lang == kSourceLang) {
          pair.src_text = std::move(t);
          has_pt = true;
        } else if (lang == kTargetLang) {
          pair.tgt_text = std::move(t);
          has_en = true;
        } else {
          unknown = lang.empty() ? "(none)" : lang;
        }
      }
    }
    std::string problem;
    if (!unknown.empty()) problem = "unknown language variant '" + unknown + "'";
    else if (!has_pt || !has_en) problem = std::string("missing ") + (has_pt ? "en" : "pt") + " variant";
    if (!problem.empty()) {
      const std::string msg = "line " + std::to_string(tu->line) + ": unit skipped, " + problem;
      spdlog::warn("TMX {}", msg);
      result.warnings.push_back(msg);
      continue;
    }
    result.pairs.push_back(std::move(pair));
  }
  return result;
}

ReadResult read_tmx(const std::filesystem::path& path) {
  try {
    return parse_tmx(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

std::vector<std::string> validate_tmx_text(const std::string& document) {
  std::vector<std::string> problems;
  std::unique_ptr<Element> root;
  try {
    root = XmlParser(document).parse();
  } catch (const ParseError& e) {
    problems.push_back(e.what());
    return problems;
  }
  if (root->name != "tmx") {
    problems.push_back("root element is <" + root->name + ">, expected <tmx>");
    return problems;
  }
  if (!root->attr("version")) problems.push_back("<tmx> has no version attribute");
  const Element* header = root->child("header");
  if (!header) {
    problems.push_back("missing <header>");
  } else {
    for (const char* a : kRequiredHeaderAttrs) {
      if (!header->attr(a)) problems.push_back(std::string("<header> lacks required attribute ") + a);
    }
  }
  const Element* body = root->child("body");
  if (!body) {
    problems.push_back("missing <body>");
    return problems;
  }
  for (const auto& tu : body->children) {
    const std::string where = "line " + std::to_string(tu->line) + ": ";
    if (tu->name != "tu") {
      problems.push_back(where + "unexpected <" + tu->name + "> in <body>");
      continue;
    }
    std::size_t variants = 0;
    for (const auto& c : tu->children) {
      if (c->name != "tuv") continue;
      ++variants;
      if (!c->attr("xml:lang") && !c->attr("lang")) problems.push_back(where + "<tuv> without xml:lang");
      std::size_t segs = 0;
      for (const auto& g : c->children) segs += g->name == "seg";
      if (segs != 1) problems.push_back(where + "<tuv> must hold exactly one <seg>");
    }
    if (variants == 0) problems.push_back(where + "<tu> without <tuv>");
  }
  return problems;
}

std::vector<std::string> validate_tmx(const std::filesystem::path& path) {
  return validate_tmx_text(read_file(path));
}

}  // namespace tdcorpus::tmx
