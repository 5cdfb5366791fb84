#include "tdcorpus/quality_eval.h"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <fmt/format.h>

#include <cerrno>
#include <cstring>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>

#include "tdcorpus/error.h"
#include "tdcorpus/random.h"
#include "tdcorpus/text.h"
#include "tdcorpus/tsv.h"

namespace tdcorpus {

std::string_view to_string(Label l) {
  switch (l) {
    case Label::correct: return "correct";
    case Label::partial: return "partial";
    case Label::no_alignment: return "no_alignment";
    case Label::unlabeled: break;
  }
  return "unlabeled";
}

std::optional<Label> parse_label(std::string_view s) {
  for (Label l : {Label::unlabeled, Label::correct, Label::partial, Label::no_alignment}) {
    if (s == to_string(l)) return l;
  }
  return std::nullopt;
}

std::vector<EvalSample> sample_pairs(const std::vector<AlignedPair>& pairs, std::size_t n,
                                     std::uint64_t seed) {
  if (n > pairs.size()) {
    throw InputError(fmt::format("sample: {} requested from {} pairs", n, pairs.size()));
  }
  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.partial_shuffle(order, n);
  std::vector<EvalSample> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back({order[k], pairs[order[k]], Label::unlabeled});
  return out;
}

namespace {
const std::vector<std::string> kSampleHeader = {"sample_id", "doc_id", "bead_kind",
                                                "src_text",  "tgt_text", "cost"};
}

void write_samples(const std::filesystem::path& path, const std::vector<EvalSample>& samples) {
  tsv::Writer w(path.string(), kSampleHeader);
  for (const auto& s : samples) {
    w.row({std::to_string(s.sample_id), s.pair.doc_id, std::string(to_string(s.pair.kind)),
           s.pair.src_text, s.pair.tgt_text, fmt::format("{:.17g}", s.pair.cost)});
  }
  w.close();
}

std::vector<EvalSample> read_samples(const std::filesystem::path& path) {
  tsv::Reader r(path.string(), kSampleHeader);
  const std::size_t c_id = r.column("sample_id"), c_doc = r.column("doc_id"),
                    c_kind = r.column("bead_kind"), c_src = r.column("src_text"),
                    c_tgt = r.column("tgt_text"), c_cost = r.column("cost");
  std::vector<EvalSample> out;
  std::vector<std::string> f;
  while (r.next(f)) {
    EvalSample s;
    try {
      s.sample_id = std::stoull(f[c_id]);
      s.pair.cost = std::stod(f[c_cost]);
    } catch (const std::logic_error&) {
      throw ParseError(path.string() + ": bad number", r.line());
    }
    const auto kind = parse_bead_kind(f[c_kind]);
    if (!kind) throw ParseError(path.string() + ": bad bead kind '" + f[c_kind] + "'", r.line());
    s.pair.kind = *kind;
    s.pair.doc_id = f[c_doc];
    s.pair.src_text = f[c_src];
    s.pair.tgt_text = f[c_tgt];
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

void parse_log_line(std::string_view line, std::size_t lineno, const std::string& source,
                    std::map<std::size_t, Label>& labels) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  if (text::trim(line).empty()) return;
  const auto fields = text::split(line, '\t');
  if (fields.size() != 3) throw ParseError(source + ": expected 3 fields", lineno);
  const auto label = parse_label(fields[1]);
  if (!label || *label == Label::unlabeled) {
    throw ParseError(source + ": bad label '" + fields[1] + "'", lineno);
  }
  try {
    labels[std::stoull(fields[0])] = *label;
  } catch (const std::logic_error&) {
    throw ParseError(source + ": bad sample id '" + fields[0] + "'", lineno);
  }
}

}  // namespace

std::map<std::size_t, Label> read_label_log(const std::filesystem::path& path) {
  std::map<std::size_t, Label> labels;
  std::ifstream in(path, std::ios::binary);
  if (!in) return labels;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) parse_log_line(line, ++n, path.string(), labels);
  return labels;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

LabelLog::LabelLog(const std::filesystem::path& path, Clock clock)
    : clock_(clock ? std::move(clock) : Clock(utc_timestamp)) {
  fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) throw IoError("cannot open label log " + path.string() + ": " + std::strerror(errno));
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw IoError("label log " + path.string() + " is locked by another session");
  }
  labels_ = read_label_log(path);
}

LabelLog::~LabelLog() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

void LabelLog::append(std::size_t sample_id, Label label) {
  if (label == Label::unlabeled) throw InputError("cannot log an unlabeled answer");
  const std::string line = fmt::format("{}\t{}\t{}\n", sample_id, to_string(label), clock_());
  std::size_t done = 0;
  while (done < line.size()) {
    const ssize_t w = ::write(fd_, line.data() + done, line.size() - done);
    if (w < 0) {
      if (errno == EINTR) continue;
      throw IoError(std::string("label log write failed: ") + std::strerror(errno));
    }
    done += static_cast<std::size_t>(w);
  }
  ::fsync(fd_);
  labels_[sample_id] = label;
}

void apply_labels(std::vector<EvalSample>& samples, const std::map<std::size_t, Label>& labels) {
  for (auto& s : samples) {
    if (auto it = labels.find(s.sample_id); it != labels.end()) s.label = it->second;
  }
}

namespace {

// Next key from the stream; keys are separated by whitespace or commas.
std::optional<std::string> next_key(std::istream& in) {
  std::string key;
  char c;
  while (in.get(c)) {
    const bool sep = c == ',' || text::is_space(c);
    if (sep) {
      if (!key.empty()) return key;
      continue;
    }
    key.push_back(c);
  }
  if (!key.empty()) return key;
  return std::nullopt;
}

}  // namespace

AnnotateResult annotate(std::vector<EvalSample>& samples, std::istream& in, std::ostream& out,
                        LabelLog& log) {
  apply_labels(samples, log.labels());
  AnnotateResult result;
  std::size_t pending = 0;
  for (const auto& s : samples) pending += s.label == Label::unlabeled;
  std::size_t position = 0;
  for (auto& s : samples) {
    if (s.label != Label::unlabeled) continue;
    ++position;
    out << fmt::format("\n[{}/{}] sample {} (document {}, {})\n  pt: {}\n  en: {}\n", position,
                       pending, s.sample_id, s.pair.doc_id, to_string(s.pair.kind),
                       s.pair.src_text, s.pair.tgt_text);
    for (;;) {
      out << "label [c]orrect  [p]artial (segmentation cut the pair short)  [n]o alignment  "
             "[s]kip  [q]uit: "
          << std::flush;
      const auto key = next_key(in);
      if (!key || *key == "q") {
        result.quit = true;
        out << "\n";
        return result;
      }
      if (*key == "s") {
        ++result.skipped;
        break;
      }
      Label l = Label::unlabeled;
      if (*key == "c") l = Label::correct;
      if (*key == "p") l = Label::partial;
      if (*key == "n") l = Label::no_alignment;
      if (l == Label::unlabeled) {
        out << "unrecognized key '" << *key << "'\n";
        continue;
      }
      log.append(s.sample_id, l);
      s.label = l;
      ++result.answered;
      break;
    }
  }
  return result;
}

double EvalSummary::percent(Label l) const {
  const std::size_t total = labeled();
  if (total == 0) return 0;
  std::size_t n = 0;
  if (l == Label::correct) n = correct;
  if (l == Label::partial) n = partial;
  if (l == Label::no_alignment) n = no_alignment;
  return 100.0 * static_cast<double>(n) / static_cast<double>(total);
}

EvalSummary summarize(const std::vector<EvalSample>& samples) {
  EvalSummary s;
  for (const auto& x : samples) {
    switch (x.label) {
      case Label::correct: ++s.correct; break;
      case Label::partial: ++s.partial; break;
      case Label::no_alignment: ++s.no_alignment; break;
      case Label::unlabeled: ++s.unlabeled; break;
    }
  }
  if (s.labeled() == 0) throw InputError("summary: no labeled samples");
  return s;
}

std::string format_summary(const EvalSummary& s) {
  std::string out = fmt::format("labeled pairs: {} ({} unlabeled ignored)\n", s.labeled(), s.unlabeled);
  out += fmt::format("correct:      {:>6}  {:>6.2f}%\n", s.correct, s.percent(Label::correct));
  out += fmt::format("partial:      {:>6}  {:>6.2f}%\n", s.partial, s.percent(Label::partial));
  out += fmt::format("no alignment: {:>6}  {:>6.2f}%\n", s.no_alignment,
                     s.percent(Label::no_alignment));
  return out;
}

}  // namespace tdcorpus
