#include "tdcorpus/mt_eval.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "tdcorpus/error.h"
#include "tdcorpus/random.h"
#include "tdcorpus/text.h"

namespace tdcorpus {

SplitIndices split_indices(std::size_t corpus_size, const SplitSpec& spec) {
  if (spec.dev_size + spec.test_size >= corpus_size) {
    throw InputError(fmt::format("split: dev ({}) + test ({}) must be smaller than the corpus ({})",
                                 spec.dev_size, spec.test_size, corpus_size));
  }
  std::vector<std::size_t> order(corpus_size);
  for (std::size_t i = 0; i < corpus_size; ++i) order[i] = i;
  Rng rng(spec.seed);
  rng.partial_shuffle(order, spec.dev_size + spec.test_size);

  SplitIndices out;
  const auto dev_end = order.begin() + static_cast<std::ptrdiff_t>(spec.dev_size);
  const auto test_end = dev_end + static_cast<std::ptrdiff_t>(spec.test_size);
  out.dev.assign(order.begin(), dev_end);
  out.test.assign(dev_end, test_end);
  out.train.assign(test_end, order.end());
  std::sort(out.dev.begin(), out.dev.end());
  std::sort(out.test.begin(), out.test.end());
  std::sort(out.train.begin(), out.train.end());
  return out;
}

Split split(const std::vector<AlignedPair>& pairs, const SplitSpec& spec) {
  const SplitIndices idx = split_indices(pairs.size(), spec);
  Split out;
  auto pick = [&](const std::vector<std::size_t>& ids, std::vector<AlignedPair>& dst) {
    dst.reserve(ids.size());
    for (std::size_t i : ids) dst.push_back(pairs[i]);
  };
  pick(idx.train, out.train);
  pick(idx.dev, out.dev);
  pick(idx.test, out.test);
  return out;
}

Tokens tokenize(std::string_view line) {
  Tokens out;
  for (auto t : text::split_whitespace(line)) out.emplace_back(t);
  return out;
}

void BleuStats::add(const Tokens& hyp, const Tokens& ref) {
  ++sentences_;
  hyp_len_ += hyp.size();
  ref_len_ += ref.size();
  for (int n = 1; n <= kBleuOrder; ++n) {
    const std::size_t un = static_cast<std::size_t>(n);
    if (hyp.size() < un) continue;
    std::map<std::vector<std::string_view>, std::uint64_t> ref_counts;
    for (std::size_t i = 0; i + un <= ref.size(); ++i) {
      ++ref_counts[std::vector<std::string_view>(ref.begin() + static_cast<std::ptrdiff_t>(i),
                                                 ref.begin() + static_cast<std::ptrdiff_t>(i + un))];
    }
    std::map<std::vector<std::string_view>, std::uint64_t> hyp_counts;
    for (std::size_t i = 0; i + un <= hyp.size(); ++i) {
      ++hyp_counts[std::vector<std::string_view>(hyp.begin() + static_cast<std::ptrdiff_t>(i),
                                                 hyp.begin() + static_cast<std::ptrdiff_t>(i + un))];
    }
    Precision& p = counts_[static_cast<std::size_t>(n - 1)];
    p.total += hyp.size() - un + 1;
    for (const auto& [gram, c] : hyp_counts) {
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) p.matches += std::min(c, it->second);
    }
  }
}

void BleuStats::merge(const BleuStats& other) {
  for (std::size_t n = 0; n < counts_.size(); ++n) {
    counts_[n].matches += other.counts_[n].matches;
    counts_[n].total += other.counts_[n].total;
  }
  hyp_len_ += other.hyp_len_;
  ref_len_ += other.ref_len_;
  sentences_ += other.sentences_;
}

BleuReport BleuStats::report(bool smooth) const {
  BleuReport r;
  r.precisions = counts_;
  r.hyp_len = hyp_len_;
  r.ref_len = ref_len_;
  if (hyp_len_ == 0) {
    r.brevity_penalty = 0;
  } else if (hyp_len_ > ref_len_) {
    r.brevity_penalty = 1;
  } else {
    r.brevity_penalty =
        std::exp(1.0 - static_cast<double>(ref_len_) / static_cast<double>(hyp_len_));
  }
  double log_sum = 0;
  for (int n = 0; n < kBleuOrder; ++n) {
    const Precision& p = counts_[static_cast<std::size_t>(n)];
    double value = p.value();
    if (smooth && n > 0) {
      value = static_cast<double>(p.matches + 1) / static_cast<double>(p.total + 1);
    }
    if (value <= 0) {
      r.score = 0;
      return r;
    }
    log_sum += std::log(value) / kBleuOrder;
  }
  r.score = r.brevity_penalty * std::exp(log_sum);
  return r;
}

BleuReport bleu(const std::vector<Tokens>& hypotheses, const std::vector<Tokens>& references,
                bool smooth) {
  if (hypotheses.size() != references.size()) {
    throw InputError(fmt::format("bleu: {} hypotheses but {} references", hypotheses.size(),
                                 references.size()));
  }
  if (hypotheses.empty()) throw InputError("bleu: empty corpus");
  BleuStats stats;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) stats.add(hypotheses[i], references[i]);
  return stats.report(smooth);
}

std::string format_report(const BleuReport& r, bool percent) {
  const double scale = percent ? 100.0 : 1.0;
  std::string out = fmt::format("BLEU = {:.{}f}\n", r.score * scale, percent ? 2 : 4);
  for (std::size_t n = 0; n < r.precisions.size(); ++n) {
    const Precision& p = r.precisions[n];
    out += fmt::format("p{} = {}/{} = {:.4f}\n", n + 1, p.matches, p.total, p.value() * scale);
  }
  out += fmt::format("BP = {:.4f}\nhyp_len = {}\nref_len = {}\n", r.brevity_penalty, r.hyp_len,
                     r.ref_len);
  return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace tdcorpus
