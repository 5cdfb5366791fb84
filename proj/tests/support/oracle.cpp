#include "oracle.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "tdcorpus/text.h"

namespace oracle {

using tdcorpus::Bead;
using tdcorpus::BeadKind;
using tdcorpus::Sentence;

namespace {

struct Shape {
  BeadKind kind;
  std::size_t a, b;
  double prior;
};

std::vector<Shape> shapes(const tdcorpus::AlignParams& p) {
  return {{BeadKind::k11, 1, 1, p.priors[0]}, {BeadKind::k21, 2, 1, p.priors[1]},
          {BeadKind::k12, 1, 2, p.priors[2]}, {BeadKind::k22, 2, 2, p.priors[3]},
          {BeadKind::k10, 1, 0, p.priors[4]}, {BeadKind::k01, 0, 1, p.priors[5]}};
}

std::set<std::string> types(const std::vector<std::string>& texts, std::size_t& tokens) {
  std::set<std::string> out;
  for (const auto& t : texts) {
    for (auto tok : tdcorpus::text::split_whitespace(t)) {
      ++tokens;
      auto w = tdcorpus::text::strip_punctuation(tok);
      if (!w.empty()) out.insert(w);
    }
  }
  return out;
}

double scored(const std::vector<Sentence>& src, const std::vector<Sentence>& tgt, std::size_t i,
              std::size_t j, const Shape& s, const tdcorpus::AlignParams& p,
              const tdcorpus::BilingualDictionary* dict) {
  std::size_t l1 = 0, l2 = 0;
  std::vector<std::string> st, tt;
  for (std::size_t k = 0; k < s.a; ++k) {
    l1 += src[i + k].char_len;
    st.push_back(src[i + k].text);
  }
  for (std::size_t k = 0; k < s.b; ++k) {
    l2 += tgt[j + k].char_len;
    tt.push_back(tgt[j + k].text);
  }
  double c = bead_cost(l1, l2, s.kind, p);
  if (dict && s.a > 0 && s.b > 0) c = std::max(0.0, c - p.dict_weight * similarity(st, tt, *dict));
  return c;
}

}  // namespace

double bead_cost(std::size_t l1, std::size_t l2, BeadKind kind, const tdcorpus::AlignParams& p) {
  double prior = 0;
  std::size_t a = 0, b = 0;
  for (const auto& s : shapes(p)) {
    if (s.kind == kind) {
      prior = s.prior;
      a = s.a;
      b = s.b;
    }
  }
  const double x1 = static_cast<double>(l1);
  const double x2 = static_cast<double>(l2);
  if (a > 0 && b > 0) {
    const double mean = (x1 + x2) / 2.0;
    const double delta = mean > 0 ? (x2 - x1 * p.c) / std::sqrt(mean * p.s2) : 0.0;
    // 2 (1 - Phi(|d|)) = erfc(|d| / sqrt 2)
    return -std::log(prior) - std::log(std::erfc(std::fabs(delta) / std::sqrt(2.0)));
  }
  const double l = a > 0 ? x1 : x2;
  const double z = l / std::sqrt(l * p.s2 + 1.0);
  const double tail = -std::log(std::erfc(z / std::sqrt(2.0)));
  return -std::log(prior) + std::min(4.5, tail);
}

double similarity(const std::vector<std::string>& src_texts,
                  const std::vector<std::string>& tgt_texts,
                  const tdcorpus::BilingualDictionary& dict) {
  std::size_t ns = 0, nt = 0;
  const auto s = types(src_texts, ns);
  const auto t = types(tgt_texts, nt);
  const std::size_t denom = std::max(ns, nt);
  if (denom == 0) return 0;
  std::size_t hits = 0;
  for (const auto& w : s) {
    for (const auto& v : t) {
      if (dict.contains(w, v)) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(denom);
}

BruteForce brute_force(const std::vector<Sentence>& src, const std::vector<Sentence>& tgt,
                       const tdcorpus::AlignParams& params,
                       const tdcorpus::BilingualDictionary* dict) {
  BruteForce r;
  r.best_cost = INFINITY;
  std::vector<Bead> path;
  std::vector<double> finals;
  const auto all = shapes(params);
  std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t i, std::size_t j,
                                                                    double acc) {
    if (i == src.size() && j == tgt.size()) {
      ++r.covers;
      finals.push_back(acc);
      if (acc < r.best_cost) {
        r.best_cost = acc;
        r.best = path;
      }
      return;
    }
    for (const auto& s : all) {
      if (i + s.a > src.size() || j + s.b > tgt.size()) continue;
      const double c = scored(src, tgt, i, j, s, params, dict);
      path.push_back({s.kind, {i, i + s.a}, {j, j + s.b}, c});
      walk(i + s.a, j + s.b, acc + c);
      path.pop_back();
    }
  };
  walk(0, 0, 0.0);
  for (double f : finals) r.near_optimal += std::fabs(f - r.best_cost) <= 1e-9;
  if (finals.empty()) r.best_cost = 0;
  return r;
}

double cover_cost(const std::vector<Bead>& beads, const std::vector<Sentence>& src,
                  const std::vector<Sentence>& tgt, const tdcorpus::AlignParams& params,
                  const tdcorpus::BilingualDictionary* dict) {
  double total = 0;
  for (const auto& b : beads) {
    for (const auto& s : shapes(params)) {
      if (s.kind == b.kind) total += scored(src, tgt, b.src.begin, b.tgt.begin, s, params, dict);
    }
  }
  return total;
}

}  // namespace oracle
