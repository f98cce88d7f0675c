#pragma once

// Brute-force reference computations, written without the library's
// partition or kernel code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "roughsel/table.hpp"

namespace oracle {

using roughsel::Code;
using roughsel::DecisionTable;

// Sample i is in POS_attrs(D) iff every sample indiscernible from it on attrs
// shares its decision.
inline std::size_t positive_count(const DecisionTable& t, const std::vector<std::size_t>& attrs) {
  const std::size_t n = t.universe_size();
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool consistent = true;
    for (std::size_t j = 0; j < n && consistent; ++j) {
      bool same = true;
      for (auto a : attrs) same = same && t.code(i, a) == t.code(j, a);
      if (same && t.decision()[i] != t.decision()[j]) consistent = false;
    }
    pos += consistent;
  }
  return pos;
}

inline std::vector<std::size_t> mask_to_set(std::uint32_t mask) {
  std::vector<std::size_t> s;
  for (std::size_t a = 0; a < 32; ++a)
    if (mask >> a & 1u) s.push_back(a);
  return s;
}

// Every subset with full dependency from which no single attribute can be
// removed, by plain enumeration.
inline std::vector<std::vector<std::size_t>> all_reducts(const DecisionTable& t) {
  const std::size_t m = t.num_attributes();
  std::vector<std::size_t> all(m);
  for (std::size_t a = 0; a < m; ++a) all[a] = a;
  const std::size_t full = positive_count(t, all);
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    const auto s = mask_to_set(mask);
    if (positive_count(t, s) != full) continue;
    bool minimal = true;
    for (std::size_t k = 0; k < s.size() && minimal; ++k) {
      auto smaller = s;
      smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(k));
      if (positive_count(t, smaller) == full) minimal = false;
    }
    if (minimal) out.push_back(s);
  }
  return out;
}

inline DecisionTable random_table(std::mt19937_64& rng, std::size_t max_attrs = 8, std::size_t max_samples = 24,
                                  Code max_codes = 3, Code max_classes = 3) {
  std::uniform_int_distribution<std::size_t> na(1, max_attrs), ns(1, max_samples);
  std::uniform_int_distribution<Code> nl(1, max_codes), nc(1, max_classes);
  const std::size_t attrs = na(rng), samples = ns(rng);
  std::vector<Code> levels(attrs);
  for (auto& l : levels) l = nl(rng);
  const Code classes = nc(rng);
  std::vector<std::vector<Code>> rows(samples, std::vector<Code>(attrs));
  std::vector<Code> decision(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    for (std::size_t a = 0; a < attrs; ++a) rows[i][a] = std::uniform_int_distribution<Code>(0, levels[a] - 1)(rng);
    decision[i] = std::uniform_int_distribution<Code>(0, classes - 1)(rng);
  }
  // recode decisions so they are contiguous from 0
  std::vector<Code> map(classes, classes);
  Code next = 0;
  for (auto& d : decision) {
    if (map[d] == classes) map[d] = next++;
    d = map[d];
  }
  return DecisionTable::from_codes(rows, decision);
}

// Minimum within-cluster sum of squares over all contiguous 2-splits of the
// sorted values; returns the two means.
inline std::pair<double, double> best_two_split(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double best = INFINITY;
  std::pair<double, double> means{};
  for (std::size_t cut = 1; cut < v.size(); ++cut) {
    double m0 = 0, m1 = 0;
    for (std::size_t i = 0; i < cut; ++i) m0 += v[i];
    for (std::size_t i = cut; i < v.size(); ++i) m1 += v[i];
    m0 /= double(cut);
    m1 /= double(v.size() - cut);
    double ss = 0;
    for (std::size_t i = 0; i < v.size(); ++i) ss += std::pow(v[i] - (i < cut ? m0 : m1), 2);
    if (ss < best) {
      best = ss;
      means = {m0, m1};
    }
  }
  return means;
}

}  // namespace oracle
