#include "roughsel/roughset.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <stdexcept>

namespace roughsel {

namespace {

void sort_blocks(std::vector<IndexSet>& blocks) {
  std::sort(blocks.begin(), blocks.end(),
            [](const IndexSet& a, const IndexSet& b) { return a.front() < b.front(); });
}

std::vector<bool> membership(const IndexSet& target, std::size_t universe) {
  std::vector<bool> in(universe, false);
  for (auto x : target) {
    if (x >= universe) throw std::out_of_range("target index outside the universe");
    in[x] = true;
  }
  return in;
}

IndexSet to_index_set(const std::vector<bool>& in) {
  IndexSet out;
  for (std::size_t i = 0; i < in.size(); ++i)
    if (in[i]) out.push_back(i);
  return out;
}

}  // namespace

Partition partition_by(const DecisionTable& table, std::span<const std::size_t> attrs) {
  for (auto a : attrs)
    if (a >= table.num_attributes()) throw std::out_of_range("partition_by: attribute index out of range");
  std::map<std::vector<Code>, IndexSet> groups;
  std::vector<Code> key(attrs.size());
  for (std::size_t i = 0; i < table.universe_size(); ++i) {
    for (std::size_t j = 0; j < attrs.size(); ++j) key[j] = table.code(i, attrs[j]);
    groups[key].push_back(i);
  }
  Partition p;
  p.universe_size = table.universe_size();
  for (auto& [k, block] : groups) p.blocks.push_back(std::move(block));
  sort_blocks(p.blocks);
  return p;
}

Partition decision_partition(const DecisionTable& table) {
  const auto d = table.decision();
  std::vector<std::size_t> labels(d.begin(), d.end());
  return partition_of_labels(labels);
}

Partition partition_of_labels(std::span<const std::size_t> labels) {
  std::map<std::size_t, IndexSet> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
  Partition p;
  p.universe_size = labels.size();
  for (auto& [k, block] : groups) p.blocks.push_back(std::move(block));
  sort_blocks(p.blocks);
  return p;
}

IndexSet lower_approx(const Partition& p, const IndexSet& target) {
  const auto in = membership(target, p.universe_size);
  std::vector<bool> out(p.universe_size, false);
  for (const auto& block : p.blocks) {
    if (std::all_of(block.begin(), block.end(), [&](std::size_t x) { return in[x]; }))
      for (auto x : block) out[x] = true;
  }
  return to_index_set(out);
}

IndexSet upper_approx(const Partition& p, const IndexSet& target) {
  const auto in = membership(target, p.universe_size);
  std::vector<bool> out(p.universe_size, false);
  for (const auto& block : p.blocks) {
    if (std::any_of(block.begin(), block.end(), [&](std::size_t x) { return in[x]; }))
      for (auto x : block) out[x] = true;
  }
  return to_index_set(out);
}

RegionReport regions(const Partition& p, const Partition& q) {
  if (p.universe_size != q.universe_size) throw std::invalid_argument("regions: universe mismatch");
  const std::size_t n = p.universe_size;
  std::vector<bool> lower(n, false), upper(n, false);
  for (const auto& x : q.blocks) {
    for (auto i : lower_approx(p, x)) lower[i] = true;
    for (auto i : upper_approx(p, x)) upper[i] = true;
  }
  RegionReport r;
  for (std::size_t i = 0; i < n; ++i) {
    if (lower[i]) r.positive.push_back(i);
    if (!upper[i]) r.negative.push_back(i);
    if (upper[i] && !lower[i]) r.boundary.push_back(i);
  }
  return r;
}

Dependency dependency_via_regions(const DecisionTable& table, std::span<const std::size_t> attrs) {
  const auto r = regions(partition_by(table, attrs), decision_partition(table));
  return {r.positive.size(), table.universe_size()};
}

Dependency dependency(const DecisionTable& table, std::span<const std::size_t> attrs, Exec exec) {
  const std::size_t n = table.universe_size();
  const auto view = table.view();
  for (auto a : attrs)
    if (a >= table.num_attributes()) throw std::out_of_range("dependency: attribute index out of range");
  if (attrs.empty()) {
    // single block: positive iff the decision is constant
    const auto d = table.decision();
    const bool constant = std::all_of(d.begin(), d.end(), [&](Code c) { return c == d[0]; });
    return {constant ? n : 0, n};
  }
  // Refine the partition one attribute at a time; the last step is counted
  // by the kernel.
  std::vector<std::uint32_t> ids(n, 0);
  std::size_t n_blocks = 1;
  for (std::size_t j = 0; j + 1 < attrs.size(); ++j) {
    const auto col = table.column(attrs[j]);
    const std::size_t levels = table.levels(attrs[j]);
    std::vector<std::uint32_t> relabel(n_blocks * levels, std::numeric_limits<std::uint32_t>::max());
    std::uint32_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto& slot = relabel[ids[i] * levels + col[i]];
      if (slot == std::numeric_limits<std::uint32_t>::max()) slot = next++;
      ids[i] = slot;
    }
    n_blocks = next;
  }
  const std::size_t last = attrs.back();
  std::size_t pos = 0;
  kernels::refined_positive_counts(view, ids, n_blocks, std::span(&last, 1), std::span(&pos, 1), exec);
  return {pos, n};
}

double gamma(const DecisionTable& table, std::span<const std::size_t> attrs) {
  return dependency_via_regions(table, attrs).value();
}

ReductResult quick_reduct(const DecisionTable& table, Exec exec) {
  const std::size_t n = table.universe_size();
  const std::size_t n_attr = table.num_attributes();
  std::vector<std::size_t> all(n_attr);
  for (std::size_t a = 0; a < n_attr; ++a) all[a] = a;

  ReductResult result;
  result.gamma_full = dependency(table, all, exec);
  Dependency current = dependency(table, {}, exec);

  const auto view = table.view();
  std::vector<std::uint32_t> ids(n, 0);
  std::size_t n_blocks = 1;
  std::vector<bool> used(n_attr, false);

  while (current != result.gamma_full && result.selected.size() < n_attr) {
    std::vector<std::size_t> candidates;
    for (std::size_t a = 0; a < n_attr; ++a)
      if (!used[a]) candidates.push_back(a);
    std::vector<std::size_t> counts(candidates.size());
    kernels::refined_positive_counts(view, ids, n_blocks, candidates, counts, exec);

    std::size_t best = 0;
    for (std::size_t i = 1; i < counts.size(); ++i)
      if (counts[i] > counts[best]) best = i;
    const bool forced = counts[best] <= current.positive;
    if (forced) best = 0;

    const std::size_t attr = candidates[best];
    used[attr] = true;
    result.selected.push_back(attr);
    current = {counts[best], n};
    result.trace.push_back({attr, current, forced});

    const auto col = table.column(attr);
    const std::size_t levels = table.levels(attr);
    std::vector<std::uint32_t> relabel(n_blocks * levels, std::numeric_limits<std::uint32_t>::max());
    std::uint32_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto& slot = relabel[ids[i] * levels + col[i]];
      if (slot == std::numeric_limits<std::uint32_t>::max()) slot = next++;
      ids[i] = slot;
    }
    n_blocks = next;
  }
  result.reached_full = current == result.gamma_full;
  return result;
}

std::vector<AttributeSet> exhaustive_reducts(const DecisionTable& table, std::size_t max_attrs, Exec exec) {
  const std::size_t n_attr = table.num_attributes();
  if (n_attr > max_attrs || n_attr >= 32)
    throw std::invalid_argument("exhaustive_reducts: " + std::to_string(n_attr) +
                                " attributes exceeds the cap of " + std::to_string(std::min<std::size_t>(max_attrs, 31)));
  const auto counts = kernels::subset_positive_counts(table.view(), exec);
  const std::uint64_t full_mask = (std::uint64_t{1} << n_attr) - 1;
  const auto full = counts[full_mask];

  std::vector<AttributeSet> out;
  for (std::uint64_t mask = 0; mask <= full_mask; ++mask) {
    if (counts[mask] != full) continue;
    bool minimal = true;
    for (std::size_t a = 0; a < n_attr && minimal; ++a) {
      const std::uint64_t bit = std::uint64_t{1} << a;
      if ((mask & bit) && counts[mask ^ bit] == counts[mask]) minimal = false;
    }
    if (!minimal) continue;
    AttributeSet s;
    for (std::size_t a = 0; a < n_attr; ++a)
      if (mask >> a & 1U) s.push_back(a);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const AttributeSet& a, const AttributeSet& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

std::vector<AttributeSet> minimal_reducts(const std::vector<AttributeSet>& reducts) {
  if (reducts.empty()) return {};
  std::size_t smallest = reducts.front().size();
  for (const auto& r : reducts) smallest = std::min(smallest, r.size());
  std::vector<AttributeSet> out;
  for (const auto& r : reducts)
    if (r.size() == smallest) out.push_back(r);
  return out;
}

AttributeSet core_attributes(const std::vector<AttributeSet>& reducts) {
  if (reducts.empty()) throw std::invalid_argument("core_attributes: no reducts given");
  AttributeSet core = reducts.front();
  std::sort(core.begin(), core.end());
  for (std::size_t i = 1; i < reducts.size(); ++i) {
    AttributeSet other = reducts[i];
    std::sort(other.begin(), other.end());
    AttributeSet kept;
    std::set_intersection(core.begin(), core.end(), other.begin(), other.end(), std::back_inserter(kept));
    core = std::move(kept);
  }
  return core;
}

}  // namespace roughsel
