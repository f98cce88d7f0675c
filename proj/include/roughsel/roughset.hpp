#pragma once

#include <compare>
#include <cstddef>
#include <vector>

#include "roughsel/kernels.hpp"
#include "roughsel/table.hpp"

namespace roughsel {

// Sorted, duplicate-free sample indices.
using IndexSet = std::vector<std::size_t>;

// Equivalence classes of the indiscernibility relation. Blocks are sorted
// internally and ordered by their smallest member, so equal partitions
// compare equal.
struct Partition {
  std::vector<IndexSet> blocks;
  std::size_t universe_size = 0;

  bool operator==(const Partition&) const = default;
};

Partition partition_by(const DecisionTable& table, std::span<const std::size_t> attrs);
Partition decision_partition(const DecisionTable& table);
// Canonical partition from per-sample labels.
Partition partition_of_labels(std::span<const std::size_t> labels);

IndexSet lower_approx(const Partition& p, const IndexSet& target);
IndexSet upper_approx(const Partition& p, const IndexSet& target);

struct RegionReport {
  IndexSet positive;
  IndexSet negative;
  IndexSet boundary;
};

// Positive, negative and boundary regions of q with respect to p.
RegionReport regions(const Partition& p, const Partition& q);

// Dependency degree kept as the exact count ratio |POS| / |U|.
struct Dependency {
  std::size_t positive = 0;
  std::size_t universe = 1;

  double value() const { return static_cast<double>(positive) / static_cast<double>(universe); }

  friend bool operator==(const Dependency& a, const Dependency& b) {
    return a.positive * b.universe == b.positive * a.universe;
  }
  friend std::strong_ordering operator<=>(const Dependency& a, const Dependency& b) {
    return a.positive * b.universe <=> b.positive * a.universe;
  }
};

// gamma computed through regions(partition_by(attrs), decision partition).
Dependency dependency_via_regions(const DecisionTable& table, std::span<const std::size_t> attrs);
// Same quantity through the refinement kernel.
Dependency dependency(const DecisionTable& table, std::span<const std::size_t> attrs,
                      Exec exec = Exec::parallel);
double gamma(const DecisionTable& table, std::span<const std::size_t> attrs);

struct ReductStep {
  std::size_t attribute = 0;
  Dependency gamma;
  // Added by the stall guard (no candidate strictly improved gamma).
  bool forced = false;
};

struct ReductResult {
  std::vector<std::size_t> selected;  // in the order they were added
  std::vector<ReductStep> trace;
  Dependency gamma_full;
  bool reached_full = false;
};

// Greedy forward selection: each pass adds the attribute whose addition gives
// the largest dependency (ties -> lowest index), stopping once the dependency
// of the selection equals that of the full attribute set. When no attribute
// strictly improves the dependency the lowest-index unused attribute is added
// so the search always terminates within |C| passes.
ReductResult quick_reduct(const DecisionTable& table, Exec exec = Exec::parallel);

// Every reduct: subsets X with gamma_X = gamma_C from which no attribute can
// be dropped without changing gamma. Ordered by size, then lexicographically.
std::vector<AttributeSet> exhaustive_reducts(const DecisionTable& table, std::size_t max_attrs = 20,
                                             Exec exec = Exec::parallel);
// The members of minimum cardinality.
std::vector<AttributeSet> minimal_reducts(const std::vector<AttributeSet>& reducts);
AttributeSet core_attributes(const std::vector<AttributeSet>& reducts);

}  // namespace roughsel
