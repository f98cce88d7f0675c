// Reference implementations. Written for clarity; kept as the oracle the
// OpenMP kernels are tested against.

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

#include "roughsel/kernels.hpp"

namespace roughsel::kernels::serial {

namespace {

struct BlockState {
  Code decision = 0;
  bool pure = true;
  std::size_t count = 0;
};

template <typename Key>
std::size_t positive_from_groups(const std::map<Key, BlockState>& groups) {
  std::size_t pos = 0;
  for (const auto& [key, st] : groups)
    if (st.pure) pos += st.count;
  return pos;
}

template <typename Key>
void add_member(std::map<Key, BlockState>& groups, const Key& key, Code decision) {
  auto [it, inserted] = groups.try_emplace(key);
  if (inserted) {
    it->second.decision = decision;
  } else if (it->second.decision != decision) {
    it->second.pure = false;
  }
  ++it->second.count;
}

}  // namespace

void refined_positive_counts(const CodedView& t, std::span<const std::uint32_t> block_ids,
                             std::size_t /*n_blocks*/, std::span<const std::size_t> candidates,
                             std::span<std::size_t> out) {
  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    const auto col = t.column(candidates[ci]);
    std::map<std::pair<std::uint32_t, Code>, BlockState> groups;
    for (std::size_t i = 0; i < t.n; ++i) add_member(groups, {block_ids[i], col[i]}, t.decision[i]);
    out[ci] = positive_from_groups(groups);
  }
}

std::vector<std::uint32_t> subset_positive_counts(const CodedView& t) {
  const std::size_t a = t.num_attributes();
  if (a >= 32) throw std::invalid_argument("subset_positive_counts: too many attributes");
  const std::uint64_t masks = std::uint64_t{1} << a;
  std::vector<std::uint32_t> out(masks);
  std::vector<Code> tuple;
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    std::map<std::vector<Code>, BlockState> groups;
    for (std::size_t i = 0; i < t.n; ++i) {
      tuple.clear();
      for (std::size_t j = 0; j < a; ++j)
        if (mask >> j & 1U) tuple.push_back(t.column(j)[i]);
      add_member(groups, tuple, t.decision[i]);
    }
    out[mask] = static_cast<std::uint32_t>(positive_from_groups(groups));
  }
  return out;
}

void assign_nearest(const Matrix& data, const Matrix& centroids, std::span<std::size_t> assign,
                    std::span<double> sqdist) {
  for (std::size_t i = 0; i < data.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t j = 0; j < centroids.rows(); ++j) {
      const double d = squared_distance(data.row(i), centroids.row(j));
      if (d < best) {
        best = d;
        arg = j;
      }
    }
    assign[i] = arg;
    sqdist[i] = best;
  }
}

void euclidean_distances(const Matrix& data, const Matrix& centroids, Matrix& out) {
  out = Matrix(data.rows(), centroids.rows());
  for (std::size_t i = 0; i < data.rows(); ++i)
    for (std::size_t j = 0; j < centroids.rows(); ++j)
      out(i, j) = std::sqrt(squared_distance(data.row(i), centroids.row(j)));
}

void fcm_memberships(const Matrix& dist, double m, Matrix& u) {
  const double p = 1.0 / (m - 1.0);
  const std::size_t c = dist.cols();
  u = Matrix(dist.rows(), c);
  for (std::size_t i = 0; i < dist.rows(); ++i) {
    std::size_t zeros = 0;
    for (std::size_t j = 0; j < c; ++j)
      if (dist(i, j) == 0.0) ++zeros;
    if (zeros > 0) {
      for (std::size_t j = 0; j < c; ++j)
        u(i, j) = dist(i, j) == 0.0 ? 1.0 / static_cast<double>(zeros) : 0.0;
      continue;
    }
    for (std::size_t j = 0; j < c; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < c; ++k) s += std::pow(dist(i, j) / dist(i, k), p);
      u(i, j) = 1.0 / s;
    }
  }
}

void fcm_centroids(const Matrix& data, const Matrix& u, double m, Matrix& centroids) {
  const std::size_t d = data.cols();
  for (std::size_t j = 0; j < u.cols(); ++j) {
    double wsum = 0.0;
    std::vector<double> acc(d, 0.0);
    for (std::size_t i = 0; i < data.rows(); ++i) {
      const double w = std::pow(u(i, j), m);
      wsum += w;
      for (std::size_t k = 0; k < d; ++k) acc[k] += w * data(i, k);
    }
    // a cluster with no weight keeps its previous centre
    if (wsum == 0.0) continue;
    for (std::size_t k = 0; k < d; ++k) centroids(j, k) = acc[k] / wsum;
  }
}

}  // namespace roughsel::kernels::serial
