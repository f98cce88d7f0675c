#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "roughsel/kernels.hpp"

namespace roughsel::kernels::omp {

namespace {

constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

// Dense per-key scratch: first decision seen, purity, member count.
struct Scratch {
  std::vector<std::uint32_t> first;
  std::vector<std::uint8_t> impure;
  std::vector<std::uint32_t> count;
  std::vector<std::uint32_t> relabel;

  void reset(std::size_t keys) {
    if (first.size() < keys) {
      first.resize(keys);
      impure.resize(keys);
      count.resize(keys);
    }
    std::fill_n(first.begin(), keys, kUnset);
    std::fill_n(impure.begin(), keys, 0);
    std::fill_n(count.begin(), keys, 0);
  }
};

std::size_t positive_of_keys(Scratch& s, std::span<const std::uint32_t> keys, std::size_t n_keys,
                             std::span<const Code> decision) {
  s.reset(n_keys);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const auto k = keys[i];
    if (s.first[k] == kUnset) {
      s.first[k] = decision[i];
    } else if (s.first[k] != decision[i]) {
      s.impure[k] = 1;
    }
    ++s.count[k];
  }
  std::size_t pos = 0;
  for (std::size_t k = 0; k < n_keys; ++k)
    if (s.first[k] != kUnset && !s.impure[k]) pos += s.count[k];
  return pos;
}

}  // namespace

void refined_positive_counts(const CodedView& t, std::span<const std::uint32_t> block_ids,
                             std::size_t n_blocks, std::span<const std::size_t> candidates,
                             std::span<std::size_t> out) {
  const auto n_cand = static_cast<std::int64_t>(candidates.size());
#pragma omp parallel
  {
    Scratch s;
    std::vector<std::uint32_t> keys(t.n);
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t ci = 0; ci < n_cand; ++ci) {
      const auto a = candidates[static_cast<std::size_t>(ci)];
      const auto col = t.column(a);
      const std::size_t levels = t.levels[a];
      for (std::size_t i = 0; i < t.n; ++i)
        keys[i] = static_cast<std::uint32_t>(block_ids[i] * levels + col[i]);
      out[static_cast<std::size_t>(ci)] = positive_of_keys(s, keys, n_blocks * levels, t.decision);
    }
  }
}

std::vector<std::uint32_t> subset_positive_counts(const CodedView& t) {
  const std::size_t a = t.num_attributes();
  if (a >= 32) throw std::invalid_argument("subset_positive_counts: too many attributes");
  const auto masks = static_cast<std::int64_t>(std::uint64_t{1} << a);
  std::vector<std::uint32_t> out(static_cast<std::size_t>(masks));
  Code max_levels = 1;
  for (auto l : t.levels) max_levels = std::max(max_levels, l);

#pragma omp parallel
  {
    Scratch s;
    std::vector<std::uint32_t> ids(t.n);
    std::vector<std::uint32_t> relabel(t.n * max_levels);
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t mask = 0; mask < masks; ++mask) {
      std::fill(ids.begin(), ids.end(), 0);
      std::size_t n_blocks = 1;
      for (std::size_t j = 0; j < a; ++j) {
        if (!(static_cast<std::uint64_t>(mask) >> j & 1U)) continue;
        const auto col = t.column(j);
        const std::size_t levels = t.levels[j];
        std::fill_n(relabel.begin(), n_blocks * levels, kUnset);
        std::uint32_t next = 0;
        for (std::size_t i = 0; i < t.n; ++i) {
          auto& slot = relabel[ids[i] * levels + col[i]];
          if (slot == kUnset) slot = next++;
          ids[i] = slot;
        }
        n_blocks = next;
      }
      out[static_cast<std::size_t>(mask)] =
          static_cast<std::uint32_t>(positive_of_keys(s, ids, n_blocks, t.decision));
    }
  }
  return out;
}

void assign_nearest(const Matrix& data, const Matrix& centroids, std::span<std::size_t> assign,
                    std::span<double> sqdist) {
  const auto n = static_cast<std::int64_t>(data.rows());
#pragma omp parallel for schedule(static)
  for (std::int64_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
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
  const auto n = static_cast<std::int64_t>(data.rows());
#pragma omp parallel for schedule(static)
  for (std::int64_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = 0; j < centroids.rows(); ++j)
      out(i, j) = std::sqrt(squared_distance(data.row(i), centroids.row(j)));
  }
}

void fcm_memberships(const Matrix& dist, double m, Matrix& u) {
  const double p = 1.0 / (m - 1.0);
  const std::size_t c = dist.cols();
  u = Matrix(dist.rows(), c);
  const auto n = static_cast<std::int64_t>(dist.rows());
#pragma omp parallel for schedule(static)
  for (std::int64_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
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
  const std::size_t n = data.rows();
  const std::size_t c = u.cols();
  // Weights are computed in parallel; each centre then sums over samples in
  // index order so the result matches the serial reference exactly.
  Matrix w(n, c);
  const auto nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t ii = 0; ii < nn; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = 0; j < c; ++j) w(i, j) = std::pow(u(i, j), m);
  }
  const auto cc = static_cast<std::int64_t>(c);
#pragma omp parallel for schedule(static)
  for (std::int64_t jj = 0; jj < cc; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    double wsum = 0.0;
    std::vector<double> acc(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      wsum += w(i, j);
      for (std::size_t k = 0; k < d; ++k) acc[k] += w(i, j) * data(i, k);
    }
    if (wsum == 0.0) continue;
    for (std::size_t k = 0; k < d; ++k) centroids(j, k) = acc[k] / wsum;
  }
}

}  // namespace roughsel::kernels::omp
