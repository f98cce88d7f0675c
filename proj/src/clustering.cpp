#include "roughsel/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "roughsel/seeds.hpp"

namespace roughsel {

namespace {

double total(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// Indices of the first occurrence of every distinct row, in row order.
std::vector<std::size_t> distinct_rows(const Matrix& data) {
  std::map<std::vector<double>, std::size_t> seen;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    auto r = data.row(i);
    if (seen.try_emplace(std::vector<double>(r.begin(), r.end()), i).second) out.push_back(i);
  }
  return out;
}

Matrix initial_centroids(const Matrix& data, std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> pool = distinct_rows(data);
  std::vector<std::size_t> chosen;
  // partial Fisher-Yates over the distinct rows
  for (std::size_t i = 0; i < pool.size() && chosen.size() < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
    chosen.push_back(pool[i]);
  }
  // fewer distinct rows than k: pad with repeats, leaving some clusters to
  // the empty-cluster repair
  std::uniform_int_distribution<std::size_t> any(0, data.rows() - 1);
  while (chosen.size() < k) chosen.push_back(any(rng));
  return data.select_rows(chosen);
}

void check_data(const Matrix& data, const char* who) {
  if (data.empty()) throw std::invalid_argument(std::string(who) + ": empty data");
  for (double v : data.data())
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(who) + ": non-finite value");
}

}  // namespace

KMeansModel kmeans(const Matrix& data, const KMeansOptions& opts) {
  check_data(data, "kmeans");
  if (opts.k < 1) throw std::invalid_argument("kmeans: k must be at least 1");
  if (opts.k > data.rows()) throw std::invalid_argument("kmeans: k exceeds the number of samples");
  return kmeans(data, initial_centroids(data, opts.k, opts.seed), opts);
}

KMeansModel kmeans(const Matrix& data, Matrix centroids, const KMeansOptions& opts) {
  check_data(data, "kmeans");
  const std::size_t n = data.rows();
  const std::size_t k = centroids.rows();
  const std::size_t d = data.cols();
  if (k < 1) throw std::invalid_argument("kmeans: k must be at least 1");
  if (k > n) throw std::invalid_argument("kmeans: k exceeds the number of samples");
  if (centroids.cols() != d) throw std::invalid_argument("kmeans: centroid dimension mismatch");

  KMeansModel model;
  model.seed = opts.seed;
  std::vector<std::size_t> assign(n);
  std::vector<double> sq(n);
  kernels::assign_nearest(data, centroids, assign, sq, opts.exec);
  model.inertia_history.push_back(total(sq));

  std::vector<std::size_t> next(n);
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    Matrix updated(k, d);
    std::vector<std::size_t> members(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++members[assign[i]];
      auto r = data.row(i);
      for (std::size_t c = 0; c < d; ++c) updated(assign[i], c) += r[c];
    }
    bool repaired = false;
    std::vector<double> spare = sq;
    for (std::size_t j = 0; j < k; ++j) {
      if (members[j] > 0) {
        for (std::size_t c = 0; c < d; ++c) updated(j, c) /= static_cast<double>(members[j]);
        continue;
      }
      const auto far = static_cast<std::size_t>(
          std::distance(spare.begin(), std::max_element(spare.begin(), spare.end())));
      if (spare[far] <= 0.0) {
        // every sample sits on a centre already; nothing to reseed from
        for (std::size_t c = 0; c < d; ++c) updated(j, c) = centroids(j, c);
        continue;
      }
      for (std::size_t c = 0; c < d; ++c) updated(j, c) = data(far, c);
      spare[far] = 0.0;
      repaired = true;
    }

    double shift = 0.0;
    for (std::size_t j = 0; j < k; ++j)
      shift = std::max(shift, std::sqrt(squared_distance(updated.row(j), centroids.row(j))));
    centroids = std::move(updated);

    kernels::assign_nearest(data, centroids, next, sq, opts.exec);
    model.inertia_history.push_back(total(sq));
    model.iterations = it;
    const bool unchanged = next == assign;
    assign.swap(next);
    if ((unchanged && !repaired) || shift <= opts.tol) break;
  }

  model.centroids = std::move(centroids);
  model.assignments = std::move(assign);
  model.inertia = model.inertia_history.back();
  return model;
}

FcmModel fcm(const Matrix& data, const FcmOptions& opts) {
  check_data(data, "fcm");
  if (!(opts.m > 1.0)) throw std::invalid_argument("fcm: fuzzifier m must be greater than 1");
  if (opts.c < 1 || opts.c > data.rows()) throw std::invalid_argument("fcm: cluster count out of range");
  const std::size_t n = data.rows();
  const std::size_t c = opts.c;

  FcmModel model;
  model.m = opts.m;
  model.seed = opts.seed;

  Rng rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix u(n, c);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < c; ++j) s += (u(i, j) = unit(rng));
    if (s == 0.0) {
      for (std::size_t j = 0; j < c; ++j) u(i, j) = 1.0 / static_cast<double>(c);
      continue;
    }
    for (std::size_t j = 0; j < c; ++j) u(i, j) /= s;
  }
  if (opts.observer) opts.observer(0, u);

  Matrix centroids(c, data.cols());
  Matrix dist;
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    const Matrix previous = centroids;
    kernels::fcm_centroids(data, u, opts.m, centroids, opts.exec);
    kernels::euclidean_distances(data, centroids, dist, opts.exec);
    kernels::fcm_memberships(dist, opts.m, u, opts.exec);
    if (opts.observer) opts.observer(it, u);
    model.iterations = it;
    if (it == 1) continue;
    double shift = 0.0;
    for (std::size_t j = 0; j < c; ++j)
      for (std::size_t k = 0; k < data.cols(); ++k)
        shift = std::max(shift, std::abs(centroids(j, k) - previous(j, k)));
    if (shift < opts.tol) break;
  }

  model.centroids = std::move(centroids);
  model.membership = std::move(u);
  return model;
}

Matrix fcm_membership(const FcmModel& model, const Matrix& data, Exec exec) {
  if (data.cols() != model.centroids.cols())
    throw std::invalid_argument("fcm_membership: dimension mismatch");
  Matrix dist, u;
  kernels::euclidean_distances(data, model.centroids, dist, exec);
  kernels::fcm_memberships(dist, model.m, u, exec);
  return u;
}

std::size_t argmax(std::span<const double> row) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < row.size(); ++j)
    if (row[j] > row[best]) best = j;
  return best;
}

std::vector<std::size_t> predict_hard(const KMeansModel& model, const Matrix& data) {
  if (data.cols() != model.centroids.cols())
    throw std::invalid_argument("predict_hard: dimension mismatch");
  std::vector<std::size_t> assign(data.rows());
  std::vector<double> sq(data.rows());
  kernels::assign_nearest(data, model.centroids, assign, sq, Exec::parallel);
  return assign;
}

std::vector<std::size_t> predict_hard(const FcmModel& model, const Matrix& data) {
  const Matrix u = fcm_membership(model, data);
  std::vector<std::size_t> out(u.rows());
  for (std::size_t i = 0; i < u.rows(); ++i) out[i] = argmax(u.row(i));
  return out;
}

std::vector<std::size_t> hard_labels(const FcmModel& model) {
  std::vector<std::size_t> out(model.membership.rows());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = argmax(model.membership.row(i));
  return out;
}

}  // namespace roughsel
