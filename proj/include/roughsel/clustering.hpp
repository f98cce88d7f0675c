#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "roughsel/kernels.hpp"
#include "roughsel/matrix.hpp"

namespace roughsel {

struct KMeansOptions {
  std::size_t k = 2;
  std::uint64_t seed = 0;
  std::size_t max_iter = 300;
  double tol = 1e-6;  // max centroid shift treated as "no change"
  Exec exec = Exec::parallel;
};

struct KMeansModel {
  Matrix centroids;
  std::vector<std::size_t> assignments;
  double inertia = 0.0;
  // Inertia after every assignment step, starting with the initial centroids.
  std::vector<double> inertia_history;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
};

// Lloyd iterations from k distinct data points chosen with the seeded RNG.
// Nearest-centroid ties go to the lower cluster index. A cluster that loses
// all members is moved onto the sample farthest from its assigned centroid.
KMeansModel kmeans(const Matrix& data, const KMeansOptions& opts);

// Same iteration from caller-supplied starting centroids (opts.k is ignored).
KMeansModel kmeans(const Matrix& data, Matrix initial_centroids, const KMeansOptions& opts);

struct FcmOptions {
  std::size_t c = 2;
  double m = 2.0;
  std::uint64_t seed = 0;
  std::size_t max_iter = 300;
  double tol = 1e-6;
  Exec exec = Exec::parallel;
  // Called with the membership matrix after the random start and after every
  // update.
  std::function<void(std::size_t iteration, const Matrix& membership)> observer;
};

struct FcmModel {
  Matrix centroids;
  Matrix membership;  // n x c, rows sum to 1
  double m = 2.0;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
};

// Fuzzy c-means: random row-normalised membership start, then weighted
// centroids, Euclidean distances and the reciprocal-distance membership rule
// until the centroids move less than tol.
FcmModel fcm(const Matrix& data, const FcmOptions& opts);

// Membership of new points under a fitted model.
Matrix fcm_membership(const FcmModel& model, const Matrix& data, Exec exec = Exec::parallel);

std::size_t argmax(std::span<const double> row);

std::vector<std::size_t> predict_hard(const KMeansModel& model, const Matrix& data);
std::vector<std::size_t> predict_hard(const FcmModel& model, const Matrix& data);
// Argmax of each stored membership row.
std::vector<std::size_t> hard_labels(const FcmModel& model);

}  // namespace roughsel
