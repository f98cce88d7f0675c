#include "roughsel/kernels.hpp"

namespace roughsel::kernels {

void refined_positive_counts(const CodedView& t, std::span<const std::uint32_t> block_ids,
                             std::size_t n_blocks, std::span<const std::size_t> candidates,
                             std::span<std::size_t> out, Exec exec) {
  if (exec == Exec::parallel)
    omp::refined_positive_counts(t, block_ids, n_blocks, candidates, out);
  else
    serial::refined_positive_counts(t, block_ids, n_blocks, candidates, out);
}

std::vector<std::uint32_t> subset_positive_counts(const CodedView& t, Exec exec) {
  return exec == Exec::parallel ? omp::subset_positive_counts(t) : serial::subset_positive_counts(t);
}

void assign_nearest(const Matrix& data, const Matrix& centroids, std::span<std::size_t> assign,
                    std::span<double> sqdist, Exec exec) {
  if (exec == Exec::parallel)
    omp::assign_nearest(data, centroids, assign, sqdist);
  else
    serial::assign_nearest(data, centroids, assign, sqdist);
}

void euclidean_distances(const Matrix& data, const Matrix& centroids, Matrix& out, Exec exec) {
  if (exec == Exec::parallel)
    omp::euclidean_distances(data, centroids, out);
  else
    serial::euclidean_distances(data, centroids, out);
}

void fcm_memberships(const Matrix& dist, double m, Matrix& u, Exec exec) {
  if (exec == Exec::parallel)
    omp::fcm_memberships(dist, m, u);
  else
    serial::fcm_memberships(dist, m, u);
}

void fcm_centroids(const Matrix& data, const Matrix& u, double m, Matrix& centroids, Exec exec) {
  if (exec == Exec::parallel)
    omp::fcm_centroids(data, u, m, centroids);
  else
    serial::fcm_centroids(data, u, m, centroids);
}

}  // namespace roughsel::kernels
