#pragma once

// Data-parallel inner loops. Each kernel has a plain serial reference in
// kernels::serial and an OpenMP version in kernels::omp; the dispatchers in
// kernels:: pick one by Exec. Both versions must return identical results
// bit for bit, which the kernel tests check.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "roughsel/matrix.hpp"

namespace roughsel {

enum class Exec { serial, parallel };

using Code = std::uint32_t;

namespace kernels {

// Column-major view of a coded decision table.
struct CodedView {
  std::size_t n = 0;
  std::span<const Code> codes;   // attribute a occupies [a*n, (a+1)*n)
  std::span<const Code> levels;  // code count per attribute
  std::span<const Code> decision;
  Code decision_levels = 0;

  std::size_t num_attributes() const { return levels.size(); }
  std::span<const Code> column(std::size_t a) const { return codes.subspan(a * n, n); }
};

// Size of the positive region of the decision w.r.t. the partition given by
// block_ids (sample -> block in [0, n_blocks)) refined by each candidate
// column. out[i] corresponds to candidates[i].
namespace serial {
void refined_positive_counts(const CodedView& t, std::span<const std::uint32_t> block_ids,
                             std::size_t n_blocks, std::span<const std::size_t> candidates,
                             std::span<std::size_t> out);
std::vector<std::uint32_t> subset_positive_counts(const CodedView& t);
void assign_nearest(const Matrix& data, const Matrix& centroids, std::span<std::size_t> assign,
                    std::span<double> sqdist);
void euclidean_distances(const Matrix& data, const Matrix& centroids, Matrix& out);
void fcm_memberships(const Matrix& dist, double m, Matrix& u);
void fcm_centroids(const Matrix& data, const Matrix& u, double m, Matrix& centroids);
}  // namespace serial

namespace omp {
void refined_positive_counts(const CodedView& t, std::span<const std::uint32_t> block_ids,
                             std::size_t n_blocks, std::span<const std::size_t> candidates,
                             std::span<std::size_t> out);
std::vector<std::uint32_t> subset_positive_counts(const CodedView& t);
void assign_nearest(const Matrix& data, const Matrix& centroids, std::span<std::size_t> assign,
                    std::span<double> sqdist);
void euclidean_distances(const Matrix& data, const Matrix& centroids, Matrix& out);
void fcm_memberships(const Matrix& dist, double m, Matrix& u);
void fcm_centroids(const Matrix& data, const Matrix& u, double m, Matrix& centroids);
}  // namespace omp

void refined_positive_counts(const CodedView& t, std::span<const std::uint32_t> block_ids,
                             std::size_t n_blocks, std::span<const std::size_t> candidates,
                             std::span<std::size_t> out, Exec exec);

// Positive-region size for every subset of the attributes, indexed by bit
// mask (bit a set <=> attribute a in the subset). Requires < 32 attributes.
std::vector<std::uint32_t> subset_positive_counts(const CodedView& t, Exec exec);

// Nearest centroid per row (ties -> lower centroid index) and the squared
// distance to it.
void assign_nearest(const Matrix& data, const Matrix& centroids, std::span<std::size_t> assign,
                    std::span<double> sqdist, Exec exec);

// out(i, j) = ||data_i - centroid_j||.
void euclidean_distances(const Matrix& data, const Matrix& centroids, Matrix& out, Exec exec);

// Membership update from distances: u_ij = 1 / sum_k (d_ij / d_ik)^(1/(m-1)).
// Rows with zero distances get crisp memberships split over the coincident
// centroids.
void fcm_memberships(const Matrix& dist, double m, Matrix& u, Exec exec);

// centroid_j = sum_i u_ij^m x_i / sum_i u_ij^m.
void fcm_centroids(const Matrix& data, const Matrix& u, double m, Matrix& centroids, Exec exec);

}  // namespace kernels
}  // namespace roughsel
