#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "roughsel/kernels.hpp"
#include "roughsel/matrix.hpp"

namespace roughsel {

// Malformed or inconsistent input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sorted, duplicate-free attribute (column) indices.
using AttributeSet = std::vector<std::size_t>;

struct RawMatrix {
  Matrix values;                         // samples x attributes
  std::vector<std::string> attribute_names;
  std::vector<Code> class_labels;        // coded by first appearance
  std::vector<std::string> class_names;  // class_names[code]

  std::size_t num_samples() const { return values.rows(); }
  std::size_t num_attributes() const { return values.cols(); }
  std::size_t num_classes() const { return class_names.size(); }

  // Throws DataError when an invariant is broken.
  void validate() const;
};

struct CsvOptions {
  char delimiter = ',';
  bool has_header = true;
  // Column name, zero-based index, or "last"/"first".
  std::string class_column = "last";
};

RawMatrix parse_csv(std::istream& in, const CsvOptions& opts);
RawMatrix load_csv(const std::filesystem::path& path, const CsvOptions& opts);
void write_csv(std::ostream& out, const RawMatrix& m, char delimiter = ',');

RawMatrix project(const RawMatrix& m, std::span<const std::size_t> attrs);

// Samples x coded condition attributes plus one coded decision attribute.
// Condition codes of attribute a lie in [0, levels(a)); decision codes lie in
// [0, decision_levels()).
class DecisionTable {
 public:
  DecisionTable() = default;
  // columns[a][i] is the code of sample i on attribute a.
  DecisionTable(std::vector<std::vector<Code>> columns, std::vector<Code> levels,
                std::vector<Code> decision, std::vector<std::string> attribute_names,
                std::vector<std::string> class_names);

  // Builds from integer data; levels are max code + 1 per column.
  static DecisionTable from_codes(const std::vector<std::vector<Code>>& rows,
                                  const std::vector<Code>& decision);

  std::size_t universe_size() const { return n_; }
  std::size_t num_attributes() const { return levels_.size(); }
  Code levels(std::size_t a) const { return levels_.at(a); }
  Code decision_levels() const { return decision_levels_; }
  Code code(std::size_t sample, std::size_t attr) const { return codes_[attr * n_ + sample]; }
  std::span<const Code> column(std::size_t a) const { return std::span(codes_).subspan(a * n_, n_); }
  std::span<const Code> decision() const { return decision_; }
  const std::vector<std::string>& attribute_names() const { return attribute_names_; }
  const std::vector<std::string>& class_names() const { return class_names_; }

  kernels::CodedView view() const;

  bool operator==(const DecisionTable&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<Code> codes_;  // column-major
  std::vector<Code> levels_;
  std::vector<Code> decision_;
  Code decision_levels_ = 0;
  std::vector<std::string> attribute_names_;
  std::vector<std::string> class_names_;
};

DecisionTable project(const DecisionTable& table, std::span<const std::size_t> attrs);

// Reads a delimiter-separated file of non-negative integer codes plus a class
// column; used for already-discretized tables.
DecisionTable load_coded_csv(const std::filesystem::path& path, const CsvOptions& opts);
DecisionTable parse_coded_csv(std::istream& in, const CsvOptions& opts);
void write_coded_csv(std::ostream& out, const DecisionTable& t, char delimiter = ',');

struct Discretizer {
  std::size_t bins_per_attribute = 3;
  std::uint64_t seed = 0;
  std::vector<std::string> attribute_names;
  // Per attribute, strictly increasing bin centres. A column with fewer
  // distinct values than requested bins gets one centre per distinct value.
  std::vector<std::vector<double>> centroids;

  std::size_t num_attributes() const { return centroids.size(); }
  bool clamped(std::size_t a) const { return centroids.at(a).size() < bins_per_attribute; }
  // Index of the nearest centre; equidistant values take the lower index.
  Code encode(std::size_t a, double value) const;
  Discretizer project(std::span<const std::size_t> attrs) const;
};

// One-dimensional K-Means per column. Column a uses seed
// derive_seed(seed, a), so results do not depend on execution order.
Discretizer fit_discretizer(const RawMatrix& m, std::size_t bins, std::uint64_t seed,
                            Exec exec = Exec::parallel);

DecisionTable discretize(const RawMatrix& m, const Discretizer& disc);

}  // namespace roughsel
