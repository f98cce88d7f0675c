#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "roughsel/classifier.hpp"
#include "roughsel/clustering.hpp"
#include "roughsel/evaluation.hpp"
#include "roughsel/roughset.hpp"
#include "roughsel/serialize.hpp"
#include "roughsel/table.hpp"

namespace roughsel {

// A pipeline stage failed on otherwise well-formed input.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// ---- synthetic data ------------------------------------------------------

struct SyntheticSpec {
  std::size_t samples = 60;
  std::size_t informative = 2;
  std::size_t noise = 48;
  std::size_t classes = 2;
  // Distance between adjacent class means of an informative gene, in units
  // of the (unit) within-class standard deviation.
  double separation = 4.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticData {
  RawMatrix matrix;
  std::vector<std::size_t> informative;  // column indices, sorted
};

// Informative genes ~ N(class * separation, 1); noise genes ~ N(0, 1).
// Informative columns sit at random positions among all columns.
SyntheticData generate_synthetic(const SyntheticSpec& spec);
Json truth_json(const SyntheticData& data, const SyntheticSpec& spec);
// Writes the CSV and a "<stem>.truth.json" sidecar next to it; returns the
// sidecar path.
std::filesystem::path write_synthetic(const SyntheticData& data, const SyntheticSpec& spec,
                                      const std::filesystem::path& csv_path);

// ---- pipeline --------------------------------------------------------------

enum class ReductMethod { quick, exhaustive };

struct PipelineConfig {
  std::filesystem::path input;
  CsvOptions csv;
  std::string dataset_name;  // defaults to the input file stem
  std::size_t bins = 3;
  ReductMethod method = ReductMethod::quick;
  bool run_kmeans = true;
  bool run_fcm = true;
  double fcm_m = 2.0;
  std::size_t max_iter = 300;
  double tol = 1e-6;
  std::size_t epochs = 500;
  std::vector<std::size_t> hidden;  // empty -> NetworkConfig::default_hidden
  double learning_rate = 0.5;
  double weight_init_scale = 0.5;
  double train_fraction = 0.7;
  std::string positive_class;  // class name; empty -> first class in the file
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;

  void validate() const;
  // Everything except out_dir, so manifests do not depend on where they are written.
  Json to_json() const;
  // Keys missing from j keep the values already in base.
  static PipelineConfig from_json(const Json& j, PipelineConfig base);
  static PipelineConfig from_json(const Json& j);
};

ReductMethod parse_reduct_method(std::string_view s);
std::string_view to_string(ReductMethod m);

// Seeds handed to each stage, all derived from the master seed.
struct StageSeeds {
  std::uint64_t discretize, kmeans, fcm, split, bpn;
  static StageSeeds from_master(std::uint64_t master);
  Json to_json() const;
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Per-class shuffle, first round(fraction * count) go to training. Classes
// with two or more samples keep at least one sample on each side.
Split stratified_split(std::span<const Code> labels, double train_fraction, std::uint64_t seed);

// BPN inputs: codes scaled to [0, 1] by (levels - 1).
Matrix scaled_codes(const DecisionTable& table);

// Reduct selection in selection order, plus the full reduct list for the
// exhaustive method.
struct ReductOutcome {
  ReductResult result;
  std::vector<AttributeSet> all_reducts;
};
ReductOutcome select_reduct(const DecisionTable& table, ReductMethod method);
// reduct.json contents; the exhaustive method adds every reduct and the core.
Json reduct_json(const ReductOutcome& outcome, const DecisionTable& table, ReductMethod method);

struct ClusterOutcome {
  std::optional<KMeansModel> kmeans;
  std::optional<FcmModel> fcm;
  std::optional<ClusterMapping> kmeans_mapping, fcm_mapping;
};

// K-Means and/or FCM on the raw values of the selected columns with one
// cluster per decision class, each mapped onto the classes.
ClusterOutcome cluster_stage(const RawMatrix& data, std::span<const std::size_t> selected,
                             const PipelineConfig& config);

struct ClassifyOutcome {
  NetworkConfig config;
  Network network;
  TrainReport report;
  Split split;
  // Rows the predictions refer to: the test split, or the training split
  // when the test split is empty.
  std::vector<std::size_t> evaluated_rows;
  std::vector<std::size_t> predictions;
  bool evaluated_on_test = true;
};

// BPN trained on the scaled codes of the selected columns.
ClassifyOutcome classify_stage(const DecisionTable& table, std::span<const std::size_t> selected,
                               const PipelineConfig& config);

struct Analysis {
  Discretizer discretizer;
  DecisionTable table;
  ReductOutcome reduct;
  std::vector<std::string> selected_names;
  ClusterOutcome clusters;
  ClassifyOutcome bpn;
  std::size_t positive_class = 0;
  std::vector<MetricRow> rows;  // methods: K-Means, FCM, BPN
};

// All stages in memory. Throws StageError naming the failing stage.
Analysis analyze(const RawMatrix& data, const PipelineConfig& config);

struct RunReport {
  Analysis analysis;
  Json manifest;
  std::filesystem::path manifest_path;
};

// Loads the input, runs analyze() and writes every artifact plus
// manifest.json into config.out_dir. On failure the manifest is still
// written with "complete": false and the failing stage.
RunReport run_pipeline(const PipelineConfig& config);

std::string sha256_hex(std::string_view bytes);

}  // namespace roughsel
