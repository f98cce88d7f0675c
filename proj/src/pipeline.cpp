#include "roughsel/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include "roughsel/seeds.hpp"

namespace roughsel {

namespace {

constexpr const char* kToolVersion = "1.0.0";

std::vector<std::size_t> widen(std::span<const Code> v) { return {v.begin(), v.end()}; }

using StageHook = std::function<void(std::string_view stage, const Analysis&)>;

template <typename F>
auto in_stage(std::string_view stage, F&& body) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const DataError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(std::string(stage), e.what());
  }
}

std::size_t resolve_positive_class(const RawMatrix& data, const std::string& name) {
  if (name.empty()) return 0;
  const auto it = std::find(data.class_names.begin(), data.class_names.end(), name);
  if (it == data.class_names.end()) throw DataError("unknown positive class '" + name + "'");
  return static_cast<std::size_t>(it - data.class_names.begin());
}

Analysis analyze_impl(const RawMatrix& data, const PipelineConfig& cfg, const StageHook& hook) {
  cfg.validate();
  data.validate();
  const StageSeeds seeds = StageSeeds::from_master(cfg.seed);
  const std::string dataset = cfg.dataset_name.empty() ? cfg.input.stem().string() : cfg.dataset_name;
  const std::vector<std::size_t> truth = widen(data.class_labels);
  const std::size_t classes = data.num_classes();

  Analysis a;
  a.positive_class = resolve_positive_class(data, cfg.positive_class);

  in_stage("discretize", [&] {
    a.discretizer = fit_discretizer(data, cfg.bins, seeds.discretize);
    a.table = discretize(data, a.discretizer);
  });
  if (hook) hook("discretize", a);

  in_stage("reduct", [&] {
    a.reduct = select_reduct(a.table, cfg.method);
    const auto& r = a.reduct.result;
    if (classes > 1 && (r.gamma_full.positive == 0 || r.selected.empty())) {
      throw StageError("reduct",
                       "the decision does not depend on the condition attributes (gamma of the full set is 0), "
                       "so no reduct can classify any sample; try more bins");
    }
    for (auto s : r.selected) a.selected_names.push_back(a.table.attribute_names()[s]);
  });
  if (hook) hook("reduct", a);

  const auto& selected = a.reduct.result.selected;
  in_stage("cluster", [&] { a.clusters = cluster_stage(data, selected, cfg); });
  if (hook) hook("cluster", a);

  in_stage("classify", [&] { a.bpn = classify_stage(a.table, selected, cfg); });
  if (hook) hook("classify", a);

  in_stage("evaluate", [&] {
    const auto& c = a.clusters;
    if (c.kmeans)
      a.rows.push_back({dataset, "K-Means", confusion(c.kmeans_mapping->apply(c.kmeans->assignments), truth, a.positive_class)});
    if (c.fcm)
      a.rows.push_back({dataset, "FCM", confusion(c.fcm_mapping->apply(hard_labels(*c.fcm)), truth, a.positive_class)});
    std::vector<std::size_t> eval_truth;
    for (auto i : a.bpn.evaluated_rows) eval_truth.push_back(truth[i]);
    a.rows.push_back({dataset, "BPN", confusion(a.bpn.predictions, eval_truth, a.positive_class)});
  });
  if (hook) hook("evaluate", a);
  return a;
}

class ArtifactLog {
 public:
  explicit ArtifactLog(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw StageError("write", "cannot write " + (dir_ / name).string());
    out << content;
    entries_.push_back({{"file", name}, {"bytes", content.size()}, {"sha256", sha256_hex(content)}});
  }

  const Json& entries() const { return entries_; }

 private:
  std::filesystem::path dir_;
  Json entries_ = Json::array();
};

std::string predictions_csv(const Analysis& a, const RawMatrix& data) {
  std::ostringstream os;
  os << "sample,truth,kmeans_cluster,kmeans_class,fcm_cluster,fcm_class,split,bpn_class\n";
  std::vector<std::string> split(data.num_samples(), "train");
  std::vector<std::string> bpn(data.num_samples());
  for (auto i : a.bpn.split.test) split[i] = "test";
  for (std::size_t j = 0; j < a.bpn.evaluated_rows.size(); ++j)
    bpn[a.bpn.evaluated_rows[j]] = data.class_names[a.bpn.predictions[j]];
  const auto& c = a.clusters;
  const auto fcm_hard = c.fcm ? hard_labels(*c.fcm) : std::vector<std::size_t>{};
  for (std::size_t i = 0; i < data.num_samples(); ++i) {
    os << i << ',' << data.class_names[data.class_labels[i]] << ',';
    if (c.kmeans)
      os << c.kmeans->assignments[i] << ',' << data.class_names[c.kmeans_mapping->cluster_to_class[c.kmeans->assignments[i]]];
    else
      os << ',';
    os << ',';
    if (c.fcm)
      os << fcm_hard[i] << ',' << data.class_names[c.fcm_mapping->cluster_to_class[fcm_hard[i]]];
    else
      os << ',';
    os << ',' << split[i] << ',' << bpn[i] << '\n';
  }
  return os.str();
}

Json evaluation_json(const Analysis& a, const RawMatrix& data) {
  Json rows = Json::array();
  for (const auto& r : a.rows) {
    Json row{{"dataset", r.dataset}, {"method", r.method}, {"confusion", to_json(r.report)}};
    if (r.method == "K-Means" && a.clusters.kmeans_mapping) row["mapping"] = to_json(*a.clusters.kmeans_mapping);
    if (r.method == "FCM" && a.clusters.fcm_mapping) row["mapping"] = to_json(*a.clusters.fcm_mapping);
    if (r.method == "BPN") row["evaluated_on"] = a.bpn.evaluated_on_test ? "test" : "train";
    rows.push_back(std::move(row));
  }
  return Json{{"positive_class", data.class_names[a.positive_class]}, {"rows", rows}};
}

std::string tables_text(const Analysis& a) {
  std::string out = metrics_table(a.rows);
  for (const char* method : {"K-Means", "FCM", "BPN"}) {
    if (std::none_of(a.rows.begin(), a.rows.end(), [&](const MetricRow& r) { return r.method == method; }))
      continue;
    out += '\n' + rate_table(a.rows, method);
  }
  return out;
}

}  // namespace

void PipelineConfig::validate() const {
  if (bins < 1) throw DataError("bins must be at least 1");
  if (!(fcm_m > 1.0)) throw DataError("fcm m must be greater than 1");
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) throw DataError("train fraction must be in (0, 1]");
  if (!(learning_rate > 0.0)) throw DataError("learning rate must be positive");
  for (auto h : hidden)
    if (h < 1) throw DataError("hidden layer widths must be positive");
}

Json PipelineConfig::to_json() const {
  Json clusters = Json::array();
  if (run_kmeans) clusters.push_back("kmeans");
  if (run_fcm) clusters.push_back("fcm");
  return Json{{"input", input.string()},
              {"delimiter", std::string(1, csv.delimiter)},
              {"has_header", csv.has_header},
              {"class_column", csv.class_column},
              {"dataset_name", dataset_name},
              {"bins", bins},
              {"method", std::string(to_string(method))},
              {"cluster", clusters},
              {"fcm_m", fcm_m},
              {"max_iter", max_iter},
              {"tol", tol},
              {"epochs", epochs},
              {"hidden", hidden},
              {"learning_rate", learning_rate},
              {"weight_init_scale", weight_init_scale},
              {"train_fraction", train_fraction},
              {"positive_class", positive_class},
              {"seed", seed}};
}

PipelineConfig PipelineConfig::from_json(const Json& j, PipelineConfig c) {
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
  };
  if (j.contains("input")) c.input = j.at("input").get<std::string>();
  if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
  if (j.contains("delimiter")) {
    const auto d = j.at("delimiter").get<std::string>();
    c.csv.delimiter = d == "tab" || d == "\\t" ? '\t' : (d.empty() ? ',' : d[0]);
  }
  get("has_header", c.csv.has_header);
  if (j.contains("class_column")) {
    const auto& v = j.at("class_column");
    c.csv.class_column = v.is_number() ? std::to_string(v.get<std::size_t>()) : v.get<std::string>();
  }
  get("dataset_name", c.dataset_name);
  get("bins", c.bins);
  if (j.contains("method")) c.method = parse_reduct_method(j.at("method").get<std::string>());
  if (j.contains("cluster")) {
    const auto& v = j.at("cluster");
    std::vector<std::string> algos;
    if (v.is_string()) {
      std::stringstream ss(v.get<std::string>());
      for (std::string part; std::getline(ss, part, ',');) algos.push_back(part);
    } else {
      algos = v.get<std::vector<std::string>>();
    }
    c.run_kmeans = std::find(algos.begin(), algos.end(), "kmeans") != algos.end();
    c.run_fcm = std::find(algos.begin(), algos.end(), "fcm") != algos.end();
  }
  get("fcm_m", c.fcm_m);
  get("max_iter", c.max_iter);
  get("tol", c.tol);
  get("epochs", c.epochs);
  get("hidden", c.hidden);
  get("learning_rate", c.learning_rate);
  get("weight_init_scale", c.weight_init_scale);
  get("train_fraction", c.train_fraction);
  get("positive_class", c.positive_class);
  get("seed", c.seed);
  return c;
}

PipelineConfig PipelineConfig::from_json(const Json& j) { return from_json(j, PipelineConfig{}); }

ReductMethod parse_reduct_method(std::string_view s) {
  if (s == "quick") return ReductMethod::quick;
  if (s == "exhaustive") return ReductMethod::exhaustive;
  throw DataError("unknown reduct method '" + std::string(s) + "' (expected quick or exhaustive)");
}

std::string_view to_string(ReductMethod m) { return m == ReductMethod::quick ? "quick" : "exhaustive"; }

StageSeeds StageSeeds::from_master(std::uint64_t master) {
  return {derive_seed(master, "discretize"), derive_seed(master, "kmeans"), derive_seed(master, "fcm"),
          derive_seed(master, "split"), derive_seed(master, "bpn")};
}

Json StageSeeds::to_json() const {
  return Json{{"discretize", discretize}, {"kmeans", kmeans}, {"fcm", fcm}, {"split", split}, {"bpn", bpn}};
}

Split stratified_split(std::span<const Code> labels, double train_fraction, std::uint64_t seed) {
  Rng rng(seed);
  const Code classes = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  Split s;
  for (Code c = 0; c < classes; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == c) members.push_back(i);
    std::shuffle(members.begin(), members.end(), rng);
    auto take = static_cast<std::size_t>(std::lround(train_fraction * static_cast<double>(members.size())));
    if (members.size() >= 2) take = std::clamp<std::size_t>(take, 1, members.size() - 1);
    else take = members.size();
    s.train.insert(s.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(take));
    s.test.insert(s.test.end(), members.begin() + static_cast<std::ptrdiff_t>(take), members.end());
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

Matrix scaled_codes(const DecisionTable& table) {
  Matrix x(table.universe_size(), table.num_attributes());
  for (std::size_t a = 0; a < table.num_attributes(); ++a) {
    const double scale = table.levels(a) > 1 ? static_cast<double>(table.levels(a) - 1) : 1.0;
    for (std::size_t i = 0; i < table.universe_size(); ++i)
      x(i, a) = static_cast<double>(table.code(i, a)) / scale;
  }
  return x;
}

ReductOutcome select_reduct(const DecisionTable& table, ReductMethod method) {
  ReductOutcome out;
  if (method == ReductMethod::quick) {
    out.result = quick_reduct(table);
    return out;
  }
  out.all_reducts = exhaustive_reducts(table);
  std::vector<std::size_t> all(table.num_attributes());
  for (std::size_t a = 0; a < all.size(); ++a) all[a] = a;
  out.result.gamma_full = dependency(table, all);
  if (!out.all_reducts.empty()) out.result.selected = minimal_reducts(out.all_reducts).front();
  out.result.reached_full = dependency(table, out.result.selected) == out.result.gamma_full;
  return out;
}

Json reduct_json(const ReductOutcome& outcome, const DecisionTable& table, ReductMethod method) {
  Json r = to_json(outcome.result, table);
  r["method"] = std::string(to_string(method));
  if (method == ReductMethod::exhaustive) {
    auto names = [&](const AttributeSet& set) {
      Json out = Json::array();
      for (auto x : set) out.push_back(table.attribute_names()[x]);
      return out;
    };
    Json all = Json::array();
    for (const auto& red : outcome.all_reducts) all.push_back(names(red));
    r["reducts"] = all;
    r["core"] = outcome.all_reducts.empty() ? Json::array() : names(core_attributes(outcome.all_reducts));
  }
  return r;
}

ClusterOutcome cluster_stage(const RawMatrix& data, std::span<const std::size_t> selected,
                             const PipelineConfig& cfg) {
  const StageSeeds seeds = StageSeeds::from_master(cfg.seed);
  const std::vector<std::size_t> truth = widen(data.class_labels);
  const Matrix reduced = data.values.select_columns(selected);
  ClusterOutcome out;
  if (reduced.cols() == 0) return out;
  if (cfg.run_kmeans) {
    KMeansOptions ko;
    ko.k = data.num_classes();
    ko.seed = seeds.kmeans;
    ko.max_iter = cfg.max_iter;
    ko.tol = cfg.tol;
    out.kmeans = kmeans(reduced, ko);
    out.kmeans_mapping = map_clusters_to_classes(out.kmeans->assignments, truth);
  }
  if (cfg.run_fcm) {
    FcmOptions fo;
    fo.c = data.num_classes();
    fo.m = cfg.fcm_m;
    fo.seed = seeds.fcm;
    fo.max_iter = cfg.max_iter;
    fo.tol = cfg.tol;
    out.fcm = fcm(reduced, fo);
    out.fcm_mapping = map_clusters_to_classes(hard_labels(*out.fcm), truth);
  }
  return out;
}

ClassifyOutcome classify_stage(const DecisionTable& table, std::span<const std::size_t> selected,
                               const PipelineConfig& cfg) {
  const StageSeeds seeds = StageSeeds::from_master(cfg.seed);
  const DecisionTable reduced = project(table, selected);
  const Matrix x = scaled_codes(reduced);
  const auto truth = widen(table.decision());

  ClassifyOutcome out;
  out.split = stratified_split(table.decision(), cfg.train_fraction, seeds.split);
  out.evaluated_on_test = !out.split.test.empty();
  out.evaluated_rows = out.evaluated_on_test ? out.split.test : out.split.train;

  out.config.input_dim = std::max<std::size_t>(x.cols(), 1);
  out.config.hidden_sizes = cfg.hidden.empty() ? NetworkConfig::default_hidden(x.cols()) : cfg.hidden;
  out.config.output_dim = table.decision_levels();
  out.config.learning_rate = cfg.learning_rate;
  out.config.epochs = cfg.epochs;
  out.config.seed = seeds.bpn;
  out.config.weight_init_scale = cfg.weight_init_scale;
  out.network = init_network(out.config);

  // no selected columns: a single constant input
  const Matrix features = x.cols() == 0 ? Matrix(x.rows(), 1) : x;
  std::vector<std::size_t> train_y;
  for (auto i : out.split.train) train_y.push_back(truth[i]);
  out.report = train(out.network, features.select_rows(out.split.train), train_y, out.config);
  out.predictions = predict(out.network, features.select_rows(out.evaluated_rows));
  return out;
}

Analysis analyze(const RawMatrix& data, const PipelineConfig& config) { return analyze_impl(data, config, {}); }

RunReport run_pipeline(const PipelineConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) throw DataError("cannot create output directory " + config.out_dir.string() + ": " + ec.message());

  ArtifactLog log(config.out_dir);
  RunReport report;
  report.manifest_path = config.out_dir / "manifest.json";
  Json manifest{{"tool", "roughsel"},
                {"version", kToolVersion},
                {"complete", false},
                {"failed_stage", nullptr},
                {"error", nullptr},
                {"seed", config.seed},
                {"stage_seeds", StageSeeds::from_master(config.seed).to_json()},
                {"config", config.to_json()},
                {"choices",
                 {{"clustering_input", "raw values of the selected attributes"},
                  {"bpn_input", "discretized codes of the selected attributes scaled by (levels - 1)"},
                  {"cluster_count", "number of decision classes"},
                  {"bpn_protocol", "stratified train/test split"}}}};

  auto write_manifest = [&] {
    manifest["artifacts"] = log.entries();
    std::ofstream out(report.manifest_path, std::ios::binary);
    out << manifest.dump(2) << '\n';
  };

  std::string current = "load";
  RawMatrix data;
  try {
    data = load_csv(config.input, config.csv);
    manifest["dataset"] = {{"samples", data.num_samples()},
                           {"attributes", data.num_attributes()},
                           {"classes", data.class_names}};
    auto hook = [&](std::string_view stage, const Analysis& a) {
      if (stage == "discretize") {
        log.write("discretization.json", to_json(a.discretizer).dump(2) + "\n");
        std::ostringstream csv;
        write_coded_csv(csv, a.table);
        log.write("discretized.csv", csv.str());
        current = "reduct";
      } else if (stage == "reduct") {
        const Json r = reduct_json(a.reduct, a.table, config.method);
        log.write("reduct.json", r.dump(2) + "\n");
        current = "cluster";
      } else if (stage == "cluster") {
        if (a.clusters.kmeans) log.write("kmeans.json", to_json(*a.clusters.kmeans).dump(2) + "\n");
        if (a.clusters.fcm) log.write("fcm.json", to_json(*a.clusters.fcm).dump(2) + "\n");
        current = "classify";
      } else if (stage == "classify") {
        log.write("network.json", to_json(a.bpn.network, a.bpn.config).dump(2) + "\n");
        log.write("loss.csv", loss_csv(a.bpn.report));
        current = "evaluate";
      } else if (stage == "evaluate") {
        log.write("predictions.csv", predictions_csv(a, data));
        log.write("evaluation.json", evaluation_json(a, data).dump(2) + "\n");
        log.write("tables.txt", tables_text(a));
        log.write("metrics.csv", metrics_csv(a.rows));
      }
    };
    current = "discretize";
    report.analysis = analyze_impl(data, config, hook);
  } catch (const StageError& e) {
    manifest["failed_stage"] = e.stage();
    manifest["error"] = e.what();
    write_manifest();
    throw;
  } catch (const std::exception& e) {
    manifest["failed_stage"] = current;
    manifest["error"] = e.what();
    write_manifest();
    throw;
  }

  const auto& a = report.analysis;
  Json acc = Json::object();
  for (const auto& r : a.rows) acc[r.method] = format_fixed4(accuracy_ten_thousandths(r.report.accuracy));
  manifest["summary"] = {{"selected", a.selected_names},
                         {"gamma_full", a.reduct.result.gamma_full.value()},
                         {"reached_full", a.reduct.result.reached_full},
                         {"accuracy", acc}};
  manifest["complete"] = true;
  write_manifest();
  report.manifest = manifest;
  report.manifest["artifacts"] = log.entries();
  return report;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

}  // namespace roughsel
