// roughsel: rough-set gene selection, clustering and BPN classification.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "roughsel/pipeline.hpp"

namespace fs = std::filesystem;
using namespace roughsel;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kStage = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flag values plus the options they came from, so that only flags the user
// actually passed override the config file.
struct Flags {
  std::string config, input, class_column, delimiter, method, cluster, out, positive_class, dataset;
  std::string format = "json";
  std::size_t bins = 3, epochs = 500, max_iter = 300;
  std::uint64_t seed = 0;
  double fcm_m = 2.0, lr = 0.5, train_fraction = 0.7, tol = 1e-6;
  std::vector<std::size_t> hidden;
  bool no_header = false;
  std::map<std::string, CLI::Option*> given;

  bool has(const std::string& name) const {
    auto it = given.find(name);
    return it != given.end() && it->second->count() > 0;
  }
};

void add_io_flags(CLI::App* app, Flags& f, const std::string& input_help) {
  f.given["config"] = app->add_option("--config", f.config, "JSON config file; flags override its values");
  f.given["input"] = app->add_option("--input", f.input, input_help);
  f.given["class-column"] =
      app->add_option("--class-column", f.class_column, "class column: name, zero-based index, first or last");
  f.given["delimiter"] = app->add_option("--delimiter", f.delimiter, "field delimiter (default ','; 'tab' for tabs)");
  f.given["no-header"] = app->add_flag("--no-header", f.no_header, "input has no header row");
  f.given["seed"] = app->add_option("--seed", f.seed, "master seed");
  f.given["out"] = app->add_option("--out", f.out, "output directory");
  f.given["format"] = app->add_option("--format", f.format, "stdout format")->check(CLI::IsMember({"json", "table"}));
}

void add_bins(CLI::App* app, Flags& f) {
  f.given["bins"] = app->add_option("--bins", f.bins, "bins per gene")->check(CLI::PositiveNumber);
}

void add_method(CLI::App* app, Flags& f) {
  f.given["method"] =
      app->add_option("--method", f.method, "reduct search")->check(CLI::IsMember({"quick", "exhaustive"}));
}

void add_cluster_flags(CLI::App* app, Flags& f) {
  f.given["cluster"] = app->add_option("--cluster", f.cluster, "algorithms to run: kmeans,fcm")
                           ->check([](const std::string& v) -> std::string {
                             std::stringstream ss(v);
                             for (std::string part; std::getline(ss, part, ',');)
                               if (part != "kmeans" && part != "fcm") return "unknown algorithm '" + part + "'";
                             return {};
                           });
  f.given["fcm-m"] = app->add_option("--fcm-m", f.fcm_m, "FCM fuzzifier m > 1");
  f.given["max-iter"] = app->add_option("--max-iter", f.max_iter, "clustering iteration cap");
  f.given["tol"] = app->add_option("--tol", f.tol, "clustering convergence tolerance");
}

void add_bpn_flags(CLI::App* app, Flags& f) {
  f.given["epochs"] = app->add_option("--epochs", f.epochs, "BPN training epochs");
  f.given["hidden"] = app->add_option("--hidden", f.hidden, "hidden layer widths, e.g. 8 or 8,4")->delimiter(',');
  f.given["lr"] = app->add_option("--lr", f.lr, "BPN learning rate");
  f.given["train-fraction"] = app->add_option("--train-fraction", f.train_fraction, "stratified training share");
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    throw UsageError(path.string() + ": " + e.what());
  }
}

PipelineConfig resolve(const Flags& f) {
  PipelineConfig c;
  if (!f.config.empty()) {
    try {
      c = PipelineConfig::from_json(read_json_file(f.config));
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      throw UsageError("config " + f.config + ": " + e.what());
    }
  }
  if (f.has("input")) c.input = f.input;
  if (f.has("class-column")) c.csv.class_column = f.class_column;
  if (f.has("delimiter")) c.csv.delimiter = f.delimiter == "tab" || f.delimiter == "\\t" ? '\t' : f.delimiter.at(0);
  if (f.has("no-header")) c.csv.has_header = false;
  if (f.has("seed")) c.seed = f.seed;
  if (f.has("out")) c.out_dir = f.out;
  if (f.has("bins")) c.bins = f.bins;
  if (f.has("method")) c.method = parse_reduct_method(f.method);
  if (f.has("cluster")) {
    c.run_kmeans = f.cluster.find("kmeans") != std::string::npos;
    c.run_fcm = f.cluster.find("fcm") != std::string::npos;
  }
  if (f.has("fcm-m")) c.fcm_m = f.fcm_m;
  if (f.has("max-iter")) c.max_iter = f.max_iter;
  if (f.has("tol")) c.tol = f.tol;
  if (f.has("epochs")) c.epochs = f.epochs;
  if (f.has("hidden")) c.hidden = f.hidden;
  if (f.has("lr")) c.learning_rate = f.lr;
  if (f.has("train-fraction")) c.train_fraction = f.train_fraction;
  if (f.has("positive-class")) c.positive_class = f.positive_class;
  if (f.has("dataset")) c.dataset_name = f.dataset;
  try {
    c.validate();
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
  return c;
}

void require_input(const PipelineConfig& c) {
  if (c.input.empty()) throw UsageError("--input is required");
}

void write_file(const fs::path& dir, const std::string& name, const std::string& content) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw DataError("cannot write " + (dir / name).string());
  out << content;
}

std::vector<std::size_t> indices_of(const std::vector<std::string>& names, const std::vector<std::string>& all) {
  std::vector<std::size_t> out;
  for (const auto& n : names) {
    auto it = std::find(all.begin(), all.end(), n);
    if (it == all.end()) throw DataError("selected attribute '" + n + "' not present in the input");
    out.push_back(static_cast<std::size_t>(it - all.begin()));
  }
  return out;
}

// Selected columns from a reduct.json, or every column when none is given.
std::vector<std::size_t> selection(const std::string& reduct_file, const std::vector<std::string>& names) {
  if (reduct_file.empty()) {
    std::vector<std::size_t> all(names.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return all;
  }
  return indices_of(selected_names_from_json(read_json_file(reduct_file)), names);
}

// Reapplies per-column bin counts from a discretization.json so code scaling
// matches the table the discretizer produced.
DecisionTable with_levels(const DecisionTable& t, const Discretizer& d) {
  if (d.num_attributes() != t.num_attributes()) throw DataError("discretization does not match the table's columns");
  std::vector<std::vector<Code>> cols;
  std::vector<Code> levels;
  for (std::size_t a = 0; a < t.num_attributes(); ++a) {
    cols.emplace_back(t.column(a).begin(), t.column(a).end());
    levels.push_back(std::max<Code>(static_cast<Code>(d.centroids[a].size()), t.levels(a)));
  }
  return DecisionTable(std::move(cols), std::move(levels), {t.decision().begin(), t.decision().end()},
                       t.attribute_names(), t.class_names());
}

// ---- subcommands -----------------------------------------------------------

int cmd_synth(const SyntheticSpec& spec, const std::string& out, const std::string& format) {
  if (out.empty()) throw UsageError("--out FILE is required");
  const auto data = generate_synthetic(spec);
  const auto sidecar = write_synthetic(data, spec, out);
  if (format == "json") {
    std::cout << truth_json(data, spec).dump(2) << '\n';
  } else {
    std::cout << "wrote " << out << " and " << sidecar.string() << '\n';
  }
  return kOk;
}

int cmd_discretize(const Flags& f) {
  const auto cfg = resolve(f);
  require_input(cfg);
  const auto data = load_csv(cfg.input, cfg.csv);
  const auto disc = fit_discretizer(data, cfg.bins, StageSeeds::from_master(cfg.seed).discretize);
  const auto table = discretize(data, disc);
  const Json j = to_json(disc);
  if (!cfg.out_dir.empty()) {
    write_file(cfg.out_dir, "discretization.json", j.dump(2) + "\n");
    std::ostringstream csv;
    write_coded_csv(csv, table);
    write_file(cfg.out_dir, "discretized.csv", csv.str());
  }
  if (f.format == "json") {
    std::cout << j.dump(2) << '\n';
  } else {
    for (std::size_t a = 0; a < disc.num_attributes(); ++a) {
      std::cout << disc.attribute_names[a] << "\tbins=" << disc.centroids[a].size() << '\t';
      for (double c : disc.centroids[a]) std::cout << ' ' << c;
      std::cout << '\n';
    }
  }
  return kOk;
}

int cmd_reduct(const Flags& f) {
  const auto cfg = resolve(f);
  require_input(cfg);
  const auto table = load_coded_csv(cfg.input, cfg.csv);
  const auto outcome = select_reduct(table, cfg.method);
  const Json j = reduct_json(outcome, table, cfg.method);
  if (!cfg.out_dir.empty()) write_file(cfg.out_dir, "reduct.json", j.dump(2) + "\n");
  if (f.format == "json") {
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "selected:";
    for (auto a : outcome.result.selected) std::cout << ' ' << table.attribute_names()[a];
    std::cout << "\ngamma_full: " << outcome.result.gamma_full.value() << '\n';
    for (const auto& s : outcome.result.trace)
      std::cout << "  + " << table.attribute_names()[s.attribute] << "  gamma=" << s.gamma.value()
                << (s.forced ? "  (forced)" : "") << '\n';
  }
  return kOk;
}

int cmd_cluster(const Flags& f, const std::string& reduct_file) {
  const auto cfg = resolve(f);
  require_input(cfg);
  const auto data = load_csv(cfg.input, cfg.csv);
  const auto selected = selection(reduct_file, data.attribute_names);
  if (selected.empty()) throw StageError("cluster", "no attributes selected");
  const auto out = cluster_stage(data, selected, cfg);
  Json summary = Json::object();
  auto report = [&](const char* name, const ClusterMapping& m) {
    summary[name] = to_json(m);
  };
  if (out.kmeans) report("kmeans", *out.kmeans_mapping);
  if (out.fcm) report("fcm", *out.fcm_mapping);
  if (!cfg.out_dir.empty()) {
    if (out.kmeans) write_file(cfg.out_dir, "kmeans.json", to_json(*out.kmeans).dump(2) + "\n");
    if (out.fcm) write_file(cfg.out_dir, "fcm.json", to_json(*out.fcm).dump(2) + "\n");
  }
  if (f.format == "json") {
    std::cout << summary.dump(2) << '\n';
  } else {
    for (const auto& [name, m] : summary.items())
      std::cout << name << "\tmapped accuracy " << m["mapped_accuracy"].get<double>() << '\n';
  }
  return kOk;
}

int cmd_classify(const Flags& f, const std::string& reduct_file, const std::string& discretization_file) {
  const auto cfg = resolve(f);
  require_input(cfg);
  auto table = load_coded_csv(cfg.input, cfg.csv);
  if (!discretization_file.empty())
    table = with_levels(table, discretizer_from_json(read_json_file(discretization_file)));
  const auto selected = selection(reduct_file, table.attribute_names());
  const auto out = classify_stage(table, selected, cfg);

  std::ostringstream preds;
  preds << "sample,truth,split,bpn_class\n";
  const char* split = out.evaluated_on_test ? "test" : "train";
  for (std::size_t j = 0; j < out.evaluated_rows.size(); ++j) {
    const auto i = out.evaluated_rows[j];
    preds << i << ',' << table.class_names()[table.decision()[i]] << ',' << split << ','
          << table.class_names()[out.predictions[j]] << '\n';
  }
  if (!cfg.out_dir.empty()) {
    write_file(cfg.out_dir, "network.json", to_json(out.network, out.config).dump(2) + "\n");
    write_file(cfg.out_dir, "loss.csv", loss_csv(out.report));
    write_file(cfg.out_dir, "bpn_predictions.csv", preds.str());
  }
  std::size_t correct = 0;
  for (std::size_t j = 0; j < out.evaluated_rows.size(); ++j)
    correct += out.predictions[j] == table.decision()[out.evaluated_rows[j]];
  const double acc = out.evaluated_rows.empty() ? 0.0 : double(correct) / double(out.evaluated_rows.size());
  const Json summary{{"layer_sizes", out.network.layer_sizes()},
                     {"epochs", out.config.epochs},
                     {"final_mse", out.report.epoch_mse.empty() ? 0.0 : out.report.epoch_mse.back()},
                     {"final_train_accuracy", out.report.final_train_accuracy},
                     {"evaluated_on", split},
                     {"accuracy", acc}};
  if (f.format == "json") {
    std::cout << summary.dump(2) << '\n';
  } else {
    std::cout << "train accuracy " << out.report.final_train_accuracy << "\n" << split << " accuracy " << acc << '\n';
  }
  return kOk;
}

struct EvalFlags {
  std::string predicted, truth, predicted_column, truth_column, method = "predicted";
  bool map_clusters = false;
};

// One label per non-blank line, or one named column of a CSV with header.
std::vector<std::string> read_labels(const std::string& path, const std::string& column, char delim) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  std::vector<std::string> out;
  std::string line;
  auto trim = [](std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    return s;
  };
  auto split = [&](const std::string& l) {
    std::vector<std::string> cells;
    std::stringstream ss(l);
    for (std::string c; std::getline(ss, c, delim);) cells.push_back(trim(c));
    if (!l.empty() && l.back() == delim) cells.emplace_back();
    return cells;
  };
  if (column.empty()) {
    while (std::getline(in, line))
      if (auto t = trim(line); !t.empty()) out.push_back(t);
    return out;
  }
  if (!std::getline(in, line)) throw DataError(path + ": no header");
  const auto header = split(trim(line));
  const auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end()) throw DataError(path + ": no column '" + column + "'");
  const auto col = static_cast<std::size_t>(it - header.begin());
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split(trim(line));
    out.push_back(col < cells.size() ? cells[col] : std::string());
  }
  return out;
}

int cmd_evaluate(const Flags& f, const EvalFlags& e) {
  if (e.predicted.empty() || e.truth.empty()) throw UsageError("--predicted and --truth are required");
  const char delim = f.delimiter.empty() ? ',' : (f.delimiter == "tab" ? '\t' : f.delimiter[0]);
  auto pred = read_labels(e.predicted, e.predicted_column, delim);
  auto truth = read_labels(e.truth, e.truth_column, delim);
  if (pred.size() != truth.size())
    throw DataError("length mismatch: " + std::to_string(pred.size()) + " predicted vs " +
                    std::to_string(truth.size()) + " truth labels");
  // rows without a prediction (e.g. training rows) are skipped
  std::vector<std::string> p, t;
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (!pred[i].empty() && !truth[i].empty()) {
      p.push_back(pred[i]);
      t.push_back(truth[i]);
    }
  if (t.empty()) throw DataError("no labelled rows to evaluate");

  std::vector<std::string> names;
  auto code = [](std::vector<std::string>& dict, const std::string& s) {
    auto it = std::find(dict.begin(), dict.end(), s);
    if (it != dict.end()) return static_cast<std::size_t>(it - dict.begin());
    dict.push_back(s);
    return dict.size() - 1;
  };
  std::vector<std::size_t> tc, pc;
  for (const auto& s : t) tc.push_back(code(names, s));
  const std::size_t truth_classes = names.size();
  std::optional<ClusterMapping> mapping;
  if (e.map_clusters) {
    std::vector<std::string> clusters;
    std::vector<std::size_t> ids;
    for (const auto& s : p) ids.push_back(code(clusters, s));
    mapping = map_clusters_to_classes(ids, tc);
    pc = mapping->apply(ids);
  } else {
    for (const auto& s : p) pc.push_back(code(names, s));
  }
  std::size_t positive = 0;
  if (f.has("positive-class")) {
    auto it = std::find(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(truth_classes), f.positive_class);
    if (it == names.begin() + static_cast<std::ptrdiff_t>(truth_classes))
      throw DataError("unknown positive class '" + f.positive_class + "'");
    positive = static_cast<std::size_t>(it - names.begin());
  }
  const std::string dataset = f.dataset.empty() ? fs::path(e.truth).stem().string() : f.dataset;
  const std::vector<MetricRow> rows{{dataset, e.method, confusion(pc, tc, positive)}};
  Json j{{"dataset", dataset},
         {"method", e.method},
         {"positive_class", names[positive]},
         {"confusion", to_json(rows[0].report)}};
  if (mapping) j["mapping"] = to_json(*mapping);
  const std::string tables = metrics_table(rows) + "\n" + rate_table(rows, e.method);
  if (!f.out.empty()) {
    write_file(f.out, "evaluation.json", j.dump(2) + "\n");
    write_file(f.out, "metrics.csv", metrics_csv(rows));
    write_file(f.out, "tables.txt", tables);
  }
  if (f.format == "json")
    std::cout << j.dump(2) << '\n';
  else
    std::cout << tables;
  return kOk;
}

int cmd_pipeline(const Flags& f) {
  const auto cfg = resolve(f);
  require_input(cfg);
  if (cfg.out_dir.empty()) throw UsageError("--out DIR is required");
  const auto report = run_pipeline(cfg);
  if (f.format == "json") {
    Json j{{"manifest", report.manifest_path.string()}, {"summary", report.manifest["summary"]}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::ifstream in(cfg.out_dir / "tables.txt");
    std::cout << in.rdbuf();
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rough-set gene selection with K-Means, FCM and BPN classification"};
  app.require_subcommand(1);

  SyntheticSpec synth_spec;
  std::string synth_out, synth_format = "json";
  auto* synth = app.add_subcommand("synth", "generate a synthetic gene-expression CSV with ground truth");
  synth->add_option("--samples", synth_spec.samples, "samples");
  synth->add_option("--informative", synth_spec.informative, "informative genes");
  synth->add_option("--noise", synth_spec.noise, "noise genes");
  synth->add_option("--classes", synth_spec.classes, "classes");
  synth->add_option("--separation", synth_spec.separation, "class separation in standard deviations");
  synth->add_option("--seed", synth_spec.seed, "seed");
  synth->add_option("--out", synth_out, "output CSV; a .truth.json sidecar is written next to it");
  synth->add_option("--format", synth_format, "stdout format")->check(CLI::IsMember({"json", "table"}));

  Flags disc_f, red_f, clu_f, cls_f, eval_f, pipe_f;
  auto* disc = app.add_subcommand("discretize", "fit per-gene 1-D K-Means bins; writes discretization.json and discretized.csv");
  add_io_flags(disc, disc_f, "raw numeric CSV");
  add_bins(disc, disc_f);

  auto* red = app.add_subcommand("reduct", "rough-set reduct of a coded table; writes reduct.json");
  add_io_flags(red, red_f, "coded CSV (e.g. discretized.csv)");
  add_method(red, red_f);

  std::string clu_reduct;
  auto* clu = app.add_subcommand("cluster", "K-Means/FCM on raw values of selected genes; writes kmeans.json, fcm.json");
  add_io_flags(clu, clu_f, "raw numeric CSV");
  clu->add_option("--reduct", clu_reduct, "reduct.json naming the selected genes (default: all)");
  add_cluster_flags(clu, clu_f);

  std::string cls_reduct, cls_disc;
  auto* cls = app.add_subcommand("classify", "train a BPN on selected coded genes; writes network.json, loss.csv");
  add_io_flags(cls, cls_f, "coded CSV (e.g. discretized.csv)");
  cls->add_option("--reduct", cls_reduct, "reduct.json naming the selected genes (default: all)");
  cls->add_option("--discretization", cls_disc, "discretization.json supplying per-gene bin counts");
  add_bpn_flags(cls, cls_f);

  EvalFlags ev;
  auto* eval = app.add_subcommand("evaluate", "confusion report for predicted vs true labels");
  eval->add_option("--predicted", ev.predicted, "predicted labels (one per line, or a CSV with --predicted-column)");
  eval->add_option("--truth", ev.truth, "true labels (one per line, or a CSV with --truth-column)");
  eval->add_option("--predicted-column", ev.predicted_column, "column of --predicted to read");
  eval->add_option("--truth-column", ev.truth_column, "column of --truth to read");
  eval->add_flag("--map-clusters", ev.map_clusters, "predicted values are cluster ids to map onto classes");
  eval->add_option("--method", ev.method, "method name used in the tables");
  eval_f.given["delimiter"] = eval->add_option("--delimiter", eval_f.delimiter, "field delimiter");
  eval_f.given["out"] = eval->add_option("--out", eval_f.out, "output directory");
  eval_f.given["format"] =
      eval->add_option("--format", eval_f.format, "stdout format")->check(CLI::IsMember({"json", "table"}));

  auto* pipe = app.add_subcommand("pipeline", "discretize, reduct, cluster, classify and evaluate in one run");
  add_io_flags(pipe, pipe_f, "raw numeric CSV");
  add_bins(pipe, pipe_f);
  add_method(pipe, pipe_f);
  add_cluster_flags(pipe, pipe_f);
  add_bpn_flags(pipe, pipe_f);

  for (auto [sub, f] : {std::pair{eval, &eval_f}, std::pair{pipe, &pipe_f}}) {
    f->given["positive-class"] = sub->add_option("--positive-class", f->positive_class, "positive class name");
    f->given["dataset"] = sub->add_option("--dataset", f->dataset, "dataset name used in the tables");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*synth) return cmd_synth(synth_spec, synth_out, synth_format);
    if (*disc) return cmd_discretize(disc_f);
    if (*red) return cmd_reduct(red_f);
    if (*clu) return cmd_cluster(clu_f, clu_reduct);
    if (*cls) return cmd_classify(cls_f, cls_reduct, cls_disc);
    if (*eval) return cmd_evaluate(eval_f, ev);
    if (*pipe) return cmd_pipeline(pipe_f);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const StageError& e) {
    std::cerr << "stage '" << e.stage() << "' failed: " << e.what() << '\n';
    return kStage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kStage;
  }
  return kUsage;
}
