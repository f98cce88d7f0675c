#include "roughsel/serialize.hpp"

#include <sstream>

namespace roughsel {

namespace {

Json rate_json(const std::optional<double>& r) { return r ? Json(*r) : Json("undefined"); }

Json dependency_json(const Dependency& d) {
  return Json{{"positive", d.positive}, {"universe", d.universe}, {"gamma", d.value()}};
}

}  // namespace

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  return Matrix::from_rows(j.get<std::vector<std::vector<double>>>());
}

Json to_json(const Discretizer& d) {
  Json cols = Json::array();
  for (std::size_t a = 0; a < d.num_attributes(); ++a) {
    cols.push_back({{"attribute", d.attribute_names[a]},
                    {"bins", d.centroids[a].size()},
                    {"clamped", d.clamped(a)},
                    {"centroids", d.centroids[a]}});
  }
  return Json{{"method", "kmeans-1d"},
              {"bins_requested", d.bins_per_attribute},
              {"seed", d.seed},
              {"clamped_columns", [&] {
                 std::size_t n = 0;
                 for (std::size_t a = 0; a < d.num_attributes(); ++a) n += d.clamped(a);
                 return n;
               }()},
              {"columns", cols}};
}

Discretizer discretizer_from_json(const Json& j) {
  Discretizer d;
  d.bins_per_attribute = j.at("bins_requested").get<std::size_t>();
  d.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& c : j.at("columns")) {
    d.attribute_names.push_back(c.at("attribute").get<std::string>());
    d.centroids.push_back(c.at("centroids").get<std::vector<double>>());
  }
  return d;
}

Json to_json(const ReductResult& r, const DecisionTable& table) {
  Json names = Json::array(), indices = Json::array(), trace = Json::array();
  for (auto a : r.selected) {
    names.push_back(table.attribute_names()[a]);
    indices.push_back(a);
  }
  for (const auto& s : r.trace) {
    trace.push_back({{"attribute", table.attribute_names()[s.attribute]},
                     {"index", s.attribute},
                     {"gamma", s.gamma.value()},
                     {"positive", s.gamma.positive},
                     {"forced", s.forced}});
  }
  return Json{{"selected", names},
              {"selected_indices", indices},
              {"gamma_trace", trace},
              {"gamma_full", dependency_json(r.gamma_full)},
              {"reached_full", r.reached_full}};
}

std::vector<std::string> selected_names_from_json(const Json& j) {
  return j.at("selected").get<std::vector<std::string>>();
}

Json to_json(const KMeansModel& m) {
  return Json{{"algorithm", "kmeans"},
              {"k", m.centroids.rows()},
              {"seed", m.seed},
              {"iterations", m.iterations},
              {"inertia", m.inertia},
              {"inertia_history", m.inertia_history},
              {"centroids", to_json(m.centroids)},
              {"assignments", m.assignments}};
}

Json to_json(const FcmModel& m) {
  return Json{{"algorithm", "fcm"},
              {"c", m.centroids.rows()},
              {"m", m.m},
              {"seed", m.seed},
              {"iterations", m.iterations},
              {"centroids", to_json(m.centroids)},
              {"membership", to_json(m.membership)}};
}

KMeansModel kmeans_from_json(const Json& j) {
  KMeansModel m;
  m.seed = j.at("seed").get<std::uint64_t>();
  m.iterations = j.at("iterations").get<std::size_t>();
  m.inertia = j.at("inertia").get<double>();
  m.inertia_history = j.at("inertia_history").get<std::vector<double>>();
  m.centroids = matrix_from_json(j.at("centroids"));
  m.assignments = j.at("assignments").get<std::vector<std::size_t>>();
  return m;
}

FcmModel fcm_from_json(const Json& j) {
  FcmModel m;
  m.m = j.at("m").get<double>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.iterations = j.at("iterations").get<std::size_t>();
  m.centroids = matrix_from_json(j.at("centroids"));
  m.membership = matrix_from_json(j.at("membership"));
  return m;
}

Json to_json(const NetworkConfig& c) {
  return Json{{"input_dim", c.input_dim},
              {"hidden_sizes", c.hidden_sizes},
              {"output_dim", c.output_dim},
              {"learning_rate", c.learning_rate},
              {"epochs", c.epochs},
              {"seed", c.seed},
              {"weight_init_scale", c.weight_init_scale},
              {"mode", c.mode == UpdateMode::stochastic ? "stochastic" : "full_batch"},
              {"activation", "sigmoid"},
              {"loss", "squared_error"}};
}

Json to_json(const Network& net, const NetworkConfig& config) {
  Json layers = Json::array();
  for (const auto& l : net.layers) layers.push_back({{"weights", to_json(l.weights)}, {"bias", l.bias}});
  return Json{{"layer_sizes", net.layer_sizes()}, {"config", to_json(config)}, {"layers", layers}};
}

Network network_from_json(const Json& j) {
  Network net;
  for (const auto& l : j.at("layers"))
    net.layers.push_back({matrix_from_json(l.at("weights")), l.at("bias").get<std::vector<double>>()});
  return net;
}

std::string loss_csv(const TrainReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "epoch,mse\n";
  for (std::size_t e = 0; e < r.epoch_mse.size(); ++e) os << e + 1 << ',' << r.epoch_mse[e] << '\n';
  return os.str();
}

Json to_json(const ConfusionReport& r) {
  const long acc = accuracy_ten_thousandths(r.accuracy);
  return Json{{"positive_class", r.positive_class},
              {"counts", {{"tp", r.tp}, {"fp", r.fp}, {"fn", r.fn}, {"tn", r.tn}}},
              {"n", r.n},
              {"rates",
               {{"tp_rate", rate_json(r.tp_rate)},
                {"fn_rate", rate_json(r.fn_rate)},
                {"tn_rate", rate_json(r.tn_rate)},
                {"fp_rate", rate_json(r.fp_rate)}}},
              {"accuracy", r.accuracy},
              {"error", r.error},
              {"accuracy_4dp", format_fixed4(acc)},
              {"error_4dp", format_fixed4(10000 - acc)}};
}

Json to_json(const ClusterMapping& m) {
  return Json{{"cluster_to_class", m.cluster_to_class},
              {"agreement", m.agreement},
              {"mapped_accuracy", m.mapped_accuracy},
              {"method", m.exhaustive ? "permutation" : "majority_vote"}};
}

}  // namespace roughsel
