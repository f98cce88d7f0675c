#pragma once

#include <json.hpp>

#include "roughsel/classifier.hpp"
#include "roughsel/clustering.hpp"
#include "roughsel/evaluation.hpp"
#include "roughsel/roughset.hpp"
#include "roughsel/table.hpp"

namespace roughsel {

using Json = nlohmann::ordered_json;

Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

// Per-column centres, bin counts and clamping, one entry per attribute.
Json to_json(const Discretizer& d);
Discretizer discretizer_from_json(const Json& j);

// Selected attribute names and indices, dependency trace, gamma of the full
// attribute set and whether it was reached.
Json to_json(const ReductResult& r, const DecisionTable& table);
// Names of the selected attributes, in selection order.
std::vector<std::string> selected_names_from_json(const Json& j);

Json to_json(const KMeansModel& m);
Json to_json(const FcmModel& m);
KMeansModel kmeans_from_json(const Json& j);
FcmModel fcm_from_json(const Json& j);

Json to_json(const NetworkConfig& c);
Json to_json(const Network& net, const NetworkConfig& config);
Network network_from_json(const Json& j);
// Per-epoch loss as "epoch,mse" lines.
std::string loss_csv(const TrainReport& r);

Json to_json(const ConfusionReport& r);
Json to_json(const ClusterMapping& m);

}  // namespace roughsel
