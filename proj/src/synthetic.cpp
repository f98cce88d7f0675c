#include <algorithm>
#include <fstream>
#include <numeric>

#include "roughsel/pipeline.hpp"
#include "roughsel/seeds.hpp"

namespace roughsel {

void SyntheticSpec::validate() const {
  if (classes < 1) throw DataError("synthetic: need at least one class");
  if (samples < classes) throw DataError("synthetic: samples must be at least the class count");
  if (informative < 1) throw DataError("synthetic: need at least one informative gene");
  if (!(separation >= 0.0)) throw DataError("synthetic: separation must be non-negative");
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const std::size_t genes = spec.informative + spec.noise;

  std::vector<std::size_t> columns(genes);
  std::iota(columns.begin(), columns.end(), 0);
  std::shuffle(columns.begin(), columns.end(), rng);
  std::vector<std::size_t> informative(columns.begin(), columns.begin() + static_cast<std::ptrdiff_t>(spec.informative));
  std::sort(informative.begin(), informative.end());
  std::vector<bool> is_informative(genes, false);
  for (auto c : informative) is_informative[c] = true;

  std::vector<Code> labels(spec.samples);
  for (std::size_t i = 0; i < spec.samples; ++i) labels[i] = static_cast<Code>(i % spec.classes);
  std::shuffle(labels.begin(), labels.end(), rng);

  SyntheticData out;
  out.informative = informative;
  RawMatrix& m = out.matrix;
  m.values = Matrix(spec.samples, genes);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < spec.samples; ++i) {
    for (std::size_t g = 0; g < genes; ++g) {
      const double mean = is_informative[g] ? spec.separation * static_cast<double>(labels[i]) : 0.0;
      m.values(i, g) = mean + unit(rng);
    }
  }
  const std::size_t width = std::to_string(genes > 0 ? genes - 1 : 0).size();
  for (std::size_t g = 0; g < genes; ++g) {
    std::string num = std::to_string(g);
    m.attribute_names.push_back("gene_" + std::string(width - num.size(), '0') + num);
  }
  // recode by first appearance so the matrix matches what load_csv returns
  std::vector<Code> recode(spec.classes, static_cast<Code>(spec.classes));
  for (auto l : labels) {
    if (recode[l] == spec.classes) {
      recode[l] = static_cast<Code>(m.class_names.size());
      m.class_names.push_back("C" + std::to_string(l));
    }
    m.class_labels.push_back(recode[l]);
  }
  return out;
}

Json truth_json(const SyntheticData& data, const SyntheticSpec& spec) {
  Json names = Json::array();
  for (auto c : data.informative) names.push_back(data.matrix.attribute_names[c]);
  return Json{{"samples", spec.samples},
              {"informative", spec.informative},
              {"noise", spec.noise},
              {"classes", spec.classes},
              {"separation", spec.separation},
              {"seed", spec.seed},
              {"informative_columns", names},
              {"informative_indices", data.informative}};
}

std::filesystem::path write_synthetic(const SyntheticData& data, const SyntheticSpec& spec,
                                      const std::filesystem::path& csv_path) {
  {
    std::ofstream out(csv_path);
    if (!out) throw DataError("cannot write " + csv_path.string());
    write_csv(out, data.matrix);
  }
  auto sidecar = csv_path;
  sidecar.replace_extension(".truth.json");
  std::ofstream out(sidecar);
  if (!out) throw DataError("cannot write " + sidecar.string());
  out << truth_json(data, spec).dump(2) << '\n';
  return sidecar;
}

}  // namespace roughsel
