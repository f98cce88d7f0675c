// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "roughsel/pipeline.hpp"

using namespace roughsel;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first few failures of a criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ << (notes_.tellp() > 0 ? "; " : "") << what;
  }
  void note(const std::string& s) { info_ << (info_.tellp() > 0 ? "; " : "") << s; }
  Outcome outcome() const {
    std::string d = info_.str();
    if (failures_ > 0) d += (d.empty() ? "" : "; ") + std::to_string(failures_) + " failure(s): " + notes_.str();
    return {failures_ == 0, d};
  }

 private:
  int failures_ = 0;
  std::ostringstream notes_, info_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << std::fixed << v;
  return os.str();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

const std::string kData = ROUGHSEL_TEST_DATA;

// ---- criteria ---------------------------------------------------------------

Outcome rough_set_oracle() {
  Check c;
  std::mt19937_64 rng(20240601);
  std::size_t subsets = 0, full_runs = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const auto t = oracle::random_table(rng, 8, 24, 3);
    const auto m = t.num_attributes();
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
      const auto s = oracle::mask_to_set(mask);
      const double expect = double(oracle::positive_count(t, s)) / double(t.universe_size());
      c.expect(gamma(t, s) == expect, "table " + std::to_string(rep) + ": gamma differs from brute force");
      ++subsets;
    }
    const auto r = quick_reduct(t);
    std::vector<std::size_t> all(m);
    for (std::size_t a = 0; a < m; ++a) all[a] = a;
    if (r.reached_full) {
      ++full_runs;
      c.expect(oracle::positive_count(t, r.selected) == oracle::positive_count(t, all),
               "table " + std::to_string(rep) + ": reached_full but gamma(selected) != gamma(C)");
    }
    const auto reducts = exhaustive_reducts(t);
    const auto brute = oracle::all_reducts(t);
    std::size_t brute_min = SIZE_MAX;
    for (const auto& b : brute) brute_min = std::min(brute_min, b.size());
    c.expect(!reducts.empty() && minimal_reducts(reducts).front().size() == brute_min,
             "table " + std::to_string(rep) + ": minimal reduct size differs");
    c.expect(std::set(reducts.begin(), reducts.end()) == std::set(brute.begin(), brute.end()),
             "table " + std::to_string(rep) + ": reduct sets differ");
  }
  c.note("200 tables, " + std::to_string(subsets) + " subsets, " + std::to_string(full_runs) + " reached_full runs");
  return c.outcome();
}

Outcome worked_examples() {
  Check c;
  CsvOptions csv;
  const auto t1 = load_coded_csv(kData + "/t1.csv", csv);
  const auto t2 = load_coded_csv(kData + "/t2.csv", csv);
  const auto tx = load_coded_csv(kData + "/xor.csv", csv);
  const std::vector<std::size_t> a{0}, b{1}, ab{0, 1};

  auto r = quick_reduct(t1);
  c.expect(r.selected == std::vector<std::size_t>{0} && r.trace.size() == 1 && r.trace[0].gamma.value() == 1.0 &&
               r.reached_full,
           "T1 quick reduct is not [a] with trace [(a, 1.0)]");
  c.expect(exhaustive_reducts(t1) == std::vector<AttributeSet>{{0}}, "T1 reducts are not {{a}}");
  c.expect(gamma(t1, b) == 0.0, "T1 gamma_b != 0");

  c.expect(gamma(t2, a) == 0.5, "T2 gamma != 0.5");

  r = quick_reduct(tx);
  c.expect(gamma(tx, a) == 0.0 && gamma(tx, b) == 0.0 && gamma(tx, ab) == 1.0, "XOR gammas are not 0, 0, 1");
  c.expect(r.selected == std::vector<std::size_t>{0, 1} && r.reached_full, "XOR quick reduct is not [a, b]");
  c.expect(exhaustive_reducts(tx) == std::vector<AttributeSet>{{0, 1}}, "XOR reducts are not {{a, b}}");

  const Partition p{{{0, 1}, {2, 3}}, 4};
  c.expect(lower_approx(p, {0, 1, 2}) == IndexSet{0, 1}, "lower approximation example");
  c.expect(upper_approx(p, {0, 1, 2}) == IndexSet{0, 1, 2, 3}, "upper approximation example");
  const auto reg = regions(p, Partition{{{0}, {1, 2, 3}}, 4});
  c.expect(reg.positive == IndexSet{2, 3} && reg.boundary == IndexSet{0, 1} && reg.negative.empty(),
           "regions example");
  const auto g1 = DecisionTable::from_codes({{0}, {0}, {1}, {1}}, {0, 0, 1, 1});
  c.expect(gamma(g1, a) == 1.0, "gamma example a=[0,0,1,1], d=[0,0,1,1]");
  c.expect(core_attributes({{0, 1}, {0, 2}}) == AttributeSet{0}, "core example");
  return c.outcome();
}

Outcome fcm_normalization() {
  Check c;
  std::mt19937_64 rng(77);
  double worst = 0.0;
  std::size_t snapshots = 0;
  for (int run = 0; run < 50; ++run) {
    const std::size_t n = 5 + rng() % 60, d = 1 + rng() % 4;
    Matrix data(n, d);
    std::normal_distribution<double> g(0.0, 1.0 + double(rng() % 5));
    for (auto& v : data.data()) v = g(rng);
    if (run % 5 == 0)  // duplicated rows
      for (std::size_t i = 1; i < n; i += 2)
        for (std::size_t j = 0; j < d; ++j) data(i, j) = data(i - 1, j);
    FcmOptions o;
    o.c = std::min<std::size_t>(n, 2 + rng() % 4);
    o.m = std::vector<double>{1.25, 1.5, 2.0, 3.0, 10.0}[rng() % 5];
    o.seed = rng();
    o.observer = [&](std::size_t, const Matrix& u) {
      ++snapshots;
      for (std::size_t i = 0; i < u.rows(); ++i) {
        double s = 0.0;
        for (double v : u.row(i)) {
          c.expect(std::isfinite(v) && v >= 0.0 && v <= 1.0, "membership outside [0, 1]");
          s += v;
        }
        worst = std::max(worst, std::abs(s - 1.0));
      }
    };
    fcm(data, o);
  }
  c.expect(worst <= 1e-9, "row sum deviation " + std::to_string(worst));

  // zero distances: a point on a centroid, a point on two coincident centroids,
  // and a data set whose points all coincide
  FcmModel model;
  model.m = 2.0;
  model.centroids = Matrix::from_rows({{0.0, 0.0}, {3.0, 1.0}, {3.0, 1.0}});
  const auto u = fcm_membership(model, Matrix::from_rows({{0.0, 0.0}, {3.0, 1.0}}));
  c.expect(u(0, 0) == 1.0 && u(0, 1) == 0.0 && u(0, 2) == 0.0, "point on a centroid is not crisp");
  c.expect(u(1, 0) == 0.0 && u(1, 1) == 0.5 && u(1, 2) == 0.5, "coincident centroids do not split evenly");
  FcmOptions o;
  o.c = 3;
  const auto flat = fcm(Matrix(6, 2, 4.0), o);
  for (double v : flat.membership.data()) c.expect(std::isfinite(v), "non-finite membership on identical points");
  for (double v : flat.centroids.data()) c.expect(v == 4.0, "centroid drifted on identical points");
  c.note("50 runs, " + std::to_string(snapshots) + " membership snapshots, max |row sum - 1| = " +
         [&] {
           std::ostringstream os;
           os << worst;
           return os.str();
         }());
  return c.outcome();
}

Outcome kmeans_monotone() {
  Check c;
  std::mt19937_64 rng(91);
  std::size_t steps = 0;
  for (int run = 0; run < 100; ++run) {
    const std::size_t n = 2 + rng() % 80, d = 1 + rng() % 5;
    Matrix data(n, d);
    std::normal_distribution<double> g;
    for (auto& v : data.data()) v = g(rng) + double(rng() % 3) * 3.0;
    KMeansOptions o;
    o.k = 1 + rng() % std::min<std::size_t>(n, 6);
    o.seed = rng();
    const auto m = kmeans(data, o);
    for (std::size_t i = 1; i < m.inertia_history.size(); ++i, ++steps)
      c.expect(m.inertia_history[i] <= m.inertia_history[i - 1], "run " + std::to_string(run) + ": inertia rose");
    c.expect(std::abs(m.inertia - m.inertia_history.back()) <= 1e-12 * std::max(1.0, m.inertia),
             "final inertia differs from last history entry");

    KMeansOptions all = o;
    all.k = n;
    c.expect(kmeans(data, all).inertia == 0.0, "k = n inertia not 0");

    KMeansOptions one = o;
    one.k = 1;
    const auto m1 = kmeans(data, one);
    double total = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += data(i, j);
      mean /= double(n);
      c.expect(std::abs(m1.centroids(0, j) - mean) <= 1e-12 * std::max(1.0, std::abs(mean)), "k = 1 centroid != mean");
      for (std::size_t i = 0; i < n; ++i) total += (data(i, j) - mean) * (data(i, j) - mean);
    }
    c.expect(std::abs(m1.inertia - total) <= 1e-9 * std::max(1.0, total), "k = 1 inertia != total scatter");
  }
  c.note("100 runs, " + std::to_string(steps) + " iteration steps checked");
  return c.outcome();
}

Outcome bpn_gradients() {
  Check c;
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    NetworkConfig cfg;
    cfg.input_dim = 1 + rng() % 6;
    const std::size_t depth = 1 + rng() % 2;
    for (std::size_t l = 0; l < depth; ++l) cfg.hidden_sizes.push_back(1 + rng() % 6);
    cfg.output_dim = 1 + rng() % 4;
    cfg.seed = rng();
    cfg.weight_init_scale = 0.5 + unit(rng) * 1.5;
    const auto net = init_network(cfg);
    std::vector<double> x(cfg.input_dim), t(cfg.output_dim, 0.0);
    for (auto& v : x) v = unit(rng);
    t[rng() % cfg.output_dim] = 1.0;
    worst = std::max(worst, gradient_check(net, x, t, 1e-5));
  }
  c.expect(worst < 1e-4, "max relative error " + std::to_string(worst));

  // fixed XOR configuration
  NetworkConfig x;
  x.input_dim = 2;
  x.hidden_sizes = {4};
  x.output_dim = 2;
  x.learning_rate = 0.5;
  x.epochs = 5000;
  x.seed = 1;
  auto net = init_network(x);
  const auto data = Matrix::from_rows({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  const std::vector<std::size_t> labels{0, 1, 1, 0};
  const auto report = train(net, data, labels, x);
  c.expect(report.final_train_accuracy == 1.0, "XOR train accuracy " + fmt(report.final_train_accuracy));
  std::ostringstream w;
  w << worst;
  c.note("100 networks, max relative error " + w.str() + "; XOR accuracy " + fmt(report.final_train_accuracy) +
         ", final mse " + fmt(report.epoch_mse.back(), 6));
  return c.outcome();
}

// Parses "0.1234" as ten-thousandths.
long parse4(const std::string& s) {
  if (s.size() != 6 || s[1] != '.') return -1;
  return std::stol(s.substr(0, 1)) * 10000 + std::stol(s.substr(2));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
  return cells;
}

Outcome metric_identities() {
  Check c;
  std::mt19937_64 rng(314);
  std::vector<MetricRow> rows;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 1 + rng() % 60;
    std::vector<std::size_t> p(n), t(n);
    const double skill = std::uniform_real_distribution<double>(0, 1)(rng);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = rng() % 2;
      p[i] = std::uniform_real_distribution<double>(0, 1)(rng) < skill ? t[i] : rng() % 2;
    }
    for (std::size_t positive : {0, 1}) {
      const auto r = confusion(p, t, positive);
      c.expect(r.accuracy + r.error == 1.0, "accuracy + error != 1");
      if (r.tp_rate) c.expect(*r.tp_rate + *r.fn_rate == 1.0, "tp + fn rates != 1");
      if (r.tn_rate) c.expect(*r.tn_rate + *r.fp_rate == 1.0, "tn + fp rates != 1");
      c.expect(r.tp + r.fn + r.fp + r.tn == n, "counts do not sum to n");
      rows.push_back({"set" + std::to_string(rep), positive == 0 ? "K-Means" : "BPN", r});
    }
  }
  // emitted reports: the CSV and the serialized JSON, at four decimals
  std::istringstream csv(metrics_csv(rows));
  std::string line;
  std::getline(csv, line);
  std::size_t lines = 0;
  while (std::getline(csv, line)) {
    const auto cells = split_csv(line);
    c.expect(cells.size() == 13, "malformed metrics line");
    if (cells.size() != 13) continue;
    c.expect(parse4(cells[11]) + parse4(cells[12]) == 10000, "printed accuracy + error != 1: " + line);
    ++lines;
  }
  for (const auto& r : rows) {
    const auto j = to_json(r.report);
    c.expect(parse4(j["accuracy_4dp"]) + parse4(j["error_4dp"]) == 10000, "JSON accuracy_4dp + error_4dp != 1");
  }
  // paired rate table: each TP/FP and TN/FN pair sums to one at four decimals
  std::size_t pairs = 0;
  for (const char* method : {"K-Means", "BPN"}) {
    std::istringstream table(rate_table(rows, method));
    std::getline(table, line);
    std::getline(table, line);
    while (std::getline(table, line)) {
      std::istringstream ls(line);
      std::string name, tp, fp, tn, fn;
      if (!(ls >> name >> tp >> fp >> tn >> fn) || name.rfind("set", 0) != 0) continue;
      if (tp != "undefined") c.expect(parse4(tp) + parse4(fp) == 10000, std::string("TP/FP pair: ") + line);
      if (tn != "undefined") c.expect(parse4(tn) + parse4(fn) == 10000, std::string("TN/FN pair: ") + line);
      pairs += (tp != "undefined") + (tn != "undefined");
    }
  }

  // fixed fixture: 32 of 34 correct
  std::vector<std::size_t> truth(34, 0), pred(34, 0);
  for (std::size_t i = 20; i < 34; ++i) truth[i] = pred[i] = 1;
  pred[0] = pred[1] = 1;
  const std::vector<MetricRow> fixture{{"Leukemia", "K-Means", confusion(pred, truth, 0)}};
  const auto text = metrics_table(fixture);
  c.expect(text.find("0.9412") != std::string::npos, "fixture accuracy is not 0.9412");
  c.expect(text.find("0.0588") != std::string::npos, "fixture error is not 0.0588");
  c.expect(pairs > 0, "no rate pairs parsed");
  c.note("200 reports, " + std::to_string(lines) + " CSV lines, " + std::to_string(pairs) + " rate pairs; fixture 32/34 -> " +
         format_fixed4(accuracy_ten_thousandths(fixture[0].report.accuracy)) + " / " +
         format_fixed4(10000 - accuracy_ten_thousandths(fixture[0].report.accuracy)));
  return c.outcome();
}

Outcome qualitative_claim() {
  Check c;
  std::vector<double> bpn, km, fc;
  int only_informative = 0;
  std::ostringstream seeds;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SyntheticSpec spec;
    spec.samples = 60;
    spec.informative = 2;
    spec.noise = 48;
    spec.classes = 2;
    spec.separation = 4.0;
    spec.seed = seed;
    const auto data = generate_synthetic(spec);
    PipelineConfig cfg;
    cfg.seed = seed;
    cfg.dataset_name = "synthetic";
    const auto a = analyze(data.matrix, cfg);
    for (const auto& r : a.rows) {
      if (r.method == "BPN") bpn.push_back(r.report.accuracy);
      if (r.method == "K-Means") km.push_back(r.report.accuracy);
      if (r.method == "FCM") fc.push_back(r.report.accuracy);
    }
    const std::set<std::size_t> truth(data.informative.begin(), data.informative.end());
    const auto& sel = a.reduct.result.selected;
    const bool ok = !sel.empty() && std::all_of(sel.begin(), sel.end(), [&](auto s) { return truth.count(s) > 0; });
    only_informative += ok;
    if (!ok) seeds << (seeds.tellp() > 0 ? "," : "") << seed;
  }
  const double mb = median(bpn), mk = median(km), mf = median(fc);
  c.expect(mb >= mk, "median BPN " + fmt(mb) + " < median K-Means " + fmt(mk));
  c.expect(mb >= mf, "median BPN " + fmt(mb) + " < median FCM " + fmt(mf));
  c.expect(only_informative >= 9, "only-informative selections " + std::to_string(only_informative) +
                                      "/10 (seeds with noise genes: " + seeds.str() + ")");
  c.note("median accuracy BPN " + fmt(mb) + ", K-Means " + fmt(mk) + ", FCM " + fmt(mf) +
         "; only-informative reducts " + std::to_string(only_informative) + "/10");
  return c.outcome();
}

Outcome determinism() {
  Check c;
  const auto dir = fs::temp_directory_path() / "roughsel_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  SyntheticSpec spec;
  spec.seed = 17;
  write_synthetic(generate_synthetic(spec), spec, dir / "data.csv");
  PipelineConfig cfg;
  cfg.input = dir / "data.csv";
  cfg.seed = 17;
  cfg.out_dir = dir / "run1";
  run_pipeline(cfg);
  cfg.out_dir = dir / "run2";
  run_pipeline(cfg);
  const auto m1 = slurp(dir / "run1" / "manifest.json"), m2 = slurp(dir / "run2" / "manifest.json");
  c.expect(!m1.empty() && m1 == m2, "manifests differ");
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir / "run1")) {
    ++files;
    c.expect(slurp(e.path()) == slurp(dir / "run2" / e.path().filename()),
             e.path().filename().string() + " differs");
  }
  c.note(std::to_string(files) + " files compared, manifest sha256 " + sha256_hex(m1).substr(0, 16));
  return c.outcome();
}

struct Criterion {
  const char* id;
  const char* name;
  double limit_seconds;  // 0 = no stated limit
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"C1", "rough-set oracle equivalence", 30, rough_set_oracle},
      {"C2", "worked-example fixtures", 1, worked_examples},
      {"C3", "FCM normalization", 0, fcm_normalization},
      {"C4", "K-Means monotonicity", 0, kmeans_monotone},
      {"C5", "BPN gradient check and XOR", 60, bpn_gradients},
      {"C6", "metric identities", 0, metric_identities},
      {"C7", "BPN vs clustering and informative reducts", 120, qualitative_claim},
      {"C8", "pipeline determinism", 0, determinism},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.limit_seconds > 0 && secs >= cr.limit_seconds) {
      o.pass = false;
      o.detail += "; exceeded " + fmt(cr.limit_seconds, 0) + " s";
    }
    failed += !o.pass;
    std::printf("%s %-4s %-44s %8.3f s  %s\n", o.pass ? "PASS" : "FAIL", cr.id, cr.name, secs, o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
