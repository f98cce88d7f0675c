#include "roughsel/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace roughsel {

namespace {

using Contingency = std::vector<std::vector<std::size_t>>;

Contingency contingency(std::span<const std::size_t> clusters, std::span<const std::size_t> truth,
                        std::size_t k_clusters, std::size_t k_classes) {
  Contingency cnt(k_clusters, std::vector<std::size_t>(k_classes, 0));
  for (std::size_t i = 0; i < clusters.size(); ++i) ++cnt[clusters[i]][truth[i]];
  return cnt;
}

std::size_t count_of(std::span<const std::size_t> v) {
  return v.empty() ? 0 : *std::max_element(v.begin(), v.end()) + 1;
}

void check_lengths(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("length mismatch");
}

ClusterMapping finish(std::vector<std::size_t> mapping, std::size_t agreement, std::size_t n, bool exhaustive) {
  ClusterMapping m;
  m.cluster_to_class = std::move(mapping);
  m.agreement = agreement;
  m.mapped_accuracy = n == 0 ? 0.0 : static_cast<double>(agreement) / static_cast<double>(n);
  m.exhaustive = exhaustive;
  return m;
}

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

template <typename Key>
std::vector<Key> first_appearance(const std::vector<MetricRow>& rows, Key MetricRow::*field) {
  std::vector<Key> out;
  for (const auto& r : rows)
    if (std::find(out.begin(), out.end(), r.*field) == out.end()) out.push_back(r.*field);
  return out;
}

const MetricRow* find_row(const std::vector<MetricRow>& rows, const std::string& dataset,
                          const std::string& method) {
  for (const auto& r : rows)
    if (r.dataset == dataset && r.method == method) return &r;
  return nullptr;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string lpad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

// A rate and its complement, printed so the pair sums to exactly 1.
std::pair<std::string, std::string> paired_rates(const std::optional<double>& rate) {
  if (!rate) return {"undefined", "undefined"};
  const long v = std::lround(*rate * 10000.0);
  return {format_fixed4(v), format_fixed4(10000 - v)};
}

}  // namespace

std::vector<std::size_t> ClusterMapping::apply(std::span<const std::size_t> cluster_ids) const {
  std::vector<std::size_t> out(cluster_ids.size());
  for (std::size_t i = 0; i < cluster_ids.size(); ++i) out[i] = cluster_to_class.at(cluster_ids[i]);
  return out;
}

ClusterMapping majority_vote_mapping(std::span<const std::size_t> cluster_ids,
                                     std::span<const std::size_t> true_classes) {
  check_lengths(cluster_ids, true_classes);
  const std::size_t kc = count_of(cluster_ids);
  const std::size_t kt = std::max<std::size_t>(count_of(true_classes), 1);
  const auto cnt = contingency(cluster_ids, true_classes, kc, kt);
  std::vector<std::size_t> mapping(kc, 0);
  std::size_t agreement = 0;
  for (std::size_t c = 0; c < kc; ++c) {
    const auto best = std::max_element(cnt[c].begin(), cnt[c].end());  // first maximum
    mapping[c] = static_cast<std::size_t>(best - cnt[c].begin());
    agreement += *best;
  }
  return finish(std::move(mapping), agreement, cluster_ids.size(), false);
}

ClusterMapping map_clusters_to_classes(std::span<const std::size_t> cluster_ids,
                                       std::span<const std::size_t> true_classes) {
  check_lengths(cluster_ids, true_classes);
  const std::size_t kc = count_of(cluster_ids);
  const std::size_t kt = count_of(true_classes);
  if (kc != kt || kc == 0 || kc > kMaxPermutationClusters)
    return majority_vote_mapping(cluster_ids, true_classes);

  const auto cnt = contingency(cluster_ids, true_classes, kc, kt);
  std::vector<std::size_t> perm(kc);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> best = perm;
  std::size_t best_agree = 0;
  bool first = true;
  do {
    std::size_t agree = 0;
    for (std::size_t c = 0; c < kc; ++c) agree += cnt[c][perm[c]];
    if (first || agree > best_agree) {
      best_agree = agree;
      best = perm;
      first = false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return finish(std::move(best), best_agree, cluster_ids.size(), true);
}

ConfusionReport confusion(std::span<const std::size_t> predicted, std::span<const std::size_t> truth,
                          std::size_t positive_class) {
  check_lengths(predicted, truth);
  if (truth.empty()) throw std::invalid_argument("confusion: empty input");
  ConfusionReport r;
  r.positive_class = positive_class;
  r.n = truth.size();
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool p = predicted[i] == positive_class;
    const bool t = truth[i] == positive_class;
    if (p && t) ++r.tp;
    else if (p && !t) ++r.fp;
    else if (!p && t) ++r.fn;
    else ++r.tn;
  }
  r.tp_rate = ratio(r.tp, r.tp + r.fn);
  r.fn_rate = ratio(r.fn, r.tp + r.fn);
  r.tn_rate = ratio(r.tn, r.tn + r.fp);
  r.fp_rate = ratio(r.fp, r.tn + r.fp);
  r.accuracy = static_cast<double>(r.tp + r.tn) / static_cast<double>(r.n);
  r.error = 1.0 - r.accuracy;
  return r;
}

long accuracy_ten_thousandths(double accuracy) { return std::lround(accuracy * 10000.0); }

std::string format_fixed4(long v) {
  std::ostringstream os;
  os << (v < 0 ? "-" : "") << std::labs(v) / 10000 << '.' << std::setw(4) << std::setfill('0')
     << std::labs(v) % 10000;
  return os.str();
}

std::string format_rate(const std::optional<double>& rate) {
  return rate ? format_fixed4(accuracy_ten_thousandths(*rate)) : "undefined";
}

std::string metrics_table(const std::vector<MetricRow>& rows) {
  const auto datasets = first_appearance(rows, &MetricRow::dataset);
  const auto methods = first_appearance(rows, &MetricRow::method);
  std::size_t w0 = std::string("Dataset").size();
  for (const auto& d : datasets) w0 = std::max(w0, d.size());
  std::size_t w = 9;
  for (const auto& m : methods) w = std::max(w, m.size() + 2);

  std::ostringstream os;
  for (const bool error : {false, true}) {
    os << (error ? "Classification error\n" : "Classification accuracy\n");
    os << pad("Dataset", w0);
    for (const auto& m : methods) os << lpad(m, w);
    os << '\n';
    for (const auto& d : datasets) {
      os << pad(d, w0);
      for (const auto& m : methods) {
        const MetricRow* r = find_row(rows, d, m);
        if (!r) {
          os << lpad("-", w);
          continue;
        }
        const long acc = accuracy_ten_thousandths(r->report.accuracy);
        os << lpad(format_fixed4(error ? 10000 - acc : acc), w);
      }
      os << '\n';
    }
    if (!error) os << '\n';
  }
  return os.str();
}

std::string rate_table(const std::vector<MetricRow>& rows, const std::string& method) {
  std::size_t w0 = std::string("Dataset").size();
  for (const auto& r : rows) w0 = std::max(w0, r.dataset.size());
  constexpr std::size_t w = 11;
  std::ostringstream os;
  os << method << " classification performance rate\n";
  os << pad("Dataset", w0) << lpad("TP", w) << lpad("FP", w) << lpad("TN", w) << lpad("FN", w)
     << "   counts (TP FP FN TN)\n";
  for (const auto& r : rows) {
    if (r.method != method) continue;
    const auto& c = r.report;
    const auto [tp, fn] = paired_rates(c.tp_rate);
    const auto [tn, fp] = paired_rates(c.tn_rate);
    os << pad(r.dataset, w0) << lpad(tp, w) << lpad(fn, w) << lpad(tn, w) << lpad(fp, w) << "   " << c.tp << ' ' << c.fp
       << ' ' << c.fn << ' ' << c.tn << '\n';
  }
  os << "(paired layout: FP column = 1 - TP rate, FN column = 1 - TN rate)\n";
  return os.str();
}

std::string metrics_csv(const std::vector<MetricRow>& rows) {
  std::ostringstream os;
  os << "dataset,method,tp,fp,fn,tn,n,tp_rate,fn_rate,tn_rate,fp_rate,accuracy,error\n";
  for (const auto& r : rows) {
    const auto& c = r.report;
    const long acc = accuracy_ten_thousandths(c.accuracy);
    os << r.dataset << ',' << r.method << ',' << c.tp << ',' << c.fp << ',' << c.fn << ',' << c.tn << ','
       << c.n << ',' << format_rate(c.tp_rate) << ',' << format_rate(c.fn_rate) << ','
       << format_rate(c.tn_rate) << ',' << format_rate(c.fp_rate) << ',' << format_fixed4(acc) << ','
       << format_fixed4(10000 - acc) << '\n';
  }
  return os.str();
}

}  // namespace roughsel
