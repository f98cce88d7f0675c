#include "roughsel/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "roughsel/clustering.hpp"
#include "roughsel/seeds.hpp"

namespace roughsel {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.emplace_back(trim(std::string_view(line).substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

struct Grid {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
};

Grid read_grid(std::istream& in, const CsvOptions& opts) {
  Grid g;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = opts.has_header;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split(line, opts.delimiter);
    if (header_pending) {
      g.header = std::move(cells);
      width = g.header.size();
      header_pending = false;
      continue;
    }
    if (width == 0) width = cells.size();
    if (cells.size() != width) {
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                      " columns, found " + std::to_string(cells.size()) + " (ragged rows)");
    }
    g.rows.push_back(std::move(cells));
    g.line_numbers.push_back(line_no);
  }
  if (g.rows.empty()) throw DataError("no rows");
  if (width < 2) throw DataError("need at least one attribute column and one class column");
  return g;
}

std::size_t resolve_class_column(const Grid& g, const std::string& selector) {
  const std::size_t width = g.rows.front().size();
  if (selector.empty() || selector == "last") return width - 1;
  if (selector == "first") return 0;
  if (!g.header.empty()) {
    const auto it = std::find(g.header.begin(), g.header.end(), selector);
    if (it != g.header.end()) return static_cast<std::size_t>(it - g.header.begin());
  }
  std::size_t idx = 0;
  const auto [ptr, ec] = std::from_chars(selector.data(), selector.data() + selector.size(), idx);
  if (ec == std::errc() && ptr == selector.data() + selector.size()) {
    if (idx >= width) throw DataError("class column index " + selector + " out of range");
    return idx;
  }
  throw DataError("unknown class column '" + selector + "'");
}

std::string cell_name(const Grid& g, std::size_t r, std::size_t c) {
  std::string where = "row " + std::to_string(r + 1) + " (line " + std::to_string(g.line_numbers[r]) +
                      "), column " + std::to_string(c + 1);
  if (!g.header.empty()) where += " '" + g.header[c] + "'";
  return where;
}

// Attribute names and class coding shared by the real-valued and coded readers.
struct Layout {
  std::size_t class_col = 0;
  std::vector<std::size_t> attr_cols;
  std::vector<std::string> attribute_names;
  std::vector<Code> class_labels;
  std::vector<std::string> class_names;
};

Layout layout_of(const Grid& g, const CsvOptions& opts) {
  Layout l;
  l.class_col = resolve_class_column(g, opts.class_column);
  const std::size_t width = g.rows.front().size();
  for (std::size_t c = 0; c < width; ++c) {
    if (c == l.class_col) continue;
    l.attr_cols.push_back(c);
    l.attribute_names.push_back(g.header.empty() ? "g" + std::to_string(l.attr_cols.size() - 1)
                                                 : g.header[c]);
  }
  std::unordered_map<std::string, Code> codes;
  for (const auto& row : g.rows) {
    const auto& label = row[l.class_col];
    if (label.empty()) throw DataError("missing class label");
    auto [it, inserted] = codes.try_emplace(label, static_cast<Code>(l.class_names.size()));
    if (inserted) l.class_names.push_back(label);
    l.class_labels.push_back(it->second);
  }
  return l;
}

void check_index(std::size_t a, std::size_t limit, const char* who) {
  if (a >= limit)
    throw std::out_of_range(std::string(who) + ": attribute index " + std::to_string(a) + " out of range");
}

}  // namespace

void RawMatrix::validate() const {
  if (values.rows() == 0) throw DataError("no rows");
  if (attribute_names.size() != values.cols())
    throw DataError("attribute name count does not match column count");
  if (class_labels.size() != values.rows()) throw DataError("class label count does not match row count");
  for (double v : values.data())
    if (!std::isfinite(v)) throw DataError("non-finite value in matrix");
  for (Code c : class_labels)
    if (c >= class_names.size()) throw DataError("class label without a name");
}

RawMatrix parse_csv(std::istream& in, const CsvOptions& opts) {
  const Grid g = read_grid(in, opts);
  Layout l = layout_of(g, opts);
  RawMatrix m;
  m.values = Matrix(g.rows.size(), l.attr_cols.size());
  for (std::size_t r = 0; r < g.rows.size(); ++r) {
    for (std::size_t j = 0; j < l.attr_cols.size(); ++j) {
      const auto& cell = g.rows[r][l.attr_cols[j]];
      double v = 0.0;
      if (!parse_double(cell, v) || !std::isfinite(v))
        throw DataError(cell_name(g, r, l.attr_cols[j]) + ": non-numeric value '" + cell + "'");
      m.values(r, j) = v;
    }
  }
  m.attribute_names = std::move(l.attribute_names);
  m.class_labels = std::move(l.class_labels);
  m.class_names = std::move(l.class_names);
  return m;
}

RawMatrix load_csv(const std::filesystem::path& path, const CsvOptions& opts) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_csv(in, opts);
}

void write_csv(std::ostream& out, const RawMatrix& m, char delimiter) {
  for (const auto& name : m.attribute_names) out << name << delimiter;
  out << "class\n";
  for (std::size_t r = 0; r < m.num_samples(); ++r) {
    for (std::size_t c = 0; c < m.num_attributes(); ++c) out << format_double(m.values(r, c)) << delimiter;
    out << m.class_names[m.class_labels[r]] << '\n';
  }
}

RawMatrix project(const RawMatrix& m, std::span<const std::size_t> attrs) {
  for (auto a : attrs) check_index(a, m.num_attributes(), "project");
  RawMatrix out;
  out.values = m.values.select_columns(attrs);
  for (auto a : attrs) out.attribute_names.push_back(m.attribute_names[a]);
  out.class_labels = m.class_labels;
  out.class_names = m.class_names;
  return out;
}

DecisionTable::DecisionTable(std::vector<std::vector<Code>> columns, std::vector<Code> levels,
                             std::vector<Code> decision, std::vector<std::string> attribute_names,
                             std::vector<std::string> class_names)
    : n_(decision.size()),
      levels_(std::move(levels)),
      decision_(std::move(decision)),
      attribute_names_(std::move(attribute_names)),
      class_names_(std::move(class_names)) {
  if (n_ == 0) throw DataError("decision table needs at least one sample");
  if (columns.size() != levels_.size()) throw DataError("one level count per attribute required");
  if (attribute_names_.empty())
    for (std::size_t a = 0; a < columns.size(); ++a) attribute_names_.push_back("a" + std::to_string(a));
  if (attribute_names_.size() != columns.size()) throw DataError("attribute name count mismatch");

  codes_.reserve(columns.size() * n_);
  for (std::size_t a = 0; a < columns.size(); ++a) {
    if (columns[a].size() != n_) throw DataError("attribute column length differs from decision length");
    if (levels_[a] < 1) throw DataError("attribute needs at least one level");
    for (Code c : columns[a]) {
      if (c >= levels_[a])
        throw DataError("code " + std::to_string(c) + " outside 0.." + std::to_string(levels_[a] - 1) +
                        " for attribute '" + attribute_names_[a] + "'");
    }
    codes_.insert(codes_.end(), columns[a].begin(), columns[a].end());
  }

  const Code max_d = *std::max_element(decision_.begin(), decision_.end());
  decision_levels_ = class_names_.empty() ? max_d + 1 : static_cast<Code>(class_names_.size());
  if (max_d >= decision_levels_) throw DataError("decision code without a class name");
  if (class_names_.empty())
    for (Code c = 0; c < decision_levels_; ++c) class_names_.push_back(std::to_string(c));
}

DecisionTable DecisionTable::from_codes(const std::vector<std::vector<Code>>& rows,
                                        const std::vector<Code>& decision) {
  if (rows.size() != decision.size()) throw DataError("row count differs from decision length");
  const std::size_t a = rows.empty() ? 0 : rows.front().size();
  std::vector<std::vector<Code>> cols(a, std::vector<Code>(rows.size()));
  std::vector<Code> levels(a, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != a) throw DataError("ragged rows");
    for (std::size_t j = 0; j < a; ++j) {
      cols[j][i] = rows[i][j];
      levels[j] = std::max(levels[j], rows[i][j] + 1);
    }
  }
  return DecisionTable(std::move(cols), std::move(levels), decision, {}, {});
}

kernels::CodedView DecisionTable::view() const {
  return kernels::CodedView{n_, codes_, levels_, decision_, decision_levels_};
}

DecisionTable project(const DecisionTable& table, std::span<const std::size_t> attrs) {
  std::vector<std::vector<Code>> cols;
  std::vector<Code> levels;
  std::vector<std::string> names;
  for (auto a : attrs) {
    check_index(a, table.num_attributes(), "project");
    auto c = table.column(a);
    cols.emplace_back(c.begin(), c.end());
    levels.push_back(table.levels(a));
    names.push_back(table.attribute_names()[a]);
  }
  const auto d = table.decision();
  return DecisionTable(std::move(cols), std::move(levels), std::vector<Code>(d.begin(), d.end()),
                       std::move(names), table.class_names());
}

DecisionTable parse_coded_csv(std::istream& in, const CsvOptions& opts) {
  const Grid g = read_grid(in, opts);
  Layout l = layout_of(g, opts);
  std::vector<std::vector<Code>> cols(l.attr_cols.size(), std::vector<Code>(g.rows.size()));
  std::vector<Code> levels(l.attr_cols.size(), 1);
  for (std::size_t r = 0; r < g.rows.size(); ++r) {
    for (std::size_t j = 0; j < l.attr_cols.size(); ++j) {
      const auto& cell = g.rows[r][l.attr_cols[j]];
      Code v = 0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
        throw DataError(cell_name(g, r, l.attr_cols[j]) + ": expected a non-negative integer code, found '" +
                        cell + "'");
      cols[j][r] = v;
      levels[j] = std::max(levels[j], v + 1);
    }
  }
  return DecisionTable(std::move(cols), std::move(levels), std::move(l.class_labels),
                       std::move(l.attribute_names), std::move(l.class_names));
}

DecisionTable load_coded_csv(const std::filesystem::path& path, const CsvOptions& opts) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_coded_csv(in, opts);
}

void write_coded_csv(std::ostream& out, const DecisionTable& t, char delimiter) {
  for (const auto& name : t.attribute_names()) out << name << delimiter;
  out << "class\n";
  for (std::size_t i = 0; i < t.universe_size(); ++i) {
    for (std::size_t a = 0; a < t.num_attributes(); ++a) out << t.code(i, a) << delimiter;
    out << t.class_names()[t.decision()[i]] << '\n';
  }
}

Code Discretizer::encode(std::size_t a, double value) const {
  const auto& cs = centroids.at(a);
  Code best = 0;
  double best_d = std::abs(value - cs[0]);
  for (std::size_t j = 1; j < cs.size(); ++j) {
    const double d = std::abs(value - cs[j]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<Code>(j);
    }
  }
  return best;
}

Discretizer Discretizer::project(std::span<const std::size_t> attrs) const {
  Discretizer out;
  out.bins_per_attribute = bins_per_attribute;
  out.seed = seed;
  for (auto a : attrs) {
    check_index(a, num_attributes(), "Discretizer::project");
    out.centroids.push_back(centroids[a]);
    out.attribute_names.push_back(attribute_names[a]);
  }
  return out;
}

Discretizer fit_discretizer(const RawMatrix& m, std::size_t bins, std::uint64_t seed, Exec exec) {
  if (m.num_samples() == 0 || m.num_attributes() == 0) throw DataError("cannot discretize an empty matrix");
  if (bins < 1) throw DataError("bins must be at least 1");
  m.validate();

  Discretizer disc;
  disc.bins_per_attribute = bins;
  disc.seed = seed;
  disc.attribute_names = m.attribute_names;
  disc.centroids.resize(m.num_attributes());

  const auto n_attr = static_cast<std::int64_t>(m.num_attributes());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (std::int64_t aa = 0; aa < n_attr; ++aa) {
    const auto a = static_cast<std::size_t>(aa);
    const std::vector<double> col = m.values.column(a);
    const std::size_t distinct = std::set<double>(col.begin(), col.end()).size();
    Matrix data(col.size(), 1);
    std::copy(col.begin(), col.end(), data.data().begin());
    KMeansOptions opts;
    opts.k = std::min(bins, distinct);
    opts.seed = derive_seed(seed, static_cast<std::uint64_t>(a));
    opts.exec = Exec::serial;
    const KMeansModel model = kmeans(data, opts);
    std::vector<double> centres = model.centroids.column(0);
    std::sort(centres.begin(), centres.end());
    centres.erase(std::unique(centres.begin(), centres.end()), centres.end());
    disc.centroids[a] = std::move(centres);
  }
  return disc;
}

DecisionTable discretize(const RawMatrix& m, const Discretizer& disc) {
  if (m.num_attributes() != disc.num_attributes())
    throw DataError("discretizer was fitted on " + std::to_string(disc.num_attributes()) +
                    " columns but the matrix has " + std::to_string(m.num_attributes()));
  std::vector<std::vector<Code>> cols(m.num_attributes(), std::vector<Code>(m.num_samples()));
  std::vector<Code> levels(m.num_attributes());
  for (std::size_t a = 0; a < m.num_attributes(); ++a) {
    levels[a] = static_cast<Code>(disc.centroids[a].size());
    for (std::size_t i = 0; i < m.num_samples(); ++i) cols[a][i] = disc.encode(a, m.values(i, a));
  }
  return DecisionTable(std::move(cols), std::move(levels), m.class_labels, m.attribute_names,
                       m.class_names);
}

}  // namespace roughsel
