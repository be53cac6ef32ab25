#include "obart/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "obart/rng.hpp"

namespace obart {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_cell(const std::string& cell, long row, const std::string& col,
                  const std::string& origin) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw std::runtime_error(origin + ": row " + std::to_string(row) + ", column '" +
                             col + "': cannot parse '" + cell + "' as a number");
  return v;
}

}  // namespace

RawTable parse_csv(const std::string& text, const CsvSchema& schema,
                   const std::string& origin) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line.empty())
    throw std::runtime_error(origin + ": empty file");
  const std::vector<std::string> headers = split_line(line);

  std::unordered_map<std::string, int> seen;
  for (const auto& h : headers) {
    if (++seen[h] > 1)
      throw std::runtime_error(origin + ": duplicate header '" + h + "'");
  }

  auto role_of = [&schema](const std::string& name) {
    if (!schema.outcome.empty() && name == schema.outcome) return ColumnRole::kOutcome;
    for (const auto& c : schema.categorical)
      if (name == c) return ColumnRole::kCategorical;
    for (const auto& c : schema.ignore)
      if (name == c) return ColumnRole::kIgnore;
    return schema.default_role;
  };

  // Every explicitly named column must exist.
  auto require = [&headers, &origin](const std::string& name, const char* what) {
    if (std::find(headers.begin(), headers.end(), name) == headers.end())
      throw std::runtime_error(origin + ": " + what + " column '" + name +
                               "' not found in header");
  };
  if (!schema.outcome.empty()) require(schema.outcome, "outcome");
  for (const auto& c : schema.categorical) require(c, "categorical");
  for (const auto& c : schema.ignore) require(c, "ignored");

  RawTable t;
  std::vector<ColumnRole> roles(headers.size());
  std::vector<int> slot(headers.size(), -1);
  for (std::size_t j = 0; j < headers.size(); ++j) {
    roles[j] = role_of(headers[j]);
    switch (roles[j]) {
      case ColumnRole::kContinuous:
        slot[j] = static_cast<int>(t.cont_names.size());
        t.cont_names.push_back(headers[j]);
        break;
      case ColumnRole::kCategorical:
        slot[j] = static_cast<int>(t.cat_names.size());
        t.cat_names.push_back(headers[j]);
        break;
      case ColumnRole::kOutcome:
        t.outcome_name = headers[j];
        break;
      case ColumnRole::kIgnore:
        break;
    }
  }
  t.cont.resize(t.cont_names.size());
  t.cat.resize(t.cat_names.size());

  long row = 0;
  while (std::getline(is, line)) {
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    ++row;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != headers.size())
      throw std::runtime_error(origin + ": row " + std::to_string(row) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(headers.size()));
    for (std::size_t j = 0; j < headers.size(); ++j) {
      if (roles[j] == ColumnRole::kIgnore) continue;
      if (cells[j].empty())
        throw std::runtime_error(origin + ": row " + std::to_string(row) +
                                 ", column '" + headers[j] + "': missing value");
      switch (roles[j]) {
        case ColumnRole::kContinuous:
          t.cont[slot[j]].push_back(parse_cell(cells[j], row, headers[j], origin));
          break;
        case ColumnRole::kCategorical:
          t.cat[slot[j]].push_back(cells[j]);
          break;
        case ColumnRole::kOutcome:
          t.outcome.push_back(parse_cell(cells[j], row, headers[j], origin));
          break;
        case ColumnRole::kIgnore:
          break;
      }
    }
  }
  if (row == 0) throw std::runtime_error(origin + ": no data rows");
  t.n = row;
  return t;
}

RawTable load_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_csv(ss.str(), schema, path);
}

RawTable RawTable::subset(const std::vector<long>& rows) const {
  RawTable out;
  out.n = static_cast<long>(rows.size());
  out.cont_names = cont_names;
  out.cat_names = cat_names;
  out.outcome_name = outcome_name;
  out.cont.resize(cont.size());
  for (std::size_t j = 0; j < cont.size(); ++j) {
    out.cont[j].reserve(rows.size());
    for (long r : rows) out.cont[j].push_back(cont[j][static_cast<std::size_t>(r)]);
  }
  out.cat.resize(cat.size());
  for (std::size_t j = 0; j < cat.size(); ++j) {
    out.cat[j].reserve(rows.size());
    for (long r : rows) out.cat[j].push_back(cat[j][static_cast<std::size_t>(r)]);
  }
  if (!outcome.empty()) {
    out.outcome.reserve(rows.size());
    for (long r : rows) out.outcome.push_back(outcome[static_cast<std::size_t>(r)]);
  }
  return out;
}

namespace {

void fill_blocks(Dataset& d, const RawTable& raw, bool center_outcome,
                 bool require_outcome) {
  d.n = raw.n;
  d.p_cont = static_cast<int>(raw.cont.size());
  d.p_cat = static_cast<int>(raw.cat.size());
  d.xcont.assign(static_cast<std::size_t>(d.n) * d.p_cont, 0.0);
  d.xcat.assign(static_cast<std::size_t>(d.n) * d.p_cat, 0);

  for (int j = 0; j < d.p_cont; ++j) {
    const auto [mn, mx] = d.scaling.cont_min_max[static_cast<std::size_t>(j)];
    const double range = mx - mn;
    for (long i = 0; i < d.n; ++i) {
      const double x = raw.cont[j][static_cast<std::size_t>(i)];
      const double z = (range > 0.0) ? 2.0 * (x - mn) / range - 1.0 : 0.0;
      d.xcont[static_cast<std::size_t>(i) * d.p_cont + j] = z;
    }
  }

  d.cat_level_counts.resize(static_cast<std::size_t>(d.p_cat));
  for (int j = 0; j < d.p_cat; ++j) {
    const auto& levels = d.schema.cat_levels[static_cast<std::size_t>(j)];
    d.cat_level_counts[j] = static_cast<int>(levels.size());
    std::unordered_map<std::string, int> code;
    for (std::size_t k = 0; k < levels.size(); ++k) code[levels[k]] = static_cast<int>(k);
    for (long i = 0; i < d.n; ++i) {
      const auto& label = raw.cat[j][static_cast<std::size_t>(i)];
      auto it = code.find(label);
      d.xcat[static_cast<std::size_t>(i) * d.p_cat + j] =
          (it == code.end()) ? kUnseenLevel : it->second;
    }
  }

  if (require_outcome && raw.outcome.empty())
    throw std::runtime_error("dataset has no outcome column");
  if (!raw.outcome.empty()) {
    d.y.resize(static_cast<std::size_t>(d.n));
    for (long i = 0; i < d.n; ++i) {
      const double y = raw.outcome[static_cast<std::size_t>(i)];
      d.y[static_cast<std::size_t>(i)] = center_outcome ? y - d.scaling.y_center : y;
    }
  }
}

}  // namespace

Dataset standardize(const RawTable& raw, bool center_outcome) {
  Dataset d;
  d.schema.cont_names = raw.cont_names;
  d.schema.cat_names = raw.cat_names;
  d.schema.outcome_name = raw.outcome_name;

  d.scaling.cont_min_max.resize(raw.cont.size());
  for (std::size_t j = 0; j < raw.cont.size(); ++j) {
    const auto [mn, mx] = std::minmax_element(raw.cont[j].begin(), raw.cont[j].end());
    d.scaling.cont_min_max[j] = {*mn, *mx};
    if (*mn == *mx)
      std::cerr << "warning: continuous column '" << raw.cont_names[j]
                << "' is constant; mapped to 0\n";
  }

  d.schema.cat_levels.resize(raw.cat.size());
  for (std::size_t j = 0; j < raw.cat.size(); ++j) {
    std::unordered_map<std::string, int> seen;
    for (const auto& label : raw.cat[j]) {
      if (seen.emplace(label, static_cast<int>(seen.size())).second)
        d.schema.cat_levels[j].push_back(label);
    }
  }

  if (!raw.outcome.empty() && center_outcome) {
    const auto [mn, mx] = std::minmax_element(raw.outcome.begin(), raw.outcome.end());
    d.scaling.y_center = 0.5 * (*mn + *mx);  // midrange
    d.scaling.y_half_range = 0.5 * (*mx - *mn);
  }

  fill_blocks(d, raw, center_outcome, /*require_outcome=*/true);
  return d;
}

Dataset apply_scaling(const RawTable& raw, const DataSchema& schema,
                      const ScalingInfo& scaling, bool center_outcome,
                      bool require_outcome) {
  if (raw.cont_names != schema.cont_names || raw.cat_names != schema.cat_names)
    throw std::runtime_error("column schema mismatch with training data");
  Dataset d;
  d.schema = schema;
  d.scaling = scaling;
  fill_blocks(d, raw, center_outcome, require_outcome);
  return d;
}

double destandardize_outcome(double standardized, const ScalingInfo& scaling) {
  return standardized + scaling.y_center;
}

std::pair<RawTable, RawTable> split(const RawTable& raw, double fraction,
                                    std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw std::invalid_argument("split: fraction outside (0,1)");
  std::vector<long> idx(static_cast<std::size_t>(raw.n));
  for (long i = 0; i < raw.n; ++i) idx[static_cast<std::size_t>(i)] = i;
  Rng rng(seed);
  for (std::size_t i = idx.size(); i > 1; --i)
    std::swap(idx[i - 1], idx[rng.uniform_index(i)]);
  const long n_train = std::lround(fraction * static_cast<double>(raw.n));
  if (n_train <= 0 || n_train >= raw.n)
    throw std::runtime_error("split: a side would be empty");
  std::vector<long> train_rows(idx.begin(), idx.begin() + n_train);
  std::vector<long> test_rows(idx.begin() + n_train, idx.end());
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {raw.subset(train_rows), raw.subset(test_rows)};
}

}  // namespace obart
