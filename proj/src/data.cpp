#include "hbart/data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "hbart/errors.hpp"
#include "hbart/io_util.hpp"
#include "hbart/rng.hpp"

namespace hbart {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool is_missing(const std::string& s) {
  return s.empty() || s == "NA" || s == "NaN" || s == "nan" || s == "na";
}

bool parse_double(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e && std::isfinite(out);
}

}  // namespace

namespace {
DataSet load_csv_impl(const std::string& path, const std::string& response_column,
                      bool require_response) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file: " + path);
  const std::vector<std::string> header = split_line(line);

  std::vector<std::vector<std::string>> cells;  // [row][col]
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> row = split_line(line);
    if (row.size() != header.size())
      throw DataError(path + ": line " + std::to_string(lineno) + " has " +
                      std::to_string(row.size()) + " fields, expected " +
                      std::to_string(header.size()));
    cells.push_back(std::move(row));
  }
  const std::size_t n = cells.size();
  if (require_response && n < 2)
    throw DataError(path + ": need at least 2 data rows, got " + std::to_string(n));
  if (n < 1) throw DataError(path + ": no data rows");

  std::size_t resp_col = header.size();
  for (std::size_t j = 0; j < header.size(); ++j)
    if (!response_column.empty() && header[j] == response_column) resp_col = j;
  if (require_response && resp_col == header.size())
    throw DataError(path + ": response column '" + response_column + "' not found");

  // missing cells are an error anywhere; report the first one
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < header.size(); ++j)
      if (is_missing(cells[i][j]))
        throw DataError(path + ": missing value at row " + std::to_string(i + 1) +
                        ", column '" + header[j] + "'");

  DataSet ds;
  if (resp_col < header.size()) {
    ds.response_name = response_column;
    ds.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!parse_double(cells[i][resp_col], ds.y[i]))
        throw DataError(path + ": non-numeric response '" + cells[i][resp_col] +
                        "' at row " + std::to_string(i + 1) + ", column '" +
                        response_column + "'");
    }
  }

  // classify predictor columns, expand categoricals into level-sorted dummies
  struct Col {
    std::string name;
    bool numeric;
    std::vector<double> vals;           // numeric columns
    std::vector<std::string> raw;       // categorical columns
    std::vector<std::string> levels;    // sorted unique
  };
  std::vector<Col> pred;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j == resp_col) continue;
    Col c;
    c.name = header[j];
    c.numeric = true;
    c.vals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!parse_double(cells[i][j], c.vals[i])) {
        c.numeric = false;
        break;
      }
    }
    if (!c.numeric) {
      c.raw.resize(n);
      std::set<std::string> lv;
      for (std::size_t i = 0; i < n; ++i) {
        c.raw[i] = cells[i][j];
        lv.insert(cells[i][j]);
      }
      c.levels.assign(lv.begin(), lv.end());
    }
    pred.push_back(std::move(c));
  }

  std::size_t d = 0;
  for (const Col& c : pred) d += c.numeric ? 1 : c.levels.size();
  ds.x = Matrix(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t k = 0;
    for (const Col& c : pred) {
      if (c.numeric) {
        ds.x.at(i, k++) = c.vals[i];
      } else {
        for (const std::string& lv : c.levels) ds.x.at(i, k++) = (c.raw[i] == lv) ? 1.0 : 0.0;
      }
    }
  }
  for (const Col& c : pred) {
    if (c.numeric) {
      ds.names.push_back(c.name);
      ds.var_meta.push_back({ColumnKind::continuous, "", ""});
    } else {
      for (const std::string& lv : c.levels) {
        ds.names.push_back(c.name + "." + lv);
        ds.var_meta.push_back({ColumnKind::dummy, c.name, lv});
      }
    }
  }
  return ds;
}
}  // namespace

DataSet load_csv(const std::string& path, const std::string& response_column) {
  return load_csv_impl(path, response_column, true);
}

DataSet load_csv_points(const std::string& path,
                        const std::string& response_column) {
  return load_csv_impl(path, response_column, false);
}

void write_csv(const DataSet& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  for (std::size_t j = 0; j < ds.d(); ++j) out << ds.names[j] << ",";
  out << ds.response_name << "\n";
  for (std::size_t i = 0; i < ds.n(); ++i) {
    for (std::size_t j = 0; j < ds.d(); ++j) out << format_double(ds.x.at(i, j)) << ",";
    out << format_double(ds.y[i]) << "\n";
  }
}

DataSet make_dataset(Matrix x, std::vector<double> y, std::vector<std::string> names,
                     std::string response_name) {
  if (x.rows != y.size()) throw DataError("make_dataset: x rows != y length");
  DataSet ds;
  ds.x = std::move(x);
  ds.y = std::move(y);
  ds.response_name = std::move(response_name);
  if (names.empty()) {
    for (std::size_t j = 0; j < ds.x.cols; ++j) names.push_back("x" + std::to_string(j + 1));
  }
  if (names.size() != ds.x.cols) throw DataError("make_dataset: name count != columns");
  ds.names = std::move(names);
  ds.var_meta.assign(ds.x.cols, {ColumnKind::continuous, "", ""});
  return ds;
}

CutpointGrid make_cutpoints(const DataSet& ds, int max_cuts) {
  if (max_cuts < 1) throw DataError("make_cutpoints: max_cuts must be >= 1");
  CutpointGrid grid;
  grid.cuts.resize(ds.d());
  for (std::size_t j = 0; j < ds.d(); ++j) {
    if (ds.var_meta[j].kind == ColumnKind::dummy) {
      grid.cuts[j] = {0.5};
      continue;
    }
    double lo = ds.x.at(0, j), hi = lo;
    for (std::size_t i = 1; i < ds.n(); ++i) {
      lo = std::min(lo, ds.x.at(i, j));
      hi = std::max(hi, ds.x.at(i, j));
    }
    if (!(hi > lo)) continue;  // constant column: empty grid, unsplittable
    std::vector<double>& c = grid.cuts[j];
    double prev = lo;
    for (int k = 1; k <= max_cuts; ++k) {
      const double v = lo + (hi - lo) * static_cast<double>(k) /
                                static_cast<double>(max_cuts + 1);
      if (v > prev && v > lo && v < hi) {
        c.push_back(v);
        prev = v;
      }
    }
  }
  return grid;
}

DataSet subset_rows(const DataSet& ds, const std::vector<std::size_t>& idx) {
  DataSet out;
  out.names = ds.names;
  out.response_name = ds.response_name;
  out.var_meta = ds.var_meta;
  out.x = Matrix(idx.size(), ds.d());
  out.y.resize(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = 0; j < ds.d(); ++j) out.x.at(i, j) = ds.x.at(idx[i], j);
    out.y[i] = ds.y[idx[i]];
  }
  return out;
}

std::pair<DataSet, DataSet> train_test_split(const DataSet& ds, double fraction,
                                             std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw DataError("train_test_split: fraction must be in (0,1)");
  const std::size_t n = ds.n();
  const std::size_t ntrain =
      static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  if (ntrain < 2) throw DataError("train_test_split: train size < 2");

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {  // Fisher-Yates
    const std::size_t j = rng.uniform_int(i);
    std::swap(perm[i - 1], perm[j]);
  }
  std::vector<std::size_t> tr(perm.begin(), perm.begin() + ntrain);
  std::vector<std::size_t> te(perm.begin() + ntrain, perm.end());
  std::sort(tr.begin(), tr.end());
  std::sort(te.begin(), te.end());
  return {subset_rows(ds, tr), subset_rows(ds, te)};
}

}  // namespace hbart
