#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hbart {

// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> v;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), v(r * c, fill) {}

  double& at(std::size_t i, std::size_t j) { return v[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
  std::span<const double> row(std::size_t i) const {
    return {v.data() + i * cols, cols};
  }
  std::span<double> row(std::size_t i) {
    return {v.data() + i * cols, cols};
  }
};

enum class ColumnKind { continuous, dummy };

struct ColumnMeta {
  ColumnKind kind = ColumnKind::continuous;
  std::string parent;  // original categorical column (dummy columns only)
  std::string level;   // level encoded by this dummy
};

// Tabular training data after ingestion: numeric predictors (categoricals
// one-hot expanded in place, levels sorted) plus a numeric response.
struct DataSet {
  Matrix x;
  std::vector<double> y;
  std::vector<std::string> names;  // predictor column labels
  std::string response_name;
  std::vector<ColumnMeta> var_meta;

  std::size_t n() const { return x.rows; }
  std::size_t d() const { return x.cols; }
};

// Per-variable ascending candidate cutpoints, all strictly inside the
// observed range. Dummy variables get the single cutpoint {0.5}; constant
// columns get an empty grid and are never proposed for splits.
struct CutpointGrid {
  std::vector<std::vector<double>> cuts;

  std::size_t num_vars() const { return cuts.size(); }
  std::size_t size(std::size_t var) const { return cuts[var].size(); }
  double value(std::size_t var, std::size_t cut) const { return cuts[var][cut]; }
};

// Load a header-first CSV, one-hot expanding every non-numeric column.
// Missing cells ("", NA, NaN) are a load error naming the cell.
DataSet load_csv(const std::string& path, const std::string& response_column);

// Same, but the response column is optional (used for prediction inputs);
// when absent, every column becomes a predictor and y stays empty.
DataSet load_csv_points(const std::string& path,
                        const std::string& response_column = "");

// Write predictors + response back out; %.17g so reloading round-trips
// every double exactly.
void write_csv(const DataSet& ds, const std::string& path);

DataSet make_dataset(Matrix x, std::vector<double> y,
                     std::vector<std::string> names = {},
                     std::string response_name = "y");

// Equally spaced interior cutpoints for continuous variables, {0.5} for
// dummies, empty for constant columns.
CutpointGrid make_cutpoints(const DataSet& ds, int max_cuts);

// Exact disjoint partition, train size = floor(fraction*n), deterministic
// in the seed; selected rows keep their original order.
std::pair<DataSet, DataSet> train_test_split(const DataSet& ds, double fraction,
                                             std::uint64_t seed);

// Row subset in the given index order.
DataSet subset_rows(const DataSet& ds, const std::vector<std::size_t>& idx);

}  // namespace hbart
