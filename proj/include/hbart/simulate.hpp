#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hbart/data.hpp"

namespace hbart {

// Single-predictor benchmark generator:
//   x ~ U(0,1),  y = 4 x^2 + 0.2 exp(2x) z,  z ~ N(0,1)
struct SimData {
  std::vector<double> x, y, f_true, s_true;
};

SimData simulate_quadratic(std::size_t n, std::uint64_t seed);

// predictors {x}, response y (truth columns dropped)
DataSet sim_to_dataset(const SimData& sim);

// columns x,y,f_true,s_true
void write_sim_csv(const SimData& sim, const std::string& path);

}  // namespace hbart
