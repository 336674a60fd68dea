#include "hbart/simulate.hpp"

#include <cmath>
#include <fstream>

#include "hbart/errors.hpp"
#include "hbart/io_util.hpp"
#include "hbart/rng.hpp"

namespace hbart {

SimData simulate_quadratic(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw DataError("simulate_quadratic: n must be >= 1");
  SimData sim;
  sim.x.resize(n);
  sim.y.resize(n);
  sim.f_true.resize(n);
  sim.s_true.resize(n);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform();
    sim.x[i] = x;
    sim.f_true[i] = 4.0 * x * x;
    sim.s_true[i] = 0.2 * std::exp(2.0 * x);
    sim.y[i] = sim.f_true[i] + sim.s_true[i] * rng.normal();
  }
  return sim;
}

DataSet sim_to_dataset(const SimData& sim) {
  Matrix x(sim.x.size(), 1);
  for (std::size_t i = 0; i < sim.x.size(); ++i) x.at(i, 0) = sim.x[i];
  return make_dataset(std::move(x), sim.y, {"x"});
}

void write_sim_csv(const SimData& sim, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << "x,y,f_true,s_true\n";
  for (std::size_t i = 0; i < sim.x.size(); ++i)
    out << format_double(sim.x[i]) << ',' << format_double(sim.y[i]) << ','
        << format_double(sim.f_true[i]) << ',' << format_double(sim.s_true[i])
        << "\n";
}

}  // namespace hbart
