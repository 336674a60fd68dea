// Python bindings for the core operations: simulation, fitting, prediction
// and the diagnostic statistics. Arrays cross the boundary as numpy buffers.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>
#include <stdexcept>

#include "hbart/data.hpp"
#include "hbart/diagnostics.hpp"
#include "hbart/errors.hpp"
#include "hbart/priors.hpp"
#include "hbart/sampler.hpp"
#include "hbart/simulate.hpp"
#include "hbart/stats_util.hpp"
#include "hbart/version.hpp"

namespace py = pybind11;
using namespace hbart;

namespace {

Matrix to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw DataError("expected a 2-d array");
  Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  std::memcpy(m.v.data(), a.data(), m.v.size() * sizeof(double));
  return m;
}

std::vector<double> to_vector(
    const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw DataError("expected a 1-d array");
  return {a.data(), a.data() + a.shape(0)};
}

py::array_t<double> from_matrix(const Matrix& m) {
  return py::array_t<double>(
      {static_cast<py::ssize_t>(m.rows), static_cast<py::ssize_t>(m.cols)},
      m.v.data());
}

py::array_t<double> from_vector(const std::vector<double>& v) {
  return py::array_t<double>({static_cast<py::ssize_t>(v.size())}, v.data());
}

struct PyFit {
  PosteriorDraws draws;

  py::array_t<double> f() const { return from_matrix(draws.f); }
  py::array_t<double> s() const { return from_matrix(draws.s); }
  double offset() const { return draws.offset; }
  std::string model() const {
    return draws.model == ModelKind::hbart ? "hbart" : "bart";
  }

  py::dict acceptance() const {
    py::dict out;
    const char* moves[3] = {"birth", "death", "perturb"};
    for (int k = 0; k < 3; ++k) {
      py::dict mc, vc;
      mc["proposed"] = draws.accept.mean[k].proposed;
      mc["accepted"] = draws.accept.mean[k].accepted;
      mc["auto_rejected"] = draws.accept.mean[k].auto_rejected;
      vc["proposed"] = draws.accept.var[k].proposed;
      vc["accepted"] = draws.accept.var[k].accepted;
      vc["auto_rejected"] = draws.accept.var[k].auto_rejected;
      out[(std::string("mean_") + moves[k]).c_str()] = mc;
      out[(std::string("var_") + moves[k]).c_str()] = vc;
    }
    return out;
  }

  py::dict variable_activity_dict() const {
    const VariableActivity a = variable_activity(draws);
    py::dict out;
    out["mean"] = from_vector(a.mean_prop);
    out["var"] = from_vector(a.var_prop);
    return out;
  }

  py::dict predict(
      const py::array_t<double, py::array::c_style | py::array::forcecast>& x_new,
      const std::string& mode, std::uint64_t seed, long plugin_draws) const {
    const Matrix pts = to_matrix(x_new);
    const PosteriorDraws at = draws_at_points(draws, pts);
    Rng rng(seed);
    py::dict out;
    if (mode == "mean_sd") {
      const PredictionSummary sum = summarize_draws(at);
      out["f_mean"] = from_vector(sum.f_mean);
      out["f_lo"] = from_vector(sum.f_lo);
      out["f_hi"] = from_vector(sum.f_hi);
      out["s_mean"] = from_vector(sum.s_mean);
      out["s_lo"] = from_vector(sum.s_lo);
      out["s_hi"] = from_vector(sum.s_hi);
    } else if (mode == "predictive") {
      out["y"] = from_matrix(predictive_samples(at, rng));
    } else if (mode == "plugin") {
      out["y"] = from_matrix(plugin_samples(at, plugin_draws, rng));
    } else {
      throw DataError("predict: unknown mode '" + mode + "'");
    }
    return out;
  }

  void save(const std::string& path) const { save_forests(draws, path); }
};

PyFit fit_arrays(
    const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
    const py::array_t<double, py::array::c_style | py::array::forcecast>& y,
    std::optional<py::array_t<double, py::array::c_style | py::array::forcecast>>
        eval_x,
    const std::string& model, int m, int mprime, double kappa, double nu,
    double lambda_, double tau, long niter, long burnin, long thin,
    std::uint64_t seed, int max_cuts, int min_node, int max_depth,
    long forest_every) {
  DataSet ds = make_dataset(to_matrix(x), to_vector(y));
  const CutpointGrid grid = make_cutpoints(ds, max_cuts);

  PriorConfig prior;
  prior.m = m;
  prior.m_prime = mprime;
  prior.kappa = kappa > 0.0 ? kappa : (model == "bart" ? 2.0 : 5.0);
  if (nu > 0.0) prior.nu = nu;
  if (lambda_ > 0.0) {
    prior.lambda = lambda_;
    prior.lambda_pinned = true;
  }
  if (tau > 0.0) {
    prior.tau = tau;
    prior.tau_pinned = true;
  }
  double ymin = ds.y[0], ymax = ds.y[0];
  for (double v : ds.y) {
    ymin = std::min(ymin, v);
    ymax = std::max(ymax, v);
  }
  finalize(prior, ymin, ymax, sample_variance(ds.y));

  ChainSettings st;
  st.n_iter = niter;
  st.burn_in = burnin;
  st.thin = thin;
  st.seed = seed;
  st.model = model == "bart" ? ModelKind::bart : ModelKind::hbart;
  st.min_node_size = min_node;
  st.max_depth = max_depth;
  st.forest_every = forest_every;

  const Matrix eval_pts = eval_x ? to_matrix(*eval_x) : ds.x;
  PyFit out;
  out.draws = run_chain(ds, grid, prior, st, eval_pts);
  return out;
}

}  // namespace

PYBIND11_MODULE(_hbart, mod) {
  mod.doc() = "tree-ensemble regression with a fitted variance surface";
  mod.attr("__version__") = HBART_VERSION;

  py::register_exception<DataError>(mod, "DataError", PyExc_ValueError);
  py::register_exception<NumericError>(mod, "NumericError", PyExc_ArithmeticError);

  mod.def(
      "simulate",
      [](std::size_t n, std::uint64_t seed) {
        const SimData sim = simulate_quadratic(n, seed);
        py::dict out;
        out["x"] = from_vector(sim.x);
        out["y"] = from_vector(sim.y);
        out["f_true"] = from_vector(sim.f_true);
        out["s_true"] = from_vector(sim.s_true);
        return out;
      },
      py::arg("n"), py::arg("seed") = 1,
      "Single-predictor benchmark draws: y = 4x^2 + 0.2 exp(2x) z.");

  py::class_<PyFit>(mod, "FitResult")
      .def_property_readonly("f_draws", &PyFit::f,
                             "kept draws x points, posterior f(x)")
      .def_property_readonly("s_draws", &PyFit::s,
                             "kept draws x points, posterior s(x)")
      .def_property_readonly("offset", &PyFit::offset)
      .def_property_readonly("model", &PyFit::model)
      .def_property_readonly("acceptance", &PyFit::acceptance)
      .def_property_readonly("variable_activity", &PyFit::variable_activity_dict)
      .def("predict", &PyFit::predict, py::arg("x_new"),
           py::arg("mode") = "mean_sd", py::arg("seed") = 1,
           py::arg("plugin_draws") = 1000)
      .def("save_forests", &PyFit::save, py::arg("path"));

  mod.def("fit", &fit_arrays, py::arg("x"), py::arg("y"),
          py::arg("eval_x") = std::nullopt, py::arg("model") = "hbart",
          py::arg("m") = 200, py::arg("mprime") = 40, py::arg("kappa") = -1.0,
          py::arg("nu") = -1.0, py::arg("lambda_") = -1.0, py::arg("tau") = -1.0,
          py::arg("niter") = 3000, py::arg("burnin") = 1000, py::arg("thin") = 1,
          py::arg("seed") = 1, py::arg("max_cuts") = 100,
          py::arg("min_node") = 5, py::arg("max_depth") = 15,
          py::arg("forest_every") = 0,
          "Run the MCMC on (x, y); draws evaluate at eval_x (default x).");

  mod.def("load_forests",
          [](const std::string& path) {
            PyFit out;
            out.draws = load_forests(path);
            return out;
          },
          py::arg("path"), "Reload a forest snapshot written by save_forests.");

  mod.def("calibrate_tau", &calibrate_tau, py::arg("y_min"), py::arg("y_max"),
          py::arg("m"), py::arg("kappa"));
  mod.def("calibrate_variance_prior", &calibrate_variance_prior, py::arg("nu"),
          py::arg("lambda_"), py::arg("mprime"),
          "Returns (nu', lambda') matching the product prior mean.");

  mod.def(
      "energy_statistic",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& p) {
        return energy_statistic(to_vector(p));
      },
      py::arg("p"), "One-sample energy distance of percentiles to U(0,1).");

  mod.def(
      "predictive_percentiles",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>&
             samples,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& y) {
        return from_vector(predictive_percentiles(to_matrix(samples), to_vector(y)));
      },
      py::arg("samples"), py::arg("y"),
      "Midrank percentile of each y among its predictive samples.");

  mod.def(
      "h_evidence",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>&
             s_draws,
         double gamma, double sigma_ref) {
        PosteriorDraws d;
        d.s = to_matrix(s_draws);
        d.f = Matrix(d.s.rows, d.s.cols, 0.0);
        const HEvidence h = h_evidence(d, gamma, sigma_ref);
        py::dict out;
        std::vector<double> order(h.order.begin(), h.order.end());
        out["order"] = from_vector(order);
        out["shat"] = from_vector(h.shat);
        out["lo"] = from_vector(h.lo);
        out["hi"] = from_vector(h.hi);
        out["exclusion_fraction"] = h.exclusion_fraction;
        return out;
      },
      py::arg("s_draws"), py::arg("gamma") = 0.9, py::arg("sigma_ref"),
      "Sorted posterior intervals for s(x_i) against a reference sigma.");

  mod.def(
      "load_csv",
      [](const std::string& path, const std::string& response) {
        const DataSet ds = load_csv(path, response);
        return py::make_tuple(from_matrix(ds.x), from_vector(ds.y), ds.names);
      },
      py::arg("path"), py::arg("response"),
      "Load a CSV with one-hot expansion; returns (x, y, names).");
}
