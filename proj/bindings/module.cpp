// Python bindings for the main operations: penalties, graph construction,
// the RONMF solver, baselines, metrics, noise and synthetic data.

#include "ronmf/baselines.hpp"
#include "ronmf/graph.hpp"
#include "ronmf/io.hpp"
#include "ronmf/metrics.hpp"
#include "ronmf/noise.hpp"
#include "ronmf/penalty.hpp"
#include "ronmf/solver.hpp"
#include "ronmf/version.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ronmf;

namespace {

DataMatrix make_data(const Matrix& values, const std::optional<std::vector<int>>& labels) {
  DataMatrix data;
  data.values = values;
  if (labels) {
    data.labels = *labels;
    int max_label = -1;
    for (int y : data.labels) max_label = std::max(max_label, y);
    data.num_classes = max_label + 1;
  }
  const ValidationReport report = validate(data);
  if (!report.ok()) throw py::value_error(report.to_string());
  return data;
}

PenaltySpec spec_from_args(const std::string& kind, double sigma, double tau, double gamma) {
  return PenaltySpec::make(penalty_kind_from_string(kind), sigma, tau, gamma);
}

py::dict metrics_dict(const MetricReport& m) {
  py::dict out;
  out["acc"] = m.acc;
  out["f1"] = m.f1;
  out["nmi"] = m.nmi;
  out["pur"] = m.pur;
  return out;
}

}  // namespace

PYBIND11_MODULE(_ronmf, m) {
  m.doc() = "Robust orthogonal NMF clustering (C++ core)";
  m.attr("__version__") = kVersion;

  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_IOError);
  py::register_exception<NumericalAbort>(m, "NumericalAbort", PyExc_RuntimeError);

  m.def("phi_value",
        [](const std::string& kind, double sigma, double tau, double gamma, double x) {
          return phi_value(spec_from_args(kind, sigma, tau, gamma), x);
        },
        py::arg("kind"), py::arg("sigma"), py::arg("tau"), py::arg("gamma"), py::arg("x"),
        "Evaluate the non-convex penalty phi_sigma(x).");

  m.def("prox_scalar",
        [](const std::string& kind, double sigma, double tau, double gamma, double v) {
          const ProxResult r = prox_scalar(spec_from_args(kind, sigma, tau, gamma), v);
          return py::make_tuple(r.value, r.objective);
        },
        py::arg("kind"), py::arg("sigma"), py::arg("tau"), py::arg("gamma"), py::arg("v"),
        "Scalar proximal map; returns (value, objective).");

  m.def("prox_row",
        [](const std::string& kind, double sigma, double tau, double gamma, const Vector& v) {
          return prox_row(spec_from_args(kind, sigma, tau, gamma), v);
        },
        py::arg("kind"), py::arg("sigma"), py::arg("tau"), py::arg("gamma"), py::arg("v"));

  m.def("generate_synthetic",
        [](int classes, int per_class, int dim, double separation, std::uint64_t seed) {
          const DataMatrix d = generate_synthetic(classes, per_class, dim, separation, seed);
          return py::make_tuple(d.values, d.labels);
        },
        py::arg("classes"), py::arg("per_class"), py::arg("dim"), py::arg("separation"),
        py::arg("seed") = 0);

  m.def("knn_graph",
        [](const Matrix& X, int knn, const std::string& scheme, double bandwidth) {
          DataMatrix d;
          d.values = X;
          const GraphScheme gs =
              scheme == "heat" ? GraphScheme::heat(bandwidth) : GraphScheme::binary();
          return build_knn_graph(d, knn, gs);
        },
        py::arg("X"), py::arg("knn") = 5, py::arg("scheme") = "binary",
        py::arg("bandwidth") = 1.0);

  m.def("laplacian",
        [](const Matrix& W) {
          auto [deg, L] = laplacian(W);
          return py::make_tuple(deg, L);
        },
        py::arg("W"), "Degree vector and unnormalized Laplacian of a weight matrix.");

  m.def("fit",
        [](const Matrix& X, const std::vector<int>& labels, const std::string& penalty,
           double sigma, double tau, double gamma, double lam, double mu, double beta, int rank,
           double labeled_fraction, int knn, int max_outer_iters, double outer_tol,
           std::uint64_t seed, const std::string& init) {
          const DataMatrix data = make_data(X, labels);
          Hyperparams hp;
          hp.lambda = lam;
          hp.mu = mu;
          hp.beta = beta;
          hp.rank = rank;
          hp.labeled_fraction = labeled_fraction;
          hp.knn = knn;
          hp.max_outer_iters = max_outer_iters;
          hp.outer_tol = outer_tol;
          hp.seed = seed;
          const GraphContext ctx =
              build_graph_context(data, knn, GraphScheme::binary(), labeled_fraction, seed);
          const ClusteringResult res = fit(data, ctx, hp,
                                           spec_from_args(penalty, sigma, tau, gamma),
                                           init_strategy_from_string(init));
          py::dict out;
          out["labels"] = res.labels;
          out["U"] = res.state.U;
          out["A"] = res.state.A;
          out["Z"] = res.state.Z;
          out["iterations"] = res.iterations;
          out["final_feasibility"] = res.final_feasibility;
          if (res.metrics) out["metrics"] = metrics_dict(*res.metrics);
          py::list feas;
          for (const auto& rec : res.state.trace) feas.append(rec.feasibility);
          out["feasibility_trace"] = feas;
          return out;
        },
        py::arg("X"), py::arg("labels"), py::arg("penalty") = "etp", py::arg("sigma") = 1.0,
        py::arg("tau") = 3.0, py::arg("gamma") = 2.0, py::arg("lam") = 1000.0,
        py::arg("mu") = 1.0, py::arg("beta") = 1.0, py::arg("rank") = 0,
        py::arg("labeled_fraction") = 0.3, py::arg("knn") = 5,
        py::arg("max_outer_iters") = 200, py::arg("outer_tol") = 1e-5, py::arg("seed") = 0,
        py::arg("init") = "random",
        "Semi-supervised robust orthogonal NMF clustering of the columns of X.");

  m.def("nmf",
        [](const Matrix& X, int rank, int iters, std::uint64_t seed) {
          const BaselineResult r = nmf_multiplicative(X, rank, iters, seed);
          py::dict out;
          out["labels"] = r.labels;
          out["U"] = r.factors->first;
          out["V"] = r.factors->second;
          out["objective_trace"] = r.objective_trace;
          return out;
        },
        py::arg("X"), py::arg("rank"), py::arg("iters") = 200, py::arg("seed") = 0);

  m.def("kmeans",
        [](const Matrix& X, int k, int iters, std::uint64_t seed) {
          const BaselineResult r = kmeans(X, k, iters, seed);
          py::dict out;
          out["labels"] = r.labels;
          out["objective_trace"] = r.objective_trace;
          return out;
        },
        py::arg("X"), py::arg("k"), py::arg("iters") = 100, py::arg("seed") = 0);

  m.def("accuracy", &accuracy, py::arg("pred"), py::arg("truth"));
  m.def("pairwise_f1", &pairwise_f1, py::arg("pred"), py::arg("truth"));
  m.def("nmi", &nmi, py::arg("pred"), py::arg("truth"));
  m.def("purity", &purity, py::arg("pred"), py::arg("truth"));
  m.def("evaluate",
        [](const std::vector<int>& pred, const std::vector<int>& truth) {
          return metrics_dict(evaluate(pred, truth));
        },
        py::arg("pred"), py::arg("truth"));

  m.def("gaussian_corrupt",
        [](const Matrix& X, double ratio, double sigma_scale, std::uint64_t seed) {
          DataMatrix d;
          d.values = X;
          return gaussian_corrupt(d, ratio, sigma_scale, seed).values;
        },
        py::arg("X"), py::arg("ratio"), py::arg("sigma_scale") = 0.1, py::arg("seed") = 0);

  m.def("salt_pepper_corrupt",
        [](const Matrix& X, double density, std::uint64_t seed) {
          DataMatrix d;
          d.values = X;
          return salt_pepper_corrupt(d, density, seed).values;
        },
        py::arg("X"), py::arg("density"), py::arg("seed") = 0);

  m.def("poisson_corrupt",
        [](const Matrix& X, double scale, std::uint64_t seed) {
          DataMatrix d;
          d.values = X;
          return poisson_corrupt(d, scale, seed).values;
        },
        py::arg("X"), py::arg("scale"), py::arg("seed") = 0);

  m.def("load_matrix",
        [](const std::string& path, const std::string& format) {
          const DataMatrix d = load_matrix(path, format.empty()
                                                     ? matrix_format_from_path(path)
                                                     : matrix_format_from_string(format));
          return py::make_tuple(d.values, d.labels);
        },
        py::arg("path"), py::arg("format") = "");

  m.def("save_matrix",
        [](const Matrix& X, const std::optional<std::vector<int>>& labels,
           const std::string& path, const std::string& format) {
          save_matrix(make_data(X, labels), path,
                      format.empty() ? matrix_format_from_path(path)
                                     : matrix_format_from_string(format));
        },
        py::arg("X"), py::arg("labels"), py::arg("path"), py::arg("format") = "");
}
