#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <utility>
#include <vector>

#include "tracekit/audit.hpp"
#include "tracekit/bounds.hpp"
#include "tracekit/eigen.hpp"
#include "tracekit/errors.hpp"
#include "tracekit/estimator.hpp"
#include "tracekit/generator.hpp"
#include "tracekit/matrix_market.hpp"
#include "tracekit/oracle.hpp"
#include "tracekit/sampler.hpp"
#include "tracekit/version.hpp"

namespace py = pybind11;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

tracekit::DenseSymmetric to_dense(const Array& arr) {
  if (arr.ndim() != 2 || arr.shape(0) != arr.shape(1)) {
    throw tracekit::NonSquareError("expected a square 2-D array");
  }
  const auto m = static_cast<std::size_t>(arr.shape(0));
  std::vector<double> flat(arr.data(), arr.data() + m * m);
  return tracekit::DenseSymmetric::from_flat(m, std::move(flat));
}

py::array_t<double> to_array(const tracekit::DenseSymmetric& a) {
  const auto m = a.dim();
  py::array_t<double> out({m, m});
  std::memcpy(out.mutable_data(), a.entries().data(), m * m * sizeof(double));
  return out;
}

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(v.size());
  std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(double));
  return out;
}

tracekit::TailSide side_from_name(const std::string& side) {
  if (side == "two_sided") return tracekit::TailSide::two_sided;
  if (side == "upper") return tracekit::TailSide::upper;
  if (side == "lower") return tracekit::TailSide::lower;
  throw tracekit::DomainError("side must be two_sided, upper, or lower");
}

}  // namespace

PYBIND11_MODULE(_tracekit, m) {
  m.doc() = "Matrix-free stochastic trace estimation with exact desk-scale oracles";
  m.attr("__version__") = tracekit::kVersion;
  m.attr("RNG_ID") = tracekit::kRngId;

  py::class_<tracekit::TraceEstimate>(m, "TraceEstimate")
      .def_readonly("n", &tracekit::TraceEstimate::n)
      .def_readonly("estimate", &tracekit::TraceEstimate::mean)
      .def_readonly("sample_variance", &tracekit::TraceEstimate::sample_variance)
      .def_readonly("min_q", &tracekit::TraceEstimate::min_q)
      .def_readonly("max_q", &tracekit::TraceEstimate::max_q)
      .def_readonly("seed", &tracekit::TraceEstimate::seed)
      .def("__repr__",
           [](const tracekit::TraceEstimate& e) {
             return "TraceEstimate(n=" + std::to_string(e.n) +
                    ", estimate=" + std::to_string(e.mean) + ", seed=" + std::to_string(e.seed) +
                    ")";
           })
      .def("as_dict", [](const tracekit::TraceEstimate& e) {
        py::dict d;
        d["n"] = e.n;
        d["estimate"] = e.mean;
        d["sample_variance"] = e.sample_variance;
        d["seed"] = e.seed;
        d["min_q"] = e.min_q;
        d["max_q"] = e.max_q;
        return d;
      });

  py::class_<tracekit::ExactErrorDistribution>(m, "ExactErrorDistribution")
      .def_property_readonly("dim", &tracekit::ExactErrorDistribution::dim)
      .def_property_readonly("trace", &tracekit::ExactErrorDistribution::trace)
      .def_property_readonly("values",
                             [](const tracekit::ExactErrorDistribution& d) {
                               return to_array(std::vector<double>(d.values().begin(),
                                                                   d.values().end()));
                             })
      .def("mean", &tracekit::ExactErrorDistribution::mean)
      .def("abs_moment", &tracekit::ExactErrorDistribution::abs_moment, py::arg("d"))
      .def(
          "tail",
          [](const tracekit::ExactErrorDistribution& d, double eps, const std::string& side) {
            return d.tail(eps, side_from_name(side));
          },
          py::arg("eps"), py::arg("side") = "two_sided")
      .def("mgf", &tracekit::ExactErrorDistribution::mgf, py::arg("t"));

  m.def(
      "rademacher",
      [](std::size_t dim, std::uint64_t seed, std::uint64_t index) {
        return to_array(tracekit::rademacher(dim, seed, index));
      },
      py::arg("m"), py::arg("seed") = 0, py::arg("index") = 0,
      "Deterministic Rademacher sign vector for (seed, index)");

  m.def(
      "quadratic_form",
      [](const Array& matrix, const Array& z) {
        const auto dense = to_dense(matrix);
        if (z.ndim() != 1) throw tracekit::DimensionMismatchError("z must be 1-D");
        std::vector<double> zv(z.data(), z.data() + z.shape(0));
        return tracekit::quadratic_form(tracekit::as_operator(dense), zv);
      },
      py::arg("matrix"), py::arg("z"));

  m.def(
      "estimate_trace",
      [](const Array& matrix, std::uint64_t n, std::uint64_t seed, unsigned threads) {
        auto dense = to_dense(matrix);
        py::gil_scoped_release release;
        return tracekit::estimate_trace(tracekit::as_operator(std::move(dense)), n, seed,
                                        threads);
      },
      py::arg("matrix"), py::arg("n"), py::arg("seed") = 0, py::arg("threads") = 0,
      "n-sample randomized trace estimate; bit-identical for any thread count");

  m.def("relative_error", &tracekit::relative_error, py::arg("estimate"), py::arg("true_trace"));

  m.def(
      "exact_trace", [](const Array& matrix) { return to_dense(matrix).trace(); },
      py::arg("matrix"));

  m.def(
      "eigenvalues",
      [](const Array& matrix) {
        const auto eig = tracekit::eigenvalues(to_dense(matrix));
        py::array_t<double> b({eig.dim, eig.dim});
        std::memcpy(b.mutable_data(), eig.b.data(), eig.dim * eig.dim * sizeof(double));
        return py::make_tuple(to_array(eig.lambda), b);
      },
      py::arg("matrix"),
      "Jacobi eigendecomposition: (lambda descending, B with eigenvector rows)");

  m.def(
      "generate", [](const std::string& spec) {
        return to_array(tracekit::generate(tracekit::GeneratorSpec::parse(spec)));
      },
      py::arg("spec"), "Synthetic PSD matrix from a kind:m[:k][:seed] spec");

  m.def(
      "exact_distribution",
      [](const Array& matrix) {
        auto dense = to_dense(matrix);
        py::gil_scoped_release release;
        return tracekit::exact_distribution(dense);
      },
      py::arg("matrix"), "Exhaustive distribution of z^T A z over the sign cube");

  m.def(
      "variance_formula", [](const Array& matrix) { return tracekit::variance_formula(to_dense(matrix)); },
      py::arg("matrix"));

  m.def(
      "sample_size",
      [](double eps, double delta, const std::string& method, std::uint64_t rank) {
        tracekit::BoundQuery q;
        q.eps = eps;
        q.delta = delta;
        q.rank = rank;
        return tracekit::sample_size(q, tracekit::planner_from_name(method));
      },
      py::arg("eps"), py::arg("delta"), py::arg("method") = "this-work", py::arg("rank") = 1);

  m.def("moment_bound", &tracekit::moment_bound, py::arg("d"));
  m.def(
      "mgf_envelope",
      [](double v, double c, double t) { return tracekit::mgf_envelope({v, c}, t); },
      py::arg("v"), py::arg("c"), py::arg("t"));
  m.def(
      "tail_lemma", [](double v, double c, double eps) { return tracekit::tail_lemma({v, c}, eps); },
      py::arg("v"), py::arg("c"), py::arg("eps"));
  m.def("tail_theorem", &tracekit::tail_theorem, py::arg("eps"), py::arg("n") = 1);
  m.def(
      "subgamma_sum",
      [](const std::vector<std::pair<double, double>>& parts) {
        std::vector<tracekit::SubGamma> sg;
        sg.reserve(parts.size());
        for (const auto& [v, c] : parts) sg.push_back({v, c});
        const auto out = tracekit::subgamma_sum(sg);
        return py::make_tuple(out.v, out.c);
      },
      py::arg("parts"));
  m.def(
      "subgamma_scale",
      [](double v, double c, double a) {
        const auto out = tracekit::subgamma_scale({v, c}, a);
        return py::make_tuple(out.v, out.c);
      },
      py::arg("v"), py::arg("c"), py::arg("a"));
  m.def("taylor_ratio", &tracekit::taylor_ratio, py::arg("d"));
  m.def("mgf_series_partial", &tracekit::mgf_series_partial, py::arg("t"), py::arg("terms"));

  m.def(
      "load_matrix_market",
      [](const std::string& path) { return to_array(tracekit::load_matrix_market(path)); },
      py::arg("path"));
  m.def(
      "save_matrix_market",
      [](const Array& matrix, const std::string& path) {
        tracekit::save_matrix_market(to_dense(matrix), path);
      },
      py::arg("matrix"), py::arg("path"));
}
