#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "schroflow/cli.hpp"
#include "schroflow/errors.hpp"
#include "schroflow/flow.hpp"
#include "schroflow/radialfd.hpp"

namespace py = pybind11;
using namespace schroflow;

namespace {

std::shared_ptr<const oscillator::SpectralTable> constant_table(int N, double a, int modes) {
  return std::make_shared<const oscillator::SpectralTable>(
      oscillator::build_table(angular::constant_a_spectrum(N, a, modes), N, modes));
}

py::array_t<std::complex<double>> closed_form(int N, double a, int n, int j, py::array_t<double, py::array::forcecast> r,
                                              double t) {
  const auto table = constant_table(N, a, j);
  const auto mode = oscillator::make_mode({n, j}, *table);
  auto in = r.unchecked<1>();
  py::array_t<std::complex<double>> out(in.shape(0));
  auto o = out.mutable_unchecked<1>();
  for (py::ssize_t i = 0; i < in.shape(0); ++i) o(i) = flow::evolve_mode_closed_form(mode, *table, in(i), t);
  return out;
}

py::dict to_dict(const radialfd::CompareReport& rep) {
  py::dict d;
  d["radii"] = rep.radii;
  py::list routes;
  for (const auto& r : rep.routes) {
    py::dict e;
    e["name"] = r.name;
    e["ok"] = r.ok;
    e["failure"] = r.failure;
    e["runtime_seconds"] = r.runtime_seconds;
    routes.append(e);
  }
  d["routes"] = routes;
  py::list pairs;
  for (const auto& p : rep.pairs) {
    py::dict e;
    e["first"] = p.first;
    e["second"] = p.second;
    e["ok"] = p.ok;
    e["rel_l2"] = p.rel_l2;
    e["rel_sup"] = p.rel_sup;
    pairs.append(e);
  }
  d["pairs"] = pairs;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Inverse-square Schroedinger flows: spectral tables, closed-form evolution, kernels and decay fits";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<BoundsError>(m, "BoundsError", PyExc_IndexError);

  py::class_<oscillator::SpectralRow>(m, "SpectralRow")
      .def_readonly("k", &oscillator::SpectralRow::k)
      .def_readonly("mu", &oscillator::SpectralRow::mu)
      .def_readonly("alpha", &oscillator::SpectralRow::alpha)
      .def_readonly("beta", &oscillator::SpectralRow::beta);

  py::class_<oscillator::SpectralTable, std::shared_ptr<oscillator::SpectralTable>>(m, "SpectralTable")
      .def_readonly("dimension", &oscillator::SpectralTable::dimension)
      .def_readonly("rows", &oscillator::SpectralTable::rows)
      .def_readonly("hardy_ok", &oscillator::SpectralTable::hardy_ok)
      .def_property_readonly("decay_class",
                             [](const oscillator::SpectralTable& t) { return std::string(oscillator::to_string(t.decay_class)); })
      .def("mu", &oscillator::SpectralTable::mu, py::arg("k"))
      .def("alpha", &oscillator::SpectralTable::alpha, py::arg("k"))
      .def("beta", &oscillator::SpectralTable::beta, py::arg("k"))
      .def("to_csv", &oscillator::SpectralTable::to_csv)
      .def("__len__", &oscillator::SpectralTable::k_max);

  m.def(
      "constant_a_table",
      [](int N, double a, int modes) {
        return std::make_shared<oscillator::SpectralTable>(
            oscillator::build_table(angular::constant_a_spectrum(N, a, modes), N, modes));
      },
      py::arg("dimension"), py::arg("a"), py::arg("modes") = 16, "Spectral table of a constant angular potential.");

  m.def(
      "table_from_eigenvalues",
      [](std::vector<double> mu, int N) { return std::make_shared<oscillator::SpectralTable>(oscillator::build_table(mu, N)); },
      py::arg("mu"), py::arg("dimension"));

  m.def(
      "circle_eigenvalues",
      [](double flux, int truncation) {
        angular::AngularProblem p;
        p.dimension = 2;
        p.magnetic = angular::CircleFourier::constant(flux);
        p.truncation = truncation;
        return angular::solve(p).eigenvalues;
      },
      py::arg("flux"), py::arg("truncation") = 32, "Galerkin eigenvalues for a constant magnetic flux on the circle.");

  m.def("bessel_j", [](double nu, double r) { return specfun::bessel_j(specfun::BesselOrder(nu), r); }, py::arg("nu"), py::arg("r"));

  m.def("evolve_closed_form", &closed_form, py::arg("dimension"), py::arg("a"), py::arg("n"), py::arg("j"), py::arg("r"),
        py::arg("t"), "Evolved oscillator mode of a constant-a problem at radii r and time t.");

  m.def("free_gaussian", &flow::free_gaussian_evolved, py::arg("dimension"), py::arg("r"), py::arg("t"));

  m.def(
      "free_kernel",
      [](int degree, std::pair<double, double> x, std::pair<double, double> y, double rho) {
        const auto table = constant_table(3, 0.0, (degree + 1) * (degree + 1));
        flow::KernelSpec spec{table, 1, flow::truncation_for_degree(*table, degree), flow::KernelPath::legendre_collapsed};
        const auto v = flow::kernel_eval(spec, {x.first, x.second}, {y.first, y.second}, rho);
        return py::make_tuple(v.value, v.tail_estimate, v.convergence_warning);
      },
      py::arg("degree"), py::arg("x"), py::arg("y"), py::arg("rho"),
      "Free N = 3 kernel truncated at a harmonic degree; returns (value, tail_estimate, warning).");

  m.def(
      "decay_fit",
      [](std::vector<double> times, std::vector<double> norms, double w) {
        const auto r = flow::decay_fit(times, norms, w);
        py::dict d;
        d["slope"] = r.slope;
        d["intercept"] = r.intercept;
        d["r_squared"] = r.r_squared;
        d["bracket_slope"] = r.bracket_slope;
        return d;
      },
      py::arg("times"), py::arg("norms"), py::arg("weight") = 0.0);

  m.def("dyadic_times", &flow::dyadic_times, py::arg("lo") = 0, py::arg("hi") = 10);

  m.def(
      "compare_routes",
      [](double a, int n, int j, double t, int fd_points, int threads) {
        radialfd::CompareParams p;
        p.a = a;
        p.mode = {n, j};
        p.t = t;
        p.fd_points = fd_points;
        p.threads = threads;
        return to_dict(radialfd::compare_routes(p));
      },
      py::arg("a") = -0.1875, py::arg("n") = 0, py::arg("j") = 1, py::arg("t") = 1.0, py::arg("fd_points") = 24000,
      py::arg("threads") = 1, "Closed form, representation formula and Crank-Nicolson for one N = 3 mode.");

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "schroflow");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");

  m.attr("__version__") = SCHROFLOW_VERSION;
}
