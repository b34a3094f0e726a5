#include <chrono>
#include <cmath>
#include <exception>
#include <functional>

#include "schroflow/errors.hpp"
#include "schroflow/flow.hpp"
#include "schroflow/radialfd.hpp"

namespace schroflow::radialfd {

namespace {

RouteRun timed(const std::string& name, const std::function<std::vector<cplx>()>& body) {
  RouteRun run;
  run.name = name;
  const auto start = std::chrono::steady_clock::now();
  try {
    run.values = body();
    run.ok = true;
  } catch (const std::exception& e) {
    run.failure = e.what();
  }
  run.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

PairError pair_error(const RouteRun& a, const RouteRun& b, std::span<const double> radii, int N) {
  PairError p;
  p.first = a.name;
  p.second = b.name;
  if (!a.ok || !b.ok) return p;
  double num = 0.0, den = 0.0, dmax = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double jac = std::pow(radii[i], N - 1.0);
    const double d = std::abs(a.values[i] - b.values[i]);
    num += jac * d * d;
    den += jac * std::norm(a.values[i]);
    dmax = std::max(dmax, d);
    ref = std::max(ref, std::abs(a.values[i]));
  }
  p.ok = true;
  p.rel_l2 = std::sqrt(num / den);
  p.rel_sup = dmax / ref;
  return p;
}

}  // namespace

CompareReport compare_routes(const CompareParams& params) {
  if (params.kernel_a && *params.kernel_a != params.a) throw ConfigError("compare_routes: kernel route uses a different a");
  if (params.fd_a && *params.fd_a != params.a) throw ConfigError("compare_routes: finite-difference route uses a different a");
  if (!(params.t > 0.0)) throw ConfigError("compare_routes: t must be > 0");
  if (!(params.r_hi > params.r_lo) || !(params.r_lo > 0.0)) throw ConfigError("compare_routes: invalid annulus");
  const int N = params.dimension;
  const int j = params.mode.j;
  const auto table = std::make_shared<const oscillator::SpectralTable>(
      oscillator::build_table(angular::constant_a_spectrum(N, params.a, j), N, j));
  if (!table->hardy_ok) throw DomainError("compare_routes: Hardy condition violated");
  const auto mode = oscillator::make_mode(params.mode, *table);

  const RadialSchema schema =
      RadialSchema::make(N, table->mu(j), params.fd_outer_radius, params.fd_points, params.fd_dt);
  CompareReport rep;
  std::vector<int> nodes;
  for (int i = 0; i < schema.points; ++i) {
    const double r = schema.r(i);
    if (r >= params.r_lo && r <= params.r_hi) {
      nodes.push_back(i);
      rep.radii.push_back(r);
    }
  }
  if (rep.radii.empty()) throw ConfigError("compare_routes: no finite-difference nodes inside the annulus");

  rep.routes.push_back(timed("closed", [&] {
    std::vector<cplx> v;
    for (double r : rep.radii) v.push_back(flow::evolve_mode_closed_form(mode, *table, r, params.t));
    return v;
  }));

  rep.routes.push_back(timed("kernel", [&] {
    auto s = oscillator::sample_mode(mode, make_radial_grid(params.kernel_quadrature));
    s.table = table;
    flow::PropagateOptions opt;
    RadialGrid out;
    out.r = rep.radii;
    out.w.assign(rep.radii.size(), schema.h());
    opt.output_grid = out;
    opt.threads = params.threads;
    const auto u = flow::propagate_representation(s, params.t, {table, 1, j, flow::KernelPath::mode_sum}, opt);
    return u.profiles.at(j);
  }));

  rep.routes.push_back(timed("fd", [&] {
    const double lift = 0.5 * (N - 1.0);
    std::vector<cplx> w(schema.points);
    for (int i = 0; i < schema.points; ++i) w[i] = std::pow(schema.r(i), lift) * oscillator::radial_profile(mode, schema.r(i));
    SchrodingerStepper(schema).advance(w, step_count(params.t, params.fd_dt));
    std::vector<cplx> v;
    for (int i : nodes) v.push_back(w[i] / std::pow(schema.r(i), lift));
    return v;
  }));

  rep.pairs.push_back(pair_error(rep.routes[0], rep.routes[1], rep.radii, N));
  rep.pairs.push_back(pair_error(rep.routes[0], rep.routes[2], rep.radii, N));
  rep.pairs.push_back(pair_error(rep.routes[1], rep.routes[2], rep.radii, N));
  return rep;
}

}  // namespace schroflow::radialfd
