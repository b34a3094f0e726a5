#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <span>

#include "config.hpp"
#include "schroflow/cli.hpp"
#include "schroflow/flow.hpp"
#include "schroflow/radialfd.hpp"

namespace schroflow::cli {

namespace {

using oscillator::ModeIndex;

ModeIndex read_mode(Block& b, const std::string& key) {
  Block m = b.child(key);
  ModeIndex idx{m.get<int>("n", 0), m.get<int>("j", 1)};
  m.finish();
  if (idx.n < 0 || idx.j < 1) throw ConfigError("mode needs n >= 0 and j >= 1");
  return idx;
}

RadialQuadratureSpec read_quadrature(Block& b, const std::string& key) {
  Block q = b.child(key);
  RadialQuadratureSpec s;
  s.outer_radius = q.get<double>("outer_radius", s.outer_radius);
  s.panels = q.get<int>("panels", s.panels);
  s.order = q.get<int>("order", s.order);
  s.grading_levels = q.get<int>("grading_levels", s.grading_levels);
  s.grading_ratio = q.get<double>("grading_ratio", s.grading_ratio);
  q.finish();
  if (!(s.outer_radius > 0.0) || s.panels < 1 || s.order < 1 || s.grading_levels < 0 || !(s.grading_ratio > 0.0) ||
      !(s.grading_ratio < 1.0)) {
    throw ConfigError("invalid radial quadrature");
  }
  return s;
}

std::vector<double> read_times(Block& b, const std::string& key, std::vector<double> fallback) {
  auto t = b.get<std::vector<double>>(key, fallback);
  if (t.empty()) throw ConfigError("'" + b.qualified(key) + "' is empty");
  return t;
}

/// Expectation keys allowed for a command; anything else is a config error.
class Expect {
 public:
  Expect(const std::optional<json>& e, std::set<std::string> allowed) : e_(e) {
    if (!e_) return;
    if (!e_->is_object()) throw ConfigError("--expect must be a JSON object");
    for (const auto& [k, v] : e_->items())
      if (!allowed.count(k)) throw ConfigError("unknown expectation '" + k + "'");
  }
  bool active() const { return e_.has_value(); }
  std::optional<double> value(const std::string& key, double theory = std::nan("")) const {
    if (!e_) return std::nullopt;
    return expected_value(*e_, key, theory);
  }
  double number(const std::string& key, double fallback) const {
    if (!e_ || !e_->contains(key)) return fallback;
    if (!e_->at(key).is_number()) throw ConfigError("expectation '" + key + "' must be a number");
    return e_->at(key).get<double>();
  }
  std::optional<std::string> text(const std::string& key) const {
    if (!e_ || !e_->contains(key)) return std::nullopt;
    if (!e_->at(key).is_string()) throw ConfigError("expectation '" + key + "' must be a string");
    return e_->at(key).get<std::string>();
  }

 private:
  const std::optional<json>& e_;
};

std::vector<double> cell_centers(double lo, double hi, int points) {
  if (points < 1 || !(hi > lo)) throw ConfigError("radii need points >= 1 and max > min");
  std::vector<double> r(points);
  for (int i = 0; i < points; ++i) r[i] = lo + (i + 0.5) * (hi - lo) / points;
  return r;
}

struct Radii {
  double lo = 0.1;
  double hi = 8.0;
  int points = 200;
};

Radii read_radii(Block& b, const std::string& key, Radii d) {
  Block rb = b.child(key);
  d.lo = rb.get<double>("min", d.lo);
  d.hi = rb.get<double>("max", d.hi);
  d.points = rb.get<int>("points", d.points);
  rb.finish();
  if (!(d.lo >= 0.0) || !(d.hi > d.lo) || d.points < 1) throw ConfigError("'" + b.qualified(key) + "' is empty or inverted");
  return d;
}

using cplx = std::complex<double>;

// relative L^2 of a - ref against ref with the r^{N-1} Jacobian on uniform radii
double rel_l2(std::span<const double> r, std::span<const cplx> a, std::span<const cplx> ref, int N) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double jac = std::pow(r[i], N - 1.0);
    num += jac * std::norm(a[i] - ref[i]);
    den += jac * std::norm(ref[i]);
  }
  return std::sqrt(num / den);
}

int finish_expect(const std::vector<std::string>& misses) {
  if (misses.empty()) return kOk;
  std::string all;
  for (const auto& m : misses) all += (all.empty() ? "" : "; ") + m;
  throw ExpectationMiss(all);
}

}  // namespace

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(RunContext& ctx, Block& root, std::ostream& out) {
  Block pb = root.child("problem");
  const Problem p = read_problem(pb);
  Block eb = root.child("experiment");
  eb.finish();
  root.finish();
  const Expect expect(ctx.expect, {"classification", "alpha_1", "beta_1", "tolerance"});
  const auto& t = *p.table;
  ctx.prov.note_truncation("problem.modes", t.k_max());
  const std::string cls(oscillator::to_string(t.decay_class));

  std::vector<std::vector<std::string>> rows;
  for (const auto& r : t.rows) rows.push_back({std::to_string(r.k), fmt(r.mu), fmt(r.alpha), fmt(r.beta)});
  write_csv(ctx, "spectrum.csv", {"k", "mu", "alpha", "beta"}, rows, {"classification: " + cls});
  out << "classification: " << cls << "\n";

  std::vector<std::string> misses;
  if (const auto c = expect.text("classification"); c && *c != cls) misses.push_back("classification " + cls + " != " + *c);
  const double tol = expect.number("tolerance", 1e-12);
  if (const auto a = expect.value("alpha_1"); a && !(std::abs(t.alpha(1) - *a) <= tol)) {
    misses.push_back("alpha_1 = " + fmt(t.alpha(1)));
  }
  if (const auto b = expect.value("beta_1"); b && !(std::abs(t.beta(1) - *b) <= tol)) {
    misses.push_back("beta_1 = " + fmt(t.beta(1)));
  }
  if (!t.hardy_ok) return kHardyInvalid;
  return finish_expect(misses);
}

// ---------------------------------------------------------------- evolve

int cmd_evolve(RunContext& ctx, Block& root, std::ostream& out) {
  Block pb = root.child("problem");
  const Problem p = read_problem(pb);
  Block eb = root.child("experiment");
  const std::string route = eb.get<std::string>("route", "closed");
  const ModeIndex idx = read_mode(eb, "mode");
  const auto times = read_times(eb, "times", {1.0});
  const Radii radii = read_radii(eb, "radii", {});
  const RadialQuadratureSpec quad = read_quadrature(eb, "kernel_quadrature");
  Block fb = eb.child("fd");
  const double fd_R = fb.get<double>("outer_radius", 30.0);
  const int fd_M = fb.get<int>("points", 24000);
  const double fd_dt = fb.get<double>("dt", 1e-3);
  fb.finish();
  eb.finish();
  root.finish();
  const Expect expect(ctx.expect, {"rel_l2"});

  if (route != "closed" && route != "kernel" && route != "fd") throw ConfigError("experiment.route must be closed, kernel or fd");
  require_hardy(p);
  const auto& table = *p.table;
  if (idx.j > table.k_max()) throw ConfigError("experiment.mode.j exceeds problem.modes");
  for (double t : times) {
    if (!(t >= 0.0)) throw ConfigError("experiment.times must be >= 0");
    if (route == "kernel" && !(t > 0.0)) throw ConfigError("the kernel route needs t > 0");
  }
  const int N = p.dimension;
  const auto mode = oscillator::make_mode(idx, table);
  ctx.prov.note_truncation("problem.modes", table.k_max());

  std::vector<double> r;
  std::optional<radialfd::RadialSchema> schema;
  std::vector<int> nodes;
  if (route == "fd") {
    schema = radialfd::RadialSchema::make(N, table.mu(idx.j), fd_R, fd_M, fd_dt);
    std::vector<int> inside;
    for (int i = 0; i < schema->points; ++i)
      if (schema->r(i) >= radii.lo && schema->r(i) <= radii.hi) inside.push_back(i);
    if (inside.empty()) throw ConfigError("no finite-difference nodes inside experiment.radii");
    const std::size_t stride = std::max<std::size_t>(1, inside.size() / radii.points);
    for (std::size_t k = 0; k < inside.size(); k += stride) {
      nodes.push_back(inside[k]);
      r.push_back(schema->r(inside[k]));
    }
  } else {
    r = cell_centers(radii.lo, radii.hi, radii.points);
  }

  std::vector<std::vector<std::string>> rows;
  json summary = json::array();
  double worst = 0.0;
  std::vector<cplx> w;
  double fd_time = 0.0;
  if (schema) {
    w.resize(schema->points);
    for (int i = 0; i < schema->points; ++i) {
      w[i] = std::pow(schema->r(i), 0.5 * (N - 1)) * oscillator::radial_profile(mode, schema->r(i));
    }
  }
  for (double t : times) {
    std::vector<cplx> closed(r.size()), u(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) closed[i] = flow::evolve_mode_closed_form(mode, table, r[i], t);
    if (route == "closed") {
      u = closed;
    } else if (route == "kernel") {
      auto s = oscillator::sample_mode(mode, make_radial_grid(quad));
      s.table = p.table;
      flow::PropagateOptions opt;
      opt.output_grid = RadialGrid{r, std::vector<double>(r.size(), 0.0)};
      opt.threads = ctx.threads;
      u = flow::propagate_representation(s, t, {p.table, 1, idx.j, flow::KernelPath::mode_sum}, opt).profiles.at(idx.j);
    } else {
      if (!(t >= fd_time)) throw ConfigError("the fd route needs increasing times");
      radialfd::SchrodingerStepper(*schema).advance(w, radialfd::step_count(t - fd_time, fd_dt));
      fd_time = t;
      for (std::size_t i = 0; i < nodes.size(); ++i) u[i] = w[nodes[i]] / std::pow(r[i], 0.5 * (N - 1));
    }
    for (std::size_t i = 0; i < r.size(); ++i) {
      rows.push_back({fmt(t), fmt(r[i]), std::to_string(idx.j), fmt(u[i].real()), fmt(u[i].imag())});
    }
    const double diff = route == "closed" ? 0.0 : rel_l2(r, u, closed, N);
    worst = std::max(worst, diff);
    summary.push_back({{"t", t}, {"rel_l2_vs_closed", diff}});
  }
  write_csv(ctx, "profiles.csv", {"t", "r", "mode", "re_u", "im_u"}, rows);
  write_json(ctx, "summary.json",
             {{"route", route}, {"mode", {{"n", idx.n}, {"j", idx.j}}}, {"times", summary}, {"max_rel_l2_vs_closed", worst}});
  out << "evolve: route " << route << ", max rel L2 vs closed form " << fmt(worst) << "\n";
  std::vector<std::string> misses;
  if (const auto e = expect.value("rel_l2"); e && !(worst <= *e)) misses.push_back("rel L2 " + fmt(worst) + " > " + fmt(*e));
  return finish_expect(misses);
}

// ---------------------------------------------------------------- decay

int cmd_decay(RunContext& ctx, Block& root, std::ostream& out) {
  Block pb = root.child("problem");
  const Problem p = read_problem(pb);
  Block eb = root.child("experiment");
  const auto times = read_times(eb, "times", flow::dyadic_times());
  std::vector<double> norms;
  double weight = 0.0;
  double theory = 0.0;
  std::string what;
  std::vector<double> r_lo_sweep, sweep_times;
  if (eb.has("synthetic")) {
    Block sb = eb.child("synthetic");
    const double e = sb.require<double>("exponent");
    const double amp = sb.get<double>("amplitude", 1.0);
    sb.finish();
    eb.finish();
    root.finish();
    for (double t : times) norms.push_back(amp * std::pow(t, e));
    theory = e;
    what = "synthetic power law";
  } else {
    const ModeIndex idx = read_mode(eb, "mode");
    require_hardy(p);
    const auto& table = *p.table;
    if (idx.j > table.k_max()) throw ConfigError("experiment.mode.j exceeds problem.modes");
    const double alpha = table.alpha(idx.j);
    weight = eb.get<double>("weight", alpha);
    const auto window = eb.get<std::vector<double>>("window", {0.0, 1e300});
    const int points = eb.get<int>("points", 4001);
    const double extent = eb.get<double>("extent", 12.0);
    r_lo_sweep = eb.get<std::vector<double>>("r_lo_sweep", {});
    std::sort(r_lo_sweep.begin(), r_lo_sweep.end());
    if (!r_lo_sweep.empty()) sweep_times = eb.get<std::vector<double>>("sweep_times", {1.0, 5.0, 25.0});
    eb.finish();
    root.finish();
    if (window.size() != 2 || !(window[1] > window[0]) || !(window[0] >= 0.0)) throw ConfigError("experiment.window must be [r_lo, r_hi]");
    if (points < 2 || !(extent > 0.0)) throw ConfigError("experiment.points >= 2 and extent > 0 required");
    if (window[0] == 0.0 && weight < alpha) throw ConfigError("weight below alpha_j needs a window with r_lo > 0");
    const auto mode = oscillator::make_mode(idx, table);
    const double amax = table.angular->max_abs(static_cast<std::size_t>(idx.j - 1));
    auto sup_at = [&](double t, double r_lo, double r_hi) {
      const double s = std::sqrt(1.0 + t * t);
      std::vector<double> radii;
      if (r_lo > 0.0) radii.push_back(r_lo);
      for (int i = 0; i < points; ++i) radii.push_back(s * extent * i / (points - 1));
      return flow::weighted_sup_norm(
          [&](double r) {
            const double e = weight - alpha;
            const double f = r == 0.0 ? (e > 0.0 ? 0.0 : 1.0) : std::pow(r, e);
            return f * std::abs(flow::evolve_mode_closed_form_weighted(mode, table, r, t));
          },
          radii, r_lo, r_hi, amax);
    };
    for (double t : times) norms.push_back(sup_at(t, window[0], window[1]));
    theory = -0.5 * p.dimension + std::max(weight, alpha);
    what = "mode (" + std::to_string(idx.n) + "," + std::to_string(idx.j) + ")";
    if (!r_lo_sweep.empty()) {
      json sweep = json::array();
      for (double t : sweep_times) {
        std::vector<double> sups;
        for (double lo : r_lo_sweep) sups.push_back(sup_at(t, lo, window[1]));
        const auto fit = flow::decay_fit(r_lo_sweep, sups, weight);
        sweep.push_back({{"t", t}, {"r_lo", r_lo_sweep}, {"sup", sups}, {"exponent", fit.slope}});
      }
      write_json(ctx, "divergence.json", {{"weight", weight}, {"theory_exponent", weight - alpha}, {"sweep", sweep}});
    }
  }
  const Expect expect(ctx.expect, {"slope", "tolerance"});
  const auto rep = flow::decay_fit(times, norms, weight);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < times.size(); ++i) rows.push_back({fmt(times[i]), fmt(norms[i]), fmt(norms[i])});
  write_csv(ctx, "samples.csv", {"t", "norm", "norm_mode"}, rows);
  write_json(ctx, "decay.json",
             {{"source", what}, {"times", rep.times}, {"norms", rep.norms}, {"weight_exponent", rep.weight_exponent},
              {"fitted_slope", rep.slope}, {"fitted_intercept", rep.intercept}, {"r_squared", rep.r_squared},
              {"bracket_slope", rep.bracket_slope}, {"theory_slope", theory}});
  out << "decay: " << what << ", slope " << fmt(rep.slope) << " (theory " << fmt(theory) << "), r^2 " << fmt(rep.r_squared)
      << ", slope against log sqrt(1+t^2) " << fmt(rep.bracket_slope) << "\n";
  std::vector<std::string> misses;
  const double tol = expect.number("tolerance", 0.02);
  if (const auto e = expect.value("slope", theory); e && !(std::abs(rep.slope - *e) <= tol)) {
    misses.push_back("slope " + fmt(rep.slope) + " misses " + fmt(*e) + " +- " + fmt(tol));
  }
  return finish_expect(misses);
}

// ---------------------------------------------------------------- kernel

int cmd_kernel(RunContext& ctx, Block& root, std::ostream& out) {
  Block eb = root.child("experiment");
  const int k_start = eb.get<int>("k_start", 1);
  const bool by_degree = eb.has("degree_cutoff") || !eb.has("k_trunc");
  int degree = -1, k_trunc = 0;
  if (by_degree) {
    degree = eb.get<int>("degree_cutoff", 60);
  } else {
    k_trunc = eb.require<int>("k_trunc");
  }
  Block pb = root.child("problem");
  const int dim = pb.has("dimension") ? pb.raw("dimension").get<int>() : 3;
  const int need = by_degree && dim >= 3 ? static_cast<int>((degree + 1) * (degree + 1)) : 0;
  const Problem p = read_problem(pb, dim == 3 ? need : 0);
  require_hardy(p);
  const auto& table = *p.table;
  if (by_degree) {
    if (p.dimension != 3 || !p.constant_a) throw ConfigError("experiment.degree_cutoff needs N = 3 with constant a; use k_trunc");
    k_trunc = flow::truncation_for_degree(table, degree);
  }
  const bool collapsible = p.dimension == 3 && table.angular->basis == angular::BasisTag::analytic_constant;
  const std::string path = eb.get<std::string>("path", collapsible ? "legendre_collapsed" : "mode_sum");
  if (path != "legendre_collapsed" && path != "mode_sum") throw ConfigError("experiment.path must be mode_sum or legendre_collapsed");
  flow::KernelSpec spec{p.table, k_start, k_trunc,
                        path == "mode_sum" ? flow::KernelPath::mode_sum : flow::KernelPath::legendre_collapsed};
  spec.validate();
  const double weight = eb.get<double>("weight", table.alpha(k_start));
  Block rb = eb.child("rho");
  const double rho_min = rb.get<double>("min", 0.0);
  const double rho_max = rb.get<double>("max", 10.0);
  const int rho_points = rb.get<int>("points", 21);
  const std::string spacing = rb.get<std::string>("spacing", "linear");
  rb.finish();
  const int pairs = eb.get<int>("pairs", 0);
  const auto angles = eb.get<std::vector<double>>("angles", {0.0, 0.5 * std::numbers::pi, std::numbers::pi});
  const double small_rho = eb.get<double>("small_rho", 0.1);
  const double mid_rho = eb.get<double>("mid_rho", 10.0);
  eb.finish();
  root.finish();
  const Expect expect(ctx.expect, {"constancy", "small_to_mid_ratio", "max_tail"});
  if (rho_points < 1 || (pairs == 0 && angles.empty())) throw ConfigError("kernel sweep grid is empty");
  if (!(rho_max >= rho_min) || !(rho_min >= 0.0)) throw ConfigError("experiment.rho must satisfy 0 <= min <= max");
  if (spacing == "log" && !(rho_min > 0.0)) throw ConfigError("log rho spacing needs min > 0");
  if (spacing != "log" && spacing != "linear") throw ConfigError("experiment.rho.spacing must be linear or log");
  ctx.prov.note_truncation("k_trunc", k_trunc);

  struct Sample {
    double rho;
    angular::Direction x, y;
  };
  std::vector<Sample> samples;
  if (pairs > 0) {
    std::mt19937_64 gen(ctx.seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto dir = [&]() -> angular::Direction {
      if (p.dimension == 2) return {2 * std::numbers::pi * u01(gen), 0.0};
      return {std::acos(2 * u01(gen) - 1), 2 * std::numbers::pi * u01(gen)};
    };
    for (int i = 0; i < pairs; ++i) {
      const double v = u01(gen);
      const double rho = spacing == "log" ? rho_min * std::pow(rho_max / rho_min, v) : rho_min + (rho_max - rho_min) * v;
      const auto x = dir();
      samples.push_back({rho, x, dir()});
    }
  } else {
    for (int i = 0; i < rho_points; ++i) {
      const double v = rho_points == 1 ? 0.0 : static_cast<double>(i) / (rho_points - 1);
      const double rho = spacing == "log" ? rho_min * std::pow(rho_max / rho_min, v) : rho_min + (rho_max - rho_min) * v;
      for (double a : angles) samples.push_back({rho, {0.0, 0.0}, {a, 0.0}});
    }
  }

  const double scale = std::pow(2 * std::numbers::pi, 0.5 * p.dimension);
  std::vector<std::vector<std::string>> rows;
  double dev = 0.0, tail = 0.0, small_max = 0.0, mid_max = 0.0;
  int warnings = 0;
  for (const auto& s : samples) {
    const auto k = flow::kernel_eval(spec, s.x, s.y, s.rho);
    const double wmod = s.rho > 0.0 ? std::pow(s.rho, weight) * std::abs(k.value)
                                    : std::abs(flow::kernel_eval_weighted(spec, s.x, s.y, 0.0, weight).value);
    const double constancy = scale * std::abs(k.value);
    dev = std::max(dev, std::abs(constancy - 1.0));
    tail = std::max(tail, k.tail_estimate);
    warnings += k.convergence_warning;
    if (s.rho < small_rho) small_max = std::max(small_max, wmod);
    else if (s.rho <= mid_rho) mid_max = std::max(mid_max, wmod);
    rows.push_back({fmt(s.rho), fmt(s.x.theta), fmt(s.x.phi), fmt(s.y.theta), fmt(s.y.phi), fmt(k.value.real()),
                    fmt(k.value.imag()), fmt(constancy), fmt(wmod), fmt(k.tail_estimate),
                    k.convergence_warning ? "1" : "0"});
  }
  write_csv(ctx, "kernel.csv",
            {"rho", "x_theta", "x_phi", "y_theta", "y_phi", "re_K", "im_K", "constancy", "weighted_modulus",
             "tail_estimate", "warning"},
            rows);
  const double ratio = mid_max > 0.0 ? small_max / mid_max : std::nan("");
  write_json(ctx, "kernel_summary.json",
             {{"k_start", k_start}, {"k_trunc", k_trunc}, {"path", path}, {"weight", weight}, {"samples", samples.size()},
              {"max_constancy_deviation", dev}, {"max_tail_estimate", tail}, {"convergence_warnings", warnings},
              {"small_rho_weighted_max", small_max}, {"mid_rho_weighted_max", mid_max},
              {"small_to_mid_ratio", std::isfinite(ratio) ? json(ratio) : json(nullptr)}});
  out << "kernel: " << samples.size() << " samples, max | |K|(2pi)^{N/2} - 1 | = " << fmt(dev) << ", warnings " << warnings
      << "\n";
  std::vector<std::string> misses;
  if (const auto e = expect.value("constancy"); e && !(dev <= *e)) misses.push_back("constancy deviation " + fmt(dev));
  if (const auto e = expect.value("small_to_mid_ratio"); e && !(ratio <= *e)) misses.push_back("small/mid ratio " + fmt(ratio));
  if (const auto e = expect.value("max_tail"); e && !(tail <= *e)) misses.push_back("tail estimate " + fmt(tail));
  return finish_expect(misses);
}

// ---------------------------------------------------------------- heat

int cmd_heat(RunContext& ctx, Block& root, std::ostream& out) {
  Block pb = root.child("problem");
  const Problem p = read_problem(pb);
  Block eb = root.child("experiment");
  const int k = eb.get<int>("k", 1);
  const auto times = read_times(eb, "times", {1.0, 2.0});
  const Radii radii = read_radii(eb, "radii", {0.5, 5.0, 90});
  Block rb = eb.child("residual");
  const auto r_win = rb.get<std::vector<double>>("r", {0.5, 5.0});
  const auto t_win = rb.get<std::vector<double>>("t", {1.0, 2.0});
  const double dr = rb.get<double>("dr", 1.0 / 200);
  const double dt = rb.get<double>("dt", 1e-4);
  rb.finish();
  Block xb = eb.child("exponent");
  const double s_fixed = xb.get<double>("s", 0.7);
  const auto x_times = read_times(xb, "times", flow::dyadic_times(0, 6));
  xb.finish();
  Block fb = eb.child("fd");
  const bool fd_on = fb.get<bool>("enabled", true);
  const double fd_R = fb.get<double>("outer_radius", 30.0);
  const int fd_M = fb.get<int>("points", 12000);
  const double fd_dt = fb.get<double>("dt", 1e-3);
  const std::string scheme = fb.get<std::string>("scheme", "backward_euler");
  const double t0 = fb.get<double>("t0", 1.0);
  const double t1 = fb.get<double>("t1", 2.0);
  fb.finish();
  eb.finish();
  root.finish();
  const Expect expect(ctx.expect, {"residual", "slope", "tolerance", "fd_rel_l2", "free_profile"});
  if (r_win.size() != 2 || t_win.size() != 2) throw ConfigError("experiment.residual windows must be [lo, hi]");
  if (scheme != "backward_euler" && scheme != "crank_nicolson") throw ConfigError("experiment.fd.scheme is unknown");
  require_hardy(p);
  const auto& table = *p.table;
  if (k < 1 || k > table.k_max()) throw ConfigError("experiment.k outside the table");
  const int N = p.dimension;
  const double alpha = table.alpha(k);

  std::vector<std::vector<std::string>> rows;
  const auto r = cell_centers(radii.lo, radii.hi, radii.points);
  for (double t : times) {
    if (!(t > 0.0)) throw ConfigError("experiment.times must be > 0");
    for (double ri : r) rows.push_back({fmt(t), fmt(ri), fmt(flow::heat_self_similar_radial(table, k, ri, t))});
  }
  write_csv(ctx, "heat.csv", {"t", "r", "v"}, rows);

  const auto res = flow::heat_residual(table, k, r_win[0], r_win[1], t_win[0], t_win[1], dr, dt);
  std::vector<double> wv, uv;
  for (double t : x_times) {
    const double ri = s_fixed * std::sqrt(t);
    const double v = flow::heat_self_similar_radial(table, k, ri, t);
    wv.push_back(std::pow(ri, alpha) * v);
    uv.push_back(v);
  }
  const auto wfit = flow::decay_fit(x_times, wv, alpha);
  const auto ufit = flow::decay_fit(x_times, uv, 0.0);
  const double theory = -0.5 * N + alpha;
  json doc = {{"k", k},
              {"alpha_k", alpha},
              {"residual", {{"max_residual", res.max_residual}, {"max_value", res.max_value}, {"relative", res.relative()}}},
              {"exponent", {{"s", s_fixed}, {"weighted_slope", wfit.slope}, {"unweighted_slope", ufit.slope},
                            {"theory_weighted", theory}, {"theory_unweighted", -0.5 * N + 0.5 * alpha}}}};
  double fd_err = 0.0;
  if (fd_on) {
    const auto schema = radialfd::RadialSchema::make(N, table.mu(k), fd_R, fd_M, fd_dt);
    std::vector<double> w(schema.points);
    const double lift = 0.5 * (N - 1);
    for (int i = 0; i < schema.points; ++i) w[i] = std::pow(schema.r(i), lift) * flow::heat_self_similar_radial(table, k, schema.r(i), t0);
    radialfd::HeatStepper(schema, scheme == "backward_euler" ? radialfd::HeatScheme::backward_euler
                                                             : radialfd::HeatScheme::crank_nicolson)
        .advance(w, radialfd::step_count(t1 - t0, fd_dt));
    double num = 0.0, den = 0.0, lowest = 0.0;
    for (int i = 0; i < schema.points; ++i) {
      const double ref = std::pow(schema.r(i), lift) * flow::heat_self_similar_radial(table, k, schema.r(i), t1);
      num += (w[i] - ref) * (w[i] - ref);
      den += ref * ref;
      lowest = std::min(lowest, w[i]);
    }
    fd_err = std::sqrt(num / den);
    doc["fd"] = {{"scheme", scheme}, {"t0", t0}, {"t1", t1}, {"rel_l2", fd_err}, {"min_value", lowest}};
  }
  double free_diff = 0.0;
  if (p.constant_a && *p.constant_a == 0.0 && k == 1) {
    for (double t : times)
      for (double ri : r) {
        free_diff = std::max(free_diff, std::abs(flow::heat_self_similar_radial(table, 1, ri, t) -
                                                 std::pow(t, -0.5 * N) * std::exp(-ri * ri / (4 * t))));
      }
    doc["free_profile_max_diff"] = free_diff;
  }
  write_json(ctx, "residual.json", doc);
  out << "heat: residual " << fmt(res.relative()) << " of max|v|, weighted exponent " << fmt(wfit.slope) << " (theory "
      << fmt(theory) << ")\n";
  std::vector<std::string> misses;
  if (const auto e = expect.value("residual"); e && !(res.relative() <= *e)) misses.push_back("residual " + fmt(res.relative()));
  const double tol = expect.number("tolerance", 0.02);
  if (const auto e = expect.value("slope", theory); e && !(std::abs(wfit.slope - *e) <= tol)) {
    misses.push_back("exponent " + fmt(wfit.slope));
  }
  if (const auto e = expect.value("fd_rel_l2"); e && !(fd_on && fd_err <= *e)) misses.push_back("fd rel L2 " + fmt(fd_err));
  if (const auto e = expect.value("free_profile"); e && !(free_diff <= *e)) misses.push_back("free profile " + fmt(free_diff));
  return finish_expect(misses);
}

// ---------------------------------------------------------------- compare

int cmd_compare(RunContext& ctx, Block& root, std::ostream& out) {
  Block pb = root.child("problem");
  const Problem p = read_problem(pb);
  Block eb = root.child("experiment");
  radialfd::CompareParams cp;
  cp.mode = read_mode(eb, "mode");
  cp.t = eb.get<double>("t", cp.t);
  const auto annulus = eb.get<std::vector<double>>("annulus", {cp.r_lo, cp.r_hi});
  if (eb.has("kernel_a")) cp.kernel_a = eb.require<double>("kernel_a");
  if (eb.has("fd_a")) cp.fd_a = eb.require<double>("fd_a");
  Block fb = eb.child("fd");
  cp.fd_outer_radius = fb.get<double>("outer_radius", cp.fd_outer_radius);
  cp.fd_points = fb.get<int>("points", cp.fd_points);
  cp.fd_dt = fb.get<double>("dt", cp.fd_dt);
  fb.finish();
  cp.kernel_quadrature = read_quadrature(eb, "kernel_quadrature");
  eb.finish();
  root.finish();
  const Expect expect(ctx.expect, {"rel_l2"});
  if (!p.constant_a || p.dimension < 3) throw ConfigError("compare needs N >= 3 with constant a");
  if (annulus.size() != 2) throw ConfigError("experiment.annulus must be [r_lo, r_hi]");
  require_hardy(p);
  cp.dimension = p.dimension;
  cp.a = *p.constant_a;
  cp.r_lo = annulus[0];
  cp.r_hi = annulus[1];
  cp.threads = ctx.threads;
  const auto rep = radialfd::compare_routes(cp);

  json routes = json::array(), pairs = json::array(), timing = json::object();
  bool failed = false;
  for (const auto& r : rep.routes) {
    routes.push_back({{"name", r.name}, {"ok", r.ok}, {"failure", r.failure}});
    timing[r.name] = r.runtime_seconds;
    failed = failed || !r.ok;
  }
  double worst = 0.0;
  for (const auto& e : rep.pairs) {
    pairs.push_back({{"first", e.first}, {"second", e.second}, {"ok", e.ok}, {"rel_l2", e.rel_l2}, {"rel_sup", e.rel_sup}});
    if (e.ok) worst = std::max(worst, e.rel_l2);
  }
  write_json(ctx, "compare.json",
             {{"mode", {{"n", cp.mode.n}, {"j", cp.mode.j}}}, {"t", cp.t}, {"annulus", annulus},
              {"fd", {{"outer_radius", cp.fd_outer_radius}, {"points", cp.fd_points}, {"dt", cp.fd_dt}}},
              {"routes", routes}, {"pairs", pairs}});
  // wall-clock times are the one non-deterministic output, kept out of compare.json
  write_json(ctx, "timing.json", {{"runtime_seconds", timing}});
  out << "compare: worst pairwise rel L2 " << fmt(worst) << (failed ? " (route failure)" : "") << "\n";
  if (failed) {
    for (const auto& r : rep.routes)
      if (!r.ok) throw NumericError("route " + r.name + " failed: " + r.failure);
  }
  std::vector<std::string> misses;
  if (const auto e = expect.value("rel_l2"); e && !(worst <= *e)) misses.push_back("rel L2 " + fmt(worst));
  return finish_expect(misses);
}

}  // namespace schroflow::cli
