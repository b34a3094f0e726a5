#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "schroflow/errors.hpp"
#include "schroflow/flow.hpp"

using namespace schroflow;
using namespace schroflow::flow;

namespace {

std::shared_ptr<const SpectralTable> constant_table(double a, int count = 16) {
  return std::make_shared<const SpectralTable>(
      oscillator::build_table(angular::constant_a_spectrum(3, a, count), 3, count));
}

double rel_l2_on_annulus(const SeparatedState& a, const SeparatedState& b, int j, double lo, double hi) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.grid.size(); ++i) {
    const double r = a.grid.r[i];
    if (r < lo || r > hi) continue;
    const double w = a.grid.w[i] * r * r;
    num += w * std::norm(a.profiles.at(j)[i] - b.profiles.at(j)[i]);
    den += w * std::norm(b.profiles.at(j)[i]);
  }
  return std::sqrt(num / den);
}

RadialGrid annulus_grid(double lo, double hi, int points) {
  RadialGrid g;
  const double h = (hi - lo) / points;
  for (int i = 0; i < points; ++i) {
    g.r.push_back(lo + (i + 0.5) * h);
    g.w.push_back(h);
  }
  return g;
}

}  // namespace

TEST_CASE("closed-form evolution") {
  const auto neg = constant_table(-0.1875);
  const auto m = oscillator::make_mode({0, 1}, *neg);
  SUBCASE("t = 0 reproduces the mode") {
    for (double r : {0.01, 0.5, 1.0, 3.7}) CHECK(evolve_mode_closed_form(m, *neg, r, 0.0) == cplx(oscillator::radial_profile(m, r)));
  }
  SUBCASE("modulus at r = 1") {
    for (double t : {0.3, 1.0, 7.0}) {
      const double s2 = 1 + t * t;
      const double expect = std::pow(s2, -0.625) * std::exp(-0.25 / s2) / m.norm;
      CHECK(std::abs(std::abs(evolve_mode_closed_form(m, *neg, 1.0, t)) - expect) < 1e-15);
    }
  }
  SUBCASE("unitarity") {
    for (int n : {0, 2})
      for (int j : {1, 2}) {
        const auto mm = oscillator::make_mode({n, j}, *neg);
        for (double t : {0.0, 1.0, 10.0, 100.0}) {
          const RadialGrid gt = make_radial_grid({30.0 * std::sqrt(1 + t * t), 256, 8, 12, 0.2});
          CHECK(std::abs(sample_evolved_mode(mm, *neg, gt, t).l2_norm() - 1.0) <= 1e-8);
        }
      }
    CHECK_THROWS_AS(evolve_mode_closed_form(m, *neg, 0.0, 1.0), DomainError);
    CHECK(std::abs(evolve_mode_closed_form_weighted(m, *neg, 0.0, 1.0)) > 0.0);
    const auto bad = oscillator::build_table(std::vector<double>{-0.3}, 3);
    CHECK_THROWS_AS(evolve_mode_closed_form(m, bad, 1.0, 1.0), DomainError);
  }
  SUBCASE("free mode equals the Fresnel Gaussian") {
    const auto free = constant_table(0.0);
    const auto f0 = oscillator::make_mode({0, 1}, *free);
    // e^{-r^2/4} = |V| * V~ for the free ground mode
    for (double t : {0.5, 1.0, 4.0})
      for (double r : {0.2, 1.0, 2.5, 6.0}) {
        const cplx a = evolve_mode_closed_form(f0, *free, r, t) * f0.norm;
        const cplx b = free_gaussian_evolved(3, r, t);
        CHECK(std::abs(a - b) < 1e-14);
      }
  }
}

TEST_CASE("pseudoconformal transform") {
  const auto free = constant_table(0.0);
  const RadialGrid g = make_radial_grid({});
  SeparatedState s;
  s.dimension = 3;
  s.grid = g;
  s.table = free;
  auto& f = s.profiles[1];
  for (double r : g.r) f.push_back(std::exp(-r * r / 4) * cplx(1.0, 0.5 * r));
  SUBCASE("t = 0 is the identity") {
    const auto p = pseudoconformal(s, 0.0, PseudoconformalDirection::forward);
    CHECK(p.grid.r == s.grid.r);
    CHECK(p.profiles.at(1) == f);
  }
  SUBCASE("norm preservation") {
    const auto p = pseudoconformal(s, 3.0, PseudoconformalDirection::forward);
    CHECK(std::abs(p.l2_norm() - s.l2_norm()) <= 1e-10 * s.l2_norm());
    // change-of-variables oracle: int |e^{-r^2/4}(1 + i r/2)|^2 r^2 dr = sqrt(pi/2) + 3 sqrt(pi/2)/4
    const double exact = std::sqrt(std::sqrt(std::numbers::pi / 2) * 1.75);
    CHECK(std::abs(p.l2_norm() - exact) <= 1e-10);
  }
  SUBCASE("forward then backward") {
    const auto p = pseudoconformal(pseudoconformal(s, 1.0, PseudoconformalDirection::backward), 1.0,
                                   PseudoconformalDirection::forward);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(std::abs(p.grid.r[i] - g.r[i]) <= 1e-14 * g.r[i]);
      CHECK(std::abs(p.profiles.at(1)[i] - f[i]) <= 1e-10);
    }
  }
  SUBCASE("phase law of the transformed mode") {
    const auto neg = constant_table(-0.1875);
    for (auto idx : {oscillator::ModeIndex{0, 1}, oscillator::ModeIndex{1, 2}}) {
      const auto m = oscillator::make_mode(idx, *neg);
      for (double t : {0.5, 1.0, 3.0}) {
        auto u = sample_evolved_mode(m, *neg, g, t);
        u.table = neg;
        const auto phi = pseudoconformal(u, t, PseudoconformalDirection::forward);
        const cplx c = oscillator::project(phi, m).coefficient;
        CHECK(std::abs(c - std::polar(1.0, -m.gamma * std::atan(t))) <= 1e-6);
      }
    }
  }
}

TEST_CASE("kernel evaluation") {
  const int L = 60;
  const auto free = constant_table(0.0, (L + 1) * (L + 1));
  KernelSpec spec{free, 1, truncation_for_degree(*free, L), KernelPath::legendre_collapsed};
  CHECK(spec.k_trunc == (L + 1) * (L + 1));

  SUBCASE("rho = 0 keeps only l = 0") {
    const auto v = kernel_eval(spec, {0.3, 0.1}, {2.0, 1.0}, 0.0);
    const cplx expect = i_pow_minus(0.5) * std::sqrt(2 / std::numbers::pi) / (4 * std::numbers::pi);
    CHECK(std::abs(v.value - expect) < 1e-15);
  }
  SUBCASE("free kernel has constant modulus and the plane-wave phase up to i^{-1/2}") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double c = std::pow(2 * std::numbers::pi, 1.5);
    double worst = 0.0, worst_mod = 0.0;
    for (int s = 0; s < 100; ++s) {
      const angular::Direction x{std::acos(2 * u01(gen) - 1), 2 * std::numbers::pi * u01(gen)};
      const angular::Direction y{std::acos(2 * u01(gen) - 1), 2 * std::numbers::pi * u01(gen)};
      const double rho = 10.0 * u01(gen);
      const double cosg = std::sin(x.theta) * std::sin(y.theta) * std::cos(x.phi - y.phi) + std::cos(x.theta) * std::cos(y.theta);
      const auto v = kernel_eval(spec, x, y, rho);
      CHECK_FALSE(v.convergence_warning);
      worst = std::max(worst, std::abs(c * v.value - i_pow_minus(0.5) * std::polar(1.0, -rho * cosg)));
      worst_mod = std::max(worst_mod, std::abs(c * std::abs(v.value) - 1.0));
    }
    CHECK(worst <= 1e-6);
    CHECK(worst_mod <= 1e-6);
  }
  SUBCASE("mode sum agrees with the Legendre collapse") {
    KernelSpec ms = spec;
    ms.path = KernelPath::mode_sum;
    ms.k_trunc = 121;  // l <= 10
    KernelSpec lc = ms;
    lc.path = KernelPath::legendre_collapsed;
    for (double rho : {0.0, 0.7, 3.0}) {
      const angular::Direction x{0.4, 1.1}, y{2.2, -0.3};
      CHECK(std::abs(kernel_eval(ms, x, y, rho).value - kernel_eval(lc, x, y, rho).value) < 1e-13);
    }
    // partial shells are summed mode by mode
    lc.k_start = 3;
    ms.k_start = 3;
    lc.k_trunc = ms.k_trunc = 7;
    CHECK(std::abs(kernel_eval(ms, {0.4, 1.1}, {2.2, -0.3}, 1.5).value - kernel_eval(lc, {0.4, 1.1}, {2.2, -0.3}, 1.5).value) < 1e-14);
  }
  SUBCASE("tail kernel differs from K by the first term") {
    KernelSpec k1 = spec;
    k1.k_trunc = 25;
    KernelSpec k2 = k1;
    k2.k_start = 2;
    const angular::Direction x{0.4, 1.1}, y{2.2, -0.3};
    const double rho = 2.0;
    const cplx first = i_pow_minus(0.5) * specfun::j_scaled(3, 0.0, rho) / (4 * std::numbers::pi);
    CHECK(std::abs(kernel_eval(k1, x, y, rho).value - kernel_eval(k2, x, y, rho).value - first) < 1e-15);
  }
  SUBCASE("errors and warnings") {
    const auto neg = constant_table(-0.1875, 16);
    CHECK_THROWS_AS(kernel_eval({neg, 1, 16, KernelPath::mode_sum}, {0, 0}, {1, 1}, 0.0), DomainError);
    CHECK_NOTHROW(kernel_eval({neg, 2, 16, KernelPath::mode_sum}, {0, 0}, {1, 1}, 0.0));
    CHECK(kernel_eval({free, 1, 4, KernelPath::mode_sum}, {0, 0}, {1, 1}, 20.0).convergence_warning);
    CHECK_THROWS_AS(kernel_eval({free, 3, 2, KernelPath::mode_sum}, {0, 0}, {1, 1}, 1.0), ConfigError);
    angular::AngularProblem p;
    p.dimension = 2;
    p.magnetic = angular::CircleFourier::constant(0.3);
    p.truncation = 8;
    const auto t2 = std::make_shared<const SpectralTable>(oscillator::build_table(angular::solve(p), 2, 9));
    CHECK_THROWS_AS(kernel_eval({t2, 1, 9, KernelPath::legendre_collapsed}, {0, 0}, {1, 0}, 1.0), ConfigError);
    CHECK_NOTHROW(kernel_eval({t2, 1, 9, KernelPath::mode_sum}, {0, 0}, {1, 0}, 1.0));
  }
}

TEST_CASE("representation-formula propagation") {
  const auto neg = constant_table(-0.1875);
  const RadialGrid annulus = annulus_grid(0.1, 8.0, 400);
  KernelSpec spec{neg, 1, neg->k_max(), KernelPath::mode_sum};
  PropagateOptions opt;
  opt.output_grid = annulus;

  SUBCASE("ground mode at t = 1 on the default grid") {
    const auto m = oscillator::make_mode({0, 1}, *neg);
    auto s = oscillator::sample_mode(m, make_radial_grid({}));
    s.table = neg;
    const auto u = propagate_representation(s, 1.0, spec, opt);
    const auto ref = sample_evolved_mode(m, *neg, annulus, 1.0);
    CHECK(rel_l2_on_annulus(u, ref, 1, 0.1, 8.0) <= 1e-3);
  }
  SUBCASE("first three modes at t in {0.5, 1, 2}") {
    const RadialGrid fine = make_radial_grid({15.0, 240, 8, 12, 0.2});
    for (const auto& idx : oscillator::lowest_modes(*neg, 3)) {
      const auto m = oscillator::make_mode(idx, *neg);
      auto s = oscillator::sample_mode(m, fine);
      s.table = neg;
      for (double t : {0.5, 1.0, 2.0}) {
        const auto u = propagate_representation(s, t, spec, opt);
        const auto ref = sample_evolved_mode(m, *neg, annulus, t);
        CHECK(rel_l2_on_annulus(u, ref, idx.j, 0.1, 8.0) <= 1e-3);
      }
    }
  }
  SUBCASE("free Gaussian against the Fresnel closed form") {
    const auto free = constant_table(0.0);
    SeparatedState s;
    s.dimension = 3;
    s.grid = make_radial_grid({15.0, 240, 8, 12, 0.2});
    s.table = free;
    // e^{-r^2/4} = sqrt(4 pi) e^{-r^2/4} Y_00
    for (double r : s.grid.r) s.profiles[1].push_back(std::sqrt(4 * std::numbers::pi) * std::exp(-r * r / 4));
    const auto u = propagate_representation(s, 1.0, {free, 1, 1, KernelPath::mode_sum}, opt);
    double worst = 0.0;
    for (std::size_t i = 0; i < annulus.size(); ++i) {
      const cplx ref = std::sqrt(4 * std::numbers::pi) * free_gaussian_evolved(3, annulus.r[i], 1.0);
      worst = std::max(worst, std::abs(u.profiles.at(1)[i] - ref));
    }
    CHECK(worst <= 1e-6);
  }
  SUBCASE("zero data, thread invariance, errors") {
    const auto m = oscillator::make_mode({0, 2}, *neg);
    auto s = oscillator::sample_mode(m, make_radial_grid({}));
    s.profiles[1].assign(s.grid.size(), cplx{});
    const auto u1 = propagate_representation(s, 1.0, spec, opt);
    for (auto v : u1.profiles.at(1)) CHECK(v == cplx{});
    PropagateOptions opt4 = opt;
    opt4.threads = 4;
    CHECK(propagate_representation(s, 1.0, spec, opt4).profiles.at(2) == u1.profiles.at(2));
    KernelSpec tail = spec;
    tail.k_start = 3;
    CHECK_THROWS_AS(propagate_representation(s, 1.0, tail, opt), ConfigError);
    CHECK_THROWS_AS(propagate_representation(s, 0.0, spec, opt), DomainError);
    // a coarse grid cannot resolve the phase at small t
    auto coarse = oscillator::sample_mode(m, make_radial_grid({30.0, 16, 8, 4, 0.2}));
    CHECK_THROWS_AS(propagate_representation(coarse, 0.25, spec, opt), NumericError);
  }
}

TEST_CASE("heat self-similar solutions") {
  const auto neg = constant_table(-0.1875);
  SUBCASE("free case is the heat kernel profile") {
    for (double t : {0.5, 2.0})
      for (double r : {0.3, 1.0, 4.0}) {
        const cplx v = heat_self_similar(3, 0.0, 1, r, t, 1.0);
        CHECK(std::abs(v.real() - std::pow(t, -1.5) * std::exp(-r * r / (4 * t))) <= 1e-15);
      }
  }
  SUBCASE("weighted value scales as t^{-N/2 + alpha} at fixed r / sqrt(t)") {
    for (int k : {1, 3}) {
      const double alpha = neg->alpha(k);
      std::vector<double> ts, vs;
      for (double t : dyadic_times(0, 6)) {
        const double r = 0.7 * std::sqrt(t);
        ts.push_back(t);
        vs.push_back(std::pow(r, alpha) * heat_self_similar_radial(*neg, k, r, t));
      }
      CHECK(std::abs(decay_fit(ts, vs).slope - (-1.5 + alpha)) <= 1e-12);
    }
    CHECK(std::abs(neg->alpha(3) - (0.5 - std::sqrt(2.0625))) < 1e-15);
  }
  SUBCASE("PDE residual") {
    for (int k : {1, 3}) {
      const auto res = heat_residual(*neg, k, 0.5, 5.0, 1.0, 2.0);
      CHECK(res.relative() <= 1e-4);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(heat_self_similar(3, -0.1875, 1, 1.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(heat_self_similar(3, -0.3, 1, 1.0, 1.0, 1.0), DomainError);
  }
}

TEST_CASE("weighted sup norms and decay fits") {
  const auto neg = constant_table(-0.1875);
  const auto m = oscillator::make_mode({0, 1}, *neg);
  const double ymax = 1 / std::sqrt(4 * std::numbers::pi);

  SUBCASE("weight alpha cancels the singular factor") {
    const RadialGrid g = make_radial_grid({});
    auto u = sample_evolved_mode(m, *neg, g, 2.0);
    u.table = neg;
    const auto wn = weighted_sup_norm(u, 0.25, 0.0, 30.0);
    double expect = 0.0;
    for (double r : g.r) expect = std::max(expect, std::abs(evolve_mode_closed_form_weighted(m, *neg, r, 2.0)));
    CHECK(std::abs(wn.per_mode.at(1) - expect * ymax) <= 1e-14);
    CHECK(wn.combined == wn.per_mode.at(1));
    CHECK_THROWS_AS(weighted_sup_norm(u, 0.0, 40.0, 50.0), ConfigError);
  }
  SUBCASE("unweighted divergence exponent at the origin is -alpha_1") {
    for (double t : {1.0, 5.0, 25.0}) {
      std::vector<double> lo{1e-4, 1e-3, 1e-2, 1e-1}, sup;
      const RadialGrid lg = make_log_grid(1e-4, 10.0, 501);
      for (double r_lo : lo) {
        sup.push_back(weighted_sup_norm([&](double r) { return std::abs(evolve_mode_closed_form(m, *neg, r, t)); }, lg.r,
                                        r_lo * (1 - 1e-12), 10.0, ymax));
      }
      CHECK(std::abs(decay_fit(lo, sup).slope + 0.25) <= 0.01);
    }
  }
  SUBCASE("synthetic power law") {
    const auto ts = dyadic_times();
    std::vector<double> ns;
    for (double t : ts) ns.push_back(3.0 * std::pow(t, -1.5));
    const auto rep = decay_fit(ts, ns, 0.0);
    CHECK(std::abs(rep.slope + 1.5) < 1e-13);
    CHECK(std::abs(rep.r_squared - 1.0) < 1e-13);
    CHECK(std::abs(rep.intercept - std::log(3.0)) < 1e-12);
    ns[3] = 0.0;
    CHECK_THROWS_AS(decay_fit(ts, ns), DomainError);
    CHECK_THROWS_AS(decay_fit(std::vector<double>{1, 2, 3}, std::vector<double>{1, 1, 1}), ConfigError);
  }
  SUBCASE("weighted closed-form decay: bracket clock is exact, log t fit carries the t = 1 bias") {
    std::vector<double> ns;
    const auto ts = dyadic_times();
    for (double t : ts) ns.push_back(std::abs(evolve_mode_closed_form_weighted(m, *neg, 0.0, t)) * ymax);
    const auto rep = decay_fit(ts, ns, 0.25);
    CHECK(std::abs(rep.bracket_slope + 1.25) <= 1e-12);
    // (1+t^2)^{-5/8} over t = 1..1024 fitted against log t
    CHECK(std::abs(rep.slope + 1.2125) <= 1e-3);
  }
}
