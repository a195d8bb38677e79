#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "geostoch/integrals.hpp"

using namespace geostoch;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("line integral: x dy around the unit circle is pi") {
  const auto m = make_manifold("euclidean:2");
  const OneForm alpha = make_form(*m, "x_dy");
  const Curve c = make_curve(*m, "circle_xy");
  // oracle: enclosed area of the unit disc, by Green's theorem
  CHECK(line_integral(*m, alpha, c) == doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("line integral: a dtheta along a great circle and around the torus") {
  const auto torus = make_manifold("torus:1");
  const OneForm dtheta = make_form(*torus, "a_dtheta:0.3");
  const Curve loop = make_curve(*torus, "segment");
  // segment runs 0 -> t_total at unit angular speed
  CHECK(line_integral(*torus, dtheta, loop) ==
        doctest::Approx(0.3 * loop.t_total).epsilon(1e-12));

  const auto sph = make_manifold("sphere2:1");
  const OneForm zdphi = make_form(*sph, "z_dphi");
  const Curve equator = make_curve(*sph, "great_circle:0");
  // z = 0 on the equator, so the form vanishes along it
  CHECK(std::abs(line_integral(*sph, zdphi, equator)) < 1e-12);
}

TEST_CASE("classical rate: dyadic sums on the circle curve converge at order -2") {
  const auto m = make_manifold("euclidean:2");
  const OneForm alpha = make_form(*m, "x_dy");
  const Curve c = make_curve(*m, "circle_xy");
  const ConvergenceReport rep =
      classical_rate(*m, lebesgue(), alpha, c, {4, 5, 6, 7, 8, 9, 10});
  REQUIRE(rep.slope.has_value());
  // inscribed-polygon area error decays like 4^-k
  CHECK(*rep.slope == doctest::Approx(-2.0).epsilon(0.05));
  CHECK(rep.median_abs.back() < rep.median_abs.front());
}

TEST_CASE("approx_A: Ito sum of x dx has the closed telescoping form") {
  const auto m = make_manifold("euclidean:1");
  const OneForm alpha = make_form(*m, "x_dx");
  const DyadicPath p = sample_bm(*m, ManifoldPoint{Vec{0.4}}, 1.0, 8, 3, 0);
  // sum x_j (x_{j+1}-x_j) = (x_N^2 - x_0^2)/2 - sum (dx)^2/2
  double sq = 0.0;
  for (std::size_t j = 0; j + 1 < p.points.size(); ++j) {
    const double d = p.points[j + 1].coords[0] - p.points[j].coords[0];
    sq += d * d;
  }
  const double x0 = p.points.front().coords[0];
  const double xn = p.points.back().coords[0];
  const double expect = 0.5 * (xn * xn - x0 * x0) - 0.5 * sq;
  CHECK(approx_A(dirac(0.0), alpha, p) == doctest::Approx(expect).epsilon(1e-12));
  // and the Lebesgue sum is exactly the midpoint/telescoping value
  CHECK(approx_A(lebesgue(), alpha, p) ==
        doctest::Approx(0.5 * (xn * xn - x0 * x0)).epsilon(1e-12));
}

TEST_CASE("approx_S: skew correction closes the Ito-Stratonovich gap for x dx") {
  const auto m = make_manifold("euclidean:1");
  const OneForm alpha = make_form(*m, "x_dx");
  const DyadicPath p = sample_bm(*m, ManifoldPoint{Vec{0.0}}, 1.0, 10, 4, 1);
  // S_{P} for P = delta_0: A + h*(-1)*sum d*alpha = A + h*2^k = A + t,
  // which matches A_Leb up to the quadratic variation fluctuation O(2^-k/2)
  const double s_ito = approx_S(dirac(0.0), alpha, p);
  const double a_leb = approx_A(lebesgue(), alpha, p);
  CHECK(std::abs(s_ito - a_leb) < 0.15);
  CHECK(std::abs(approx_A(dirac(0.0), alpha, p) + 1.0 - a_leb) < 0.15);
  // skew(Leb) = 0: S and A coincide exactly
  CHECK(approx_S(lebesgue(), alpha, p) == approx_A(lebesgue(), alpha, p));
}

TEST_CASE("convert: P -> Q conversion matches the direct Q computation in mean") {
  const auto m = make_manifold("euclidean:1");
  const OneForm alpha = make_form(*m, "x_dx");
  const IntervalMeasure p = dirac(0.0);   // M1 = 0
  const IntervalMeasure q = lebesgue();   // M1 = 1/2
  double mean_err = 0.0;
  const std::size_t n = 300;
  for (std::uint64_t i = 0; i < n; ++i) {
    const DyadicPath path = sample_bm(*m, ManifoldPoint{Vec{0.0}}, 1.0, 10, 21, i);
    const double direct_q = approx_A(q, alpha, path);
    const double via_p = convert(approx_A(p, alpha, path), p, q, alpha, path);
    mean_err += via_p - direct_q;
  }
  mean_err /= static_cast<double>(n);
  CHECK(std::abs(mean_err) < 0.02);
}

TEST_CASE("estimate_in_measure: tail fractions shrink as k approaches the reference") {
  const auto m = make_manifold("euclidean:2");
  const OneForm alpha = make_form(*m, "x_dy");
  const PathEnsemble ens =
      make_ensemble(*m, ManifoldPoint{Vec{0.0, 0.0}}, 1.0, 10, 31, 400);
  const ConvergenceReport rep =
      estimate_in_measure(lebesgue(), alpha, ens, {4, 6, 8, 10}, 0.05);
  REQUIRE(rep.levels.size() == 4);
  CHECK(rep.tail_frac.back() == 0.0);  // k = reference level: delta = 0
  CHECK(rep.median_abs[0] > rep.median_abs[2]);
  CHECK_THROWS(estimate_in_measure(lebesgue(), alpha, ens, {11}, 0.05));
}

TEST_CASE("strat exactness: A_Leb(df) telescopes on flat and curved manifolds") {
  for (const char* key : {"euclidean:2", "torus:2"}) {
    CAPTURE(key);
    const auto m = make_manifold(key);
    const ScalarField f = make_field(*m, std::string(key) == "torus:2" ? "sincos" : "gauss");
    const PathEnsemble ens =
        make_ensemble(*m, ManifoldPoint{Vec{0.0, 0.0}}, 1.0, 8, 41, 100);
    const ResidualReport rep = strat_exactness(f, ens, 8);
    CHECK(rep.n_used == 100);
    CHECK(rep.max_abs < 1e-8);
  }
  const auto sph = make_manifold("sphere2:1");
  const ScalarField f = make_field(*sph, "sphere_x");
  const PathEnsemble ens =
      make_ensemble(*sph, ManifoldPoint{Vec{0.0, 0.0, 1.0}}, 1.0, 8, 42, 100);
  const ResidualReport rep = strat_exactness(f, ens, 8, 32);
  CHECK(rep.n_used + rep.n_excluded == 100);
  CHECK(rep.max_abs < 1e-6);
}

TEST_CASE("ito lemma: residual is statistically zero on R^1 and the torus") {
  const auto m = make_manifold("euclidean:1");
  const ScalarField f = make_field(*m, "x2");
  const PathEnsemble ens = make_ensemble(*m, ManifoldPoint{Vec{0.2}}, 1.0, 10, 51, 2000);
  const ResidualReport rep = ito_lemma_check(f, ens, 10);
  CHECK(rep.n_used == 2000);
  CHECK(std::abs(rep.mean) <= 3.0 * rep.stderr_mean);

  const auto torus = make_manifold("torus:2");
  const ScalarField g = make_field(*torus, "sincos");
  const PathEnsemble ens2 =
      make_ensemble(*torus, ManifoldPoint{Vec{0.3, 0.7}}, 0.5, 10, 52, 2000);
  const ResidualReport rep2 = ito_lemma_check(g, ens2, 10);
  CHECK(std::abs(rep2.mean) <= 3.0 * rep2.stderr_mean);
}

TEST_CASE("levy distance estimate: closed forms and contract") {
  CHECK(levy_distance_estimate({1.0, 2.0}, {1.0, 2.0}) == 0.0);
  CHECK(levy_distance_estimate({0.0, 0.0}, {0.5, 3.0}) == doctest::Approx(0.75));
  CHECK_THROWS(levy_distance_estimate({1.0}, {1.0, 2.0}));
}

TEST_CASE("t-continuity: Levy distance shrinks as the horizons merge") {
  const auto m = make_manifold("euclidean:1");
  const OneForm alpha = make_form(*m, "x_dx");
  const PathEnsemble ens = make_ensemble(*m, ManifoldPoint{Vec{0.0}}, 1.0, 8, 61, 500);
  const double far = t_continuity_diagnostic(lebesgue(), alpha, ens, 0.5, 0.75);
  const double near = t_continuity_diagnostic(lebesgue(), alpha, ens, 0.5, 0.53125);
  const double zero = t_continuity_diagnostic(lebesgue(), alpha, ens, 0.5, 0.5);
  CHECK(zero == 0.0);
  CHECK(near < far);
  CHECK_THROWS(t_continuity_diagnostic(lebesgue(), alpha, ens, 0.5, 0.333));
}

TEST_CASE("fit_log2_slope: recovers a planted slope and handles floors") {
  std::vector<int> ks{2, 3, 4, 5};
  std::vector<double> errs;
  for (int k : ks) errs.push_back(3.0 * std::pow(2.0, -1.5 * k));
  const auto s = fit_log2_slope(ks, errs);
  REQUIRE(s.has_value());
  CHECK(*s == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK_FALSE(fit_log2_slope(ks, {0.0, 0.0, 0.0, 1e-15}).has_value());
}
