#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "geostoch/calculus.hpp"
#include "geostoch/manifold.hpp"
#include "geostoch/measure.hpp"
#include "geostoch/paths.hpp"
#include "geostoch/rng.hpp"

using namespace geostoch;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<std::string> manifold_keys() {
  return {"euclidean:1", "euclidean:2", "euclidean:3", "torus:1", "torus:2",
          "sphere2:1",   "sphere2:2",   "hyperbolic2"};
}
}  // namespace

TEST_CASE("rng: deterministic, order-independent, roughly standard normal") {
  CHECK(normal_draw(7, 1, 3, 0) == normal_draw(7, 1, 3, 0));
  CHECK(normal_draw(7, 1, 3, 0) != normal_draw(8, 1, 3, 0));
  CHECK(normal_draw(7, 1, 3, 0) != normal_draw(7, 2, 3, 0));
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = normal_draw(42, 0, 0, i);
    s += z;
    s2 += z * z;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
}

TEST_CASE("manifold: exp/log round-trip and distance consistency") {
  for (const auto& key : manifold_keys()) {
    CAPTURE(key);
    const auto m = make_manifold(key);
    for (int trial = 0; trial < 200; ++trial) {
      const ManifoldPoint x = m->sample_point(11, trial);
      const ManifoldPoint y = m->sample_point(12, trial);
      if (!m->has_unique_geodesic(x, y)) continue;
      const TangentVector v = m->log_map(x, y);
      CHECK(m->dist(y, m->exp_map(x, v)) < 1e-9);
      CHECK(std::abs(m->tangent_norm(v) - m->dist(x, y)) < 1e-9);
      // exp then log recovers v when inside the injectivity radius
      if (m->tangent_norm(v) < m->injectivity_radius(x)) {
        const TangentVector w = m->log_map(x, m->exp_map(x, v));
        double diff = 0.0;
        for (std::size_t j = 0; j < v.components.size(); ++j) {
          diff = std::max(diff, std::abs(v.components[j] - w.components[j]));
        }
        CHECK(diff < 1e-9);
      }
    }
  }
}

TEST_CASE("manifold: geodesic speed is constant") {
  for (const auto& key : manifold_keys()) {
    CAPTURE(key);
    const auto m = make_manifold(key);
    for (int trial = 0; trial < 50; ++trial) {
      const ManifoldPoint x = m->sample_point(21, trial);
      const ManifoldPoint y = m->sample_point(22, trial);
      if (!m->has_unique_geodesic(x, y)) continue;
      const double d = m->dist(x, y);
      const TangentVector v = m->log_map(x, y);
      for (double tau : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const auto [p, vel] = m->geodesic_eval(x, v, tau);
        CHECK(std::abs(m->tangent_norm(vel) - d) < 1e-9);
      }
    }
  }
}

TEST_CASE("manifold: frames are orthonormal") {
  for (const auto& key : manifold_keys()) {
    CAPTURE(key);
    const auto m = make_manifold(key);
    for (int trial = 0; trial < 20; ++trial) {
      const ManifoldPoint x = m->sample_point(31, trial);
      const auto frame = m->frame(x);
      REQUIRE(frame.size() == m->dim());
      for (std::size_t a = 0; a < frame.size(); ++a) {
        for (std::size_t b = 0; b < frame.size(); ++b) {
          const double expected = a == b ? 1.0 : 0.0;
          CHECK(std::abs(m->inner(frame[a], frame[b]) - expected) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("torus: wrap-around distance and cut locus at half period") {
  const auto m = make_manifold("torus:1");
  const ManifoldPoint a{Vec{0.1}};
  const ManifoldPoint b{Vec{2.0 * kPi - 0.1}};
  CHECK(m->dist(a, b) == doctest::Approx(0.2).epsilon(1e-12));
  const ManifoldPoint anti{Vec{0.1 + kPi}};
  CHECK_FALSE(m->has_unique_geodesic(a, anti));
  CHECK_THROWS_AS((void)m->log_map(a, anti), CutLocusError);
}

TEST_CASE("sphere2: great-circle distance and antipodal cut locus") {
  const auto m = make_manifold("sphere2:2");
  const ManifoldPoint np{Vec{0.0, 0.0, 1.0}};
  const ManifoldPoint eq{Vec{1.0, 0.0, 0.0}};
  CHECK(m->dist(np, eq) == doctest::Approx(2.0 * kPi / 2.0).epsilon(1e-12));
  CHECK(m->injectivity_radius(np) == doctest::Approx(2.0 * kPi));
  const ManifoldPoint sp{Vec{0.0, 0.0, -1.0}};
  CHECK_FALSE(m->has_unique_geodesic(np, sp));
}

TEST_CASE("hyperbolic2: closed-form distance") {
  const auto m = make_manifold("hyperbolic2");
  // vertical geodesic: dist((0,1),(0,e)) = 1
  CHECK(m->dist(ManifoldPoint{Vec{0.0, 1.0}}, ManifoldPoint{Vec{0.0, std::exp(1.0)}}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // acosh(1 + ((x1-x2)^2 + (y1-y2)^2) / (2 y1 y2))
  const ManifoldPoint p{Vec{-0.7, 0.8}};
  const ManifoldPoint q{Vec{1.1, 2.3}};
  const double expect =
      std::acosh(1.0 + ((1.8 * 1.8) + (1.5 * 1.5)) / (2.0 * 0.8 * 2.3));
  CHECK(m->dist(p, q) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("one-forms: evaluator is linear in the velocity") {
  for (const auto& key : manifold_keys()) {
    const auto m = make_manifold(key);
    const OneForm alpha = make_form(*m, key.rfind("sphere2", 0) == 0 ? "z_dphi" : "x_dx");
    for (int trial = 0; trial < 40; ++trial) {
      const ManifoldPoint x = m->sample_point(41, trial);
      const auto frame = m->frame(x);
      const TangentVector v = frame[0];
      TangentVector w = frame[m->dim() - 1];
      TangentVector combo{x, 2.0 * v.components + (-3.0) * w.components};
      CHECK(std::abs(alpha.eval(*m, x, combo) -
                     (2.0 * alpha.eval(*m, x, v) - 3.0 * alpha.eval(*m, x, w))) < 1e-12);
    }
  }
}

TEST_CASE("codifferential: finite differences converge to analytic at O(h^2)") {
  struct Case {
    std::string manifold, form;
  };
  for (const auto& c : {Case{"euclidean:2", "x_dx"}, Case{"euclidean:2", "bump_dy"},
                        Case{"torus:2", "dx1"}, Case{"sphere2:1", "z_dphi"},
                        Case{"hyperbolic2", "x_dx"}}) {
    CAPTURE(c.manifold);
    CAPTURE(c.form);
    const auto m = make_manifold(c.manifold);
    const OneForm alpha = make_form(*m, c.form);
    for (int trial = 0; trial < 10; ++trial) {
      const ManifoldPoint x = m->sample_point(51, trial);
      const double exact = alpha.codifferential_analytic(*m, x);
      double prev_err = -1.0;
      for (double h : {1e-2, 5e-3, 2.5e-3}) {
        const double err = std::abs(codifferential_fd(*m, alpha, x, h) - exact);
        if (prev_err > 1e-11) CHECK(err < 0.30 * prev_err);  // ~4x drop per halving
        prev_err = err;
      }
      CHECK(std::abs(codifferential_fd(*m, alpha, x, 1e-4) - exact) < 1e-6);
    }
  }
}

TEST_CASE("laplacian: finite differences match analytic values") {
  struct Case {
    std::string manifold, field;
  };
  for (const auto& c : {Case{"euclidean:2", "quadratic"}, Case{"euclidean:1", "x2"},
                        Case{"torus:2", "sincos"}, Case{"sphere2:1", "cos_polar"},
                        Case{"sphere2:2", "sphere_x"}, Case{"hyperbolic2", "log_y"}}) {
    CAPTURE(c.manifold);
    CAPTURE(c.field);
    const auto m = make_manifold(c.manifold);
    const ScalarField f = make_field(*m, c.field);
    for (int trial = 0; trial < 10; ++trial) {
      const ManifoldPoint x = m->sample_point(61, trial);
      CHECK(std::abs(laplace_beltrami_fd(*m, f, x, 1e-4) -
                     f.laplacian_analytic(*m, x)) < 1e-5);
    }
  }
}

TEST_CASE("measures: parsing, mass, and first moments") {
  CHECK(first_moment(dirac(0.0)) == 0.0);
  CHECK(first_moment(dirac(0.5)) == 0.5);
  CHECK(first_moment(lebesgue()) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(skew(dirac(0.0)) == -1.0);
  CHECK(skew(dirac(1.0)) == 1.0);
  CHECK(skew(lebesgue()) == doctest::Approx(0.0).epsilon(1e-14));
  const IntervalMeasure mix = make_measure("mix:0.5@0+0.5@1");
  CHECK(first_moment(mix) == 0.5);
  CHECK_THROWS(make_measure("mix:0.3@0+0.3@1"));  // mass != 1
  CHECK_THROWS(make_measure("dirac:1.5"));        // outside [0,1]
  CHECK_THROWS(make_measure("nonsense"));
}

TEST_CASE("gauss-legendre on [0,1] integrates polynomials exactly") {
  for (int order : {4, 8, 16, 32}) {
    const auto& nodes = gauss_legendre01(order);
    REQUIRE(static_cast<int>(nodes.size()) == order);
    // exact for degree <= 2*order-1; check x^(2*order-1)
    const int p = 2 * order - 1;
    double s = 0.0, mass = 0.0;
    for (const auto& [x, w] : nodes) {
      s += w * std::pow(x, p);
      mass += w;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s == doctest::Approx(1.0 / (p + 1)).epsilon(1e-12));
  }
}

TEST_CASE("i_p: affine forms see only the first moment; cut locus gives 0") {
  const auto m = make_manifold("euclidean:2");
  const OneForm alpha = make_form(*m, "x_dy");
  const ManifoldPoint x{Vec{0.3, -0.2}};
  const ManifoldPoint y{Vec{1.1, 0.7}};
  const double v_mid = i_p(make_measure("dirac:0.5"), alpha, *m, x, y);
  const double v_mix = i_p(make_measure("mix:0.5@0+0.5@1"), alpha, *m, x, y);
  const double v_leb = i_p(lebesgue(), alpha, *m, x, y);
  CHECK(std::abs(v_mid - v_mix) < 1e-14);
  CHECK(std::abs(v_mid - v_leb) < 1e-13);

  const auto torus = make_manifold("torus:1");
  const OneForm dtheta = make_form(*torus, "a_dtheta:1");
  const ManifoldPoint a{Vec{0.0}};
  const ManifoldPoint anti{Vec{kPi}};
  CHECK(i_p(lebesgue(), dtheta, *torus, a, anti) == 0.0);
}

TEST_CASE("paths: increment variance is 2h per coordinate") {
  const auto m = make_manifold("euclidean:1");
  const double t = 1.0;
  const int k = 6;
  const double h = t / 64.0;
  double s2 = 0.0;
  std::size_t count = 0;
  for (std::uint64_t i = 0; i < 400; ++i) {
    const DyadicPath p = sample_bm(*m, ManifoldPoint{Vec{0.0}}, t, k, 99, i);
    REQUIRE(p.points.size() == 65);
    for (std::size_t j = 0; j + 1 < p.points.size(); ++j) {
      const double d = p.points[j + 1].coords[0] - p.points[j].coords[0];
      s2 += d * d;
      ++count;
    }
  }
  CHECK(s2 / count == doctest::Approx(2.0 * h).epsilon(0.03));
}

TEST_CASE("paths: ensemble regeneration is bit-exact") {
  const auto m = make_manifold("torus:2");
  const PathEnsemble ens = make_ensemble(*m, ManifoldPoint{Vec{0.0, 0.0}}, 1.0, 5, 7, 10);
  const DyadicPath a = ens.path(3);
  const DyadicPath b = ens.path(3);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t j = 0; j < a.points.size(); ++j) {
    CHECK(a.points[j].coords[0] == b.points[j].coords[0]);
    CHECK(a.points[j].coords[1] == b.points[j].coords[1]);
  }
}

TEST_CASE("paths: subsample keeps every 2^(k-k') -th point") {
  const auto m = make_manifold("euclidean:2");
  const DyadicPath p = sample_bm(*m, ManifoldPoint{Vec{0.0, 0.0}}, 1.0, 6, 5, 0);
  const DyadicPath q = subsample(p, 4);
  REQUIRE(q.points.size() == 17);
  for (std::size_t j = 0; j < q.points.size(); ++j) {
    CHECK(q.points[j].coords[0] == p.points[4 * j].coords[0]);
  }
  CHECK_THROWS(subsample(p, 7));
}

TEST_CASE("paths: bridge refinement is consistent and law-preserving") {
  const auto m = make_manifold("euclidean:1");
  const DyadicPath p = sample_bm(*m, ManifoldPoint{Vec{0.0}}, 1.0, 4, 13, 2);
  const DyadicPath fine = bridge_refine(p, 7, 77);
  REQUIRE(fine.points.size() == 129);
  const DyadicPath back = subsample(fine, 4);
  for (std::size_t j = 0; j < p.points.size(); ++j) {
    CHECK(back.points[j].coords[0] == p.points[j].coords[0]);
  }
  // refined increments still have variance 2h at the fine level
  double s2 = 0.0;
  std::size_t count = 0;
  for (std::uint64_t i = 0; i < 300; ++i) {
    const DyadicPath base = sample_bm(*m, ManifoldPoint{Vec{0.0}}, 1.0, 3, 14, i);
    const DyadicPath f = bridge_refine(base, 7, 78);
    for (std::size_t j = 0; j + 1 < f.points.size(); ++j) {
      const double d = f.points[j + 1].coords[0] - f.points[j].coords[0];
      s2 += d * d;
      ++count;
    }
  }
  CHECK(s2 / count == doctest::Approx(2.0 / 128.0).epsilon(0.03));
}

TEST_CASE("registry errors name the offending key") {
  const auto m = make_manifold("euclidean:2");
  CHECK_THROWS(make_manifold("klein_bottle"));
  CHECK_THROWS(make_form(*m, "no_such_form"));
  CHECK_THROWS(make_field(*m, "no_such_field"));
  CHECK_THROWS(make_curve(*m, "no_such_curve"));
}
