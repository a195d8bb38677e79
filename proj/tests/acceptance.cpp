// Acceptance gate: one pass/fail line per criterion, exit code = number of
// failures. Each criterion enforces both its quantitative tolerance and its
// runtime budget.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include "geostoch/fki.hpp"
#include "geostoch/integrals.hpp"
#include "geostoch/parallel.hpp"
#include "geostoch/semigroup.hpp"

using namespace geostoch;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

class Criterion {
 public:
  Criterion(int number, std::string label)
      : number_(number), label_(std::move(label)),
        start_(std::chrono::steady_clock::now()) {}

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

  void report(bool pass, double budget_s, const std::string& detail) const {
    const double sec = elapsed();
    const bool in_budget = sec < budget_s;
    const bool ok = pass && in_budget;
    if (!ok) ++g_failures;
    std::printf("[%s] criterion %d (%s): %s [%.1fs / budget %.0fs]%s\n",
                ok ? "PASS" : "FAIL", number_, label_.c_str(), detail.c_str(), sec,
                budget_s, in_budget ? "" : " (over budget)");
    std::fflush(stdout);
  }

 private:
  int number_;
  std::string label_;
  std::chrono::steady_clock::time_point start_;
};

void criterion_1_classical_rate() {
  Criterion c(1, "classical rate");
  const auto m = make_manifold("euclidean:2");
  const OneForm alpha = make_form(*m, "x_dy");
  const Curve curve = make_curve(*m, "circle_xy");
  std::vector<int> ks;
  for (int k = 4; k <= 12; ++k) ks.push_back(k);
  const ConvergenceReport rep = classical_rate(*m, lebesgue(), alpha, curve, ks);
  const double slope = rep.slope.value_or(0.0);
  const double err12 = rep.median_abs.back();
  char buf[160];
  std::snprintf(buf, sizeof buf, "slope %.3f <= -0.75, |A_12 - pi| %.2e <= 1e-3", slope,
                err12);
  c.report(rep.slope.has_value() && slope <= -0.75 && err12 <= 1e-3, 5.0, buf);
}

void criterion_2_strat_exactness() {
  Criterion c(2, "Stratonovich exactness");
  struct Case {
    const char* manifold;
    const char* field;
    Vec x0;
    int quad;
    double tol;
  };
  const std::vector<Case> cases = {
      {"euclidean:2", "gauss", Vec{0.0, 0.0}, 16, 1e-7},
      {"torus:2", "sincos", Vec{0.0, 0.0}, 16, 1e-7},
      {"sphere2:1", "sphere_x", Vec{0.0, 0.0, 1.0}, 32, 1e-6},
  };
  bool pass = true;
  std::string detail;
  for (const auto& cs : cases) {
    const auto m = make_manifold(cs.manifold);
    const ScalarField f = make_field(*m, cs.field);
    const PathEnsemble ens = make_ensemble(*m, ManifoldPoint{cs.x0}, 1.0, 10, 101, 1000);
    const ResidualReport rep = strat_exactness(f, ens, 10, cs.quad);
    char buf[120];
    std::snprintf(buf, sizeof buf, "%s max|res| %.2e (tol %.0e); ", cs.manifold,
                  rep.max_abs, cs.tol);
    detail += buf;
    if (rep.max_abs > cs.tol) pass = false;
  }
  c.report(pass, 30.0, detail);
}

void criterion_3_ito_strat_gap() {
  Criterion c(3, "Ito-Stratonovich gap");
  const auto m = make_manifold("euclidean:1");
  const std::size_t n = 10000;
  const int k = 12;
  const IntervalMeasure ito = dirac(0.0);
  // both forms are affine along geodesics, so GL-8 already integrates the
  // Lebesgue tau-average exactly; this only trims runtime
  const IntervalMeasure leb = lebesgue(8);

  // clause 1: alpha = x dx, d*alpha = -1, gap must concentrate at -t
  // clause 2: d*alpha = 0 (alpha = dx_1): the gap vanishes
  const OneForm xdx = make_form(*m, "x_dx");
  const OneForm dx1 = make_form(*m, "dx1");
  const PathEnsemble ens = make_ensemble(*m, ManifoldPoint{Vec{0.0}}, 1.0, k, 103, n);
  std::vector<double> gap(n), gap2(n);
  parallel_for(n, [&](std::size_t i) {
    const DyadicPath path = ens.path(i);
    gap[i] = approx_A(ito, xdx, path) - approx_A(leb, xdx, path) + 1.0;
    gap2[i] = approx_A(ito, dx1, path) - approx_A(leb, dx1, path);
  });
  std::size_t exceed = 0;
  for (double g : gap) {
    if (std::abs(g) > 0.05) ++exceed;
  }
  const double tail1 = static_cast<double>(exceed) / static_cast<double>(n);

  exceed = 0;
  for (double g : gap2) {
    if (std::abs(g) > 0.02) ++exceed;
  }
  const double tail2 = static_cast<double>(exceed) / static_cast<double>(n);

  char buf[200];
  std::snprintf(buf, sizeof buf,
                "x dx tail %.4f (need < 0.02; sampling SD of the k=12 gap makes "
                "~0.024 the true tail); dx1 tail %.4f < 0.02",
                tail1, tail2);
  c.report(tail1 < 0.02 && tail2 < 0.02, 60.0, buf);
}

void criterion_4_moment_classification() {
  Criterion c(4, "moment classification");
  const auto m = make_manifold("euclidean:2");
  const OneForm alpha = make_form(*m, "x_dy");
  const std::vector<IntervalMeasure> ms = {make_measure("dirac:0.5"),
                                           make_measure("mix:0.5@0+0.5@1"), lebesgue()};
  const std::size_t n = 10000;
  const PathEnsemble ens = make_ensemble(*m, ManifoldPoint{Vec{0.0, 0.0}}, 1.0, 12, 104, n);
  std::vector<double> vals(n * 3);
  parallel_for(n, [&](std::size_t i) {
    const DyadicPath path = ens.path(i);
    for (std::size_t j = 0; j < 3; ++j) vals[i * 3 + j] = approx_A(ms[j], alpha, path);
  });
  double worst = 0.0;
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = a + 1; b < 3; ++b) {
      std::size_t exceed = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(vals[i * 3 + a] - vals[i * 3 + b]) > 0.05) ++exceed;
      }
      worst = std::max(worst, static_cast<double>(exceed) / static_cast<double>(n));
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "worst pairwise tail %.4f < 0.01", worst);
  c.report(worst < 0.01, 60.0, buf);
}

void criterion_5_ito_lemma() {
  Criterion c(5, "Ito's lemma");
  const auto m = make_manifold("euclidean:1");
  const ScalarField f = make_field(*m, "x2");
  const std::size_t n = 10000;
  const double t = 1.0;
  const PathEnsemble ens = make_ensemble(*m, ManifoldPoint{Vec{0.0}}, t, 12, 105, n);
  const ResidualReport rep = ito_lemma_check(f, ens, 12);

  std::vector<double> df(n);
  parallel_for(n, [&](std::size_t i) {
    const DyadicPath path = ens.path(i);
    df[i] = f.eval(*m, path.points.back()) - f.eval(*m, path.points.front());
  });
  double mean_df = 0.0, var_df = 0.0;
  for (double d : df) mean_df += d;
  mean_df /= static_cast<double>(n);
  for (double d : df) var_df += (d - mean_df) * (d - mean_df);
  const double se_df = std::sqrt(var_df / (static_cast<double>(n - 1) * n));

  char buf[200];
  std::snprintf(buf, sizeof buf,
                "residual mean %.2e (3SE %.2e); E[B_t^2] - 2t = %.2e (3SE %.2e)", rep.mean,
                3.0 * rep.stderr_mean, mean_df - 2.0 * t, 3.0 * se_df);
  c.report(std::abs(rep.mean) <= 3.0 * rep.stderr_mean &&
               std::abs(mean_df - 2.0 * t) <= 3.0 * se_df,
           30.0, buf);
}

void criterion_6_chernoff() {
  Criterion c(6, "Chernoff product formula");
  const Grid1D grid = make_circle_grid(128);
  std::vector<int> ks;
  for (int k = 3; k <= 8; ++k) ks.push_back(k);
  const ChernoffReport main_rep =
      chernoff_power_test(grid, make_grid_form("const:0.5", grid), dirac(0.0), 0.5, ks);

  std::vector<double> terminals;
  for (const char* a : {"zero", "const:0.5"}) {
    for (const char* p : {"dirac:0", "lebesgue"}) {
      terminals.push_back(
          chernoff_power_test(grid, make_grid_form(a, grid), make_measure(p), 0.5, {8})
              .terminal_error);
    }
  }
  double big = 0.0;
  for (double e : terminals) big = std::max(big, e);
  bool mutual = true;
  for (double a : terminals) {
    for (double b : terminals) {
      if (std::abs(a - b) > 2.0 * big) mutual = false;
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "errors %.1e..%.1e %s decreasing over k=3..8; terminals within 2x %.1e",
                main_rep.sup_error.front(), main_rep.sup_error.back(),
                main_rep.monotone ? "strictly" : "NOT strictly", big);
  c.report(main_rep.monotone && mutual, 20.0, buf);
}

void criterion_7_diamagnetic() {
  Criterion c(7, "diamagnetic inequality");
  double worst = -1.0;
  for (const auto& dc : diamagnetic_cases()) worst = std::max(worst, run_diamagnetic_case(dc));
  char buf[120];
  std::snprintf(buf, sizeof buf, "max over %zu cases of max(|h_a| - h) = %.2e <= 1e-10",
                diamagnetic_cases().size(), worst);
  c.report(worst <= 1e-10, 5.0, buf);
}

void criterion_8_fki() {
  Criterion c(8, "Feynman-Kac-Ito");
  const auto m = make_manifold("torus:1");
  const double a = 0.3, t = 0.5, theta0 = 0.5;
  const OneForm alpha = make_form(*m, "a_dtheta:0.3");
  const ComplexField f = [](const Manifold&, const ManifoldPoint& p) {
    return std::exp(cplx(0.0, p.coords[0]));
  };
  const ManifoldPoint x0{Vec{theta0}};
  const std::size_t n = 20000;

  bool pass = true;
  std::string detail;
  struct Case {
    const char* v_field;
    std::vector<cplx> v_hat;
  };
  for (const auto& cs : {Case{"constant:0", {cplx(0.0)}},
                         Case{"cos1", {cplx(0.5), cplx(0.0), cplx(0.5)}}}) {
    const ScalarField v = make_field(*m, cs.v_field);
    const std::vector<cplx> f_hat = {cplx(0.0), cplx(0.0), cplx(1.0)};
    const cplx oracle = fki_spectral_circle(a, cs.v_hat, f_hat, theta0, t, 32);
    const FkiEstimate est = fki_mc(*m, alpha, v, f, x0, t, n, 10, 106);
    const FkiEstimate fine = fki_mc(*m, alpha, v, f, x0, t, n, 12, 107);
    const double bias = std::abs(est.value - fine.value);
    const double dev = std::abs(est.value - oracle);
    char buf[160];
    std::snprintf(buf, sizeof buf, "V=%s dev %.4f <= 3se+bias %.4f, <= 0.02; ", cs.v_field,
                  dev, 3.0 * est.stderr_mean + bias);
    detail += buf;
    if (dev > 3.0 * est.stderr_mean + bias || dev > 0.02) pass = false;
  }
  // spot-check the closed form behind the first oracle: e^{-t(1+a)^2} = e^{-0.845}
  const cplx closed = std::exp(cplx(-0.845, theta0));
  const cplx oracle0 = fki_spectral_circle(a, {cplx(0.0)}, {cplx(0.0), cplx(0.0), cplx(1.0)},
                                           theta0, t, 32);
  if (std::abs(closed - oracle0) > 1e-12) pass = false;
  c.report(pass, 120.0, detail);
}

void criterion_9_geometry() {
  Criterion c(9, "geometry kernel invariants");
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"euclidean:1", "x_dx"}, {"euclidean:2", "bump_dy"}, {"euclidean:3", "x_dy"},
      {"torus:1", "a_dtheta:1"}, {"torus:2", "dx1"},       {"sphere2:1", "z_dphi"},
      {"sphere2:2", "z_dphi"},   {"hyperbolic2", "x_dx"}};
  bool pass = true;
  std::string worst_key;
  double worst = 0.0;
  for (const auto& [key, form_key] : cases) {
    const auto m = make_manifold(key);
    const OneForm alpha = make_form(*m, form_key);
    const std::size_t n = 10000;
    std::vector<double> errs(n, 0.0);
    parallel_for(n, [&](std::size_t i) {
      const ManifoldPoint x = m->sample_point(901, i);
      const ManifoldPoint y = m->sample_point(902, i);
      if (!m->has_unique_geodesic(x, y)) return;
      const TangentVector v = m->log_map(x, y);
      double e = m->dist(y, m->exp_map(x, v));
      e = std::max(e, std::abs(m->tangent_norm(v) - m->dist(x, y)));
      const auto [mid, vel] = m->geodesic_eval(x, v, 0.5);
      e = std::max(e, std::abs(m->tangent_norm(vel) - m->dist(x, y)));
      // codifferential: analytic vs finite differences
      e = std::max(e, 1e-3 * std::abs(codifferential_fd(*m, alpha, x) -
                                      alpha.codifferential_analytic(*m, x)));
      errs[i] = e;
    });
    double max_err = 0.0;
    for (double e : errs) max_err = std::max(max_err, e);
    if (max_err > worst) {
      worst = max_err;
      worst_key = key;
    }
    if (max_err > 1e-8) pass = false;  // 1e-9 round-trips, 1e-5 codiff (scaled 1e-3)
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "worst invariant error %.1e on %s (10^4 samples each)",
                worst, worst_key.c_str());
  c.report(pass, 5.0, buf);
}

}  // namespace

int main() {
  criterion_1_classical_rate();
  criterion_2_strat_exactness();
  criterion_3_ito_strat_gap();
  criterion_4_moment_classification();
  criterion_5_ito_lemma();
  criterion_6_chernoff();
  criterion_7_diamagnetic();
  criterion_8_fki();
  criterion_9_geometry();
  std::printf("%d of 9 criteria failed\n", g_failures);
  return g_failures;
}
