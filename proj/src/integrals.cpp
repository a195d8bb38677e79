#include "geostoch/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "geostoch/parallel.hpp"

namespace geostoch {

namespace {

double median_abs_of(std::vector<double> v) {
  for (auto& x : v) x = std::abs(x);
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  return v[mid];
}

}  // namespace

void ConvergenceReport::write_csv(const std::string& filename) const {
  std::FILE* f = std::fopen(filename.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + filename);
  std::fprintf(f, "k,median_abs,tail_frac,n_cutlocus\n");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    std::fprintf(f, "%d,%.17g,%.17g,%zu\n", levels[i], median_abs[i],
                 tail_frac.empty() ? 0.0 : tail_frac[i],
                 n_cutlocus.empty() ? std::size_t{0} : n_cutlocus[i]);
  }
  std::fclose(f);
}

double approx_A(const IntervalMeasure& P, const OneForm& alpha, const DyadicPath& path,
                std::size_t* cutlocus_count) {
  const Manifold& M = *path.manifold;
  double s = 0.0;
  std::size_t bad = 0;
  for (std::size_t j = 0; j + 1 < path.points.size(); ++j) {
    const ManifoldPoint& a = path.points[j];
    const ManifoldPoint& b = path.points[j + 1];
    if (!M.has_unique_geodesic(a, b)) {
      ++bad;
      continue;  // the 0 branch
    }
    s += i_p(P, alpha, M, a, b);
  }
  if (cutlocus_count) *cutlocus_count += bad;
  return s;
}

double approx_S(const IntervalMeasure& P, const OneForm& alpha, const DyadicPath& path) {
  const double sk = skew(P);
  double correction = 0.0;
  if (sk != 0.0) {
    const Manifold& M = *path.manifold;
    const double h = path.t_total / static_cast<double>(path.points.size() - 1);
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < path.points.size(); ++j) {
      sum += alpha.codifferential_analytic(M, path.points[j]);
    }
    correction = h * sk * sum;
  }
  return approx_A(P, alpha, path) + correction;
}

double line_integral(const Manifold& M, const OneForm& alpha, const Curve& curve,
                     int n_quad) {
  // composite Gauss-Legendre over n_quad panels, panels doubled until the
  // value is refinement-stable
  const auto& nodes = gauss_legendre01(16);
  double prev = 0.0;
  for (int panels = n_quad;; panels *= 2) {
    const double dt = curve.t_total / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double s0 = p * dt;
      for (const auto& [node, w] : nodes) {
        const double s = s0 + node * dt;
        total += w * dt * alpha.eval(M, curve.pos(s), curve.vel(s));
      }
    }
    if (panels > n_quad && std::abs(total - prev) < 1e-10 * (1.0 + std::abs(total))) {
      return total;
    }
    prev = total;
    if (panels > (1 << 16)) return total;  // refinement-stability defeated; bail
  }
}

ConvergenceReport classical_rate(const Manifold& M, const IntervalMeasure& P,
                                 const OneForm& alpha, const Curve& curve,
                                 const std::vector<int>& k_range) {
  const double exact = line_integral(M, alpha, curve);
  ConvergenceReport rep;
  std::vector<double> errs;
  for (int k : k_range) {
    const std::size_t steps = std::size_t{1} << k;
    DyadicPath path;
    path.manifold = &M;
    path.t_total = curve.t_total;
    path.level = k;
    path.points.reserve(steps + 1);
    for (std::size_t j = 0; j <= steps; ++j) {
      path.points.push_back(curve.pos(curve.t_total * static_cast<double>(j) /
                                      static_cast<double>(steps)));
    }
    std::size_t bad = 0;
    const double a = approx_A(P, alpha, path, &bad);
    rep.levels.push_back(k);
    rep.median_abs.push_back(std::abs(a - exact));
    rep.n_cutlocus.push_back(bad);
    errs.push_back(std::abs(a - exact));
  }
  rep.slope = fit_log2_slope(rep.levels, errs);
  return rep;
}

double time_integral_along_path(const std::function<double(const ManifoldPoint&)>& g,
                                const DyadicPath& path) {
  const double h = path.t_total / static_cast<double>(path.points.size() - 1);
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < path.points.size(); ++j) s += g(path.points[j]);
  return h * s;
}

double convert(double value_p, const IntervalMeasure& P, const IntervalMeasure& Q,
               const OneForm& alpha, const DyadicPath& path) {
  const double dm = first_moment(P) - first_moment(Q);
  if (dm == 0.0) return value_p;
  const Manifold& M = *path.manifold;
  const double codiff_integral = time_integral_along_path(
      [&](const ManifoldPoint& x) { return alpha.codifferential_analytic(M, x); }, path);
  // Int_P = Int_Q - 2*int tau d(P-Q) * int d*alpha, solved for Int_Q
  return value_p + 2.0 * dm * codiff_integral;
}

ConvergenceReport estimate_in_measure(const IntervalMeasure& P, const OneForm& alpha,
                                      const PathEnsemble& ensemble,
                                      const std::vector<int>& k_range, double epsilon) {
  for (int k : k_range) {
    if (k > ensemble.level) {
      throw ContractViolation("estimate_in_measure: k above ensemble level");
    }
  }
  const std::size_t n = ensemble.count;
  const std::size_t nk = k_range.size();
  // paths are regenerated on demand, so compute every level from one pass
  std::vector<double> delta(n * nk);
  std::vector<std::size_t> bad(n * nk, 0);
  parallel_for(n, [&](std::size_t i) {
    const DyadicPath path = ensemble.path(i);
    const double ref = approx_A(P, alpha, path);
    for (std::size_t m = 0; m < nk; ++m) {
      const DyadicPath coarse =
          (k_range[m] == ensemble.level) ? path : subsample(path, k_range[m]);
      delta[i * nk + m] = approx_A(P, alpha, coarse, &bad[i * nk + m]) - ref;
    }
  });

  ConvergenceReport rep;
  rep.epsilon = epsilon;
  for (std::size_t m = 0; m < nk; ++m) {
    std::vector<double> d(n);
    std::size_t exceed = 0, total_bad = 0;
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = delta[i * nk + m];
      if (std::abs(d[i]) > epsilon) ++exceed;
      total_bad += bad[i * nk + m];
    }
    rep.levels.push_back(k_range[m]);
    rep.median_abs.push_back(median_abs_of(d));
    rep.tail_frac.push_back(static_cast<double>(exceed) / static_cast<double>(n));
    rep.n_cutlocus.push_back(total_bad);
  }
  return rep;
}

ResidualReport strat_exactness(const ScalarField& f, const PathEnsemble& ensemble, int k,
                               int quadrature_order) {
  const OneForm df = differential(f);
  IntervalMeasure leb = lebesgue(quadrature_order);
  const std::size_t n = ensemble.count;
  std::vector<double> residual(n);
  std::vector<int> usable(n, 1);
  parallel_for(n, [&](std::size_t i) {
    DyadicPath path = ensemble.path(i);
    if (k != path.level) path = subsample(path, k);
    const Manifold& M = *path.manifold;
    for (std::size_t j = 0; j + 1 < path.points.size(); ++j) {
      if (!M.has_unique_geodesic(path.points[j], path.points[j + 1])) {
        usable[i] = 0;
        return;
      }
    }
    const double a = approx_A(leb, df, path);
    residual[i] = a - (f.eval(M, path.points.back()) - f.eval(M, path.points.front()));
  });
  ResidualReport rep;
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!usable[i]) {
      ++rep.n_excluded;
      continue;
    }
    ++rep.n_used;
    rep.max_abs = std::max(rep.max_abs, std::abs(residual[i]));
    sum += residual[i];
    sum2 += residual[i] * residual[i];
  }
  if (rep.n_used > 1) {
    rep.mean = sum / static_cast<double>(rep.n_used);
    const double var =
        (sum2 - sum * sum / static_cast<double>(rep.n_used)) / (rep.n_used - 1.0);
    rep.stderr_mean = std::sqrt(std::max(var, 0.0) / static_cast<double>(rep.n_used));
  }
  return rep;
}

ResidualReport ito_lemma_check(const ScalarField& f, const PathEnsemble& ensemble, int k) {
  const OneForm df = differential(f);
  const IntervalMeasure ito = dirac(0.0);
  const std::size_t n = ensemble.count;
  std::vector<double> residual(n);
  std::vector<int> usable(n, 1);
  parallel_for(n, [&](std::size_t i) {
    DyadicPath path = ensemble.path(i);
    if (k != path.level) path = subsample(path, k);
    const Manifold& M = *path.manifold;
    std::size_t bad = 0;
    const double a = approx_A(ito, df, path, &bad);
    if (bad > 0) {
      usable[i] = 0;
      return;
    }
    const double lap_integral = time_integral_along_path(
        [&](const ManifoldPoint& x) { return f.laplacian_analytic(M, x); }, path);
    residual[i] = f.eval(M, path.points.back()) - f.eval(M, path.points.front()) - a -
                  lap_integral;
  });
  ResidualReport rep;
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!usable[i]) {
      ++rep.n_excluded;
      continue;
    }
    ++rep.n_used;
    rep.max_abs = std::max(rep.max_abs, std::abs(residual[i]));
    sum += residual[i];
    sum2 += residual[i] * residual[i];
  }
  if (rep.n_used > 1) {
    rep.mean = sum / static_cast<double>(rep.n_used);
    const double var =
        (sum2 - sum * sum / static_cast<double>(rep.n_used)) / (rep.n_used - 1.0);
    rep.stderr_mean = std::sqrt(std::max(var, 0.0) / static_cast<double>(rep.n_used));
  }
  return rep;
}

double levy_distance_estimate(const std::vector<double>& samples_a,
                              const std::vector<double>& samples_b) {
  if (samples_a.size() != samples_b.size()) {
    throw ContractViolation("levy_distance_estimate: paired samples required");
  }
  if (samples_a.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < samples_a.size(); ++i) {
    s += std::min(std::abs(samples_a[i] - samples_b[i]), 1.0);
  }
  return s / static_cast<double>(samples_a.size());
}

namespace {

/// A over the first `steps` increments of the path only.
double approx_A_prefix(const IntervalMeasure& P, const OneForm& alpha,
                       const DyadicPath& path, std::size_t steps) {
  const Manifold& M = *path.manifold;
  double s = 0.0;
  for (std::size_t j = 0; j < steps; ++j) {
    if (!M.has_unique_geodesic(path.points[j], path.points[j + 1])) continue;
    s += i_p(P, alpha, M, path.points[j], path.points[j + 1]);
  }
  return s;
}

std::size_t dyadic_index(double t_part, const DyadicPath& path) {
  const std::size_t steps = path.points.size() - 1;
  const double x = t_part / path.t_total * static_cast<double>(steps);
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-9 || r < 0.0 || r > static_cast<double>(steps)) {
    throw ContractViolation("t_continuity_diagnostic: time is not a dyadic fraction");
  }
  return static_cast<std::size_t>(r);
}

}  // namespace

double t_continuity_diagnostic(const IntervalMeasure& P, const OneForm& alpha,
                               const PathEnsemble& ensemble, double t1, double t2) {
  const std::size_t n = ensemble.count;
  std::vector<double> a(n), b(n);
  parallel_for(n, [&](std::size_t i) {
    const DyadicPath path = ensemble.path(i);
    const std::size_t j1 = dyadic_index(t1, path);
    const std::size_t j2 = dyadic_index(t2, path);
    a[i] = approx_A_prefix(P, alpha, path, j1);
    b[i] = approx_A_prefix(P, alpha, path, j2);
  });
  return levy_distance_estimate(a, b);
}

std::optional<double> fit_log2_slope(const std::vector<int>& ks,
                                     const std::vector<double>& errs, double floor) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (errs[i] > floor) {
      xs.push_back(static_cast<double>(ks[i]));
      ys.push_back(std::log2(errs[i]));
    }
  }
  if (xs.size() < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return num / den;
}

}  // namespace geostoch
