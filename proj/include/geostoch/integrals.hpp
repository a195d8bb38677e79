#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "geostoch/calculus.hpp"
#include "geostoch/measure.hpp"
#include "geostoch/paths.hpp"

namespace geostoch {

/// Per-level diagnostics for limit-in-measure studies: the tail fraction
/// P(|Delta| > eps) and the median |Delta| against the reference level.
struct ConvergenceReport {
  std::vector<int> levels;
  std::vector<double> median_abs;
  std::vector<double> tail_frac;
  std::vector<std::size_t> n_cutlocus;
  std::optional<double> slope;  // fitted log2(error) slope, when meaningful
  double epsilon = 0.0;

  void write_csv(const std::string& filename) const;
};

/// A_{P,t,k}: sum of geodesic P-averages over consecutive dyadic points.
/// Pairs beyond the unique-geodesic predicate contribute 0 and are counted.
double approx_A(const IntervalMeasure& P, const OneForm& alpha, const DyadicPath& path,
                std::size_t* cutlocus_count = nullptr);

/// S_{P,t,k} = A_{P,t,k} + (t/2^k) * skew(P) * sum_j d*alpha(c_j).
double approx_S(const IntervalMeasure& P, const OneForm& alpha, const DyadicPath& path);

/// Classical line integral of alpha along a C^1 curve; composite
/// Gauss-Legendre, refined until stable to 1e-10.
double line_integral(const Manifold& M, const OneForm& alpha, const Curve& curve,
                     int n_quad = 8);

/// |A on dyadic samples - line integral| per level, with a fitted
/// log2-slope (skipped when errors sit at machine epsilon).
ConvergenceReport classical_rate(const Manifold& M, const IntervalMeasure& P,
                                 const OneForm& alpha, const Curve& curve,
                                 const std::vector<int>& k_range);

/// Left-endpoint Riemann sum of g along the path: (t/2^k) * sum g(c_j).
double time_integral_along_path(const std::function<double(const ManifoldPoint&)>& g,
                                const DyadicPath& path);

/// Converts an Int_P estimate into an Int_Q estimate:
/// Int_Q = Int_P + 2*(M1(P) - M1(Q)) * integral of d*alpha along the path.
double convert(double value_p, const IntervalMeasure& P, const IntervalMeasure& Q,
               const OneForm& alpha, const DyadicPath& path);

/// Cauchy-in-measure diagnostic: Delta(k) = A at k minus A at the finest
/// level on the same path (via subsample).
ConvergenceReport estimate_in_measure(const IntervalMeasure& P, const OneForm& alpha,
                                      const PathEnsemble& ensemble,
                                      const std::vector<int>& k_range, double epsilon);

struct ResidualReport {
  double max_abs = 0.0;
  double mean = 0.0;
  double stderr_mean = 0.0;
  std::size_t n_excluded = 0;  // paths with a pair beyond the cut-locus predicate
  std::size_t n_used = 0;
};

/// Per-path residual of A_{Leb,t,k}(df) - [f(end) - f(start)].
ResidualReport strat_exactness(const ScalarField& f, const PathEnsemble& ensemble, int k,
                               int quadrature_order = 16);

/// Per-path residual of f(end) - f(x0) - A_{delta_0}(df) - int Delta f ds.
ResidualReport ito_lemma_check(const ScalarField& f, const PathEnsemble& ensemble, int k);

/// Mean of min(|a-b|, 1) over paired samples.
double levy_distance_estimate(const std::vector<double>& samples_a,
                              const std::vector<double>& samples_b);

/// Levy distance between A restricted to [0,t1] and [0,t2] on the same
/// paths; t1, t2 must be dyadic fractions of the ensemble horizon.
double t_continuity_diagnostic(const IntervalMeasure& P, const OneForm& alpha,
                               const PathEnsemble& ensemble, double t1, double t2);

/// Least-squares slope of log2(|err|) against k. Entries below floor are
/// dropped; returns nullopt when fewer than 2 usable entries remain.
std::optional<double> fit_log2_slope(const std::vector<int>& ks,
                                     const std::vector<double>& errs,
                                     double floor = 1e-14);

}  // namespace geostoch
