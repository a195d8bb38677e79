#include "geostoch/fki.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "geostoch/integrals.hpp"
#include "geostoch/measure.hpp"
#include "geostoch/parallel.hpp"

namespace geostoch {

FkiEstimate fki_mc(const Manifold& manifold, const OneForm& alpha, const ScalarField& v,
                   const ComplexField& f, const ManifoldPoint& x, double t, std::size_t n,
                   int k, std::uint64_t seed) {
  const PathEnsemble ens = make_ensemble(manifold, x, t, k, seed, n);
  const IntervalMeasure leb = lebesgue();
  std::vector<std::complex<double>> vals(n);
  parallel_for(n, [&](std::size_t i) {
    const DyadicPath path = ens.path(i);
    const double phase = approx_A(leb, alpha, path);
    const double weight = time_integral_along_path(
        [&](const ManifoldPoint& p) { return v.eval(manifold, p); }, path);
    vals[i] = std::exp(std::complex<double>(-weight, phase)) *
              f(manifold, path.points.back());
  });
  std::complex<double> sum{0.0, 0.0};
  for (const auto& z : vals) sum += z;
  const std::complex<double> mean = sum / static_cast<double>(n);
  double var_re = 0.0, var_im = 0.0;
  for (const auto& z : vals) {
    var_re += (z.real() - mean.real()) * (z.real() - mean.real());
    var_im += (z.imag() - mean.imag()) * (z.imag() - mean.imag());
  }
  FkiEstimate est;
  est.value = mean;
  est.n_paths = n;
  est.level = k;
  if (n > 1) {
    const double denom = static_cast<double>(n) * static_cast<double>(n - 1);
    est.stderr_mean = std::sqrt(std::max(var_re, var_im) / denom);
  }
  return est;
}

std::complex<double> fki_spectral_circle(double a,
                                         const std::vector<std::complex<double>>& v_hat,
                                         const std::vector<std::complex<double>>& f_hat,
                                         double x, double t, int n_modes) {
  if (n_modes < 16) throw ContractViolation("fki_spectral_circle: n_modes >= 16 required");
  if (v_hat.size() % 2 == 0 || f_hat.size() % 2 == 0) {
    throw ContractViolation("fki_spectral_circle: centered coefficients need odd length");
  }
  const int dim = 2 * n_modes + 1;
  const int mv = (static_cast<int>(v_hat.size()) - 1) / 2;
  const int mf = (static_cast<int>(f_hat.size()) - 1) / 2;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const double mode = static_cast<double>(r - n_modes) + a;
    h(r, r) = mode * mode;
    for (int c = 0; c < dim; ++c) {
      const int diff = (r - n_modes) - (c - n_modes);
      if (std::abs(diff) <= mv) h(r, c) += v_hat[mv + diff];
    }
  }
  Eigen::VectorXcd coeffs = Eigen::VectorXcd::Zero(dim);
  for (int m = -mf; m <= mf; ++m) {
    if (std::abs(m) <= n_modes) coeffs(n_modes + m) = f_hat[mf + m];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXd decay = (-t * es.eigenvalues().array()).exp();
  coeffs = es.eigenvectors() * (decay.asDiagonal() * (es.eigenvectors().adjoint() * coeffs));
  std::complex<double> out{0.0, 0.0};
  const std::complex<double> i1(0.0, 1.0);
  for (int m = -n_modes; m <= n_modes; ++m) {
    out += coeffs(n_modes + m) * std::exp(i1 * static_cast<double>(m) * x);
  }
  return out;
}

}  // namespace geostoch
