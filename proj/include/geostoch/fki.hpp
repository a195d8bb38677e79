#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "geostoch/calculus.hpp"
#include "geostoch/manifold.hpp"
#include "geostoch/paths.hpp"

namespace geostoch {

using ComplexField =
    std::function<std::complex<double>(const Manifold&, const ManifoldPoint&)>;

struct FkiEstimate {
  std::complex<double> value{0.0, 0.0};
  double stderr_mean = 0.0;  // max of the real/imag component standard errors
  std::size_t n_paths = 0;
  int level = 0;
};

// Monte Carlo mean over Brownian paths started at x of
//   exp(i A_{Leb,t,k}(alpha) - int_0^t V) f(path end)
FkiEstimate fki_mc(const Manifold& manifold, const OneForm& alpha, const ScalarField& v,
                   const ComplexField& f, const ManifoldPoint& x, double t, std::size_t n,
                   int k, std::uint64_t seed);

// (e^{-tH} f)(x) on the circle for H = (d/dtheta + i a)^* (d/dtheta + i a) + V,
// computed in the Fourier basis where the magnetic part is diagonal with
// eigenvalue (m + a)^2.  v_hat and f_hat are centered coefficient vectors of
// odd length 2M+1 (index M + m holds the e^{i m theta} coefficient).
std::complex<double> fki_spectral_circle(double a,
                                         const std::vector<std::complex<double>>& v_hat,
                                         const std::vector<std::complex<double>>& f_hat,
                                         double x, double t, int n_modes);

}  // namespace geostoch
