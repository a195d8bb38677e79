#pragma once

#include <functional>
#include <optional>
#include <string>

#include "geostoch/manifold.hpp"

namespace geostoch {

/// Smooth real 1-form with an analytic codifferential d*alpha = -div(alpha#).
struct OneForm {
  std::string name;
  std::function<double(const Manifold&, const ManifoldPoint&, const TangentVector&)> eval;
  std::function<double(const Manifold&, const ManifoldPoint&)> codifferential_analytic;
};

struct ScalarField {
  std::string name;
  std::function<double(const Manifold&, const ManifoldPoint&)> eval;
  std::function<TangentVector(const Manifold&, const ManifoldPoint&)> gradient_analytic;  // may be null
  std::function<double(const Manifold&, const ManifoldPoint&)> laplacian_analytic;        // may be null
};

/// The exact form df, with codifferential -Laplacian(f). Requires the
/// analytic gradient; the codifferential falls back to throwing when the
/// analytic laplacian is absent.
OneForm differential(const ScalarField& f);

/// Central-difference codifferential in the chart with metric volume weight.
double codifferential_fd(const Manifold& M, const OneForm& alpha, const ManifoldPoint& x,
                         double h = 1e-4);

/// Chart-based Laplace-Beltrami via central differences. Sign convention
/// Delta = -d*d, so Delta(x^2) = 2 on the line.
double laplace_beltrami_fd(const Manifold& M, const ScalarField& f, const ManifoldPoint& x,
                           double h = 1e-4);

/// Smooth parametric curve with analytic velocity, for the classical-limit
/// experiments.
struct Curve {
  std::string name;
  double t_total = 0.0;
  std::function<ManifoldPoint(double)> pos;
  std::function<TangentVector(double)> vel;
};

// Registries addressable by string keys for CLI configs. Keys carry
// parameters after a colon, e.g. "a_dtheta:0.3".
OneForm make_form(const Manifold& M, const std::string& key);
ScalarField make_field(const Manifold& M, const std::string& key);
Curve make_curve(const Manifold& M, const std::string& key);

std::string list_forms();
std::string list_fields();
std::string list_curves();

}  // namespace geostoch
