#pragma once

#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geostoch/smallvec.hpp"

namespace geostoch {

/// Thrown by log_map / geodesic_point when the minimizing geodesic is not
/// unique (sphere antipodes, torus half-period ties).
class CutLocusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct ManifoldPoint {
  Vec coords;  // canonical chart: angles (torus), unit 3-vector (sphere),
               // upper half-plane (hyperbolic), cartesian (euclidean)
};

struct TangentVector {
  ManifoldPoint base;
  Vec components;  // same representation as the chart frame of the base point
};

constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Exact differential geometry for one model manifold. All closed-form:
/// no shooting, no numeric geodesic solves.
class Manifold {
 public:
  virtual ~Manifold() = default;

  virtual std::string name() const = 0;
  /// Intrinsic dimension.
  virtual std::size_t dim() const = 0;
  /// Storage size of point coordinates (3 for the embedded sphere).
  virtual std::size_t rep_dim() const = 0;

  virtual ManifoldPoint exp_map(const ManifoldPoint& x, const TangentVector& v) const = 0;
  virtual TangentVector log_map(const ManifoldPoint& x, const ManifoldPoint& y) const = 0;
  virtual double dist(const ManifoldPoint& x, const ManifoldPoint& y) const = 0;
  virtual double injectivity_radius(const ManifoldPoint& x) const = 0;

  /// True iff x and y are joined by a unique minimizing geodesic.
  virtual bool has_unique_geodesic(const ManifoldPoint& x, const ManifoldPoint& y) const = 0;

  /// Point and velocity at parameter tau of the geodesic gamma(0)=x with
  /// gamma-dot(0) = v (v typically comes from log_map).
  virtual std::pair<ManifoldPoint, TangentVector> geodesic_eval(
      const ManifoldPoint& x, const TangentVector& v, double tau) const = 0;

  std::pair<ManifoldPoint, TangentVector> geodesic_point(const ManifoldPoint& x,
                                                         const ManifoldPoint& y,
                                                         double tau) const {
    return geodesic_eval(x, log_map(x, y), tau);
  }

  /// Riemannian inner product of two tangent vectors at the same base point.
  virtual double inner(const TangentVector& a, const TangentVector& b) const = 0;
  double tangent_norm(const TangentVector& v) const { return std::sqrt(inner(v, v)); }

  /// Orthonormal tangent frame at x; deterministic function of x.
  virtual std::vector<TangentVector> frame(const ManifoldPoint& x) const = 0;

  // Chart access for finite-difference operators. The chart has dim()
  // coordinates; chart_tangent(u, j) is the coordinate vector field d/du_j.
  virtual Vec chart_coords(const ManifoldPoint& x) const = 0;
  virtual ManifoldPoint point_from_chart(const Vec& u) const = 0;
  virtual TangentVector chart_tangent(const Vec& u, std::size_t j) const = 0;
  /// Metric matrix g_ij in the chart, row-major dim() x dim().
  virtual void metric(const Vec& u, double* g) const = 0;

  /// Random point with a manifold-appropriate sampler, keyed statelessly.
  virtual ManifoldPoint sample_point(std::uint64_t seed, std::uint64_t index) const = 0;

  /// True for manifolds whose Brownian increments admit exact Gaussian
  /// refinement in the chart (euclidean, torus).
  virtual bool is_flat() const = 0;

  /// Wraps chart displacement conventions for flat manifolds (identity on
  /// euclidean, mod-period on torus). Used by the path sampler.
  virtual ManifoldPoint translate(const ManifoldPoint& x, const Vec& delta) const {
    (void)x;
    (void)delta;
    throw ContractViolation("translate: only defined on flat manifolds");
  }
};

std::unique_ptr<Manifold> make_euclidean(std::size_t n);
std::unique_ptr<Manifold> make_torus(std::size_t n, const std::vector<double>& periods);
std::unique_ptr<Manifold> make_sphere2(double radius);
std::unique_ptr<Manifold> make_hyperbolic2();

/// Parses registry keys: "euclidean:2", "torus:1", "torus:2:6.2831...",
/// "sphere2:1.0", "hyperbolic2".
std::unique_ptr<Manifold> make_manifold(const std::string& key);

}  // namespace geostoch
