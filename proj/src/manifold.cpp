#include "geostoch/manifold.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "geostoch/rng.hpp"

namespace geostoch {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kCutLocusTol = 1e-12;

void check_dim(const char* op, std::size_t got, std::size_t want) {
  if (got != want) {
    throw ContractViolation(std::string(op) + ": dimension mismatch");
  }
}

// ---------------------------------------------------------------------------
// Euclidean R^n

class Euclidean final : public Manifold {
 public:
  explicit Euclidean(std::size_t n) : n_(n) {
    if (n < 1) throw ContractViolation("euclidean: n >= 1 required");
  }

  std::string name() const override { return "euclidean:" + std::to_string(n_); }
  std::size_t dim() const override { return n_; }
  std::size_t rep_dim() const override { return n_; }

  ManifoldPoint exp_map(const ManifoldPoint& x, const TangentVector& v) const override {
    check_dim("exp_map", v.components.size(), n_);
    return {x.coords + v.components};
  }

  TangentVector log_map(const ManifoldPoint& x, const ManifoldPoint& y) const override {
    check_dim("log_map", y.coords.size(), n_);
    return {x, y.coords - x.coords};
  }

  double dist(const ManifoldPoint& x, const ManifoldPoint& y) const override {
    return norm(y.coords - x.coords);
  }

  double injectivity_radius(const ManifoldPoint&) const override { return kUnbounded; }

  bool has_unique_geodesic(const ManifoldPoint&, const ManifoldPoint&) const override {
    return true;
  }

  std::pair<ManifoldPoint, TangentVector> geodesic_eval(const ManifoldPoint& x,
                                                        const TangentVector& v,
                                                        double tau) const override {
    ManifoldPoint p{x.coords + tau * v.components};
    return {p, TangentVector{p, v.components}};
  }

  double inner(const TangentVector& a, const TangentVector& b) const override {
    return dot(a.components, b.components);
  }

  std::vector<TangentVector> frame(const ManifoldPoint& x) const override {
    std::vector<TangentVector> fr;
    for (std::size_t j = 0; j < n_; ++j) {
      Vec e(n_);
      e[j] = 1.0;
      fr.push_back({x, e});
    }
    return fr;
  }

  Vec chart_coords(const ManifoldPoint& x) const override { return x.coords; }
  ManifoldPoint point_from_chart(const Vec& u) const override { return {u}; }
  TangentVector chart_tangent(const Vec& u, std::size_t j) const override {
    Vec e(n_);
    e[j] = 1.0;
    return {{u}, e};
  }
  void metric(const Vec&, double* g) const override {
    for (std::size_t i = 0; i < n_ * n_; ++i) g[i] = 0.0;
    for (std::size_t i = 0; i < n_; ++i) g[i * n_ + i] = 1.0;
  }

  ManifoldPoint sample_point(std::uint64_t seed, std::uint64_t index) const override {
    Vec u(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      u[j] = 4.0 * uniform01(key_chain(seed, 0xE0C11Du, index, j)) - 2.0;
    }
    return {u};
  }

  bool is_flat() const override { return true; }

  ManifoldPoint translate(const ManifoldPoint& x, const Vec& delta) const override {
    return {x.coords + delta};
  }

 private:
  std::size_t n_;
};

// ---------------------------------------------------------------------------
// Flat torus T^n, angles in [0, L_i)

class Torus final : public Manifold {
 public:
  Torus(std::size_t n, std::vector<double> periods) : n_(n), periods_(std::move(periods)) {
    if (n < 1) throw ContractViolation("torus: n >= 1 required");
    if (periods_.size() != n_) throw ContractViolation("torus: periods size mismatch");
    for (double L : periods_) {
      if (!(L > 0.0)) throw ContractViolation("torus: periods must be positive");
    }
  }

  std::string name() const override {
    std::ostringstream os;
    os << "torus:" << n_;
    for (double L : periods_) os << ":" << L;
    return os.str();
  }
  std::size_t dim() const override { return n_; }
  std::size_t rep_dim() const override { return n_; }

  double wrap(double a, double L) const {
    double w = std::fmod(a, L);
    if (w < 0.0) w += L;
    return w;
  }

  /// Shortest signed displacement from a to b modulo L, in (-L/2, L/2].
  double min_disp(double a, double b, double L) const {
    double d = wrap(b - a, L);
    if (d > L / 2.0) d -= L;
    return d;
  }

  ManifoldPoint exp_map(const ManifoldPoint& x, const TangentVector& v) const override {
    check_dim("exp_map", v.components.size(), n_);
    Vec u(n_);
    for (std::size_t j = 0; j < n_; ++j) u[j] = wrap(x.coords[j] + v.components[j], periods_[j]);
    return {u};
  }

  TangentVector log_map(const ManifoldPoint& x, const ManifoldPoint& y) const override {
    check_dim("log_map", y.coords.size(), n_);
    Vec v(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      const double d = min_disp(x.coords[j], y.coords[j], periods_[j]);
      if (std::abs(std::abs(d) - periods_[j] / 2.0) < kCutLocusTol) {
        throw CutLocusError("torus log_map: half-period tie");
      }
      v[j] = d;
    }
    return {x, v};
  }

  double dist(const ManifoldPoint& x, const ManifoldPoint& y) const override {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      const double d = min_disp(x.coords[j], y.coords[j], periods_[j]);
      s += d * d;
    }
    return std::sqrt(s);
  }

  double injectivity_radius(const ManifoldPoint&) const override {
    double m = periods_[0];
    for (double L : periods_) m = std::min(m, L);
    return m / 2.0;
  }

  bool has_unique_geodesic(const ManifoldPoint& x, const ManifoldPoint& y) const override {
    for (std::size_t j = 0; j < n_; ++j) {
      const double d = min_disp(x.coords[j], y.coords[j], periods_[j]);
      if (std::abs(std::abs(d) - periods_[j] / 2.0) < kCutLocusTol) return false;
    }
    return true;
  }

  std::pair<ManifoldPoint, TangentVector> geodesic_eval(const ManifoldPoint& x,
                                                        const TangentVector& v,
                                                        double tau) const override {
    Vec u(n_);
    for (std::size_t j = 0; j < n_; ++j) u[j] = wrap(x.coords[j] + tau * v.components[j], periods_[j]);
    ManifoldPoint p{u};
    return {p, TangentVector{p, v.components}};
  }

  double inner(const TangentVector& a, const TangentVector& b) const override {
    return dot(a.components, b.components);
  }

  std::vector<TangentVector> frame(const ManifoldPoint& x) const override {
    std::vector<TangentVector> fr;
    for (std::size_t j = 0; j < n_; ++j) {
      Vec e(n_);
      e[j] = 1.0;
      fr.push_back({x, e});
    }
    return fr;
  }

  Vec chart_coords(const ManifoldPoint& x) const override { return x.coords; }
  ManifoldPoint point_from_chart(const Vec& u) const override {
    Vec w(n_);
    for (std::size_t j = 0; j < n_; ++j) w[j] = wrap(u[j], periods_[j]);
    return {w};
  }
  TangentVector chart_tangent(const Vec& u, std::size_t j) const override {
    Vec e(n_);
    e[j] = 1.0;
    return {point_from_chart(u), e};
  }
  void metric(const Vec&, double* g) const override {
    for (std::size_t i = 0; i < n_ * n_; ++i) g[i] = 0.0;
    for (std::size_t i = 0; i < n_; ++i) g[i * n_ + i] = 1.0;
  }

  ManifoldPoint sample_point(std::uint64_t seed, std::uint64_t index) const override {
    Vec u(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      u[j] = periods_[j] * uniform01(key_chain(seed, 0x70405u, index, j));
    }
    return {u};
  }

  bool is_flat() const override { return true; }

  ManifoldPoint translate(const ManifoldPoint& x, const Vec& delta) const override {
    Vec u(n_);
    for (std::size_t j = 0; j < n_; ++j) u[j] = wrap(x.coords[j] + delta[j], periods_[j]);
    return {u};
  }

  const std::vector<double>& periods() const { return periods_; }

 private:
  std::size_t n_;
  std::vector<double> periods_;
};

// ---------------------------------------------------------------------------
// Unit-vector sphere S^2 of radius r. Points are unit 3-vectors; tangents
// are embedded velocities of the radius-r sphere (metric norm = euclidean
// norm of the representation).

class Sphere2 final : public Manifold {
 public:
  explicit Sphere2(double radius) : r_(radius) {
    if (!(radius > 0.0)) throw ContractViolation("sphere2: radius must be positive");
  }

  std::string name() const override {
    std::ostringstream os;
    os << "sphere2:" << r_;
    return os.str();
  }
  std::size_t dim() const override { return 2; }
  std::size_t rep_dim() const override { return 3; }

  static Vec normalized(const Vec& a) {
    const double n = norm(a);
    return (1.0 / n) * a;
  }

  ManifoldPoint exp_map(const ManifoldPoint& x, const TangentVector& v) const override {
    check_dim("exp_map", v.components.size(), 3);
    const double speed = norm(v.components);
    if (speed == 0.0) return x;
    const double ang = speed / r_;
    const Vec dir = (1.0 / speed) * v.components;
    return {normalized(std::cos(ang) * x.coords + std::sin(ang) * dir)};
  }

  TangentVector log_map(const ManifoldPoint& x, const ManifoldPoint& y) const override {
    check_dim("log_map", y.coords.size(), 3);
    const double c = dot(x.coords, y.coords);
    const Vec perp = y.coords - c * x.coords;
    const double s = norm(perp);
    const double ang = std::atan2(s, c);
    if (ang > kPi - kCutLocusTol) throw CutLocusError("sphere2 log_map: antipodal points");
    if (s == 0.0) return {x, Vec(3)};
    return {x, (r_ * ang / s) * perp};
  }

  double dist(const ManifoldPoint& x, const ManifoldPoint& y) const override {
    const double c = dot(x.coords, y.coords);
    const double s = norm(cross3(x.coords, y.coords));
    return r_ * std::atan2(s, c);
  }

  double injectivity_radius(const ManifoldPoint&) const override { return kPi * r_; }

  bool has_unique_geodesic(const ManifoldPoint& x, const ManifoldPoint& y) const override {
    const double c = dot(x.coords, y.coords);
    const double s = norm(cross3(x.coords, y.coords));
    return std::atan2(s, c) <= kPi - kCutLocusTol;
  }

  std::pair<ManifoldPoint, TangentVector> geodesic_eval(const ManifoldPoint& x,
                                                        const TangentVector& v,
                                                        double tau) const override {
    const double speed = norm(v.components);
    if (speed == 0.0) return {x, TangentVector{x, Vec(3)}};
    const double ang = speed / r_;  // total swept angle at tau = 1
    const Vec dir = (1.0 / speed) * v.components;
    const double a = ang * tau;
    ManifoldPoint p{normalized(std::cos(a) * x.coords + std::sin(a) * dir)};
    // velocity d/dtau of r * u(tau): norm == speed for all tau
    Vec w = speed * (std::cos(a) * dir - std::sin(a) * x.coords);
    return {p, TangentVector{p, w}};
  }

  double inner(const TangentVector& a, const TangentVector& b) const override {
    return dot(a.components, b.components);
  }

  std::vector<TangentVector> frame(const ManifoldPoint& x) const override {
    // pick the axis least aligned with x for a stable orthonormal pair
    std::size_t least = 0;
    for (std::size_t j = 1; j < 3; ++j) {
      if (std::abs(x.coords[j]) < std::abs(x.coords[least])) least = j;
    }
    Vec axis(3);
    axis[least] = 1.0;
    const Vec e1 = normalized(cross3(x.coords, axis));
    const Vec e2 = cross3(x.coords, e1);
    return {{x, e1}, {x, e2}};
  }

  // chart: spherical coordinates (theta polar in (0, pi), phi azimuthal)
  Vec chart_coords(const ManifoldPoint& x) const override {
    const double theta = std::acos(std::clamp(x.coords[2], -1.0, 1.0));
    const double phi = std::atan2(x.coords[1], x.coords[0]);
    return {theta, phi};
  }
  ManifoldPoint point_from_chart(const Vec& u) const override {
    const double st = std::sin(u[0]), ct = std::cos(u[0]);
    return {Vec{st * std::cos(u[1]), st * std::sin(u[1]), ct}};
  }
  TangentVector chart_tangent(const Vec& u, std::size_t j) const override {
    const double st = std::sin(u[0]), ct = std::cos(u[0]);
    const double cp = std::cos(u[1]), sp = std::sin(u[1]);
    ManifoldPoint p = point_from_chart(u);
    if (j == 0) return {p, r_ * Vec{ct * cp, ct * sp, -st}};
    return {p, r_ * Vec{-st * sp, st * cp, 0.0}};
  }
  void metric(const Vec& u, double* g) const override {
    const double st = std::sin(u[0]);
    g[0] = r_ * r_;
    g[1] = g[2] = 0.0;
    g[3] = r_ * r_ * st * st;
  }

  ManifoldPoint sample_point(std::uint64_t seed, std::uint64_t index) const override {
    // uniform on the sphere via normalized gaussian triple
    Vec u(3);
    for (std::size_t j = 0; j < 3; ++j) u[j] = normal_draw(seed, 0x5B4E7Eu, index, j);
    return {normalized(u)};
  }

  bool is_flat() const override { return false; }

  double radius() const { return r_; }

 private:
  double r_;
};

// ---------------------------------------------------------------------------
// Hyperbolic plane, upper half-plane chart (x, y), y > 0,
// metric (dx^2 + dy^2) / y^2.

class Hyperbolic2 final : public Manifold {
 public:
  std::string name() const override { return "hyperbolic2"; }
  std::size_t dim() const override { return 2; }
  std::size_t rep_dim() const override { return 2; }

  static void check_upper(const ManifoldPoint& p) {
    if (!(p.coords[1] > 0.0)) throw ContractViolation("hyperbolic2: y > 0 required");
  }

  ManifoldPoint exp_map(const ManifoldPoint& p, const TangentVector& v) const override {
    check_dim("exp_map", v.components.size(), 2);
    return geodesic_eval(p, v, 1.0).first;
  }

  TangentVector log_map(const ManifoldPoint& p, const ManifoldPoint& q) const override {
    check_dim("log_map", q.coords.size(), 2);
    check_upper(p);
    check_upper(q);
    const double xp = p.coords[0], yp = p.coords[1];
    const double xq = q.coords[0], yq = q.coords[1];
    const double d = dist(p, q);
    if (d == 0.0) return {p, Vec(2)};
    const double dx = xq - xp;
    if (std::abs(dx) < 1e-15 * (std::abs(xp) + std::abs(xq) + 1.0)) {
      // vertical geodesic
      const double s = std::log(yq / yp);
      return {p, Vec{0.0, yp * s}};
    }
    // semicircle centered at (c, 0) through p and q
    const double c = xp + (dx * dx + yq * yq - yp * yp) / (2.0 * dx);
    const double up = std::asinh((c - xp) / yp);
    const double uq = std::asinh((c - xq) / yq);
    const double R = std::hypot(c - xp, yp);
    // unit chart velocity at p in the direction of travel
    const double sgn = (uq > up) ? 1.0 : -1.0;
    const Vec w{sgn * (-yp * yp / R), sgn * (-yp * (c - xp) / R)};
    return {p, d * w};  // w has metric norm 1, so d*w has norm d
  }

  double dist(const ManifoldPoint& p, const ManifoldPoint& q) const override {
    const double dx = q.coords[0] - p.coords[0];
    const double dy = q.coords[1] - p.coords[1];
    const double s = (dx * dx + dy * dy) / (2.0 * p.coords[1] * q.coords[1]);
    // acosh(1+s), stable for small s
    return std::log1p(s + std::sqrt(s * (s + 2.0)));
  }

  double injectivity_radius(const ManifoldPoint&) const override { return kUnbounded; }

  bool has_unique_geodesic(const ManifoldPoint&, const ManifoldPoint&) const override {
    return true;
  }

  std::pair<ManifoldPoint, TangentVector> geodesic_eval(const ManifoldPoint& p,
                                                        const TangentVector& v,
                                                        double tau) const override {
    check_upper(p);
    const double xp = p.coords[0], yp = p.coords[1];
    const double vx = v.components[0], vy = v.components[1];
    const double speed = std::hypot(vx, vy) / yp;  // metric norm
    if (speed == 0.0) return {p, TangentVector{p, Vec(2)}};
    const double s = speed * tau;  // arc length travelled
    if (std::abs(vx) < 1e-15 * std::abs(vy)) {
      // vertical geodesic
      const double sgn = (vy > 0.0) ? 1.0 : -1.0;
      const double y1 = yp * std::exp(sgn * s);
      ManifoldPoint g{Vec{xp, y1}};
      return {g, TangentVector{g, Vec{0.0, sgn * speed * y1}}};
    }
    const double c = xp + yp * vy / vx;
    const double R = std::hypot(xp - c, yp);
    const double u0 = std::asinh((c - xp) / yp);
    const double sgn = (vx > 0.0) ? 1.0 : -1.0;
    const double u1 = u0 - sgn * s;
    const double y1 = R / std::cosh(u1);
    const double x1 = c - R * std::tanh(u1);
    ManifoldPoint g{Vec{x1, y1}};
    // unit chart velocity at g, scaled back to the constant metric speed
    const Vec w{sgn * y1 * y1 / R, sgn * y1 * (c - x1) / R};
    return {g, TangentVector{g, speed * w}};
  }

  double inner(const TangentVector& a, const TangentVector& b) const override {
    const double y = a.base.coords[1];
    return dot(a.components, b.components) / (y * y);
  }

  std::vector<TangentVector> frame(const ManifoldPoint& x) const override {
    const double y = x.coords[1];
    return {{x, Vec{y, 0.0}}, {x, Vec{0.0, y}}};
  }

  Vec chart_coords(const ManifoldPoint& x) const override { return x.coords; }
  ManifoldPoint point_from_chart(const Vec& u) const override {
    ManifoldPoint p{u};
    check_upper(p);
    return p;
  }
  TangentVector chart_tangent(const Vec& u, std::size_t j) const override {
    Vec e(2);
    e[j] = 1.0;
    return {{u}, e};
  }
  void metric(const Vec& u, double* g) const override {
    const double iy2 = 1.0 / (u[1] * u[1]);
    g[0] = iy2;
    g[1] = g[2] = 0.0;
    g[3] = iy2;
  }

  ManifoldPoint sample_point(std::uint64_t seed, std::uint64_t index) const override {
    const double x = 4.0 * uniform01(key_chain(seed, 0x842B01u, index, 0)) - 2.0;
    const double y = 0.5 + 1.5 * uniform01(key_chain(seed, 0x842B01u, index, 1));
    return {Vec{x, y}};
  }

  bool is_flat() const override { return false; }
};

}  // namespace

std::unique_ptr<Manifold> make_euclidean(std::size_t n) {
  return std::make_unique<Euclidean>(n);
}

std::unique_ptr<Manifold> make_torus(std::size_t n, const std::vector<double>& periods) {
  return std::make_unique<Torus>(n, periods);
}

std::unique_ptr<Manifold> make_sphere2(double radius) {
  return std::make_unique<Sphere2>(radius);
}

std::unique_ptr<Manifold> make_hyperbolic2() { return std::make_unique<Hyperbolic2>(); }

std::unique_ptr<Manifold> make_manifold(const std::string& key) {
  std::vector<std::string> parts;
  std::string token;
  std::istringstream is(key);
  while (std::getline(is, token, ':')) parts.push_back(token);
  if (parts.empty()) throw ContractViolation("manifold key is empty");
  const std::string& kind = parts[0];
  try {
    if (kind == "euclidean") {
      if (parts.size() != 2) throw ContractViolation("usage: euclidean:<n>");
      return make_euclidean(static_cast<std::size_t>(std::stoul(parts[1])));
    }
    if (kind == "torus") {
      if (parts.size() < 2) throw ContractViolation("usage: torus:<n>[:<period>...]");
      const std::size_t n = static_cast<std::size_t>(std::stoul(parts[1]));
      std::vector<double> periods(n, 2.0 * kPi);
      if (parts.size() > 2) {
        if (parts.size() == 3) {
          periods.assign(n, std::stod(parts[2]));
        } else if (parts.size() == 2 + n) {
          for (std::size_t j = 0; j < n; ++j) periods[j] = std::stod(parts[2 + j]);
        } else {
          throw ContractViolation("torus: give one period or one per dimension");
        }
      }
      return make_torus(n, periods);
    }
    if (kind == "sphere2") {
      if (parts.size() != 2) throw ContractViolation("usage: sphere2:<radius>");
      return make_sphere2(std::stod(parts[1]));
    }
    if (kind == "hyperbolic2") return make_hyperbolic2();
  } catch (const std::invalid_argument&) {
    throw ContractViolation("manifold key has malformed number: " + key);
  }
  throw ContractViolation("unknown manifold kind: " + kind +
                          " (valid: euclidean, torus, sphere2, hyperbolic2)");
}

}  // namespace geostoch
