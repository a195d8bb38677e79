#include "geostoch/calculus.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace geostoch {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<std::string> split(const std::string& key) {
  std::vector<std::string> parts;
  std::string token;
  std::istringstream is(key);
  while (std::getline(is, token, ':')) parts.push_back(token);
  return parts;
}

struct ChartMetric {
  std::size_t d;
  double g[Vec::kCapacity * Vec::kCapacity];
  double ginv[Vec::kCapacity * Vec::kCapacity];
  double sqrt_det;
};

ChartMetric chart_metric(const Manifold& M, const Vec& u) {
  ChartMetric cm;
  cm.d = M.dim();
  M.metric(u, cm.g);
  // Gauss-Jordan for the small metric matrix
  const std::size_t d = cm.d;
  double a[Vec::kCapacity][2 * Vec::kCapacity];
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      a[i][j] = cm.g[i * d + j];
      a[i][d + j] = (i == j) ? 1.0 : 0.0;
    }
  }
  double det = 1.0;
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < d; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (piv != col) {
      for (std::size_t j = 0; j < 2 * d; ++j) std::swap(a[piv][j], a[col][j]);
      det = -det;
    }
    det *= a[col][col];
    const double inv = 1.0 / a[col][col];
    for (std::size_t j = 0; j < 2 * d; ++j) a[col][j] *= inv;
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < 2 * d; ++j) a[r][j] -= f * a[col][j];
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) cm.ginv[i * d + j] = a[i][d + j];
  }
  cm.sqrt_det = std::sqrt(det);
  return cm;
}

/// sqrt(det g) * (g^{-1} alpha)_j at chart point u.
double flux_component(const Manifold& M, const OneForm& alpha, const Vec& u, std::size_t j) {
  const ChartMetric cm = chart_metric(M, u);
  const ManifoldPoint p = M.point_from_chart(u);
  double s = 0.0;
  for (std::size_t l = 0; l < cm.d; ++l) {
    const double al = alpha.eval(M, p, M.chart_tangent(u, l));
    s += cm.ginv[j * cm.d + l] * al;
  }
  return cm.sqrt_det * s;
}

double grad_flux_component(const Manifold& M, const ScalarField& f, const Vec& u,
                           std::size_t j, double h) {
  const ChartMetric cm = chart_metric(M, u);
  double s = 0.0;
  for (std::size_t l = 0; l < cm.d; ++l) {
    Vec up = u, um = u;
    up[l] += h;
    um[l] -= h;
    const double dl =
        (f.eval(M, M.point_from_chart(up)) - f.eval(M, M.point_from_chart(um))) / (2.0 * h);
    s += cm.ginv[j * cm.d + l] * dl;
  }
  return cm.sqrt_det * s;
}

}  // namespace

double codifferential_fd(const Manifold& M, const OneForm& alpha, const ManifoldPoint& x,
                         double h) {
  if (!(h > 0.0)) throw ContractViolation("codifferential_fd: h > 0 required");
  const Vec u = M.chart_coords(x);
  const ChartMetric cm = chart_metric(M, u);
  double div = 0.0;
  for (std::size_t j = 0; j < cm.d; ++j) {
    Vec up = u, um = u;
    up[j] += h;
    um[j] -= h;
    div += (flux_component(M, alpha, up, j) - flux_component(M, alpha, um, j)) / (2.0 * h);
  }
  return -div / cm.sqrt_det;
}

double laplace_beltrami_fd(const Manifold& M, const ScalarField& f, const ManifoldPoint& x,
                           double h) {
  if (!(h > 0.0)) throw ContractViolation("laplace_beltrami_fd: h > 0 required");
  const Vec u = M.chart_coords(x);
  const ChartMetric cm = chart_metric(M, u);
  double lap = 0.0;
  for (std::size_t j = 0; j < cm.d; ++j) {
    Vec up = u, um = u;
    up[j] += h;
    um[j] -= h;
    lap += (grad_flux_component(M, f, up, j, h) - grad_flux_component(M, f, um, j, h)) /
           (2.0 * h);
  }
  return lap / cm.sqrt_det;
}

OneForm differential(const ScalarField& f) {
  if (!f.gradient_analytic) {
    throw ContractViolation("differential: field '" + f.name + "' has no analytic gradient");
  }
  OneForm df;
  df.name = "d(" + f.name + ")";
  const auto grad = f.gradient_analytic;
  df.eval = [grad](const Manifold& M, const ManifoldPoint& x, const TangentVector& v) {
    return M.inner(grad(M, x), v);
  };
  if (f.laplacian_analytic) {
    const auto lap = f.laplacian_analytic;
    df.codifferential_analytic = [lap](const Manifold& M, const ManifoldPoint& x) {
      return -lap(M, x);  // d*(df) = -Delta f
    };
  }
  return df;
}

// ---------------------------------------------------------------------------
// Registries

OneForm make_form(const Manifold& M, const std::string& key) {
  const auto parts = split(key);
  const std::string& kind = parts.empty() ? key : parts[0];

  if (kind == "dx1") {
    // exact coordinate form, any flat manifold
    return {key,
            [](const Manifold&, const ManifoldPoint&, const TangentVector& v) {
              return v.components[0];
            },
            [](const Manifold&, const ManifoldPoint&) { return 0.0; }};
  }
  if (kind == "x_dy") {
    if (M.dim() < 2) throw ContractViolation("form x_dy needs dimension >= 2");
    return {key,
            [](const Manifold&, const ManifoldPoint& x, const TangentVector& v) {
              return x.coords[0] * v.components[1];
            },
            [](const Manifold&, const ManifoldPoint&) { return 0.0; }};
  }
  if (kind == "x_dx") {
    return {key,
            [](const Manifold&, const ManifoldPoint& x, const TangentVector& v) {
              return x.coords[0] * v.components[0];
            },
            [](const Manifold& M2, const ManifoldPoint& x) {
              if (M2.is_flat()) return -1.0;
              // upper half-plane, g = y^-2 I: d*(x dx) = -y^2
              return -x.coords[1] * x.coords[1];
            }};
  }
  if (kind == "bump_dy") {
    // alpha = exp(-(x^2+y^2)/2) dy on R^2; d*alpha = y exp(-(x^2+y^2)/2)
    if (M.dim() < 2) throw ContractViolation("form bump_dy needs dimension >= 2");
    return {key,
            [](const Manifold&, const ManifoldPoint& x, const TangentVector& v) {
              const double r2 = x.coords[0] * x.coords[0] + x.coords[1] * x.coords[1];
              return std::exp(-0.5 * r2) * v.components[1];
            },
            [](const Manifold&, const ManifoldPoint& x) {
              const double r2 = x.coords[0] * x.coords[0] + x.coords[1] * x.coords[1];
              return x.coords[1] * std::exp(-0.5 * r2);
            }};
  }
  if (kind == "a_dtheta") {
    const double a = parts.size() > 1 ? std::stod(parts[1]) : 1.0;
    return {key,
            [a](const Manifold&, const ManifoldPoint&, const TangentVector& v) {
              return a * v.components[0];
            },
            [](const Manifold&, const ManifoldPoint&) { return 0.0; }};
  }
  if (kind == "z_dphi") {
    // alpha_p(v) = p_z * (e_z x p) . v on S^2: co-closed (d* = 0), smooth
    // everywhere including the poles.
    if (M.rep_dim() != 3) throw ContractViolation("form z_dphi lives on sphere2");
    return {key,
            [](const Manifold&, const ManifoldPoint& p, const TangentVector& v) {
              const Vec az = cross3(Vec{0.0, 0.0, 1.0}, p.coords);
              return p.coords[2] * dot(az, v.components);
            },
            [](const Manifold&, const ManifoldPoint&) { return 0.0; }};
  }
  if (kind == "zero") {
    return {key,
            [](const Manifold&, const ManifoldPoint&, const TangentVector&) { return 0.0; },
            [](const Manifold&, const ManifoldPoint&) { return 0.0; }};
  }
  if (kind == "d") {
    // differential of a registered field: "d:<field-key>"
    const auto pos = key.find(':');
    if (pos == std::string::npos) throw ContractViolation("usage: d:<field-key>");
    return differential(make_field(M, key.substr(pos + 1)));
  }
  throw ContractViolation("unknown form key: " + key + " (valid: " + list_forms() + ")");
}

ScalarField make_field(const Manifold& M, const std::string& key) {
  const auto parts = split(key);
  const std::string& kind = parts.empty() ? key : parts[0];

  if (kind == "constant") {
    const double c = parts.size() > 1 ? std::stod(parts[1]) : 1.0;
    return {key, [c](const Manifold&, const ManifoldPoint&) { return c; },
            [](const Manifold& M2, const ManifoldPoint& x) {
              TangentVector z{x, Vec(M2.rep_dim())};
              return z;
            },
            [](const Manifold&, const ManifoldPoint&) { return 0.0; }};
  }
  if (kind == "linear") {
    // f = sum of chart coordinates (euclidean only: not periodic)
    return {key,
            [](const Manifold&, const ManifoldPoint& x) {
              double s = 0.0;
              for (std::size_t j = 0; j < x.coords.size(); ++j) s += x.coords[j];
              return s;
            },
            [](const Manifold& M2, const ManifoldPoint& x) {
              return TangentVector{x, Vec(M2.rep_dim(), 1.0)};
            },
            [](const Manifold&, const ManifoldPoint&) { return 0.0; }};
  }
  if (kind == "x2") {
    // f = (first coordinate)^2 on euclidean
    return {key,
            [](const Manifold&, const ManifoldPoint& x) { return x.coords[0] * x.coords[0]; },
            [](const Manifold& M2, const ManifoldPoint& x) {
              Vec g(M2.rep_dim());
              g[0] = 2.0 * x.coords[0];
              return TangentVector{x, g};
            },
            [](const Manifold&, const ManifoldPoint&) { return 2.0; }};
  }
  if (kind == "quadratic") {
    // f = |x|^2 on euclidean, Delta f = 2n
    return {key,
            [](const Manifold&, const ManifoldPoint& x) { return dot(x.coords, x.coords); },
            [](const Manifold&, const ManifoldPoint& x) {
              return TangentVector{x, 2.0 * x.coords};
            },
            [](const Manifold& M2, const ManifoldPoint&) { return 2.0 * M2.dim(); }};
  }
  if (kind == "gauss") {
    // f = exp(-|x|^2/2) on R^2
    return {key,
            [](const Manifold&, const ManifoldPoint& x) {
              return std::exp(-0.5 * dot(x.coords, x.coords));
            },
            [](const Manifold&, const ManifoldPoint& x) {
              const double f = std::exp(-0.5 * dot(x.coords, x.coords));
              return TangentVector{x, -f * x.coords};
            },
            [](const Manifold& M2, const ManifoldPoint& x) {
              const double r2 = dot(x.coords, x.coords);
              return std::exp(-0.5 * r2) * (r2 - static_cast<double>(M2.dim()));
            }};
  }
  if (kind == "sincos") {
    // f = sin(theta_1) + cos(theta_2) (second term only when n >= 2); periodic
    return {key,
            [](const Manifold&, const ManifoldPoint& x) {
              double s = std::sin(x.coords[0]);
              if (x.coords.size() >= 2) s += std::cos(x.coords[1]);
              return s;
            },
            [](const Manifold& M2, const ManifoldPoint& x) {
              Vec g(M2.rep_dim());
              g[0] = std::cos(x.coords[0]);
              if (M2.rep_dim() >= 2) g[1] = -std::sin(x.coords[1]);
              return TangentVector{x, g};
            },
            [](const Manifold&, const ManifoldPoint& x) {
              double s = -std::sin(x.coords[0]);
              if (x.coords.size() >= 2) s -= std::cos(x.coords[1]);
              return s;
            }};
  }
  if (kind == "cos1") {
    // f = cos(theta_1); periodic, used as a potential on the circle
    return {key,
            [](const Manifold&, const ManifoldPoint& x) { return std::cos(x.coords[0]); },
            [](const Manifold& M2, const ManifoldPoint& x) {
              Vec g(M2.rep_dim());
              g[0] = -std::sin(x.coords[0]);
              return TangentVector{x, g};
            },
            [](const Manifold&, const ManifoldPoint& x) { return -std::cos(x.coords[0]); }};
  }
  if (kind == "sphere_x") {
    // f = first embedded coordinate (times radius); l=1 spherical harmonic
    if (M.rep_dim() != 3) throw ContractViolation("field sphere_x lives on sphere2");
    const double r = M.injectivity_radius(ManifoldPoint{Vec{0.0, 0.0, 1.0}}) / kPi;
    return {key,
            [r](const Manifold&, const ManifoldPoint& p) { return r * p.coords[0]; },
            [r](const Manifold&, const ManifoldPoint& p) {
              Vec e{1.0, 0.0, 0.0};
              return TangentVector{p, e - p.coords[0] * p.coords};
            },
            [r](const Manifold&, const ManifoldPoint& p) {
              return -2.0 * p.coords[0] / r;
            }};
  }
  if (kind == "cos_polar") {
    // f = cos(polar angle) = p_z; Delta f = -2 p_z / r^2
    if (M.rep_dim() != 3) throw ContractViolation("field cos_polar lives on sphere2");
    const double r = M.injectivity_radius(ManifoldPoint{Vec{0.0, 0.0, 1.0}}) / kPi;
    return {key,
            [](const Manifold&, const ManifoldPoint& p) { return p.coords[2]; },
            [r](const Manifold&, const ManifoldPoint& p) {
              Vec e{0.0, 0.0, 1.0};
              return TangentVector{p, (1.0 / r) * (e - p.coords[2] * p.coords)};
            },
            [r](const Manifold&, const ManifoldPoint& p) {
              return -2.0 * p.coords[2] / (r * r);
            }};
  }
  if (kind == "log_y") {
    if (M.name() != "hyperbolic2") throw ContractViolation("field log_y lives on hyperbolic2");
    return {key,
            [](const Manifold&, const ManifoldPoint& p) { return std::log(p.coords[1]); },
            [](const Manifold&, const ManifoldPoint& p) {
              return TangentVector{p, Vec{0.0, p.coords[1]}};
            },
            [](const Manifold&, const ManifoldPoint&) { return -1.0; }};
  }
  throw ContractViolation("unknown field key: " + key + " (valid: " + list_fields() + ")");
}

Curve make_curve(const Manifold& M, const std::string& key) {
  const auto parts = split(key);
  const std::string& kind = parts.empty() ? key : parts[0];

  if (kind == "circle_xy") {
    if (M.dim() < 2 || !M.is_flat())
      throw ContractViolation("curve circle_xy lives on euclidean:2");
    const std::size_t n = M.rep_dim();
    Curve c;
    c.name = key;
    c.t_total = 2.0 * kPi;
    c.pos = [n](double s) {
      Vec u(n);
      u[0] = std::cos(s);
      u[1] = std::sin(s);
      return ManifoldPoint{u};
    };
    c.vel = [n, pos = c.pos](double s) {
      Vec v(n);
      v[0] = -std::sin(s);
      v[1] = std::cos(s);
      return TangentVector{pos(s), v};
    };
    return c;
  }
  if (kind == "great_circle") {
    if (M.rep_dim() != 3) throw ContractViolation("curve great_circle lives on sphere2");
    const double psi = parts.size() > 1 ? std::stod(parts[1]) : 0.6;
    const double r = M.injectivity_radius(ManifoldPoint{Vec{0.0, 0.0, 1.0}}) / kPi;
    const Vec u{1.0, 0.0, 0.0};
    const Vec w{0.0, std::cos(psi), std::sin(psi)};
    Curve c;
    c.name = key;
    c.t_total = 2.0 * kPi;
    c.pos = [u, w](double s) {
      return ManifoldPoint{std::cos(s) * u + std::sin(s) * w};
    };
    c.vel = [u, w, r](double s) {
      ManifoldPoint p{std::cos(s) * u + std::sin(s) * w};
      return TangentVector{p, r * (std::cos(s) * w - std::sin(s) * u)};
    };
    return c;
  }
  if (kind == "segment") {
    // straight line from 0 to 1 on euclidean:1 over [0,1]
    Curve c;
    c.name = key;
    c.t_total = 1.0;
    c.pos = [](double s) { return ManifoldPoint{Vec{s}}; };
    c.vel = [](double s) { return TangentVector{ManifoldPoint{Vec{s}}, Vec{1.0}}; };
    return c;
  }
  throw ContractViolation("unknown curve key: " + key + " (valid: " + list_curves() + ")");
}

std::string list_forms() {
  return "dx1, x_dy, x_dx, bump_dy, a_dtheta:<a>, z_dphi, zero, d:<field>";
}
std::string list_fields() {
  return "constant:<c>, linear, x2, quadratic, gauss, sincos, cos1, sphere_x, cos_polar, "
         "log_y";
}
std::string list_curves() { return "circle_xy, great_circle:<psi>, segment"; }

}  // namespace geostoch
