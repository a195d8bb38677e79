#include "geostoch/semigroup.hpp"

#include <cmath>
#include <stdexcept>

namespace geostoch {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double Grid1D::dist(int j, int k) const {
  double d = std::abs(node(j) - node(k));
  if (domain == GridDomain::Circle) d = std::min(d, extent - d);
  return d;
}

double Grid1D::displacement(int j, int k, bool* unique) const {
  if (unique) *unique = true;
  double d = node(k) - node(j);
  if (domain == GridDomain::Circle) {
    d = std::remainder(d, extent);
    if (std::abs(std::abs(d) - 0.5 * extent) < 1e-12 * extent) {
      if (unique) *unique = false;
      return 0.0;
    }
  }
  return d;
}

double Grid1D::injectivity_bound(int j) const {
  if (domain == GridDomain::Circle) return 0.5 * extent;
  const double x = node(j);
  return std::min(x, extent - x);
}

Grid1D make_circle_grid(int n, double period) {
  if (n < 8) throw ContractViolation("make_circle_grid: n >= 8 required");
  Grid1D g;
  g.domain = GridDomain::Circle;
  g.extent = period;
  g.n = n;
  g.dx = period / n;
  return g;
}

Grid1D make_interval_grid(int n, double length) {
  if (n < 8) throw ContractViolation("make_interval_grid: n >= 8 required");
  Grid1D g;
  g.domain = GridDomain::Interval;
  g.extent = length;
  g.n = n;
  g.dx = length / (n + 1);
  return g;
}

GridForm make_grid_form(const std::string& key, const Grid1D& grid) {
  GridForm f;
  f.name = key;
  if (key == "zero") {
    f.a = [](double) { return 0.0; };
    f.da = [](double) { return 0.0; };
    return f;
  }
  const auto colon = key.find(':');
  const std::string head = key.substr(0, colon);
  const double arg = colon == std::string::npos ? 0.0 : std::stod(key.substr(colon + 1));
  if (head == "const") {
    f.a = [arg](double) { return arg; };
    f.da = [](double) { return 0.0; };
    return f;
  }
  if (head == "cos") {
    const double omega = kTwoPi / grid.extent;
    f.a = [arg, omega](double x) { return arg * std::cos(omega * x); };
    f.da = [arg, omega](double x) { return -arg * omega * std::sin(omega * x); };
    return f;
  }
  throw std::invalid_argument("make_grid_form: unknown key '" + key + "'");
}

Eigen::MatrixXcd build_magnetic_h(const Grid1D& grid, const std::vector<double>& alpha_mid,
                                  const std::vector<double>& v_values) {
  const int n = grid.n;
  const int links = grid.domain == GridDomain::Circle ? n : n + 1;
  if (static_cast<int>(alpha_mid.size()) != links ||
      static_cast<int>(v_values.size()) != n) {
    throw ContractViolation("build_magnetic_h: coefficient array length mismatch");
  }
  const std::complex<double> i1(0.0, 1.0);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(links, n);
  const double inv = 1.0 / grid.dx;
  for (int l = 0; l < links; ++l) {
    const std::complex<double> hop = std::exp(i1 * alpha_mid[l] * grid.dx) * inv;
    if (grid.domain == GridDomain::Circle) {
      d(l, l) = -inv;
      d(l, (l + 1) % n) = hop;
    } else {
      // link l joins node l-1 to node l; indices outside [0,n) are the
      // Dirichlet boundary and contribute nothing
      if (l >= 1) d(l, l - 1) = -inv;
      if (l <= n - 1) d(l, l) = hop;
    }
  }
  Eigen::MatrixXcd h = d.adjoint() * d;
  for (int j = 0; j < n; ++j) h(j, j) += v_values[j];
  const double herm = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12) throw ContractViolation("build_magnetic_h: H not Hermitian");
  return h;
}

Eigen::MatrixXcd build_magnetic_h(const Grid1D& grid, const GridForm& alpha,
                                  const GridForm& v) {
  const int links = grid.domain == GridDomain::Circle ? grid.n : grid.n + 1;
  std::vector<double> a_mid(links);
  for (int l = 0; l < links; ++l) {
    const double mid = grid.domain == GridDomain::Circle ? (l + 0.5) * grid.dx
                                                         : (l + 0.5) * grid.dx;
    a_mid[l] = alpha.a(mid);
  }
  std::vector<double> vv(grid.n);
  for (int j = 0; j < grid.n; ++j) vv[j] = v.a(grid.node(j));
  return build_magnetic_h(grid, a_mid, vv);
}

KernelMatrix heat_kernel(const Grid1D& grid, const Eigen::MatrixXcd& h, double t,
                         KernelTag tag) {
  if (t < 0.0) throw ContractViolation("heat_kernel: t >= 0 required");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("heat_kernel: eigensolver failed");
  const Eigen::VectorXd decay = (-t * es.eigenvalues().array()).exp();
  KernelMatrix k;
  k.entries = es.eigenvectors() * decay.asDiagonal() *
              es.eigenvectors().adjoint() / grid.dx;
  k.t = t;
  k.tag = tag;
  return k;
}

double diamagnetic_check(const KernelMatrix& h_alpha, const KernelMatrix& h_free) {
  if (h_alpha.entries.rows() != h_free.entries.rows() ||
      h_alpha.entries.cols() != h_free.entries.cols()) {
    throw ContractViolation("diamagnetic_check: shape mismatch");
  }
  return (h_alpha.entries.cwiseAbs() - h_free.entries.real()).maxCoeff();
}

const std::vector<DiamagneticCase>& diamagnetic_cases() {
  static const std::vector<DiamagneticCase> cases = [] {
    const Grid1D circle = make_circle_grid(128);
    const Grid1D interval = make_interval_grid(96, 1.0);
    return std::vector<DiamagneticCase>{
        {"circle/alpha0/V0/t0.3", circle, "zero", "zero", 0.3},
        {"circle/const0.7/V0/t0.3", circle, "const:0.7", "zero", 0.3},
        {"circle/const0.5/Vcos/t0.5", circle, "const:0.5", "cos:1.0", 0.5},
        {"circle/cos0.8/V0/t0.4", circle, "cos:0.8", "zero", 0.4},
        {"interval/cos1.0/V0/t0.2", interval, "cos:1.0", "zero", 0.2},
        {"interval/cos0.6/Vcos/t0.4", interval, "cos:0.6", "cos:0.5", 0.4},
    };
  }();
  return cases;
}

double run_diamagnetic_case(const DiamagneticCase& c) {
  const GridForm alpha = make_grid_form(c.alpha_key, c.grid);
  const GridForm v = make_grid_form(c.v_key, c.grid);
  const GridForm zero = make_grid_form("zero", c.grid);
  const KernelMatrix h_a =
      heat_kernel(c.grid, build_magnetic_h(c.grid, alpha, v), c.t, KernelTag::Magnetic);
  const KernelMatrix h_0 =
      heat_kernel(c.grid, build_magnetic_h(c.grid, zero, v), c.t, KernelTag::Free);
  return diamagnetic_check(h_a, h_0);
}

double kappa_bump(double s) {
  if (s <= 1.0 / 3.0) return 1.0;
  if (s >= 0.5) return 0.0;
  const double u = (s - 1.0 / 3.0) * 6.0;  // [1/3,1/2] -> [0,1]
  return 1.0 - u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

namespace {

// I_P of a(x)dx along the straight/shorter-arc geodesic from x to x+delta
double i_p_line(const IntervalMeasure& P, const GridForm& alpha, double x, double delta) {
  double avg = 0.0;
  for (const auto& [tau, w] : P.atoms) avg += w * alpha.a(x + tau * delta);
  if (P.lebesgue_weight > 0.0) {
    double q = 0.0;
    for (const auto& [tau, w] : gauss_legendre01(P.quadrature_order)) {
      q += w * alpha.a(x + tau * delta);
    }
    avg += P.lebesgue_weight * q;
  }
  return delta * avg;
}

}  // namespace

KernelMatrix chernoff_step(const Grid1D& grid, const GridForm& alpha,
                           const IntervalMeasure& P, double t_step) {
  if (t_step <= 0.0) throw ContractViolation("chernoff_step: t_step > 0 required");
  const GridForm zero_v = make_grid_form("zero", grid);
  KernelMatrix h =
      heat_kernel(grid, build_magnetic_h(grid, alpha, zero_v), t_step, KernelTag::ChernoffStep);
  const double sk = skew(P);
  const std::complex<double> i1(0.0, 1.0);
  for (int j = 0; j < grid.n; ++j) {
    const double x = grid.node(j);
    const double r = 0.9 * grid.injectivity_bound(j);
    const double dstar_x = -alpha.da(x);
    for (int k = 0; k < grid.n; ++k) {
      const double d = grid.dist(j, k);
      const double chi = r > 0.0 ? kappa_bump(d * d / (r * r)) : 0.0;
      if (chi == 0.0) {
        h.entries(j, k) = 0.0;
        continue;
      }
      bool unique = true;
      const double delta = grid.displacement(j, k, &unique);
      const double phase = unique ? i_p_line(P, alpha, x, delta) : 0.0;
      h.entries(j, k) *= chi * std::exp(-i1 * (phase + t_step * dstar_x * sk));
    }
  }
  return h;
}

double sup_operator_norm(const Grid1D& grid, const KernelMatrix& kernel) {
  return kernel.entries.cwiseAbs().rowwise().sum().maxCoeff() * grid.dx;
}

ChernoffReport chernoff_power_test(const Grid1D& grid, const GridForm& alpha,
                                   const IntervalMeasure& P, double t,
                                   const std::vector<int>& k_list) {
  const GridForm zero = make_grid_form("zero", grid);
  const KernelMatrix free_kernel =
      heat_kernel(grid, build_magnetic_h(grid, zero, zero), t, KernelTag::Free);
  const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(grid.n);
  const Eigen::VectorXcd ref = free_kernel.entries * ones * grid.dx;
  const int lo = grid.domain == GridDomain::Interval ? 1 : 0;
  const int hi = grid.domain == GridDomain::Interval ? grid.n - 1 : grid.n;

  ChernoffReport rep;
  for (int k : k_list) {
    const double t_step = t / static_cast<double>(std::int64_t{1} << k);
    Eigen::MatrixXcd op = chernoff_step(grid, alpha, P, t_step).entries * grid.dx;
    for (int s = 0; s < k; ++s) op = op * op;  // op^(2^k) by repeated squaring
    const Eigen::VectorXcd v = op * ones;
    double err = 0.0;
    for (int j = lo; j < hi; ++j) err = std::max(err, std::abs(v(j) - ref(j)));
    rep.levels.push_back(k);
    rep.sup_error.push_back(err);
  }
  rep.monotone = true;
  for (std::size_t i = 1; i < rep.sup_error.size(); ++i) {
    if (rep.sup_error[i] >= rep.sup_error[i - 1]) rep.monotone = false;
  }
  rep.terminal_error = rep.sup_error.empty() ? 0.0 : rep.sup_error.back();
  return rep;
}

}  // namespace geostoch
