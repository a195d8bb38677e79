#include "geostoch/measure.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace geostoch {

void IntervalMeasure::validate() const {
  double total = lebesgue_weight;
  if (lebesgue_weight < 0.0) throw ContractViolation("measure: lebesgue weight < 0");
  for (const auto& [tau, w] : atoms) {
    if (tau < 0.0 || tau > 1.0) throw ContractViolation("measure: atom outside [0,1]");
    if (!(w > 0.0)) throw ContractViolation("measure: atom weight must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ContractViolation("measure: total mass != 1");
  if (quadrature_order < 2) throw ContractViolation("measure: quadrature order >= 2");
}

IntervalMeasure dirac(double tau) {
  std::ostringstream os;
  os << "dirac:" << tau;
  return {os.str(), {{tau, 1.0}}, 0.0, 16};
}

IntervalMeasure lebesgue(int quadrature_order) {
  return {"lebesgue", {}, 1.0, quadrature_order};
}

IntervalMeasure make_measure(const std::string& key, int quadrature_order) {
  IntervalMeasure P;
  P.name = key;
  P.quadrature_order = quadrature_order;
  if (key == "lebesgue") {
    P.lebesgue_weight = 1.0;
  } else if (key.rfind("dirac:", 0) == 0) {
    P.atoms.push_back({std::stod(key.substr(6)), 1.0});
  } else if (key.rfind("mix:", 0) == 0) {
    std::istringstream is(key.substr(4));
    std::string term;
    while (std::getline(is, term, '+')) {
      const auto at = term.find('@');
      if (at == std::string::npos)
        throw ContractViolation("measure mix term must be w@tau: " + term);
      const double w = std::stod(term.substr(0, at));
      const std::string where = term.substr(at + 1);
      if (where == "lebesgue") {
        P.lebesgue_weight += w;
      } else {
        P.atoms.push_back({std::stod(where), w});
      }
    }
  } else {
    throw ContractViolation("unknown measure key: " + key +
                            " (valid: dirac:<tau>, lebesgue, mix:w@tau+...)");
  }
  P.validate();
  return P;
}

double first_moment(const IntervalMeasure& P) {
  double m = 0.5 * P.lebesgue_weight;
  for (const auto& [tau, w] : P.atoms) m += w * tau;
  return m;
}

double skew(const IntervalMeasure& P) { return 2.0 * first_moment(P) - 1.0; }

const std::vector<std::pair<double, double>>& gauss_legendre01(int order) {
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  // Newton iteration on Legendre roots over [-1,1], then map to [0,1].
  std::vector<std::pair<double, double>> nw(order);
  const int n = order;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    nw[n - 1 - i] = {0.5 * (x + 1.0), 0.5 * w};
  }
  return cache.emplace(order, std::move(nw)).first->second;
}

double i_p(const IntervalMeasure& P, const OneForm& alpha, const Manifold& M,
           const ManifoldPoint& x, const ManifoldPoint& y) {
  if (!M.has_unique_geodesic(x, y)) return 0.0;  // the "otherwise -> 0" branch
  const TangentVector v = M.log_map(x, y);
  double s = 0.0;
  for (const auto& [tau, w] : P.atoms) {
    const auto [p, vel] = M.geodesic_eval(x, v, tau);
    s += w * alpha.eval(M, p, vel);
  }
  if (P.lebesgue_weight > 0.0) {
    double q = 0.0;
    for (const auto& [node, w] : gauss_legendre01(P.quadrature_order)) {
      const auto [p, vel] = M.geodesic_eval(x, v, node);
      q += w * alpha.eval(M, p, vel);
    }
    s += P.lebesgue_weight * q;
  }
  return s;
}

}  // namespace geostoch
