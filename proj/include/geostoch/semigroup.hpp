#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geostoch/manifold.hpp"
#include "geostoch/measure.hpp"

namespace geostoch {

enum class GridDomain { Circle, Interval };

// 1-D grid: circle of given period (n nodes, periodic) or interval of given
// length with Dirichlet ends (n interior nodes).
struct Grid1D {
  GridDomain domain = GridDomain::Circle;
  double extent = 0.0;  // period or length
  int n = 0;
  double dx = 0.0;

  double node(int j) const {
    return domain == GridDomain::Circle ? j * dx : (j + 1) * dx;
  }
  // shorter-arc distance on the circle, straight-line on the interval
  double dist(int j, int k) const;
  // signed displacement from node j to node k along the shorter geodesic;
  // on the circle exactly antipodal pairs have no unique geodesic
  double displacement(int j, int k, bool* unique = nullptr) const;
  // distance to the nearest obstruction: period/2 on the circle, the nearer
  // boundary on the interval
  double injectivity_bound(int j) const;
};

Grid1D make_circle_grid(int n, double period = 6.283185307179586476925286766559);
Grid1D make_interval_grid(int n, double length);

// scalar coefficient on the grid domain (used for both the 1-form component
// a(x) dx and the potential V)
struct GridForm {
  std::string name;
  std::function<double(double)> a;
  std::function<double(double)> da;
};

// keys: zero | const:<c> | cos:<amp>  (cos is one full period of the domain)
GridForm make_grid_form(const std::string& key, const Grid1D& grid);

enum class KernelTag { Free, Magnetic, ChernoffStep };

struct KernelMatrix {
  Eigen::MatrixXcd entries;
  double t = 0.0;
  KernelTag tag = KernelTag::Free;
};

// H = D†D + diag(V) where D is the forward difference with a Peierls link
// phase e^{i a(mid) dx} standing in for the covariant derivative d + i a dx.
Eigen::MatrixXcd build_magnetic_h(const Grid1D& grid, const std::vector<double>& alpha_mid,
                                  const std::vector<double>& v_values);
Eigen::MatrixXcd build_magnetic_h(const Grid1D& grid, const GridForm& alpha,
                                  const GridForm& v);

// e^{-tH}/dx via Hermitian eigendecomposition; t < 0 is a contract violation
KernelMatrix heat_kernel(const Grid1D& grid, const Eigen::MatrixXcd& h, double t,
                         KernelTag tag = KernelTag::Magnetic);

// max over entries of |h_alpha| - Re h_free
double diamagnetic_check(const KernelMatrix& h_alpha, const KernelMatrix& h_free);

struct DiamagneticCase {
  std::string label;
  Grid1D grid;
  std::string alpha_key;
  std::string v_key;
  double t;
};
const std::vector<DiamagneticCase>& diamagnetic_cases();
double run_diamagnetic_case(const DiamagneticCase& c);

// C^2 cut-off profile: 1 on [0,1/3], 0 on [1/2,inf), quintic spline between
double kappa_bump(double s);

// R_{alpha,t}: heat kernel of the magnetic H times the cut-off
// chi(x,y) = kappa(d(x,y)^2 / (0.9 inj(x))^2) and the phase
// exp(-i I_P(alpha)(x,y) - i t (d*alpha)(x) skew(P)); d*alpha = -a'(x) in 1-D
KernelMatrix chernoff_step(const Grid1D& grid, const GridForm& alpha,
                           const IntervalMeasure& P, double t_step);

struct ChernoffReport {
  std::vector<int> levels;
  std::vector<double> sup_error;
  bool monotone = false;
  double terminal_error = 0.0;
};

// sup-norm error of (R_{alpha,t/2^k})^{2^k} 1 against e^{-tH_free} 1 for each
// k; on the interval the two boundary-adjacent nodes are excluded from the sup
ChernoffReport chernoff_power_test(const Grid1D& grid, const GridForm& alpha,
                                   const IntervalMeasure& P, double t,
                                   const std::vector<int>& k_list);

// max_j sum_k |entries(j,k)| dx  (contraction check)
double sup_operator_norm(const Grid1D& grid, const KernelMatrix& kernel);

}  // namespace geostoch
