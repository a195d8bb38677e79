#pragma once

#include <string>
#include <vector>

#include "geostoch/calculus.hpp"
#include "geostoch/manifold.hpp"

namespace geostoch {

/// Borel probability on [0,1]: atoms plus an optional Lebesgue component.
/// The quadrature order is part of the value so results reproduce
/// bit-for-bit.
struct IntervalMeasure {
  std::string name;
  std::vector<std::pair<double, double>> atoms;  // (location tau, weight w)
  double lebesgue_weight = 0.0;
  int quadrature_order = 16;

  void validate() const;
};

IntervalMeasure dirac(double tau);
IntervalMeasure lebesgue(int quadrature_order = 16);

/// Config syntax: "dirac:0.25", "lebesgue", "mix:0.5@0+0.5@1".
IntervalMeasure make_measure(const std::string& key, int quadrature_order = 16);

double first_moment(const IntervalMeasure& P);
double skew(const IntervalMeasure& P);  // = 2*M1(P) - 1

/// Gauss-Legendre nodes/weights on [0,1]; cached per order.
const std::vector<std::pair<double, double>>& gauss_legendre01(int order);

/// P-weighted average of alpha along the minimizing geodesic from x to y;
/// 0 when the unique-minimizing-geodesic predicate fails (total function).
double i_p(const IntervalMeasure& P, const OneForm& alpha, const Manifold& M,
           const ManifoldPoint& x, const ManifoldPoint& y);

}  // namespace geostoch
