#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>

namespace geostoch {

/// Fixed-capacity coordinate vector. All registered manifolds live in
/// dimension <= 3 (sphere points are embedded 3-vectors); the capacity
/// leaves headroom for product manifolds.
class Vec {
 public:
  static constexpr std::size_t kCapacity = 8;

  Vec() = default;
  explicit Vec(std::size_t n, double fill = 0.0) : n_(n) {
    if (n > kCapacity) throw std::invalid_argument("Vec: dimension too large");
    std::fill(d_, d_ + n_, fill);
  }
  Vec(std::initializer_list<double> xs) : n_(xs.size()) {
    if (n_ > kCapacity) throw std::invalid_argument("Vec: dimension too large");
    std::copy(xs.begin(), xs.end(), d_);
  }

  std::size_t size() const { return n_; }
  double operator[](std::size_t i) const { return d_[i]; }
  double& operator[](std::size_t i) { return d_[i]; }
  const double* data() const { return d_; }
  double* data() { return d_; }

  Vec& operator+=(const Vec& o) {
    for (std::size_t i = 0; i < n_; ++i) d_[i] += o.d_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (std::size_t i = 0; i < n_; ++i) d_[i] -= o.d_[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (std::size_t i = 0; i < n_; ++i) d_[i] *= s;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator*(Vec a, double s) { return a *= s; }

  friend double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.n_; ++i) s += a.d_[i] * b.d_[i];
    return s;
  }
  friend double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

  friend bool operator==(const Vec& a, const Vec& b) {
    if (a.n_ != b.n_) return false;
    return std::equal(a.d_, a.d_ + a.n_, b.d_);
  }

 private:
  double d_[kCapacity] = {};
  std::size_t n_ = 0;
};

inline Vec cross3(const Vec& a, const Vec& b) {
  return Vec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
             a[0] * b[1] - a[1] * b[0]};
}

}  // namespace geostoch
