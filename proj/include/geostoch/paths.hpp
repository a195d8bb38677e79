#pragma once

#include <cstdint>
#include <vector>

#include "geostoch/manifold.hpp"

namespace geostoch {

/// Brownian path sampled at dyadic times j*t/2^k. Increment variance is
/// 2h per coordinate (generator Delta, heat operator dt - Delta), twice
/// what libraries using dt - Delta/2 produce.
struct DyadicPath {
  const Manifold* manifold = nullptr;
  double t_total = 0.0;
  int level = 0;  // k
  std::vector<ManifoldPoint> points;  // 2^k + 1 entries
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;
};

DyadicPath sample_bm(const Manifold& M, const ManifoldPoint& x0, double t, int k,
                     std::uint64_t seed, std::uint64_t path_index);

/// N paths sharing (manifold, x0, t, k). Paths are regenerated on demand
/// from the counter-based RNG — bit-exact and cheap — so an ensemble of
/// 10^4 level-12 paths costs no memory.
struct PathEnsemble {
  const Manifold* manifold = nullptr;
  ManifoldPoint x0;
  double t_total = 0.0;
  int level = 0;
  std::uint64_t seed = 0;
  std::size_t count = 0;

  DyadicPath path(std::size_t i) const {
    return sample_bm(*manifold, x0, t_total, level, seed, i);
  }
};

inline PathEnsemble make_ensemble(const Manifold& M, const ManifoldPoint& x0, double t,
                                  int k, std::uint64_t seed, std::size_t n_paths) {
  return PathEnsemble{&M, x0, t, k, seed, n_paths};
}

/// Keeps every 2^(k - k_coarse)-th point of the same curve.
DyadicPath subsample(const DyadicPath& path, int k_coarse);

/// Brownian-bridge midpoint insertion up to level k_fine; exact in law on
/// flat manifolds, and subsample(result, path.level) == path bit-exact.
DyadicPath bridge_refine(const DyadicPath& path, int k_fine, std::uint64_t seed);

/// CSV dump: path_index, j, time, coord_0, ..., coord_{d-1}.
void dump_paths_csv(const PathEnsemble& ensemble, const std::string& filename);

}  // namespace geostoch
