#include "geostoch/paths.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "geostoch/parallel.hpp"
#include "geostoch/rng.hpp"

namespace geostoch {

namespace {

// Draw streams are separated so that base sampling and bridge refinement
// never collide: stream = tag ^ path_index-chain.
constexpr std::uint64_t kBaseStream = 0xB401D5;
constexpr std::uint64_t kBridgeStream = 0xB71D6E;

}  // namespace

DyadicPath sample_bm(const Manifold& M, const ManifoldPoint& x0, double t, int k,
                     std::uint64_t seed, std::uint64_t path_index) {
  if (!(t > 0.0)) throw ContractViolation("sample_bm: t > 0 required");
  if (k < 0) throw ContractViolation("sample_bm: k >= 0 required");
  const std::size_t steps = std::size_t{1} << k;
  const double h = t / static_cast<double>(steps);
  const double sd = std::sqrt(2.0 * h);  // variance 2h per coordinate
  const std::size_t d = M.dim();

  DyadicPath path;
  path.manifold = &M;
  path.t_total = t;
  path.level = k;
  path.seed = seed;
  path.path_index = path_index;
  path.points.reserve(steps + 1);
  path.points.push_back(x0);

  if (M.is_flat()) {
    ManifoldPoint x = x0;
    for (std::size_t j = 0; j < steps; ++j) {
      Vec delta(d);
      for (std::size_t c = 0; c < d; ++c) {
        delta[c] = sd * normal_draw(seed ^ kBaseStream, path_index, j, c);
      }
      x = M.translate(x, delta);
      path.points.push_back(x);
    }
  } else {
    // geodesic random walk: tangent gaussian with covariance 2h*Id in an
    // orthonormal frame, pushed through the exponential map
    ManifoldPoint x = x0;
    for (std::size_t j = 0; j < steps; ++j) {
      const auto fr = M.frame(x);
      Vec v(fr[0].components.size());
      for (std::size_t c = 0; c < d; ++c) {
        const double z = sd * normal_draw(seed ^ kBaseStream, path_index, j, c);
        v += z * fr[c].components;
      }
      x = M.exp_map(x, TangentVector{x, v});
      path.points.push_back(x);
    }
  }
  return path;
}

DyadicPath subsample(const DyadicPath& path, int k_coarse) {
  if (k_coarse > path.level) throw ContractViolation("subsample: k_coarse > path level");
  if (k_coarse < 0) throw ContractViolation("subsample: k_coarse >= 0 required");
  const std::size_t stride = std::size_t{1} << (path.level - k_coarse);
  DyadicPath out = path;
  out.level = k_coarse;
  out.points.clear();
  for (std::size_t i = 0; i < path.points.size(); i += stride) {
    out.points.push_back(path.points[i]);
  }
  return out;
}

DyadicPath bridge_refine(const DyadicPath& path, int k_fine, std::uint64_t seed) {
  const Manifold& M = *path.manifold;
  if (!M.is_flat()) {
    throw ContractViolation("bridge_refine: unsupported on curved manifolds");
  }
  if (k_fine < path.level) throw ContractViolation("bridge_refine: k_fine >= path level");
  DyadicPath cur = path;
  const std::size_t d = M.dim();
  for (int level = path.level; level < k_fine; ++level) {
    const std::size_t parent_steps = std::size_t{1} << level;
    const double h = cur.t_total / static_cast<double>(parent_steps);
    // Midpoint given the endpoints of a variance-2h-per-unit-time bridge
    // over a span h has conditional variance h/2 per coordinate.
    const double sd = std::sqrt(0.5 * h);
    DyadicPath next = cur;
    next.level = level + 1;
    next.points.clear();
    next.points.reserve(2 * parent_steps + 1);
    for (std::size_t j = 0; j < parent_steps; ++j) {
      const ManifoldPoint& a = cur.points[j];
      const ManifoldPoint& b = cur.points[j + 1];
      next.points.push_back(a);
      // conditional mean: segment midpoint (shortest-displacement on torus)
      const TangentVector to_b = M.log_map(a, b);
      Vec delta = 0.5 * to_b.components;
      for (std::size_t c = 0; c < d; ++c) {
        delta[c] += sd * normal_draw(seed ^ kBridgeStream, path.path_index,
                                     (static_cast<std::uint64_t>(level) << 40) | j, c);
      }
      next.points.push_back(M.translate(a, delta));
    }
    next.points.push_back(cur.points.back());
    cur = std::move(next);
  }
  return cur;
}

void dump_paths_csv(const PathEnsemble& ensemble, const std::string& filename) {
  std::FILE* f = std::fopen(filename.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + filename);
  std::fprintf(f, "path_index,j,time");
  for (std::size_t c = 0; c < ensemble.manifold->rep_dim(); ++c) {
    std::fprintf(f, ",coord_%zu", c);
  }
  std::fprintf(f, "\n");
  for (std::size_t i = 0; i < ensemble.count; ++i) {
    const DyadicPath p = ensemble.path(i);
    const double h = p.t_total / static_cast<double>(p.points.size() - 1);
    for (std::size_t j = 0; j < p.points.size(); ++j) {
      std::fprintf(f, "%llu,%zu,%.17g", static_cast<unsigned long long>(p.path_index), j,
                   h * static_cast<double>(j));
      for (std::size_t c = 0; c < p.points[j].coords.size(); ++c) {
        std::fprintf(f, ",%.17g", p.points[j].coords[c]);
      }
      std::fprintf(f, "\n");
    }
  }
  std::fclose(f);
}

}  // namespace geostoch
