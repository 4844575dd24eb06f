#pragma once

// Deterministic sample points for adjudication. The generator is
// std::mt19937_64 and doubles are built from its top 53 bits, so streams are
// identical across standard libraries.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tbgeom/errors.hpp"
#include "tbgeom/manifold.hpp"

namespace tbgeom {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  /// Uniform in [0, 1).
  double next() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }
  Vec uniform_vec(std::size_t n, double lo, double hi) {
    Vec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 gen_;
};

struct Sample {
  TangentPoint tp;
  std::vector<Vec> frame;  // g-orthonormal at tp.x
  Vec z;                   // extra base vector, not normalized
};

inline constexpr int kMaxRedraws = 1000;

/// One sample: x uniform in the chart box, u and z uniform in [-1,1]^m, and a
/// frame from Gram-Schmidt on m random vectors. Draws whose raw vectors are
/// close to dependent, or where f is not positive, are redrawn.
inline Sample draw_sample(Rng& rng, const ChartedManifold& M, const ScalingField* f = nullptr) {
  const std::size_t m = M.dim();
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    Sample s;
    s.tp.x = Vec(m);
    for (std::size_t i = 0; i < m; ++i) s.tp.x[i] = rng.uniform(M.box()[i].lo, M.box()[i].hi);
    s.tp.u = rng.uniform_vec(m, -1.0, 1.0);
    s.z = rng.uniform_vec(m, -1.0, 1.0);
    std::vector<Vec> raw;
    Mat A(m, m);
    for (std::size_t k = 0; k < m; ++k) {
      raw.push_back(rng.uniform_vec(m, -1.0, 1.0));
      A.col(static_cast<Eigen::Index>(k)) = raw.back() / raw.back().norm();
    }
    if (std::abs(A.determinant()) < 1e-3) continue;
    if (f && !(eval(f->expr(), std::vector<double>(s.tp.x.data(), s.tp.x.data() + m)) > 0.0)) continue;
    try {
      s.frame = gram_schmidt(M, s.tp.x, raw);
    } catch (const DegenerateInput&) {
      continue;
    }
    return s;
  }
  throw DegenerateInput("no usable sample after 1000 draws");
}

inline std::vector<Sample> sample_stream(std::uint64_t seed, const ChartedManifold& M, std::size_t n,
                                         const ScalingField* f = nullptr) {
  Rng rng(seed);
  std::vector<Sample> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(draw_sample(rng, M, f));
  return out;
}

/// Independent seed for a named sub-stream, so adding an item never shifts
/// the samples of another.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (char c : tag) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
  std::uint64_t z = seed ^ h;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;  // splitmix64 finalizer
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace tbgeom
