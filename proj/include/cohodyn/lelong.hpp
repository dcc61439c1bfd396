#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iterator>
#include <limits>
#include <random>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

#include "cohodyn/green.hpp"

namespace cohodyn {

using Potential = std::function<double(const Point&)>;

struct LelongOptions {
  double r_outer = 1e-2;
  double r_inner = 1e-3;
  std::size_t samples = 4096;
  std::uint64_t seed = 0x5eed;
  /// Largest tolerated fraction of failed evaluations.
  double max_failure_fraction = 0.10;
};

struct LelongEstimate {
  double nu = 0;
  double max_outer = 0;
  double max_inner = 0;
  std::size_t samples = 0;
  std::size_t failures = 0;
};

namespace detail {

/// Radical inverse of i in the given prime base.
inline double radical_inverse(std::uint64_t i, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0;
  while (i) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

inline unsigned nth_prime(std::size_t n) {
  static const unsigned primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  if (n >= std::size(primes)) throw DimensionError("sphere_samples: dimension too large for the Halton table");
  return primes[n];
}

}  // namespace detail

/// Quasi-uniform unit vectors in C^n = R^{2n}: a Halton sequence with a
/// seeded Cranley-Patterson shift, mapped through the Gaussian quantile and
/// normalised.
inline std::vector<Point> sphere_samples(std::size_t n, std::size_t count, std::uint64_t seed) {
  const std::size_t real_dim = 2 * n;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> shift(real_dim);
  for (auto& s : shift) s = unit(rng);
  std::vector<Point> out;
  out.reserve(count);
  std::vector<double> g(real_dim);
  for (std::size_t i = 1; out.size() < count; ++i) {
    double norm2 = 0;
    for (std::size_t d = 0; d < real_dim; ++d) {
      double u = std::fmod(detail::radical_inverse(i, detail::nth_prime(d)) + shift[d], 1.0);
      u = std::clamp(u, 1e-12, 1 - 1e-12);
      g[d] = std::sqrt(2.0) * boost::math::erf_inv(2 * u - 1);
      norm2 += g[d] * g[d];
    }
    if (norm2 == 0) continue;
    double s = 1 / std::sqrt(norm2);
    Point w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = Complex(g[2 * j] * s, g[2 * j + 1] * s);
    out.push_back(std::move(w));
  }
  return out;
}

/// nu = (max_{|w|=r1} u(c+w) - max_{|w|=r2} u(c+w)) / (log r1 - log r2).
inline LelongEstimate lelong_estimate(const Potential& u, const Point& center, const LelongOptions& opt = {}) {
  if (!(opt.r_inner > 0 && opt.r_inner < opt.r_outer))
    throw DegenerateInputError("lelong_estimate: need 0 < r_inner < r_outer");
  if (opt.samples < 64) throw DegenerateInputError("lelong_estimate: need at least 64 samples");
  auto dirs = sphere_samples(center.size(), opt.samples, opt.seed);
  LelongEstimate out;
  out.samples = opt.samples;
  auto sphere_max = [&](double r) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& w : dirs) {
      Point z = center;
      for (std::size_t j = 0; j < z.size(); ++j) z[j] += r * w[j];
      double v;
      try {
        v = u(z);
      } catch (const Error&) {
        ++out.failures;
        continue;
      }
      if (!std::isfinite(v)) {
        ++out.failures;
        continue;
      }
      best = std::max(best, v);
    }
    return best;
  };
  out.max_outer = sphere_max(opt.r_outer);
  out.max_inner = sphere_max(opt.r_inner);
  if (static_cast<double>(out.failures) > opt.max_failure_fraction * 2.0 * static_cast<double>(opt.samples))
    throw NumericalError("lelong_estimate: potential failed at " + std::to_string(out.failures) + " of " +
                         std::to_string(2 * opt.samples) + " samples; estimate unreliable");
  out.nu = (out.max_outer - out.max_inner) / (std::log(opt.r_outer) - std::log(opt.r_inner));
  return out;
}

/// The Green potential of a lift as a callable.
inline Potential green_as_potential(const HomogeneousLift& f, std::size_t iterations, GreenOptions opt = {}) {
  return [f, iterations, opt](const Point& z) { return green_potential(f, z, iterations, opt).value(); };
}

}  // namespace cohodyn
