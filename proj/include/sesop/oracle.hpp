#pragma once

#include <cstdint>

#include "sesop/kernels.hpp"
#include "sesop/problems.hpp"
#include "sesop/rng.hpp"

namespace sesop {

/// Uniform sample from the unit sphere S^{n-1} (normalized Gaussian).
/// Advances rng; redraws on the (measure-zero) all-zero draw.
Vector sample_unit_sphere(std::size_t n, Rng& rng);

/// Inexact gradient map g with a guaranteed bound ||g(x) - grad f(x)|| <= delta1.
class GradientOracle {
 public:
  virtual ~GradientOracle() = default;
  virtual Vector query(const Vector& x) = 0;
  virtual double delta1() const = 0;
};

/// g(x) = grad f(x) + delta * xi with xi drawn fresh from the unit sphere on
/// every query, so ||g(x) - grad f(x)|| = delta exactly. delta = 0 is the
/// exact-gradient oracle.
class SphereNoiseOracle final : public GradientOracle {
 public:
  SphereNoiseOracle(const Objective& f, double delta, std::uint64_t seed);

  Vector query(const Vector& x) override;
  double delta1() const override { return delta_; }

  /// The noise step alone: grad + delta * xi (same stream as query).
  Vector perturb(Vector grad);

 private:
  const Objective* f_;
  double delta_;
  Rng rng_;
};

}  // namespace sesop
