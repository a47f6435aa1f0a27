#include "sesop/oracle.hpp"

#include <stdexcept>

namespace sesop {

Vector sample_unit_sphere(std::size_t n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_unit_sphere: n must be >= 1");
  Vector v(n);
  while (true) {
    rng.fill_gaussian(v);
    const double norm = kernels::nrm2(v);
    if (norm > 0.0) {
      kernels::scal(1.0 / norm, v);
      return v;
    }
  }
}

SphereNoiseOracle::SphereNoiseOracle(const Objective& f, double delta, std::uint64_t seed)
    : f_(&f), delta_(delta), rng_(seed) {
  if (delta < 0.0) throw std::invalid_argument("SphereNoiseOracle: delta must be >= 0");
}

Vector SphereNoiseOracle::query(const Vector& x) { return perturb(f_->gradient(x)); }

Vector SphereNoiseOracle::perturb(Vector grad) {
  if (delta_ == 0.0) return grad;
  kernels::axpy(delta_, sample_unit_sphere(grad.size(), rng_), grad);
  return grad;
}

}  // namespace sesop
