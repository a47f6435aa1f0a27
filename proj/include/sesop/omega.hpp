#pragma once

#include <cstddef>
#include <vector>

namespace sesop {

/// The weight sequence w_0 = 1, w_k = 1/2 + sqrt(1/4 + w_{k-1}^2).
/// Satisfies (k+1)/2 <= w_k <= k+1 and w_k^2 - w_{k-1}^2 = w_k.
/// Lazily extended and memoized; intended to be owned per solver run.
class OmegaSequence {
 public:
  double operator()(std::size_t k);

  std::size_t generated() const { return values_.size(); }

 private:
  std::vector<double> values_{1.0};
};

/// Memoized convenience accessor (thread-local cache, O(1) on repeats).
double omega(std::size_t k);

}  // namespace sesop
