#include "sesop/omega.hpp"

#include <cmath>

namespace sesop {

double OmegaSequence::operator()(std::size_t k) {
  while (values_.size() <= k) {
    const double prev = values_.back();
    values_.push_back(0.5 + std::sqrt(0.25 + prev * prev));
  }
  return values_[k];
}

double omega(std::size_t k) {
  thread_local OmegaSequence seq;
  return seq(k);
}

}  // namespace sesop
