#pragma once

#include <stdexcept>

namespace mds {

// Work or memory limit exhausted before an operation could finish.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An infinite product was requested outside its absolute-convergence region.
class divergence_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// No finite rigorous tail bound could be produced for a truncated product.
class certification_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mds
