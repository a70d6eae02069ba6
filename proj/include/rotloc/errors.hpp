#pragma once

#include <stdexcept>
#include <string>

namespace rotloc {

// Input outside the domain of a formula (r beyond lambda/2pi, e0 <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A quantity is undefined at the requested point (zero spinor, d2 at E = E0).
class DegenerateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double previous, double last)
      : std::runtime_error(what), previous_(previous), last_(last) {}

  double previous() const noexcept { return previous_; }
  double last() const noexcept { return last_; }

 private:
  double previous_;
  double last_;
};

}  // namespace rotloc
