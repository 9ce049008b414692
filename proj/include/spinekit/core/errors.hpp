#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spinekit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A tree, spine assignment or skeleton violates its structural invariants.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A query asked about a time the tree was not simulated to.
class HorizonError : public Error {
 public:
  using Error::Error;
};

/// Position requested strictly inside a diffusion segment with no stored sample.
class PathSampleError : public Error {
 public:
  using Error::Error;
};

class DegenerateLawError : public Error {
 public:
  using Error::Error;
};

/// Population cap exceeded during simulation. Carries the partial statistics
/// reached before the simulation was abandoned.
class ExplosionError : public Error {
 public:
  ExplosionError(std::size_t particles, double time_reached)
      : Error("population cap exceeded: " + std::to_string(particles) +
              " particles by time " + std::to_string(time_reached)),
        particles_(particles),
        time_reached_(time_reached) {}

  std::size_t particles() const noexcept { return particles_; }
  double time_reached() const noexcept { return time_reached_; }

 private:
  std::size_t particles_;
  double time_reached_;
};

/// Explicit k-tuple enumeration or exact oracle exceeded its budget.
class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

}  // namespace spinekit
