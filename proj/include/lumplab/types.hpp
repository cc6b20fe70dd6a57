#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace lumplab {

using Vec = std::vector<double>;

/// Factorization hit a non-positive pivot; `pivot()` is the failing index.
class NotPositiveDefinite : public std::runtime_error {
public:
  NotPositiveDefinite(const std::string& what, std::size_t pivot)
      : std::runtime_error(what + " (pivot " + std::to_string(pivot) + ")"), pivot_(pivot) {}
  std::size_t pivot() const { return pivot_; }

private:
  std::size_t pivot_;
};

/// Iterative eigensolver/SVD ran out of iterations; carries the remaining
/// off-diagonal norm for diagnostics.
class NonConvergence : public std::runtime_error {
public:
  NonConvergence(const std::string& what, double off_norm)
      : std::runtime_error(what + " (off-diagonal norm " + std::to_string(off_norm) + ")"),
        off_norm_(off_norm) {}
  double off_diagonal_norm() const { return off_norm_; }

private:
  double off_norm_;
};

/// A and B share a (near-)null vector: det(A - lambda B) vanishes identically.
class SingularPencilError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Time integration blew up; `step()` is the first offending step.
class UnstableError : public std::runtime_error {
public:
  UnstableError(const std::string& what, std::size_t step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const { return step_; }

private:
  std::size_t step_;
};

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// --- small vector helpers -------------------------------------------------

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
double norm_inf(const Vec& a);
/// y += alpha * x
void axpy(double alpha, const Vec& x, Vec& y);
Vec scaled(const Vec& x, double alpha);

/// Deterministic uniform variates from raw mt19937_64 bits. std::*_distribution
/// is implementation-defined, so experiment outputs would not be byte-identical
/// across standard libraries; this generator is.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// uniform in [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t bits() { return gen_(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

private:
  std::mt19937_64 gen_;
};

}  // namespace lumplab
