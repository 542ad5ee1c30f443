#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "phasefrac/tolerances.hpp"

namespace phasefrac {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Normalized pure-state amplitudes, dimension >= 2.
class QuantumState {
 public:
  /// Throws UnnormalizedState if |norm - 1| exceeds `tol`, DimensionOutOfRange
  /// for dim < 2, InvalidArgument for non-finite entries.
  explicit QuantumState(Vector amplitudes,
                        double tol = default_tolerances().normalization);

  /// Rescales `v` to unit norm first.
  static QuantumState normalized(const Vector& v);

  const Vector& amplitudes() const noexcept { return amps_; }
  Eigen::Index dim() const noexcept { return amps_.size(); }
  Complex operator[](Eigen::Index i) const { return amps_[i]; }

  /// <this|other>
  Complex inner(const QuantumState& other) const;

 private:
  Vector amps_;
};

class HermitianOperator {
 public:
  /// Throws NonHermitianInput if any |H_ij - conj(H_ji)| exceeds `tol`.
  explicit HermitianOperator(Matrix matrix, double tol = default_tolerances().hermiticity);

  const Matrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

  /// Expectation value <psi|H|psi>.
  double expectation(const Vector& psi) const;

  HermitianOperator shifted(double c) const;

 private:
  Matrix m_;
};

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;  // ascending
  Matrix eigenvectors;          // columns; each phase-fixed (see spectral_decompose)
};

/// Eigen-decomposition with a deterministic phase convention: each eigenvector
/// is rotated so its first largest-magnitude component is real and positive.
SpectralDecomposition spectral_decompose(const HermitianOperator& h,
                                         const Tolerances& tol = default_tolerances());

/// exp(-i H t / hbar) from a precomputed decomposition.
Matrix propagator(const SpectralDecomposition& spec, double t, double hbar);
Matrix propagator(const HermitianOperator& h, double t, double hbar);

/// Seeded standard complex Gaussian matrix A (E|A_ij|^2 = 1), returned as (A + A^dagger)/2.
/// dim must lie in [2, 16].
HermitianOperator random_hermitian(int dim, std::uint64_t seed);

/// Seeded standard complex Gaussian vector, normalized. Uses a stream independent of
/// random_hermitian for the same seed.
QuantumState random_state(int dim, std::uint64_t seed);

double max_abs(const Matrix& m);
double max_abs(const Vector& v);

/// Box-Muller over mt19937_64. Unlike std::normal_distribution the output
/// sequence is identical across standard libraries.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}
  double next();
  Complex next_complex();  // real and imaginary parts each N(0, 1/2)

 private:
  double uniform_open();
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace phasefrac
