#include "phasefrac/numerics.hpp"

#include <cmath>
#include <numbers>

#include "phasefrac/error.hpp"

namespace phasefrac {

namespace {

void require_finite(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) {
      throw Error(ErrorCode::InvalidArgument, "non-finite amplitude at index " + std::to_string(i));
    }
  }
}

}  // namespace

QuantumState::QuantumState(Vector amplitudes, double tol) : amps_(std::move(amplitudes)) {
  if (amps_.size() < 2) {
    throw Error(ErrorCode::DimensionOutOfRange, "state dimension must be at least 2");
  }
  require_finite(amps_);
  const double norm = amps_.norm();
  if (std::abs(norm - 1.0) > tol) {
    throw Error(ErrorCode::UnnormalizedState,
                "state norm " + std::to_string(norm) + " differs from 1");
  }
}

QuantumState QuantumState::normalized(const Vector& v) {
  if (v.size() < 2) {
    throw Error(ErrorCode::DimensionOutOfRange, "state dimension must be at least 2");
  }
  require_finite(v);
  const double norm = v.norm();
  if (!(norm > 0.0)) {
    throw Error(ErrorCode::UnnormalizedState, "cannot normalize a zero vector");
  }
  return QuantumState(v / norm);
}

Complex QuantumState::inner(const QuantumState& other) const {
  if (other.dim() != dim()) {
    throw Error(ErrorCode::DimensionMismatch, "inner product of states with different dimensions");
  }
  return amps_.dot(other.amps_);  // Eigen conjugates the left operand
}

HermitianOperator::HermitianOperator(Matrix matrix, double tol) : m_(std::move(matrix)) {
  if (m_.rows() != m_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "Hamiltonian must be square");
  }
  if (m_.rows() < 2) {
    throw Error(ErrorCode::DimensionOutOfRange, "Hamiltonian dimension must be at least 2");
  }
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    for (Eigen::Index j = 0; j < m_.cols(); ++j) {
      const Complex z = m_(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorCode::InvalidArgument, "non-finite Hamiltonian entry");
      }
      if (std::abs(z - std::conj(m_(j, i))) > tol) {
        throw Error(ErrorCode::NonHermitianInput,
                    "entry (" + std::to_string(i) + "," + std::to_string(j) +
                        ") breaks Hermiticity");
      }
    }
  }
}

double HermitianOperator::expectation(const Vector& psi) const {
  return psi.dot(m_ * psi).real();
}

HermitianOperator HermitianOperator::shifted(double c) const {
  Matrix m = m_;
  m.diagonal().array() += c;
  return HermitianOperator(std::move(m));
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

SpectralDecomposition spectral_decompose(const HermitianOperator& h, const Tolerances& tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "Hermitian eigensolver did not converge");
  }
  SpectralDecomposition out{solver.eigenvalues(), solver.eigenvectors()};

  for (Eigen::Index col = 0; col < out.eigenvectors.cols(); ++col) {
    auto v = out.eigenvectors.col(col);
    const double largest = v.cwiseAbs().maxCoeff();
    Eigen::Index pivot = 0;
    while (std::abs(v[pivot]) < largest * (1.0 - 1e-8)) ++pivot;
    v *= std::conj(v[pivot]) / std::abs(v[pivot]);
  }

  const Matrix& vecs = out.eigenvectors;
  const Matrix rebuilt = vecs * out.eigenvalues.cast<Complex>().asDiagonal() * vecs.adjoint();
  const double scale = std::max(max_abs(h.matrix()), 1e-300);
  if (max_abs(Matrix(rebuilt - h.matrix())) > tol.reconstruction * scale + 1e-300 ||
      max_abs(Matrix(vecs.adjoint() * vecs - Matrix::Identity(h.dim(), h.dim()))) >
          tol.orthonormality) {
    throw Error(ErrorCode::NumericalFailure, "spectral reconstruction outside tolerance");
  }
  return out;
}

Matrix propagator(const SpectralDecomposition& spec, double t, double hbar) {
  if (!std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "propagation time must be finite");
  if (!(hbar > 0.0)) throw Error(ErrorCode::InvalidArgument, "hbar must be positive");
  const Eigen::Index n = spec.eigenvalues.size();
  Vector phases(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    phases[k] = std::polar(1.0, -spec.eigenvalues[k] * t / hbar);
  }
  return spec.eigenvectors * phases.asDiagonal() * spec.eigenvectors.adjoint();
}

Matrix propagator(const HermitianOperator& h, double t, double hbar) {
  return propagator(spectral_decompose(h), t, hbar);
}

double GaussianStream::uniform_open() {
  // 53-bit mantissa in (0, 1); zero is excluded so log() stays finite.
  for (;;) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

double GaussianStream::next() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform_open();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(angle);
  has_cached_ = true;
  return r * std::cos(angle);
}

Complex GaussianStream::next_complex() {
  const double re = next();
  const double im = next();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

HermitianOperator random_hermitian(int dim, std::uint64_t seed) {
  if (dim < 2 || dim > 16) {
    throw Error(ErrorCode::DimensionOutOfRange, "random_hermitian dimension must lie in [2, 16]");
  }
  GaussianStream gauss(seed);
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = gauss.next_complex();
  }
  Matrix h = (a + a.adjoint()) * 0.5;
  return HermitianOperator(std::move(h), 0.0);
}

QuantumState random_state(int dim, std::uint64_t seed) {
  if (dim < 2 || dim > 16) {
    throw Error(ErrorCode::DimensionOutOfRange, "random_state dimension must lie in [2, 16]");
  }
  // Offset keeps the state stream disjoint from random_hermitian(dim, seed).
  GaussianStream gauss(seed ^ 0x9e3779b97f4a7c15ULL);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = gauss.next_complex();
  return QuantumState::normalized(v);
}

}  // namespace phasefrac
