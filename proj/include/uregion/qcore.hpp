#pragma once

// Small dense complex linear algebra (d <= 16), quantum state and operator
// value types, and the variance functional.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "uregion/errors.hpp"

namespace uregion {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

// Max-abs-entry tolerance for Hermiticity and idempotency checks.
inline constexpr double kDefaultTol = 1e-10;
// Largest dimension the dense routines are meant for.
inline constexpr std::size_t kMaxDim = 16;

class ComplexMatrix {
 public:
  // Zero matrix.
  explicit ComplexMatrix(std::size_t dim);
  // Row-major entries; entries.size() must equal dim * dim.
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
  static ComplexMatrix diagonal(std::span<const double> values);
  // |u><v|
  static ComplexMatrix outer(std::span<const Complex> u, std::span<const Complex> v);
  // Matrix whose columns are the given vectors (all of length dim).
  static ComplexMatrix from_columns(std::span<const CVector> columns);

  std::size_t dim() const { return dim_; }
  const Complex& operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
  std::span<const Complex> entries() const { return entries_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  CVector column(std::size_t col) const;
  CVector apply(std::span<const Complex> v) const;

  // max |M_ij - conj(M_ji)|
  double hermitian_residual() const;
  bool is_hermitian(double tol = kDefaultTol) const { return hermitian_residual() <= tol; }

  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(Complex s, const ComplexMatrix& m);
  friend ComplexMatrix operator*(const ComplexMatrix& m, Complex s) { return s * m; }

 private:
  std::size_t dim_;
  std::vector<Complex> entries_;
};

// max |a_ij - b_ij|
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
// max |U^dagger U - I|
double unitarity_residual(const ComplexMatrix& u);

Complex inner(std::span<const Complex> u, std::span<const Complex> v);  // <u|v>
double norm(std::span<const Complex> v);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
// rotations. Eigenvalues ascend; eigenvectors are the columns of `vectors`.
struct HermitianEigen {
  std::vector<double> values;
  ComplexMatrix vectors;
};
HermitianEigen eigh(const ComplexMatrix& m);

class PureState {
 public:
  // Throws unless sum |amplitude|^2 = 1 within 1e-12.
  explicit PureState(CVector amplitudes);
  static PureState normalized(CVector amplitudes);
  static PureState basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

 private:
  CVector amplitudes_;
};

class DensityMatrix {
 public:
  // Validates Hermiticity (1e-12), unit trace (1e-12) and eigenvalues >= -1e-10.
  static DensityMatrix from_matrix(const ComplexMatrix& m);
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(std::size_t dim);
  // Caller guarantees the invariants (generators that are PSD by construction).
  static DensityMatrix trusted(ComplexMatrix m) { return DensityMatrix(std::move(m)); }

  std::size_t dim() const { return matrix_.dim(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  double purity() const;

 private:
  explicit DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {}
  ComplexMatrix matrix_;
};

class Projector {
 public:
  // Hermitian within tol, |P^2 - P|_max <= tol, trace integral within tol.
  static Projector from_matrix(const ComplexMatrix& m, double tol = kDefaultTol);
  // |v><v| for a nonzero v (normalized internally).
  static Projector rank_one(std::span<const Complex> v);

  std::size_t dim() const { return matrix_.dim(); }
  std::size_t rank() const { return rank_; }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  Projector(ComplexMatrix m, std::size_t rank) : matrix_(std::move(m)), rank_(rank) {}
  ComplexMatrix matrix_;
  std::size_t rank_;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
};

// Tr(O rho). O must be Hermitian (kDefaultTol) and match rho's dimension.
double expectation(const ComplexMatrix& op, const DensityMatrix& rho);
double expectation(const ComplexMatrix& op, const PureState& psi);

// Tr(O^2 rho) - Tr(O rho)^2, clamped to 0 within -1e-12; below that throws
// NumericalError.
double variance(const ComplexMatrix& op, const DensityMatrix& rho);
double variance(const ComplexMatrix& op, const PureState& psi);
// Unclamped value of the same functional.
double raw_variance(const ComplexMatrix& op, const DensityMatrix& rho);

// 1/2 (I + axis . sigma) for a unit axis.
Projector qubit_projector(const BlochVector& axis);
DensityMatrix bloch_to_density(const BlochVector& r);
BlochVector density_to_bloch(const DensityMatrix& rho);

// Non-degenerate 2x2 Hermitian O = scale * P + shift * I with P the projector
// on the top eigenvector; variances obey var(O) = scale^2 var(P).
struct ProjectorForm {
  Projector projector;
  double shift;
  double scale;
};
ProjectorForm shift_scale_to_projector(const ComplexMatrix& op);

namespace detail {
// Hot-path kernels without argument validation.
double expectation_unchecked(const ComplexMatrix& op, std::span<const Complex> psi);
double raw_variance_unchecked(const ComplexMatrix& op, std::span<const Complex> psi);
double clamp_variance(double v);
}  // namespace detail

}  // namespace uregion
