#include "uregion/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace uregion {

namespace {

constexpr double kStateTol = 1e-12;
constexpr double kVarianceClamp = 1e-12;
constexpr double kJacobiOffTol = 1e-14;
constexpr int kJacobiMaxSweeps = 100;

void require_square(std::size_t dim, std::size_t n) {
  if (dim == 0) throw std::invalid_argument("matrix dimension must be positive");
  if (n != dim * dim) {
    throw std::invalid_argument("matrix entries: expected " + std::to_string(dim * dim) + ", got " +
                                std::to_string(n));
  }
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) + " vs " +
                            std::to_string(b));
  }
}

void require_hermitian(const ComplexMatrix& op) {
  const double r = op.hermitian_residual();
  if (r > kDefaultTol) {
    throw std::invalid_argument("operator is not Hermitian (residual " + std::to_string(r) + ")");
  }
}

double real_checked(Complex z, double scale) {
  if (std::abs(z.imag()) > kStateTol * std::max(1.0, scale)) {
    throw NumericalError("expectation has imaginary residue " + std::to_string(z.imag()));
  }
  return z.real();
}

double max_abs_entry(const ComplexMatrix& m) {
  double best = 0.0;
  for (const auto& z : m.entries()) best = std::max(best, std::abs(z));
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {
  if (dim == 0) throw std::invalid_argument("matrix dimension must be positive");
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
  require_square(dim_, entries_.size());
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  std::vector<Complex> e(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1.0;
  return ComplexMatrix(dim, std::move(e));
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t dim = rows.size();
  std::vector<Complex> e;
  e.reserve(dim * dim);
  for (const auto& row : rows) {
    if (row.size() != dim) throw std::invalid_argument("from_rows: matrix must be square");
    e.insert(e.end(), row.begin(), row.end());
  }
  return ComplexMatrix(dim, std::move(e));
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  const std::size_t dim = values.size();
  std::vector<Complex> e(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = values[i];
  return ComplexMatrix(dim, std::move(e));
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> u, std::span<const Complex> v) {
  require_same_dim(u.size(), v.size(), "outer");
  const std::size_t dim = u.size();
  std::vector<Complex> e(dim * dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) e[i * dim + j] = u[i] * std::conj(v[j]);
  return ComplexMatrix(dim, std::move(e));
}

ComplexMatrix ComplexMatrix::from_columns(std::span<const CVector> columns) {
  const std::size_t dim = columns.size();
  std::vector<Complex> e(dim * dim);
  for (std::size_t c = 0; c < dim; ++c) {
    require_same_dim(columns[c].size(), dim, "from_columns");
    for (std::size_t r = 0; r < dim; ++r) e[r * dim + c] = columns[c][r];
  }
  return ComplexMatrix(dim, std::move(e));
}

ComplexMatrix ComplexMatrix::adjoint() const {
  std::vector<Complex> e(entries_.size());
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) e[j * dim_ + i] = std::conj(entries_[i * dim_ + j]);
  return ComplexMatrix(dim_, std::move(e));
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += entries_[i * dim_ + i];
  return t;
}

CVector ComplexMatrix::column(std::size_t col) const {
  CVector v(dim_);
  for (std::size_t r = 0; r < dim_; ++r) v[r] = entries_[r * dim_ + col];
  return v;
}

CVector ComplexMatrix::apply(std::span<const Complex> v) const {
  require_same_dim(dim_, v.size(), "apply");
  CVector out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) acc += entries_[i * dim_ + j] * v[j];
    out[i] = acc;
  }
  return out;
}

double ComplexMatrix::hermitian_residual() const {
  double r = 0.0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j)
      r = std::max(r, std::abs(entries_[i * dim_ + j] - std::conj(entries_[j * dim_ + i])));
  return r;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.dim_, b.dim_, "operator+");
  std::vector<Complex> e(a.entries_.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = a.entries_[i] + b.entries_[i];
  return ComplexMatrix(a.dim_, std::move(e));
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.dim_, b.dim_, "operator-");
  std::vector<Complex> e(a.entries_.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = a.entries_[i] - b.entries_[i];
  return ComplexMatrix(a.dim_, std::move(e));
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.dim_, b.dim_, "operator*");
  const std::size_t d = a.dim_;
  std::vector<Complex> e(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const Complex aik = a.entries_[i * d + k];
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < d; ++j) e[i * d + j] += aik * b.entries_[k * d + j];
    }
  return ComplexMatrix(d, std::move(e));
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& m) {
  std::vector<Complex> e(m.entries_.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = s * m.entries_[i];
  return ComplexMatrix(m.dim_, std::move(e));
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "max_abs_diff");
  double r = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    r = std::max(r, std::abs(a.entries()[i] - b.entries()[i]));
  return r;
}

double unitarity_residual(const ComplexMatrix& u) {
  return max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(u.dim()));
}

Complex inner(std::span<const Complex> u, std::span<const Complex> v) {
  require_same_dim(u.size(), v.size(), "inner");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += std::conj(u[i]) * v[i];
  return acc;
}

double norm(std::span<const Complex> v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return std::sqrt(acc);
}

ComplexMatrix pauli_x() { return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }
ComplexMatrix pauli_y() {
  return ComplexMatrix::from_rows({{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}});
}
ComplexMatrix pauli_z() { return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}}); }

// ---------------------------------------------------------------------------
// Jacobi eigensolver

HermitianEigen eigh(const ComplexMatrix& m) {
  require_hermitian(m);
  const std::size_t d = m.dim();
  std::vector<Complex> a(m.entries().begin(), m.entries().end());
  // Symmetrize so the iteration sees an exactly Hermitian matrix.
  for (std::size_t i = 0; i < d; ++i) {
    a[i * d + i] = a[i * d + i].real();
    for (std::size_t j = i + 1; j < d; ++j) {
      const Complex avg = 0.5 * (a[i * d + j] + std::conj(a[j * d + i]));
      a[i * d + j] = avg;
      a[j * d + i] = std::conj(avg);
    }
  }
  std::vector<Complex> v(d * d);
  for (std::size_t i = 0; i < d; ++i) v[i * d + i] = 1.0;

  double frob = 0.0;
  for (const auto& z : a) frob += std::norm(z);
  const double stop = kJacobiOffTol * std::max(1.0, std::sqrt(frob));

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) s += 2.0 * std::norm(a[i * d + j]);
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep < kJacobiMaxSweeps && off_norm() >= stop; ++sweep) {
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const Complex apq = a[p * d + q];
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const Complex w = apq / mag;
        const double app = a[p * d + p].real();
        const double aqq = a[q * d + q].real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // G = diag(1, conj(w)) * [[c, s], [-s, c]] acting on coordinates (p, q).
        const Complex gpp = c;
        const Complex gpq = s;
        const Complex gqp = -s * std::conj(w);
        const Complex gqq = c * std::conj(w);
        for (std::size_t k = 0; k < d; ++k) {  // A <- A G
          const Complex akp = a[k * d + p];
          const Complex akq = a[k * d + q];
          a[k * d + p] = akp * gpp + akq * gqp;
          a[k * d + q] = akp * gpq + akq * gqq;
        }
        for (std::size_t k = 0; k < d; ++k) {  // A <- G^dagger A
          const Complex apk = a[p * d + k];
          const Complex aqk = a[q * d + k];
          a[p * d + k] = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a[q * d + k] = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        for (std::size_t k = 0; k < d; ++k) {  // V <- V G
          const Complex vkp = v[k * d + p];
          const Complex vkq = v[k * d + q];
          v[k * d + p] = vkp * gpp + vkq * gqp;
          v[k * d + q] = vkp * gpq + vkq * gqq;
        }
        a[p * d + q] = 0.0;
        a[q * d + p] = 0.0;
        a[p * d + p] = a[p * d + p].real();
        a[q * d + q] = a[q * d + q].real();
      }
    }
  }
  if (off_norm() >= stop) throw NumericalError("Jacobi eigensolver did not converge");

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a[i * d + i].real() < a[j * d + j].real(); });
  std::vector<double> values(d);
  std::vector<Complex> vecs(d * d);
  for (std::size_t c = 0; c < d; ++c) {
    values[c] = a[order[c] * d + order[c]].real();
    for (std::size_t r = 0; r < d; ++r) vecs[r * d + c] = v[r * d + order[c]];
  }
  return HermitianEigen{std::move(values), ComplexMatrix(d, std::move(vecs))};
}

// ---------------------------------------------------------------------------
// States and projectors

PureState::PureState(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.empty()) throw std::invalid_argument("pure state must have positive dimension");
  const double n2 = std::pow(norm(amplitudes_), 2);
  if (std::abs(n2 - 1.0) > kStateTol) {
    throw std::invalid_argument("pure state is not normalized (|psi|^2 = " + std::to_string(n2) + ")");
  }
}

PureState PureState::normalized(CVector amplitudes) {
  const double n = norm(amplitudes);
  if (!(n > 0.0)) throw std::invalid_argument("cannot normalize the zero vector");
  for (auto& z : amplitudes) z /= n;
  return PureState(std::move(amplitudes));
}

PureState PureState::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw std::invalid_argument("basis index out of range");
  CVector v(dim);
  v[index] = 1.0;
  return PureState(std::move(v));
}

DensityMatrix DensityMatrix::from_matrix(const ComplexMatrix& m) {
  if (m.hermitian_residual() > kStateTol) throw std::invalid_argument("density matrix is not Hermitian");
  const Complex tr = m.trace();
  if (std::abs(tr - 1.0) > kStateTol) throw std::invalid_argument("density matrix trace differs from 1");
  const auto eig = eigh(m);
  if (eig.values.front() < -1e-10) throw std::invalid_argument("density matrix has a negative eigenvalue");
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  return DensityMatrix((1.0 / static_cast<double>(dim)) * ComplexMatrix::identity(dim));
}

double DensityMatrix::purity() const {
  double p = 0.0;
  for (const auto& z : matrix_.entries()) p += std::norm(z);
  return p;
}

Projector Projector::from_matrix(const ComplexMatrix& m, double tol) {
  if (m.hermitian_residual() > tol) throw std::invalid_argument("projector is not Hermitian");
  if (max_abs_diff(m * m, m) > tol) throw std::invalid_argument("projector is not idempotent");
  const double tr = m.trace().real();
  const double rank = std::round(tr);
  if (std::abs(tr - rank) > tol) throw std::invalid_argument("projector trace is not an integer");
  return Projector(m, static_cast<std::size_t>(rank));
}

Projector Projector::rank_one(std::span<const Complex> v) {
  const double n = norm(v);
  if (!(n > 0.0)) throw std::invalid_argument("rank_one: zero vector");
  CVector u(v.begin(), v.end());
  for (auto& z : u) z /= n;
  return Projector(ComplexMatrix::outer(u, u), 1);
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

// ---------------------------------------------------------------------------
// Expectation and variance

namespace detail {

double expectation_unchecked(const ComplexMatrix& op, std::span<const Complex> psi) {
  const std::size_t d = op.dim();
  Complex acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    Complex row = 0.0;
    for (std::size_t j = 0; j < d; ++j) row += op(i, j) * psi[j];
    acc += std::conj(psi[i]) * row;
  }
  return acc.real();
}

double raw_variance_unchecked(const ComplexMatrix& op, std::span<const Complex> psi) {
  // <psi|O^2|psi> = |O psi|^2 for Hermitian O.
  const std::size_t d = op.dim();
  double second = 0.0;
  Complex first = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    Complex row = 0.0;
    for (std::size_t j = 0; j < d; ++j) row += op(i, j) * psi[j];
    second += std::norm(row);
    first += std::conj(psi[i]) * row;
  }
  return second - first.real() * first.real();
}

double clamp_variance(double v) {
  if (v >= 0.0) return v;
  if (v >= -kVarianceClamp) return 0.0;
  throw NumericalError("negative variance " + std::to_string(v));
}

}  // namespace detail

double expectation(const ComplexMatrix& op, const DensityMatrix& rho) {
  require_same_dim(op.dim(), rho.dim(), "expectation");
  require_hermitian(op);
  const auto& r = rho.matrix();
  const std::size_t d = op.dim();
  Complex acc = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) acc += op(i, j) * r(j, i);
  return real_checked(acc, max_abs_entry(op));
}

double expectation(const ComplexMatrix& op, const PureState& psi) {
  require_same_dim(op.dim(), psi.dim(), "expectation");
  require_hermitian(op);
  return detail::expectation_unchecked(op, psi.amplitudes());
}

double raw_variance(const ComplexMatrix& op, const DensityMatrix& rho) {
  const double mean = expectation(op, rho);
  const double second = expectation(op * op, rho);
  return second - mean * mean;
}

double variance(const ComplexMatrix& op, const DensityMatrix& rho) {
  return detail::clamp_variance(raw_variance(op, rho));
}

double variance(const ComplexMatrix& op, const PureState& psi) {
  require_same_dim(op.dim(), psi.dim(), "variance");
  require_hermitian(op);
  return detail::clamp_variance(detail::raw_variance_unchecked(op, psi.amplitudes()));
}

// ---------------------------------------------------------------------------
// Qubit helpers

Projector qubit_projector(const BlochVector& axis) {
  if (std::abs(axis.norm() - 1.0) > kStateTol) throw std::invalid_argument("projector axis must be a unit vector");
  const auto m = ComplexMatrix::from_rows({{0.5 * (1.0 + axis.z), Complex(0.5 * axis.x, -0.5 * axis.y)},
                                           {Complex(0.5 * axis.x, 0.5 * axis.y), 0.5 * (1.0 - axis.z)}});
  return Projector::from_matrix(m);
}

DensityMatrix bloch_to_density(const BlochVector& r) {
  if (r.norm() > 1.0 + kStateTol) throw std::invalid_argument("Bloch vector outside the unit ball");
  return DensityMatrix::trusted(
      ComplexMatrix::from_rows({{0.5 * (1.0 + r.z), Complex(0.5 * r.x, -0.5 * r.y)},
                                {Complex(0.5 * r.x, 0.5 * r.y), 0.5 * (1.0 - r.z)}}));
}

BlochVector density_to_bloch(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw DimensionMismatch("density_to_bloch needs a qubit state");
  const auto& m = rho.matrix();
  return BlochVector{2.0 * m(1, 0).real(), 2.0 * m(1, 0).imag(), (m(0, 0) - m(1, 1)).real()};
}

ProjectorForm shift_scale_to_projector(const ComplexMatrix& op) {
  if (op.dim() != 2) throw DimensionMismatch("shift_scale_to_projector needs a 2x2 operator");
  const auto eig = eigh(op);
  const double gap = eig.values[1] - eig.values[0];
  if (gap <= 1e-10) throw DegenerateSpectrum("operator is proportional to the identity");
  const CVector top = eig.vectors.column(1);
  return ProjectorForm{Projector::rank_one(top), eig.values[0], gap};
}

}  // namespace uregion
