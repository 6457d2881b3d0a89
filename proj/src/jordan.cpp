#include "uregion/jordan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace uregion {

namespace {

// Orthonormal basis of the eigenspace {eigenvalue > 1/2} (or < 1/2) of a projector.
std::vector<CVector> projector_subspace(const ComplexMatrix& m, bool range) {
  const auto eig = eigh(m);
  std::vector<CVector> out;
  for (std::size_t i = 0; i < eig.values.size(); ++i)
    if ((eig.values[i] > 0.5) == range) out.push_back(eig.vectors.column(i));
  return out;
}

// V^dagger M V for the columns V.
ComplexMatrix compress(const ComplexMatrix& m, const std::vector<CVector>& cols) {
  const std::size_t k = cols.size();
  std::vector<CVector> mv;
  mv.reserve(k);
  for (const auto& c : cols) mv.push_back(m.apply(c));
  std::vector<Complex> e(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) e[i * k + j] = inner(cols[i], mv[j]);
  return ComplexMatrix(k, std::move(e));
}

CVector lift(const std::vector<CVector>& cols, const CVector& coeffs) {
  CVector out(cols.front().size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t r = 0; r < out.size(); ++r) out[r] += cols[j][r] * coeffs[j];
  return out;
}

// Projects v off the span of `against` twice (modified Gram-Schmidt with
// re-orthogonalization) and normalizes.
CVector orthonormalize_against(CVector v, const std::vector<CVector>& against) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& a : against) {
      const Complex c = inner(a, v);
      for (std::size_t r = 0; r < v.size(); ++r) v[r] -= c * a[r];
    }
  }
  const double n = norm(v);
  if (!(n > 1e-8)) throw NumericalError("jordan: lost orthogonality while building the basis");
  for (auto& z : v) z /= n;
  return v;
}

struct Pending {
  JordanBlock block;
  CVector first;
  CVector second;  // empty for OneDim
};

int onedim_rank(const JordanBlock& b) { return 2 * b.p + b.q; }

}  // namespace

std::vector<double> JordanDecomposition::angles() const {
  std::vector<double> out;
  for (const auto& b : blocks)
    if (b.is_two()) out.push_back(b.theta);
  return out;
}

JordanDecomposition jordan_decompose(const Projector& p, const Projector& q, double tol) {
  if (p.dim() != q.dim()) throw DimensionMismatch("jordan_decompose: projector dimensions differ");
  const std::size_t d = p.dim();
  const ComplexMatrix& pm = p.matrix();
  const ComplexMatrix& qm = q.matrix();

  std::vector<Pending> pending;
  std::vector<CVector> used;  // orthonormal vectors already assigned to blocks

  auto accept = [&](CVector v) {
    v = orthonormalize_against(std::move(v), used);
    used.push_back(v);
    return v;
  };

  // Spectrum of PQP on range(P) holds cos^2 of the principal angles.
  std::vector<CVector> in_p_not_q;
  const auto range_p = projector_subspace(pm, true);
  if (!range_p.empty()) {
    const auto eig = eigh(compress(qm, range_p));
    for (std::size_t i = 0; i < eig.values.size(); ++i) {
      const double c = std::clamp(eig.values[i], 0.0, 1.0);
      CVector u = lift(range_p, eig.vectors.column(i));
      if (c >= 1.0 - tol) {
        pending.push_back({JordanBlock::one(1, 1), accept(std::move(u)), {}});
      } else if (c <= tol) {
        in_p_not_q.push_back(std::move(u));
      } else {
        u = accept(std::move(u));
        CVector w = qm.apply(u);
        for (std::size_t r = 0; r < d; ++r) w[r] -= c * u[r];
        CVector v = accept(std::move(w));
        pending.push_back({JordanBlock::two(std::acos(std::sqrt(c))), std::move(u), std::move(v)});
      }
    }
  }

  // ker(P) intersected with range(Q): PQP counterpart on range(Q).
  std::vector<CVector> in_q_not_p;
  const auto range_q = projector_subspace(qm, true);
  if (!range_q.empty()) {
    const auto eig = eigh(compress(pm, range_q));
    for (std::size_t i = 0; i < eig.values.size(); ++i)
      if (eig.values[i] <= tol) in_q_not_p.push_back(lift(range_q, eig.vectors.column(i)));
  }

  // Pair range(P) & ker(Q) with ker(P) & range(Q) into theta = pi/2 blocks.
  const std::size_t n_pairs = std::min(in_p_not_q.size(), in_q_not_p.size());
  for (std::size_t i = 0; i < n_pairs; ++i) {
    CVector u = accept(in_p_not_q[i]);
    CVector v = accept(in_q_not_p[i]);
    pending.push_back({JordanBlock::two(std::numbers::pi / 2), std::move(u), std::move(v)});
  }
  for (std::size_t i = n_pairs; i < in_p_not_q.size(); ++i)
    pending.push_back({JordanBlock::one(1, 0), accept(in_p_not_q[i]), {}});
  for (std::size_t i = n_pairs; i < in_q_not_p.size(); ++i)
    pending.push_back({JordanBlock::one(0, 1), accept(in_q_not_p[i]), {}});

  // Remaining directions lie in ker(P) & ker(Q).
  if (used.size() < d) {
    auto rest = ComplexMatrix::identity(d);
    for (const auto& u : used) rest = rest - ComplexMatrix::outer(u, u);
    const auto eig = eigh(rest);
    const std::size_t missing = d - used.size();
    for (std::size_t i = d - missing; i < d; ++i)
      pending.push_back({JordanBlock::one(0, 0), accept(eig.vectors.column(i)), {}});
  }
  if (used.size() != d) throw NumericalError("jordan: block sizes do not sum to the dimension");

  std::stable_sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
    if (a.block.is_two() != b.block.is_two()) return a.block.is_two();
    if (a.block.is_two()) return a.block.theta < b.block.theta;
    return onedim_rank(a.block) < onedim_rank(b.block);
  });

  std::vector<CVector> columns;
  std::vector<JordanBlock> blocks;
  columns.reserve(d);
  for (auto& item : pending) {
    columns.push_back(std::move(item.first));
    if (item.block.is_two()) columns.push_back(std::move(item.second));
    blocks.push_back(item.block);
  }
  return JordanDecomposition{ComplexMatrix::from_columns(columns), std::move(blocks)};
}

std::vector<double> principal_angles(const Projector& p, const Projector& q, double tol) {
  return jordan_decompose(p, q, tol).angles();
}

std::pair<ComplexMatrix, ComplexMatrix> reconstruct(const JordanDecomposition& dec) {
  const std::size_t d = dec.basis.dim();
  std::vector<Complex> pc(d * d);
  std::vector<Complex> qc(d * d);
  std::size_t at = 0;
  for (const auto& b : dec.blocks) {
    if (b.is_two()) {
      const double c = std::cos(b.theta);
      const double s = std::sin(b.theta);
      pc[at * d + at] = 1.0;
      qc[at * d + at] = c * c;
      qc[at * d + at + 1] = c * s;
      qc[(at + 1) * d + at] = c * s;
      qc[(at + 1) * d + at + 1] = s * s;
      at += 2;
    } else {
      pc[at * d + at] = static_cast<double>(b.p);
      qc[at * d + at] = static_cast<double>(b.q);
      at += 1;
    }
  }
  const auto& u = dec.basis;
  const auto ud = u.adjoint();
  return {u * ComplexMatrix(d, std::move(pc)) * ud, u * ComplexMatrix(d, std::move(qc)) * ud};
}

}  // namespace uregion
