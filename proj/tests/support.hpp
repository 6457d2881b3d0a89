#pragma once

// Test-side generators, deliberately independent of the library's sampling
// module so that oracle checks do not share code with what they check.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "uregion/qcore.hpp"

namespace testing_support {

using uregion::Complex;
using uregion::ComplexMatrix;
using uregion::CVector;

inline CVector gaussian_vector(std::size_t d, std::mt19937_64& gen) {
  std::normal_distribution<double> n;
  CVector v(d);
  for (auto& z : v) z = Complex(n(gen), n(gen));
  return v;
}

inline CVector unit_vector(std::size_t d, std::mt19937_64& gen) {
  auto v = gaussian_vector(d, gen);
  const double s = uregion::norm(v);
  for (auto& z : v) z /= s;
  return v;
}

// Gram-Schmidt on Gaussian columns.
inline std::vector<CVector> orthonormal_columns(std::size_t d, std::size_t k, std::mt19937_64& gen) {
  std::vector<CVector> cols;
  while (cols.size() < k) {
    auto v = gaussian_vector(d, gen);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& c : cols) {
        const Complex ip = uregion::inner(c, v);
        for (std::size_t r = 0; r < d; ++r) v[r] -= ip * c[r];
      }
    const double s = uregion::norm(v);
    if (s < 1e-6) continue;
    for (auto& z : v) z /= s;
    cols.push_back(std::move(v));
  }
  return cols;
}

inline ComplexMatrix random_unitary(std::size_t d, std::mt19937_64& gen) {
  return ComplexMatrix::from_columns(orthonormal_columns(d, d, gen));
}

inline ComplexMatrix projector_matrix(std::size_t d, std::size_t rank, std::mt19937_64& gen) {
  ComplexMatrix m(d);
  for (const auto& c : orthonormal_columns(d, rank, gen)) m = m + ComplexMatrix::outer(c, c);
  return m;
}

inline ComplexMatrix random_hermitian(std::size_t d, std::mt19937_64& gen) {
  std::normal_distribution<double> n;
  std::vector<Complex> e(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    e[i * d + i] = n(gen);
    for (std::size_t j = i + 1; j < d; ++j) {
      e[i * d + j] = Complex(n(gen), n(gen));
      e[j * d + i] = std::conj(e[i * d + j]);
    }
  }
  return ComplexMatrix(d, std::move(e));
}

inline ComplexMatrix random_density_matrix(std::size_t d, std::mt19937_64& gen) {
  std::vector<Complex> g;
  for (std::size_t i = 0; i < d; ++i) {
    auto row = gaussian_vector(d, gen);
    g.insert(g.end(), row.begin(), row.end());
  }
  const ComplexMatrix gm(d, std::move(g));
  const ComplexMatrix w = gm * gm.adjoint();
  return (1.0 / w.trace().real()) * w;
}

inline ComplexMatrix conjugate(const ComplexMatrix& u, const ComplexMatrix& m) { return u * m * u.adjoint(); }

}  // namespace testing_support
