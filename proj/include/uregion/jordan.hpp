#pragma once

// Simultaneous block diagonalization of two projectors. In the returned basis
// both projectors split into 1x1 blocks with entries in {0, 1} and 2x2 blocks
//   P_i = [[1, 0], [0, 0]],  Q_i = [[cos^2 t, cos t sin t], [cos t sin t, sin^2 t]]
// with principal angles t in (0, pi/2].

#include <utility>
#include <vector>

#include "uregion/qcore.hpp"

namespace uregion {

inline constexpr double kJordanTol = 1e-10;

struct JordanBlock {
  enum class Kind { OneDim, TwoDim };

  Kind kind = Kind::OneDim;
  int p = 0;           // OneDim: entry of P
  int q = 0;           // OneDim: entry of Q
  double theta = 0.0;  // TwoDim: principal angle

  static JordanBlock one(int p, int q) { return {Kind::OneDim, p, q, 0.0}; }
  static JordanBlock two(double theta) { return {Kind::TwoDim, 0, 0, theta}; }

  std::size_t size() const { return kind == Kind::TwoDim ? 2 : 1; }
  bool is_two() const { return kind == Kind::TwoDim; }
};

struct JordanDecomposition {
  // Unitary; its columns, in order, span the blocks (two columns per TwoDim).
  ComplexMatrix basis;
  // TwoDim blocks by ascending theta, then OneDim blocks by (p, q).
  std::vector<JordanBlock> blocks;

  std::vector<double> angles() const;
};

JordanDecomposition jordan_decompose(const Projector& p, const Projector& q, double tol = kJordanTol);

// Angles of the TwoDim blocks, ascending.
std::vector<double> principal_angles(const Projector& p, const Projector& q, double tol = kJordanTol);

// Canonical block forms conjugated back by the basis.
std::pair<ComplexMatrix, ComplexMatrix> reconstruct(const JordanDecomposition& dec);

}  // namespace uregion
