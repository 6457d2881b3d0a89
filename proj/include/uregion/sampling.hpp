#pragma once

// Seeded random states and the brute-force occupancy oracle used to check
// the analytic regions from the state side.

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "uregion/qcore.hpp"
#include "uregion/regions.hpp"
#include "uregion/rng.hpp"

namespace uregion {

// Normalized vector of i.i.d. standard complex Gaussians (Haar measure).
PureState haar_pure(std::size_t dim, SeededRng& rng);
// G G^dagger / Tr(G G^dagger) for a square complex Ginibre G (Hilbert-Schmidt measure).
DensityMatrix random_mixed(std::size_t dim, SeededRng& rng);
// Haar-random dim x dim unitary (QR of a Ginibre matrix with phase fix).
ComplexMatrix haar_unitary(std::size_t dim, SeededRng& rng);
// V V^dagger for the first `rank` columns of a Haar unitary.
Projector random_projector(std::size_t dim, std::size_t rank, SeededRng& rng);

// cos(phi)|0> + sin(phi)|1> with phi uniform in [0, 2 pi), i.e. real
// amplitudes with relative phase 0 or pi, embedded in `dim` modes with the
// remaining amplitudes exactly zero.
std::vector<PureState> boundary_states_qubit(std::size_t n, SeededRng& rng, std::size_t dim = 2);
PureState equatorial_state(double phi, std::size_t dim = 2);

// A = |0><0| and B = |b><b| with b = cos(theta)|0> + sin(theta)|1> in `dim` modes.
std::pair<Projector, Projector> canonical_pair(double theta, std::size_t dim);

// One (var A, var B) point per state. Coordinates are raw variances; for
// projector pairs they lie in [0, 1/4].
std::vector<VariancePoint> scatter(const ComplexMatrix& a, const ComplexMatrix& b, std::span<const PureState> states);
std::vector<VariancePoint> scatter(const ComplexMatrix& a, const ComplexMatrix& b,
                                   std::span<const DensityMatrix> states);

class OccupancyGrid {
 public:
  explicit OccupancyGrid(std::size_t resolution);

  std::size_t resolution() const { return resolution_; }
  // Cell (i, j) covers [i/(4 res), (i+1)/(4 res)) x [j/(4 res), (j+1)/(4 res)).
  // The closed upper edge 1/4 belongs to the last cell.
  void mark(const VariancePoint& p);
  bool marked(std::size_t i, std::size_t j) const { return cells_[i * resolution_ + j] != 0; }
  void set(std::size_t i, std::size_t j) { cells_[i * resolution_ + j] = 1; }
  std::size_t count() const;
  double fraction() const { return static_cast<double>(count()) / static_cast<double>(cells_.size()); }
  // Boolean OR; associative and commutative.
  void merge(const OccupancyGrid& other);
  // Cells whose 3x3 neighbourhood is fully marked (out-of-box neighbours count as unmarked).
  OccupancyGrid eroded() const;
  // Number of cells marked in exactly one of the two grids.
  std::size_t difference(const OccupancyGrid& other) const;

  friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

 private:
  std::size_t resolution_;
  std::vector<std::uint8_t> cells_;
};

struct OracleOptions {
  bool pure = true;    // Haar pure states in d modes
  bool mixed = true;   // Hilbert-Schmidt mixed states in d modes
  bool sweeps = true;  // equatorial boundary states and, for d >= 3, alpha-scaled qubit blocks
  unsigned threads = 1;
};

// Marks the cells hit by sampled states for the canonical pair at theta.
// Work is split into fixed chunks, chunk k drawing from rng.split(k), so the
// grid is identical for every thread count.
OccupancyGrid oracle_region(double theta, std::size_t dim, std::size_t n_samples, std::size_t resolution,
                            const SeededRng& rng, const OracleOptions& options = {});

enum class SampleFamily { Pure, Mixed, Boundary };
std::string_view to_string(SampleFamily f);

// n variance points for the canonical pair at theta in `dim` modes. States
// are drawn in fixed chunks, chunk k from rng.split(k), so the list is the
// same for every thread count.
std::vector<VariancePoint> sample_scatter(double theta, std::size_t dim, std::size_t n, SampleFamily family,
                                          const SeededRng& rng, unsigned threads = 1);

// Four qubit states forming a regular tetrahedron on the Bloch sphere.
std::array<PureState, 4> sic_tetrahedron();
// Sum of the variances of the four tetrahedron projectors.
double sic_variance_sum(const DensityMatrix& rho);
double sic_variance_sum(const PureState& psi);

}  // namespace uregion
