#include "uregion/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include <boost/random/normal_distribution.hpp>

#include "uregion/parallel.hpp"

namespace uregion {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kOracleChunk = 8192;

void require_dim(std::size_t d) {
  if (d < 2) throw std::invalid_argument("state dimension must be at least 2");
  if (d > kMaxDim) throw std::invalid_argument("state dimension exceeds the supported maximum");
}

CVector gaussian_vector(std::size_t n, SeededRng& rng) {
  boost::random::normal_distribution<double> normal;
  CVector v(n);
  for (auto& z : v) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = Complex(re, im);
  }
  return v;
}

// Tr(X rho) for Hermitian X and rho, real part only.
double trace_product(const ComplexMatrix& x, const ComplexMatrix& rho) {
  const std::size_t d = x.dim();
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) acc += (x(i, j) * rho(j, i)).real();
  return acc;
}

struct PairKernel {
  ComplexMatrix a;
  ComplexMatrix b;
  ComplexMatrix a2;
  ComplexMatrix b2;

  PairKernel(const ComplexMatrix& a_, const ComplexMatrix& b_) : a(a_), b(b_), a2(a_ * a_), b2(b_ * b_) {}

  VariancePoint pure(std::span<const Complex> psi) const {
    return VariancePoint{detail::clamp_variance(detail::raw_variance_unchecked(a, psi)),
                         detail::clamp_variance(detail::raw_variance_unchecked(b, psi))};
  }
  VariancePoint mixed(const ComplexMatrix& rho) const {
    const double ma = trace_product(a, rho);
    const double mb = trace_product(b, rho);
    return VariancePoint{detail::clamp_variance(trace_product(a2, rho) - ma * ma),
                         detail::clamp_variance(trace_product(b2, rho) - mb * mb)};
  }
};

std::size_t cell_index(double v, std::size_t res) {
  const double x = std::clamp(v, 0.0, 0.25) * 4.0 * static_cast<double>(res);
  return std::min(static_cast<std::size_t>(x), res - 1);
}

enum class Kind { Pure, Mixed, Equatorial, EquatorialScaled, QubitScaled };

}  // namespace

PureState haar_pure(std::size_t dim, SeededRng& rng) {
  require_dim(dim);
  for (;;) {
    auto v = gaussian_vector(dim, rng);
    const double n = norm(v);
    if (n < 1e-150) continue;
    for (auto& z : v) z /= n;
    return PureState(std::move(v));
  }
}

DensityMatrix random_mixed(std::size_t dim, SeededRng& rng) {
  require_dim(dim);
  const ComplexMatrix g(dim, gaussian_vector(dim * dim, rng));
  const ComplexMatrix w = g * g.adjoint();
  ComplexMatrix rho = Complex(1.0 / w.trace().real()) * w;
  // Exact Hermitian symmetry of the stored entries.
  std::vector<Complex> e(rho.entries().begin(), rho.entries().end());
  for (std::size_t i = 0; i < dim; ++i) {
    e[i * dim + i] = e[i * dim + i].real();
    for (std::size_t j = i + 1; j < dim; ++j) e[j * dim + i] = std::conj(e[i * dim + j]);
  }
  return DensityMatrix::trusted(ComplexMatrix(dim, std::move(e)));
}

ComplexMatrix haar_unitary(std::size_t dim, SeededRng& rng) {
  require_dim(dim);
  std::vector<CVector> cols;
  cols.reserve(dim);
  while (cols.size() < dim) {
    auto v = gaussian_vector(dim, rng);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& c : cols) {
        const Complex ip = inner(c, v);
        for (std::size_t r = 0; r < dim; ++r) v[r] -= ip * c[r];
      }
    const double n = norm(v);
    if (n < 1e-8) continue;
    for (auto& z : v) z /= n;
    cols.push_back(std::move(v));
  }
  return ComplexMatrix::from_columns(cols);
}

Projector random_projector(std::size_t dim, std::size_t rank, SeededRng& rng) {
  if (rank > dim) throw std::invalid_argument("projector rank exceeds dimension");
  const auto u = haar_unitary(dim, rng);
  std::vector<Complex> e(dim * dim);
  for (std::size_t k = 0; k < rank; ++k)
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) e[i * dim + j] += u(i, k) * std::conj(u(j, k));
  return Projector::from_matrix(ComplexMatrix(dim, std::move(e)), 1e-9);
}

PureState equatorial_state(double phi, std::size_t dim) {
  require_dim(dim);
  CVector v(dim);
  v[0] = std::cos(phi);
  v[1] = std::sin(phi);
  return PureState::normalized(std::move(v));
}

std::vector<PureState> boundary_states_qubit(std::size_t n, SeededRng& rng, std::size_t dim) {
  std::vector<PureState> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(equatorial_state(2.0 * kPi * rng.uniform(), dim));
  return out;
}

std::pair<Projector, Projector> canonical_pair(double theta, std::size_t dim) {
  require_dim(dim);
  CVector a(dim);
  CVector b(dim);
  a[0] = 1.0;
  b[0] = std::cos(theta);
  b[1] = std::sin(theta);
  return {Projector::rank_one(a), Projector::rank_one(b)};
}

std::vector<VariancePoint> scatter(const ComplexMatrix& a, const ComplexMatrix& b, std::span<const PureState> states) {
  if (a.dim() != b.dim()) throw DimensionMismatch("scatter: observable dimensions differ");
  std::vector<VariancePoint> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(VariancePoint{variance(a, s), variance(b, s)});
  return out;
}

std::vector<VariancePoint> scatter(const ComplexMatrix& a, const ComplexMatrix& b,
                                   std::span<const DensityMatrix> states) {
  if (a.dim() != b.dim()) throw DimensionMismatch("scatter: observable dimensions differ");
  std::vector<VariancePoint> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(VariancePoint{variance(a, s), variance(b, s)});
  return out;
}

OccupancyGrid::OccupancyGrid(std::size_t resolution) : resolution_(resolution), cells_(resolution * resolution) {
  if (resolution == 0) throw std::invalid_argument("grid resolution must be positive");
}

void OccupancyGrid::mark(const VariancePoint& p) {
  set(cell_index(p.dA, resolution_), cell_index(p.dB, resolution_));
}

std::size_t OccupancyGrid::count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

void OccupancyGrid::merge(const OccupancyGrid& other) {
  if (other.resolution_ != resolution_) throw DimensionMismatch("occupancy grids differ in resolution");
  for (std::size_t k = 0; k < cells_.size(); ++k) cells_[k] |= other.cells_[k];
}

OccupancyGrid OccupancyGrid::eroded() const {
  OccupancyGrid out(resolution_);
  const std::size_t r = resolution_;
  for (std::size_t i = 1; i + 1 < r; ++i)
    for (std::size_t j = 1; j + 1 < r; ++j) {
      bool all = true;
      for (std::size_t a = i - 1; a <= i + 1 && all; ++a)
        for (std::size_t b = j - 1; b <= j + 1 && all; ++b) all = marked(a, b);
      if (all) out.set(i, j);
    }
  return out;
}

std::size_t OccupancyGrid::difference(const OccupancyGrid& other) const {
  if (other.resolution_ != resolution_) throw DimensionMismatch("occupancy grids differ in resolution");
  std::size_t n = 0;
  for (std::size_t k = 0; k < cells_.size(); ++k) n += (cells_[k] != other.cells_[k]) ? 1 : 0;
  return n;
}

OccupancyGrid oracle_region(double theta, std::size_t dim, std::size_t n_samples, std::size_t resolution,
                            const SeededRng& rng, const OracleOptions& options) {
  require_dim(dim);
  RegionSpec::make(theta, dim == 2 ? DimClass::Qubit : DimClass::Qudit);
  if (n_samples < resolution * resolution) throw std::invalid_argument("oracle needs at least resolution^2 samples");

  std::vector<Kind> kinds;
  if (options.pure) kinds.insert(kinds.end(), {Kind::Pure, Kind::Pure});
  if (options.mixed) kinds.push_back(Kind::Mixed);
  if (options.sweeps) {
    if (dim == 2) {
      kinds.insert(kinds.end(), {Kind::Equatorial, Kind::Equatorial});
    } else {
      kinds.insert(kinds.end(), {Kind::Equatorial, Kind::EquatorialScaled, Kind::QubitScaled});
    }
  }
  if (kinds.empty()) throw std::invalid_argument("oracle needs at least one state family");

  const auto [pa, pb] = canonical_pair(theta, dim);
  const PairKernel kernel(pa.matrix(), pb.matrix());
  const std::size_t n_chunks = (n_samples + kOracleChunk - 1) / kOracleChunk;
  std::vector<std::vector<std::uint32_t>> hits(n_chunks);

  parallel_chunks(n_chunks, options.threads, [&](std::size_t chunk) {
    SeededRng local = rng.split(chunk);
    const std::size_t begin = chunk * kOracleChunk;
    const std::size_t end = std::min(n_samples, begin + kOracleChunk);
    auto& out = hits[chunk];
    out.reserve(end - begin);
    CVector psi(dim);
    for (std::size_t k = begin; k < end; ++k) {
      VariancePoint p;
      switch (kinds[k % kinds.size()]) {
        case Kind::Pure:
          p = kernel.pure(haar_pure(dim, local).amplitudes());
          break;
        case Kind::Mixed:
          p = kernel.mixed(random_mixed(dim, local).matrix());
          break;
        case Kind::Equatorial: {
          const double phi = 2.0 * kPi * local.uniform();
          std::fill(psi.begin(), psi.end(), Complex{});
          psi[0] = std::cos(phi);
          psi[1] = std::sin(phi);
          p = kernel.pure(psi);
          break;
        }
        case Kind::EquatorialScaled:
        case Kind::QubitScaled: {
          // alpha |v><v| in the qubit block, the rest of the weight on |2>.
          CVector v(2);
          if (kinds[k % kinds.size()] == Kind::EquatorialScaled) {
            const double phi = 2.0 * kPi * local.uniform();
            v = {std::cos(phi), std::sin(phi)};
          } else {
            const auto q = haar_pure(2, local);
            v.assign(q.amplitudes().begin(), q.amplitudes().end());
          }
          const double alpha = local.uniform();
          std::fill(psi.begin(), psi.end(), Complex{});
          psi[0] = std::sqrt(alpha) * v[0];
          psi[1] = std::sqrt(alpha) * v[1];
          psi[2] = std::sqrt(1.0 - alpha);
          p = kernel.pure(psi);
          break;
        }
      }
      out.push_back(static_cast<std::uint32_t>(cell_index(p.dA, resolution) * resolution +
                                               cell_index(p.dB, resolution)));
    }
  });

  OccupancyGrid grid(resolution);
  for (const auto& chunk : hits)
    for (std::uint32_t idx : chunk) grid.set(idx / resolution, idx % resolution);
  return grid;
}

std::string_view to_string(SampleFamily f) {
  switch (f) {
    case SampleFamily::Pure: return "pure";
    case SampleFamily::Mixed: return "mixed";
    case SampleFamily::Boundary: return "boundary";
  }
  return "?";
}

std::vector<VariancePoint> sample_scatter(double theta, std::size_t dim, std::size_t n, SampleFamily family,
                                          const SeededRng& rng, unsigned threads) {
  require_dim(dim);
  RegionSpec::make(theta, dim == 2 ? DimClass::Qubit : DimClass::Qudit);
  const auto [pa, pb] = canonical_pair(theta, dim);
  const std::size_t n_chunks = (n + kOracleChunk - 1) / kOracleChunk;
  std::vector<std::vector<VariancePoint>> parts(n_chunks);
  parallel_chunks(n_chunks, threads, [&](std::size_t chunk) {
    SeededRng local = rng.split(chunk);
    const std::size_t count = std::min(n, (chunk + 1) * kOracleChunk) - chunk * kOracleChunk;
    if (family == SampleFamily::Mixed) {
      std::vector<DensityMatrix> states;
      states.reserve(count);
      for (std::size_t k = 0; k < count; ++k) states.push_back(random_mixed(dim, local));
      parts[chunk] = scatter(pa.matrix(), pb.matrix(), states);
      return;
    }
    std::vector<PureState> states;
    if (family == SampleFamily::Pure) {
      states.reserve(count);
      for (std::size_t k = 0; k < count; ++k) states.push_back(haar_pure(dim, local));
    } else {
      states = boundary_states_qubit(count, local, dim);
    }
    parts[chunk] = scatter(pa.matrix(), pb.matrix(), states);
  });
  std::vector<VariancePoint> out;
  out.reserve(n);
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  return out;
}

std::array<PureState, 4> sic_tetrahedron() {
  const double a = -1.0 / std::sqrt(3.0);
  const double b = std::sqrt(2.0 / 3.0);
  const Complex w = std::polar(1.0, 2.0 * kPi / 3.0);
  return {PureState::basis(2, 0), PureState::normalized(CVector{a, b}), PureState::normalized(CVector{a, w * b}),
          PureState::normalized(CVector{a, std::conj(w) * b})};
}

double sic_variance_sum(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw DimensionMismatch("sic_variance_sum needs a qubit state");
  double total = 0.0;
  for (const auto& s : sic_tetrahedron()) total += variance(ComplexMatrix::outer(s.amplitudes(), s.amplitudes()), rho);
  return total;
}

double sic_variance_sum(const PureState& psi) {
  if (psi.dim() != 2) throw DimensionMismatch("sic_variance_sum needs a qubit state");
  double total = 0.0;
  for (const auto& s : sic_tetrahedron()) total += variance(ComplexMatrix::outer(s.amplitudes(), s.amplitudes()), psi);
  return total;
}

}  // namespace uregion
