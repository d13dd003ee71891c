#include "mqcloc/spin_hilbert.hpp"

#include <bit>
#include <cmath>

namespace mqcloc {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::size: return "size";
    case ErrorKind::index: return "index";
    case ErrorKind::domain: return "domain";
    case ErrorKind::kind: return "kind";
    case ErrorKind::shape: return "shape";
    case ErrorKind::geometry: return "geometry";
    case ErrorKind::aliasing: return "aliasing";
    case ErrorKind::degenerate: return "degenerate-input";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::diagnostic: return "diagnostic";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

void SpinSystem::validate() const {
  if (n_spins < 1 || n_spins > kMaxSpins) {
    fail(ErrorKind::size, "spin count " + std::to_string(n_spins) + " outside [1, " +
                              std::to_string(kMaxSpins) + "]");
  }
  if (couplings.rows() != n_spins || couplings.cols() != n_spins) {
    fail(ErrorKind::shape, "coupling matrix must be " + std::to_string(n_spins) + "x" +
                               std::to_string(n_spins));
  }
  for (int i = 0; i < n_spins; ++i) {
    if (couplings(i, i) != 0.0) fail(ErrorKind::domain, "coupling diagonal must be zero");
    for (int j = i + 1; j < n_spins; ++j) {
      if (!std::isfinite(couplings(i, j))) fail(ErrorKind::domain, "non-finite coupling");
      if (couplings(i, j) != couplings(j, i)) {
        fail(ErrorKind::domain, "coupling matrix must be symmetric");
      }
    }
  }
}

SpinSystem make_spin_system(RMatrix couplings, std::string label) {
  SpinSystem sys{static_cast<int>(couplings.rows()), std::move(couplings), std::move(label)};
  sys.validate();
  return sys;
}

ZeemanBasis::ZeemanBasis(int n_spins) : n_spins_(n_spins) {
  const std::size_t d = dim();
  twice_m_.resize(d);
  m_of_.resize(d);
  for (std::size_t b = 0; b < d; ++b) {
    twice_m_[b] = 2 * std::popcount(static_cast<std::uint64_t>(b)) - n_spins;
    m_of_[b] = 0.5 * twice_m_[b];
  }
}

ZeemanBasis build_basis(int n_spins, int max_spins) {
  if (n_spins < 1 || n_spins > max_spins) {
    fail(ErrorKind::size, "spin count " + std::to_string(n_spins) + " outside [1, " +
                              std::to_string(max_spins) + "]");
  }
  return ZeemanBasis(n_spins);
}

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double OperatorMatrix::hermiticity_defect() const {
  return max_abs(entries - entries.adjoint());
}

double OperatorMatrix::unitarity_defect() const {
  const auto n = entries.rows();
  return max_abs(entries.adjoint() * entries - CMatrix::Identity(n, n));
}

void OperatorMatrix::check_kind() const {
  if (entries.rows() != entries.cols()) fail(ErrorKind::shape, "operator must be square");
  switch (kind) {
    case OperatorKind::hermitian: {
      const double scale = std::max(max_abs(entries), 1e-300);
      if (hermiticity_defect() > 1e-12 * scale) {
        fail(ErrorKind::kind, "operator tagged hermitian is not hermitian");
      }
      break;
    }
    case OperatorKind::unitary:
      if (unitarity_defect() > 1e-10) fail(ErrorKind::kind, "operator tagged unitary is not unitary");
      break;
    case OperatorKind::general:
      break;
  }
}

OperatorMatrix single_spin_op(const ZeemanBasis& basis, int site, Axis axis) {
  if (site < 0 || site >= basis.n_spins()) {
    fail(ErrorKind::index, "site " + std::to_string(site) + " out of range for " +
                               std::to_string(basis.n_spins()) + " spins");
  }
  const std::size_t d = basis.dim();
  const std::size_t mask = std::size_t{1} << site;
  CMatrix op = CMatrix::Zero(d, d);
  for (std::size_t b = 0; b < d; ++b) {
    const bool up = (b & mask) != 0;
    switch (axis) {
      case Axis::z:
        op(b, b) = up ? 0.5 : -0.5;
        break;
      case Axis::x:
        op(b ^ mask, b) = 0.5;
        break;
      case Axis::y:
        // <up|Iy|down> = -i/2, <down|Iy|up> = +i/2
        op(b ^ mask, b) = up ? cplx(0.0, 0.5) : cplx(0.0, -0.5);
        break;
    }
  }
  return {std::move(op), OperatorKind::hermitian};
}

OperatorMatrix collective_iz(const ZeemanBasis& basis) {
  const std::size_t d = basis.dim();
  CMatrix op = CMatrix::Zero(d, d);
  for (std::size_t b = 0; b < d; ++b) op(b, b) = basis.m(b);
  return {std::move(op), OperatorKind::hermitian};
}

int coherence_order(const ZeemanBasis& basis, std::size_t row, std::size_t col) {
  if (row >= basis.dim() || col >= basis.dim()) fail(ErrorKind::index, "basis index out of range");
  return (basis.twice_m(row) - basis.twice_m(col)) / 2;
}

double iz_norm_squared(int n_spins) {
  return 0.25 * n_spins * std::ldexp(1.0, n_spins);
}

}  // namespace mqcloc
