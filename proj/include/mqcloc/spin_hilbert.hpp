#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "mqcloc/errors.hpp"

namespace mqcloc {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Largest spin count accepted by the basis constructor.
inline constexpr int kMaxSpins = 14;

enum class Axis { x, y, z };

/// N spin-1/2 particles with pairwise couplings d_ij in rad/s.
struct SpinSystem {
  int n_spins = 0;
  RMatrix couplings;  // symmetric, zero diagonal
  std::string label;

  /// Throws if the coupling matrix is not square, symmetric with zero
  /// diagonal, or if n_spins is out of range.
  void validate() const;
};

SpinSystem make_spin_system(RMatrix couplings, std::string label = {});

/// Zeeman product basis. Index b is a bit pattern: bit i set means spin i up.
class ZeemanBasis {
 public:
  ZeemanBasis() = default;
  explicit ZeemanBasis(int n_spins);

  int n_spins() const noexcept { return n_spins_; }
  std::size_t dim() const noexcept { return std::size_t{1} << n_spins_; }

  /// Total magnetic quantum number of basis state b.
  double m(std::size_t b) const { return 0.5 * twice_m_[b]; }
  /// 2m(b) as an integer, exact for all N.
  int twice_m(std::size_t b) const { return twice_m_[b]; }
  const std::vector<double>& m_of() const noexcept { return m_of_; }

 private:
  int n_spins_ = 0;
  std::vector<int> twice_m_;
  std::vector<double> m_of_;
};

ZeemanBasis build_basis(int n_spins, int max_spins = kMaxSpins);

enum class OperatorKind { hermitian, unitary, general };

/// Dense operator on the 2^N Hilbert space.
struct OperatorMatrix {
  CMatrix entries;
  OperatorKind kind = OperatorKind::general;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(entries.rows()); }

  /// Max-norm deviation from the property implied by `kind`.
  double hermiticity_defect() const;
  double unitarity_defect() const;
  /// Throws a kind error if the tagged property fails its tolerance
  /// (1e-12 relative for hermitian, 1e-10 for unitary).
  void check_kind() const;
};

OperatorMatrix single_spin_op(const ZeemanBasis& basis, int site, Axis axis);
OperatorMatrix collective_iz(const ZeemanBasis& basis);

/// Coherence order M = m(row) - m(col).
int coherence_order(const ZeemanBasis& basis, std::size_t row, std::size_t col);

/// Tr(Iz^2) = N 2^N / 4.
double iz_norm_squared(int n_spins);

double max_abs(const CMatrix& m);

}  // namespace mqcloc
