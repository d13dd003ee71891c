#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "mqcloc/spin_hilbert.hpp"

namespace mqcloc {

/// Dipolar couplings from spin positions: d_ij = prefactor (1 - 3 cos^2 theta_ij) / r_ij^3,
/// theta_ij measured from the z axis.
struct GeometricCouplings {
  std::vector<std::array<double, 3>> positions;  // meters
  double prefactor = 1.0;                        // rad s^-1 m^3
};

/// d_ij drawn uniform in [-1, 1] (times `scale`) from a seeded generator.
struct RandomAllToAllCouplings {
  std::uint64_t seed = 0;
  double scale = 1.0;  // rad/s
};

/// Open chain with equal nearest-neighbour couplings.
struct ChainCouplings {
  double nearest_neighbor_strength = 1.0;  // rad/s
};

struct CouplingModel {
  std::variant<GeometricCouplings, RandomAllToAllCouplings, ChainCouplings> variant;
  /// When set, all couplings are rescaled by one factor so that the RMS
  /// coupling per spin sqrt((1/N) sum_i sum_{j!=i} d_ij^2) equals this value (rad/s).
  std::optional<double> target_second_moment;
};

/// sqrt((1/N) sum_i sum_{j != i} d_ij^2).
double rms_coupling_per_spin(const RMatrix& couplings);

SpinSystem couplings_from_model(const CouplingModel& model, int n_spins);

enum class SigmaKind { dipolar };

struct PerturbationSpec {
  double p = 0.0;
  SigmaKind sigma = SigmaKind::dipolar;

  void validate() const;
};

/// Secular dipolar Hamiltonian sum_{i<j} d_ij [2 Iz Iz - (Ix Ix + Iy Iy)].
OperatorMatrix build_h_dd(const SpinSystem& sys);
/// Double-quantum Hamiltonian -sum_{i<j} d_ij [Ix Ix - Iy Iy].
OperatorMatrix build_h0(const SpinSystem& sys);
/// (1 - p) H_0 + p Sigma.
OperatorMatrix build_h_eff(const SpinSystem& sys, const PerturbationSpec& pert);

struct ColumnEntry {
  std::uint32_t row;
  double value;
};

/// Nonzero entries of column `state` of (1 - p) H_0 + p H_dd. Both operators are
/// real in the Zeeman basis; the diagonal entry is emitted first.
void heff_column(const SpinSystem& sys, double p, std::uint32_t state,
                 std::vector<ColumnEntry>& out);

}  // namespace mqcloc
