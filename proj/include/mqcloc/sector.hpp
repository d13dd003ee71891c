#pragma once

// Symmetry-resolved propagation for (1 - p) H_0 + p H_dd.
//
// Both H_0 and H_dd commute with the global spin flip F = prod_i 2 Ix^i and,
// for even N, with the popcount parity P = prod_i 2 Iz^i. Iz anticommutes with F.
// The Hilbert space is split into blocks (parity classes when P is used, a
// single block otherwise); inside a block every state b is paired with its
// complement ~b and the representative is the member with the top bit clear.
// The F = +1 / -1 sectors of a block are spanned by (|r> +- |~r>)/sqrt(2).
//
// Any operator U^dagger Iz U with U generated by such a Hamiltonian is odd
// under F, so it is fully described by its (+,-) block per symmetry block.

#include <cstdint>
#include <memory>
#include <vector>

#include "mqcloc/hamiltonian.hpp"
#include "mqcloc/linalg.hpp"

namespace mqcloc::sector {

class SectorLayout {
 public:
  SectorLayout(int n_spins, bool use_parity = true);

  struct Slot {
    std::uint32_t block;
    std::uint32_t index;
    bool flipped;  // the state is the complement of the representative
  };

  int n_spins() const noexcept { return n_spins_; }
  bool uses_parity() const noexcept { return use_parity_; }
  std::size_t block_count() const noexcept { return reps_.size(); }
  const std::vector<std::uint32_t>& representatives(std::size_t block) const { return reps_[block]; }
  Slot locate(std::uint32_t state) const { return slots_[state]; }

 private:
  int n_spins_;
  bool use_parity_;
  std::vector<std::vector<std::uint32_t>> reps_;
  std::vector<Slot> slots_;
};

using LayoutPtr = std::shared_ptr<const SectorLayout>;

/// Hermitian operator with F A F = -A, stored as <r_k,+|A|r_l,-> per block.
struct FOddOperator {
  LayoutPtr layout;
  std::vector<CMatrix> blocks;
};

FOddOperator sector_iz(LayoutPtr layout);
/// Dense Zeeman-basis matrix; intended for validation at small N.
OperatorMatrix to_dense(const FOddOperator& op);
/// Projects a dense operator onto its (+,-) blocks. Throws a shape error when
/// the operator has weight outside the F-odd block structure beyond `tol`.
FOddOperator from_dense(LayoutPtr layout, const OperatorMatrix& op, double tol = 1e-10);

/// H_eff(p) diagonalized per block and flip sector.
class SectorHamiltonian {
 public:
  SectorHamiltonian(LayoutPtr layout, const SpinSystem& sys, double p);

  struct Block {
    linalg::SymmetricEigen plus;
    linalg::SymmetricEigen minus;
  };

  const SectorLayout& layout() const { return *layout_; }
  const LayoutPtr& layout_ptr() const { return layout_; }
  const Block& block(std::size_t b) const { return blocks_[b]; }
  double p() const noexcept { return p_; }

  /// Sector matrices before diagonalization (for tests).
  static std::pair<RMatrix, RMatrix> sector_matrices(const SectorLayout& layout,
                                                     const SpinSystem& sys, double p,
                                                     std::size_t block);

 private:
  LayoutPtr layout_;
  double p_;
  std::vector<Block> blocks_;
};

/// t -> U(t)^dagger x0 U(t), U(t) = exp(-i H t). The initial operator is
/// rotated into the eigenbasis once; each time point then costs four real
/// matrix products per block.
class SectorTrajectory {
 public:
  SectorTrajectory(std::shared_ptr<const SectorHamiltonian> h, const FOddOperator& x0);

  FOddOperator at(double t) const;

 private:
  std::shared_ptr<const SectorHamiltonian> h_;
  std::vector<CMatrix> eigen_frame_;
};

/// A_M = sum over Zeeman elements of order M of conj(observable_rc) rho_rc,
/// divided by Tr(Iz^2); index M + N. Complex so callers can check residues.
std::vector<cplx> overlap_amplitudes(const FOddOperator& observable, const FOddOperator& rho);

}  // namespace mqcloc::sector
