#include "mqcloc/sector.hpp"

#include <bit>
#include <cmath>

namespace mqcloc::sector {

namespace {

int twice_m(std::uint32_t state, int n_spins) {
  return 2 * std::popcount(state) - n_spins;
}

}  // namespace

SectorLayout::SectorLayout(int n_spins, bool use_parity)
    : n_spins_(n_spins), use_parity_(use_parity && n_spins % 2 == 0) {
  if (n_spins < 1 || n_spins > kMaxSpins) {
    fail(ErrorKind::size, "spin count " + std::to_string(n_spins) + " outside [1, " +
                              std::to_string(kMaxSpins) + "]");
  }
  const std::uint32_t dim = 1u << n_spins;
  const std::uint32_t mask = dim - 1;
  const std::uint32_t half = dim >> 1;
  reps_.assign(use_parity_ ? 2 : 1, {});
  slots_.resize(dim);
  for (std::uint32_t r = 0; r < half; ++r) {
    const std::uint32_t block = use_parity_ ? (std::popcount(r) & 1u) : 0u;
    const auto index = static_cast<std::uint32_t>(reps_[block].size());
    reps_[block].push_back(r);
    slots_[r] = {block, index, false};
    slots_[~r & mask] = {block, index, true};
  }
}

FOddOperator sector_iz(LayoutPtr layout) {
  FOddOperator op{layout, {}};
  for (std::size_t b = 0; b < layout->block_count(); ++b) {
    const auto& reps = layout->representatives(b);
    CMatrix x = CMatrix::Zero(reps.size(), reps.size());
    for (std::size_t k = 0; k < reps.size(); ++k) x(k, k) = 0.5 * twice_m(reps[k], layout->n_spins());
    op.blocks.push_back(std::move(x));
  }
  return op;
}

OperatorMatrix to_dense(const FOddOperator& op) {
  const SectorLayout& layout = *op.layout;
  const std::uint32_t dim = 1u << layout.n_spins();
  const std::uint32_t mask = dim - 1;
  CMatrix out = CMatrix::Zero(dim, dim);
  for (std::size_t b = 0; b < layout.block_count(); ++b) {
    const auto& reps = layout.representatives(b);
    const CMatrix& x = op.blocks[b];
    for (std::size_t l = 0; l < reps.size(); ++l) {
      for (std::size_t k = 0; k < reps.size(); ++k) {
        const cplx direct = x(k, l);
        const cplx swapped = std::conj(x(l, k));
        for (int fa = 0; fa < 2; ++fa) {
          for (int fb = 0; fb < 2; ++fb) {
            const double sa = fa ? -1.0 : 1.0;
            const double sb = fb ? -1.0 : 1.0;
            const std::uint32_t a = fa ? (~reps[k] & mask) : reps[k];
            const std::uint32_t c = fb ? (~reps[l] & mask) : reps[l];
            out(a, c) = 0.5 * (sb * direct + sa * swapped);
          }
        }
      }
    }
  }
  return {std::move(out), OperatorKind::hermitian};
}

FOddOperator from_dense(LayoutPtr layout, const OperatorMatrix& op, double tol) {
  const std::uint32_t dim = 1u << layout->n_spins();
  if (op.dim() != dim) fail(ErrorKind::shape, "operator dimension does not match the layout");
  const std::uint32_t mask = dim - 1;
  FOddOperator result{layout, {}};
  for (std::size_t b = 0; b < layout->block_count(); ++b) {
    const auto& reps = layout->representatives(b);
    CMatrix x(reps.size(), reps.size());
    for (std::size_t l = 0; l < reps.size(); ++l) {
      const std::uint32_t rl = reps[l], fl = ~reps[l] & mask;
      for (std::size_t k = 0; k < reps.size(); ++k) {
        const std::uint32_t rk = reps[k], fk = ~reps[k] & mask;
        const auto& e = op.entries;
        x(k, l) = 0.5 * (e(rk, rl) - e(rk, fl) + e(fk, rl) - e(fk, fl));
      }
    }
    result.blocks.push_back(std::move(x));
  }
  const double defect = max_abs(to_dense(result).entries - op.entries);
  if (defect > tol * std::max(1.0, max_abs(op.entries))) {
    fail(ErrorKind::shape, "operator is not an F-odd Hermitian operator on this layout");
  }
  return result;
}

std::pair<RMatrix, RMatrix> SectorHamiltonian::sector_matrices(const SectorLayout& layout,
                                                               const SpinSystem& sys, double p,
                                                               std::size_t block) {
  const auto& reps = layout.representatives(block);
  const auto n = static_cast<Eigen::Index>(reps.size());
  RMatrix plus = RMatrix::Zero(n, n);
  RMatrix minus = RMatrix::Zero(n, n);
  std::vector<ColumnEntry> column;
  for (Eigen::Index l = 0; l < n; ++l) {
    heff_column(sys, p, reps[l], column);
    for (const auto& e : column) {
      const auto slot = layout.locate(e.row);
      if (slot.block != block) fail(ErrorKind::diagnostic, "Hamiltonian couples distinct symmetry blocks");
      plus(slot.index, l) += e.value;
      minus(slot.index, l) += slot.flipped ? -e.value : e.value;
    }
  }
  return {std::move(plus), std::move(minus)};
}

SectorHamiltonian::SectorHamiltonian(LayoutPtr layout, const SpinSystem& sys, double p)
    : layout_(std::move(layout)), p_(p) {
  sys.validate();
  PerturbationSpec{p, SigmaKind::dipolar}.validate();
  if (sys.n_spins != layout_->n_spins()) fail(ErrorKind::shape, "layout and spin system sizes differ");
  for (std::size_t b = 0; b < layout_->block_count(); ++b) {
    auto [plus, minus] = sector_matrices(*layout_, sys, p, b);
    blocks_.push_back({linalg::eigh(std::move(plus)), linalg::eigh(std::move(minus))});
  }
}

SectorTrajectory::SectorTrajectory(std::shared_ptr<const SectorHamiltonian> h, const FOddOperator& x0)
    : h_(std::move(h)) {
  if (x0.layout->n_spins() != h_->layout().n_spins() ||
      x0.layout->uses_parity() != h_->layout().uses_parity() ||
      x0.blocks.size() != h_->layout().block_count()) {
    fail(ErrorKind::shape, "operator block structure does not match the Hamiltonian");
  }
  for (std::size_t b = 0; b < x0.blocks.size(); ++b) {
    const auto& blk = h_->block(b);
    const RMatrix& qp = blk.plus.vectors;
    const RMatrix& qm = blk.minus.vectors;
    const RMatrix re = qp.transpose() * x0.blocks[b].real() * qm;
    const RMatrix im = qp.transpose() * x0.blocks[b].imag() * qm;
    CMatrix w(re.rows(), re.cols());
    w.real() = re;
    w.imag() = im;
    eigen_frame_.push_back(std::move(w));
  }
}

FOddOperator SectorTrajectory::at(double t) const {
  FOddOperator out{h_->layout_ptr(), {}};
  for (std::size_t b = 0; b < eigen_frame_.size(); ++b) {
    const auto& blk = h_->block(b);
    const CMatrix& w = eigen_frame_[b];
    const auto n = w.rows();
    Eigen::VectorXcd left(n), right(n);
    for (Eigen::Index k = 0; k < n; ++k) left[k] = std::polar(1.0, blk.plus.values[k] * t);
    for (Eigen::Index l = 0; l < n; ++l) right[l] = std::polar(1.0, -blk.minus.values[l] * t);

    RMatrix stacked(n, 2 * n);
    for (Eigen::Index l = 0; l < n; ++l) {
      for (Eigen::Index k = 0; k < n; ++k) {
        const cplx y = w(k, l) * left[k] * right[l];
        stacked(k, l) = y.real();
        stacked(k, n + l) = y.imag();
      }
    }
    const RMatrix half = blk.plus.vectors * stacked;
    const RMatrix& qm = blk.minus.vectors;
    CMatrix x(n, n);
    x.real() = half.leftCols(n) * qm.transpose();
    x.imag() = half.rightCols(n) * qm.transpose();
    out.blocks.push_back(std::move(x));
  }
  return out;
}

std::vector<cplx> overlap_amplitudes(const FOddOperator& observable, const FOddOperator& rho) {
  const SectorLayout& layout = *rho.layout;
  const int n_spins = layout.n_spins();
  if (observable.layout->n_spins() != n_spins ||
      observable.layout->uses_parity() != layout.uses_parity() ||
      observable.blocks.size() != rho.blocks.size()) {
    fail(ErrorKind::shape, "operators live on different sector layouts");
  }
  std::vector<cplx> amp(2 * n_spins + 1, cplx{0.0, 0.0});
  for (std::size_t b = 0; b < layout.block_count(); ++b) {
    const auto& reps = layout.representatives(b);
    const auto n = static_cast<Eigen::Index>(reps.size());
    std::vector<int> tm(n);
    for (Eigen::Index k = 0; k < n; ++k) tm[k] = twice_m(reps[k], n_spins);
    const CMatrix& x = rho.blocks[b];
    const CMatrix& y = observable.blocks[b];
    const CMatrix xt = x.adjoint();
    const CMatrix yt = y.adjoint();
    // Pairs (r_k, r_l) and (~r_k, ~r_l) contribute the same product at +-M,
    // likewise (r_k, ~r_l) and (~r_k, r_l).
    for (Eigen::Index l = 0; l < n; ++l) {
      for (Eigen::Index k = 0; k < n; ++k) {
        const cplx xs = x(k, l) + xt(k, l), xd = xt(k, l) - x(k, l);
        const cplx ys = y(k, l) + yt(k, l), yd = yt(k, l) - y(k, l);
        const cplx same = 0.25 * std::conj(ys) * xs;
        const cplx cross = 0.25 * std::conj(yd) * xd;
        const int m_same = (tm[k] - tm[l]) / 2;
        const int m_cross = (tm[k] + tm[l]) / 2;
        amp[n_spins + m_same] += same;
        amp[n_spins - m_same] += same;
        amp[n_spins + m_cross] += cross;
        amp[n_spins - m_cross] += cross;
      }
    }
  }
  const double norm = iz_norm_squared(n_spins);
  for (auto& a : amp) a /= norm;
  return amp;
}

}  // namespace mqcloc::sector
