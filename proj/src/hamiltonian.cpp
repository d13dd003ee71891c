#include "mqcloc/hamiltonian.hpp"

#include <cmath>
#include <random>

namespace mqcloc {

namespace {

// Uniform in [-1, 1) from the top 53 bits; independent of the standard
// library's distribution implementation.
double symmetric_unit(std::mt19937_64& gen) {
  return 2.0 * std::ldexp(static_cast<double>(gen() >> 11), -53) - 1.0;
}

RMatrix geometric_couplings(const GeometricCouplings& g, int n) {
  if (n < 2) fail(ErrorKind::size, "geometric couplings need at least 2 spins");
  if (static_cast<int>(g.positions.size()) != n) {
    fail(ErrorKind::shape, "expected " + std::to_string(n) + " positions, got " +
                               std::to_string(g.positions.size()));
  }
  RMatrix d = RMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = g.positions[j][0] - g.positions[i][0];
      const double dy = g.positions[j][1] - g.positions[i][1];
      const double dz = g.positions[j][2] - g.positions[i][2];
      const double r2 = dx * dx + dy * dy + dz * dz;
      if (!(r2 > 0.0)) {
        fail(ErrorKind::geometry, "spins " + std::to_string(i) + " and " + std::to_string(j) +
                                      " coincide");
      }
      const double r = std::sqrt(r2);
      const double cos2 = dz * dz / r2;
      d(i, j) = d(j, i) = g.prefactor * (1.0 - 3.0 * cos2) / (r2 * r);
    }
  }
  return d;
}

RMatrix random_couplings(const RandomAllToAllCouplings& m, int n) {
  std::mt19937_64 gen(m.seed);
  RMatrix d = RMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i) = m.scale * symmetric_unit(gen);
  }
  return d;
}

RMatrix chain_couplings(const ChainCouplings& c, int n) {
  if (n < 2) fail(ErrorKind::size, "chain couplings need at least 2 spins");
  RMatrix d = RMatrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) d(i, i + 1) = d(i + 1, i) = c.nearest_neighbor_strength;
  return d;
}

}  // namespace

double rms_coupling_per_spin(const RMatrix& couplings) {
  if (couplings.rows() == 0) return 0.0;
  return std::sqrt(couplings.squaredNorm() / static_cast<double>(couplings.rows()));
}

SpinSystem couplings_from_model(const CouplingModel& model, int n_spins) {
  if (n_spins < 1 || n_spins > kMaxSpins) {
    fail(ErrorKind::size, "spin count " + std::to_string(n_spins) + " outside [1, " +
                              std::to_string(kMaxSpins) + "]");
  }
  RMatrix d = std::visit(
      [n_spins](const auto& v) -> RMatrix {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GeometricCouplings>) return geometric_couplings(v, n_spins);
        else if constexpr (std::is_same_v<T, RandomAllToAllCouplings>) return random_couplings(v, n_spins);
        else return chain_couplings(v, n_spins);
      },
      model.variant);

  if (model.target_second_moment) {
    const double target = *model.target_second_moment;
    if (!(target > 0.0) || !std::isfinite(target)) {
      fail(ErrorKind::domain, "target second moment must be positive");
    }
    const double rms = rms_coupling_per_spin(d);
    if (rms == 0.0) fail(ErrorKind::degenerate, "cannot rescale an all-zero coupling matrix");
    d *= target / rms;
  }
  return make_spin_system(std::move(d));
}

void PerturbationSpec::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) {
    fail(ErrorKind::domain, "perturbation strength p=" + std::to_string(p) + " outside [0, 1]");
  }
}

void heff_column(const SpinSystem& sys, double p, std::uint32_t state,
                 std::vector<ColumnEntry>& out) {
  out.clear();
  const int n = sys.n_spins;
  double diag = 0.0;
  const std::size_t first = out.size();
  out.push_back({state, 0.0});
  for (int i = 0; i < n; ++i) {
    const bool up_i = (state >> i) & 1u;
    for (int j = i + 1; j < n; ++j) {
      const double d = sys.couplings(i, j);
      if (d == 0.0) continue;
      const bool aligned = up_i == static_cast<bool>((state >> j) & 1u);
      // 2 Iz Iz contributes +-d/2; flip-flop and flip-flip both carry -d/2.
      diag += p * (aligned ? 0.5 * d : -0.5 * d);
      const double weight = aligned ? (1.0 - p) : p;
      if (weight != 0.0) {
        out.push_back({state ^ ((1u << i) | (1u << j)), -0.5 * d * weight});
      }
    }
  }
  out[first].value = diag;
}

namespace {

OperatorMatrix dense_from_columns(const SpinSystem& sys, double p) {
  sys.validate();
  const std::size_t dim = std::size_t{1} << sys.n_spins;
  CMatrix h = CMatrix::Zero(dim, dim);
  std::vector<ColumnEntry> column;
  for (std::size_t b = 0; b < dim; ++b) {
    heff_column(sys, p, static_cast<std::uint32_t>(b), column);
    for (const auto& e : column) h(e.row, b) += e.value;
  }
  return {std::move(h), OperatorKind::hermitian};
}

}  // namespace

OperatorMatrix build_h_dd(const SpinSystem& sys) { return dense_from_columns(sys, 1.0); }

OperatorMatrix build_h0(const SpinSystem& sys) { return dense_from_columns(sys, 0.0); }

OperatorMatrix build_h_eff(const SpinSystem& sys, const PerturbationSpec& pert) {
  pert.validate();
  if (pert.p == 0.0) return build_h0(sys);
  if (pert.p == 1.0) return build_h_dd(sys);
  OperatorMatrix h0 = build_h0(sys);
  const OperatorMatrix hdd = build_h_dd(sys);
  h0.entries = (1.0 - pert.p) * h0.entries + pert.p * hdd.entries;
  return h0;
}

}  // namespace mqcloc
