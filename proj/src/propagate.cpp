#include "mqcloc/propagate.hpp"

#include <cmath>
#include <utility>

namespace mqcloc {

std::string to_string(BackendKind kind) {
  return kind == BackendKind::eigen ? "eigen" : "trotter";
}

BackendKind backend_from_string(const std::string& name) {
  if (name == "eigen") return BackendKind::eigen;
  if (name == "trotter") return BackendKind::trotter;
  fail(ErrorKind::config, "unknown backend '" + name + "' (expected eigen or trotter)");
}

void CycleSchedule::validate() const {
  if (!(tau0 >= 0.0) || !(tau_sigma >= 0.0) || !(tau_c() > 0.0) || !std::isfinite(tau_c())) {
    fail(ErrorKind::domain, "cycle durations must be nonnegative with tau0 + tau_sigma > 0");
  }
  if (n_cycles < 0 || n_prep_cycles < 0) fail(ErrorKind::domain, "cycle counts must be >= 0");
}

CycleSchedule CycleSchedule::with_strength(double tau0, double p, int n_cycles, int n_prep_cycles) {
  if (!(p >= 0.0 && p < 1.0)) {
    fail(ErrorKind::domain, "p=" + std::to_string(p) + " outside [0, 1) for a schedule with tau0 > 0");
  }
  if (!(tau0 > 0.0)) fail(ErrorKind::domain, "tau0 must be positive");
  CycleSchedule s{tau0, tau0 * p / (1.0 - p), n_cycles, n_prep_cycles};
  s.validate();
  return s;
}

namespace {

void require_hermitian(const OperatorMatrix& h) {
  if (h.entries.rows() != h.entries.cols()) fail(ErrorKind::shape, "generator must be square");
  const double scale = std::max(max_abs(h.entries), 1e-300);
  if (h.hermiticity_defect() > 1e-12 * scale) {
    fail(ErrorKind::kind, "propagator generator is not hermitian");
  }
}

Eigen::VectorXcd phases(const RVector& energies, double t) {
  Eigen::VectorXcd ph(energies.size());
  for (Eigen::Index k = 0; k < energies.size(); ++k) ph[k] = std::polar(1.0, -energies[k] * t);
  return ph;
}

}  // namespace

SpectralPropagator::SpectralPropagator(const OperatorMatrix& h) {
  require_hermitian(h);
  eig_ = linalg::eigh(h.entries);
}

Propagator SpectralPropagator::at(double t) const {
  return {{linalg::reconstruct(eig_.vectors, phases(eig_.values, t)), OperatorKind::unitary}, t};
}

OperatorMatrix SpectralPropagator::evolve(const OperatorMatrix& a, double t) const {
  if (a.dim() != static_cast<std::size_t>(eig_.vectors.rows())) {
    fail(ErrorKind::shape, "operator dimension does not match the generator");
  }
  const CMatrix& q = eig_.vectors;
  // In the eigenbasis: (U^dagger A U)_kl = A_kl exp(i (e_k - e_l) t).
  CMatrix b = q.adjoint() * a.entries * q;
  const Eigen::VectorXcd ph = phases(eig_.values, t);
  b = ph.conjugate().asDiagonal() * b * ph.asDiagonal();
  return {q * b * q.adjoint(), a.kind};
}

Propagator propagator_of(const OperatorMatrix& h, double t) {
  return SpectralPropagator(h).at(t);
}

OperatorMatrix evolve_observable(const OperatorMatrix& a, const Propagator& u) {
  if (a.dim() != u.u.dim()) fail(ErrorKind::shape, "operator and propagator dimensions differ");
  return {u.u.entries.adjoint() * a.entries * u.u.entries, a.kind};
}

namespace {

using Gate = Eigen::Matrix4cd;

// Local index k = bit_i + 2 bit_j.
void apply_gate_left(CMatrix& m, const Gate& g, int i, int j) {
  const std::size_t dim = static_cast<std::size_t>(m.rows());
  const std::size_t mi = std::size_t{1} << i;
  const std::size_t mj = std::size_t{1} << j;
  const std::size_t idx_offsets[4] = {0, mi, mj, mi | mj};
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    cplx* col = m.col(c).data();
    for (std::size_t b = 0; b < dim; ++b) {
      if (b & (mi | mj)) continue;
      Eigen::Vector4cd v;
      for (int k = 0; k < 4; ++k) v[k] = col[b | idx_offsets[k]];
      const Eigen::Vector4cd w = g * v;
      for (int k = 0; k < 4; ++k) col[b | idx_offsets[k]] = w[k];
    }
  }
}

struct Bond {
  int i;
  int j;
  Gate half_step;
};

std::vector<Bond> bond_gates(const SpinSystem& sys, double p, double dt) {
  std::vector<Bond> bonds;
  for (int i = 0; i < sys.n_spins; ++i) {
    for (int j = i + 1; j < sys.n_spins; ++j) {
      const double d = sys.couplings(i, j);
      if (d == 0.0) continue;
      RMatrix pair(2, 2);
      pair << 0.0, d, d, 0.0;
      const OperatorMatrix h = build_h_eff(make_spin_system(pair), {p, SigmaKind::dipolar});
      const auto eig = linalg::eigh(CMatrix(h.entries));
      bonds.push_back({i, j, linalg::reconstruct(eig.vectors, phases(eig.values, 0.5 * dt))});
    }
  }
  return bonds;
}

CMatrix matrix_power(CMatrix base, long long n) {
  CMatrix result = CMatrix::Identity(base.rows(), base.cols());
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

}  // namespace

Propagator trotter_propagator(const SpinSystem& sys, const PerturbationSpec& pert, double t,
                              double step) {
  sys.validate();
  pert.validate();
  if (!(step > 0.0)) fail(ErrorKind::domain, "trotter step must be positive");
  const std::size_t dim = std::size_t{1} << sys.n_spins;
  const long long n_steps = std::max(1LL, static_cast<long long>(std::ceil(std::abs(t) / step)));
  const double dt = t / static_cast<double>(n_steps);

  const auto bonds = bond_gates(sys, pert.p, dt);
  CMatrix s = CMatrix::Identity(dim, dim);
  for (const auto& b : bonds) apply_gate_left(s, b.half_step, b.i, b.j);
  for (auto it = bonds.rbegin(); it != bonds.rend(); ++it) apply_gate_left(s, it->half_step, it->i, it->j);
  return {{matrix_power(std::move(s), n_steps), OperatorKind::unitary}, t};
}

namespace {

OperatorMatrix heisenberg(const SpinSystem& sys, double p, const OperatorMatrix& a, double t,
                          const Backend& backend) {
  if (t == 0.0) return a;
  if (backend.kind == BackendKind::trotter) {
    return evolve_observable(a, trotter_propagator(sys, {p, SigmaKind::dipolar}, t, backend.trotter_step));
  }
  return SpectralPropagator(build_h_eff(sys, {p, SigmaKind::dipolar})).evolve(a, t);
}

}  // namespace

OperatorMatrix forward_state(const SpinSystem& sys, const CycleSchedule& schedule, SigmaKind,
                             const Backend& backend) {
  sys.validate();
  schedule.validate();
  const ZeemanBasis basis = build_basis(sys.n_spins);
  OperatorMatrix rho = collective_iz(basis);
  if (schedule.n_prep_cycles > 0) {
    rho = heisenberg(sys, 0.0, rho, schedule.n_prep_cycles * schedule.tau0, backend);
  }
  return heisenberg(sys, schedule.p(), rho, schedule.n_cycles * schedule.tau_c(), backend);
}

OperatorMatrix backward_observable(const SpinSystem& sys, const CycleSchedule& schedule,
                                   const Backend& backend) {
  sys.validate();
  schedule.validate();
  const ZeemanBasis basis = build_basis(sys.n_spins);
  const double t = (schedule.n_prep_cycles + schedule.n_cycles) * schedule.tau0;
  return heisenberg(sys, 0.0, collective_iz(basis), t, backend);
}

OperatorMatrix segmented_forward_state(const SpinSystem& sys, const CycleSchedule& schedule) {
  sys.validate();
  schedule.validate();
  const ZeemanBasis basis = build_basis(sys.n_spins);
  const SpectralPropagator h0(build_h0(sys));
  OperatorMatrix rho = collective_iz(basis);
  if (schedule.n_prep_cycles > 0) rho = h0.evolve(rho, schedule.n_prep_cycles * schedule.tau0);
  // rho -> (U_0 U_sigma)^dagger rho (U_0 U_sigma) per cycle.
  const CMatrix cycle =
      h0.at(schedule.tau0).u.entries * propagator_of(build_h_dd(sys), schedule.tau_sigma).u.entries;
  const CMatrix u_n = matrix_power(cycle, schedule.n_cycles);
  return {u_n.adjoint() * rho.entries * u_n, OperatorKind::hermitian};
}

}  // namespace mqcloc
