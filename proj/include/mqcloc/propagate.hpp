#pragma once

#include <string>

#include "mqcloc/hamiltonian.hpp"
#include "mqcloc/linalg.hpp"

namespace mqcloc {

/// Units: hbar = 1, Hamiltonians in rad/s, times in seconds.
struct Propagator {
  OperatorMatrix u;  // exp(-i H t)
  double duration = 0.0;
};

enum class BackendKind { eigen, trotter };

struct Backend {
  BackendKind kind = BackendKind::eigen;
  double trotter_step = 1e-6;  // seconds, only used by the trotter backend

  static Backend eigen() { return {}; }
  static Backend trotter(double step) { return {BackendKind::trotter, step}; }
};

std::string to_string(BackendKind kind);
BackendKind backend_from_string(const std::string& name);

/// One experiment: n_prep_cycles of H_0 for tau0 each, then n_cycles of the
/// perturbed cycle tau_c = tau0 + tau_sigma. tau0 = 0 describes the fully
/// perturbed limit p = 1.
struct CycleSchedule {
  double tau0 = 57.6e-6;
  double tau_sigma = 0.0;
  int n_cycles = 0;
  int n_prep_cycles = 0;

  double tau_c() const { return tau0 + tau_sigma; }
  double p() const { return tau_sigma / tau_c(); }
  void validate() const;

  /// tau_sigma chosen so that tau_sigma / tau_c = p, for p in [0, 1).
  static CycleSchedule with_strength(double tau0, double p, int n_cycles, int n_prep_cycles = 0);
};

/// exp(-i h t) via Hermitian eigendecomposition. Throws a kind error when h
/// is not Hermitian.
Propagator propagator_of(const OperatorMatrix& h, double t);

/// Eigendecomposition of a Hermitian generator, reused across many times.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const OperatorMatrix& h);

  Propagator at(double t) const;
  /// U(t)^dagger a U(t).
  OperatorMatrix evolve(const OperatorMatrix& a, double t) const;
  const RVector& energies() const { return eig_.values; }

 private:
  linalg::HermitianEigen eig_;
};

/// Symmetric (second order) bond-by-bond product formula for
/// (1 - p) H_0 + p H_dd: each step applies every two-spin term for step/2 in
/// order and then in reverse order. The number of steps is ceil(|t| / step).
Propagator trotter_propagator(const SpinSystem& sys, const PerturbationSpec& pert, double t,
                              double step);

/// u^dagger a u.
OperatorMatrix evolve_observable(const OperatorMatrix& a, const Propagator& u);

/// Iz after n_prep_cycles tau0 of H_0 followed by n_cycles tau_c of H_eff
/// (static effective Hamiltonian with p taken from the schedule).
OperatorMatrix forward_state(const SpinSystem& sys, const CycleSchedule& schedule,
                             SigmaKind sigma = SigmaKind::dipolar, const Backend& backend = {});

/// Decoding observable: Iz evolved under H_0 for (n_prep_cycles + n_cycles) tau0,
/// i.e. the state the time-reversed H_0 evolution maps back onto Iz.
OperatorMatrix backward_observable(const SpinSystem& sys, const CycleSchedule& schedule,
                                   const Backend& backend = {});

/// forward_state with the literal alternation exp(-i H_0 tau0) exp(-i H_dd tau_sigma)
/// per cycle instead of the static effective Hamiltonian.
OperatorMatrix segmented_forward_state(const SpinSystem& sys, const CycleSchedule& schedule);

}  // namespace mqcloc
