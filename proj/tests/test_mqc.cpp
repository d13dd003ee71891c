#include <doctest.h>

#include <random>
#include <sstream>

#include "mqcloc/errors.hpp"
#include "mqcloc/hamiltonian.hpp"
#include "mqcloc/mqc.hpp"
#include "mqcloc/propagate.hpp"
#include "oracle.hpp"

using namespace mqcloc;

namespace {

OperatorMatrix random_hermitian(std::size_t dim, std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  CMatrix a(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) a(r, c) = cplx(g(gen), g(gen));
  return {0.5 * (a + a.adjoint()), OperatorKind::hermitian};
}

}  // namespace

TEST_CASE("phase rotation is the z rotation") {
  const int n = 3;
  const ZeemanBasis basis = build_basis(n);
  std::mt19937_64 gen(1);
  const OperatorMatrix a = random_hermitian(8, gen);
  const double phi = 0.7;
  const CMatrix rz = oracle::expm_minus_i(oracle::iz(n), phi);
  CHECK(max_abs(phase_rotate(a, basis, phi).entries - rz * a.entries * rz.adjoint()) < 1e-12);
  CHECK(max_abs(phase_rotate(a, basis, 0.0).entries - a.entries) == 0.0);
}

TEST_CASE("fft and direct spectra agree with the element-wise oracle on random operators") {
  std::mt19937_64 gen(5);
  for (int n : {1, 2, 3, 4}) {
    const ZeemanBasis basis = build_basis(n);
    // Real symmetric operators have real per-order overlaps.
    OperatorMatrix rho = random_hermitian(basis.dim(), gen);
    OperatorMatrix obs = random_hermitian(basis.dim(), gen);
    rho.entries = rho.entries.real().cast<cplx>();
    obs.entries = obs.entries.real().cast<cplx>();
    const auto want = oracle::overlap_by_order(rho.entries, obs.entries, n);
    const CoherenceSpectrum direct = spectrum_direct(rho, obs, basis);
    const CoherenceSpectrum fft = spectrum_fft(rho, obs, basis, default_phase_count(n));
    for (int m = -n; m <= n; ++m) {
      CHECK(std::abs(direct.at(m) - want[m + n].real()) < 1e-12);
      CHECK(std::abs(fft.at(m) - want[m + n].real()) < 1e-12);
    }
  }
  // Complex Hermitian pairs generally leave imaginary residues, which are reported.
  const ZeemanBasis basis = build_basis(2);
  CHECK_THROWS_AS(spectrum_direct(random_hermitian(4, gen), random_hermitian(4, gen), basis), Error);
}

TEST_CASE("spectra on physical trajectories") {
  for (int n : {2, 3, 5}) {
    const SpinSystem sys = make_spin_system(oracle::random_couplings(n, 31 + n, 1e4));
    const ZeemanBasis basis = build_basis(n);
    const CycleSchedule s = CycleSchedule::with_strength(4e-5, 0.2, 3, 1);
    const OperatorMatrix rho = forward_state(sys, s, SigmaKind::dipolar, Backend::eigen());
    const OperatorMatrix obs = backward_observable(sys, s, Backend::eigen());
    const CoherenceSpectrum direct = spectrum_direct(rho, obs, basis);
    const CoherenceSpectrum fft = spectrum_fft(rho, obs, basis, default_phase_count(n));
    const CoherenceSpectrum fft_big = spectrum_fft(rho, obs, basis, 4 * n + 8);
    const auto want = oracle::overlap_by_order(rho.entries, obs.entries, n);
    for (int m = -n; m <= n; ++m) {
      CHECK(direct.at(m) == doctest::Approx(want[m + n].real()).epsilon(1e-12).scale(1.0));
      CHECK(std::abs(fft.at(m) - direct.at(m)) < 1e-12);
      CHECK(std::abs(fft_big.at(m) - direct.at(m)) < 1e-12);
      if (m % 2 != 0) CHECK(std::abs(direct.at(m)) < 1e-12);
    }
    CHECK(direct.total == doctest::Approx(signal(rho, obs, basis, 0.0).real()));
    CHECK(direct.odd_fraction() < 1e-12);
  }
}

TEST_CASE("perfect echo at p = 0") {
  const SpinSystem sys = make_spin_system(oracle::random_couplings(4, 2, 1e4));
  const ZeemanBasis basis = build_basis(4);
  const CycleSchedule s = CycleSchedule::with_strength(5e-5, 0.0, 7, 0);
  const OperatorMatrix rho = forward_state(sys, s, SigmaKind::dipolar, Backend::eigen());
  const OperatorMatrix obs = backward_observable(sys, s, Backend::eigen());
  CHECK(spectrum_direct(rho, obs, basis).total == doctest::Approx(1.0).epsilon(1e-12));
  const CoherenceSpectrum at_zero = spectrum_direct(collective_iz(basis), collective_iz(basis), basis);
  CHECK(at_zero.at(0) == doctest::Approx(1.0));
  CHECK(at_zero.at(2) == 0.0);
}

TEST_CASE("aliasing guard") {
  const ZeemanBasis basis = build_basis(3);
  const OperatorMatrix iz = collective_iz(basis);
  CHECK(default_phase_count(3) == 8);
  CHECK(default_phase_count(12) == 32);
  CHECK_THROWS_AS(spectrum_fft(iz, iz, basis, 6), Error);
  CHECK_THROWS_AS(spectrum_fft(iz, iz, basis, 9), Error);
  try {
    spectrum_fft(iz, iz, basis, 4);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::aliasing);
  }
  CHECK_NOTHROW(spectrum_fft(iz, iz, basis, 8));
}

TEST_CASE("shape mismatch is rejected") {
  const OperatorMatrix a = collective_iz(build_basis(2));
  const OperatorMatrix b = collective_iz(build_basis(3));
  CHECK_THROWS_AS(spectrum_direct(a, b, build_basis(3)), Error);
}

TEST_CASE("imaginary residue raises a diagnostic") {
  std::vector<cplx> amps(5, 0.0);
  amps[2] = cplx(1.0, 1e-6);
  try {
    make_spectrum(2, amps, SpectrumSource::direct);
    FAIL("expected diagnostic error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::diagnostic);
  }
  amps[2] = cplx(1.0, 1e-12);
  CHECK(make_spectrum(2, amps, SpectrumSource::direct).total == 1.0);
}

TEST_CASE("spectrum csv") {
  std::vector<cplx> amps{0.0, 0.25, 0.5, 0.25, 0.0};
  const CoherenceSpectrum s = make_spectrum(2, amps, SpectrumSource::direct);
  std::ostringstream out;
  write_spectrum_csv(out, {{3, &s}}, 0.1, 9);
  CHECK(out.str() ==
        "M,A_M,n_cycles,p,seed\n"
        "-2,0,3,0.10000000000000001,9\n"
        "-1,0.25,3,0.10000000000000001,9\n"
        "0,0.5,3,0.10000000000000001,9\n"
        "1,0.25,3,0.10000000000000001,9\n"
        "2,0,3,0.10000000000000001,9\n");
}
