#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mqcloc/spin_hilbert.hpp"

namespace mqcloc {

enum class SpectrumSource { fft, direct, sector };

/// Multiple-quantum spectrum A_M for M in [-N, N], normalized by Tr(Iz^2) so
/// that a perfect echo of Iz sums to one.
struct CoherenceSpectrum {
  int n_spins = 0;
  std::vector<double> amplitudes;  // index M + N
  double total = 0.0;              // sum_M A_M, the echo amplitude S(0)
  SpectrumSource source = SpectrumSource::direct;

  double at(int order) const { return amplitudes.at(static_cast<std::size_t>(order + n_spins)); }
  /// sum over odd M of |A_M| divided by sum of |A_M| (0 for an all-zero spectrum).
  double odd_fraction() const;
};

/// Builds a spectrum from complex per-order amplitudes; fails with a
/// diagnostic error when an imaginary part exceeds `imag_tol`.
CoherenceSpectrum make_spectrum(int n_spins, const std::vector<cplx>& amplitudes,
                                SpectrumSource source, double imag_tol = 1e-9);

/// e^{-i phi Iz} a e^{i phi Iz}: entry (r, c) picks up e^{-i phi (m_r - m_c)}.
OperatorMatrix phase_rotate(const OperatorMatrix& a, const ZeemanBasis& basis, double phi);

/// Tr{observable * phase_rotate(rho, phi)} / Tr{Iz^2}.
cplx signal(const OperatorMatrix& rho, const OperatorMatrix& observable, const ZeemanBasis& basis,
            double phi);

/// Smallest power of two that is >= 2N + 2.
int default_phase_count(int n_spins);

/// Samples the signal at phi_k = 2 pi k / n_phi and Fourier transforms it.
/// Refuses grids that would alias orders in [-N, N].
CoherenceSpectrum spectrum_fft(const OperatorMatrix& rho, const OperatorMatrix& observable,
                               const ZeemanBasis& basis, int n_phi);

/// Block-by-block overlap A_M = Tr{observable_M^dagger rho_M} / Tr{Iz^2}.
CoherenceSpectrum spectrum_direct(const OperatorMatrix& rho, const OperatorMatrix& observable,
                                  const ZeemanBasis& basis);

struct SpectrumRow {
  int n_cycles;
  const CoherenceSpectrum* spectrum;
};

/// CSV with header M,A_M,n_cycles,p,seed; floats printed with 17 significant digits.
void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumRow>& rows, double p,
                        std::uint64_t seed);

}  // namespace mqcloc
