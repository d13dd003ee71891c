#include "mqcloc/mqc.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <ostream>

#include "mqcloc/format.hpp"

namespace mqcloc {

double CoherenceSpectrum::odd_fraction() const {
  double odd = 0.0, all = 0.0;
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    const int order = static_cast<int>(i) - n_spins;
    all += std::abs(amplitudes[i]);
    if (order % 2 != 0) odd += std::abs(amplitudes[i]);
  }
  return all > 0.0 ? odd / all : 0.0;
}

CoherenceSpectrum make_spectrum(int n_spins, const std::vector<cplx>& amplitudes,
                                SpectrumSource source, double imag_tol) {
  if (amplitudes.size() != static_cast<std::size_t>(2 * n_spins + 1)) {
    fail(ErrorKind::shape, "expected 2N+1 coherence orders");
  }
  CoherenceSpectrum s{n_spins, {}, 0.0, source};
  s.amplitudes.reserve(amplitudes.size());
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    if (std::abs(amplitudes[i].imag()) > imag_tol) {
      fail(ErrorKind::diagnostic, "coherence order " + std::to_string(static_cast<int>(i) - n_spins) +
                                      " has imaginary residue " + format_double(amplitudes[i].imag()));
    }
    s.amplitudes.push_back(amplitudes[i].real());
    s.total += amplitudes[i].real();
  }
  return s;
}

namespace {

void require_same_shape(const OperatorMatrix& rho, const OperatorMatrix& observable,
                        const ZeemanBasis& basis) {
  if (rho.dim() != basis.dim() || observable.dim() != basis.dim() ||
      rho.entries.cols() != rho.entries.rows() ||
      observable.entries.cols() != observable.entries.rows()) {
    fail(ErrorKind::shape, "operators do not match the basis dimension " + std::to_string(basis.dim()));
  }
}

}  // namespace

OperatorMatrix phase_rotate(const OperatorMatrix& a, const ZeemanBasis& basis, double phi) {
  if (a.dim() != basis.dim()) fail(ErrorKind::shape, "operator does not match the basis dimension");
  OperatorMatrix out = a;
  const std::size_t d = basis.dim();
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t r = 0; r < d; ++r) {
      const double order = basis.m(r) - basis.m(c);
      out.entries(r, c) *= std::polar(1.0, -phi * order);
    }
  }
  return out;
}

cplx signal(const OperatorMatrix& rho, const OperatorMatrix& observable, const ZeemanBasis& basis,
            double phi) {
  require_same_shape(rho, observable, basis);
  const OperatorMatrix rotated = phase_rotate(rho, basis, phi);
  // Tr(A B) = sum_rc A_cr B_rc
  const cplx tr = (observable.entries.transpose().cwiseProduct(rotated.entries)).sum();
  return tr / iz_norm_squared(basis.n_spins());
}

int default_phase_count(int n_spins) {
  return static_cast<int>(std::bit_ceil(static_cast<unsigned>(2 * n_spins + 2)));
}

CoherenceSpectrum spectrum_fft(const OperatorMatrix& rho, const OperatorMatrix& observable,
                               const ZeemanBasis& basis, int n_phi) {
  require_same_shape(rho, observable, basis);
  const int n = basis.n_spins();
  if (n_phi < 2 * n + 2 || n_phi % 2 != 0) {
    fail(ErrorKind::aliasing, "phase grid of " + std::to_string(n_phi) +
                                  " points cannot resolve orders up to " + std::to_string(n) +
                                  " (need an even count >= " + std::to_string(2 * n + 2) + ")");
  }
  std::vector<cplx> samples(n_phi);
  for (int k = 0; k < n_phi; ++k) {
    samples[k] = signal(rho, observable, basis, 2.0 * std::numbers::pi * k / n_phi);
  }
  // S(phi) = sum_M e^{-i M phi} A_M  =>  A_M = (1/n) sum_k S(phi_k) e^{i M phi_k}
  std::vector<cplx> amp(2 * n + 1);
  for (int order = -n; order <= n; ++order) {
    cplx acc{0.0, 0.0};
    for (int k = 0; k < n_phi; ++k) {
      const long long wrapped = (static_cast<long long>(order) * k) % n_phi;
      acc += samples[k] * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(wrapped) / n_phi);
    }
    amp[order + n] = acc / static_cast<double>(n_phi);
  }
  return make_spectrum(n, amp, SpectrumSource::fft);
}

CoherenceSpectrum spectrum_direct(const OperatorMatrix& rho, const OperatorMatrix& observable,
                                  const ZeemanBasis& basis) {
  require_same_shape(rho, observable, basis);
  const int n = basis.n_spins();
  std::vector<cplx> amp(2 * n + 1, cplx{0.0, 0.0});
  const std::size_t d = basis.dim();
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t r = 0; r < d; ++r) {
      amp[coherence_order(basis, r, c) + n] += std::conj(observable.entries(r, c)) * rho.entries(r, c);
    }
  }
  const double norm = iz_norm_squared(n);
  for (auto& a : amp) a /= norm;
  return make_spectrum(n, amp, SpectrumSource::direct);
}

void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumRow>& rows, double p,
                        std::uint64_t seed) {
  out << "M,A_M,n_cycles,p,seed\n";
  for (const auto& row : rows) {
    const CoherenceSpectrum& s = *row.spectrum;
    for (int order = -s.n_spins; order <= s.n_spins; ++order) {
      out << order << ',' << format_double(s.at(order)) << ',' << row.n_cycles << ','
          << format_double(p) << ',' << seed << '\n';
    }
  }
}

}  // namespace mqcloc
