#include <doctest.h>

#include <memory>

#include "mqcloc/errors.hpp"
#include "mqcloc/hamiltonian.hpp"
#include "mqcloc/mqc.hpp"
#include "mqcloc/propagate.hpp"
#include "mqcloc/sector.hpp"
#include "oracle.hpp"

using namespace mqcloc;

TEST_CASE("layout covers every state once") {
  for (int n : {2, 3, 6, 7}) {
    for (bool parity : {true, false}) {
      const sector::SectorLayout layout(n, parity);
      std::size_t count = 0;
      for (std::size_t b = 0; b < layout.block_count(); ++b) count += layout.representatives(b).size();
      CHECK(2 * count == (std::size_t{1} << n));
      CHECK(layout.uses_parity() == (parity && n % 2 == 0));
    }
  }
}

TEST_CASE("Iz round trips through the sector form") {
  auto layout = std::make_shared<const sector::SectorLayout>(5, true);
  const OperatorMatrix iz = collective_iz(build_basis(5));
  CHECK(max_abs(sector::to_dense(sector::sector_iz(layout)).entries - iz.entries) == 0.0);
  CHECK(max_abs(sector::to_dense(sector::from_dense(layout, iz)).entries - iz.entries) == 0.0);
  // The identity is even under the flip and has no sector form.
  OperatorMatrix id{CMatrix::Identity(32, 32), OperatorKind::hermitian};
  CHECK_THROWS_AS(sector::from_dense(layout, id), Error);
}

TEST_CASE("sector evolution matches dense evolution") {
  for (int n : {4, 5, 6}) {
    for (bool parity : {true, false}) {
      const SpinSystem sys = make_spin_system(oracle::random_couplings(n, 100 + n, 1e4));
      const ZeemanBasis basis = build_basis(n);
      auto layout = std::make_shared<const sector::SectorLayout>(n, parity);
      for (double p : {0.0, 0.35, 1.0}) {
        auto h = std::make_shared<const sector::SectorHamiltonian>(layout, sys, p);
        const sector::SectorTrajectory traj(h, sector::sector_iz(layout));
        const SpectralPropagator dense(build_h_eff(sys, {p}));
        for (double t : {0.0, 6e-5, 2.3e-4}) {
          const OperatorMatrix want = dense.evolve(collective_iz(basis), t);
          CHECK(max_abs(sector::to_dense(traj.at(t)).entries - want.entries) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("sector overlap equals the direct block overlap") {
  const int n = 6;
  const SpinSystem sys = make_spin_system(oracle::random_couplings(n, 77, 1e4));
  const ZeemanBasis basis = build_basis(n);
  auto layout = std::make_shared<const sector::SectorLayout>(n, true);
  auto h0 = std::make_shared<const sector::SectorHamiltonian>(layout, sys, 0.0);
  auto h1 = std::make_shared<const sector::SectorHamiltonian>(layout, sys, 0.4);
  const auto obs = sector::SectorTrajectory(h0, sector::sector_iz(layout)).at(1.7e-4);
  const auto rho = sector::SectorTrajectory(h1, sector::sector_iz(layout)).at(2.9e-4);
  const auto got = sector::overlap_amplitudes(obs, rho);
  const auto want = oracle::overlap_by_order(sector::to_dense(rho).entries, sector::to_dense(obs).entries, n);
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-12);
}

TEST_CASE("sector matrices reproduce projected Hamiltonian") {
  const int n = 4;
  const SpinSystem sys = make_spin_system(oracle::random_couplings(n, 9, 1.0));
  const sector::SectorLayout layout(n, true);
  const CMatrix h = build_h_eff(sys, {0.2}).entries;
  for (std::size_t b = 0; b < layout.block_count(); ++b) {
    const auto [plus, minus] = sector::SectorHamiltonian::sector_matrices(layout, sys, 0.2, b);
    const auto& reps = layout.representatives(b);
    const std::uint32_t all = (1u << n) - 1;
    for (std::size_t k = 0; k < reps.size(); ++k) {
      for (std::size_t l = 0; l < reps.size(); ++l) {
        const double direct = h(reps[k], reps[l]).real();
        const double flipped = h(reps[k] ^ all, reps[l]).real();
        CHECK(plus(k, l) == doctest::Approx(direct + flipped));
        CHECK(minus(k, l) == doctest::Approx(direct - flipped));
      }
    }
  }
}
