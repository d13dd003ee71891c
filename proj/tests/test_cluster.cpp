#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "mqcloc/cluster.hpp"
#include "mqcloc/errors.hpp"

using namespace mqcloc;

namespace {

CoherenceSpectrum spectrum_of(int n, const std::vector<double>& a) {
  std::vector<cplx> c(a.begin(), a.end());
  return make_spectrum(n, c, SpectrumSource::direct);
}

CoherenceSpectrum gaussian(int n, double k, double scale = 1.0) {
  std::vector<double> a(2 * n + 1);
  for (int m = -n; m <= n; ++m) a[m + n] = m % 2 == 0 ? scale * std::exp(-m * m / k) : 0.0;
  return spectrum_of(n, a);
}

ClusterTrace trace_of(const std::vector<double>& ks, double tau = 1e-4) {
  ClusterTrace t;
  t.tau0 = tau;
  for (std::size_t i = 0; i < ks.size(); ++i) t.points.push_back({static_cast<int>(i), i * tau, ks[i]});
  return t;
}

}  // namespace

TEST_CASE("cluster size of simple spectra") {
  CHECK(cluster_size(spectrum_of(2, {0, 0, 1, 0, 0})) == 1.0);
  CHECK(cluster_size(spectrum_of(2, {0.5, 0, 0, 0, 0.5})) == doctest::Approx(8.0));
  CHECK(cluster_size(spectrum_of(2, {0.25, 0, 0.5, 0, 0.25})) == doctest::Approx(4.0));
  // Second moment of exp(-M^2/K) over even M approaches K/4, so K is recovered.
  CHECK(cluster_size(gaussian(40, 30.0)) == doctest::Approx(30.0).epsilon(1e-6));
}

TEST_CASE("cluster size is scale invariant and monotone in spread") {
  for (double k : {2.0, 5.0, 11.0}) {
    CHECK(cluster_size(gaussian(12, k)) == doctest::Approx(cluster_size(gaussian(12, k, 37.5))));
  }
  double last = 0.0;
  for (double k : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    const double now = cluster_size(gaussian(12, k));
    CHECK(now >= last);
    last = now;
  }
}

TEST_CASE("negative amplitudes are clipped with a note") {
  std::string note;
  const double k = cluster_size(spectrum_of(2, {-0.1, 0, 1.0, 0, 0}), &note);
  CHECK(k == 1.0);
  CHECK(note.find("clipped") != std::string::npos);
  std::string quiet;
  cluster_size(spectrum_of(2, {-1e-12, 0, 1.0, 0, 0}), &quiet);
  CHECK(quiet.empty());
  CHECK_THROWS_AS(cluster_size(spectrum_of(1, {0, -1, 0})), Error);
}

TEST_CASE("plateau detection") {
  SUBCASE("saturating trace is localized") {
    std::vector<double> ks;
    for (int n = 0; n <= 30; ++n) ks.push_back(1.0 + 7.0 * (1.0 - std::exp(-n / 3.0)));
    const PlateauResult r = plateau(trace_of(ks));
    CHECK(r.localized);
    CHECK(r.k_loc == doctest::Approx(8.0).epsilon(0.01));
    CHECK(r.onset_index > 0);
    CHECK(r.onset_index < ks.size());
    for (std::size_t i = r.onset_index; i < ks.size(); ++i) CHECK(std::abs(ks[i] - r.k_loc) <= 0.1 * r.k_loc);
  }
  SUBCASE("power-law growth is not localized") {
    std::vector<double> ks;
    for (int n = 0; n <= 30; ++n) ks.push_back(1.0 + n);
    const PlateauResult r = plateau(trace_of(ks));
    CHECK_FALSE(r.localized);
    CHECK(r.slope > 0.5);
    CHECK(r.onset_index == ks.size());
  }
  SUBCASE("too short") {
    try {
      plateau(trace_of({1, 2, 3, 4, 5}));
      FAIL("expected insufficient data");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::insufficient_data);
    }
  }
  SUBCASE("invalid trace") {
    ClusterTrace t = trace_of({1, 2, 3, 4, 5, 6});
    t.points[3].time = t.points[2].time;
    CHECK_THROWS_AS(plateau(t), Error);
  }
}

TEST_CASE("power-law fit") {
  std::vector<std::pair<double, double>> exact;
  for (double p : {0.02, 0.05, 0.1, 0.2, 0.5}) exact.emplace_back(p, 3.0 * std::pow(p, -2.0));
  const PowerLawFit fit = powerlaw_fit(exact);
  CHECK(fit.exponent == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(fit.prefactor == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(fit.exponent_stderr < 1e-10);
  CHECK(fit.points_used.size() == 5);

  std::mt19937_64 gen(11);
  std::normal_distribution<double> noise(0.0, 0.05);
  auto noisy = exact;
  for (auto& [p, k] : noisy) k *= 1.0 + noise(gen);
  const PowerLawFit nf = powerlaw_fit(noisy);
  CHECK(std::abs(nf.exponent + 2.0) < 0.2);
  CHECK(nf.exponent_stderr > 0.0);

  CHECK_THROWS_AS(powerlaw_fit({{0.1, 1}, {0.2, 2}}), Error);
  CHECK_THROWS_AS(powerlaw_fit({{0.1, 1}, {0.1, 2}, {0.1, 3}}), Error);
  CHECK_THROWS_AS(powerlaw_fit({{0.1, 1}, {0.0, 2}, {0.3, 3}}), Error);
  CHECK_THROWS_AS(powerlaw_fit({{0.1, 1}, {0.2, -2}, {0.3, 3}}), Error);
}

TEST_CASE("trace csv round trip") {
  ClusterTrace t = trace_of({1.0, 2.5, 3.25});
  t.p = 0.108;
  std::stringstream io;
  write_trace_csv(io, t);
  CHECK(io.str().rfind("n_cycles,time_s,p,K\n0,0,0.108,1\n", 0) == 0);
  const ClusterTrace back = read_trace_csv(io);
  CHECK(back.p == 0.108);
  REQUIRE(back.points.size() == 3);
  CHECK(back.points[2].k == 3.25);
  CHECK(back.points[1].time == t.points[1].time);
  std::istringstream bad("n,t,p,K\n");
  CHECK_THROWS_AS(read_trace_csv(bad), Error);
  std::istringstream broken("n_cycles,time_s,p,K\n1,2\n");
  CHECK_THROWS_AS(read_trace_csv(broken), Error);
}
