import math

import numpy as np
import pytest

import mqcloc


def test_hamiltonians_are_hermitian_and_iz_commutes_with_hdd():
    d = mqcloc.random_couplings(4, seed=3)
    assert mqcloc.rms_coupling_per_spin(d) == pytest.approx(2 * math.pi * 7.9e3)
    hdd = mqcloc.h_dd(d)
    iz = mqcloc.collective_iz(4)
    assert np.allclose(hdd, hdd.conj().T)
    assert np.abs(hdd @ iz - iz @ hdd).max() < 1e-6
    assert np.allclose(mqcloc.h_eff(d, 0.0), mqcloc.h0(d))


def test_echo_and_spectra():
    d = mqcloc.random_couplings(4, seed=5)
    rho = mqcloc.forward_state(d, 57.6e-6, 0.0, 6)
    obs = mqcloc.backward_observable(d, 57.6e-6, 6)
    direct = np.array(mqcloc.spectrum(rho, obs))
    fft = np.array(mqcloc.spectrum(rho, obs, n_phi=16))
    assert direct.sum() == pytest.approx(1.0, abs=1e-9)
    assert np.abs(direct - fft).max() < 1e-10
    assert np.abs(direct[1::2]).max() < 1e-12  # odd orders (index M + N, N even)
    assert mqcloc.cluster_size(list(direct)) >= 1.0


def test_two_spin_closed_form():
    d = np.array([[0.0, 1e4], [1e4, 0.0]])
    for t in (1e-5, 3.3e-5, 1.2e-4):
        a = mqcloc.spectrum(mqcloc.forward_state(d, t, 0.2, 1), mqcloc.backward_observable(d, t, 1))
        assert a[2] == pytest.approx(math.cos(1e4 * t) ** 2, abs=1e-12)
        assert a[4] == pytest.approx(0.5 * math.sin(1e4 * t) ** 2, abs=1e-12)


def test_fit_and_plateau():
    p = [0.05, 0.1, 0.2, 0.4]
    fit = mqcloc.powerlaw_fit(p, [2.0 * x ** -2 for x in p])
    assert fit["exponent"] == pytest.approx(-2.0, abs=1e-12)
    n = list(range(12))
    pl = mqcloc.plateau(n, [1e-4 * i for i in n], [5.0] * 12)
    assert pl["localized"] and pl["k_loc"] == pytest.approx(5.0)


def test_run_from_config_text():
    cfg = "[system]\nn_spins = 4\n[schedule]\nn_cycles = 6\np_values = 0, 0.3\n"
    out = mqcloc.run("localize", cfg)
    traces = out["traces"]
    assert [t["p"] for t in traces] == [0.0, 0.3]
    assert len(traces[0]["k"]) == 7 and traces[0]["k"][0] == pytest.approx(1.0)
    assert "[run]" in mqcloc.default_config()


def test_errors_are_categorized():
    with pytest.raises(mqcloc.MqclocError, match="config error"):
        mqcloc.run("growth", "[system]\nspins = 4\n")
    with pytest.raises(mqcloc.MqclocError, match="aliasing error"):
        iz = mqcloc.collective_iz(3)
        mqcloc.spectrum(iz, iz, n_phi=4)
