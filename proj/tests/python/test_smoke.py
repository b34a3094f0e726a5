import json
import math

import numpy as np
import pytest

import schroflow


def test_spectral_indices():
    t = schroflow.constant_a_table(3, -0.1875, 4)
    assert t.decay_class == "loss_of_decay"
    assert t.alpha(1) == pytest.approx(0.25, abs=1e-12)
    assert t.beta(1) == pytest.approx(0.25, abs=1e-12)
    assert len(t) == 4
    assert t.to_csv().startswith("k,mu,alpha,beta")
    assert schroflow.constant_a_table(3, 2.0, 1).alpha(1) == pytest.approx(-1.0, abs=1e-12)
    assert schroflow.table_from_eigenvalues([-0.3], 3).decay_class == "invalid"


def test_circle_flux_spectrum():
    mu = schroflow.circle_eigenvalues(0.3, 8)
    expected = sorted((m + 0.3) ** 2 for m in range(-8, 9))
    assert np.allclose(mu, expected, atol=1e-10)


def test_closed_form_matches_free_gaussian():
    r = np.linspace(0.1, 5.0, 25)
    u = schroflow.evolve_closed_form(3, 0.0, 0, 1, r, 1.0)
    g = np.array([schroflow.free_gaussian(3, x, 1.0) for x in r])
    ratio = u / g
    assert np.allclose(ratio, ratio[0], atol=1e-12)


def test_free_kernel_modulus():
    value, tail, warn = schroflow.free_kernel(30, (0.3, 0.2), (1.1, 2.0), 4.0)
    assert abs(value) * (2 * math.pi) ** 1.5 == pytest.approx(1.0, abs=1e-9)
    assert not warn


def test_decay_fit_and_errors():
    times = schroflow.dyadic_times(0, 6)
    fit = schroflow.decay_fit(times, [t**-1.5 for t in times])
    assert fit["slope"] == pytest.approx(-1.5, abs=1e-12)
    assert fit["r_squared"] == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(schroflow.ConfigError):
        schroflow.decay_fit([1.0, 2.0], [1.0, 0.5])
    with pytest.raises(ValueError):
        schroflow.constant_a_table(1, 0.0, 1)


def test_run_cli(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"problem": {"a": -0.1875, "modes": 2}}))
    code, out, err = schroflow.run_cli(["spectrum", "--config", str(cfg), "--out", str(tmp_path / "o")])
    assert code == 0
    assert "loss_of_decay" in out
    assert (tmp_path / "o" / "spectrum.csv").read_text().startswith("# schroflow")
    code, _, _ = schroflow.run_cli(["spectrum", "--config", str(tmp_path / "missing.json")])
    assert code == 2
