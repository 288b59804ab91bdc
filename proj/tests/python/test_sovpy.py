import json

import numpy as np
import pytest

import sovpy


def test_spectral_curve_matches_determinant():
    a = sovpy.random_instance(2, 2, seed=4)
    P = sovpy.spectral_curve(a)
    rng = np.random.default_rng(0)
    for z, xi in rng.normal(size=(5, 2)) + 1j * rng.normal(size=(5, 2)):
        phi = sum(a[k] * z**k for k in range(a.shape[0]))
        direct = np.linalg.det(phi - xi * np.eye(2))
        poly = sum(P[k, l] * xi**k * z**l for k in range(P.shape[0]) for l in range(P.shape[1]))
        assert abs(poly - direct) < 1e-10 * max(1.0, abs(direct))


def test_genus_and_divisor_count():
    for n in (1, 2, 3):
        a = sovpy.random_instance(2, n, seed=n)
        g = sovpy.genus(a)
        assert g["genus"] == n - 1
        assert g["branch_count"] == 2 * n
        assert len(sovpy.divisor(a)["z"]) == n


def test_divisor_points_lie_on_the_curve():
    a = sovpy.random_instance(3, 1, seed=2)
    d = sovpy.divisor(a)
    for z, xi in zip(d["z"], d["xi"]):
        phi = a[0] + a[1] * z
        assert abs(np.linalg.det(phi - xi * np.eye(3))) < 1e-8


@pytest.mark.parametrize("a,b", [([1.0], 0.0), ([], 1.0), ([0.3 + 0.2j, 0.5], 0.25 - 0.1j)])
def test_canonical_brackets(a, b):
    res = sovpy.canonical_residuals(sovpy.random_instance(2, 2, seed=9), a=a, b=b)
    assert max(res.values()) < 1e-4


def test_casimir_split_counts():
    hams, cas = sovpy.casimir_split(sovpy.random_instance(2, 3, seed=1))
    assert len(hams) == 3
    assert len(hams) + len(cas) == 11
    assert not set(hams) & set(cas)


def test_theta():
    tau = 0.2 + 1.1j
    assert abs(sovpy.riemann_theta((1 + tau) / 2, tau)) < 1e-12
    z = 0.3 - 0.1j
    assert abs(sovpy.riemann_theta(z + 1, tau) - sovpy.riemann_theta(z, tau)) < 1e-12
    for r in (2, 3):
        res = sovpy.theta_relations(tau, r)
        assert res["period"] < 1e-10
        assert res["roots"] < 1e-8


def test_elliptic_points():
    doc = {
        "tau": [0.1, 1.0],
        "r": 2,
        "divisor": [{"nu": [0.3, 0.2]}, {"nu": [0.6, 0.55]}],
        "coeffs": [[1, 0], [0.5, -0.25], [0, 1], [0.125, 0], [0.3, 0.1], [-0.2, 0.4], [0.7, 0], [0, -0.6]],
        "z0": [0.01, 0.02],
    }
    res = sovpy.elliptic_points(json.dumps(doc))
    assert res["genus"] == 3
    assert res["argument_count"] == 3
    assert len(res["z"]) == 3


def test_errors_raise():
    with pytest.raises(sovpy.SovError):
        sovpy.elliptic_points(json.dumps({"tau": [0, 1], "r": 2, "divisor": [], "coeffs": []}))
    with pytest.raises(ValueError):
        sovpy.genus(np.zeros((2, 2, 3)))


def test_cli_exit_codes(tmp_path):
    code, out, _ = sovpy.cli(["theta", "--tau", "0,1", "--r", "3", "--out", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "theta.csv").exists()
    assert sovpy.cli(["theta", "--tau", "0,0.01", "--out", str(tmp_path)])[0] == 4
    missing = tmp_path / "m.json"
    missing.write_text('{"r": 2, "coeffs": []}')
    code, _, err = sovpy.cli(["spectral", "--input", str(missing), "--out", str(tmp_path)])
    assert code == 2
    assert "'n'" in err


def test_accept_subset():
    passed, summary = sovpy.accept([2, 6])
    assert passed
    assert "criterion 2" in summary
