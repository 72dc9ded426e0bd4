import numpy as np
import pytest

import cpfactor


def test_factorize_reference_matrix():
    a1 = cpfactor.special_matrix("A1")["A"]
    res = cpfactor.factorize(a1, r_plus=4, seed=2024)
    assert res.status == "global"
    assert res.rel_error < 1e-13
    assert res.B.min() >= 0.0
    assert np.linalg.norm(res.B @ res.B.T - a1) < 1e-12 * np.linalg.norm(a1)


def test_generate_and_rel_error():
    inst = cpfactor.generate(n=40, r=4, dist="linear", b_min=0.3, seed=5)
    A, B = inst["A"], inst["B"]
    assert A.shape == (inst["realized_n"], inst["realized_n"])
    assert cpfactor.rel_error(A, B) < 1e-13
    np.testing.assert_allclose(A, B @ B.T, atol=1e-12)


def test_sym_factor_and_objective():
    a1 = cpfactor.special_matrix("A1")["A"]
    W, r = cpfactor.sym_factor(a1)
    assert r == 3
    np.testing.assert_allclose(W @ W.T, a1, atol=1e-10)
    X = np.hstack([np.eye(3), np.zeros((3, 1))])
    v, g = cpfactor.objective(W, X)
    assert v >= 0.0
    assert g.shape == (3, 4)


def test_dominant_and_a4_factors():
    A = np.array([[2.0, 1.0], [1.0, 2.0]])
    B = cpfactor.dominant_cpf(A)
    assert B.min() >= 0.0
    assert cpfactor.rel_error(A, B) < 1e-13

    B4 = cpfactor.a4_explicit_factor()
    assert B4.shape == (12, 37)
    a4 = cpfactor.special_matrix("A4")["A"]
    assert cpfactor.rel_error(a4, B4) < 1e-12


def test_baseline_solver():
    a1 = cpfactor.special_matrix("A1")["A"]
    res = cpfactor.baseline_solve(a1, "aph", r_plus=4, seed=3)
    assert res.status in ("global", "local", "budget")
    assert res.B.min() >= 0.0


def test_error_surface():
    with pytest.raises(cpfactor.CpfactorError):
        cpfactor.sym_factor(np.array([[1.0, 2.0], [0.0, 1.0]]))
