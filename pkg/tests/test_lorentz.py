import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relloc import lorentz as lz
from relloc.minkowski import ETA, basis_vector, inner
from relloc.poincare import random_lorentz

PAIRS = [(a, b) for a in range(4) for b in range(4) if a != b]


def definition_matrix(a, b):
    """e_a (x) e_b^flat - e_b (x) e_a^flat as an explicit outer product."""
    e = np.eye(4)
    return np.outer(e[a], ETA @ e[b]) - np.outer(e[b], ETA @ e[a])


def scipy_free_expm(m):
    # eigen-decomposition oracle, independent of the power series
    w, v = np.linalg.eig(m)
    return (v @ np.diag(np.exp(w)) @ np.linalg.inv(v)).real


@pytest.mark.parametrize("a,b", PAIRS)
def test_generator_matches_definition(a, b):
    np.testing.assert_array_equal(lz.generator(a, b).matrix, definition_matrix(a, b))
    np.testing.assert_array_equal(lz.generator(b, a).matrix, -lz.generator(a, b).matrix)
    assert lz.generator(a, b).is_anti_self_adjoint()


def test_generator_examples():
    B12 = lz.generator(1, 2)
    np.testing.assert_array_equal(B12(basis_vector(1)), -basis_vector(2))
    np.testing.assert_array_equal(B12(basis_vector(2)), basis_vector(1))
    np.testing.assert_array_equal(lz.generator(1, 0)(basis_vector(1)), -basis_vector(0))
    assert not lz.generator(2, 2).matrix.any()


def test_commutator_example():
    c = lz.commutator(lz.generator(1, 2), lz.generator(2, 3))
    np.testing.assert_array_equal(c.matrix, lz.generator(1, 3).matrix)


def test_commutation_relations_all_pairs():
    g = ETA
    B = lz.generator
    pairs = list(itertools.combinations(range(4), 2))
    for (a, b), (c, d) in itertools.product(pairs, repeat=2):
        lhs = lz.commutator(B(a, b), B(c, d)).matrix
        rhs = g[b, c] * B(a, d).matrix + g[a, d] * B(b, c).matrix - g[a, c] * B(b, d).matrix - g[b, d] * B(a, c).matrix
        np.testing.assert_array_equal(lhs, rhs)


@pytest.mark.parametrize("a,b", PAIRS)
def test_generator_square_is_minus_eps_projector(a, b):
    B = lz.generator(a, b).matrix
    eps = ETA[a, a] * ETA[b, b]
    np.testing.assert_array_equal(B @ B, -eps * lz.projector(a, b))


def test_lie_element_convention():
    omega = np.zeros((4, 4))
    omega[1, 2], omega[2, 1] = 1.0, -1.0
    X = lz.lorentz_lie_element(omega)
    # +1/2 omega^{mu nu} B_{mu nu} = B_12, i.e. -J_12 with J = -B
    np.testing.assert_array_equal(X.matrix, lz.generator(1, 2).matrix)
    assert not lz.lorentz_lie_element(np.zeros((4, 4))).matrix.any()
    with pytest.raises(ValueError):
        lz.lorentz_lie_element(np.eye(4))


def test_lie_element_coefficient_roundtrip(rng):
    a = rng.normal(size=(4, 4))
    omega = a - a.T
    X = lz.lorentz_lie_element(omega)
    np.testing.assert_allclose(X.coefficients(), omega, atol=1e-14)
    assert X.is_anti_self_adjoint()


def test_exp_examples():
    R = lz.exp_generator(1, 2, np.pi / 2)
    np.testing.assert_allclose(R @ basis_vector(2), basis_vector(1), atol=1e-15)
    np.testing.assert_allclose(R.matrix, lz.exp_series((np.pi / 2) * lz.generator(1, 2).matrix, 20), atol=1e-12)
    for a, b in PAIRS:
        np.testing.assert_array_equal(lz.exp_generator(a, b, 0.0).matrix, np.eye(4))
    np.testing.assert_allclose(lz.exp_generator(1, 0, 1.0).matrix, lz.exp_series(lz.generator(1, 0).matrix), atol=1e-12)


@pytest.mark.parametrize("a,b", PAIRS)
@given(alpha=st.floats(-3, 3))
def test_exp_matches_oracles(a, b, alpha):
    closed = lz.exp_generator(a, b, alpha).matrix
    B = alpha * lz.generator(a, b).matrix
    np.testing.assert_allclose(closed, lz.exp_series(B), atol=1e-10)
    np.testing.assert_allclose(closed, scipy_free_expm(B), atol=1e-9)
    assert lz.is_proper_orthochronous(closed)


def test_transform_checks():
    with pytest.raises(lz.LorentzError):
        lz.LorentzTransform(np.diag([1.0, 2.0, 1.0, 1.0]))
    parity = lz.LorentzTransform(np.diag([1.0, -1.0, 1.0, 1.0]))
    assert not parity.is_proper_orthochronous
    flip = lz.LorentzTransform(np.diag([-1.0, -1.0, 1.0, 1.0]))
    assert not flip.is_proper_orthochronous


def test_inverse(rng):
    L = random_lorentz(rng, 2.0)
    np.testing.assert_allclose((L @ L.inverse()).matrix, np.eye(4), atol=1e-12)


def _unit(rng, rapidity=2.0):
    return random_lorentz(rng, rapidity).matrix[:, 0]


def test_boost_identity_case():
    P = np.array([2.0, 0.3, -0.1, 0.5])
    mc = np.sqrt(-inner(P, P))
    np.testing.assert_allclose(lz.boost_to(P / mc, P, mc).matrix, np.eye(4), atol=1e-14)


def test_boost_properties(rng):
    for _ in range(50):
        mc = rng.uniform(0.5, 3)
        P = _unit(rng) * mc
        u = _unit(rng)
        u = u / np.sqrt(-inner(u, u))
        B = lz.boost_to(u, P, mc)
        np.testing.assert_allclose(B @ (P / mc), u, atol=1e-12)
        assert lz.is_isometry(B.matrix) and B.is_proper_orthochronous
        assert np.linalg.det(B.matrix) == pytest.approx(1.0)
        null = np.linalg.svd(np.vstack([ETA @ P, ETA @ u]))[2][2:]
        for v in null:
            np.testing.assert_allclose(B @ v, v, atol=1e-12)


def test_boost_rejects_bad_input():
    with pytest.raises(lz.LorentzError):
        lz.boost_to([2.0, 0, 0, 0], [1.0, 0, 0, 0])
    with pytest.raises(lz.LorentzError):
        lz.boost_to([1.0, 0, 0, 0], [0.0, 1.0, 0, 0])
    with pytest.raises(lz.LorentzError):
        lz.boost_to([1.0, 0, 0, 0], [-1.0, 0, 0, 0])
    with pytest.raises(lz.LorentzError):
        lz.boost_to([1.0, 0, 0, 0], [1.0, 0, 0, 0], mc=3.0)
