import itertools

import numpy as np
import pytest

from relloc import elementary as el
from relloc import obsexpr as ox
from relloc.lorentz import exp_generator
from relloc.poincare import PoincareTransform, Hyperplane, coadjoint_transform, random_poincare
from relloc.verify import expected_bracket, symplectic_defect


def test_system_validation():
    for bad in [dict(m=0.0), dict(m=-1.0), dict(m=1.0, c=0.0), dict(m=1.0, S=-0.1)]:
        with pytest.raises(ValueError):
            el.ElementarySystem(**bad)
    assert not el.ElementarySystem(1.0).spinning


def test_state_validation():
    with pytest.raises(ValueError):
        el.State([0, 0, 0], [0, 0, 0], [1.0, 1.0, 0.0])
    with pytest.raises(ValueError):
        el.momenta(el.ElementarySystem(1.0, 1.0), el.State([0, 0, 0], [0, 0, 0]))
    with pytest.raises(ValueError):
        el.momenta(el.ElementarySystem(1.0), el.State([0, 0, 0], [0, 0, 0], [0, 0, 1.0]))


def test_generator_examples():
    sys0 = el.ElementarySystem(2.0, 0.0, 3.0)
    g = el.generators(sys0)
    assert el.evaluate_at(g["P0"], sys0, el.State([1, 2, 3], [0, 0, 0])) == -6.0
    assert el.evaluate_at(g["J12"], sys0, el.State([1, 0, 0], [0, 1, 0])) == 1.0
    assert set(g) == set(el.GENERATOR_NAMES)


def test_all_generator_brackets(system, rng):
    gens = el.generators(system)
    pairs = list(itertools.combinations(el.GENERATOR_NAMES, 2))
    assert len(pairs) == 45
    exprs = [(ox.poisson_bracket(gens[a], gens[b]), expected_bracket(gens, a, b)) for a, b in pairs]
    for _ in range(20):
        env = el.env(system, el.random_state(system, rng))
        for got, want in exprs:
            w = ox.evaluate(want, env)
            assert abs(ox.evaluate(got, env) - w) <= 1e-9 * max(1.0, abs(w))


def test_bracket_spot_checks(spinning, rng):
    gens = el.generators(spinning)
    env = el.env(spinning, el.random_state(spinning, rng))
    ev = lambda e: ox.evaluate(e, env)  # noqa: E731
    pb = ox.poisson_bracket
    # {J_mn, P_r} = eta_mr P_n - eta_nr P_m
    assert ev(pb(gens["J12"], gens["P1"])) == pytest.approx(ev(gens["P2"]))
    assert ev(pb(gens["J10"], gens["P0"])) == pytest.approx(ev(gens["P1"]))
    assert ev(pb(gens["J10"], gens["P1"])) == pytest.approx(ev(gens["P0"]))
    assert ev(pb(gens["J10"], gens["J20"])) == pytest.approx(-ev(gens["J12"]))


def test_time_reversal(system, rng):
    st = el.random_state(system, rng)
    back = el.time_reversal(el.time_reversal(st))
    assert back.max_abs_diff(st) == 0
    rest = el.State([1, 2, 3], [0, 0, 0], [0, 0, 1.0])
    flipped = el.time_reversal(rest)
    np.testing.assert_array_equal(flipped.s_hat, [0, 0, -1.0])
    np.testing.assert_array_equal(flipped.x, rest.x)
    gens = el.generators(system)
    e1, e2 = el.env(system, st), el.env(system, el.time_reversal(st))
    for name, sign in [("P0", 1), ("P1", -1), ("P3", -1), ("J12", -1), ("J23", -1), ("J10", 1), ("J30", 1)]:
        assert ox.evaluate(gens[name], e2) == pytest.approx(sign * ox.evaluate(gens[name], e1), abs=1e-12)


def test_momenta_examples(spinning, rng):
    rest = el.State([0, 0, 0], [0, 0, 0], [0.6, 0.0, 0.8])
    mv = el.momenta(spinning, rest)
    np.testing.assert_allclose(mv.P_lower, [-spinning.mc, 0, 0, 0])
    s = spinning.S * rest.s_hat
    J = mv.J_lower
    np.testing.assert_allclose([J[1, 2], J[1, 3], J[2, 3]], [s[2], -s[1], s[0]])
    np.testing.assert_allclose(J[1:, 0], 0.0)
    for _ in range(10):
        mv = el.momenta(spinning, el.random_state(spinning, rng))
        assert mv.mass_shell == pytest.approx(spinning.mc ** 2, rel=1e-12)


def test_momenta_agree_with_expressions(system, rng):
    gens = el.generators(system)
    st = el.random_state(system, rng)
    mv = el.momenta(system, st)
    for mu in range(4):
        assert el.evaluate_at(gens[f"P{mu}"], system, st) == pytest.approx(mv.P_lower[mu])
    for name in el.GENERATOR_NAMES[4:]:
        a, b = int(name[1]), int(name[2])
        assert el.evaluate_at(gens[name], system, st) == pytest.approx(mv.J_lower[a, b])


def test_reconstruct_roundtrip(system, rng):
    for _ in range(50):
        st = el.random_state(system, rng)
        assert el.reconstruct(system, el.momenta(system, st)).max_abs_diff(st) < 1e-9


def test_reconstruct_rest_state(spinning):
    st = el.State([0.5, -1.0, 2.0], [0, 0, 0], [0, 1.0, 0])
    np.testing.assert_allclose(el.reconstruct(spinning, el.momenta(spinning, st)).x, st.x, atol=1e-15)


def test_reconstruct_rejects_casimir_mismatch(spinning, rng):
    mv = el.momenta(spinning, el.random_state(spinning, rng))
    heavier = el.ElementarySystem(2 * spinning.m, spinning.S, spinning.c)
    with pytest.raises(el.ReconstructionError, match="mass"):
        el.reconstruct(heavier, mv)
    with pytest.raises(el.ReconstructionError, match="spin"):
        el.reconstruct(el.ElementarySystem(spinning.m, 2 * spinning.S, spinning.c), mv)


def test_poincare_act_examples(spinning, rng):
    st = el.random_state(spinning, rng)
    same = el.poincare_act(spinning, PoincareTransform.identity(), st)
    assert same.max_abs_diff(st) < 1e-12
    a = np.array([0.0, 0.4, -1.1, 2.0])
    moved = el.poincare_act(spinning, PoincareTransform.translation(a), st)
    np.testing.assert_allclose(moved.x, st.x + a[1:], atol=1e-12)
    np.testing.assert_allclose(moved.p, st.p, atol=1e-12)
    np.testing.assert_allclose(moved.s_hat, st.s_hat, atol=1e-12)
    L = exp_generator(1, 2, 0.7) @ exp_generator(2, 3, -1.3)
    R = L.matrix[1:, 1:]
    rotated = el.poincare_act(spinning, PoincareTransform(L), st)
    np.testing.assert_allclose(rotated.x, R @ st.x, atol=1e-12)
    np.testing.assert_allclose(rotated.p, R @ st.p, atol=1e-12)
    np.testing.assert_allclose(rotated.s_hat, R @ st.s_hat, atol=1e-12)


def test_poincare_act_rejects_improper(spinning, rng):
    st = el.random_state(spinning, rng)
    with pytest.raises(ValueError):
        el.poincare_act(spinning, PoincareTransform(np.diag([1.0, -1, 1, 1])), st)


def test_equivariance_and_action_property(system, rng):
    for _ in range(30):
        st = el.random_state(system, rng)
        g1, g2 = random_poincare(rng), random_poincare(rng)
        lhs = el.momenta(system, el.poincare_act(system, g1, st))
        rhs = coadjoint_transform(g1, el.momenta(system, st))
        assert lhs.max_abs_diff(rhs) < 1e-9 * max(1.0, np.abs(rhs.J.comps).max())
        a = el.poincare_act(system, g1, el.poincare_act(system, g2, st))
        b = el.poincare_act(system, g1 @ g2, st)
        assert a.max_abs_diff(b) < 1e-8


def test_symplectic_property(system, rng):
    for _ in range(5):
        assert symplectic_defect(system, random_poincare(rng), el.random_state(system, rng)) < 1e-5


def test_time_reversal_about_hyperplane(spinning, rng):
    st = el.random_state(spinning, rng)
    rest = el.time_reversal_about(spinning, Hyperplane.rest(0.0), st)
    assert rest.max_abs_diff(el.time_reversal(st)) < 1e-12
    sigma = Hyperplane(np.array([np.cosh(0.5), np.sinh(0.5), 0, 0]), 0.3)
    twice = el.time_reversal_about(spinning, sigma, el.time_reversal_about(spinning, sigma, st))
    assert twice.max_abs_diff(st) < 1e-9


def test_json_roundtrip(system, rng):
    st = el.random_state(system, rng)
    data = el.state_to_json(system, st)
    assert ("s_hat" in data) == system.spinning
    sys2, st2 = el.state_from_json(data)
    assert sys2 == system and st2.max_abs_diff(st) == 0
    sys3, _ = el.state_from_json(data, c=7.0)
    assert sys3.c == 7.0
    with pytest.raises(ValueError):
        el.state_from_json({"S": 1.0})
