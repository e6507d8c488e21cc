import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relloc import obsexpr as ox

x1, x2, x3, p1, p2, p3, s1, s2, s3 = (ox.Sym(n) for n in ox.COORDINATES)
m, S, c = (ox.Sym(n) for n in ox.PARAMETERS)
P0_TEXT = "-sqrt(m^2*c^2 + p1^2 + p2^2 + p3^2)"


def point(rng, spin=1.3):
    s = rng.normal(size=3)
    s *= spin / np.linalg.norm(s)
    env = dict(zip(ox.COORDINATES, [*rng.uniform(-1.5, 1.5, 6), *s]))
    env.update(m=1.1, S=spin, c=1.7)
    return env


def central_difference(f, env, sym):
    h = 1e-6 * max(1.0, abs(env[sym]))
    up, down = dict(env), dict(env)
    up[sym] += h
    down[sym] -= h
    return (ox.evaluate(f, up) - ox.evaluate(f, down)) / (2 * h)


leaves = st.sampled_from([*(ox.Sym(n) for n in ox.ALPHABET), ox.Const(2.0), ox.Const(0.5), ox.Const(-3.0)])


def _extend(children):
    positive = children.map(lambda a: ox.add(ox.Const(1.0), ox.power(a, 2)))
    return st.one_of(
        st.tuples(children, children).map(lambda t: ox.add(*t)),
        st.tuples(children, children).map(lambda t: ox.mul(*t)),
        st.tuples(children, children).map(lambda t: ox.sub(*t)),
        st.tuples(children, positive).map(lambda t: ox.div(*t)),
        st.tuples(children, st.integers(-2, 3)).map(lambda t: ox.power(ox.add(ox.Const(2.0), ox.power(t[0], 2)), t[1])),
        positive.map(ox.sqrt),
    )


expressions = st.recursive(leaves, _extend, max_leaves=12)


def test_parse_precedence():
    assert ox.parse("x1*p1 + s3") == ox.add(ox.mul(x1, p1), s3)
    assert ox.parse("x1 + p1*s3") == ox.add(x1, ox.mul(p1, s3))
    assert ox.parse(" x1 -x2- x3") == ox.sub(ox.sub(x1, x2), x3)
    assert ox.parse("x1/x2/x3") == ox.div(ox.div(x1, x2), x3)
    env = {"x1": 2.0}
    assert ox.evaluate(ox.parse("x1^3^2"), env) == 2.0 ** 9
    assert ox.evaluate(ox.parse("-x1^2"), env) == -4.0
    assert ox.evaluate(ox.parse("x1**2"), env) == 4.0


def test_parse_p0_expression():
    P0 = ox.parse(P0_TEXT)
    assert P0 == -ox.sqrt(m ** 2 * c ** 2 + p1 ** 2 + p2 ** 2 + p3 ** 2)
    assert ox.evaluate(P0, {"m": 2.0, "c": 3.0, "p1": 0.0, "p2": 0.0, "p3": 0.0}) == -6.0


def test_parse_errors():
    with pytest.raises(ox.ParseError) as err:
        ox.parse("x1 +")
    assert err.value.position == 4
    with pytest.raises(ox.UnknownSymbolError) as err:
        ox.parse("x1 + y")
    assert "x1" in str(err.value) and "s3" in str(err.value)
    for bad in ["", "(x1", "x1)", "x1 ^ 0.5", "sqrt x1", "x1 $ 2", "2 3"]:
        with pytest.raises(ox.ParseError):
            ox.parse(bad)


def test_aliases():
    e = ox.parse("2*Q + x1", {"Q": p2})
    assert e == ox.add(ox.mul(ox.Const(2.0), p2), x1)


@settings(max_examples=200)
@given(expressions)
def test_print_parse_roundtrip(e):
    assert ox.parse(ox.to_text(e)) == e


def test_derivative_examples(rng):
    P0 = ox.parse(P0_TEXT)
    d = ox.differentiate(P0, "p1")
    for _ in range(10):
        env = point(rng)
        assert ox.evaluate(d, env) == pytest.approx(env["p1"] / ox.evaluate(P0, env), rel=1e-14)
        assert ox.evaluate(d, env) == pytest.approx(central_difference(P0, env, "p1"), rel=1e-6)
    assert ox.differentiate(p2, "x1") == ox.ZERO
    assert ox.differentiate(s1 * s2, "s2") == s1
    assert ox.differentiate(m * c * x1, "x1") == m * c
    with pytest.raises(ValueError):
        ox.differentiate(x1, "m")


@settings(max_examples=60, deadline=None)
@given(expressions, st.integers(0, 2 ** 32 - 1))
def test_derivative_matches_finite_difference(e, seed):
    env = point(np.random.default_rng(seed))
    for sym in ox.COORDINATES:
        exact = ox.evaluate(ox.differentiate(e, sym), env)
        approx = central_difference(e, env, sym)
        assert abs(exact - approx) <= 1e-6 * max(1.0, abs(exact))


def test_evaluate_examples():
    assert ox.evaluate(ox.parse("x2"), {"x2": 7.0}) == 7.0
    with pytest.raises(ox.DomainError):
        ox.evaluate(ox.parse("1/(m*c - p1)"), {"m": 1.0, "c": 2.0, "p1": 2.0})
    with pytest.raises(ox.DomainError):
        ox.evaluate(ox.parse("sqrt(x1)"), {"x1": -1.0})
    with pytest.raises(ValueError):
        ox.evaluate(x1 + x2, {"x1": 1.0})


def test_bracket_examples():
    assert ox.poisson_bracket(x1, p1) == ox.ONE
    assert ox.poisson_bracket(p1, x1) == -ox.ONE
    assert ox.poisson_bracket(x1, p2) == ox.ZERO
    assert ox.evaluate(ox.poisson_bracket(s1, s2), {"s1": 0.0, "s2": 0.0, "s3": 2.0}) == 2.0
    J12 = x1 * p2 - x2 * p1 + s3
    env = {"x1": 0.3, "x2": -1.2, "x3": 0.4, "p1": 0.7, "p2": 1.9, "p3": -0.2, "s1": 0.1, "s2": 0.2, "s3": 0.3}
    assert ox.evaluate(ox.poisson_bracket(J12, p1), env) == pytest.approx(env["p2"])


@settings(max_examples=40, deadline=None)
@given(expressions, expressions, expressions, st.integers(0, 2 ** 32 - 1))
def test_bracket_identities(f, g, h, seed):
    env = point(np.random.default_rng(seed))
    pb = ox.poisson_bracket
    ev = lambda e: ox.evaluate(e, env)  # noqa: E731
    fg = ev(pb(f, g))
    assert abs(fg + ev(pb(g, f))) <= 1e-10 * max(1.0, abs(fg))
    lhs, rhs = ev(pb(f, g * h)), ev(pb(f, g) * h + g * pb(f, h))
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))
    terms = [ev(pb(f, pb(g, h))), ev(pb(g, pb(h, f))), ev(pb(h, pb(f, g)))]
    assert abs(sum(terms)) <= 1e-8 * max(1.0, *map(abs, terms))


def test_spin_extension_independence(rng):
    f = s1 * s2 + s3 ** 3
    g = s1 - 2 * s2 * s3
    constraint = s1 ** 2 + s2 ** 2 + s3 ** 2 - S ** 2
    for k in (0.5, -3.0):
        diff = ox.poisson_bracket(f + k * constraint, g) - ox.poisson_bracket(f, g)
        for _ in range(10):
            assert abs(ox.evaluate(diff, point(rng))) < 1e-10


def test_structural_equality_is_sound(rng):
    a = ox.parse("(x1 + p2)^2")
    b = ox.parse("(x1 + p2)*(x1 + p2)")
    for _ in range(5):
        env = point(rng)
        assert ox.evaluate(a, env) == pytest.approx(ox.evaluate(b, env))
    assert hash(ox.parse("x1*p1 + s3")) == hash(ox.parse("x1 * p1 + s3"))


def test_expressions_are_immutable():
    with pytest.raises(AttributeError):
        x1.name = "x2"


def test_deep_expression_does_not_recurse():
    e = x1
    for _ in range(3000):
        e = ox.sqrt(e * e + p1)
    d = ox.differentiate(e, "x1")
    assert np.isfinite(ox.evaluate(d, {"x1": 0.1, "p1": 0.2}))
