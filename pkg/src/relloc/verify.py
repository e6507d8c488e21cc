"""Named verification suites.

Each suite samples random states (seeded, see :class:`RunConfig`) and reports
the worst error of every identity it checks against a fixed tolerance.
Errors of the form "a should equal b" are normalised as
``|a - b| / max(1, |b|)`` unless a check says otherwise.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import zlib
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import elementary as el
from . import lorentz as lz
from . import minkowski as mk
from . import obsexpr as ox
from . import localisation as lo
from .poincare import Hyperplane, act_hyperplane, coadjoint_transform, compose, random_lorentz, random_poincare

SCHEMA = "relloc/1"

SPIN_ZERO = el.ElementarySystem(m=1.2, S=0.0, c=1.5)
SPINNING = el.ElementarySystem(m=0.8, S=1.7, c=2.5)
SYSTEMS = (SPIN_ZERO, SPINNING)


@dataclass
class RunConfig:
    seed: int = 42
    samples: int = 100
    tolerances: dict[str, float] = field(default_factory=dict)
    fmt: str = "json"

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        for key, tol in self.tolerances.items():
            if not tol > 0:
                raise ValueError(f"tolerance for {key!r} must be positive")
        if self.fmt not in ("json", "csv"):
            raise ValueError("format must be 'json' or 'csv'")

    def rng(self, suite: str) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence([self.seed, zlib.crc32(suite.encode())]))

    def tolerance(self, suite: str, check: str, default: float) -> float:
        return self.tolerances.get(f"{suite}.{check}", self.tolerances.get(suite, default))


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    relation: str = "<"  # "<": value must stay below; ">=": value must reach
    detail: str = ""

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.value):
            return False
        if self.relation == "<":
            return self.value < self.tolerance
        return self.value >= self.tolerance


@dataclass
class SuiteReport:
    suite: str
    seed: int
    samples: int
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "suite": self.suite,
            "seed": self.seed,
            "samples": self.samples,
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "value": c.value,
                    "relation": c.relation,
                    "tolerance": c.tolerance,
                    "passed": c.passed,
                    **({"detail": c.detail} if c.detail else {}),
                }
                for c in self.checks
            ],
        }


def render(reports: list[SuiteReport], fmt: str) -> str:
    if fmt == "json":
        payload = reports[0].to_json() if len(reports) == 1 else {
            "schema": SCHEMA,
            "passed": all(r.passed for r in reports),
            "suites": [r.to_json() for r in reports],
        }
        return json.dumps(payload, indent=2)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["suite", "check", "value", "relation", "tolerance", "passed"])
    for r in reports:
        for c in r.checks:
            writer.writerow([r.suite, c.name, repr(c.value), c.relation, repr(c.tolerance), "pass" if c.passed else "fail"])
    return buf.getvalue()


def rel_err(actual: float, expected: float) -> float:
    return abs(actual - expected) / max(1.0, abs(expected))


class _Max:
    """Running maximum of an error measure."""

    def __init__(self):
        self.value = 0.0

    def add(self, err: float) -> None:
        err = float(err)
        if not np.isfinite(err):
            self.value = float("inf")
        elif err > self.value:
            self.value = err


# --- shared samplers ------------------------------------------------------------------------

def random_frame(rng: np.random.Generator, max_rapidity: float = 1.0) -> np.ndarray:
    """Unit future-directed timelike vector ``Lambda e0`` for a random Lambda."""
    u = random_lorentz(rng, max_rapidity).matrix[:, 0]
    return u / np.sqrt(-mk.inner(u, u))


def random_hyperplane(rng: np.random.Generator) -> Hyperplane:
    return Hyperplane(random_frame(rng), rng.uniform(-2.0, 2.0))


# --- algebra ----------------------------------------------------------------------------------

def _parse_generator(name: str):
    if name[0] == "P":
        return ("P", int(name[1]))
    return ("J", int(name[1]), int(name[2]))


def expected_bracket(gens: dict, a: str, b: str) -> ox.Expression:
    """Right-hand side of the Poincare algebra for ``{a, b}``."""
    eta = mk.ETA
    A, B = _parse_generator(a), _parse_generator(b)
    P = lambda mu: gens[f"P{mu}"]  # noqa: E731
    J = lambda mu, nu: el.angular_expr(gens, mu, nu)  # noqa: E731
    if A[0] == "P" and B[0] == "P":
        return ox.ZERO
    if A[0] == "J" and B[0] == "P":
        (m, n), r = A[1:], B[1]
        return eta[m, r] * P(n) - eta[n, r] * P(m)
    if A[0] == "P" and B[0] == "J":
        return -expected_bracket(gens, b, a)
    (m, n), (r, s) = A[1:], B[1:]
    return eta[m, r] * J(n, s) - eta[n, r] * J(m, s) - eta[m, s] * J(n, r) + eta[n, s] * J(m, r)


def suite_algebra(cfg: RunConfig) -> list[Check]:
    rng = cfg.rng("algebra")
    checks = []
    for system in SYSTEMS:
        tag = "spin0" if not system.spinning else "spinS"
        gens = el.generators(system)
        pairs = list(itertools.combinations(el.GENERATOR_NAMES, 2))
        brackets = [(ox.poisson_bracket(gens[a], gens[b]), expected_bracket(gens, a, b)) for a, b in pairs]
        states = [el.random_state(system, rng) for _ in range(cfg.samples)]
        worst = _Max()
        for state in states:
            env = el.env(system, state)
            for got, want in brackets:
                worst.add(rel_err(ox.evaluate(got, env), ox.evaluate(want, env)))
        checks.append(Check(f"poincare-brackets-{tag}", worst.value, cfg.tolerance("algebra", "poincare-brackets", 1e-9),
                            detail=f"{len(pairs)} brackets"))

        # translation invariance / rotation covariance of P and s; complete involutive set
        p = [ox.Sym(n) for n in ox.MOMENTUM]
        s = [ox.Sym(n) for n in ox.SPIN] if system.spinning else [ox.ZERO] * 3
        p_norm = ox.sqrt(p[0] ** 2 + p[1] ** 2 + p[2] ** 2)
        helicity = ox.add(*(p[k] * s[k] for k in range(3))) / p_norm
        trafo_exprs = []
        for vec in (p, s):
            for a in range(3):
                for c in range(3):
                    trafo_exprs.append((ox.poisson_bracket(gens[f"P{a + 1}"], vec[c]), ox.ZERO))
                    for b in range(3):
                        lhs = ox.poisson_bracket(el.angular_expr(gens, a + 1, b + 1), vec[c])
                        trafo_exprs.append((lhs, float(a == c) * vec[b] - float(b == c) * vec[a]))
        fns = [gens["P1"], gens["P2"], gens["P3"]] + ([helicity] if system.spinning else [])
        civ_exprs = [ox.poisson_bracket(f, g) for f, g in itertools.combinations(fns, 2)]
        trafo = _Max()
        civ = _Max()
        for state in states:
            env = el.env(system, state)
            for lhs, rhs in trafo_exprs:
                trafo.add(rel_err(ox.evaluate(lhs, env), ox.evaluate(rhs, env)))
            for e in civ_exprs:
                civ.add(abs(ox.evaluate(e, env)))
        checks.append(Check(f"momentum-spin-transform-{tag}", trafo.value, cfg.tolerance("algebra", "momentum-spin-transform", 1e-9)))
        checks.append(Check(f"involutive-set-{tag}", civ.value, cfg.tolerance("algebra", "involutive-set", 1e-9)))
    return checks


# --- equivariance -------------------------------------------------------------------------------

def _casimirs(mv) -> tuple[float, float]:
    W = lo.pauli_lubanski(mv)
    return mv.mass_shell, mk.inner(W, W)


def symplectic_defect(system: el.ElementarySystem, g, state: el.State, h: float = 1e-6) -> float:
    """Max over coordinate pairs of ``|{f o Phi, g o Phi} - {f, g} o Phi|`` by central differences."""
    def image(st):
        out = el.poincare_act(system, g, st)
        return np.concatenate([out.x, out.p, out.spin(system)])

    directions = []  # (derivative of image, kind, index or tangent vector)
    for k in range(3):
        for kind in ("x", "p"):
            hk = h * max(1.0, abs((state.x if kind == "x" else state.p)[k]))
            dv = np.zeros(3)
            dv[k] = hk
            plus = el.State(state.x + dv, state.p, state.s_hat) if kind == "x" else el.State(state.x, state.p + dv, state.s_hat)
            minus = el.State(state.x - dv, state.p, state.s_hat) if kind == "x" else el.State(state.x, state.p - dv, state.s_hat)
            directions.append((kind, k, (image(plus) - image(minus)) / (2 * hk)))
    tangents = []
    if system.spinning:
        s_hat = state.s_hat
        t1 = np.cross(s_hat, [1.0, 0.0, 0.0] if abs(s_hat[0]) < 0.9 else [0.0, 1.0, 0.0])
        t1 /= np.linalg.norm(t1)
        t2 = np.cross(s_hat, t1)
        for t in (t1, t2):
            def along(eps):
                v = s_hat + eps * t
                return el.State(state.x, state.p, v / np.linalg.norm(v))
            # d/d(eps) of s = S (s_hat + eps t)/|.| is S t at eps = 0
            d = (image(along(h)) - image(along(-h))) / (2 * h) / system.S
            tangents.append((t, d))

    n_out = 9
    grad_x = np.zeros((n_out, 3))
    grad_p = np.zeros((n_out, 3))
    for kind, k, d in directions:
        (grad_x if kind == "x" else grad_p)[:, k] = d
    grad_s = np.zeros((n_out, 3))
    for t, d in tangents:
        grad_s += np.outer(d, t)
    s_vec = state.spin(system)
    moved = el.poincare_act(system, g, state)
    s_new = moved.spin(system)
    worst = 0.0
    for i in range(n_out):
        for j in range(n_out):
            lhs = grad_x[i] @ grad_p[j] - grad_p[i] @ grad_x[j] + s_vec @ np.cross(grad_s[i], grad_s[j])
            if i < 3 and 3 <= j < 6:
                rhs = float(i == j - 3)
            elif 3 <= i < 6 and j < 3:
                rhs = -float(i - 3 == j)
            elif i >= 6 and j >= 6:
                rhs = float(mk.levi_civita(3)[i - 6, j - 6] @ s_new)
            else:
                rhs = 0.0
            worst = max(worst, rel_err(lhs, rhs))
    return worst


def suite_equivariance(cfg: RunConfig) -> list[Check]:
    rng = cfg.rng("equivariance")
    checks = []
    for system in SYSTEMS:
        tag = "spin0" if not system.spinning else "spinS"
        equiv, action, casimir, sympl = _Max(), _Max(), _Max(), _Max()
        for k in range(cfg.samples):
            state = el.random_state(system, rng)
            g1, g2 = random_poincare(rng), random_poincare(rng)
            mv = el.momenta(system, state)
            moved = el.poincare_act(system, g1, state)
            want = coadjoint_transform(g1, mv)
            scale = max(1.0, float(np.abs(want.J.comps).max()), float(np.abs(want.P.comps).max()))
            equiv.add(el.momenta(system, moved).max_abs_diff(want) / scale)
            twice = el.poincare_act(system, g1, el.poincare_act(system, g2, state))
            once = el.poincare_act(system, compose(g1, g2), state)
            action.add(twice.max_abs_diff(once) / max(1.0, float(np.abs(once.coords()).max())))
            c0, c1 = _casimirs(mv), _casimirs(want)
            casimir.add(max(rel_err(c1[0], c0[0]), rel_err(c1[1], c0[1])))
            if k < max(1, cfg.samples // 5):
                sympl.add(symplectic_defect(system, g1, state))
        checks.append(Check(f"coadjoint-equivariance-{tag}", equiv.value, cfg.tolerance("equivariance", "coadjoint-equivariance", 1e-9)))
        checks.append(Check(f"action-property-{tag}", action.value, cfg.tolerance("equivariance", "action-property", 1e-8)))
        checks.append(Check(f"casimirs-preserved-{tag}", casimir.value, cfg.tolerance("equivariance", "casimirs-preserved", 1e-9)))
        checks.append(Check(f"symplectic-{tag}", sympl.value, cfg.tolerance("equivariance", "symplectic", 1e-5),
                            detail="finite-difference pullbacks"))
    return checks


# --- Newton-Wigner theorem ---------------------------------------------------------------------

def suite_nw_theorem(cfg: RunConfig) -> list[Check]:
    rng = cfg.rng("nw-theorem")
    checks = []
    for system in SYSTEMS:
        tag = "spin0" if not system.spinning else "spinS"
        gens = el.generators(system)
        X = lo.nw_expressions(system, gens)
        Xs = [X["X1"], X["X2"], X["X3"]]
        commuting = [ox.poisson_bracket(Xs[a], Xs[b]) for a, b in ((0, 1), (0, 2), (1, 2))]
        canonical = [(ox.poisson_bracket(Xs[a], gens[f"P{b + 1}"]), float(a == b)) for a in range(3) for b in range(3)]
        rotation = []
        for a, b in ((0, 1), (0, 2), (1, 2)):
            J = el.angular_expr(gens, a + 1, b + 1)
            for c in range(3):
                rotation.append((ox.poisson_bracket(J, Xs[c]), float(a == c) * Xs[b] - float(b == c) * Xs[a]))
        sig0 = Hyperplane.rest(0.0)
        comm, canon, rot, trev, nwpos, coords, gen_t = (_Max() for _ in range(7))
        signs = {"P0": 1.0, "J10": 1.0, "J20": 1.0, "J30": 1.0}
        for _ in range(cfg.samples):
            state = el.random_state(system, rng)
            env = el.env(system, state)
            for e in commuting:
                comm.add(abs(ox.evaluate(e, env)))
            for e, want in canonical:
                canon.add(rel_err(ox.evaluate(e, env), want))
            for e, want in rotation:
                rot.add(rel_err(ox.evaluate(e, env), ox.evaluate(want, env)))
            X_num = lo.nw_position_coords(system, state)
            reversed_state = el.time_reversal(state)
            X_rev = lo.nw_position_coords(system, reversed_state)
            trev.add(float(np.abs(X_rev - X_num).max()) / max(1.0, float(np.abs(X_num).max())))
            env_rev = el.env(system, reversed_state)
            for name in el.GENERATOR_NAMES:
                sign = signs.get(name, -1.0)
                gen_t.add(rel_err(ox.evaluate(gens[name], env_rev), sign * ox.evaluate(gens[name], env)))
            chi = lo.ssc_position(el.momenta(system, state), lo.NW, sig0)
            nwpos.add(max(abs(chi[0]), float(np.abs(chi[1:] - X_num).max())) / max(1.0, float(np.abs(X_num).max())))
            coords.add(float(np.abs(X_num - state.x).max()) / max(1.0, float(np.abs(state.x).max())))
        checks += [
            Check(f"commuting-components-{tag}", comm.value, cfg.tolerance("nw-theorem", "commuting-components", 1e-9)),
            Check(f"canonical-relations-{tag}", canon.value, cfg.tolerance("nw-theorem", "canonical-relations", 1e-9)),
            Check(f"rotation-vector-{tag}", rot.value, cfg.tolerance("nw-theorem", "rotation-vector", 1e-9)),
            Check(f"time-reversal-invariance-{tag}", trev.value, cfg.tolerance("nw-theorem", "time-reversal-invariance", 1e-9)),
            Check(f"time-reversal-generators-{tag}", gen_t.value, cfg.tolerance("nw-theorem", "time-reversal-generators", 1e-9)),
            Check(f"equals-nw-position-{tag}", nwpos.value, cfg.tolerance("nw-theorem", "equals-nw-position", 1e-10)),
            Check(f"equals-canonical-x-{tag}", coords.value, cfg.tolerance("nw-theorem", "equals-canonical-x", 1e-10)),
        ]
    return checks


# --- centre of spin ------------------------------------------------------------------------------

def generic_frame(rng: np.random.Generator, W: np.ndarray, max_tries: int = 1000) -> np.ndarray:
    """Random frame with ``|u.W| >= 1e-6 |W|`` (Euclidean norm of W)."""
    wn = float(np.linalg.norm(W))
    for _ in range(max_tries):
        u = random_frame(rng)
        if abs(mk.inner(u, W)) >= 1e-6 * wn:
            return u
    raise RuntimeError("could not sample a frame with u.W != 0")


def suite_centre_of_spin(cfg: RunConfig) -> list[Check]:
    rng = cfg.rng("centre-of-spin")
    system = SPINNING
    nw_res, span_res = _Max(), _Max()
    ce_hits = ci_hits = 0
    ce_min = ci_min = float("inf")
    for _ in range(cfg.samples):
        state = el.random_state(system, rng)
        mv = el.momenta(system, state)
        u = generic_frame(rng, lo.pauli_lubanski(mv))
        sigma = Hyperplane(u, rng.uniform(-2.0, 2.0))
        x_nw = lo.ssc_position(mv, lo.NW, sigma)
        nw_res.add(lo.centre_of_spin_residual(mv, x_nw, u))
        shifted = x_nw + rng.uniform(-2, 2) * u + rng.uniform(-2, 2) * mv.P_vector / mv.mc
        span_res.add(lo.centre_of_spin_residual(mv, shifted, u))
        r_ce = lo.centre_of_spin_residual(mv, lo.ssc_position(mv, lo.CE, sigma), u)
        r_ci = lo.centre_of_spin_residual(mv, lo.ssc_position(mv, lo.CI, sigma), u)
        ce_hits += r_ce > 1e-3
        ci_hits += r_ci > 1e-3
        ce_min, ci_min = min(ce_min, r_ce), min(ci_min, r_ci)
    need = float(np.ceil(0.95 * cfg.samples))
    return [
        Check("nw-residual", nw_res.value, cfg.tolerance("centre-of-spin", "nw-residual", 1e-10)),
        Check("span-u-P-displacement-residual", span_res.value, cfg.tolerance("centre-of-spin", "span-u-P-displacement-residual", 1e-10)),
        Check("ce-residual-above-1e-3", float(ce_hits), need, ">=", detail=f"min residual {ce_min!r}"),
        Check("ci-residual-above-1e-3", float(ci_hits), need, ">=", detail=f"min residual {ci_min!r}"),
    ]


# --- Moller disc ----------------------------------------------------------------------------------

def random_f(rng: np.random.Generator, max_rapidity: float = 8.0) -> np.ndarray:
    """Timelike future-directed unit vector, rapidity uniform in [0, max_rapidity]."""
    n = rng.normal(size=3)
    n /= np.linalg.norm(n)
    eta = rng.uniform(0.0, max_rapidity)
    return np.concatenate([[np.cosh(eta)], np.sinh(eta) * n])


def moller_sweep(mv, rng: np.random.Generator, n_f: int = 1000) -> dict[str, float]:
    disc = lo.moller_disc(mv)
    sigma = Hyperplane(mv.P_vector / mv.mc, 0.0)
    wn = max(float(np.linalg.norm(disc.normal)), 1e-300)
    radius_excess = 0.0
    orth = 0.0
    sup = 0.0
    for _ in range(n_f):
        f = random_f(rng)
        x = lo.ssc_position(mv, lo.Custom(lambda s, m, f=f: f), sigma)
        d = x - disc.centre
        dist = float(np.sqrt(max(mk.inner(d, d), 0.0)))
        sup = max(sup, dist)
        radius_excess = max(radius_excess, dist - disc.radius)
        orth = max(orth, abs(mk.inner(d, disc.normal)) / wn if disc.radius > 0 else dist)
    return {"radius": disc.radius, "excess": radius_excess, "orthogonality": orth, "sup": sup}


def suite_moller(cfg: RunConfig) -> list[Check]:
    rng = cfg.rng("moller")
    excess, orth = _Max(), _Max()
    worst_ratio = float("inf")
    n_states = max(1, cfg.samples // 10)
    for _ in range(n_states):
        state = el.random_state(SPINNING, rng)
        res = moller_sweep(el.momenta(SPINNING, state), rng)
        scale = max(1.0, res["radius"])
        excess.add(max(res["excess"], 0.0) / scale)
        orth.add(res["orthogonality"] / scale)
        worst_ratio = min(worst_ratio, res["sup"] / res["radius"])
    radius_err = _Max()
    zero_radius = _Max()
    for _ in range(n_states):
        mv = el.momenta(SPINNING, el.random_state(SPINNING, rng))
        radius_err.add(rel_err(lo.moller_disc(mv).radius, SPINNING.S / SPINNING.mc))
        zero_radius.add(lo.moller_disc(el.momenta(SPIN_ZERO, el.random_state(SPIN_ZERO, rng))).radius)
    return [
        Check("outside-radius", excess.value, cfg.tolerance("moller", "outside-radius", 1e-9), detail="1000 f per state"),
        Check("orthogonal-to-W", orth.value, cfg.tolerance("moller", "orthogonal-to-W", 1e-9)),
        Check("sup-distance-over-radius", worst_ratio, 0.99, ">="),
        Check("radius-equals-S-over-mc", radius_err.value, cfg.tolerance("moller", "radius-equals-S-over-mc", 1e-9)),
        Check("spin-zero-radius", zero_radius.value, cfg.tolerance("moller", "spin-zero-radius", 1e-9)),
    ]


# --- covariance -------------------------------------------------------------------------------------

def suite_covariance(cfg: RunConfig) -> list[Check]:
    rng = cfg.rng("covariance")
    worst = {name: _Max() for name in lo.CHOICES}
    image, slope = _Max(), _Max()
    frozen = 0.0
    frozen_choice = lo.frozen_vector([1.0, 0.0, 0.0, 0.0])
    for k in range(cfg.samples):
        system = SYSTEMS[k % 2]
        state = el.random_state(system, rng)
        g = random_poincare(rng)
        sigma = random_hyperplane(rng)
        mv = el.momenta(system, state)
        for name, choice in lo.CHOICES.items():
            chi = lo.ssc_position(mv, choice, sigma)
            worst[name].add(lo.covariance_check(system, choice, g, sigma, state) / max(1.0, float(np.abs(chi).max())))
            image.add(abs(mk.inner(sigma.u, chi) + sigma.tau) / max(1.0, float(np.abs(chi).max())))
            dtau = 0.5
            later = lo.ssc_position(mv, choice, Hyperplane(sigma.u, sigma.tau + dtau))
            want = dtau * mv.P_vector / (-mk.inner(sigma.u, mv.P_vector))
            slope.add(float(np.abs(later - chi - want).max()) / max(1.0, float(np.abs(chi).max())))
        if system.spinning:
            frozen = max(frozen, lo.covariance_check(system, frozen_choice, g, sigma, state))
    checks = [Check(f"covariant-{name}", m.value, cfg.tolerance("covariance", f"covariant-{name}", 1e-9)) for name, m in worst.items()]
    checks += [
        Check("image-on-hyperplane", image.value, cfg.tolerance("covariance", "image-on-hyperplane", 1e-10)),
        Check("tau-slope-parallel-to-P", slope.value, cfg.tolerance("covariance", "tau-slope-parallel-to-P", 1e-8)),
        Check("frozen-f-violation", frozen, 1e-3, ">=", detail="fixed lab vector e0 is not covariant"),
    ]
    return checks


# --- Hodge -----------------------------------------------------------------------------------------

def hodge_oracle(beta: mk.Form) -> mk.Form:
    """Solve ``alpha ^ X = eta(alpha, beta) eps`` for X over all basis alpha (brute force)."""
    k = beta.degree
    basis_a = [mk.Form.basis(idx) for idx in mk.basis_indices(k)]
    basis_x = [mk.Form.basis(idx) for idx in mk.basis_indices(4 - k)]
    A = np.array([[mk.wedge(a, x).comps[0] for x in basis_x] for a in basis_a])
    rhs = np.array([mk.form_inner(a, beta) for a in basis_a])
    sol = np.linalg.solve(A, rhs)
    return mk.make_form(4 - k, sol)


def suite_hodge(cfg: RunConfig) -> list[Check]:
    rng = cfg.rng("hodge")
    relation, oracle, double = _Max(), _Max(), _Max()
    for k in range(5):
        for idx_b in mk.basis_indices(k):
            beta = mk.Form.basis(idx_b)
            star = mk.hodge(beta)
            for idx_a in mk.basis_indices(k):
                alpha = mk.Form.basis(idx_a)
                lhs = mk.wedge(alpha, star)
                relation.add(abs(lhs.comps[0] - mk.form_inner(alpha, beta)))
            oracle.add(float(np.abs(hodge_oracle(beta).comps - star.comps).max()))
        for idx in mk.basis_indices(2):
            b2 = mk.Form.basis(idx)
            double.add(float(np.abs(mk.hodge(mk.hodge(b2)).comps + b2.comps).max()))
    leibniz, metric = _Max(), _Max()
    for _ in range(cfg.samples):
        v, w = rng.normal(size=4), rng.normal(size=4)
        metric.add(abs(mk.inner(v, w) - mk.lower(v).comps @ w))
        metric.add(float(np.abs(mk.raise_(mk.lower(v)) - v).max()))
        a1 = mk.OneForm(rng.normal(size=4))
        b2 = mk.TwoForm(rng.normal(size=6))
        lhs = mk.interior(v, mk.wedge(a1, b2))
        rhs = mk.wedge(mk.interior(v, a1), b2) - mk.wedge(a1, mk.interior(v, b2))
        leibniz.add(float(np.abs(lhs.comps - rhs.comps).max()))
    eps3 = mk.spatial_levi_civita()
    return [
        Check("defining-relation", relation.value, cfg.tolerance("hodge", "defining-relation", 1e-14), detail="all basis pairs, degrees 0-4"),
        Check("brute-force-oracle", oracle.value, cfg.tolerance("hodge", "brute-force-oracle", 1e-14)),
        Check("double-star-minus-identity-2forms", double.value, cfg.tolerance("hodge", "double-star", 1e-14)),
        Check("graded-leibniz-interior", leibniz.value, cfg.tolerance("hodge", "graded-leibniz-interior", 1e-12)),
        Check("metric-compatibility", metric.value, cfg.tolerance("hodge", "metric-compatibility", 1e-12)),
        Check("spatial-levi-civita", float(np.abs(eps3 - mk.levi_civita(3)).max()), cfg.tolerance("hodge", "spatial-levi-civita", 1e-14)),
    ]


# --- exponentials -----------------------------------------------------------------------------------

def suite_exponentials(cfg: RunConfig) -> list[Check]:
    rng = cfg.rng("exponentials")
    eta = mk.ETA
    series, comm, square, iso = _Max(), _Max(), _Max(), _Max()
    alphas = np.concatenate([np.linspace(-3.0, 3.0, 13), rng.uniform(-3.0, 3.0, 8)])
    for a in range(4):
        for b in range(4):
            if a == b:
                continue
            B = lz.generator(a, b).matrix
            for alpha in alphas:
                closed = lz.exp_generator(a, b, alpha).matrix
                series.add(float(np.abs(closed - lz.exp_series(alpha * B)).max()))
                iso.add(float(np.abs(closed.T @ eta @ closed - eta).max()) / max(1.0, float(np.abs(closed).max()) ** 2))
            eps_ab = eta[a, a] * eta[b, b]
            square.add(float(np.abs(B @ B + eps_ab * lz.projector(a, b)).max()))
    pairs = list(itertools.combinations(range(4), 2))
    for (a, b), (c, d) in itertools.combinations_with_replacement(pairs, 2):
        lhs = lz.commutator(lz.generator(a, b), lz.generator(c, d)).matrix
        rhs = (eta[b, c] * lz.generator(a, d).matrix + eta[a, d] * lz.generator(b, c).matrix
               - eta[a, c] * lz.generator(b, d).matrix - eta[b, d] * lz.generator(a, c).matrix)
        comm.add(float(np.abs(lhs - rhs).max()))
    maps, fixes, proper = _Max(), _Max(), _Max()
    for _ in range(cfg.samples):
        mc = rng.uniform(0.5, 3.0)
        P = random_frame(rng, 2.0) * mc
        u = random_frame(rng, 2.0)
        Bu = lz.boost_to(u, P, mc)
        maps.add(float(np.abs(Bu @ (P / mc) - u).max()))
        # a vector orthogonal to both P and u
        basis = np.linalg.svd(np.vstack([eta @ P, eta @ u]))[2][2:]
        v = basis.T @ rng.normal(size=2)
        fixes.add(float(np.abs(Bu @ v - v).max()) / max(1.0, float(np.abs(v).max())))
        proper.add(0.0 if Bu.is_proper_orthochronous else 1.0)
    return [
        Check("closed-form-vs-series", series.value, cfg.tolerance("exponentials", "closed-form-vs-series", 1e-10), detail="|alpha| <= 3, all ordered pairs"),
        Check("exp-is-isometry", iso.value, cfg.tolerance("exponentials", "exp-is-isometry", 1e-12)),
        Check("generator-commutators", comm.value, cfg.tolerance("exponentials", "generator-commutators", 1e-15)),
        Check("generator-square", square.value, cfg.tolerance("exponentials", "generator-square", 1e-15)),
        Check("boost-maps-P-to-u", maps.value, cfg.tolerance("exponentials", "boost-maps-P-to-u", 1e-12)),
        Check("boost-fixes-orthogonal-plane", fixes.value, cfg.tolerance("exponentials", "boost-fixes-orthogonal-plane", 1e-12)),
        Check("boost-proper-orthochronous", proper.value, cfg.tolerance("exponentials", "boost-proper-orthochronous", 0.5)),
    ]


# --- bracket engine -------------------------------------------------------------------------------

def random_expression(rng: np.random.Generator, depth: int = 3) -> ox.Expression:
    """Random observable over all coordinates; division and sqrt only on positive arguments."""
    syms = [ox.Sym(n) for n in ox.COORDINATES]
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.2:
            return ox.Const(round(float(rng.uniform(-2, 2)), 3))
        return syms[rng.integers(len(syms))]
    kind = rng.choice(["add", "mul", "sub", "pow", "div", "sqrt"], p=[0.3, 0.3, 0.15, 0.1, 0.075, 0.075])
    a = random_expression(rng, depth - 1)
    if kind == "pow":
        return ox.power(a, int(rng.integers(2, 4)))
    if kind in ("div", "sqrt"):
        positive = ox.add(ox.Const(1.0), ox.power(a, 2))
        if kind == "sqrt":
            return ox.sqrt(positive)
        return random_expression(rng, depth - 1) / positive
    b = random_expression(rng, depth - 1)
    return {"add": ox.add, "mul": ox.mul, "sub": ox.sub}[kind](a, b)


def random_phase_point(rng: np.random.Generator, S: float = 1.3) -> dict[str, float]:
    s = rng.normal(size=3)
    s *= S / np.linalg.norm(s)
    env = {"m": 1.0, "S": S, "c": 1.0}
    vals = list(rng.uniform(-1.5, 1.5, 6)) + list(s)
    env.update(zip(ox.COORDINATES, map(float, vals)))
    return env


def suite_bracket_engine(cfg: RunConfig) -> list[Check]:
    rng = cfg.rng("bracket-engine")
    anti, leib, jac, fd, ext = _Max(), _Max(), _Max(), _Max(), _Max()
    pb = ox.poisson_bracket
    n_triples = max(1, cfg.samples // 2)
    for _ in range(n_triples):
        f, g, h = (random_expression(rng) for _ in range(3))
        fg, gf = pb(f, g), pb(g, f)
        lhs_l = pb(f, g * h)
        rhs_l = pb(f, g) * h + g * pb(f, h)
        cyc = [pb(f, pb(g, h)), pb(g, pb(h, f)), pb(h, pb(f, g))]
        for _ in range(3):
            env = random_phase_point(rng)
            v1, v2 = ox.evaluate(fg, env), ox.evaluate(gf, env)
            anti.add(abs(v1 + v2) / max(1.0, abs(v1)))
            leib.add(rel_err(ox.evaluate(lhs_l, env), ox.evaluate(rhs_l, env)))
            terms = [ox.evaluate(t, env) for t in cyc]
            jac.add(abs(sum(terms)) / max(1.0, max(abs(t) for t in terms)))
            for sym in ox.COORDINATES:
                exact = ox.evaluate(ox.differentiate(f, sym), env)
                hstep = 1e-6 * max(1.0, abs(env[sym]))
                up, down = dict(env), dict(env)
                up[sym] += hstep
                down[sym] -= hstep
                approx = (ox.evaluate(f, up) - ox.evaluate(f, down)) / (2 * hstep)
                fd.add(abs(exact - approx) / max(1.0, abs(exact)))
    # Jacobi on generator triples of a spinning system
    gens = el.generators(SPINNING)
    names = el.GENERATOR_NAMES
    triples = list(itertools.combinations(names, 3))
    picks = rng.choice(len(triples), size=min(len(triples), max(10, cfg.samples // 2)), replace=False)
    gen_jac = _Max()
    for idx in sorted(picks):
        a, b, c = (gens[n] for n in triples[idx])
        cyc = [pb(a, pb(b, c)), pb(b, pb(c, a)), pb(c, pb(a, b))]
        state = el.random_state(SPINNING, rng)
        env = el.env(SPINNING, state)
        terms = [ox.evaluate(t, env) for t in cyc]
        gen_jac.add(abs(sum(terms)) / max(1.0, max(abs(t) for t in terms)))
    # extension independence of the spin bracket off the sphere
    s = [ox.Sym(n) for n in ox.SPIN]
    constraint = s[0] ** 2 + s[1] ** 2 + s[2] ** 2 - ox.Sym("S") ** 2
    for _ in range(n_triples):
        f = random_expression(rng)
        g = random_expression(rng)
        k = float(rng.uniform(-3, 3))
        diff = pb(f + k * constraint, g) - pb(f, g)
        env = random_phase_point(rng)
        ext.add(abs(ox.evaluate(diff, env)))
    return [
        Check("antisymmetry", anti.value, cfg.tolerance("bracket-engine", "antisymmetry", 1e-8)),
        Check("leibniz", leib.value, cfg.tolerance("bracket-engine", "leibniz", 1e-8)),
        Check("jacobi-random", jac.value, cfg.tolerance("bracket-engine", "jacobi-random", 1e-8)),
        Check("jacobi-generators", gen_jac.value, cfg.tolerance("bracket-engine", "jacobi-generators", 1e-8)),
        Check("derivative-vs-finite-difference", fd.value, cfg.tolerance("bracket-engine", "derivative-vs-finite-difference", 1e-6)),
        Check("spin-extension-independence", ext.value, cfg.tolerance("bracket-engine", "spin-extension-independence", 1e-10)),
    ]


SUITES: dict[str, Callable[[RunConfig], list[Check]]] = {
    "algebra": suite_algebra,
    "equivariance": suite_equivariance,
    "nw-theorem": suite_nw_theorem,
    "centre-of-spin": suite_centre_of_spin,
    "moller": suite_moller,
    "covariance": suite_covariance,
    "hodge": suite_hodge,
    "exponentials": suite_exponentials,
    "bracket-engine": suite_bracket_engine,
}


def run_suite(name: str, cfg: RunConfig | None = None) -> SuiteReport:
    cfg = cfg or RunConfig()
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; available: {', '.join(SUITES)}")
    return SuiteReport(name, cfg.seed, cfg.samples, SUITES[name](cfg))
