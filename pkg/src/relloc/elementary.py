"""Classical elementary systems with timelike four-momentum.

Phase space coordinates are ``(x, p, s_hat)`` with spin vector ``s = S s_hat``
(absent for spin zero).  The Poincare action is realised through the momentum
map: momenta -> co-adjoint transform -> :func:`reconstruct`, which inverts the
momentum map using the Newton-Wigner coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import obsexpr as ox
from .lorentz import boost_to
from .minkowski import DIM, OneForm, TwoForm, basis_vector, spatial_levi_civita
from .poincare import Hyperplane, MomentumValue, PoincareTransform, coadjoint_transform, inverse

EPS3 = spatial_levi_civita()


class ReconstructionError(ValueError):
    pass


@dataclass(frozen=True)
class ElementarySystem:
    m: float
    S: float = 0.0
    c: float = 1.0

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError(f"mass must be positive, got {self.m!r}")
        if not self.c > 0:
            raise ValueError(f"speed of light must be positive, got {self.c!r}")
        if not self.S >= 0:
            raise ValueError(f"spin must be non-negative, got {self.S!r}")

    @property
    def mc(self) -> float:
        return self.m * self.c

    @property
    def spinning(self) -> bool:
        return self.S > 0


@dataclass(frozen=True, eq=False)
class State:
    x: np.ndarray
    p: np.ndarray
    s_hat: np.ndarray | None = None

    def __init__(self, x, p, s_hat=None):
        x = np.array(x, dtype=float)
        p = np.array(p, dtype=float)
        if x.shape != (3,) or p.shape != (3,):
            raise ValueError("x and p must have three components")
        x.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)
        if s_hat is not None:
            s_hat = np.array(s_hat, dtype=float)
            if s_hat.shape != (3,) or abs(np.linalg.norm(s_hat) - 1.0) > 1e-12:
                raise ValueError(f"s_hat must be a unit 3-vector, got {s_hat.tolist()}")
            s_hat.setflags(write=False)
        object.__setattr__(self, "s_hat", s_hat)

    def spin(self, system: ElementarySystem) -> np.ndarray:
        """Spin vector ``s = S s_hat`` (zero for spin-zero systems)."""
        if not system.spinning:
            return np.zeros(3)
        if self.s_hat is None:
            raise ValueError("spinning system requires a state with s_hat")
        return system.S * self.s_hat

    def coords(self) -> np.ndarray:
        parts = [self.x, self.p] + ([self.s_hat] if self.s_hat is not None else [])
        return np.concatenate(parts)

    def max_abs_diff(self, other: "State") -> float:
        return float(np.abs(self.coords() - other.coords()).max())

    def __repr__(self) -> str:
        s = "" if self.s_hat is None else f", s_hat={self.s_hat.tolist()}"
        return f"State(x={self.x.tolist()}, p={self.p.tolist()}{s})"


def check_state(system: ElementarySystem, state: State) -> None:
    if system.spinning and state.s_hat is None:
        raise ValueError("spinning system requires s_hat")
    if not system.spinning and state.s_hat is not None:
        raise ValueError("spin-zero system takes no s_hat")


def env(system: ElementarySystem, state: State) -> dict[str, float]:
    """Symbol values for expression evaluation."""
    s = state.spin(system)
    out = {"m": system.m, "S": system.S, "c": system.c}
    for k in range(3):
        out[ox.POSITION[k]] = float(state.x[k])
        out[ox.MOMENTUM[k]] = float(state.p[k])
        out[ox.SPIN[k]] = float(s[k])
    return out


def evaluate_at(expr: ox.Expression, system: ElementarySystem, state: State) -> float:
    return ox.evaluate(expr, env(system, state))


# --- generator observables -----------------------------------------------------------

GENERATOR_NAMES = ("P0", "P1", "P2", "P3", "J12", "J13", "J23", "J10", "J20", "J30")


def generators(system: ElementarySystem) -> dict[str, ox.Expression]:
    """The ten momentum-map components as expressions in ``x, p, s, m, c``.

    Spin terms are dropped for spin-zero systems.
    """
    x = [ox.Sym(n) for n in ox.POSITION]
    p = [ox.Sym(n) for n in ox.MOMENTUM]
    s = [ox.Sym(n) for n in ox.SPIN]
    m, c = ox.Sym("m"), ox.Sym("c")
    mc = m * c
    P0 = -ox.sqrt(mc ** 2 + p[0] ** 2 + p[1] ** 2 + p[2] ** 2)
    out = {"P0": P0}
    for a in range(3):
        out[f"P{a + 1}"] = p[a]
    for a, b in ((0, 1), (0, 2), (1, 2)):
        J = x[a] * p[b] - x[b] * p[a]
        if system.spinning:
            c_idx = 3 - a - b
            J = J + float(EPS3[a, b, c_idx]) * s[c_idx]
        out[f"J{a + 1}{b + 1}"] = J
    for a in range(3):
        J = P0 * x[a]
        if system.spinning:
            b, c_idx = (a + 1) % 3, (a + 2) % 3
            cross = p[b] * s[c_idx] - p[c_idx] * s[b]
            J = J - cross / (mc - P0)
        out[f"J{a + 1}0"] = J
    return out


def momentum_expr(gens: dict[str, ox.Expression], mu: int) -> ox.Expression:
    """``P_mu`` (lower index) from a :func:`generators` table."""
    return gens[f"P{mu}"]


def angular_expr(gens: dict[str, ox.Expression], mu: int, nu: int) -> ox.Expression:
    """``J_{mu nu}`` for any index order (antisymmetric, zero on the diagonal)."""
    if mu == nu:
        return ox.ZERO
    key = f"J{mu}{nu}"
    if key in gens:
        return gens[key]
    return -gens[f"J{nu}{mu}"]


# --- numeric momenta --------------------------------------------------------------------

def momenta(system: ElementarySystem, state: State) -> MomentumValue:
    """Numeric momentum-map value ``(P_mu, J_{mu nu})`` at ``state``."""
    check_state(system, state)
    mc = system.mc
    x, p = state.x, state.p
    s = state.spin(system)
    P0 = -np.sqrt(mc * mc + p @ p)
    denom = mc - P0
    # mc - P0 = mc + sqrt(m^2c^2 + p^2) >= 2 mc
    assert denom >= 2.0 * mc * (1.0 - 1e-15), denom
    J = np.zeros((DIM, DIM))
    J[1:, 1:] = np.outer(x, p) - np.outer(p, x) + np.einsum("abc,c->ab", EPS3, s)
    J_a0 = P0 * x - np.cross(p, s) / denom
    J[1:, 0] = J_a0
    J[0, 1:] = -J_a0
    P = np.concatenate([[P0], p])
    return MomentumValue(OneForm(P), TwoForm.from_matrix(J, check=False))


def nw_coordinates(mv: MomentumValue) -> np.ndarray:
    """Newton-Wigner coordinates ``X_a`` in the frame ``e0`` from the generators.

    ``X_a = -J_a0/mc - J_ab P^b/(mc (mc - P_0)) - J_b0 P^b P_a/(P_0 mc (mc - P_0))``.
    """
    P = mv.P_lower
    J = mv.J_lower
    mc = mv.mc
    P0 = P[0]
    Pv = P[1:]
    J_a0 = J[1:, 0]
    denom = mc * (mc - P0)
    return -J_a0 / mc - (J[1:, 1:] @ Pv) / denom - (J_a0 @ Pv) * Pv / (P0 * denom)


def reconstruct(system: ElementarySystem, mv: MomentumValue, rtol: float = 1e-9) -> State:
    """Invert :func:`momenta`: the unique state with momentum value ``mv``."""
    from .localisation import pauli_lubanski

    if not mv.is_future_timelike:
        raise ReconstructionError(f"four-momentum {mv.P_vector.tolist()} is not timelike future-directed")
    mc = mv.mc
    if abs(mc - system.mc) > rtol * system.mc:
        raise ReconstructionError(
            f"mass Casimir mismatch: momentum value has m = {mc / system.c!r}, system has m = {system.m!r}"
        )
    W = pauli_lubanski(mv)
    w2 = float(-W[0] ** 2 + W[1:] @ W[1:])
    spin = np.sqrt(max(w2, 0.0)) / mc
    scale = max(system.S, float(np.abs(mv.J.comps).max()), 1e-300)
    if abs(spin - system.S) > rtol * scale:
        raise ReconstructionError(f"spin Casimir mismatch: momentum value has S = {spin!r}, system has S = {system.S!r}")
    x = nw_coordinates(mv)
    p = mv.P_lower[1:]
    if not system.spinning:
        return State(x, p)
    J = mv.J_lower[1:, 1:]
    spin_part = J - np.outer(x, p) + np.outer(p, x)
    s = 0.5 * np.einsum("abd,ab->d", EPS3, spin_part)
    return State(x, p, s / np.linalg.norm(s))


def time_reversal(state: State) -> State:
    """Time reversal about the hyperplane ``(e0, 0)``: ``(x, p, s_hat) -> (x, -p, -s_hat)``."""
    s_hat = None if state.s_hat is None else -state.s_hat
    return State(state.x, -state.p, s_hat)


def poincare_act(system: ElementarySystem, g: PoincareTransform, state: State) -> State:
    """``Phi_g(state)`` for ``g`` in the proper orthochronous Poincare group."""
    if not g.lam.is_proper_orthochronous:
        raise ValueError("poincare_act needs a proper orthochronous transformation; use time_reversal for T")
    return reconstruct(system, coadjoint_transform(g, momenta(system, state)))


def frame_transform(sigma: Hyperplane) -> PoincareTransform:
    """A Poincare transformation taking ``(e0, 0)`` to ``sigma``."""
    boost = boost_to(sigma.u, basis_vector(0), 1.0)
    return PoincareTransform(boost, sigma.tau * sigma.u)


def time_reversal_about(system: ElementarySystem, sigma: Hyperplane, state: State) -> State:
    """Time reversal about an arbitrary hyperplane, ``Phi_g T Phi_g^-1``."""
    g = frame_transform(sigma)
    pulled = poincare_act(system, inverse(g), state)
    return poincare_act(system, g, time_reversal(pulled))


def random_state(system: ElementarySystem, rng: np.random.Generator, extent: float = 2.0) -> State:
    """x uniform in [-extent, extent]^3, p uniform in the same box times mc, s_hat uniform on S^2."""
    x = rng.uniform(-extent, extent, 3)
    p = rng.uniform(-extent, extent, 3) * system.mc
    s_hat = None
    if system.spinning:
        v = rng.normal(size=3)
        s_hat = v / np.linalg.norm(v)
    return State(x, p, s_hat)


def state_to_json(system: ElementarySystem, state: State) -> dict:
    data = {"m": system.m, "S": system.S, "c": system.c, "x": state.x.tolist(), "p": state.p.tolist()}
    if system.spinning:
        data["s_hat"] = state.s_hat.tolist()
    return data


def state_from_json(data: dict, c: float | None = None) -> tuple[ElementarySystem, State]:
    """Parse a state document; ``c`` overrides the stored speed of light."""
    try:
        system = ElementarySystem(float(data["m"]), float(data.get("S", 0.0)), float(c if c is not None else data.get("c", 1.0)))
        s_hat = data.get("s_hat") if system.spinning else None
        if system.spinning and s_hat is None:
            raise ValueError("state with S > 0 needs 's_hat'")
        state = State(data.get("x", [0.0, 0.0, 0.0]), data.get("p", [0.0, 0.0, 0.0]), s_hat)
    except KeyError as exc:
        raise ValueError(f"state document is missing field {exc.args[0]!r}") from None
    return system, state

