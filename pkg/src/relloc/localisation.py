"""Pauli-Lubanski vector, SSC worldlines and position observables, the Moller
disc and the centre-of-spin condition.

All positions are returned as points of Minkowski space (four-vectors with
the origin at zero); only :func:`nw_position_coords` returns three
coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import obsexpr as ox
from .elementary import ElementarySystem, State, generators, momenta, nw_coordinates, poincare_act
from .lorentz import boost_to
from .minkowski import (
    ETA,
    TwoForm,
    ThreeForm,
    hodge,
    inner,
    is_future_timelike,
    is_unit_future_timelike,
    levi_civita,
    lower,
    raise_,
    raise_indices,
    wedge,
    interior,
)
from .poincare import Hyperplane, MomentumValue, PoincareTransform, act_hyperplane, act_point

PL_CROSSCHECK_RTOL = 1e-12
POSITION_CROSSCHECK_RTOL = 1e-10


class LocalisationError(ValueError):
    pass


# --- Pauli-Lubanski and spin --------------------------------------------------------------

def pauli_lubanski(mv: MomentumValue) -> np.ndarray:
    """``W_mu = -1/2 eps_{mu nu rho sigma} P^nu J^{rho sigma}``, returned as ``W^mu``.

    Also evaluated as ``(*(P^flat ^ J))^sharp``; the two routes must agree.
    """
    P_up = mv.P_vector
    J_up = raise_indices(mv.J_lower)
    W_low = -0.5 * np.einsum("mnrs,n,rs->m", levi_civita(), P_up, J_up)
    W_hodge = raise_(hodge(wedge(mv.P, mv.J)))
    W = raise_(W_low)
    scale = max(1.0, float(np.abs(P_up).max() * np.abs(mv.J.comps).max()))
    err = float(np.abs(W - W_hodge).max())
    if err > PL_CROSSCHECK_RTOL * scale:
        raise ArithmeticError(f"Pauli-Lubanski routes disagree by {err:.3e}")
    return W


def spin_magnitude(mv: MomentumValue) -> float:
    """``S = sqrt(W^2)/(mc)``."""
    W = pauli_lubanski(mv)
    return float(np.sqrt(max(inner(W, W), 0.0)) / mv.mc)


def spin_vector(mv: MomentumValue, u) -> np.ndarray:
    """Spin vector in the frame ``u``: ``s(u) = B(u) W/(mc)``."""
    mc = mv.mc
    return boost_to(u, mv.P_vector, mc) @ (pauli_lubanski(mv) / mc)


def spin_tensor(mv: MomentumValue, x) -> TwoForm:
    """``S_{mu nu} = J_{mu nu} - x_mu P_nu + x_nu P_mu``."""
    return mv.J - wedge(lower(x), mv.P)


# --- SSC choices --------------------------------------------------------------------------

class SSCChoice:
    """Rule producing the SSC vector ``f`` from ``(Sigma, momentum value)``."""

    name = "custom"

    def vector(self, sigma: Hyperplane, mv: MomentumValue) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, sigma: Hyperplane, mv: MomentumValue) -> np.ndarray:
        f = np.asarray(self.vector(sigma, mv), dtype=float)
        if not is_future_timelike(f):
            raise LocalisationError(f"SSC vector f = {f.tolist()} from {self!r} is not timelike future-directed")
        return f

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


class CentreOfEnergy(SSCChoice):
    """``f = u``."""

    name = "ce"

    def vector(self, sigma, mv):
        return sigma.u


class CentreOfInertia(SSCChoice):
    """``f = P``."""

    name = "ci"

    def vector(self, sigma, mv):
        return mv.P_vector


class NewtonWigner(SSCChoice):
    """``f = u + P/(mc)``."""

    name = "nw"

    def vector(self, sigma, mv):
        return sigma.u + mv.P_vector / mv.mc


@dataclass(frozen=True, repr=False)
class Custom(SSCChoice):
    rule: Callable[[Hyperplane, MomentumValue], np.ndarray]
    name: str = "custom"

    def vector(self, sigma, mv):
        return self.rule(sigma, mv)

    def __repr__(self) -> str:
        return f"Custom({self.name!r})"


CE = CentreOfEnergy()
CI = CentreOfInertia()
NW = NewtonWigner()
CHOICES = {"ce": CE, "ci": CI, "nw": NW}


def frozen_vector(f) -> Custom:
    """SSC with a fixed lab-frame vector (not covariant under boosts)."""
    f = np.array(f, dtype=float)
    return Custom(lambda sigma, mv: f, name=f"frozen{f.tolist()}")


# --- worldlines and positions -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WorldLine:
    base: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        if not is_future_timelike(self.direction):
            raise LocalisationError("worldline direction must be timelike future-directed")

    def point(self, lam: float) -> np.ndarray:
        return self.base + lam * self.direction

    def intersect(self, sigma: Hyperplane) -> np.ndarray:
        # (base + lam d).u = -tau
        lam = -(sigma.tau + inner(self.base, sigma.u)) / inner(self.direction, sigma.u)
        return self.point(lam)


def _check_f(f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if not is_future_timelike(f):
        raise LocalisationError(f"SSC vector f = {f.tolist()} is not timelike future-directed")
    return f


def ssc_worldline(mv: MomentumValue, f) -> WorldLine:
    """Solutions of ``S_{mu nu}(x) f^nu = 0``: ``x_mu = J_{mu rho} f^rho/(f.P) + lam P_mu``."""
    f = _check_f(f)
    P = mv.P_vector
    base_low = mv.J_lower @ f / inner(f, P)
    return WorldLine(ETA @ base_low, P)


def ssc_position_closed_form(mv: MomentumValue, f, sigma: Hyperplane) -> np.ndarray:
    """``chi_mu = J f/(f.P) + tau P/(-u.P) - J(u, f)/(-f.P) P/(-u.P)`` as a vector."""
    f = _check_f(f)
    u = sigma.u
    P = mv.P_vector
    J = mv.J_lower
    fP = inner(f, P)
    uP = inner(u, P)
    chi_low = J @ f / fP + sigma.tau * mv.P_lower / (-uP) - (u @ J @ f) / (-fP) * mv.P_lower / (-uP)
    return ETA @ chi_low


def ssc_position(mv: MomentumValue, choice: SSCChoice, sigma: Hyperplane) -> np.ndarray:
    """Point where the SSC worldline for ``choice`` meets ``sigma``.

    Computed in closed form and by intersecting the worldline; the two must agree.
    """
    f = choice(sigma, mv)
    chi = ssc_position_closed_form(mv, f, sigma)
    via_line = ssc_worldline(mv, f).intersect(sigma)
    scale = max(1.0, float(np.abs(chi).max()), abs(sigma.tau))
    err = float(np.abs(chi - via_line).max())
    if err > POSITION_CROSSCHECK_RTOL * scale:
        raise ArithmeticError(f"SSC position routes disagree by {err:.3e}")
    return chi


def nw_position_coords(system: ElementarySystem, state: State) -> np.ndarray:
    """Newton-Wigner coordinates ``X^a`` on ``(e0, 0)`` from the generators."""
    return nw_coordinates(momenta(system, state))


def nw_expressions(system: ElementarySystem, gens: dict | None = None) -> dict[str, ox.Expression]:
    """``X1..X3`` as observables built from the generator expressions."""
    g = gens or generators(system)
    mc = ox.Sym("m") * ox.Sym("c")
    P0 = g["P0"]
    P = [g["P1"], g["P2"], g["P3"]]
    J_a0 = [g["J10"], g["J20"], g["J30"]]

    def J_ab(a, b):
        if a == b:
            return ox.ZERO
        return g[f"J{a + 1}{b + 1}"] if a < b else -g[f"J{b + 1}{a + 1}"]

    denom = mc * (mc - P0)
    JP0 = ox.add(*(J_a0[b] * P[b] for b in range(3)))
    out = {}
    for a in range(3):
        JabPb = ox.add(*(J_ab(a, b) * P[b] for b in range(3)))
        out[f"X{a + 1}"] = -J_a0[a] / mc - JabPb / denom - JP0 * P[a] / (P0 * denom)
    return out


def pauli_lubanski_expressions(system: ElementarySystem, gens: dict | None = None) -> dict[str, ox.Expression]:
    """``W0..W3`` (lower index) as observables."""
    g = gens or generators(system)
    eta = (-1.0, 1.0, 1.0, 1.0)

    def J(mu, nu):
        if mu == nu:
            return ox.ZERO
        return g[f"J{mu}{nu}"] if f"J{mu}{nu}" in g else -g[f"J{nu}{mu}"]

    eps = levi_civita()
    out = {}
    for mu in range(4):
        terms = []
        for nu in range(4):
            for rho in range(4):
                for sig in range(4):
                    e = eps[mu, nu, rho, sig]
                    if e == 0:
                        continue
                    # P^nu J^{rho sigma} with diagonal metric
                    k = -0.5 * e * eta[nu] * eta[rho] * eta[sig]
                    terms.append(k * g[f"P{nu}"] * J(rho, sig))
        out[f"W{mu}"] = ox.add(*terms)
    return out


# --- Moller disc ------------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MollerDisc:
    centre: np.ndarray
    radius: float
    normal: np.ndarray

    def to_json(self) -> dict:
        return {"centre": self.centre.tolist(), "radius": self.radius, "normal": self.normal.tolist()}


def moller_disc(mv: MomentumValue, sigma: Hyperplane | None = None, tol: float = 1e-9) -> MollerDisc:
    """Moller disc on a hyperplane orthogonal to ``P`` (default: through the origin)."""
    mc = mv.mc
    n = mv.P_vector / mc
    if sigma is None:
        sigma = Hyperplane(n, 0.0)
    elif float(np.abs(sigma.u - n).max()) > tol:
        raise LocalisationError("Moller disc needs a hyperplane orthogonal to P (u = P/mc)")
    W = pauli_lubanski(mv)
    spin = float(np.sqrt(max(inner(W, W), 0.0)) / mc)
    return MollerDisc(ssc_position(mv, CI, sigma), spin / mc, W)


# --- centre of spin -------------------------------------------------------------------------

def centre_of_spin_form(mv: MomentumValue, x, u) -> ThreeForm:
    """``u^flat ^ P^flat ^ iota_{u + P/mc} S`` with ``S`` the spin tensor about ``x``."""
    u = np.asarray(u, dtype=float)
    if not is_unit_future_timelike(u, 1e-9):
        raise LocalisationError(f"u must be unit future-directed timelike, got {u.tolist()}")
    S = spin_tensor(mv, x)
    v = u + mv.P_vector / mv.mc
    return wedge(lower(u), mv.P, interior(v, S))


def centre_of_spin_residual(mv: MomentumValue, x, u) -> float:
    """Euclidean norm of the independent components of :func:`centre_of_spin_form`."""
    return centre_of_spin_form(mv, x, u).norm()


# --- covariance --------------------------------------------------------------------------------

def covariance_check(
    system: ElementarySystem,
    choice: SSCChoice,
    g: PoincareTransform,
    sigma: Hyperplane,
    state: State,
) -> float:
    """``max |chi(g.Sigma)(Phi_g state) - g.chi(Sigma)(state)|`` over components."""
    moved = poincare_act(system, g, state)
    lhs = ssc_position(momenta(system, moved), choice, act_hyperplane(g, sigma))
    rhs = act_point(g, ssc_position(momenta(system, state), choice, sigma))
    return float(np.abs(lhs - rhs).max())
