"""Poincare group elements ``(Lambda, a)``, their actions on points and
spacelike hyperplanes, and the co-adjoint action on momentum-map values.

The origin of affine Minkowski space is the zero vector, so points are
four-vectors and ``(Lambda, a) . x = Lambda x + a``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lorentz
from .lorentz import LorentzTransform
from .minkowski import DIM, ETA, OneForm, TwoForm, inner, is_unit_future_timelike, raise_


@dataclass(frozen=True, eq=False)
class PoincareTransform:
    lam: LorentzTransform
    a: np.ndarray

    def __init__(self, lam, a=None):
        if not isinstance(lam, LorentzTransform):
            lam = LorentzTransform(lam)
        a = np.zeros(DIM) if a is None else np.array(a, dtype=float)
        if a.shape != (DIM,):
            raise ValueError(f"translation must have 4 components, got shape {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "a", a)

    @classmethod
    def identity(cls) -> "PoincareTransform":
        return cls(LorentzTransform.identity())

    @classmethod
    def translation(cls, a) -> "PoincareTransform":
        return cls(LorentzTransform.identity(), a)

    @property
    def matrix(self) -> np.ndarray:
        return self.lam.matrix

    def __matmul__(self, other: "PoincareTransform") -> "PoincareTransform":
        return compose(self, other)

    def to_json(self) -> dict:
        return {"lambda": self.matrix.tolist(), "a": self.a.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "PoincareTransform":
        return cls(LorentzTransform(data["lambda"]), data.get("a"))

    def __repr__(self) -> str:
        return f"PoincareTransform(lam={self.matrix.tolist()}, a={self.a.tolist()})"


def compose(g1: PoincareTransform, g2: PoincareTransform) -> PoincareTransform:
    """``(L1, a1)(L2, a2) = (L1 L2, a1 + L1 a2)``."""
    return PoincareTransform(g1.lam @ g2.lam, g1.a + g1.matrix @ g2.a)


def inverse(g: PoincareTransform) -> PoincareTransform:
    lam_inv = g.lam.inverse()
    return PoincareTransform(lam_inv, -(lam_inv.matrix @ g.a))


def act_point(g: PoincareTransform, x) -> np.ndarray:
    return g.matrix @ np.asarray(x, dtype=float) + g.a


@dataclass(frozen=True, eq=False)
class Hyperplane:
    """Spacelike hyperplane ``{x : u.x = -tau}`` with unit future normal ``u``."""

    u: np.ndarray
    tau: float = 0.0

    def __init__(self, u, tau: float = 0.0, tol: float = 1e-12):
        u = np.array(u, dtype=float)
        if u.shape != (DIM,) or not is_unit_future_timelike(u, tol):
            raise ValueError(
                f"hyperplane normal must be a unit future-directed timelike vector, got {u.tolist()}"
            )
        u.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "tau", float(tau))

    @classmethod
    def rest(cls, tau: float = 0.0) -> "Hyperplane":
        return cls([1.0, 0.0, 0.0, 0.0], tau)

    def contains(self, x, tol: float = 1e-10) -> bool:
        x = np.asarray(x, dtype=float)
        return abs(inner(self.u, x) + self.tau) <= tol * max(1.0, float(np.abs(x).max()), abs(self.tau))

    def to_json(self) -> dict:
        return {"u": self.u.tolist(), "tau": self.tau}

    @classmethod
    def from_json(cls, data: dict) -> "Hyperplane":
        return cls(data["u"], data.get("tau", 0.0))

    def __repr__(self) -> str:
        return f"Hyperplane(u={self.u.tolist()}, tau={self.tau!r})"


def act_hyperplane(g: PoincareTransform, sigma: Hyperplane) -> Hyperplane:
    """``(L, a).(u, tau) = (L u, tau - L u . a)``."""
    u_new = g.matrix @ sigma.u
    # renormalise round-off so the result passes the strict unit check
    u_new = u_new / np.sqrt(-inner(u_new, u_new))
    return Hyperplane(u_new, sigma.tau - inner(u_new, g.a))


@dataclass(frozen=True, eq=False)
class MomentumValue:
    """Value of the momentum map: ``P_mu`` (one-form) and ``J_{mu nu}`` (two-form)."""

    P: OneForm
    J: TwoForm

    def __init__(self, P, J):
        if not isinstance(P, OneForm):
            P = OneForm(P)
        if not isinstance(J, TwoForm):
            J = TwoForm.from_matrix(J)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "J", J)

    @property
    def P_lower(self) -> np.ndarray:
        return np.array(self.P.comps)

    @property
    def P_vector(self) -> np.ndarray:
        """Contravariant ``P^mu``."""
        return raise_(self.P)

    @property
    def J_lower(self) -> np.ndarray:
        return self.J.matrix()

    @property
    def mass_shell(self) -> float:
        """``-eta^{-1}(P, P)``, i.e. ``(mc)^2`` for a massive system."""
        return -inner(self.P_vector, self.P_vector)

    @property
    def mc(self) -> float:
        m2 = self.mass_shell
        if m2 <= 0:
            raise ValueError(f"four-momentum is not timelike (-P.P = {m2!r})")
        return float(np.sqrt(m2))

    @property
    def is_future_timelike(self) -> bool:
        P = self.P_vector
        return bool(inner(P, P) < 0 and P[0] > 0)

    def max_abs_diff(self, other: "MomentumValue") -> float:
        return float(max(np.abs(self.P.comps - other.P.comps).max(), np.abs(self.J.comps - other.J.comps).max()))

    def to_json(self) -> dict:
        return {"P": self.P_lower.tolist(), "J": self.J_lower.tolist()}

    def __repr__(self) -> str:
        return f"MomentumValue(P={self.P_lower.tolist()}, J={self.J.comps.tolist()})"


def coadjoint_transform(g: PoincareTransform, mv: MomentumValue) -> MomentumValue:
    """Momentum value at the actively displaced state.

    ``P'_mu = (L^-1)^nu_mu P_nu`` and
    ``J'_{mu nu} = (L^-1)^rho_mu (L^-1)^sigma_nu J_{rho sigma} + a_mu P'_nu - a_nu P'_mu``.
    """
    lam_inv = g.lam.inverse().matrix
    P_new = lam_inv.T @ mv.P_lower
    J_new = lam_inv.T @ mv.J_lower @ lam_inv
    a_low = ETA @ g.a
    J_new = J_new + np.outer(a_low, P_new) - np.outer(P_new, a_low)
    return MomentumValue(OneForm(P_new), TwoForm.from_matrix(J_new, check=False))


def random_lorentz(rng: np.random.Generator, max_rapidity: float = 1.0) -> LorentzTransform:
    """Random element of L+^ as a rotation times a boost (seeded by ``rng``)."""
    rot = LorentzTransform.identity()
    for a, b in ((1, 2), (2, 3), (1, 2)):
        rot = rot @ lorentz.exp_generator(a, b, rng.uniform(-np.pi, np.pi))
    boost = LorentzTransform.identity()
    for k in (1, 2, 3):
        boost = boost @ lorentz.exp_generator(0, k, rng.uniform(-max_rapidity, max_rapidity) / np.sqrt(3))
    return rot @ boost


def random_poincare(rng: np.random.Generator, max_rapidity: float = 1.0, max_shift: float = 2.0) -> PoincareTransform:
    return PoincareTransform(random_lorentz(rng, max_rapidity), rng.uniform(-max_shift, max_shift, DIM))
