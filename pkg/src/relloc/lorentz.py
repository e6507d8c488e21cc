"""Lorentz group elements, the generator basis ``B_ab`` and its exponentials.

Generators follow ``B_ab = e_a (x) e_b^flat - e_b (x) e_a^flat``; with the
mostly-plus signature the angular-momentum generators are ``J_mn = -B_mn``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .minkowski import DIM, ETA, inner, is_unit_future_timelike

ISOMETRY_TOL = 1e-10


class LorentzError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LorentzTransform:
    """A linear isometry ``Lambda^mu_nu`` of Minkowski space.

    The matrix is checked on construction; pass ``check=False`` only for
    matrices produced by this module.
    """

    matrix: np.ndarray

    def __init__(self, matrix, check: bool = True, tol: float = ISOMETRY_TOL):
        matrix = np.array(matrix, dtype=float)
        if matrix.shape != (DIM, DIM):
            raise LorentzError(f"Lorentz matrix must be 4x4, got shape {matrix.shape}")
        if check and not is_isometry(matrix, tol):
            err = np.abs(matrix.T @ ETA @ matrix - ETA).max()
            raise LorentzError(f"matrix is not a Lorentz isometry (|L^T eta L - eta| = {err:.3e})")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def identity(cls) -> "LorentzTransform":
        return cls(np.eye(DIM), check=False)

    def __matmul__(self, other):
        if isinstance(other, LorentzTransform):
            return LorentzTransform(self.matrix @ other.matrix, check=False)
        return self.matrix @ np.asarray(other, dtype=float)

    def inverse(self) -> "LorentzTransform":
        # eta-adjoint: Lambda^{-1} = eta^{-1} Lambda^T eta
        return LorentzTransform(ETA @ self.matrix.T @ ETA, check=False)

    @property
    def is_proper_orthochronous(self) -> bool:
        return is_proper_orthochronous(self.matrix)

    def __eq__(self, other) -> bool:
        return isinstance(other, LorentzTransform) and bool(np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def __repr__(self) -> str:
        return f"LorentzTransform({self.matrix.tolist()})"


def is_isometry(matrix, tol: float = ISOMETRY_TOL) -> bool:
    matrix = np.asarray(matrix, dtype=float)
    return bool(np.abs(matrix.T @ ETA @ matrix - ETA).max() <= tol * max(1.0, np.abs(matrix).max() ** 2))


def is_proper_orthochronous(matrix, tol: float = ISOMETRY_TOL) -> bool:
    matrix = np.asarray(matrix, dtype=float)
    return bool(
        is_isometry(matrix, tol)
        and abs(np.linalg.det(matrix) - 1.0) <= tol * max(1.0, np.abs(matrix).max() ** 4)
        and matrix[0, 0] >= 1.0 - tol
    )


# --- generators -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LorentzGenerator:
    """An element of so(V, eta) as a 4x4 endomorphism ``X^mu_nu``."""

    matrix: np.ndarray
    label: tuple[int, int] | None = None

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __call__(self, v) -> np.ndarray:
        return self.matrix @ np.asarray(v, dtype=float)

    def is_anti_self_adjoint(self, tol: float = 1e-12) -> bool:
        # eta(v, X w) = -eta(X v, w) for all v, w  <=>  eta X + X^T eta = 0
        m = self.matrix
        return bool(np.abs(ETA @ m + m.T @ ETA).max() <= tol * max(1.0, np.abs(m).max()))

    def coefficients(self) -> np.ndarray:
        """Antisymmetric ``omega^{mu nu} = X^mu_rho eta^{rho nu}``; see :func:`lorentz_lie_element`."""
        return self.matrix @ ETA

    def __add__(self, other: "LorentzGenerator") -> "LorentzGenerator":
        return LorentzGenerator(self.matrix + other.matrix)

    def __sub__(self, other: "LorentzGenerator") -> "LorentzGenerator":
        return LorentzGenerator(self.matrix - other.matrix)

    def __neg__(self) -> "LorentzGenerator":
        return LorentzGenerator(-self.matrix, self.label)

    def __mul__(self, k) -> "LorentzGenerator":
        return LorentzGenerator(float(k) * self.matrix)

    __rmul__ = __mul__


def _check_index(i: int) -> None:
    if not (isinstance(i, (int, np.integer)) and 0 <= i < DIM):
        raise IndexError(f"spacetime index must be an integer in 0..3, got {i!r}")


def generator(a: int, b: int) -> LorentzGenerator:
    """``B_ab`` with matrix entries ``delta^mu_a eta_{b nu} - delta^mu_b eta_{a nu}``.

    ``a == b`` gives the zero generator.
    """
    _check_index(a)
    _check_index(b)
    m = np.zeros((DIM, DIM))
    m[a, :] += ETA[b, :]
    m[b, :] -= ETA[a, :]
    return LorentzGenerator(m, (a, b))


def commutator(x: LorentzGenerator, y: LorentzGenerator) -> LorentzGenerator:
    return LorentzGenerator(x.matrix @ y.matrix - y.matrix @ x.matrix)


def lorentz_lie_element(omega) -> LorentzGenerator:
    """Assemble ``1/2 omega^{mu nu} B_{mu nu}`` from antisymmetric coefficients.

    Coefficients are related to the endomorphism by ``omega^{mu nu} =
    omega^mu_rho eta^{rho nu}``, so :meth:`LorentzGenerator.coefficients`
    inverts this map.  In terms of ``J_mn = -B_mn`` this is
    ``-1/2 omega^{mu nu} J_{mu nu}``.
    """
    omega = np.asarray(omega, dtype=float)
    if omega.shape != (DIM, DIM):
        raise ValueError(f"coefficient array must be 4x4, got {omega.shape}")
    if not np.allclose(omega, -omega.T, rtol=0, atol=1e-14 * max(1.0, np.abs(omega).max())):
        raise ValueError("Lorentz coefficients must be antisymmetric: omega^{mu nu} = -omega^{nu mu}")
    m = np.zeros((DIM, DIM))
    for mu in range(DIM):
        for nu in range(mu + 1, DIM):
            m += omega[mu, nu] * generator(mu, nu).matrix
    return LorentzGenerator(m)


def projector(a: int, b: int) -> np.ndarray:
    """eta-orthogonal projector onto ``span{e_a, e_b}`` (orthonormal basis)."""
    p = np.zeros((DIM, DIM))
    p[a, a] = p[b, b] = 1.0
    return p


def exp_generator(a: int, b: int, alpha: float) -> LorentzTransform:
    """Closed-form ``exp(alpha B_ab)``: a rotation or a boost in the e_a-e_b plane."""
    if a == b:
        raise ValueError("exp_generator needs a != b")
    B = generator(a, b).matrix
    pr = projector(a, b)
    eps_ab = ETA[a, a] * ETA[b, b]
    if eps_ab > 0:
        block = np.cos(alpha) * np.eye(DIM) + np.sin(alpha) * B
    else:
        block = np.cosh(alpha) * np.eye(DIM) + np.sinh(alpha) * B
    return LorentzTransform(np.eye(DIM) - pr + block @ pr, check=False)


def exp_series(matrix, terms: int = 40) -> np.ndarray:
    """Truncated power series of the matrix exponential (test oracle)."""
    matrix = np.asarray(matrix, dtype=float)
    out = np.zeros_like(matrix)
    power = np.eye(matrix.shape[0])
    for k in range(terms):
        out = out + power / factorial(k)
        power = power @ matrix
    return out


# --- linking boost --------------------------------------------------------------------

def boost_to(u, P, mc: float | None = None, tol: float = 1e-9) -> LorentzTransform:
    """The boost in the plane of ``P/mc`` and ``u`` that maps ``P/mc`` to ``u``.

    ``P`` is a contravariant four-momentum; ``mc`` defaults to ``sqrt(-P.P)``.
    """
    u = np.asarray(u, dtype=float)
    P = np.asarray(P, dtype=float)
    if not is_unit_future_timelike(u, tol):
        raise LorentzError(
            f"u must be a unit future-directed timelike vector, got {u.tolist()} "
            f"(eta(u,u) = {inner(u, u)!r})"
        )
    p2 = inner(P, P)
    if not (p2 < 0 and P[0] > 0):
        raise LorentzError(f"P must be timelike and future-directed, got {P.tolist()} (eta(P,P) = {p2!r})")
    if mc is None:
        mc = float(np.sqrt(-p2))
    elif abs(p2 + mc * mc) > tol * mc * mc:
        raise LorentzError(f"eta(P,P) = {p2!r} does not match -(mc)^2 = {-mc * mc!r}")
    n = P / mc
    # for unit future timelike u, n: u.n <= -1, so the denominator is >= 2
    denom = 1.0 - inner(u, n)
    assert denom >= 2.0 - tol, denom
    n_low = ETA @ n
    s_low = ETA @ (n + u)
    mat = np.eye(DIM) + np.outer(n + u, s_low) / denom - 2.0 * np.outer(u, n_low)
    return LorentzTransform(mat, check=False)
