"""Exact (-+++) Minkowski linear algebra and exterior calculus in four dimensions.

Vectors are plain ``numpy`` arrays of shape ``(4,)`` holding contravariant
components ``v^mu``.  Differential forms are :class:`Form` instances which
store only their independent components ``alpha_I`` for strictly increasing
multi-indices ``I`` (lexicographic order), so antisymmetry holds by
construction.  Orientation is fixed by ``eps_{0123} = +1``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations
from math import comb

import numpy as np

DIM = 4
ETA = np.diag([-1.0, 1.0, 1.0, 1.0])
ETA.setflags(write=False)
_ETA_DIAG = (-1.0, 1.0, 1.0, 1.0)

DEFAULT_RTOL = 1e-12


def _perm_sign(seq) -> int:
    """Sign of the permutation sorting ``seq`` (0 if an index repeats)."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def basis_indices(degree: int) -> tuple[tuple[int, ...], ...]:
    return tuple(combinations(range(DIM), degree))


@lru_cache(maxsize=None)
def _index_position(degree: int) -> dict[tuple[int, ...], int]:
    return {idx: k for k, idx in enumerate(basis_indices(degree))}


@lru_cache(maxsize=None)
def levi_civita(n: int = DIM) -> np.ndarray:
    """Totally antisymmetric symbol with ``eps_{01..n-1} = +1``."""
    eps = np.zeros((n,) * n)
    for perm in permutations(range(n)):
        eps[perm] = _perm_sign(perm)
    eps.setflags(write=False)
    return eps


# --- vectors -----------------------------------------------------------------

def inner(v, w) -> float:
    """Minkowski product ``eta(v, w) = -v^0 w^0 + sum_a v^a w^a``."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    return float(-v[0] * w[0] + v[1] * w[1] + v[2] * w[2] + v[3] * w[3])


def square(v) -> float:
    return inner(v, v)


def basis_vector(mu: int) -> np.ndarray:
    e = np.zeros(DIM)
    e[mu] = 1.0
    return e


def causal_type(v, tol: float = DEFAULT_RTOL) -> str:
    """Classify ``v`` as ``"timelike"``, ``"null"`` or ``"spacelike"``.

    ``tol`` is relative to the Euclidean size of ``v`` squared.
    """
    v = np.asarray(v, dtype=float)
    scale = float(np.dot(v, v))
    q = inner(v, v)
    if abs(q) <= tol * scale:
        return "null"
    return "timelike" if q < 0 else "spacelike"


def is_future_timelike(v, tol: float = DEFAULT_RTOL) -> bool:
    v = np.asarray(v, dtype=float)
    return causal_type(v, tol) == "timelike" and v[0] > 0


def is_unit_future_timelike(u, tol: float = 1e-12) -> bool:
    u = np.asarray(u, dtype=float)
    return bool(u[0] > 0 and abs(inner(u, u) + 1.0) <= tol)


def normalize_timelike(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    q = inner(v, v)
    if not q < 0:
        raise ValueError(f"vector {v.tolist()} is not timelike (eta(v,v) = {q!r})")
    return v / np.sqrt(-q)


# --- forms -------------------------------------------------------------------

class Form:
    """A ``degree``-form on Minkowski space, stored by independent components."""

    __slots__ = ("degree", "comps")

    def __init__(self, degree: int, comps):
        comps = np.array(comps, dtype=float).reshape(-1)
        if not 0 <= degree <= DIM:
            raise ValueError(f"form degree must lie in 0..{DIM}, got {degree}")
        if comps.shape != (comb(DIM, degree),):
            raise ValueError(
                f"a {degree}-form has {comb(DIM, degree)} independent components, got {comps.size}"
            )
        comps.setflags(write=False)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "comps", comps)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def zero(cls, degree: int) -> "Form":
        return make_form(degree, np.zeros(comb(DIM, degree)))

    @classmethod
    def basis(cls, indices) -> "Form":
        """The basis form ``theta^{i1} ^ ... ^ theta^{ik}`` (indices in any order)."""
        indices = tuple(indices)
        degree = len(indices)
        sign = _perm_sign(indices)
        comps = np.zeros(comb(DIM, degree))
        if sign:
            comps[_index_position(degree)[tuple(sorted(indices))]] = sign
        return make_form(degree, comps)

    @classmethod
    def from_tensor(cls, arr, check: bool = True, atol: float = 1e-12) -> "Form":
        """Build a form from a fully antisymmetric array with lower indices."""
        arr = np.asarray(arr, dtype=float)
        degree = arr.ndim
        if check and degree >= 2:
            for i in range(degree - 1):
                swapped = np.swapaxes(arr, i, i + 1)
                if not np.allclose(swapped, -arr, rtol=0, atol=atol * max(1.0, np.abs(arr).max())):
                    raise ValueError("array is not totally antisymmetric")
        if degree == 0:
            return make_form(0, [float(arr)])
        comps = [arr[idx] for idx in basis_indices(degree)]
        return make_form(degree, comps)

    def tensor(self) -> np.ndarray:
        """Fully antisymmetric component array ``alpha_{mu1...muk}``."""
        if self.degree == 0:
            return np.array(self.comps[0])
        out = np.zeros((DIM,) * self.degree)
        for value, idx in zip(self.comps, basis_indices(self.degree)):
            if value == 0.0:
                continue
            for perm in permutations(range(self.degree)):
                out[tuple(idx[p] for p in perm)] = _perm_sign(perm) * value
        return out

    def __getitem__(self, indices) -> float:
        if isinstance(indices, int):
            indices = (indices,)
        indices = tuple(indices)
        sign = _perm_sign(indices)
        if not sign:
            return 0.0
        return sign * float(self.comps[_index_position(self.degree)[tuple(sorted(indices))]])

    def __add__(self, other: "Form") -> "Form":
        _same_degree(self, other)
        return make_form(self.degree, self.comps + other.comps)

    def __sub__(self, other: "Form") -> "Form":
        _same_degree(self, other)
        return make_form(self.degree, self.comps - other.comps)

    def __neg__(self) -> "Form":
        return make_form(self.degree, -self.comps)

    def __mul__(self, k) -> "Form":
        return make_form(self.degree, float(k) * self.comps)

    __rmul__ = __mul__

    def __truediv__(self, k) -> "Form":
        return make_form(self.degree, self.comps / float(k))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Form)
            and self.degree == other.degree
            and bool(np.array_equal(self.comps, other.comps))
        )

    def __hash__(self):
        return hash((self.degree, self.comps.tobytes()))

    def norm(self) -> float:
        """Euclidean norm of the independent components (a diagnostic scale)."""
        return float(np.linalg.norm(self.comps))

    def allclose(self, other: "Form", rtol: float = DEFAULT_RTOL, atol: float = 0.0) -> bool:
        _same_degree(self, other)
        return bool(np.allclose(self.comps, other.comps, rtol=rtol, atol=atol))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.comps.tolist()})"


class ZeroForm(Form):
    __slots__ = ()

    def __init__(self, comps):
        super().__init__(0, comps)

    def __float__(self) -> float:
        return float(self.comps[0])


class OneForm(Form):
    __slots__ = ()

    def __init__(self, comps):
        super().__init__(1, comps)


class TwoForm(Form):
    """Antisymmetric 2-tensor; only the strict upper triangle is stored."""

    __slots__ = ()

    def __init__(self, comps):
        super().__init__(2, comps)

    @classmethod
    def from_matrix(cls, mat, check: bool = True, atol: float = 1e-12) -> "TwoForm":
        return Form.from_tensor(mat, check=check, atol=atol)

    def matrix(self) -> np.ndarray:
        return self.tensor()


class ThreeForm(Form):
    __slots__ = ()

    def __init__(self, comps):
        super().__init__(3, comps)


class FourForm(Form):
    __slots__ = ()

    def __init__(self, comps):
        super().__init__(4, comps)


_FORM_TYPES = {0: ZeroForm, 1: OneForm, 2: TwoForm, 3: ThreeForm, 4: FourForm}


def make_form(degree: int, comps) -> Form:
    return _FORM_TYPES[degree](comps)


def _same_degree(a: Form, b: Form) -> None:
    if a.degree != b.degree:
        raise ValueError(f"degree mismatch: {a.degree} vs {b.degree}")


VOLUME = FourForm([1.0])


def volume_form() -> FourForm:
    """The Minkowski volume form ``eps`` with ``eps_{0123} = +1``."""
    return VOLUME


# --- musical isomorphisms ------------------------------------------------------

def lower(v) -> OneForm:
    """``v^flat = eta(v, .)``: ``alpha_0 = -v^0``, ``alpha_a = v^a``."""
    v = np.asarray(v, dtype=float)
    return OneForm(ETA @ v)


def raise_(alpha: OneForm) -> np.ndarray:
    """Inverse of :func:`lower`."""
    return ETA @ np.asarray(alpha.comps if isinstance(alpha, Form) else alpha, dtype=float)


def raise_indices(arr) -> np.ndarray:
    """Raise every index of a lower-index tensor with the (diagonal) metric."""
    arr = np.asarray(arr, dtype=float)
    out = arr
    for axis in range(arr.ndim):
        shape = [1] * arr.ndim
        shape[axis] = DIM
        out = out * np.asarray(_ETA_DIAG).reshape(shape)
    return out


# --- exterior algebra ------------------------------------------------------------

@lru_cache(maxsize=None)
def _wedge_table(k: int, l: int):
    table = []
    pos = _index_position(k + l)
    for i, idx_a in enumerate(basis_indices(k)):
        for j, idx_b in enumerate(basis_indices(l)):
            joined = idx_a + idx_b
            sign = _perm_sign(joined)
            if sign:
                table.append((i, j, pos[tuple(sorted(joined))], sign))
    return tuple(table)


def wedge(*forms: Form) -> Form:
    """Exterior product; degrees beyond 4 give the zero 4-form."""
    if not forms:
        raise ValueError("wedge needs at least one form")
    result = forms[0]
    for other in forms[1:]:
        result = _wedge2(result, other)
    return result


def _wedge2(a: Form, b: Form) -> Form:
    degree = a.degree + b.degree
    if degree > DIM:
        return Form.zero(DIM)
    comps = np.zeros(comb(DIM, degree))
    for i, j, target, sign in _wedge_table(a.degree, b.degree):
        comps[target] += sign * a.comps[i] * b.comps[j]
    return make_form(degree, comps)


def interior(v, beta: Form) -> Form:
    """Contraction ``iota_v beta`` on the first slot."""
    v = np.asarray(v, dtype=float)
    if beta.degree == 0:
        return ZeroForm([0.0])
    contracted = np.tensordot(v, beta.tensor(), axes=(0, 0))
    return Form.from_tensor(contracted, check=False)


def form_inner(alpha: Form, beta: Form) -> float:
    """Induced metric on k-forms, ``eta(alpha, beta) = sum_I alpha_I beta^I``."""
    _same_degree(alpha, beta)
    signs = np.array([np.prod([_ETA_DIAG[i] for i in idx]) for idx in basis_indices(alpha.degree)])
    return float(np.sum(signs * alpha.comps * beta.comps))


@lru_cache(maxsize=None)
def _hodge_table(k: int):
    pos = _index_position(DIM - k)
    table = []
    for i, idx in enumerate(basis_indices(k)):
        rest = tuple(mu for mu in range(DIM) if mu not in idx)
        metric_sign = np.prod([_ETA_DIAG[mu] for mu in idx]) if idx else 1.0
        table.append((i, pos[rest], _perm_sign(idx + rest) * metric_sign))
    return tuple(table)


def hodge(beta: Form) -> Form:
    """Hodge star fixed by ``alpha ^ *beta = eta(alpha, beta) eps``."""
    comps = np.zeros(comb(DIM, DIM - beta.degree))
    for i, target, sign in _hodge_table(beta.degree):
        comps[target] = sign * beta.comps[i]
    return make_form(DIM - beta.degree, comps)


def spatial_levi_civita(u=None) -> np.ndarray:
    """Components ``(iota_u eps)_{abc}`` on the spatial slots 1..3.

    For ``u = e0`` this is the ordinary three-dimensional symbol.
    """
    u = basis_vector(0) if u is None else np.asarray(u, dtype=float)
    full = interior(u, VOLUME).tensor()
    return full[1:, 1:, 1:]
