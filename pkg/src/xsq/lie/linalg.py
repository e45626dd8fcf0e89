"""Exact rational matrices as numpy object arrays of Fractions.

Row reduction is delegated to sympy's DomainMatrix over QQ; reduced row
echelon form is canonical, so the pivot columns do not depend on the
elimination strategy.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from ..errors import ParseError

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(x) -> Fraction:
    """Fraction from an int, a Fraction or a string such as "-3/4"."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ParseError(f"not a rational: {x!r}")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational: {x!r}") from exc
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return Fraction(int(x.numerator), int(x.denominator))
    raise ParseError(f"not a rational: {x!r}")


def rat_array(data, shape=None) -> np.ndarray:
    arr = np.asarray(data, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = rat(v)
    if shape is not None and out.shape != tuple(shape):
        raise ValueError(f"shape {out.shape} != {tuple(shape)}")
    return out


def zeros(*shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(ZERO)
    return out


def eye(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = ONE
    return out


def is_zero(a) -> bool:
    return all(v == 0 for v in np.asarray(a, dtype=object).ravel())


def first_nonzero(a):
    for idx, v in np.ndenumerate(np.asarray(a, dtype=object)):
        if v != 0:
            return tuple(int(i) for i in idx)
    return None


def to_strings(a):
    return np.vectorize(str, otypes=[object])(np.asarray(a, dtype=object)).tolist() if np.size(a) else []


def as_rows(a, ncols: int) -> np.ndarray:
    """View a as a matrix with ncols columns (no rows at all when ncols is 0)."""
    a = np.asarray(a, dtype=object)
    return a.reshape(a.size // ncols, ncols) if ncols else zeros(0, 0)


def rref(rows, ncols: int):
    """(basis rows in reduced echelon form, pivot columns) of the row span."""
    rows = as_rows(rows, ncols)
    if rows.shape[0] == 0 or ncols == 0:
        return zeros(0, ncols), ()
    dm = DomainMatrix([[QQ.convert(v) for v in row] for row in rows.tolist()], rows.shape, QQ)
    red, pivots = dm.rref()
    k = len(pivots)
    out = rat_array([[rat(v) for v in row] for row in red.to_list()[:k]]) if k else zeros(0, ncols)
    return out.reshape(k, ncols), tuple(int(p) for p in pivots)


def rank(a) -> int:
    a = np.asarray(a, dtype=object)
    return len(rref(a, a.shape[1])[1]) if a.ndim == 2 and a.size else 0


def reduce_rows(vecs, basis, pivots) -> np.ndarray:
    """Remainders of the rows of ``vecs`` modulo the span of an echelon ``basis``."""
    out = np.array(vecs, dtype=object, copy=True)
    for row, p in zip(basis, pivots):
        coef = out[..., p].copy()
        out = out - coef[..., None] * row
    return out


class Subspace:
    """Span of vectors in Q^n, stored in reduced echelon form.

    Coordinates of a member v in the stored basis are v[pivots].
    """

    def __init__(self, vectors, n: int):
        self.n = n
        self.basis, self.pivots = rref(vectors, n)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def reduce(self, vecs):
        return reduce_rows(vecs, self.basis, self.pivots)

    def contains(self, vecs) -> bool:
        return is_zero(self.reduce(vecs))

    def coordinates(self, vecs) -> np.ndarray:
        vecs = np.asarray(vecs, dtype=object)
        return vecs[..., list(self.pivots)]

    def inclusion(self) -> np.ndarray:
        """n x dim matrix whose columns are the basis vectors."""
        return self.basis.T.copy()

    def intersect(self, other: "Subspace") -> "Subspace":
        # v = a B1 = b B2  <=>  (a, -b) in the left kernel of [B1; B2]
        stacked = np.concatenate([self.basis, other.basis], axis=0)
        if stacked.shape[0] == 0:
            return Subspace(zeros(0, self.n), self.n)
        kernel = left_kernel(stacked)
        return Subspace(kernel[:, : self.dim] @ self.basis if kernel.size else zeros(0, self.n), self.n)


def left_kernel(a) -> np.ndarray:
    """Rows x with x a = 0, as a basis."""
    a = np.asarray(a, dtype=object)
    m = a.shape[0]
    if m == 0:
        return zeros(0, 0)
    dm = DomainMatrix([[QQ.convert(v) for v in row] for row in a.T.tolist()], (a.shape[1], m), QQ)
    ns = dm.nullspace().to_list()
    return rat_array([[rat(v) for v in row] for row in ns]).reshape(len(ns), m) if ns else zeros(0, m)
