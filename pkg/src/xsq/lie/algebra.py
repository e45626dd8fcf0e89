"""Finite-dimensional Lie algebras over Q by structure constants.

``c[i, j]`` is the coordinate vector of [b_i, b_j]. Actions are stacks of
matrices ``rho[l]`` acting on column vectors; boundaries are matrices whose
columns are the images of basis vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import JacobiFailure, NotAntisymmetric, NotCrossedModule, ShapeMismatch
from ..report import Report
from .linalg import Subspace, as_rows, first_nonzero, is_zero, rat_array, zeros


class LieAlgebra:
    def __init__(self, constants, name: Optional[str] = None):
        c = rat_array(constants)
        if c.size == 0:
            c = zeros(0, 0, 0) if c.ndim != 3 else c
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
            raise ShapeMismatch(f"structure constants must be dim x dim x dim, got {c.shape}")
        self.c = c
        self.c.setflags(write=False)
        self.name = name

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    def __repr__(self):
        return f"<LieAlgebra {self.name or ''} dim={self.dim}>"

    def bracket(self, x, y) -> np.ndarray:
        x = rat_array(x)
        y = rat_array(y)
        return np.einsum("i,j,iju->u", x, y, self.c) if self.dim else zeros(0)

    def ad(self) -> np.ndarray:
        """ad[i] @ v = [b_i, v]."""
        return self.c.transpose(0, 2, 1).copy()

    def is_abelian(self) -> bool:
        return is_zero(self.c)


def lie_algebra_report(L: LieAlgebra) -> Report:
    r = Report("lie algebra")
    c = L.c
    r.add("antisymmetry", (w := first_nonzero(c + c.transpose(1, 0, 2))) is None, w, "[b_i,b_j] = -[b_j,b_i]")
    if L.dim:
        # [b_i,[b_j,b_k]] + [b_j,[b_k,b_i]] + [b_k,[b_i,b_j]]
        t = np.einsum("jka,iau->ijku", c, c)
        jac = t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)
        w = first_nonzero(jac)
    else:
        w = None
    r.add("jacobi", w is None, w, "Jacobi identity on basis triples")
    return r


def build_lie_algebra(constants, name=None) -> LieAlgebra:
    L = LieAlgebra(constants, name)
    rep = lie_algebra_report(L)
    if not rep["antisymmetry"].ok:
        raise NotAntisymmetric("bracket is not antisymmetric", witness=rep["antisymmetry"].witness[:2])
    if not rep["jacobi"].ok:
        raise JacobiFailure("Jacobi identity fails", witness=rep["jacobi"].witness[:3])
    return L


def abelian_lie(dim: int, name=None) -> LieAlgebra:
    return LieAlgebra(zeros(dim, dim, dim), name or f"ab{dim}")


def sl2() -> LieAlgebra:
    """Basis (e, f, h) with [h,e] = 2e, [h,f] = -2f, [e,f] = h."""
    c = zeros(3, 3, 3)
    e, f, h = 0, 1, 2
    c[h, e, e], c[e, h, e] = 2, -2
    c[h, f, f], c[f, h, f] = -2, 2
    c[e, f, h], c[f, e, h] = 1, -1
    return build_lie_algebra(c, "sl2")


def nonabelian2() -> LieAlgebra:
    """Basis (x, y) with [x, y] = y."""
    c = zeros(2, 2, 2)
    c[0, 1, 1], c[1, 0, 1] = 1, -1
    return build_lie_algebra(c, "aff1")


# ---------------------------------------------------------------------------
# actions


@dataclass
class LieAction:
    acting: LieAlgebra
    acted: LieAlgebra
    rho: np.ndarray

    def __post_init__(self):
        self.rho = rat_array(self.rho).reshape(self.acting.dim, self.acted.dim, self.acted.dim)

    def act(self, l, m) -> np.ndarray:
        return np.einsum("l,luv,v->u", rat_array(l), self.rho, rat_array(m))

    def pullback(self, f) -> "LieAction":
        """Action of the domain of f (a dim(L) x dim(K) matrix) through f."""
        f = rat_array(f)
        return LieAction(abelian_lie(f.shape[1], "domain"), self.acted, np.einsum("lk,luv->kuv", f, self.rho))


def verify_lie_action(a: LieAction) -> Report:
    r = Report("lie action")
    rho, cM, cL = a.rho, a.acted.c, a.acting.c
    if a.acting.dim and a.acted.dim:
        lhs = np.einsum("luv,ijv->liju", rho, cM)
        rhs = np.einsum("lvi,vju->liju", rho, cM) + np.einsum("lvj,ivu->liju", rho, cM)
        w = first_nonzero(lhs - rhs)
    else:
        w = None
    r.add("derivation", w is None, w, "^l[m,m'] = [^l m, m'] + [m, ^l m']")
    if a.acting.dim and a.acted.dim:
        lhs = np.einsum("abk,kuv->abuv", cL, rho)
        prod = np.einsum("auw,bwv->abuv", rho, rho)
        w = first_nonzero(lhs - (prod - prod.transpose(1, 0, 2, 3)))
    else:
        w = None
    r.add("homomorphism", w is None, w, "rho[l,l'] = rho(l)rho(l') - rho(l')rho(l)")
    return r


def adjoint_action(L: LieAlgebra) -> LieAction:
    return LieAction(L, L, L.ad())


def zero_action(L: LieAlgebra, M: LieAlgebra) -> LieAction:
    return LieAction(L, M, zeros(L.dim, M.dim, M.dim))


# ---------------------------------------------------------------------------
# crossed modules


@dataclass
class LieCrossedModule:
    boundary: np.ndarray  # dim L x dim M
    action: LieAction

    def __post_init__(self):
        self.boundary = rat_array(self.boundary).reshape(self.action.acting.dim, self.action.acted.dim)

    @property
    def M(self) -> LieAlgebra:
        return self.action.acted

    @property
    def L(self) -> LieAlgebra:
        return self.action.acting


def verify_lie_xmod(cm: LieCrossedModule) -> Report:
    r = Report("lie crossed module")
    r.extend(verify_lie_action(cm.action), "action.")
    d, rho = cm.boundary, cm.action.rho
    cM, cL = cm.M.c, cm.L.c
    if cm.M.dim == 0:
        w_eq = w_pf = None
    elif cm.L.dim == 0:
        w_eq, w_pf = None, first_nonzero(cM)
    else:
        w_eq = first_nonzero(np.einsum("uv,lvi->liu", d, rho) - np.einsum("vi,lvu->liu", d, cL))
        w_pf = first_nonzero(np.einsum("vi,vuj->iju", d, rho) - cM)
    r.add("equivariance", w_eq is None, w_eq, "d(^l m) = [l, d m]")
    r.add("peiffer", w_pf is None, w_pf, "^{d m} m' = [m, m']")
    return r


def make_lie_xmod(boundary, action: LieAction) -> LieCrossedModule:
    cm = LieCrossedModule(boundary, action)
    rep = verify_lie_xmod(cm)
    if not rep.ok:
        bad = rep.failures()[0]
        raise NotCrossedModule(f"{bad.name} fails", witness=bad.witness)
    return cm


def identity_lie_xmod(L: LieAlgebra) -> LieCrossedModule:
    return LieCrossedModule(np.eye(L.dim, dtype=int).astype(object), adjoint_action(L))


def zero_lie_xmod(M: LieAlgebra, L: LieAlgebra) -> LieCrossedModule:
    return LieCrossedModule(zeros(L.dim, M.dim), zero_action(L, M))


# ---------------------------------------------------------------------------
# ideals


class LieIdeal:
    """An ideal of L given by spanning vectors, as an algebra with inclusion."""

    def __init__(self, L: LieAlgebra, vectors):
        self.parent = L
        self.space = Subspace(as_rows(rat_array(vectors), L.dim), L.dim)
        B = self.space.basis  # rows
        brackets = np.einsum("ai,bj,iju->abu", B, B, L.c) if B.size else zeros(0, 0, L.dim)
        if B.size and not self.space.contains(as_rows(np.einsum("aj,lju->lau", B, L.c), L.dim)):
            raise ShapeMismatch("span is not an ideal: [L, I] is not inside I")
        self.algebra = LieAlgebra(self.space.coordinates(brackets) if B.size else zeros(0, 0, 0))
        self.inclusion = self.space.inclusion()  # dim L x dim I

    @property
    def dim(self) -> int:
        return self.space.dim

    def xmod(self) -> LieCrossedModule:
        """Inclusion with the adjoint action restricted."""
        L, B = self.parent, self.space.basis
        # [b_l, v_a] in I-coordinates, as column a of rho[l]
        acts = np.einsum("aj,lju->lau", B, L.c) if B.size else zeros(L.dim, 0, L.dim)
        rho = self.space.coordinates(acts).transpose(0, 2, 1)
        return LieCrossedModule(self.inclusion, LieAction(L, self.algebra, rho))

    def intersect(self, other: "LieIdeal") -> "LieIdeal":
        return LieIdeal(self.parent, self.space.intersect(other.space).basis)
