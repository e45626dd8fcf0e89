"""Non-abelian tensor product of Lie crossed modules by exact linear algebra.

V has basis e_i (x) f_j at index i * dim(N) + j. R is the span of the basis
instances of

    [m,m'] (x) n = m (x) ^{m'}n - m' (x) ^m n
    m (x) [n,n'] = ^{n'}m (x) n - ^n m (x) n'

and T = V/R with basis the non-pivot coordinates of R in echelon form. The
bracket [m(x)n, m'(x)n'] = -(^n m) (x) (^{m'} n') is defined on V and then
checked to descend.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import BracketNotDescending, NotCrossedModule, NotWellDefined, ShapeMismatch, StructureMapNotDescending
from ..report import Report
from .algebra import (
    LieAction,
    LieAlgebra,
    LieCrossedModule,
    LieIdeal,
    build_lie_algebra,
    lie_algebra_report,
    verify_lie_xmod,
)
from .linalg import Subspace, as_rows, eye, first_nonzero, is_zero, rat_array, zeros


def _same_algebra(a: LieAlgebra, b: LieAlgebra) -> bool:
    return a is b or (a.dim == b.dim and bool((a.c == b.c).all()))


@dataclass
class LiePair:
    mu: LieCrossedModule
    nu: LieCrossedModule
    m_on_n: np.ndarray = field(init=False, repr=False)  # [i] matrix of ^{e_i} on N
    n_on_m: np.ndarray = field(init=False, repr=False)  # [j] matrix of ^{f_j} on M

    def __post_init__(self):
        if not _same_algebra(self.mu.L, self.nu.L):
            raise NotCrossedModule("Lie crossed modules must share the base algebra")
        self.m_on_n = np.einsum("ki,kuv->iuv", self.mu.boundary, self.nu.action.rho)
        self.n_on_m = np.einsum("kj,kuv->juv", self.nu.boundary, self.mu.action.rho)

    @property
    def M(self) -> LieAlgebra:
        return self.mu.M

    @property
    def N(self) -> LieAlgebra:
        return self.nu.M

    @property
    def L(self) -> LieAlgebra:
        return self.mu.L

    def check(self) -> Report:
        r = Report("lie pair")
        r.extend(verify_lie_xmod(self.mu), "mu.")
        r.extend(verify_lie_xmod(self.nu), "nu.")
        return r

    def swapped(self) -> "LiePair":
        return LiePair(self.nu, self.mu)


def make_lie_pair(mu, nu) -> LiePair:
    p = LiePair(mu, nu)
    rep = p.check()
    if not rep.ok:
        bad = rep.failures()[0]
        raise NotCrossedModule(f"{bad.name} fails", witness=bad.witness)
    return p


def tensor_relations(pair: LiePair) -> np.ndarray:
    """All basis instances of the two linear relations, as rows of V."""
    dM, dN = pair.M.dim, pair.N.dim
    cM, cN = pair.M.c, pair.N.c
    mn, nm = pair.m_on_n, pair.n_on_m
    IM, IN = eye(dM), eye(dN)
    # [e_i,e_I] (x) f_j - e_i (x) ^{e_I} f_j + e_I (x) ^{e_i} f_j
    r1 = (
        np.einsum("iIa,bj->iIjab", cM, IN)
        - np.einsum("ai,Ibj->iIjab", IM, mn)
        + np.einsum("aI,ibj->iIjab", IM, mn)
    )
    # e_i (x) [f_j,f_J] - ^{f_J} e_i (x) f_j + ^{f_j} e_i (x) f_J
    r2 = (
        np.einsum("ai,jJb->ijJab", IM, cN)
        - np.einsum("Jai,bj->ijJab", nm, IN)
        + np.einsum("jai,bJ->ijJab", nm, IN)
    )
    n = dM * dN
    return np.concatenate([as_rows(r1, n), as_rows(r2, n)], axis=0)


def tensor_bracket_on_V(pair: LiePair) -> np.ndarray:
    """B[(i,j), (k,l)] = -(^{f_j} e_i) (x) (^{e_k} f_l) as vectors of V."""
    dM, dN = pair.M.dim, pair.N.dim
    n = dM * dN
    B = -np.einsum("jai,kbl->ijklab", pair.n_on_m, pair.m_on_n)
    return B.reshape(n, n, n)


class LieTensor:
    def __init__(self, pair: LiePair, relations: Subspace, algebra: LieAlgebra, basis_map,
                 rho_M, rho_N, lam, l_action: LieAction):
        self.pair = pair
        self.relations = relations
        self.algebra = algebra
        self.basis_map = basis_map  # [i, j] -> coordinates in T
        self.rho_M = rho_M  # dim M x dim T
        self.rho_N = rho_N
        self.lam = lam
        self.l_action = l_action
        n = pair.M.dim * pair.N.dim
        self.free = [k for k in range(n) if k not in set(relations.pivots)]

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def __repr__(self):
        return f"<LieTensor dim={self.dim}>"

    def project(self, vecs) -> np.ndarray:
        """Coordinates in T of vectors of V (last axis)."""
        return self.relations.reduce(vecs)[..., self.free]

    def pure(self, m, n) -> np.ndarray:
        return np.einsum("i,j,ijt->t", rat_array(m), rat_array(n), self.basis_map)

    def as_crossed_module(self) -> LieCrossedModule:
        return LieCrossedModule(self.lam, self.l_action)

    def crossed_square(self) -> "LieCrossedSquare":
        p = self.pair
        return LieCrossedSquare(self.algebra, p.M, p.N, p.L, self.rho_M, self.rho_N, p.mu.boundary, p.nu.boundary,
                                self.l_action, p.mu.action, p.nu.action, self.basis_map)

    def verify(self) -> Report:
        """Exact checks of the defining relations and the structure-map identities."""
        p = self.pair
        r = Report("lie tensor")
        rel = tensor_relations(p)
        r.add("relations", (w := first_nonzero(self.project(rel))) is None, w, "linear relations vanish in T")
        bm, bT = self.basis_map, self.algebra.c
        lhs = np.einsum("ijx,kly,xyt->ijklt", bm, bm, bT)
        rhs = -np.einsum("jai,kbl,abt->ijklt", p.n_on_m, p.m_on_n, bm)
        r.add("bracket", (w := first_nonzero(lhs - rhs)) is None, w, "[m(x)n, m'(x)n'] = -(^n m)(x)(^{m'} n')")
        r.extend(lie_algebra_report(self.algebra))
        want_M = -np.einsum("jui->iju", p.n_on_m)
        want_N = np.einsum("iuj->iju", p.m_on_n)
        r.add("rho_M", (w := first_nonzero(np.einsum("ut,ijt->iju", self.rho_M, bm) - want_M)) is None, w,
              "rho_M(m(x)n) = -^n m")
        r.add("rho_N", (w := first_nonzero(np.einsum("ut,ijt->iju", self.rho_N, bm) - want_N)) is None, w,
              "rho_N(m(x)n) = ^m n")
        lam_ok = is_zero(p.mu.boundary @ self.rho_M - self.lam) and is_zero(p.nu.boundary @ self.rho_N - self.lam)
        r.add("lambda", lam_ok, None, "lambda = mu rho_M = nu rho_N")
        lhs = np.einsum("lts,ijs->lijt", self.l_action.rho, bm)
        rhs = np.einsum("lai,ajt->lijt", p.mu.action.rho, bm) + np.einsum("lbj,ibt->lijt", p.nu.action.rho, bm)
        r.add("l_action", (w := first_nonzero(lhs - rhs)) is None, w, "^l(m(x)n) = ^l m (x) n + m (x) ^l n")
        r.extend(verify_lie_xmod(self.as_crossed_module()), "xmod.")
        return r


def _descends(images, rel: Subspace) -> tuple:
    """(ok, witness) for a linear map V -> W given by images[..., V] killing R."""
    if rel.dim == 0:
        return True, None
    vals = np.einsum("...k,rk->r...", images, rel.basis)
    w = first_nonzero(vals)
    return w is None, w


def lie_tensor(pair: LiePair) -> LieTensor:
    dM, dN = pair.M.dim, pair.N.dim
    n = dM * dN
    rel = Subspace(tensor_relations(pair), n)
    free = [k for k in range(n) if k not in set(rel.pivots)]
    d = len(free)

    # bracket on V, then descent: B(R, V) and B(V, R) inside R
    BV = tensor_bracket_on_V(pair)
    if rel.dim:
        left = np.einsum("rp,pqu->rqu", rel.basis, BV)
        right = np.einsum("rq,pqu->rpu", rel.basis, BV)
        for side, vals in (("left", left), ("right", right)):
            w = first_nonzero(rel.reduce(vals))
            if w is not None:
                raise BracketNotDescending(f"bracket does not descend ({side} argument in R)", witness=w)

    def project(v):
        return rel.reduce(v)[..., free]

    bT = project(BV[np.ix_(free, free)]) if d else zeros(0, 0, 0)
    algebra = build_lie_algebra(bT, "MxN")  # antisymmetry and Jacobi, verified
    basis_map = project(eye(n)).reshape(dM, dN, d) if n else zeros(dM, dN, 0)

    # structure maps on V
    rhoMV = (-np.einsum("jui->uij", pair.n_on_m)).reshape(dM, n)
    rhoNV = np.einsum("iuj->uij", pair.m_on_n).reshape(dN, n)
    for label, img in (("rho_M", rhoMV), ("rho_N", rhoNV)):
        ok, w = _descends(img, rel)
        if not ok:
            raise StructureMapNotDescending(f"{label} does not vanish on the relations", witness=w)
    rho_M = rhoMV[:, free]
    rho_N = rhoNV[:, free]
    lam = pair.mu.boundary @ rho_M

    # L-action on V: rho_M[l] (x) 1 + 1 (x) rho_N[l]
    dL = pair.L.dim
    actV = np.empty((dL, n, n), dtype=object)
    for l in range(dL):
        actV[l] = np.kron(pair.mu.action.rho[l], eye(dN)) + np.kron(eye(dM), pair.nu.action.rho[l])
    if rel.dim and dL:
        moved = np.einsum("lpq,rq->lrp", actV, rel.basis)
        w = first_nonzero(rel.reduce(moved))
        if w is not None:
            raise StructureMapNotDescending("L-action does not preserve the relations", witness=w)
    rhoT = project(actV[:, :, free].transpose(0, 2, 1)).transpose(0, 2, 1) if d else zeros(dL, 0, 0)
    l_action = LieAction(pair.L, algebra, rhoT)
    return LieTensor(pair, rel, algebra, basis_map, rho_M, rho_N, lam, l_action)


# ---------------------------------------------------------------------------
# pairings


def _check_pairing_shape(pair: LiePair, P: LieAlgebra, h):
    h = rat_array(h)
    if h.shape != (pair.M.dim, pair.N.dim, P.dim):
        raise ShapeMismatch(f"pairing shape {h.shape} != {(pair.M.dim, pair.N.dim, P.dim)}")
    return h


def verify_lie_pairing(pair: LiePair, P: LieAlgebra, h) -> Report:
    """The three Lie pairing identities on basis elements."""
    h = _check_pairing_shape(pair, P, h)
    cM, cN, cP = pair.M.c, pair.N.c, P.c
    mn, nm = pair.m_on_n, pair.n_on_m
    r = Report("lie pairing")
    # h([m,m'],n) = h(m, ^{m'} n) - h(m', ^m n)
    lhs = np.einsum("iIa,ajp->iIjp", cM, h)
    rhs = np.einsum("Ibj,ibp->iIjp", mn, h) - np.einsum("ibj,Ibp->iIjp", mn, h)
    r.add("axiom1", (w := first_nonzero(lhs - rhs)) is None, w, "h([m,m'],n) = h(m,^{m'}n) - h(m',^m n)")
    # h(m,[n,n']) = h(^{n'} m, n) - h(^n m, n')
    lhs = np.einsum("jJb,ibp->ijJp", cN, h)
    rhs = np.einsum("Jai,ajp->ijJp", nm, h) - np.einsum("jai,aJp->ijJp", nm, h)
    r.add("axiom2", (w := first_nonzero(lhs - rhs)) is None, w, "h(m,[n,n']) = h(^{n'}m,n) - h(^n m,n')")
    # h(^n m, ^{m'} n') = -[h(m,n), h(m',n')]
    lhs = np.einsum("jai,kbl,abp->ijklp", nm, mn, h)
    rhs = -np.einsum("ijx,kly,xyp->ijklp", h, h, cP)
    r.add("axiom3", (w := first_nonzero(lhs - rhs)) is None, w, "h(^n m, ^{m'} n') = -[h(m,n), h(m',n')]")
    return r


def universal_lie_morphism(T: LieTensor, P: LieAlgebra, h) -> np.ndarray:
    """phi: T -> P (dim P x dim T) with phi(m (x) n) = h(m, n)."""
    h = _check_pairing_shape(T.pair, P, h)
    hV = h.reshape(T.pair.M.dim * T.pair.N.dim, P.dim).T  # dim P x dim V
    ok, w = _descends(hV, T.relations)
    if not ok:
        raise NotWellDefined("pairing does not vanish on the tensor relations", witness=w)
    phi = hV[:, T.free]
    w = first_nonzero(np.einsum("pt,ijt->ijp", phi, T.basis_map) - h)
    if w is not None:
        raise NotWellDefined("phi does not restrict to h on pure tensors", witness=w)
    lhs = np.einsum("pt,xyt->xyp", phi, T.algebra.c)
    rhs = np.einsum("px,qy,pqu->xyu", phi, phi, P.c)
    w = first_nonzero(lhs - rhs)
    if w is not None:
        raise NotWellDefined("phi is not a Lie homomorphism", witness=w)
    return phi


def lie_tensor_swap(T: LieTensor, Ts: LieTensor) -> np.ndarray:
    """Matrix of T -> T', m (x) n -> -(n (x) m), for T' the tensor of the swapped pair."""
    h = -Ts.basis_map.transpose(1, 0, 2)
    return universal_lie_morphism(T, Ts.algebra, h)


# ---------------------------------------------------------------------------
# crossed squares


@dataclass
class LieCrossedSquare:
    P: LieAlgebra
    M: LieAlgebra
    N: LieAlgebra
    L: LieAlgebra
    p_M: np.ndarray
    p_N: np.ndarray
    mu: np.ndarray
    nu: np.ndarray
    a_P: LieAction
    a_M: LieAction
    a_N: LieAction
    h: np.ndarray

    def __post_init__(self):
        self.h = rat_array(self.h)
        if self.h.shape != (self.M.dim, self.N.dim, self.P.dim):
            raise ShapeMismatch(f"pairing shape {self.h.shape} does not match the square")
        self.p_M = rat_array(self.p_M).reshape(self.M.dim, self.P.dim)
        self.p_N = rat_array(self.p_N).reshape(self.N.dim, self.P.dim)
        self.mu = rat_array(self.mu).reshape(self.L.dim, self.M.dim)
        self.nu = rat_array(self.nu).reshape(self.L.dim, self.N.dim)

    def with_pairing(self, h) -> "LieCrossedSquare":
        return LieCrossedSquare(self.P, self.M, self.N, self.L, self.p_M, self.p_N, self.mu, self.nu,
                                self.a_P, self.a_M, self.a_N, h)


def verify_lie_crossed_square(sq: LieCrossedSquare) -> Report:
    r = Report("lie crossed square")
    h = sq.h
    cM, cN = sq.M.c, sq.N.c
    MP = np.einsum("ki,kpq->ipq", sq.mu, sq.a_P.rho)  # ^{e_i} on P
    NP = np.einsum("kj,kpq->jpq", sq.nu, sq.a_P.rho)
    MN = np.einsum("ki,kuv->iuv", sq.mu, sq.a_N.rho)  # ^{e_i} on N
    NM = np.einsum("kj,kuv->juv", sq.nu, sq.a_M.rho)  # ^{f_j} on M
    r.add("square", is_zero(sq.mu @ sq.p_M - sq.nu @ sq.p_N), None, "mu p_M = nu p_N")
    # X.0
    lhs = np.einsum("iIa,ajp->iIjp", cM, h)
    rhs = np.einsum("ipq,Ijq->iIjp", MP, h) - np.einsum("Ipq,ijq->iIjp", MP, h)
    r.add("X.0:left", (w := first_nonzero(lhs - rhs)) is None, w, "h([m,m'],n) = ^m h(m',n) - ^{m'} h(m,n)")
    lhs = np.einsum("jJb,ibp->ijJp", cN, h)
    rhs = np.einsum("jpq,iJq->ijJp", NP, h) - np.einsum("Jpq,ijq->ijJp", NP, h)
    r.add("X.0:right", (w := first_nonzero(lhs - rhs)) is None, w, "h(m,[n,n']) = ^n h(m,n') - ^{n'} h(m,n)")
    # X.1
    w = first_nonzero(np.einsum("up,lpq->luq", sq.p_M, sq.a_P.rho) - np.einsum("luv,vq->luq", sq.a_M.rho, sq.p_M))
    r.add("X.1:p_M", w is None, w, "p_M(^l p) = ^l p_M(p)")
    w = first_nonzero(np.einsum("up,lpq->luq", sq.p_N, sq.a_P.rho) - np.einsum("luv,vq->luq", sq.a_N.rho, sq.p_N))
    r.add("X.1:p_N", w is None, w, "p_N(^l p) = ^l p_N(p)")
    r.extend(verify_lie_xmod(LieCrossedModule(sq.mu, sq.a_M)), "X.1:mu.")
    r.extend(verify_lie_xmod(LieCrossedModule(sq.nu, sq.a_N)), "X.1:nu.")
    r.extend(verify_lie_xmod(LieCrossedModule(sq.mu @ sq.p_M, sq.a_P)), "X.1:lambda.")
    # X.2
    w = first_nonzero(np.einsum("up,ijp->iju", sq.p_M, h) + np.einsum("jui->iju", NM))
    r.add("X.2:p_M", w is None, w, "p_M h(m,n) = -^n m")
    w = first_nonzero(np.einsum("up,ijp->iju", sq.p_N, h) - np.einsum("iuj->iju", MN))
    r.add("X.2:p_N", w is None, w, "p_N h(m,n) = ^m n")
    # X.3
    w = first_nonzero(np.einsum("ik,ijp->kjp", sq.p_M, h) + np.einsum("jpk->kjp", NP))
    r.add("X.3:p_M", w is None, w, "h(p_M p, n) = -^n p")
    w = first_nonzero(np.einsum("jk,ijp->ikp", sq.p_N, h) - np.einsum("ipk->ikp", MP))
    r.add("X.3:p_N", w is None, w, "h(m, p_N p) = ^m p")
    # X.4
    lhs = np.einsum("lpq,ijq->lijp", sq.a_P.rho, h)
    rhs = np.einsum("lai,ajp->lijp", sq.a_M.rho, h) + np.einsum("lbj,ibp->lijp", sq.a_N.rho, h)
    r.add("X.4", (w := first_nonzero(lhs - rhs)) is None, w, "^l h(m,n) = h(^l m,n) + h(m,^l n)")
    return r


def lie_intersection_square(L: LieAlgebra, I: LieIdeal, J: LieIdeal) -> LieCrossedSquare:
    """P = I meet J with inclusions, restricted adjoint actions and h(m,n) = [m,n]."""
    K = I.intersect(J)
    xi, xj, xk = I.xmod(), J.xmod(), K.xmod()
    # inclusions in coordinates: P -> I is (basis of K in L) read at I's pivots
    p_M = I.space.coordinates(K.space.basis).T if K.dim else zeros(I.dim, 0)
    p_N = J.space.coordinates(K.space.basis).T if K.dim else zeros(J.dim, 0)
    br = np.einsum("ai,bj,iju->abu", I.space.basis, J.space.basis, L.c) if I.dim and J.dim else zeros(I.dim, J.dim, L.dim)
    if I.dim and J.dim and not K.space.contains(as_rows(br, L.dim)):
        raise ShapeMismatch("[I, J] is not inside the intersection")
    h = K.space.coordinates(br) if K.dim else zeros(I.dim, J.dim, 0)
    return LieCrossedSquare(K.algebra, I.algebra, J.algebra, L, p_M, p_N, xi.boundary, xj.boundary,
                            xk.action, xi.action, xj.action, h)


LIE_XSQ_AXIOMS = {
    "X.0": "h bilinear, h([m,m'],n) = ^m h(m',n) - ^{m'} h(m,n), h(m,[n,n']) = ^n h(m,n') - ^{n'} h(m,n)",
    "X.1": "p_M, p_N are L-equivariant; mu, nu and mu p_M are crossed modules",
    "X.2": "p_M h(m,n) = -^n m and p_N h(m,n) = ^m n",
    "X.3": "h(p_M p, n) = -^n p and h(m, p_N p) = ^m p",
    "X.4": "^l h(m,n) = h(^l m, n) + h(m, ^l n)",
}

__all__ = [
    "LiePair", "make_lie_pair", "tensor_relations", "tensor_bracket_on_V", "LieTensor", "lie_tensor",
    "verify_lie_pairing", "universal_lie_morphism", "lie_tensor_swap", "LieCrossedSquare",
    "verify_lie_crossed_square", "lie_intersection_square", "LIE_XSQ_AXIOMS",
]
