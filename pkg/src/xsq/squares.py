"""Crossed squares of groups, their verifiers, and weak crossed squares.

A crossed square is a commuting square

    P --p_M--> M
    |          |
   p_N         mu
    v          v
    N --nu---> L

with L acting on P, M, N and a pairing ``h[m, n]`` in P. M and N act on
everything through mu and nu.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .commutators import higgins_commutator
from .config import DEFAULT
from .errors import NotWellDefined, SquareMismatch, TooLarge
from .groups import (
    IDX,
    FiniteGroup,
    GroupHom,
    Subgroup,
    _hom_witness,
    hom_from_generators,
    identity_hom,
    intersection,
    iter_isomorphisms,
    subgroup_closure,
)
from .report import Check, Report
from .tensor import CompatiblePair, TensorGroup, tensor_group, tensor_of_morphisms
from .xmod import CrossedModule, GroupAction, subgroup_conjugation, verify_crossed_module


def _first(mask_bad):
    bad = np.argwhere(mask_bad)
    return None if not bad.size else tuple(int(v) for v in bad[0])


@dataclass
class CrossedSquare:
    P: FiniteGroup
    M: FiniteGroup
    N: FiniteGroup
    L: FiniteGroup
    p_M: GroupHom
    p_N: GroupHom
    mu: GroupHom
    nu: GroupHom
    a_P: GroupAction
    a_M: GroupAction
    a_N: GroupAction
    h: np.ndarray

    def __post_init__(self):
        self.h = np.asarray(self.h, dtype=IDX)
        if self.h.shape != (self.M.order, self.N.order):
            raise SquareMismatch(f"pairing shape {self.h.shape} != ({self.M.order}, {self.N.order})")

    @property
    def mu_xmod(self) -> CrossedModule:
        return CrossedModule(self.mu, self.a_M)

    @property
    def nu_xmod(self) -> CrossedModule:
        return CrossedModule(self.nu, self.a_N)

    @property
    def lam(self) -> GroupHom:
        return self.mu.compose(self.p_M)

    def pair(self) -> CompatiblePair:
        return CompatiblePair(self.mu_xmod, self.nu_xmod)

    def with_pairing(self, h) -> "CrossedSquare":
        return CrossedSquare(self.P, self.M, self.N, self.L, self.p_M, self.p_N, self.mu, self.nu,
                             self.a_P, self.a_M, self.a_N, h)


def verify_crossed_square(cs: CrossedSquare) -> Report:
    """Exhaustive element-wise check of X.0 to X.4."""
    r = Report("crossed square")
    P, M, N, L = cs.P, cs.M, cs.N, cs.L
    tP, tM, tN = P.table, M.table, N.table
    iP, iM, iN = P.inverse, M.inverse, N.inverse
    aP, aM, aN = cs.a_P.perms, cs.a_M.perms, cs.a_N.perms
    mu, nu = cs.mu.image, cs.nu.image
    pM, pN = cs.p_M.image, cs.p_N.image
    h = cs.h

    homs_ok = all(_hom_witness(f.domain, f.codomain, f.image) is None for f in (cs.p_M, cs.p_N, cs.mu, cs.nu))
    r.add("homs", homs_ok, None, "p_M, p_N, mu, nu are homomorphisms")
    r.add("square", (w := _first(mu[pM] != nu[pN])) is None, w, "mu p_M = nu p_N")

    m = np.arange(M.order)
    n = np.arange(N.order)
    p = np.arange(P.order)
    # X.0
    lhs = h[tM[:, :, None], n[None, None, :]]
    rhs = tP[aP[mu[:, None, None], h[None, :, :]], h[:, None, :]]
    r.add("X.0:left", (w := _first(lhs != rhs)) is None, w, "h(mm',n) = ^m h(m',n) h(m,n)")
    lhs = h[m[:, None, None], tN[None, :, :]]
    rhs = tP[h[:, :, None], aP[nu[None, :, None], h[:, None, :]]]
    r.add("X.0:right", (w := _first(lhs != rhs)) is None, w, "h(m,nn') = h(m,n) ^n h(m,n')")
    # X.1
    r.add("X.1:p_M", (w := _first(pM[aP] != aM[:, pM])) is None, w, "p_M(^l p) = ^l p_M(p)")
    r.add("X.1:p_N", (w := _first(pN[aP] != aN[:, pN])) is None, w, "p_N(^l p) = ^l p_N(p)")
    r.extend(verify_crossed_module(cs.mu_xmod), "X.1:mu.")
    r.extend(verify_crossed_module(cs.nu_xmod), "X.1:nu.")
    r.extend(verify_crossed_module(CrossedModule(cs.lam, cs.a_P)), "X.1:lambda.")
    # X.2
    want = tM[m[:, None], iM[aM[nu[None, :], m[:, None]]]]
    r.add("X.2:p_M", (w := _first(pM[h] != want)) is None, w, "p_M h(m,n) = m ^n m^-1")
    want = tN[aN[mu[:, None], n[None, :]], iN[n][None, :]]
    r.add("X.2:p_N", (w := _first(pN[h] != want)) is None, w, "p_N h(m,n) = ^m n n^-1")
    # X.3
    want = tP[p[:, None], iP[aP[nu[None, :], p[:, None]]]]
    r.add("X.3:p_M", (w := _first(h[pM[:, None], n[None, :]] != want)) is None, w, "h(p_M p, n) = p ^n p^-1")
    want = tP[aP[mu[:, None], p[None, :]], iP[p][None, :]]
    r.add("X.3:p_N", (w := _first(h[m[:, None], pN[None, :]] != want)) is None, w, "h(m, p_N p) = ^m p p^-1")
    # X.4
    lhs = aP[np.arange(L.order)[:, None, None], h[None, :, :]]
    rhs = h[aM[:, :, None], aN[:, None, :]]
    r.add("X.4", (w := _first(lhs != rhs)) is None, w, "^l h(m,n) = h(^l m, ^l n)")
    return r


XSQ_AXIOMS = {
    "X.0": "h(mm',n) = ^m h(m',n) h(m,n) and h(m,nn') = h(m,n) ^n h(m,n')",
    "X.1": "p_M, p_N are L-equivariant; mu, nu and lambda = mu p_M are crossed modules",
    "X.2": "p_M(h(m,n)) = m ^n m^-1 and p_N(h(m,n)) = ^m n n^-1",
    "X.3": "h(p_M(p),n) = p ^n p^-1 and h(m,p_N(p)) = ^m p p^-1",
    "X.4": "^l h(m,n) = h(^l m, ^l n)",
}


# ---------------------------------------------------------------------------
# intersections


def intersection_square(L: FiniteGroup, M_sub: Subgroup, N_sub: Subgroup) -> CrossedSquare:
    """P = M meet N with inclusions, conjugation actions and h(m,n) = [m,n]."""
    M_sub.require_normal()
    N_sub.require_normal()
    full = L.full()
    aM, _, Mg, _, Mi = subgroup_conjugation(full, M_sub)
    aN, _, Ng, _, Ni = subgroup_conjugation(full, N_sub)
    P_sub = intersection(M_sub, N_sub)
    aP, _, Pg, _, Pi = subgroup_conjugation(full, P_sub)
    pM = GroupHom(Pg, Mg, [M_sub.index_of(x) for x in P_sub.array])
    pN = GroupHom(Pg, Ng, [N_sub.index_of(x) for x in P_sub.array])
    t, inv = L.table, L.inverse
    ma, na = M_sub.array, N_sub.array
    comm = t[t[ma[:, None], na[None, :]], t[inv[ma][:, None], inv[na][None, :]]]
    lookup = np.full(L.order, -1, dtype=np.int64)
    lookup[P_sub.array] = np.arange(P_sub.order)
    h = lookup[comm]
    sq = CrossedSquare(
        Pg, Mg, Ng, L, pM, pN, Mi, Ni,
        GroupAction(L, Pg, aP.perms), GroupAction(L, Mg, aM.perms), GroupAction(L, Ng, aN.perms), h,
    )
    sq.P_inclusion = Pi
    return sq


# ---------------------------------------------------------------------------
# universal property


def _same_xmod(a: CrossedModule, boundary: GroupHom, action: GroupAction) -> bool:
    return (
        a.M is boundary.domain and a.L is boundary.codomain
        and bool((a.boundary.image == boundary.image).all())
        and action.acted is a.M and bool((a.action.perms == action.perms).all())
    )


def universal_morphism(T: TensorGroup, cs: CrossedSquare) -> GroupHom:
    """The unique phi: M(x)N -> P with phi(m(x)n) = h(m,n)."""
    pair = T.pair
    if not (_same_xmod(pair.mu, cs.mu, cs.a_M) and _same_xmod(pair.nu, cs.nu, cs.a_N)):
        raise SquareMismatch("square is not over the tensor's crossed modules")
    phi = T.hom_from_pairing(cs.P, cs.h)  # NotWellDefined if h is not a crossed pairing
    if not (cs.p_M.image[phi.image] == T.pi_M.image).all():
        raise SquareMismatch("p_M phi != pi_M", witness=int(np.flatnonzero(cs.p_M.image[phi.image] != T.pi_M.image)[0]))
    if not (cs.p_N.image[phi.image] == T.pi_N.image).all():
        raise SquareMismatch("p_N phi != pi_N", witness=int(np.flatnonzero(cs.p_N.image[phi.image] != T.pi_N.image)[0]))
    return phi


def h_image_equals_commutator(L: FiniteGroup, M_sub: Subgroup, N_sub: Subgroup, max_cosets=None) -> Report:
    """image(M(x)N -> M meet N) = [M, N] as subgroups of L."""
    cs = intersection_square(L, M_sub, N_sub)
    T = tensor_group(cs.pair(), max_cosets)
    phi = universal_morphism(T, cs)
    image = subgroup_closure(L, cs.P_inclusion.image[np.unique(phi.image)])
    comm = higgins_commutator(L, M_sub, N_sub)
    r = Report("image of h")
    r.add("image", image == comm, {"image": list(image.elements), "commutator": list(comm.elements)},
          f"|M(x)N| = {T.order}, |image| = {image.order}, |[M,N]| = {comm.order}")
    r.tensor_order = T.order
    r.image_order = image.order
    return r


# ---------------------------------------------------------------------------
# morphisms and isomorphisms


def is_xsq_morphism(a: CrossedSquare, b: CrossedSquare, fP: GroupHom, fM: GroupHom, fN: GroupHom, fL: GroupHom) -> Check:
    for name, f in (("P", fP), ("M", fM), ("N", fN), ("L", fL)):
        if _hom_witness(f.domain, f.codomain, f.image) is not None:
            return Check("xsq morphism", False, name, f"f_{name} is not a homomorphism")
    tests = [
        ("p_M", b.p_M.image[fP.image], fM.image[a.p_M.image]),
        ("p_N", b.p_N.image[fP.image], fN.image[a.p_N.image]),
        ("mu", b.mu.image[fM.image], fL.image[a.mu.image]),
        ("nu", b.nu.image[fN.image], fL.image[a.nu.image]),
        ("a_P", fP.image[a.a_P.perms], b.a_P.perms[fL.image][:, fP.image]),
        ("a_M", fM.image[a.a_M.perms], b.a_M.perms[fL.image][:, fM.image]),
        ("a_N", fN.image[a.a_N.perms], b.a_N.perms[fL.image][:, fN.image]),
        ("h", fP.image[a.h], b.h[fM.image[:, None], fN.image[None, :]]),
    ]
    for name, lhs, rhs in tests:
        w = _first(lhs != rhs)
        if w is not None:
            return Check("xsq morphism", False, (name,) + w)
    return Check("xsq morphism", True)


def _compatible_isos(A: FiniteGroup, B: FiniteGroup, fL: GroupHom, da, db, aa, ab, bound):
    """Isomorphisms f: A -> B with db f = fL da and f(^l x) = ^{fL l} f(x)."""
    out = []
    for iso in iter_isomorphisms(A, B, max(bound, A.order) if A.abelian else bound):
        f = iso.forward.image
        if not (db[f] == fL.image[da]).all():
            continue
        if not (f[aa] == ab[fL.image][:, f]).all():
            continue
        out.append(iso.forward)
    return out


def find_xsq_isomorphism(a: CrossedSquare, b: CrossedSquare, fix_base: bool = True, bound=None):
    """(fP, fM, fN, fL) forming an isomorphism of crossed squares, or None.

    With ``fix_base`` and a shared L the base map is the identity.
    """
    bound = DEFAULT.iso_bound if bound is None else bound
    orders = lambda s: (s.P.order, s.M.order, s.N.order, s.L.order)  # noqa: E731
    if orders(a) != orders(b):
        return None
    if fix_base and a.L is b.L:
        base = [identity_hom(a.L)]
    else:
        base = [iso.forward for iso in iter_isomorphisms(a.L, b.L, bound)]
    for fL in base:
        fMs = _compatible_isos(a.M, b.M, fL, a.mu.image, b.mu.image, a.a_M.perms, b.a_M.perms, bound)
        if not fMs:
            continue
        fNs = _compatible_isos(a.N, b.N, fL, a.nu.image, b.nu.image, a.a_N.perms, b.a_N.perms, bound)
        for fM in fMs:
            for fN in fNs:
                for fP in _pairing_driven_isos(a, b, fM, fN, fL, bound):
                    if is_xsq_morphism(a, b, fP, fM, fN, fL):
                        return fP, fM, fN, fL
    return None


def _pairing_driven_isos(a: CrossedSquare, b: CrossedSquare, fM, fN, fL, bound):
    """Candidate fP. When the values of h generate P, fP is forced."""
    P = a.P
    mask = np.zeros(P.order, dtype=bool)
    mask[P.identity] = True
    gens, imgs = [], []
    hb = b.h[fM.image[:, None], fN.image[None, :]]
    for (mi, ni), x in np.ndenumerate(a.h):
        if not mask[x]:
            gens.append(int(x))
            imgs.append(int(hb[mi, ni]))
            mask = subgroup_closure(P, gens).mask
    if mask.all():
        f = hom_from_generators(P, b.P, gens, imgs)
        if f is not None and f.is_bijective():
            yield f
        return
    for iso in iter_isomorphisms(P, b.P, bound):
        yield iso.forward


# ---------------------------------------------------------------------------
# weak crossed squares


@dataclass
class WeakCrossedSquare:
    P: FiniteGroup
    M: FiniteGroup
    N: FiniteGroup
    L: FiniteGroup
    p_M: GroupHom
    p_N: GroupHom
    mu: GroupHom
    nu: GroupHom
    a_P: GroupAction
    a_M: GroupAction
    a_N: GroupAction
    tensor: TensorGroup
    h_hom: GroupHom

    @property
    def lam(self) -> GroupHom:
        return self.mu.compose(self.p_M)

    def with_h(self, image) -> "WeakCrossedSquare":
        """Same square with h replaced by an arbitrary (possibly faulty) element map."""
        return WeakCrossedSquare(self.P, self.M, self.N, self.L, self.p_M, self.p_N, self.mu, self.nu,
                                 self.a_P, self.a_M, self.a_N, self.tensor,
                                 GroupHom(self.tensor.group, self.P, image))


def weak_from_tensor(T: TensorGroup) -> WeakCrossedSquare:
    """The tensor's own square with h the identity."""
    p = T.pair
    return WeakCrossedSquare(T.group, p.M, p.N, p.L, T.pi_M, T.pi_N, p.mu.boundary, p.nu.boundary,
                             T.l_action, p.mu.action, p.nu.action, T, identity_hom(T.group))


def weak_from_crossed(cs: CrossedSquare, T: Optional[TensorGroup] = None, max_cosets=None) -> WeakCrossedSquare:
    """h: M(x)N -> P induced by the pairing of a crossed square."""
    T = tensor_group(cs.pair(), max_cosets) if T is None else T
    phi = universal_morphism(T, cs)
    return WeakCrossedSquare(cs.P, cs.M, cs.N, cs.L, cs.p_M, cs.p_N, cs.mu, cs.nu,
                             cs.a_P, cs.a_M, cs.a_N, T, phi)


def verify_weak_crossed_square(w: WeakCrossedSquare, max_cosets=None, generator_bound=None) -> Report:
    """W.0 (h is a homomorphism) and W.1 to W.4.

    W.3 builds the auxiliary tensors P(x)N and M(x)P over the crossed
    modules lambda, nu and mu, lambda.
    """
    r = Report("weak crossed square")
    T = w.tensor
    pair = T.pair
    h = w.h_hom.image
    if w.h_hom.domain is not T.group or w.h_hom.codomain is not w.P:
        raise SquareMismatch("h must map the tensor to P")
    if not (_same_xmod(pair.mu, w.mu, w.a_M) and _same_xmod(pair.nu, w.nu, w.a_N)):
        raise SquareMismatch("square is not over the tensor's crossed modules")
    hw = _hom_witness(T.group, w.P, h)
    r.add("W.0:morphism", hw is None, hw, "h is a homomorphism M(x)N -> P")

    # W.1
    pM, pN = w.p_M.image, w.p_N.image
    aP = w.a_P.perms
    r.add("W.1:square", (x := _first(w.mu.image[pM] != w.nu.image[pN])) is None, x, "mu p_M = nu p_N")
    r.add("W.1:p_M", (x := _first(pM[aP] != w.a_M.perms[:, pM])) is None, x, "p_M is L-equivariant")
    r.add("W.1:p_N", (x := _first(pN[aP] != w.a_N.perms[:, pN])) is None, x, "p_N is L-equivariant")
    lam_x = CrossedModule(w.lam, w.a_P)
    lam_rep = verify_crossed_module(lam_x)
    r.extend(verify_crossed_module(pair.mu), "W.1:mu.")
    r.extend(verify_crossed_module(pair.nu), "W.1:nu.")
    r.extend(lam_rep, "W.1:lambda.")

    # W.2 on generators m(x)n
    pure = T.pure.astype(np.int64)
    r.add("W.2:p_M", (x := _first(pM[h[pure]] != T.pi_M.image[pure])) is None, x, "p_M h = pi_M")
    r.add("W.2:p_N", (x := _first(pN[h[pure]] != T.pi_N.image[pure])) is None, x, "p_N h = pi_N")

    # W.3 on generators of the auxiliary tensors
    if not lam_rep.ok:
        r.add("W.3:P(x)N", False, None, "lambda is not a crossed module")
        r.add("W.3:M(x)P", False, None, "lambda is not a crossed module")
    else:
        gb = DEFAULT.generator_bound if generator_bound is None else generator_bound
        for label, size in (("P(x)N", w.P.order * w.N.order), ("M(x)P", w.M.order * w.P.order)):
            if size > gb:
                raise TooLarge(f"auxiliary tensor {label} needs {size} generators > {gb}", witness=size)
        T_PN = tensor_group(CompatiblePair(lam_x, pair.nu), max_cosets)
        T_MP = tensor_group(CompatiblePair(pair.mu, lam_x), max_cosets)
        r.add("W.3:P(x)N", *_w3(T_PN, T, w.p_M, identity_hom(w.N), h, T_PN.pi_M, 0))
        r.add("W.3:M(x)P", *_w3(T_MP, T, identity_hom(w.M), w.p_N, h, T_MP.pi_N, 1))
        r.aux_tensors = (T_PN, T_MP)

    # W.4
    lhs = h[T.l_action.perms]
    rhs = aP[:, h]
    r.add("W.4", (x := _first(lhs != rhs)) is None, x, "h(^l t) = ^l h(t)")
    return r


def _w3(T_aux: TensorGroup, T: TensorGroup, f: GroupHom, g: GroupHom, h, pi, side):
    """h (f(x)g) = pi on the generators of T_aux."""
    try:
        tensor_of_morphisms(T_aux, T, f, g)
    except NotWellDefined as exc:
        return False, exc.witness, "f (x) g is not well defined"
    pure = T_aux.pure.astype(np.int64)
    mapped = T.pure.astype(np.int64)[f.image[:, None], g.image[None, :]]
    x = _first(h[mapped] != pi.image[pure])
    return x is None, x, "h (p (x) 1) = pi_P" if side == 0 else "h (1 (x) p) = pi_P"


WEAK_AXIOMS = {
    "W.0": "h is a homomorphism M(x)N -> P",
    "W.1": "p_M, p_N are L-equivariant; mu, nu, lambda are L-crossed modules",
    "W.2": "p_M h = pi_M and p_N h = pi_N",
    "W.3": "h (p_M (x) 1) = pi_P on P(x)N and h (1 (x) p_N) = pi_P on M(x)P",
    "W.4": "h is L-equivariant",
}
