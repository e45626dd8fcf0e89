"""Group actions, semidirect products, crossed modules and internal groupoids.

Actions are left actions stored as an ``|L| x |M|`` array ``perms`` with
``perms[l, m]`` the element ``^l m``. Semidirect products store pairs
kernel-first: ``(x, l)`` lives at index ``x * |L| + l``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .commutators import higgins_commutator, huq_commutator
from .config import DEFAULT
from .errors import (
    IdentityNotFixed,
    MalformedGraph,
    NotAutomorphism,
    NotCrossedModule,
    NotFunctorial,
    NotGroupoid,
    NotHomomorphism,
    NotNormal,
)
from .groups import (
    IDX,
    FiniteGroup,
    GroupHom,
    Subgroup,
    _check_bound,
    _group_from_trusted,
    _hom_witness,
    identity_hom,
    iter_isomorphisms,
    quotient_group,
)
from .report import Check, Report


# ---------------------------------------------------------------------------
# actions


class GroupAction:
    def __init__(self, acting: FiniteGroup, acted: FiniteGroup, perms):
        self.acting = acting
        self.acted = acted
        self.perms = np.asarray(perms, dtype=IDX)
        self.perms.setflags(write=False)

    @property
    def L(self):
        return self.acting

    @property
    def M(self):
        return self.acted

    def __call__(self, l: int, m: int) -> int:
        return int(self.perms[l, m])

    def automorphism(self, l: int) -> GroupHom:
        return GroupHom(self.acted, self.acted, self.perms[l])

    def is_trivial(self) -> bool:
        return bool((self.perms == np.arange(self.acted.order)[None, :]).all())

    def pullback(self, f: GroupHom) -> "GroupAction":
        """The action of f.domain through f: ^k m = ^{f(k)} m."""
        return GroupAction(f.domain, self.acted, self.perms[f.image])

    def __repr__(self):
        return f"<GroupAction {self.acting!r} on {self.acted!r}>"


def action_witness(L: FiniteGroup, M: FiniteGroup, perms):
    """(code, witness) for the first failing action axiom, or None."""
    n = M.order
    ident = np.arange(n)
    for l in range(L.order):
        row = perms[l]
        if len(np.unique(row)) != n or _hom_witness(M, M, row) is not None:
            return "automorphism", l
    if not (perms[L.identity] == ident).all():
        return "identity", L.identity
    # functoriality on generators of L suffices: perms[l g] = perms[l] o perms[g]
    for g in L.generators:
        lhs = perms[L.table[:, g]]
        rhs = perms[:, perms[g]]
        bad = np.flatnonzero((lhs != rhs).any(axis=1))
        if bad.size:
            return "functorial", (int(bad[0]), int(g))
    return None


def make_action(L: FiniteGroup, M: FiniteGroup, perms) -> GroupAction:
    perms = np.asarray(perms, dtype=np.int64)
    if perms.shape != (L.order, M.order):
        raise NotAutomorphism(f"perms shape {perms.shape} != ({L.order}, {M.order})")
    if perms.size and (perms.min() < 0 or perms.max() >= M.order):
        raise NotAutomorphism("perm entry out of range")
    w = action_witness(L, M, perms)
    if w is not None:
        code, wit = w
        if code == "automorphism":
            raise NotAutomorphism(f"element {wit} does not act by an automorphism", witness=wit)
        if code == "identity":
            raise IdentityNotFixed("the identity does not act trivially", witness=wit)
        raise NotFunctorial(f"^(l1 l2) != ^l1 ^l2 for {wit}", witness=wit)
    return GroupAction(L, M, perms)


def trivial_action(L: FiniteGroup, M: FiniteGroup) -> GroupAction:
    return GroupAction(L, M, np.tile(np.arange(M.order), (L.order, 1)))


def conjugation_action(G: FiniteGroup) -> GroupAction:
    t, inv = G.table, G.inverse
    return GroupAction(G, G, t[t, inv[:, None]])


def subgroup_conjugation(L_sub: Subgroup, M_sub: Subgroup):
    """Conjugation of L_sub on M_sub inside their common parent.

    Returns (action, L_group, M_group, L_inclusion, M_inclusion). M_sub must
    be normalised by L_sub.
    """
    X = L_sub.parent
    Lg, Li = L_sub.to_group()
    Mg, Mi = M_sub.to_group()
    t, inv = X.table, X.inverse
    la, ma = L_sub.array, M_sub.array
    conj = t[t[la[:, None], ma[None, :]], inv[la][:, None]]
    if not M_sub.mask[conj].all():
        i, j = np.argwhere(~M_sub.mask[conj])[0]
        raise NotNormal("subgroup is not normalised by the acting subgroup",
                        witness={"g": int(la[i]), "x": int(ma[j])})
    lookup = np.full(X.order, -1, dtype=np.int64)
    lookup[ma] = np.arange(len(ma))
    return GroupAction(Lg, Mg, lookup[conj]), Lg, Mg, Li, Mi


# ---------------------------------------------------------------------------
# semidirect products


@dataclass
class SplitExtension:
    total: FiniteGroup
    base: FiniteGroup
    kernel_group: FiniteGroup
    p: GroupHom
    s: GroupHom
    k: GroupHom
    action: Optional[GroupAction] = None

    def pair(self, x: int, l: int) -> int:
        return x * self.base.order + l

    def unpair(self, z: int):
        return divmod(int(z), self.base.order)

    def conjugation_witness(self):
        """(l, x) violating s(l) k(x) s(l)^-1 = k(^l x), or None."""
        if self.action is None:
            return None
        T = self.total
        t, inv = T.table, T.inverse
        s, k = self.s.image, self.k.image
        lhs = t[t[s[:, None], k[None, :]], inv[s][:, None]]
        rhs = k[self.action.perms]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            return int(bad[0, 0]), int(bad[0, 1])
        return None


def semidirect_product(a: GroupAction, order_bound=None, name=None) -> SplitExtension:
    """X x| L on kernel-first pairs: (x,l)(x',l') = (x . ^l x', l l')."""
    M, L = a.acted, a.acting
    nm, nl = M.order, L.order
    _check_bound(nm * nl, order_bound)
    tm = M.table.astype(np.int64)
    tl = L.table.astype(np.int64)
    # first[x, l, x'] = x . ^l x'
    first = tm[np.arange(nm)[:, None, None], a.perms[None, :, :]]
    table = first[:, :, :, None] * nl + tl[None, :, None, :]
    table = table.reshape(nm * nl, nm * nl)
    T = _group_from_trusted(table, M.identity * nl + L.identity, name=name)
    idx = np.arange(nm * nl)
    return SplitExtension(
        T, L, M,
        GroupHom(T, L, idx % nl),
        GroupHom(L, T, M.identity * nl + np.arange(nl)),
        GroupHom(M, T, np.arange(nm) * nl + L.identity),
        a,
    )


# ---------------------------------------------------------------------------
# crossed modules


@dataclass
class PrecrossedModule:
    boundary: GroupHom
    action: GroupAction

    @property
    def M(self) -> FiniteGroup:
        return self.boundary.domain

    @property
    def L(self) -> FiniteGroup:
        return self.boundary.codomain

    def __post_init__(self):
        if self.action.acted is not self.M or self.action.acting is not self.L:
            raise NotCrossedModule("action and boundary do not share groups")


class CrossedModule(PrecrossedModule):
    pass


def equivariance_witness(boundary: GroupHom, action: GroupAction):
    """(l, m) with d(^l m) != l d(m) l^-1, or None."""
    L = boundary.codomain
    t, inv = L.table, L.inverse
    d = boundary.image
    lhs = d[action.perms]
    lids = np.arange(L.order)
    rhs = t[t[lids[:, None], d[None, :]], inv[lids][:, None]]
    bad = np.argwhere(lhs != rhs)
    return None if not bad.size else (int(bad[0, 0]), int(bad[0, 1]))


def peiffer_witness(boundary: GroupHom, action: GroupAction):
    """(m, m') with ^{d m} m' != m m' m^-1, or None."""
    M = boundary.domain
    t, inv = M.table, M.inverse
    lhs = action.perms[boundary.image]
    mids = np.arange(M.order)
    rhs = t[t[mids[:, None], mids[None, :]], inv[mids][:, None]]
    bad = np.argwhere(lhs != rhs)
    return None if not bad.size else (int(bad[0, 0]), int(bad[0, 1]))


def verify_crossed_module(pcm: PrecrossedModule) -> Report:
    r = Report("crossed module")
    r.add("precrossed", (w := equivariance_witness(pcm.boundary, pcm.action)) is None, w,
          "d(^l m) = l d(m) l^-1")
    r.add("peiffer", (w := peiffer_witness(pcm.boundary, pcm.action)) is None, w,
          "^(d m) m' = m m' m^-1")
    return r


def make_crossed_module(boundary: GroupHom, action: GroupAction) -> CrossedModule:
    cm = CrossedModule(boundary, action)
    rep = verify_crossed_module(cm)
    if not rep.ok:
        bad = rep.failures()[0]
        raise NotCrossedModule(f"{bad.name} condition fails", witness=bad.witness)
    return cm


def inclusion_xmod(L: FiniteGroup, M_sub: Subgroup) -> CrossedModule:
    """Normal subgroup inclusion M -> L with conjugation."""
    M_sub.require_normal()
    a, _, Mg, _, Mi = subgroup_conjugation(L.full(), M_sub)
    # the full subgroup relabels nothing, so the action is by L itself
    return CrossedModule(Mi, GroupAction(L, Mg, a.perms))


def identity_xmod(G: FiniteGroup) -> CrossedModule:
    return CrossedModule(identity_hom(G), conjugation_action(G))


def trivial_xmod(X: FiniteGroup, L: FiniteGroup) -> CrossedModule:
    """The zero map X -> L with the trivial action (a crossed module iff X is abelian)."""
    return CrossedModule(GroupHom(X, L, np.full(X.order, L.identity)), trivial_action(L, X))


def image_is_normal(cm: PrecrossedModule) -> bool:
    return cm.boundary.image_subgroup().is_normal()


def is_xmod_morphism(a: PrecrossedModule, b: PrecrossedModule, f: GroupHom, g: GroupHom) -> Check:
    """(f: M_a -> M_b, g: L_a -> L_b) commutes with boundaries and actions."""
    if _hom_witness(f.domain, f.codomain, f.image) is not None:
        return Check("morphism", False, "f", "f is not a homomorphism")
    if _hom_witness(g.domain, g.codomain, g.image) is not None:
        return Check("morphism", False, "g", "g is not a homomorphism")
    bad = np.flatnonzero(b.boundary.image[f.image] != g.image[a.boundary.image])
    if bad.size:
        return Check("morphism", False, ("boundary", int(bad[0])))
    lhs = f.image[a.action.perms]
    rhs = b.action.perms[g.image][:, f.image]
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        return Check("morphism", False, ("action", int(bad[0, 0]), int(bad[0, 1])))
    return Check("morphism", True)


def find_xmod_isomorphism(a: PrecrossedModule, b: PrecrossedModule, g: Optional[GroupHom] = None,
                          bound=None) -> Optional[GroupHom]:
    """An isomorphism f: M_a -> M_b making (f, g) an isomorphism of crossed modules.

    ``g`` defaults to the identity, which requires a.L is b.L.
    """
    if g is None:
        if a.L is not b.L:
            raise ValueError("a base isomorphism g is needed when the bases differ")
        g = identity_hom(a.L)
    bound = DEFAULT.iso_bound if bound is None else bound
    for iso in iter_isomorphisms(a.M, b.M, max(bound, a.M.order) if a.M.abelian else bound):
        if is_xmod_morphism(a, b, iso.forward, g):
            return iso.forward
    return None


def induced_mutual_actions(mu: CrossedModule, nu: CrossedModule):
    """(action of M on N, action of N on M): ^m n = ^{mu(m)} n and ^n m = ^{nu(n)} m."""
    if mu.L is not nu.L:
        raise ValueError("crossed modules must share the base group")
    m_on_n = nu.action.pullback(mu.boundary)
    n_on_m = mu.action.pullback(nu.boundary)
    return m_on_n, n_on_m


# ---------------------------------------------------------------------------
# reflexive graphs and groupoids


@dataclass
class ReflexiveGraph:
    C1: FiniteGroup
    C0: FiniteGroup
    d: GroupHom
    c: GroupHom
    e: GroupHom

    def __post_init__(self):
        n = np.arange(self.C0.order)
        if not ((self.d.image[self.e.image] == n).all() and (self.c.image[self.e.image] == n).all()):
            raise MalformedGraph("d o e and c o e must both be the identity")

    @property
    def Kd(self) -> Subgroup:
        return self.d.kernel()

    @property
    def Kc(self) -> Subgroup:
        return self.c.kernel()


def make_reflexive_graph(C1, C0, d, c, e) -> ReflexiveGraph:
    for f in (d, c, e):
        w = _hom_witness(f.domain, f.codomain, f.image)
        if w is not None:
            raise NotHomomorphism("reflexive graph structure map is not a homomorphism", witness=w)
    return ReflexiveGraph(C1, C0, d, c, e)


def xmod_to_reflexive_graph(cm: PrecrossedModule) -> ReflexiveGraph:
    """C1 = M x| L with d(x,l) = l, c(x,l) = d(x) l, e(l) = (1,l)."""
    ext = semidirect_product(cm.action)
    nl = cm.L.order
    idx = np.arange(ext.total.order)
    x, l = idx // nl, idx % nl
    c = cm.L.table[cm.boundary.image[x], l]
    return ReflexiveGraph(ext.total, cm.L, ext.p, GroupHom(ext.total, cm.L, c), ext.s)


def groupoid_witness(rg: ReflexiveGraph):
    """(x, y) with x in K_d, y in K_c and xy != yx, or None."""
    G = rg.C1
    kd, kc = rg.Kd.array, rg.Kc.array
    t = G.table
    bad = np.argwhere(t[kd[:, None], kc[None, :]] != t[kc[None, :], kd[:, None]])
    return None if not bad.size else (int(kd[bad[0, 0]]), int(kc[bad[0, 1]]))


def is_groupoid(rg: ReflexiveGraph) -> Check:
    w = groupoid_witness(rg)
    return Check("groupoid", w is None, w, "[K_d, K_c] = 1")


def reflect_to_groupoid(rg: ReflexiveGraph):
    """Divide C1 by the Huq commutator of the kernels. Returns (graph, quotient map)."""
    N = huq_commutator(rg.C1, rg.Kd, rg.Kc)
    q = quotient_group(rg.C1, N)
    Q, proj, reps = q
    d = GroupHom(Q, rg.C0, rg.d.image[reps])
    c = GroupHom(Q, rg.C0, rg.c.image[reps])
    e = proj.compose(rg.e)
    return ReflexiveGraph(Q, rg.C0, d, c, e), proj


def normalize_groupoid(rg: ReflexiveGraph) -> CrossedModule:
    """M = K_d, boundary c|K_d, C0 acting by conjugation with e(l)."""
    w = groupoid_witness(rg)
    if w is not None:
        raise NotGroupoid("kernels of d and c do not commute", witness=w)
    K = rg.Kd
    Kg, Ki = K.to_group()
    G = rg.C1
    t, inv = G.table, G.inverse
    e = rg.e.image
    conj = t[t[e[:, None], K.array[None, :]], inv[e][:, None]]
    lookup = np.full(G.order, -1, dtype=np.int64)
    lookup[K.array] = np.arange(K.order)
    act = GroupAction(rg.C0, Kg, lookup[conj])
    return CrossedModule(rg.c.compose(Ki), act)


def higgins_of_kernels(rg: ReflexiveGraph) -> Subgroup:
    return higgins_commutator(rg.C1, rg.Kd, rg.Kc)
