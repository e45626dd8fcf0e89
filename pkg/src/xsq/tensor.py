"""Non-abelian tensor product of two crossed modules over a common base.

The tensor is the group on symbols ``m (x) n`` with the two defining
relations

    (m m') (x) n = (^m m' (x) ^m n)(m (x) n)
    m (x) (n n') = (m (x) n)(^n m (x) ^n n'),

enumerated by coset enumeration. Generator ``m (x) n`` is presentation
generator ``m * |N| + n + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .config import DEFAULT
from .errors import NotCrossedModule, NotWellDefined, Overflow, StructureMapIllDefined, TooLarge
from .fpgroup import Presentation, WordEvaluator, group_from_cosets, coset_enumeration
from .groups import IDX, FiniteGroup, GroupHom, find_isomorphism
from .report import Report
from .xmod import (
    CrossedModule,
    GroupAction,
    action_witness,
    induced_mutual_actions,
    verify_crossed_module,
)


@dataclass
class CompatiblePair:
    mu: CrossedModule
    nu: CrossedModule
    m_on_n: GroupAction = field(init=False, repr=False)
    n_on_m: GroupAction = field(init=False, repr=False)

    def __post_init__(self):
        if self.mu.L is not self.nu.L:
            raise NotCrossedModule("crossed modules must share the base group")
        self.m_on_n, self.n_on_m = induced_mutual_actions(self.mu, self.nu)

    @property
    def M(self) -> FiniteGroup:
        return self.mu.M

    @property
    def N(self) -> FiniteGroup:
        return self.nu.M

    @property
    def L(self) -> FiniteGroup:
        return self.mu.L

    def check(self) -> Report:
        r = Report("compatible pair")
        r.extend(verify_crossed_module(self.mu), "mu.")
        r.extend(verify_crossed_module(self.nu), "nu.")
        return r

    def swapped(self) -> "CompatiblePair":
        return CompatiblePair(self.nu, self.mu)


def make_pair(mu: CrossedModule, nu: CrossedModule) -> CompatiblePair:
    p = CompatiblePair(mu, nu)
    rep = p.check()
    if not rep.ok:
        bad = rep.failures()[0]
        raise NotCrossedModule(f"{bad.name} fails", witness=bad.witness)
    return p


def _closed_generators(G: FiniteGroup) -> list:
    """Union of the conjugacy classes of a generating set of G, and the identity."""
    ids = G.conjugacy_class_ids
    classes = {int(ids[g]) for g in G.generators} | {int(ids[G.identity])}
    return [int(x) for x in np.flatnonzero(np.isin(ids, list(classes)))]


def _tensor_relators(pair: CompatiblePair, first_args, second_args) -> list:
    M, N = pair.M, pair.N
    nn = N.order
    mn, nm_ = pair.m_on_n.perms, pair.n_on_m.perms
    tM, tN = M.table, N.table

    def g(m, n):
        return int(m) * nn + int(n) + 1

    rels = []
    for m in range(M.order):
        for m2 in first_args:
            mm2 = tM[m, m2]
            cm2 = tM[mm2, M.inverse[m]]  # ^m m'
            for n in range(nn):
                rels.append([g(mm2, n), -g(m, n), -g(cm2, mn[m, n])])
    for m in range(M.order):
        for n in range(nn):
            for n2 in second_args:
                cn2 = tN[tN[n, n2], N.inverse[n]]  # ^n n'
                rels.append([g(m, tN[n, n2]), -g(nm_[n, m], cn2), -g(m, n)])
    return rels


def tensor_presentation(pair: CompatiblePair) -> Presentation:
    """The full presentation: one relator per (m, m', n) and per (m, n, n')."""
    M, N = pair.M, pair.N
    rels = _tensor_relators(pair, range(M.order), range(N.order))
    names = [f"{m}(x){n}" for m in range(M.order) for n in range(N.order)]
    return Presentation(M.order * N.order, rels, names)


def reduced_tensor_presentation(pair: CompatiblePair) -> Presentation:
    """Same group, with m' and n' restricted to conjugation-closed generating sets.

    If the first relation holds for all m, n and all m' in a generating set
    S closed under conjugation, induction on the length of m' as a word in S
    gives it for every m' (the step uses the relation at (^m m', ^m s, ^m n)).
    Likewise for the second relation.
    """
    M, N = pair.M, pair.N
    rels = _tensor_relators(pair, _closed_generators(M), _closed_generators(N))
    return Presentation(M.order * N.order, rels)


class TensorGroup:
    """M (x) N with its structure maps.

    ``pure[m, n]`` is the element ``m (x) n``; ``pi_M``, ``pi_N`` and ``lam``
    are the structure homs and ``l_action`` the diagonal action of L.
    """

    def __init__(self, pair: CompatiblePair, group: FiniteGroup, pure, evaluator: WordEvaluator,
                 pi_M: GroupHom, pi_N: GroupHom, lam: GroupHom, l_action: GroupAction):
        self.pair = pair
        self.group = group
        self.pure = np.asarray(pure, dtype=IDX)
        self.pure.setflags(write=False)
        self.evaluator = evaluator
        self.pi_M = pi_M
        self.pi_N = pi_N
        self.lam = lam
        self.l_action = l_action

    @property
    def order(self) -> int:
        return self.group.order

    def __repr__(self):
        return f"<TensorGroup |M|={self.pair.M.order} |N|={self.pair.N.order} order={self.order}>"

    def hom_from_pairing(self, P: FiniteGroup, h, check: bool = True) -> GroupHom:
        """The hom sending m (x) n to h[m, n]; NotWellDefined if a relation breaks."""
        return self.evaluator.hom_to(P, np.asarray(h).reshape(-1), check=check)

    def as_crossed_module(self) -> CrossedModule:
        return CrossedModule(self.lam, self.l_action)

    def crossed_square(self):
        from .squares import CrossedSquare

        p = self.pair
        return CrossedSquare(
            P=self.group, M=p.M, N=p.N, L=p.L,
            p_M=self.pi_M, p_N=self.pi_N, mu=p.mu.boundary, nu=p.nu.boundary,
            a_P=self.l_action, a_M=p.mu.action, a_N=p.nu.action, h=self.pure,
        )

    def verify(self) -> Report:
        """Exhaustive check of the defining relations and the structure-map identities."""
        p = self.pair
        M, N, L, T = p.M, p.N, p.L, self.group
        r = Report("tensor")
        ev = self.evaluator
        r.add("relations", not (bad := ev.cosets.relator_failures()), bad[:1] or None)
        pure = self.pure.astype(np.int64)
        mids = np.arange(M.order)[:, None]
        nids = np.arange(N.order)[None, :]
        nm = p.n_on_m.perms[nids, mids]  # [m, n] -> ^n m
        mn = p.m_on_n.perms[mids, nids]  # [m, n] -> ^m n
        want_m = M.table[mids, M.inverse[nm]]
        want_n = N.table[mn, N.inverse[nids]]
        bad = np.argwhere(self.pi_M.image[pure] != want_m)
        r.add("pi_M", not bad.size, tuple(bad[0]) if bad.size else None, "pi_M(m(x)n) = m ^n m^-1")
        bad = np.argwhere(self.pi_N.image[pure] != want_n)
        r.add("pi_N", not bad.size, tuple(bad[0]) if bad.size else None, "pi_N(m(x)n) = ^m n n^-1")
        lam_m = p.mu.boundary.image[self.pi_M.image]
        lam_n = p.nu.boundary.image[self.pi_N.image]
        ok = (lam_m == self.lam.image).all() and (lam_n == self.lam.image).all()
        r.add("lambda", ok, None if ok else int(np.flatnonzero((lam_m != self.lam.image) | (lam_n != self.lam.image))[0]))
        w = action_witness(L, T, self.l_action.perms)
        r.add("l_action", w is None, w)
        lm = p.mu.action.perms  # [l, m]
        ln = p.nu.action.perms
        lhs = self.l_action.perms[:, pure]  # [l, m, n]
        rhs = pure[lm[:, :, None], ln[:, None, :]]
        bad = np.argwhere(lhs != rhs)
        r.add("l_pure", not bad.size, tuple(bad[0]) if bad.size else None, "^l(m(x)n) = ^l m (x) ^l n")
        r.extend(verify_crossed_module(self.as_crossed_module()), "xmod.")
        return r


def _structure_hom(ev: WordEvaluator, target: FiniteGroup, images, label: str) -> GroupHom:
    try:
        return ev.hom_to(target, images, check=True)
    except NotWellDefined as exc:
        raise StructureMapIllDefined(f"{label} does not respect the tensor relations", witness=exc.witness) from exc


def tensor_group(pair: CompatiblePair, max_cosets: Optional[int] = None, order_bound: Optional[int] = None) -> TensorGroup:
    M, N, L = pair.M, pair.N, pair.L
    max_cosets = DEFAULT.max_cosets if max_cosets is None else int(max_cosets)
    bound = DEFAULT.order_bound if order_bound is None else int(order_bound)
    # a table beyond the order bound could not be stored anyway
    cap = min(max_cosets, bound)
    try:
        # enumerate the reduced presentation, verify against the full one
        ct = coset_enumeration(reduced_tensor_presentation(pair), cap, check=tensor_presentation(pair))
    except Overflow:
        if cap < max_cosets:
            raise TooLarge(f"tensor enumeration needs more than {bound} cosets (order bound)", witness=bound) from None
        raise
    T = group_from_cosets(ct, order_bound, name="MxN")
    ev = WordEvaluator(ct, T)
    nn = N.order
    pure = ct.table[0, 0::2].reshape(M.order, nn)  # generator columns
    mids = np.repeat(np.arange(M.order), nn)
    nids = np.tile(np.arange(nn), M.order)
    nm = pair.n_on_m.perms[nids, mids]
    mn = pair.m_on_n.perms[mids, nids]
    pi_M = _structure_hom(ev, M, M.table[mids, M.inverse[nm]], "pi_M")
    pi_N = _structure_hom(ev, N, N.table[mn, N.inverse[nids]], "pi_N")
    lam = GroupHom(T, L, pair.mu.boundary.image[pi_M.image])
    perms = np.empty((L.order, T.order), dtype=IDX)
    lm, ln = pair.mu.action.perms, pair.nu.action.perms
    pure64 = pure.astype(np.int64)
    for l in range(L.order):
        imgs = pure64[lm[l][mids], ln[l][nids]]
        perms[l] = _structure_hom(ev, T, imgs, f"action of {l}").image
    return TensorGroup(pair, T, pure, ev, pi_M, pi_N, lam, GroupAction(L, T, perms))


def tensor_of_morphisms(T: TensorGroup, T2: TensorGroup, f: GroupHom, g: GroupHom) -> GroupHom:
    """f (x) g: m (x) n -> f(m) (x) g(n). NotWellDefined if (f, g) is not a morphism of pairs."""
    imgs = T2.pure.astype(np.int64)[f.image[:, None], g.image[None, :]]
    return T.hom_from_pairing(T2.group, imgs)


def tensor_swap_isomorphism(T: TensorGroup, Ts: TensorGroup) -> GroupHom:
    """M (x) N -> N (x) M, m (x) n -> (n (x) m)^-1, for Ts the tensor of the swapped pair."""
    imgs = Ts.group.inverse[Ts.pure.T]
    return T.hom_from_pairing(Ts.group, imgs)


def tensor_isomorphic_to(T: TensorGroup, G: FiniteGroup, bound=None):
    return find_isomorphism(T.group, G, bound)


def check_generator_bound(pair: CompatiblePair, bound=None):
    bound = DEFAULT.generator_bound if bound is None else bound
    n = pair.M.order * pair.N.order
    if n > bound:
        raise TooLarge(f"tensor presentation needs {n} generators > bound {bound}", witness=n)
