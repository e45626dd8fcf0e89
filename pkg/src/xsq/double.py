"""Double reflexive graphs, double groupoids and cat^2-groups.

Corners are A (top left), B (top right), C (bottom left), D (bottom right)
with reflexive graphs

    top:    A => B   (d_U, c_U, e_U)
    left:   A => C   (d_L, c_L, e_L)
    right:  B => D   (d_R, c_R, e_R)
    bottom: C => D   (d_D, c_D, e_D)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .commutators import huq_commutator
from .errors import (
    AssociativityFailure,
    KernelNotNormalInQ,
    MalformedDoubleGraph,
    NotDoubleGroupoid,
    NotSurjective,
    SquareMismatch,
)
from .groups import (
    IDX,
    FiniteGroup,
    GroupHom,
    Subgroup,
    _check_bound,
    _group_from_trusted,
    _hom_witness,
    intersection,
    join,
    normal_closure,
    quotient_group,
)
from .report import Report
from .squares import CrossedSquare, WeakCrossedSquare
from .tensor import TensorGroup
from .xmod import (
    CrossedModule,
    GroupAction,
    ReflexiveGraph,
    is_groupoid,
    verify_crossed_module,
    xmod_to_reflexive_graph,
)

_SQUARES = (
    # (name, left side as maps applied right to left, right side)
    ("d_R d_U = d_D d_L", ("right.d", "top.d"), ("bottom.d", "left.d")),
    ("c_R d_U = d_D c_L", ("right.c", "top.d"), ("bottom.d", "left.c")),
    ("d_U e_L = e_R d_D", ("top.d", "left.e"), ("right.e", "bottom.d")),
    ("d_R c_U = c_D d_L", ("right.d", "top.c"), ("bottom.c", "left.d")),
    ("c_R c_U = c_D c_L", ("right.c", "top.c"), ("bottom.c", "left.c")),
    ("c_U e_L = e_R c_D", ("top.c", "left.e"), ("right.e", "bottom.c")),
    ("d_L e_U = e_D d_R", ("left.d", "top.e"), ("bottom.e", "right.d")),
    ("c_L e_U = e_D c_R", ("left.c", "top.e"), ("bottom.e", "right.c")),
    ("e_U e_R = e_L e_D", ("top.e", "right.e"), ("left.e", "bottom.e")),
)


@dataclass
class DoubleReflexiveGraph:
    top: ReflexiveGraph
    left: ReflexiveGraph
    right: ReflexiveGraph
    bottom: ReflexiveGraph

    def __post_init__(self):
        t, l, r, b = self.top, self.left, self.right, self.bottom
        if not (t.C1 is l.C1 and t.C0 is r.C1 and l.C0 is b.C1 and r.C0 is b.C0):
            raise MalformedDoubleGraph("corner groups of the four graphs do not match")
        for name, g in (("top", t), ("left", l), ("right", r), ("bottom", b)):
            for k in ("d", "c", "e"):
                f = getattr(g, k)
                w = _hom_witness(f.domain, f.codomain, f.image)
                if w is not None:
                    raise MalformedDoubleGraph(f"{k} of the {name} graph is not a homomorphism", witness=w)
        w = self.square_witness()
        if w is not None:
            raise MalformedDoubleGraph(f"square {w[0]} does not commute", witness=w)

    @property
    def A(self) -> FiniteGroup:
        return self.top.C1

    @property
    def B(self) -> FiniteGroup:
        return self.top.C0

    @property
    def C(self) -> FiniteGroup:
        return self.left.C0

    @property
    def D(self) -> FiniteGroup:
        return self.right.C0

    def _map(self, path: str) -> np.ndarray:
        g, k = path.split(".")
        return getattr(getattr(self, g), k).image

    def square_witness(self):
        for name, (f1, f2), (g1, g2) in _SQUARES:
            lhs = self._map(f1)[self._map(f2)]
            rhs = self._map(g1)[self._map(g2)]
            bad = np.flatnonzero(lhs != rhs)
            if bad.size:
                return name, int(bad[0])
        return None

    def groupoid_report(self) -> Report:
        r = Report("double groupoid")
        for name in ("top", "left", "right", "bottom"):
            c = is_groupoid(getattr(self, name))
            r.add(name, c.ok, c.witness, "[K_d, K_c] = 1")
        return r

    def is_double_groupoid(self) -> bool:
        return self.groupoid_report().ok


class DoubleGroupoid(DoubleReflexiveGraph):
    """A double reflexive graph whose four graphs are groupoids."""

    def __post_init__(self):
        super().__post_init__()
        rep = self.groupoid_report()
        if not rep.ok:
            bad = rep.failures()[0]
            raise NotDoubleGroupoid(f"{bad.name} graph is not a groupoid", witness=bad.witness)


def _graph(C1, C0, d, c, e) -> ReflexiveGraph:
    return ReflexiveGraph(C1, C0, GroupHom(C1, C0, d), GroupHom(C1, C0, c), GroupHom(C0, C1, e))


# ---------------------------------------------------------------------------
# box construction


def _equivalence_relation(L: FiniteGroup, S: Subgroup):
    """{(x, y): x y^-1 in S} as a group, with d = y, c = x, e(x) = (x, x)."""
    t, inv = L.table, L.inverse
    # (x, y) with y = s^-1 x
    s = S.array
    x = np.repeat(np.arange(L.order), s.size)
    y = t[inv[np.tile(s, L.order)], x]
    code = x.astype(np.int64) * L.order + y
    order = np.argsort(code)
    x, y, code = x[order], y[order], code[order]
    tab = np.searchsorted(code, t[x[:, None], x[None, :]].astype(np.int64) * L.order + t[y[:, None], y[None, :]])
    R = _group_from_trusted(tab, int(np.searchsorted(code, L.identity * L.order + L.identity)))
    e = np.searchsorted(code, np.arange(L.order, dtype=np.int64) * (L.order + 1))
    return _graph(R, L, y, x, e), x, y


def box_double_groupoid(L: FiniteGroup, M_sub: Subgroup, N_sub: Subgroup, order_bound=None) -> DoubleGroupoid:
    """R box S for the equivalence relations of M and N.

    A = {(x,y,z,w): xy^-1, zw^-1 in M and xz^-1, yw^-1 in N}, with
    d_U = (z,w), c_U = (x,y), d_L = (y,w), c_L = (x,z).
    """
    M_sub.require_normal()
    N_sub.require_normal()
    n = L.order
    MN = intersection(M_sub, N_sub)
    _check_bound(n * M_sub.order * N_sub.order * MN.order, order_bound)
    t, inv = L.table, L.inverse
    right, rx, ry = _equivalence_relation(L, M_sub)
    bottom, sx, sy = _equivalence_relation(L, N_sub)
    R, S = right.C1, bottom.C1
    # enumerate (x, y, z) with x y^-1 in M, x z^-1 in N, then w with z w^-1 in M and y w^-1 in N
    X = np.repeat(rx, N_sub.order)
    Y = np.repeat(ry, N_sub.order)
    Z = t[inv[np.tile(N_sub.array, R.order)], X]
    W = np.arange(n)
    ok = M_sub.mask[t[Z[:, None], inv[W][None, :]]] & N_sub.mask[t[Y[:, None], inv[W][None, :]]]
    i, j = np.nonzero(ok)
    x, y, z, w = X[i], Y[i], Z[i], W[j]
    code = ((x.astype(np.int64) * n + y) * n + z) * n + w
    order = np.argsort(code)
    x, y, z, w, code = x[order], y[order], z[order], w[order], code[order]

    def enc(a, b, c, d):
        return ((a.astype(np.int64) * n + b) * n + c) * n + d

    tab = np.searchsorted(
        code,
        enc(t[x[:, None], x[None, :]], t[y[:, None], y[None, :]], t[z[:, None], z[None, :]], t[w[:, None], w[None, :]]),
    )
    e = L.identity
    A = _group_from_trusted(tab, int(np.searchsorted(code, enc(*(np.array([e]),) * 4)[0])), name="RboxS")

    def rel_index(rxs, rys, a, b):
        rc = rxs.astype(np.int64) * n + rys
        return np.searchsorted(rc, a.astype(np.int64) * n + b)

    top = _graph(A, R, rel_index(rx, ry, z, w), rel_index(rx, ry, x, y),
                 np.searchsorted(code, enc(rx, ry, rx, ry)))
    left = _graph(A, S, rel_index(sx, sy, y, w), rel_index(sx, sy, x, z),
                  np.searchsorted(code, enc(sx, sx, sy, sy)))
    return DoubleGroupoid(top, left, right, bottom)


# ---------------------------------------------------------------------------
# normalisation


def _restrict(f: GroupHom, dom: Subgroup, cod: Subgroup, label: str):
    img = f.image[dom.array]
    if not cod.mask[img].all():
        raise NotDoubleGroupoid(f"{label} does not land in the expected kernel")
    lookup = np.full(cod.parent.order, -1, dtype=np.int64)
    lookup[cod.array] = np.arange(cod.order)
    return lookup[img]


def _conj_action(G: FiniteGroup, e: np.ndarray, K: Subgroup, acting: FiniteGroup, acted: FiniteGroup) -> GroupAction:
    t, inv = G.table, G.inverse
    conj = t[t[e[:, None], K.array[None, :]], inv[e][:, None]]
    lookup = np.full(G.order, -1, dtype=np.int64)
    lookup[K.array] = np.arange(K.order)
    return GroupAction(acting, acted, lookup[conj])


def normalize_double_groupoid(dg: DoubleReflexiveGraph) -> CrossedSquare:
    """P = K_{d_U} meet K_{d_L}, M = K_{d_R}, N = K_{d_D}, h(m,n) = [e_U m, e_L n]."""
    rep = dg.groupoid_report()
    if not rep.ok:
        bad = rep.failures()[0]
        raise NotDoubleGroupoid(f"{bad.name} graph is not a groupoid", witness=bad.witness)
    A, D = dg.A, dg.D
    P_sub = intersection(dg.top.d.kernel(), dg.left.d.kernel())
    M_sub = dg.right.d.kernel()
    N_sub = dg.bottom.d.kernel()
    Pg, _ = P_sub.to_group()
    Mg, _ = M_sub.to_group()
    Ng, _ = N_sub.to_group()
    p_M = GroupHom(Pg, Mg, _restrict(dg.top.c, P_sub, M_sub, "c_U"))
    p_N = GroupHom(Pg, Ng, _restrict(dg.left.c, P_sub, N_sub, "c_L"))
    mu = GroupHom(Mg, D, dg.right.c.image[M_sub.array])
    nu = GroupHom(Ng, D, dg.bottom.c.image[N_sub.array])
    e_diag = dg.left.e.image[dg.bottom.e.image]
    a_P = _conj_action(A, e_diag, P_sub, D, Pg)
    a_M = _conj_action(dg.B, dg.right.e.image, M_sub, D, Mg)
    a_N = _conj_action(dg.C, dg.bottom.e.image, N_sub, D, Ng)
    t, inv = A.table, A.inverse
    em = dg.top.e.image[M_sub.array]
    en = dg.left.e.image[N_sub.array]
    comm = t[t[em[:, None], en[None, :]], t[inv[em][:, None], inv[en][None, :]]]
    if not P_sub.mask[comm].all():
        raise NotDoubleGroupoid("commutators [e_U m, e_L n] leave P")
    lookup = np.full(A.order, -1, dtype=np.int64)
    lookup[P_sub.array] = np.arange(P_sub.order)
    cs = CrossedSquare(Pg, Mg, Ng, D, p_M, p_N, mu, nu, a_P, a_M, a_N, lookup[comm])
    cs.P_subgroup = P_sub
    return cs


def diagonal_xmod_report(cs: CrossedSquare) -> Report:
    """(P -> D, xi) as a crossed module."""
    return verify_crossed_module(CrossedModule(cs.lam, cs.a_P))


# ---------------------------------------------------------------------------
# reflection


def _quotient_graph(rg: ReflexiveGraph, q_top, q_bottom):
    """Graph induced on quotients C1/q_top => C0/q_bottom (maps must descend).

    ``None`` keeps that corner unchanged.
    """
    Q1, p1, reps1 = q_top if q_top is not None else _unchanged(rg.C1)
    Q0, p0, reps0 = q_bottom if q_bottom is not None else _unchanged(rg.C0)
    d = p0.image[rg.d.image[reps1]]
    c = p0.image[rg.c.image[reps1]]
    e = p1.image[rg.e.image[reps0]]
    for name, f, via in (("d", rg.d, d), ("c", rg.c, c)):
        if not (p0.image[f.image] == via[p1.image]).all():
            raise MalformedDoubleGraph(f"{name} does not descend to the quotient")
    return _graph(Q1, Q0, d, c, e)


def _unchanged(G: FiniteGroup):
    ident = np.arange(G.order)
    return G, GroupHom(G, G, ident), ident


def reflect_double_rg(drg: DoubleReflexiveGraph):
    """Reflect into double groupoids. Returns (DoubleGroupoid, quotient hom A -> A').

    The right and bottom graphs are reflected first; then A is divided by
    the join of the Huq commutators of the top and left kernels.
    """
    qB = quotient_group(drg.B, huq_commutator(drg.B, drg.right.d.kernel(), drg.right.c.kernel()))
    qC = quotient_group(drg.C, huq_commutator(drg.C, drg.bottom.d.kernel(), drg.bottom.c.kernel()))
    right = _quotient_graph(drg.right, qB, None)
    bottom = _quotient_graph(drg.bottom, qC, None)
    A = drg.A
    # kernels of the composites A -> B' and A -> C'
    dU = qB.projection.image[drg.top.d.image]
    cU = qB.projection.image[drg.top.c.image]
    dL = qC.projection.image[drg.left.d.image]
    cL = qC.projection.image[drg.left.c.image]
    ker = lambda img, Q: Subgroup(A, tuple(np.flatnonzero(img == Q.identity).tolist()))  # noqa: E731
    N1 = huq_commutator(A, ker(dU, qB.group), ker(cU, qB.group))
    N2 = huq_commutator(A, ker(dL, qC.group), ker(cL, qC.group))
    NA = join(N1, N2)
    qA = quotient_group(A, NA)
    top = _quotient_graph(drg.top, qA, qB)
    left = _quotient_graph(drg.left, qA, qC)
    out = DoubleGroupoid(top, left, right, bottom)
    out.partial_kernels = (N1, N2)
    return out, qA.projection


def join_of_kernels_report(A: FiniteGroup, N1: Subgroup, N2: Subgroup) -> Report:
    """Kernel of the diagonal of the pushout of A/N1 <- A -> A/N2 equals N1 v N2."""
    q1 = quotient_group(A, N1)
    # pushout of the two quotients: A/N1 divided by the image of N2
    img = normal_closure(q1.group, np.unique(q1.projection.image[N2.array]).tolist())
    q12 = quotient_group(q1.group, img)
    diag = q12.projection.compose(q1.projection)
    r = Report("join of kernels")
    r.add("kernel", diag.kernel() == join(N1, N2), None,
          f"|K_h| = {diag.kernel().order}, |N1 v N2| = {join(N1, N2).order}")
    return r


# ---------------------------------------------------------------------------
# cat^2-group of a tensor


def cat2_multiplication(T: TensorGroup, rows=None) -> np.ndarray:
    """Product table on tuples (t,m,n,l) at ((t|M|+m)|N|+n)|L|+l.

    (t,m,n,l)(t',m',n',l') = (t . ^m ^n ^l t' . ^m (^l m' (x) n)^-1, m ^l m', n ^l n', l l')
    """
    p = T.pair
    M, N, L, G = p.M, p.N, p.L, T.group
    nm, nn, nl = M.order, N.order, L.order
    size = G.order * nm * nn * nl
    idx = np.arange(size)
    tt, rest = np.divmod(idx, nm * nn * nl)
    mm, rest = np.divmod(rest, nn * nl)
    nn_, ll = np.divmod(rest, nl)
    aT = T.l_action.perms
    aM, aN = p.mu.action.perms, p.nu.action.perms
    mu, nu = p.mu.boundary.image, p.nu.boundary.image
    tT, iT = G.table, G.inverse
    pure = T.pure
    rows = idx if rows is None else np.asarray(rows)
    t, m, n, l = tt[rows][:, None], mm[rows][:, None], nn_[rows][:, None], ll[rows][:, None]
    t2, m2, n2, l2 = tt[None, :], mm[None, :], nn_[None, :], ll[None, :]
    mu_m = mu[m]
    lm2 = aM[l, m2]
    moved = aT[mu_m, aT[nu[n], aT[l, t2]]]
    tail = aT[mu_m, iT[pure[lm2, n]]]
    t_out = tT[tT[t, moved], tail]
    m_out = M.table[m, lm2]
    n_out = N.table[n, aN[l, n2]]
    l_out = L.table[l, l2]
    return ((t_out.astype(np.int64) * nm + m_out) * nn + n_out) * nl + l_out


def exhaustive_associativity_witness(table: np.ndarray, chunk: int = 1 << 22):
    """(x, y, z) with (xy)z != x(yz), or None. Every triple is checked."""
    n = table.shape[0]
    step = max(1, chunk // max(1, n * n))
    for x0 in range(0, n, step):
        xs = np.arange(x0, min(n, x0 + step))
        lhs = table[table[xs]]  # [(x,y), z] -> (xy)z
        rhs = table[xs][:, table]  # x(yz)
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            i, y, z = bad[0]
            return int(xs[i]), int(y), int(z)
    return None


def build_cat2_group(T: TensorGroup, order_bound=None, check_associativity: bool = True) -> DoubleGroupoid:
    """The cat^2-group of M(x)N as a double groupoid with corners A, M|xL, N|xL, L."""
    p = T.pair
    M, N, L, G = p.M, p.N, p.L, T.group
    nm, nn, nl = M.order, N.order, L.order
    size = G.order * nm * nn * nl
    _check_bound(size, order_bound)
    table = cat2_multiplication(T).astype(IDX)
    if check_associativity:
        w = exhaustive_associativity_witness(table)
        if w is not None:
            raise AssociativityFailure("swap-rule product is not associative", witness=w)
    ident = ((G.identity * nm + M.identity) * nn + N.identity) * nl + L.identity
    A = _group_from_trusted(table, ident, name="Q")
    if not ((table[ident] == np.arange(size)).all() and (table[:, ident] == np.arange(size)).all()):
        raise AssociativityFailure("identity tuple is not neutral", witness=ident)

    right = xmod_to_reflexive_graph(p.mu)  # B = M |x L at m|L|+l
    bottom = xmod_to_reflexive_graph(p.nu)
    B, C = right.C1, bottom.C1
    idx = np.arange(size)
    t, rest = np.divmod(idx, nm * nn * nl)
    m, rest = np.divmod(rest, nn * nl)
    n, l = np.divmod(rest, nl)
    mu, nu = p.mu.boundary.image, p.nu.boundary.image
    aN = p.nu.action.perms
    d_U = m * nl + l
    c_U = M.table[T.pi_M.image[t], m] * nl + L.table[nu[n], l]
    d_L = n * nl + l
    c_L = N.table[T.pi_N.image[t], aN[mu[m], n]] * nl + L.table[mu[m], l]
    bm, bl = np.divmod(np.arange(B.order), nl)
    e_U = ((G.identity * nm + bm) * nn + N.identity) * nl + bl
    cn, cl = np.divmod(np.arange(C.order), nl)
    e_L = ((G.identity * nm + M.identity) * nn + cn) * nl + cl
    top = _graph(A, B, d_U, c_U, e_U)
    left = _graph(A, C, d_L, c_L, e_L)
    dg = DoubleGroupoid(top, left, right, bottom)
    dg.tensor = T
    return dg


def tensor_embedding(dg: DoubleReflexiveGraph, T: TensorGroup) -> np.ndarray:
    """gamma(t) = (t, 1, 1, 1) as indices of A."""
    p = T.pair
    nm, nn, nl = p.M.order, p.N.order, p.L.order
    return ((np.arange(T.order) * nm + p.M.identity) * nn + p.N.identity) * nl + p.L.identity


# ---------------------------------------------------------------------------
# weak squares


def promote_weak(w: WeakCrossedSquare, Q: DoubleGroupoid = None, order_bound=None):
    """Q' = Q / normal closure of gamma(ker h), for h onto P.

    Returns (DoubleGroupoid on Q', projection Q -> Q').
    """
    h = w.h_hom
    if not h.is_surjective():
        missing = np.setdiff1d(np.arange(w.P.order), h.image)
        raise NotSurjective("h is not onto P", witness=int(missing[0]))
    T = w.tensor
    Q = build_cat2_group(T, order_bound) if Q is None else Q
    A = Q.A
    gamma = tensor_embedding(Q, T)
    K = h.kernel()
    closure = normal_closure(A, gamma[K.array].tolist())
    inside = np.flatnonzero(closure.mask[gamma])
    if not np.array_equal(inside, K.array.astype(inside.dtype)):
        extra = np.setdiff1d(inside, K.array)
        raise KernelNotNormalInQ("normal closure of gamma(ker h) meets M(x)N in more than ker h",
                                 witness=int(extra[0]))
    qA = quotient_group(A, closure)
    top = _quotient_graph(Q.top, qA, None)
    left = _quotient_graph(Q.left, qA, None)
    return DoubleGroupoid(top, left, Q.right, Q.bottom), qA.projection


def quotient_weak_square(T: TensorGroup, Z: Subgroup) -> WeakCrossedSquare:
    """The weak square with P = (M(x)N)/Z and h the projection.

    Z must be normal, L-invariant and inside ker pi_M meet ker pi_N.
    """
    G = T.group
    if Z.parent is not G:
        raise SquareMismatch("Z must be a subgroup of the tensor")
    Z.require_normal()
    if not (T.pi_M.image[Z.array] == T.pair.M.identity).all() or not (T.pi_N.image[Z.array] == T.pair.N.identity).all():
        raise SquareMismatch("Z is not inside ker pi_M meet ker pi_N")
    if not Z.mask[T.l_action.perms[:, Z.array]].all():
        raise SquareMismatch("Z is not L-invariant")
    q = quotient_group(G, Z)
    P, proj, reps = q
    p = T.pair
    p_M = GroupHom(P, p.M, T.pi_M.image[reps])
    p_N = GroupHom(P, p.N, T.pi_N.image[reps])
    a_P = GroupAction(p.L, P, proj.image[T.l_action.perms[:, reps]])
    return WeakCrossedSquare(P, p.M, p.N, p.L, p_M, p_N, p.mu.boundary, p.nu.boundary,
                             a_P, p.mu.action, p.nu.action, T, proj)


def is_double_groupoid_morphism(a: DoubleReflexiveGraph, b: DoubleReflexiveGraph, fA, fB, fC, fD) -> bool:
    """Each of the twelve structure maps commutes with the corner maps."""
    pairs = [
        (a.top, b.top, fA, fB), (a.left, b.left, fA, fC),
        (a.right, b.right, fB, fD), (a.bottom, b.bottom, fC, fD),
    ]
    for ga, gb, f1, f0 in pairs:
        if not (gb.d.image[f1] == f0[ga.d.image]).all():
            return False
        if not (gb.c.image[f1] == f0[ga.c.image]).all():
            return False
        if not (gb.e.image[f0] == f1[ga.e.image]).all():
            return False
    return True


__all__ = [
    "DoubleReflexiveGraph", "DoubleGroupoid", "box_double_groupoid", "normalize_double_groupoid",
    "diagonal_xmod_report", "reflect_double_rg", "join_of_kernels_report", "build_cat2_group",
    "cat2_multiplication", "exhaustive_associativity_witness", "tensor_embedding", "promote_weak",
    "quotient_weak_square", "is_double_groupoid_morphism",
]
