"""Finite groups stored as Cayley tables.

Elements are indices ``0..order-1``; ``table[i, j]`` is the index of ``i*j``.
The identity need not be element 0 in raw input.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

import numpy as np

from .config import DEFAULT
from .errors import (
    MalformedTable,
    NoIdentity,
    NoInverse,
    NotAbelian,
    NotAssociative,
    NotHomomorphism,
    NotNormal,
    NotSubgroup,
    SearchBudgetExceeded,
    TooLarge,
)

IDX = np.int32


class FiniteGroup:
    """A finite group given by its multiplication table."""

    def __init__(self, table, identity: int, inverse, name: Optional[str] = None):
        self.table = np.ascontiguousarray(table, dtype=IDX)
        self.table.setflags(write=False)
        self.identity = int(identity)
        self.inverse = np.asarray(inverse, dtype=IDX)
        self.inverse.setflags(write=False)
        self.name = name

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self):
        return self.order

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<FiniteGroup{label} of order {self.order}>"

    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def conj(self, g: int, x: int) -> int:
        """g x g^-1"""
        t = self.table
        return int(t[t[g, x], self.inverse[g]])

    def comm(self, a: int, b: int) -> int:
        """[a, b] = a b a^-1 b^-1"""
        t, inv = self.table, self.inverse
        return int(t[t[a, b], t[inv[a], inv[b]]])

    def prod(self, elems: Iterable[int]) -> int:
        x = self.identity
        for e in elems:
            x = self.table[x, e]
        return int(x)

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result, base = self.identity, int(a)
        while k:
            if k & 1:
                result = int(self.table[result, base])
            base = int(self.table[base, base])
            k >>= 1
        return result

    def power_map(self, k: int) -> np.ndarray:
        """Vector of x**k for every element x (k >= 0)."""
        idx = np.arange(self.order, dtype=IDX)
        result = np.full(self.order, self.identity, dtype=IDX)
        base = idx
        while k:
            if k & 1:
                result = self.table[result, base]
            base = self.table[base, base]
            k >>= 1
        return result

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        cur = np.arange(n, dtype=IDX)
        k = 1
        idx = np.arange(n, dtype=IDX)
        while True:
            hit = (cur == self.identity) & (orders == 0)
            orders[hit] = k
            if orders.all():
                return orders
            cur = self.table[cur, idx]
            k += 1

    def order_histogram(self) -> dict:
        return dict(sorted(Counter(self.element_orders.tolist()).items()))

    @cached_property
    def abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def is_abelian(self) -> bool:
        return self.abelian

    @cached_property
    def generators(self) -> tuple:
        """A small generating sequence, chosen greedily by decreasing element order."""
        order = np.argsort(-self.element_orders, kind="stable")
        gens: list[int] = []
        mask = np.zeros(self.order, dtype=bool)
        mask[self.identity] = True
        for x in order:
            if mask.all():
                break
            if not mask[x]:
                gens.append(int(x))
                mask = _closure_mask(self.table, self.identity, gens)
        return tuple(gens)

    @cached_property
    def conjugacy_class_ids(self) -> np.ndarray:
        labels = np.arange(self.order, dtype=np.int64)
        t, inv = self.table, self.inverse
        conj_maps = [t[t[g, :], inv[g]] for g in self.generators]
        changed = True
        while changed:
            changed = False
            for cm in conj_maps:
                new = np.minimum(labels, labels[cm])
                if (new != labels).any():
                    labels, changed = new, True
        return labels

    def class_size_multiset(self) -> tuple:
        sizes = Counter(self.conjugacy_class_ids.tolist())
        return tuple(sorted(sizes.values()))

    def element_class_sizes(self) -> np.ndarray:
        ids = self.conjugacy_class_ids
        counts = np.bincount(ids, minlength=self.order)
        return counts[ids]

    def full(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    def trivial(self) -> "Subgroup":
        return Subgroup(self, (self.identity,))

    def subgroup(self, gens: Iterable[int]) -> "Subgroup":
        return subgroup_closure(self, gens)


def _closure_mask(table, identity, gens) -> np.ndarray:
    n = table.shape[0]
    mask = np.zeros(n, dtype=bool)
    mask[identity] = True
    frontier = np.array([identity], dtype=IDX)
    gens = np.asarray(list(gens), dtype=IDX)
    if gens.size == 0:
        return mask
    while frontier.size:
        nxt = table[frontier][:, gens].ravel()
        nxt = np.unique(nxt)
        nxt = nxt[~mask[nxt]]
        mask[nxt] = True
        frontier = nxt
    return mask


# ---------------------------------------------------------------------------
# construction and validation


def _find_light_witness(table, gens):
    """Light's associativity test: (xy)g == x(yg) for generators g suffices."""
    for g in gens:
        lhs = table[table, g]  # (xy)g
        rhs = table[:, table[:, g]]  # x(yg)
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            x, y = bad[0]
            return int(x), int(y), int(g)
    return None


def build_group(table, identity_hint: Optional[int] = None, name: Optional[str] = None) -> FiniteGroup:
    """Validate a raw Cayley table and return a FiniteGroup.

    The identity and inverses are discovered, never trusted.
    """
    try:
        arr = np.asarray(table)
    except Exception as exc:  # ragged input
        raise MalformedTable(f"cannot read table: {exc}") from exc
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise MalformedTable(f"table must be a non-empty square array, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        raise MalformedTable("table entries must be integers")
    n = arr.shape[0]
    if arr.min() < 0 or arr.max() >= n:
        bad = np.argwhere((arr < 0) | (arr >= n))[0]
        raise MalformedTable("entry out of range", witness=tuple(int(v) for v in bad))
    arr = arr.astype(IDX)
    idx = np.arange(n)

    candidates = [identity_hint] if identity_hint is not None else []
    candidates += [int(e) for e in np.flatnonzero((arr == idx[None, :]).all(axis=1))]
    identity = None
    for e in candidates:
        if 0 <= e < n and (arr[e] == idx).all() and (arr[:, e] == idx).all():
            identity = int(e)
            break
    if identity is None:
        raise NoIdentity("no two-sided identity element")

    hits = arr == identity
    inverse = np.full(n, -1, dtype=IDX)
    for i in range(n):
        row = np.flatnonzero(hits[i])
        js = [int(j) for j in row if arr[j, i] == identity]
        if not js:
            raise NoInverse(f"element {i} has no inverse", witness=i)
        inverse[i] = js[0]

    gens = _generating_set(arr, identity)
    w = _find_light_witness(arr, gens)
    if w is not None:
        raise NotAssociative(f"(x*y)*z != x*(y*z) for {w}", witness=w)
    return FiniteGroup(arr, identity, inverse, name=name)


def _generating_set(table, identity) -> list:
    n = table.shape[0]
    gens: list[int] = []
    mask = np.zeros(n, dtype=bool)
    mask[identity] = True
    for x in range(n):
        if mask.all():
            break
        if not mask[x]:
            gens.append(x)
            mask = _closure_mask(table, identity, gens)
    return gens


def _group_from_trusted(table, identity=0, name=None) -> FiniteGroup:
    """Wrap a table known to be a group (e.g. built from a permutation action)."""
    table = np.asarray(table, dtype=IDX)
    n = table.shape[0]
    rows, cols = np.nonzero(table == identity)
    inverse = np.empty(n, dtype=IDX)
    inverse[rows] = cols
    return FiniteGroup(table, identity, inverse, name=name)


def _check_bound(order, bound):
    bound = DEFAULT.order_bound if bound is None else bound
    if order > bound:
        raise TooLarge(f"group order {order} exceeds bound {bound}", witness=order)


def cyclic(n: int) -> FiniteGroup:
    idx = np.arange(n)
    return _group_from_trusted((idx[:, None] + idx[None, :]) % n, 0, name=f"C{n}")


def abelian_from_invariants(factors: Sequence[int], order_bound=None, name=None) -> FiniteGroup:
    """Product of cyclic groups, mixed-radix indexing (last factor fastest)."""
    factors = [int(d) for d in factors]
    n = math.prod(factors)
    _check_bound(n, order_bound)
    table = np.zeros((1, 1), dtype=IDX)
    for d in factors:  # direct product with C_d, new factor fastest
        c = (np.arange(d)[:, None] + np.arange(d)[None, :]) % d
        m = table.shape[0]
        table = (table[:, None, :, None] * d + c[None, :, None, :].astype(IDX)).reshape(m * d, m * d)
    label = name or ("x".join(f"C{d}" for d in factors) if factors else "1")
    return _group_from_trusted(table, 0, name=label)


def _perm_group(perms: list, name) -> FiniteGroup:
    index = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    table = np.empty((n, n), dtype=IDX)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            table[i, j] = index[tuple(p[k] for k in q)]  # (p*q)(k) = p(q(k))
    ident = index[tuple(range(len(perms[0])))]
    return _group_from_trusted(table, ident, name=name)


def standard_group(family: str, n: Optional[int] = None, order_bound: Optional[int] = None) -> FiniteGroup:
    """Named small groups.

    Indexing conventions: cyclic i <-> residue i; dihedral n (order 2n) has
    rotations r^k at 0..n-1 and reflections r^k s at n..2n-1; symmetric n uses
    lexicographic permutations of 0..n-1 with (pq)(k) = p(q(k)); quaternion8
    is 1, i, j, k, -1, -i, -j, -k; klein is C2 x C2 with xor product.
    """
    fam = family.lower()
    if fam in ("trivial",):
        return cyclic(1)._renamed("1")
    if fam in ("klein", "v4"):
        t = np.array([[a ^ b for b in range(4)] for a in range(4)])
        return _group_from_trusted(t, 0, name="V4")
    if fam in ("quaternion8", "q8", "quaternion"):
        return _quaternion8()
    if n is None or n < 1:
        raise ValueError(f"{family} requires n >= 1")
    if fam in ("cyclic", "c"):
        _check_bound(n, order_bound)
        return cyclic(n)
    if fam in ("dihedral", "d"):
        _check_bound(2 * n, order_bound)
        return _dihedral(n)
    if fam in ("symmetric", "s"):
        _check_bound(math.factorial(n), order_bound if order_bound is not None else DEFAULT.symmetric_bound)
        perms = list(itertools.permutations(range(n)))
        return _perm_group(perms, f"S{n}")
    raise ValueError(f"unknown group family {family!r}")


def parse_standard(spec) -> FiniteGroup:
    """Accept 'cyclic 4', ['dihedral', 4], {'family': 'klein'} and similar."""
    if isinstance(spec, str):
        parts = spec.split()
        fam, n = parts[0], (int(parts[1]) if len(parts) > 1 else None)
    elif isinstance(spec, dict):
        fam, n = spec["family"], spec.get("n")
    else:
        fam, n = spec[0], (spec[1] if len(spec) > 1 else None)
    return standard_group(fam, n)


def _dihedral(n: int) -> FiniteGroup:
    size = 2 * n
    table = np.empty((size, size), dtype=IDX)
    # element index e <-> r^a s^f with a = e mod n, f = e // n
    for x in range(size):
        a, f = x % n, x // n
        for y in range(size):
            b, g = y % n, y // n
            c = (a + (b if f == 0 else -b)) % n
            table[x, y] = c + n * ((f + g) % 2)
    return _group_from_trusted(table, 0, name=f"D{n}")


def _quaternion8() -> FiniteGroup:
    # units 1,i,j,k with signs; index = unit + 4*(sign negative)
    unit_mul = {
        (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
        (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
        (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
        (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
    }
    table = np.empty((8, 8), dtype=IDX)
    for x in range(8):
        for y in range(8):
            u, s = unit_mul[(x % 4, y % 4)]
            sign = s * (-1 if x >= 4 else 1) * (-1 if y >= 4 else 1)
            table[x, y] = u + (4 if sign < 0 else 0)
    return _group_from_trusted(table, 0, name="Q8")


def _renamed(self, name):
    return FiniteGroup(self.table, self.identity, self.inverse, name=name)


FiniteGroup._renamed = _renamed


# ---------------------------------------------------------------------------
# subgroups


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(sorted(int(e) for e in self.elements)))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return bool(self.mask[int(x)])

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and other.parent is self.parent
            and other.elements == self.elements
        )

    def __hash__(self):
        return hash((id(self.parent), self.elements))

    def __repr__(self):
        return f"<Subgroup of order {self.order} in {self.parent!r}>"

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.elements)] = True
        return m

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.elements, dtype=IDX)

    def is_trivial(self) -> bool:
        return self.order == 1

    def issubset(self, other: "Subgroup") -> bool:
        return bool(other.mask[self.array].all())

    def normality_witness(self):
        """(g, x) with g x g^-1 outside the subgroup, or None."""
        G = self.parent
        t, inv = G.table, G.inverse
        for g in G.generators:
            conj = t[t[g, self.array], inv[g]]
            bad = np.flatnonzero(~self.mask[conj])
            if bad.size:
                return int(g), int(self.array[bad[0]])
        return None

    def is_normal(self) -> bool:
        return self.normality_witness() is None

    def require_normal(self):
        w = self.normality_witness()
        if w is not None:
            raise NotNormal("subgroup is not normal", witness={"g": w[0], "x": w[1]})

    @cached_property
    def _as_group(self):
        elems = self.array
        pos = np.full(self.parent.order, -1, dtype=np.int64)
        pos[elems] = np.arange(len(elems))
        sub_table = pos[self.parent.table[np.ix_(elems, elems)]]
        ident = int(pos[self.parent.identity])
        group = _group_from_trusted(sub_table, ident)
        incl = GroupHom(group, self.parent, elems.copy())
        return group, incl, pos

    def to_group(self):
        """(FiniteGroup, inclusion hom). Elements are relabelled in sorted order."""
        g, incl, _ = self._as_group
        return g, incl

    def index_of(self, x: int) -> int:
        """Position of parent element x in the relabelled subgroup."""
        return int(self._as_group[2][x])

    def check(self):
        G = self.parent
        if not self.mask[G.identity]:
            raise NotSubgroup("missing identity")
        prods = G.table[np.ix_(self.array, self.array)]
        if not self.mask[prods].all() or not self.mask[G.inverse[self.array]].all():
            raise NotSubgroup("not closed")
        return self


def subgroup_closure(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    gens = [int(g) for g in gens]
    for g in gens:
        if not 0 <= g < G.order:
            raise IndexError(f"element {g} out of range")
    mask = _closure_mask(G.table, G.identity, gens)
    return Subgroup(G, tuple(np.flatnonzero(mask).tolist()))


def normal_closure(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    gens = sorted({int(g) for g in gens})
    t, inv = G.table, G.inverse
    mask = _closure_mask(t, G.identity, gens)
    while True:
        elems = np.flatnonzero(mask)
        new = set()
        for g in G.generators:
            conj = t[t[g, elems], inv[g]]
            out = conj[~mask[conj]]
            if out.size:
                new.update(int(v) for v in out[:1])
        if not new:
            return Subgroup(G, tuple(elems.tolist()))
        gens = gens + sorted(new)
        mask = _closure_mask(t, G.identity, gens)


def join(*subgroups: Subgroup) -> Subgroup:
    G = subgroups[0].parent
    gens = set()
    for s in subgroups:
        gens.update(s.elements)
    return subgroup_closure(G, gens)


def intersection(a: Subgroup, b: Subgroup) -> Subgroup:
    return Subgroup(a.parent, tuple(np.flatnonzero(a.mask & b.mask).tolist()))


# ---------------------------------------------------------------------------
# homomorphisms


class GroupHom:
    def __init__(self, domain: FiniteGroup, codomain: FiniteGroup, image):
        self.domain = domain
        self.codomain = codomain
        self.image = np.asarray(image, dtype=IDX)
        self.image.setflags(write=False)

    def __call__(self, x: int) -> int:
        return int(self.image[x])

    def __repr__(self):
        return f"<GroupHom {self.domain!r} -> {self.codomain!r}>"

    def kernel(self) -> Subgroup:
        return Subgroup(self.domain, tuple(np.flatnonzero(self.image == self.codomain.identity).tolist()))

    def image_subgroup(self) -> Subgroup:
        return Subgroup(self.codomain, tuple(np.unique(self.image).tolist()))

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """self after inner."""
        return GroupHom(inner.domain, self.codomain, self.image[inner.image])

    def is_injective(self) -> bool:
        return len(np.unique(self.image)) == self.domain.order

    def is_surjective(self) -> bool:
        return len(np.unique(self.image)) == self.codomain.order

    def is_bijective(self) -> bool:
        return self.domain.order == self.codomain.order and self.is_injective()

    def inverse_map(self) -> "GroupHom":
        inv = np.empty(self.codomain.order, dtype=IDX)
        inv[self.image] = np.arange(self.domain.order, dtype=IDX)
        return GroupHom(self.codomain, self.domain, inv)

    def hom_witness(self):
        return _hom_witness(self.domain, self.codomain, self.image)

    def equals(self, other: "GroupHom") -> bool:
        return (
            self.domain is other.domain
            and self.codomain is other.codomain
            and bool((self.image == other.image).all())
        )


def identity_hom(G: FiniteGroup) -> GroupHom:
    return GroupHom(G, G, np.arange(G.order))


def trivial_hom(G: FiniteGroup, H: FiniteGroup) -> GroupHom:
    return GroupHom(G, H, np.full(G.order, H.identity))


def _hom_witness(G, H, img):
    # checking against every pair is O(n^2); generators need only the
    # recursion phi(x*g) = phi(x)*phi(g), which implies the full property.
    for g in G.generators:
        lhs = img[G.table[:, g]]
        rhs = H.table[img, img[g]]
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            return int(bad[0]), int(g)
    if img[G.identity] != H.identity:
        return G.identity, G.identity
    return None


def make_hom(G: FiniteGroup, H: FiniteGroup, full_map) -> GroupHom:
    img = np.asarray(full_map, dtype=np.int64)
    if img.shape != (G.order,):
        raise NotHomomorphism(f"map length {img.shape} != |G| = {G.order}")
    if img.min(initial=0) < 0 or img.max(initial=0) >= H.order:
        raise NotHomomorphism("map value out of range")
    w = _hom_witness(G, H, img)
    if w is not None:
        raise NotHomomorphism(f"f(x*y) != f(x)*f(y) for {w}", witness=w)
    return GroupHom(G, H, img)


class ProductGroup(NamedTuple):
    group: FiniteGroup
    p1: GroupHom
    p2: GroupHom
    i1: GroupHom
    i2: GroupHom


def direct_product(G: FiniteGroup, H: FiniteGroup, order_bound=None) -> ProductGroup:
    """G x H with (g, h) stored at index g*|H| + h."""
    n, m = G.order, H.order
    _check_bound(n * m, order_bound)
    gt = G.table.astype(np.int64)
    ht = H.table.astype(np.int64)
    table = (gt[:, None, :, None] * m + ht[None, :, None, :]).reshape(n * m, n * m)
    P = _group_from_trusted(table, G.identity * m + H.identity,
                            name=f"{G.name or 'G'}x{H.name or 'H'}")
    idx = np.arange(n * m)
    return ProductGroup(
        P,
        GroupHom(P, G, idx // m),
        GroupHom(P, H, idx % m),
        GroupHom(G, P, np.arange(n) * m + H.identity),
        GroupHom(H, P, G.identity * m + np.arange(m)),
    )


class Quotient(NamedTuple):
    group: FiniteGroup
    projection: GroupHom
    representatives: np.ndarray


def quotient_group(G: FiniteGroup, N: Subgroup) -> Quotient:
    """G/N; cosets ordered by their smallest element."""
    if N.parent is not G:
        raise NotSubgroup("subgroup belongs to another group")
    N.require_normal()
    reps_of = G.table[:, N.array].min(axis=1)
    reps, label = np.unique(reps_of, return_inverse=True)
    qtable = label[G.table[np.ix_(reps, reps)]]
    ident = int(label[G.identity])
    Q = _group_from_trusted(qtable, ident)
    return Quotient(Q, GroupHom(G, Q, label), reps)


# ---------------------------------------------------------------------------
# isomorphism


@dataclass
class Isomorphism:
    forward: GroupHom
    backward: GroupHom


def _invariant_screen(G: FiniteGroup, H: FiniteGroup) -> bool:
    if G.order != H.order:
        return False
    if G.abelian != H.abelian:
        return False
    if G.order_histogram() != H.order_histogram():
        return False
    if G.abelian:
        return abelian_invariants(G) == abelian_invariants(H)
    return G.class_size_multiset() == H.class_size_multiset()


def _gen_tree(G: FiniteGroup, gens: Sequence[int]):
    """BFS tree of the subgroup generated by gens: (elements, parent, letter)."""
    t = G.table
    seen = {G.identity: 0}
    elems, parent, letter = [G.identity], [-1], [-1]
    i = 0
    while i < len(elems):
        x = elems[i]
        for k, g in enumerate(gens):
            y = int(t[x, g])
            if y not in seen:
                seen[y] = len(elems)
                elems.append(y)
                parent.append(i)
                letter.append(k)
        i += 1
    return elems, parent, letter


def iter_isomorphisms(G: FiniteGroup, H: FiniteGroup, bound: Optional[int] = None) -> Iterator[Isomorphism]:
    """All isomorphisms G -> H (bounded exact backtracking search)."""
    if not _invariant_screen(G, H):
        return
    bound = DEFAULT.iso_bound if bound is None else bound
    if G.order > bound:
        raise SearchBudgetExceeded(f"order {G.order} exceeds isomorphism search bound {bound}")
    gens = list(G.generators)
    prefix_trees = [_gen_tree(G, gens[: i + 1]) for i in range(len(gens))]
    g_orders, h_orders = G.element_orders, H.element_orders
    g_cls, h_cls = G.element_class_sizes(), H.element_class_sizes()
    candidates = [
        [int(y) for y in np.flatnonzero((h_orders == g_orders[g]) & (h_cls == g_cls[g]))]
        for g in gens
    ]
    Ht = H.table

    def consistent(images, depth):
        elems, parent, letter = prefix_trees[depth]
        phi = {}
        vals = [H.identity]
        phi[elems[0]] = H.identity
        for j in range(1, len(elems)):
            v = int(Ht[vals[parent[j]], images[letter[j]]])
            vals.append(v)
            phi[elems[j]] = v
        if len(set(vals)) != len(vals):
            return None
        for x, v in phi.items():
            for k in range(depth + 1):
                if phi[int(G.table[x, gens[k]])] != Ht[v, images[k]]:
                    return None
        return phi

    def search(images):
        depth = len(images)
        if depth == len(gens):
            phi = consistent(images, depth - 1) if gens else {G.identity: H.identity}
            if phi is not None and len(phi) == G.order:
                fwd = np.empty(G.order, dtype=IDX)
                for x, v in phi.items():
                    fwd[x] = v
                f = GroupHom(G, H, fwd)
                yield Isomorphism(f, f.inverse_map())
            return
        for c in candidates[depth]:
            imgs = images + [c]
            if consistent(imgs, depth) is not None:
                yield from search(imgs)

    yield from search([])


def find_isomorphism(G: FiniteGroup, H: FiniteGroup, bound: Optional[int] = None) -> Optional[Isomorphism]:
    """An isomorphism G -> H, or None. Exact.

    Abelian groups are matched constructively through adapted bases, so the
    search bound only applies to the non-abelian backtracking path.
    """
    if not _invariant_screen(G, H):
        return None
    if G.abelian:
        return _abelian_isomorphism(G, H)
    return next(iter_isomorphisms(G, H, bound), None)


def are_isomorphic(G, H, bound=None) -> bool:
    return find_isomorphism(G, H, bound) is not None


# ---------------------------------------------------------------------------
# abelian groups


def _prime_factors(n: int) -> list:
    out, p = [], 2
    while p * p <= n:
        while n % p == 0:
            out.append(p)
            n //= p
        p += 1
    if n > 1:
        out.append(n)
    return sorted(set(out))


def _p_basis(G: FiniteGroup, p: int) -> list:
    """Basis (element, order) of the Sylow p-subgroup of abelian G, orders non-increasing.

    Repeatedly splits off a cyclic factor of maximal order modulo the part
    already found, correcting the lift so its order equals its quotient order.
    """
    t = G.table
    orders = G.element_orders
    pmask = np.array([_is_power_of(int(o), p) for o in orders])
    psize = int(pmask.sum())
    basis: list[tuple[int, int]] = []
    coords = {G.identity: ()}
    in_s = np.zeros(G.order, dtype=bool)
    in_s[G.identity] = True
    pelems = np.flatnonzero(pmask)
    while len(coords) < psize:
        # quotient order of every p-element modulo the current span
        qord = np.ones(len(pelems), dtype=np.int64)
        cur = pelems.astype(IDX)
        done = in_s[cur].copy()
        q = 1
        while not done.all():
            cur = _pow_vec(t, cur, p)
            q *= p
            newly = in_s[cur] & ~done
            qord[newly] = q
            done |= newly
        best = int(np.argmax(qord))
        x, q = int(pelems[best]), int(qord[best])
        y = G.power(x, q)
        a = coords[y]
        corr = x
        for (b, _), ai in zip(basis, a):
            corr = int(t[corr, G.power(b, -(ai // q))])
        basis.append((corr, q))
        new_coords = {}
        for s, c in coords.items():
            cur_e = s
            for k in range(q):
                new_coords[cur_e] = c + (k,)
                cur_e = int(t[cur_e, corr])
        coords = new_coords
        in_s[list(coords)] = True
    return basis


def _pow_vec(t, cur, p):
    res = cur
    for _ in range(p - 1):
        res = t[res, cur]
    return res


def _is_power_of(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def _primary_basis(G: FiniteGroup) -> list:
    """[(prime, [(element, order), ...]), ...]"""
    if not G.abelian:
        raise NotAbelian("group is not abelian")
    return [(p, _p_basis(G, p)) for p in _prime_factors(G.order)]


def abelian_invariants(G: FiniteGroup) -> list:
    """Invariant factors d1 | d2 | ... (each > 1); [] for the trivial group."""
    primary = _primary_basis(G)
    columns = [sorted((o for _, o in b), reverse=True) for _, b in primary]
    width = max((len(c) for c in columns), default=0)
    factors = []
    for k in range(width):
        d = 1
        for c in columns:
            if k < len(c):
                d *= c[k]
        factors.append(d)
    return sorted(factors)


def _abelian_isomorphism(G: FiniteGroup, H: FiniteGroup) -> Optional[Isomorphism]:
    bg, bh = _primary_basis(G), _primary_basis(H)
    pairs = []
    for (p, b1), (q, b2) in zip(bg, bh):
        if p != q or [o for _, o in b1] != [o for _, o in b2]:
            return None
        pairs.extend((x, y, o) for (x, o), (y, _) in zip(b1, b2))
    src = np.array([G.identity], dtype=IDX)
    dst = np.array([H.identity], dtype=IDX)
    for x, y, o in pairs:
        px = np.array([G.power(x, k) for k in range(o)], dtype=IDX)
        py = np.array([H.power(y, k) for k in range(o)], dtype=IDX)
        src = G.table[src[:, None], px[None, :]].ravel()
        dst = H.table[dst[:, None], py[None, :]].ravel()
    fwd = np.empty(G.order, dtype=IDX)
    fwd[src] = dst
    f = GroupHom(G, H, fwd)
    if _hom_witness(G, H, fwd) is not None or not f.is_bijective():
        return None
    return Isomorphism(f, f.inverse_map())


def hom_from_generators(G: FiniteGroup, H: FiniteGroup, gens: Sequence[int], images: Sequence[int]) -> Optional[GroupHom]:
    """The hom G -> H sending gens[i] to images[i], or None if no such hom exists.

    ``gens`` must generate G.
    """
    elems, parent, letter = _gen_tree(G, [int(g) for g in gens])
    if len(elems) != G.order:
        raise ValueError("elements do not generate the group")
    img = np.empty(G.order, dtype=np.int64)
    img[elems[0]] = H.identity
    for j in range(1, len(elems)):
        img[elems[j]] = H.table[img[elems[parent[j]]], images[letter[j]]]
    for g, v in zip(gens, images):
        lhs = img[G.table[:, g]]
        if not (lhs == H.table[img, v]).all():
            return None
    return GroupHom(G, H, img)
