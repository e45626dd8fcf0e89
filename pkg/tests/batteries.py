"""Test batteries shared by the module tests and the acceptance suite."""

from __future__ import annotations

import itertools
from functools import lru_cache

from xsq.fpgroup import Presentation, todd_coxeter
from xsq.commutators import higgins_commutator, ternary_commutator_normal
from xsq.groups import (
    abelian_from_invariants,
    direct_product,
    intersection,
    join,
    normal_closure,
    parse_standard,
    quotient_group,
    subgroup_closure,
)
from xsq.tensor import make_pair
from xsq.xmod import identity_xmod, inclusion_xmod, trivial_xmod

import oracles


@lru_cache(maxsize=None)
def small_groups():
    """Named groups of order at most 12, one per isomorphism type (all 24 of them)."""
    out = {}
    for n in range(1, 13):
        for inv in oracles.invariant_factor_lists(n):
            out["x".join(f"C{d}" for d in inv) or "1"] = abelian_from_invariants(inv)
    out["S3"] = parse_standard("symmetric 3")
    out["D4"] = parse_standard("dihedral 4")
    out["Q8"] = parse_standard("quaternion8")
    out["D5"] = parse_standard("dihedral 5")
    out["D6"] = parse_standard("dihedral 6")
    out["A4"] = todd_coxeter(Presentation(2, [[1, 1], [2, 2, 2], [1, 2] * 3]))[0]
    out["Dic3"] = todd_coxeter(Presentation(2, [[1] * 6, [1, 1, 1, -2, -2], [-2, 1, 2, 1]]))[0]
    return out


def subgroups(G):
    """Every subgroup, found as closures of at most three elements (enough below order 16)."""
    seen = {}
    for k in range(0, 4):
        for gens in itertools.combinations(range(G.order), k):
            H = subgroup_closure(G, gens)
            seen.setdefault(H.elements, H)
    return list(seen.values())


def normal_subgroups(G):
    return [H for H in subgroups(G) if H.is_normal()]


def roundtrip_battery():
    """(label, crossed module) for the groupoid equivalence criterion."""
    groups = small_groups()
    out = []
    for name, L in groups.items():
        out.append((f"id {name}", identity_xmod(L)))
        for H in normal_subgroups(L):
            out.append((f"incl {H.order}<|{name}", inclusion_xmod(L, H)))
    for xname, X in groups.items():
        if not X.abelian:
            continue
        for lname, L in groups.items():
            out.append((f"zero {xname}->{lname}", trivial_xmod(X, L)))
    return out


def abelian_upto(n):
    """(label, group) for every abelian group of order at most n, including the trivial group."""
    out = []
    for k in range(1, n + 1):
        for inv in oracles.invariant_factor_lists(k):
            out.append(("x".join(f"C{d}" for d in inv) or "1", inv, abelian_from_invariants(inv)))
    return out


def image_law_battery():
    """(label, L, M, N) for the commutator-image criterion."""
    S3 = parse_standard("symmetric 3")
    D4 = parse_standard("dihedral 4")
    Q8 = parse_standard("quaternion8")
    return [
        ("S3;A3,A3", S3, subgroup_closure(S3, [3]), subgroup_closure(S3, [3])),
        ("D4;<r>,<r2,s>", D4, subgroup_closure(D4, [1]), subgroup_closure(D4, [2, 4])),
        ("Q8;Q8,Q8", Q8, Q8.full(), Q8.full()),
    ]


def product(a, b):
    return direct_product(a, b).group


# -- commutator battery -----------------------------------------------------


@lru_cache(maxsize=None)
def groups_upto24():
    """Small groups plus a spread of nonabelian groups of orders 16 to 24."""
    out = dict(small_groups())
    out["S4"] = parse_standard("symmetric 4")
    out["D8"] = parse_standard("dihedral 8")
    out["D12"] = parse_standard("dihedral 12")
    out["D4xC2"] = product(out["D4"], out["C2"])
    out["Q8xC2"] = product(out["Q8"], out["C2"])
    out["S3xC3"] = product(out["S3"], out["C3"])
    out["A4xC2"] = product(out["A4"], out["C2"])
    out["S3xC2xC2"] = product(out["D6"], out["C2"])
    out["Q16"] = todd_coxeter(Presentation(2, [[1] * 8, [1] * 4 + [-2, -2], [-2, 1, 2, 1]]))[0]
    out["SL(2,3)"] = todd_coxeter(Presentation(2, [[1, 1, 1], [2, 2, 2], [1, 2, 1, -2, -1, -2]]))[0]
    out["C3:C8"] = todd_coxeter(Presentation(2, [[1] * 3, [2] * 8, [-2, 1, 2, 1]]))[0]
    return out


@lru_cache(maxsize=None)
def exact_normal_subgroups(name):
    """All normal subgroups: joins of normal closures of single elements."""
    G = groups_upto24()[name]
    atoms = {normal_closure(G, [x]).elements: normal_closure(G, [x]) for x in range(G.order)}
    found = dict(atoms)
    frontier = list(atoms.values())
    while frontier:
        nxt = []
        for A in frontier:
            for B in atoms.values():
                J = join(A, B)
                if J.elements not in found:
                    found[J.elements] = J
                    nxt.append(J)
        frontier = nxt
    return list(found.values())


def commutator_trial(rng):
    """One randomized check of the commutator properties; returns the labels that failed."""
    names = sorted(groups_upto24())
    name = names[rng.integers(len(names))]
    X = groups_upto24()[name]
    normals = exact_normal_subgroups(name)
    K1, K2, K3 = (normals[i] for i in rng.integers(len(normals), size=3))
    h = lambda a, b: higgins_commutator(X, a, b)  # noqa: E731
    t = lambda a, b, c: ternary_commutator_normal(X, a, b, c)  # noqa: E731
    triv = X.trivial()
    bad = []
    # 0: vanishing
    if not (h(triv, K2).is_trivial() and t(triv, K2, K3).is_trivial()):
        bad.append("0")
    # 1: symmetry
    if h(K1, K2) != h(K2, K1):
        bad.append("1")
    perms = {t(*p).elements for p in itertools.permutations((K1, K2, K3))}
    if len(perms) != 1:
        bad.append("1t")
    # 2: images under the projection onto X/K3
    Q, proj, _ = quotient_group(X, K3)
    img = lambda S: subgroup_closure(Q, proj.image[S.array].tolist())  # noqa: E731
    if img(h(K1, K2)) != higgins_commutator(Q, img(K1), img(K2)):
        bad.append("2")
    # 3: monotone in each argument
    small = intersection(K1, K3)
    if not h(small, K2).issubset(h(K1, K2)) or not t(small, K2, K3).issubset(t(K1, K2, K3)):
        bad.append("3")
    # 5: nesting
    if not h(h(K1, K2), K3).issubset(t(K1, K2, K3)):
        bad.append("5")
    # 6: absorption
    if not t(K1, K1, K2).issubset(h(K1, K2)):
        bad.append("6")
    # 7: join formula
    if h(K1, join(K2, K3)) != join(h(K1, K2), h(K1, K3), t(K1, K2, K3)):
        bad.append("7")
    return [f"{name}:{b}" for b in bad]


# -- tensor pairs -----------------------------------------------------------


def square_pair(G):
    x = identity_xmod(G)
    return make_pair(x, x)


def inclusion_pair(L, M_sub, N_sub):
    return make_pair(inclusion_xmod(L, M_sub), inclusion_xmod(L, N_sub))


def abelian_pair(A, B, base=None):
    """Trivial actions over a trivial base."""
    base = parse_standard("trivial") if base is None else base
    return make_pair(trivial_xmod(A, base), trivial_xmod(B, base))


@lru_cache(maxsize=None)
def abelian_pairs(n=16):
    """(label, pair) for every ordered pair of abelian groups of order at most n."""
    base = parse_standard("trivial")
    groups = abelian_upto(n)
    return [(f"{a}(x){b}", abelian_pair(A, B, base)) for a, _, A in groups for b, _, B in groups]


def image_law_pairs():
    return [(label, inclusion_pair(L, M, N)) for label, L, M, N in image_law_battery()]
