"""Higgins, Huq and ternary commutators of subgroups; nil-2 quotients; Z-tensors."""

from __future__ import annotations

import math

import numpy as np

from .errors import NotAbelian
from .groups import (
    FiniteGroup,
    Subgroup,
    abelian_from_invariants,
    abelian_invariants,
    join,
    normal_closure,
    quotient_group,
    subgroup_closure,
)


def commutator_elements(X: FiniteGroup, M: Subgroup, N: Subgroup) -> np.ndarray:
    """All [m, n] = m n m^-1 n^-1 for m in M, n in N (as a flat array, with repeats)."""
    t, inv = X.table, X.inverse
    m, n = M.array, N.array
    return t[t[np.ix_(m, n)], t[np.ix_(inv[m], inv[n])]].ravel()


def higgins_commutator(X: FiniteGroup, M: Subgroup, N: Subgroup) -> Subgroup:
    """The subgroup generated by all commutators [m, n]."""
    return subgroup_closure(X, np.unique(commutator_elements(X, M, N)).tolist())


def huq_commutator(X: FiniteGroup, M: Subgroup, N: Subgroup) -> Subgroup:
    """Normal closure in X of the Higgins commutator."""
    return normal_closure(X, higgins_commutator(X, M, N).elements)


def ternary_commutator_normal(X: FiniteGroup, K: Subgroup, M: Subgroup, N: Subgroup) -> Subgroup:
    """[K, M, N] for normal subgroups: [K,[M,N]] v [M,[N,K]] v [N,[K,M]]."""
    for S in (K, M, N):
        S.require_normal()
    h = lambda a, b: higgins_commutator(X, a, b)  # noqa: E731
    return join(h(K, h(M, N)), h(M, h(N, K)), h(N, h(K, M)))


def lower_central_term3(G: FiniteGroup) -> Subgroup:
    """[[G, G], G]."""
    full = G.full()
    return higgins_commutator(G, higgins_commutator(G, full, full), full)


def nil2_quotient(G: FiniteGroup):
    """G / [[G,G],G] and its projection."""
    gamma3 = normal_closure(G, lower_central_term3(G).elements)
    q = quotient_group(G, gamma3)
    return q.group, q.projection


def z_tensor_invariants(M: FiniteGroup, N: FiniteGroup) -> list:
    if not (M.abelian and N.abelian):
        raise NotAbelian("z_tensor_abelian needs abelian groups")
    gcds = [math.gcd(d, e) for d in abelian_invariants(M) for e in abelian_invariants(N)]
    return [g for g in gcds if g > 1]


def z_tensor_abelian(M: FiniteGroup, N: FiniteGroup, order_bound=None) -> FiniteGroup:
    """M (x)_Z N as a product of cyclic groups C_gcd(d_i, e_j)."""
    return abelian_from_invariants(z_tensor_invariants(M, N), order_bound=order_bound)
