"""Independent reference computations.

Nothing here imports the package's algorithms: groups are handled as plain
nested lists, presentations go through sympy's coset enumerator and ranks
through sympy matrices.  Values produced here are frozen into the tests;
``python3 tests/oracles.py`` reprints them.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd

import sympy
from sympy.combinatorics.coset_table import coset_enumeration_r
from sympy.combinatorics.fp_groups import FpGroup, FpGroupElement
from sympy.combinatorics.free_groups import free_group


# ---------------------------------------------------------------------------
# groups as lists


def perm_group_table(generators):
    """Closure of permutation tuples; elements sorted, product (p*q)(i) = p(q(i))."""
    n = len(generators[0])
    ident = tuple(range(n))
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in generators:
                q = tuple(p[g[i]] for i in range(n))
                if q not in elems:
                    elems.add(q)
                    nxt.append(q)
        frontier = nxt
    elems = sorted(elems)
    idx = {p: i for i, p in enumerate(elems)}
    table = [[idx[tuple(p[q[i]] for i in range(n))] for q in elems] for p in elems]
    return elems, table


def identity_of(table):
    n = len(table)
    return next(e for e in range(n) if all(table[e][x] == x for x in range(n)))


def inverse_of(table):
    e = identity_of(table)
    return [next(y for y in range(len(table)) if table[x][y] == e) for x in range(len(table))]


def element_order(table, x):
    e, k, y = identity_of(table), 1, x
    while y != e:
        y, k = table[y][x], k + 1
    return k


def torsion_counts(table):
    """For each k dividing |G|, the number of x with x^k = 1."""
    n = len(table)
    orders = [element_order(table, x) for x in range(n)]
    return tuple(sum(1 for o in orders if k % o == 0) for k in range(1, n + 1) if n % k == 0)


def cyclic_product_table(factors):
    factors = list(factors) or [1]
    elems = list(itertools.product(*[range(d) for d in factors]))
    idx = {v: i for i, v in enumerate(elems)}
    return [[idx[tuple((a + b) % d for a, b, d in zip(u, v, factors))] for v in elems] for u in elems]


def invariant_factor_lists(n):
    """All d_1 | d_2 | ... with product n, each > 1."""
    out = []

    def rec(rem, prev, acc):
        if rem == 1:
            out.append(acc)
            return
        for d in range(2, rem + 1):
            if rem % d == 0 and (not acc or d % prev == 0):
                rec(rem // d, d, acc + [d])

    rec(n, 1, [])
    return out


def abelian_type(table):
    """Invariant factors of an abelian group given by a table, matched through torsion counts."""
    want = torsion_counts(table)
    for inv in invariant_factor_lists(len(table)):
        if torsion_counts(cyclic_product_table(inv)) == want:
            return inv
    raise AssertionError("no abelian type matches")


def z_tensor_type(inv_m, inv_n):
    """Invariant factors of the product of cyclic groups of order gcd(d, e)."""
    orders = [gcd(d, e) for d in inv_m for e in inv_n]
    orders = [o for o in orders if o > 1]
    return abelian_type(cyclic_product_table(orders)) if orders else []


def higgins(table, M, N):
    """Subgroup generated by [m, n] = m n m^-1 n^-1."""
    inv = inverse_of(table)
    gens = {table[table[table[m][n]][inv[m]]][inv[n]] for m in M for n in N}
    e = identity_of(table)
    H = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = table[x][g]
                if y not in H:
                    H.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(H)


# ---------------------------------------------------------------------------
# tensor products through sympy


def tensor_order(M_table, N_table, m_on_n, n_on_m):
    """|M (x) N| from the defining presentation, enumerated by sympy.

    ``m_on_n[m][n]`` is ^m n and ``n_on_m[n][m]`` is ^n m.  Generator (m, n)
    is free generator number m*|N| + n.
    """
    nm, nn = len(M_table), len(N_table)
    F = free_group(",".join(f"g{i}" for i in range(nm * nn)))[0]
    gens = F.generators
    g = lambda m, n: gens[m * nn + n]  # noqa: E731
    rels = []
    for m in range(nm):
        for mp in range(nm):
            for n in range(nn):
                # (m m') (x) n = (^m m' (x) ^m n)(m (x) n)
                lhs = g(M_table[m][mp], n)
                rhs = g(conj(M_table, m, mp), m_on_n[m][n]) * g(m, n)
                rels.append(lhs * rhs**-1)
    for m in range(nm):
        for n in range(nn):
            for np_ in range(nn):
                # m (x) (n n') = (m (x) n)(^n m (x) ^n n')
                lhs = g(m, N_table[n][np_])
                rhs = g(m, n) * g(n_on_m[n][m], conj(N_table, n, np_))
                rels.append(lhs * rhs**-1)
    rels = [r for r in rels if r != F.identity]
    return _enumerate(F, rels)


def _fp_group(F, relators):
    """An FpGroup without the eager rewriting system its constructor builds.

    Coset enumeration only reads the free group and the relators, and the
    Knuth-Bendix setup dominates the cost for hundreds of relators.
    """
    G = FpGroup.__new__(FpGroup)
    G.free_group = F
    G.relators = list(relators)
    G.generators = F.generators
    G.dtype = type("FpGroupElement", (FpGroupElement,), {"group": G})
    G._coset_table = None
    G._is_standardized = False
    G._order = None
    G._center = None
    G._perm_isomorphism = None
    return G


def _enumerate(F, relators):
    """Index of the trivial subgroup by sympy's HLT enumeration."""
    C = coset_enumeration_r(_fp_group(F, relators), [], max_cosets=400000)
    C.compress()
    return len(C.table)


def conj(table, a, b):
    inv = inverse_of(table)
    return table[table[a][b]][inv[a]]


def presentation_order(ngens, relators):
    """Order of <x_1..x_n | relators> with 1-based signed-letter words."""
    F = free_group(",".join(f"x{i}" for i in range(ngens)))[0]
    words = []
    for r in relators:
        w = F.identity
        for v in r:
            w = w * (F.generators[v - 1] if v > 0 else F.generators[-v - 1] ** -1)
        words.append(w)
    return _enumerate(F, words)


# ---------------------------------------------------------------------------
# Lie tensors by plain loops


def lie_tensor_dim(cM, cN, act_MN, act_NM):
    """dim of M (x) N over Q.

    cM[i][j][k] are structure constants; act_MN[i] is the matrix of ^{b_i} on N
    (column convention), act_NM[j] likewise on M.
    """
    dM, dN = len(cM), len(cN)
    rows = []

    def vec():
        return [Fraction(0)] * (dM * dN)

    for i in range(dM):
        for ip in range(dM):
            for j in range(dN):
                # [m,m'] (x) n - m (x) ^{m'} n + m' (x) ^m n
                v = vec()
                for k in range(dM):
                    v[k * dN + j] += cM[i][ip][k]
                for t in range(dN):
                    v[i * dN + t] -= act_MN[ip][t][j]
                    v[ip * dN + t] += act_MN[i][t][j]
                rows.append(v)
    for i in range(dM):
        for j in range(dN):
            for jp in range(dN):
                # m (x) [n,n'] - ^{n'}m (x) n + ^n m (x) n'
                v = vec()
                for k in range(dN):
                    v[i * dN + k] += cN[j][jp][k]
                for s in range(dM):
                    v[s * dN + j] -= act_NM[jp][s][i]
                    v[s * dN + jp] += act_NM[j][s][i]
                rows.append(v)
    if not rows:
        return dM * dN
    return dM * dN - sympy.Matrix(rows).rank()


def sl2_constants():
    c = [[[Fraction(0)] * 3 for _ in range(3)] for _ in range(3)]
    e, f, h = 0, 1, 2
    c[h][e][e], c[e][h][e] = 2, -2
    c[h][f][f], c[f][h][f] = -2, 2
    c[e][f][h], c[f][e][h] = 1, -1
    return c


def adjoint(c):
    d = len(c)
    return [[[c[i][j][k] for j in range(d)] for k in range(d)] for i in range(d)]


# ---------------------------------------------------------------------------
# standard small groups as permutations

S3_GENS = [(1, 0, 2), (1, 2, 0)]
D4_GENS = [(1, 2, 3, 0), (0, 3, 2, 1)]  # rotation and a reflection of a square
A4_GENS = [(1, 0, 3, 2), (1, 2, 0, 3)]


def q8_table():
    """Quaternion group on {±1, ±i, ±j, ±k} by explicit multiplication."""
    units = ["1", "i", "j", "k"]
    mult = {("1", x): (1, x) for x in units}
    mult.update({(x, "1"): (1, x) for x in units})
    mult.update({("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
                 ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                 ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})
    elems = [(s, u) for s in (1, -1) for u in units]
    idx = {v: i for i, v in enumerate(elems)}
    table = []
    for s1, u1 in elems:
        row = []
        for s2, u2 in elems:
            s, u = mult[(u1, u2)]
            row.append(idx[(s1 * s2 * s, u)])
        table.append(row)
    return table


def conjugation_on(table, sub_m, sub_n):
    """^m n inside a common group, returned in local indices of the two subgroups."""
    pos_n = {x: i for i, x in enumerate(sub_n)}
    return [[pos_n[conj(table, m, n)] for n in sub_n] for m in sub_m]


def restricted_table(table, sub):
    pos = {x: i for i, x in enumerate(sub)}
    return [[pos[table[a][b]] for b in sub] for a in sub]


def tensor_square_order(table):
    idx = list(range(len(table)))
    act = conjugation_on(table, idx, idx)
    return tensor_order(table, table, act, act)


def subgroup_tensor_order(table, M, N):
    return tensor_order(restricted_table(table, M), restricted_table(table, N),
                        conjugation_on(table, M, N), conjugation_on(table, N, M))


def d4_subgroups():
    """<r> and <r^2, s> inside the permutation model of D4."""
    elems, d4 = perm_group_table(D4_GENS)
    r, s = elems.index(D4_GENS[0]), elems.index(D4_GENS[1])
    return d4, closure(d4, [r]), closure(d4, [d4[r][r], s])


def closure(table, gens):
    e = identity_of(table)
    H, frontier = {e}, [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = table[x][g]
                if y not in H:
                    H.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(H)


def main():
    _, s3 = perm_group_table(S3_GENS)
    _, d4 = perm_group_table(D4_GENS)
    _, a4 = perm_group_table(A4_GENS)
    a3 = higgins(s3, range(6), range(6))
    print("S3 (x) S3:", tensor_square_order(s3))
    print("D4 (x) D4:", tensor_square_order(d4))
    print("Q8 (x) Q8:", tensor_square_order(q8_table()))
    print("A4 (x) A4:", tensor_square_order(a4))
    print("A3 (x) A3 in S3:", subgroup_tensor_order(s3, a3, a3))
    d4, R, N = d4_subgroups()
    print("<r> (x) <r^2,s> in D4:", subgroup_tensor_order(d4, R, N))
    print("[<r>, <r^2,s>] order:", len(higgins(d4, R, N)))
    print("[Q8, Q8] order:", len(higgins(q8_table(), range(8), range(8))))
    print("<a,b | a^2, b^3, (ab)^3>:", presentation_order(2, [[1, 1], [2, 2, 2], [1, 2] * 3]))
    print("<a,b | a^2, b^2, (ab)^2>:", presentation_order(2, [[1, 1], [2, 2], [1, 2] * 2]))
    c = sl2_constants()
    ad = adjoint(c)
    print("sl2 (x) sl2 dim:", lie_tensor_dim(c, c, ad, ad))


if __name__ == "__main__":
    main()
