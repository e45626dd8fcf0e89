import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import G, group_axioms_hold
from xsq.errors import IndexOutOfRange, MalformedPresentation, NotWellDefined, Overflow, TooLarge
from xsq.fpgroup import Presentation, coset_enumeration, group_from_cosets, todd_coxeter, word_eval
from xsq.groups import are_isomorphic

A, B, C, D, E = 1, 2, 3, 4, 5

# (name, ngens, relators); orders come from sympy's enumerator
BATTERY = [
    ("C5", 1, [[A] * 5]),
    ("klein", 2, [[A, A], [B, B], [A, B] * 2]),
    ("A4", 2, [[A, A], [B] * 3, [A, B] * 3]),
    ("S4", 2, [[A, A], [B] * 3, [A, B] * 4]),
    ("A5", 2, [[A, A], [B] * 3, [A, B] * 5]),
    ("D4", 2, [[A] * 4, [B, B], [A, B] * 2]),
    ("Q8", 2, [[A] * 4, [A, A, -B, -B], [-B, A, B, A]]),
    ("C7:C3", 2, [[A] * 7, [B] * 3, [B, A, -B, -A, -A]]),
    ("Coxeter S4", 3, [[A, A], [B, B], [C, C], [A, B] * 3, [B, C] * 3, [A, C] * 2]),
    ("Fibonacci(2,5)", 5, [[A, B, -C], [B, C, -D], [C, D, -E], [D, E, -A], [E, A, -B]]),
    ("trivial", 2, [[A], [B]]),
    ("collapse", 2, [[A] * 6, [B] * 4, [A, B, -A, -B, -B]]),
]


@pytest.mark.parametrize("name, ngens, rels", BATTERY, ids=[b[0] for b in BATTERY])
def test_orders_against_sympy(name, ngens, rels):
    g, _ = todd_coxeter(Presentation(ngens, rels))
    assert g.order == oracles.presentation_order(ngens, rels)
    assert group_axioms_hold(g)


def test_documented_orders():
    assert todd_coxeter(Presentation(1, [[A] * 5]))[0].order == 5
    k, _ = todd_coxeter(Presentation(2, [[A, A], [B, B], [A, B, A, B]]))
    assert k.order == 4 and are_isomorphic(k, G("klein"))
    assert todd_coxeter(Presentation(2, [[A, A], [B] * 3, [A, B] * 3]))[0].order == 12


@pytest.mark.parametrize("ngens, rels", [
    (2, []),
    (2, [[A] * 3, [B] * 3, [A, B] * 3]),  # Euclidean triangle group, infinite
    (1, []),
])
def test_infinite_presentations_overflow(ngens, rels):
    with pytest.raises(Overflow) as ei:
        coset_enumeration(Presentation(ngens, rels), max_cosets=2000)
    assert ei.value.witness == 2000


def test_overflow_at_default_style_bound():
    with pytest.raises(Overflow):
        todd_coxeter(Presentation(2, []), max_cosets=50_000)


def test_bound_too_small_for_finite_group():
    with pytest.raises(Overflow):
        coset_enumeration(Presentation(2, [[A, A], [B] * 3, [A, B] * 5]), max_cosets=30)


def test_order_bound_applies_to_table():
    ct = coset_enumeration(Presentation(2, [[A, A], [B] * 3, [A, B] * 5]))
    with pytest.raises(TooLarge):
        group_from_cosets(ct, order_bound=59)


def test_complete_table_invariants():
    ct = coset_enumeration(Presentation(2, [[A, A], [B] * 3, [A, B] * 4]))
    assert ct.status == "complete"
    assert ct.coset_count == 24 == ct.table.shape[0]
    assert (ct.table >= 0).all()
    assert ct.relator_failures() == []
    # every column is a permutation of the cosets
    for col in ct.table.T:
        assert sorted(col.tolist()) == list(range(24))


def test_deterministic():
    p = Presentation(3, [[A, A], [B, B], [C, C], [A, B] * 3, [B, C] * 3, [A, C] * 2])
    t1 = coset_enumeration(p).table
    t2 = coset_enumeration(p).table
    assert np.array_equal(t1, t2)


# -- words ------------------------------------------------------------------


def test_word_evaluation():
    g, ev = todd_coxeter(Presentation(1, [[A] * 5]))
    assert ev([]) == g.identity
    assert ev([A, -A]) == g.identity
    assert ev([A, A, A]) == ev([-A, -A])


def test_word_out_of_range():
    ct = coset_enumeration(Presentation(1, [[A] * 5]))
    with pytest.raises(IndexOutOfRange):
        word_eval(ct, [2])
    with pytest.raises(IndexOutOfRange):
        word_eval(ct, [0])


def test_evaluator_is_multiplicative():
    g, ev = todd_coxeter(Presentation(2, [[A, A], [B] * 3, [A, B] * 4]))
    words = [[A], [B], [A, B], [B, B, A], [-B, A, B]]
    for u in words:
        for v in words:
            assert ev(u + v) == g.mul(ev(u), ev(v))


def test_hom_to_and_bad_images():
    s3 = G("symmetric 3")
    g, ev = todd_coxeter(Presentation(2, [[A, A], [B] * 3, [A, B] * 2]))
    f = ev.hom_to(s3, [1, 3])
    assert f.is_bijective() and f.hom_witness() is None
    with pytest.raises(NotWellDefined):
        ev.hom_to(s3, [3, 1])


def test_malformed_presentations():
    with pytest.raises(MalformedPresentation):
        Presentation(0, [])
    with pytest.raises(MalformedPresentation):
        Presentation(2, [[1, 3]])
    with pytest.raises(MalformedPresentation):
        Presentation(2, [[1, 0]])


# -- multiplication-table presentations -----------------------------------


def table_presentation(g):
    """All elements as generators, every product as a relator."""
    rels = []
    for x in range(g.order):
        for y in range(g.order):
            rels.append([x + 1, y + 1, -(g.mul(x, y) + 1)])
    return Presentation(g.order, rels)


@pytest.mark.parametrize("spec", ["cyclic 7", "klein", "symmetric 3", "dihedral 4", "quaternion8",
                                  "dihedral 6", "cyclic 12", "symmetric 4", "dihedral 12"])
def test_table_presentation_recovers_group(spec):
    g = G(spec)
    h, ev = todd_coxeter(table_presentation(g))
    assert h.order == g.order
    assert are_isomorphic(h, g)
    # generator x+1 evaluates to an element behaving like x
    f = ev.hom_to(g, list(range(g.order)))
    assert f.is_bijective()


@given(st.integers(1, 12), st.integers(1, 12))
def test_cyclic_products_by_presentation(m, n):
    g, _ = todd_coxeter(Presentation(2, [[A] * m, [B] * n, [A, B, -A, -B]]))
    assert g.order == m * n and g.abelian


@given(st.integers(2, 14))
def test_dihedral_by_presentation(n):
    g, _ = todd_coxeter(Presentation(2, [[A] * n, [B, B], [A, B] * 2]))
    assert are_isomorphic(g, G(f"dihedral {n}"))
