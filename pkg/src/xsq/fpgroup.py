"""Finitely presented groups and coset enumeration.

Words are lists of signed 1-based generator indices: ``+k`` is generator k,
``-k`` its inverse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _felsch
from .config import DEFAULT
from .errors import IndexOutOfRange, MalformedPresentation, NotWellDefined, Overflow, TooLarge
from .groups import IDX, FiniteGroup, GroupHom, _group_from_trusted


@dataclass
class Presentation:
    ngens: int
    relators: list
    generator_names: Optional[list] = None

    def __post_init__(self):
        if self.ngens < 1:
            raise MalformedPresentation("ngens must be positive")
        rels = []
        for r in self.relators:
            word = [int(v) for v in r]
            for v in word:
                if v == 0 or abs(v) > self.ngens:
                    raise MalformedPresentation(f"letter {v} out of range", witness=word)
            rels.append(word)
        self.relators = rels

    def to_dict(self):
        d = {"ngens": self.ngens, "relators": self.relators}
        if self.generator_names:
            d["generator_names"] = list(self.generator_names)
        return d


def _letter(v: int) -> int:
    return 2 * (v - 1) if v > 0 else 2 * (-v - 1) + 1


def _free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == x ^ 1:
            out.pop()
        else:
            out.append(x)
    while len(out) >= 2 and out[0] == out[-1] ^ 1:
        out = out[1:-1]
    return out


def _conjugates(relators):
    """Distinct cyclic conjugates of every relator and its inverse, as letter tuples."""
    seen = {}
    for r in relators:
        w = _free_reduce([_letter(v) for v in r])
        if not w:
            continue
        winv = [x ^ 1 for x in reversed(w)]
        for base in (w, winv):
            for s in range(len(base)):
                c = tuple(base[s:] + base[:s])
                seen.setdefault(c, None)
    return list(seen)


@dataclass
class CosetTable:
    presentation: Presentation
    table: np.ndarray  # live cosets x 2*ngens
    status: str = "complete"
    coset_count: int = 0
    parent: np.ndarray = field(default=None, repr=False)
    letter: np.ndarray = field(default=None, repr=False)
    bfs: np.ndarray = field(default=None, repr=False)
    stats: dict = field(default_factory=dict, repr=False)

    def relator_failures(self):
        """(relator index, coset) pairs where a relator does not close; empty when valid."""
        n = self.table.shape[0]
        start = np.arange(n)
        by_len: dict = {}
        for i, r in enumerate(self.presentation.relators):
            by_len.setdefault(len(r), []).append(i)
        bad = []
        for length, idx in by_len.items():
            letters = np.array([[_letter(v) for v in self.presentation.relators[i]] for i in idx],
                               dtype=np.int64).reshape(len(idx), length)
            cur = np.broadcast_to(start, (len(idx), n))
            for k in range(length):
                cur = self.table[cur, letters[:, k : k + 1]]
            rows, cols = np.nonzero(cur != start)
            seen = set()
            for r, c in zip(rows.tolist(), cols.tolist()):
                if r not in seen:
                    seen.add(r)
                    bad.append((idx[r], c))
        return sorted(bad)


def coset_enumeration(p: Presentation, max_cosets: Optional[int] = None,
                      check: Optional[Presentation] = None) -> CosetTable:
    """Enumerate the cosets of the trivial subgroup.

    The finished table is verified against the relators of ``check`` (default
    ``p``); a presentation of the same group with more relators may be given.
    """
    check = p if check is None else check
    if check.ngens != p.ngens:
        raise MalformedPresentation("check presentation has a different generator count")
    max_cosets = DEFAULT.max_cosets if max_cosets is None else int(max_cosets)
    if max_cosets < 1:
        raise ValueError("max_cosets must be >= 1")
    ncols = 2 * p.ngens
    inv = np.array([x ^ 1 for x in range(ncols)], dtype=np.int32)
    conj = _conjugates(p.relators)
    conj.sort(key=lambda c: c[0])  # stable: keeps discovery order inside a letter
    words = np.array([x for c in conj for x in c], dtype=np.int32)
    wlen = np.array([len(c) for c in conj], dtype=np.int64)
    woff = np.concatenate([[0], np.cumsum(wlen)[:-1]]).astype(np.int64) if conj else np.zeros(0, np.int64)
    firsts = np.array([c[0] for c in conj], dtype=np.int64)
    first_off = np.searchsorted(firsts, np.arange(ncols + 1)).astype(np.int64)
    first_idx = np.arange(len(conj), dtype=np.int64)
    if words.size == 0:
        words = np.zeros(1, dtype=np.int32)
    for force_full in (0, 1):
        status, table, n, stats = _felsch.enumerate_cosets(
            ncols, inv, words, woff, wlen, first_off, first_idx,
            max_cosets, 1024, 1 << 16, force_full,
        )
        if status == _felsch.STATUS_OVERFLOW:
            raise Overflow(
                f"coset enumeration exceeded {max_cosets} live cosets (group may be infinite or the bound too small)",
                witness=max_cosets,
            )
        table = np.ascontiguousarray(table[:n])
        ct = CosetTable(check, table, "complete", int(n))
        ct.stats = {"defined": int(stats[5]), "peak": int(stats[6]), "passes": int(stats[7])}
        if (table >= 0).all() and not ct.relator_failures():
            break
    else:  # pragma: no cover - the lookahead pass always closes the table
        raise RuntimeError("coset enumeration produced an inconsistent table")
    ct.parent, ct.letter, ct.bfs = _spanning_tree(table)
    return ct


def _spanning_tree(table):
    return _felsch.spanning_tree(np.ascontiguousarray(table, dtype=np.int32))


class WordEvaluator:
    """Sends words in the generators to elements of the enumerated group."""

    def __init__(self, cosets: CosetTable, group: FiniteGroup):
        self.cosets = cosets
        self.group = group

    def __call__(self, word: Sequence[int]) -> int:
        return word_eval(self.cosets, word)

    def generator(self, k: int) -> int:
        """Element of generator k (1-based)."""
        return int(self.cosets.table[0, _letter(k)])

    def hom_to(self, H: FiniteGroup, images: Sequence[int], check: bool = True) -> GroupHom:
        """The hom sending generator k (1-based) to images[k-1].

        With ``check`` every relator is evaluated in ``H``; a non-trivial value
        raises NotWellDefined with the relator as witness.
        """
        images = np.asarray(images, dtype=np.int64)
        ncols = self.cosets.table.shape[1]
        col_img = np.empty(ncols, dtype=np.int64)
        col_img[0::2] = images
        col_img[1::2] = H.inverse[images]
        if check:
            for i, r in enumerate(self.cosets.presentation.relators):
                v = H.identity
                for s in r:
                    v = H.table[v, col_img[_letter(s)]]
                if v != H.identity:
                    raise NotWellDefined(f"relator {i} is not sent to the identity", witness={"relator": r, "value": int(v)})
        parent, letter, bfs = self.cosets.parent, self.cosets.letter, self.cosets.bfs
        out = np.empty(self.cosets.coset_count, dtype=IDX)
        out[0] = H.identity
        for c in bfs[1:]:
            out[c] = H.table[out[parent[c]], col_img[letter[c]]]
        return GroupHom(self.group, H, out)


def word_eval(ct: CosetTable, word: Sequence[int]) -> int:
    if ct.status != "complete":
        raise ValueError("coset table is not complete")
    c = 0
    ng = ct.presentation.ngens
    for v in word:
        v = int(v)
        if v == 0 or abs(v) > ng:
            raise IndexOutOfRange(f"letter {v} out of range 1..{ng}", witness=v)
        c = int(ct.table[c, _letter(v)])
    return c


def group_from_cosets(ct: CosetTable, order_bound: Optional[int] = None, name=None) -> FiniteGroup:
    """Regular representation: coset i is the element reached from coset 0 along its tree word.

    Columns are built by composing coset permutations, so the table is
    associative by construction.
    """
    n = ct.coset_count
    bound = DEFAULT.order_bound if order_bound is None else order_bound
    if n > bound:
        raise TooLarge(f"enumerated group has order {n} > bound {bound}", witness=n)
    # row c of the transpose is the column of element c
    tt = np.empty((n, n), dtype=IDX)
    tt[0] = np.arange(n)
    parent, letter, bfs = ct.parent, ct.letter, ct.bfs
    ctab = ct.table
    for c in bfs[1:]:
        tt[c] = ctab[tt[parent[c]], letter[c]]
    return _group_from_trusted(np.ascontiguousarray(tt.T), 0, name=name)


def todd_coxeter(p: Presentation, max_cosets: Optional[int] = None, order_bound: Optional[int] = None):
    """Enumerate the presented group; returns (FiniteGroup, WordEvaluator)."""
    ct = coset_enumeration(p, max_cosets)
    G = group_from_cosets(ct, order_bound)
    return G, WordEvaluator(ct, G)
