"""Compiled Felsch-style coset enumeration over the trivial subgroup.

Columns: 2k is generator k, 2k+1 its inverse. Relator cyclic conjugates are
grouped by first letter so a new table entry (c, x) triggers exactly the
scans that can be affected by it.
"""

import numpy as np
from numba import njit

UNDEF = -1
STATUS_OK = 0
STATUS_OVERFLOW = 1


@njit(cache=True, inline='always')
def _rep(p, k):
    r = k
    while p[r] != r:
        r = p[r]
    while p[k] != r:  # path compression
        nxt = p[k]
        p[k] = r
        k = nxt
    return r


@njit(cache=True, inline='always')
def _merge(p, q, st, a, b):
    # st[0]=nalloc st[1]=nlive st[2]=qlen st[3]=dtop st[4]=dlost
    ra = _rep(p, a)
    rb = _rep(p, b)
    if ra != rb:
        if ra < rb:
            p[rb] = ra
            q[st[2]] = rb
        else:
            p[ra] = rb
            q[st[2]] = ra
        st[2] += 1
        st[1] -= 1


@njit(cache=True, inline='always')
def _push(dc, dx, st, c, x):
    if st[3] < dc.shape[0]:
        dc[st[3]] = c
        dx[st[3]] = x
        st[3] += 1
    else:
        st[4] = 1


@njit(cache=True)
def _coincidence(table, inv, p, q, dc, dx, st, a, b):
    ncols = table.shape[1]
    st[2] = 0
    _merge(p, q, st, a, b)
    i = 0
    while i < st[2]:
        g = q[i]
        i += 1
        for x in range(ncols):
            d = table[g, x]
            if d >= 0:
                xi = inv[x]
                if table[d, xi] == g:
                    table[d, xi] = UNDEF
                mu = _rep(p, g)
                nu = _rep(p, d)
                if table[mu, x] >= 0:
                    _merge(p, q, st, nu, table[mu, x])
                elif table[nu, xi] >= 0:
                    _merge(p, q, st, mu, table[nu, xi])
                else:
                    table[mu, x] = nu
                    table[nu, xi] = mu
                    _push(dc, dx, st, mu, x)


@njit(cache=True, inline='always')
def _scan(table, inv, p, q, dc, dx, st, a, word, start, length):
    f = a
    i = start
    end = start + length - 1
    j = end
    while i <= j and table[f, word[i]] >= 0:
        f = table[f, word[i]]
        i += 1
    if i > j:
        if f != a:
            _coincidence(table, inv, p, q, dc, dx, st, f, a)
        return
    b = a
    while j >= i and table[b, inv[word[j]]] >= 0:
        b = table[b, inv[word[j]]]
        j -= 1
    if j < i:
        _coincidence(table, inv, p, q, dc, dx, st, f, b)
    elif i == j:
        table[f, word[i]] = b
        table[b, inv[word[i]]] = f
        _push(dc, dx, st, f, word[i])


@njit(cache=True)
def _process(table, inv, p, q, dc, dx, st, words, woff, wlen, first_off, first_idx):
    while st[3] > 0:
        st[3] -= 1
        c = dc[st[3]]
        x = dx[st[3]]
        if p[c] != c:
            continue
        for k in range(first_off[x], first_off[x + 1]):
            w = first_idx[k]
            _scan(table, inv, p, q, dc, dx, st, c, words, woff[w], wlen[w])
            if p[c] != c:
                break
        if p[c] != c:
            continue
        d = table[c, x]
        if d >= 0 and p[d] == d:
            xi = inv[x]
            for k in range(first_off[xi], first_off[xi + 1]):
                w = first_idx[k]
                _scan(table, inv, p, q, dc, dx, st, d, words, woff[w], wlen[w])
                if p[d] != d:
                    break


@njit(cache=True)
def _full_scan(table, inv, p, q, dc, dx, st, words, woff, wlen, first_off, first_idx):
    # lookahead over every live coset and every conjugate
    nw = woff.shape[0]
    c = 0
    while c < st[0]:
        if p[c] == c:
            for w in range(nw):
                _scan(table, inv, p, q, dc, dx, st, c, words, woff[w], wlen[w])
                _process(table, inv, p, q, dc, dx, st, words, woff, wlen, first_off, first_idx)
                if p[c] != c:
                    break
        c += 1


@njit(cache=True)
def _compact(table, p, st, keep):
    """Renumber live cosets in order; returns the new index of coset `keep`."""
    n = st[0]
    newidx = np.full(n, -1, dtype=np.int64)
    m = 0
    for c in range(n):
        if p[c] == c:
            newidx[c] = m
            m += 1
    newkeep = m
    for c in range(keep, n):
        if newidx[c] >= 0:
            newkeep = newidx[c]
            break
    ncols = table.shape[1]
    for c in range(n):
        if newidx[c] >= 0:
            t = newidx[c]
            for x in range(ncols):
                v = table[c, x]
                if v >= 0:
                    table[t, x] = newidx[_rep(p, v)]
                else:
                    table[t, x] = UNDEF
    for c in range(m, n):
        for x in range(ncols):
            table[c, x] = UNDEF
    for c in range(table.shape[0]):
        p[c] = c
    st[0] = m
    st[1] = m
    return newkeep


@njit(cache=True)
def enumerate_cosets(ncols, inv, words, woff, wlen, first_off, first_idx, max_cosets, init_cap, stack_size, force_full):
    cap = min(init_cap, max_cosets + 1)
    table = np.full((cap, ncols), UNDEF, dtype=np.int32)
    p = np.arange(cap).astype(np.int32)
    q = np.zeros(cap, dtype=np.int32)
    dc = np.zeros(stack_size, dtype=np.int32)
    dx = np.zeros(stack_size, dtype=np.int32)
    st = np.zeros(8, dtype=np.int64)  # [5]=cosets defined [6]=peak live [7]=passes
    st[0] = 1
    st[1] = 1
    while True:
        st[7] += 1
        c = 0
        while c < st[0]:
            if p[c] == c:
                for x in range(ncols):
                    if p[c] != c:
                        break
                    if table[c, x] >= 0:
                        continue
                    if st[1] >= max_cosets:
                        return STATUS_OVERFLOW, table, st[0], st
                    if st[0] >= cap:
                        c = _compact(table, p, st, c)
                        if st[0] >= cap:
                            newcap = min(2 * cap, max_cosets + 1)
                            t2 = np.full((newcap, ncols), UNDEF, dtype=np.int32)
                            t2[:cap] = table
                            table = t2
                            p = np.arange(newcap).astype(np.int32)
                            q = np.zeros(newcap, dtype=np.int32)
                            cap = newcap
                    d = st[0]
                    st[0] += 1
                    st[1] += 1
                    st[5] += 1
                    if st[1] > st[6]:
                        st[6] = st[1]
                    table[c, x] = d
                    table[d, inv[x]] = c
                    _push(dc, dx, st, c, x)
                    _process(table, inv, p, q, dc, dx, st, words, woff, wlen, first_off, first_idx)
            c += 1
        # without lost deductions every relator has been traced at every coset;
        # otherwise run a full lookahead and restart if it changed anything
        if st[4] == 0 and force_full == 0:
            _compact(table, p, st, 0)
            return STATUS_OK, table, st[0], st
        before_live = st[1]
        st[4] = 0
        _full_scan(table, inv, p, q, dc, dx, st, words, woff, wlen, first_off, first_idx)
        _compact(table, p, st, 0)
        complete = True
        for r in range(st[0]):
            for x in range(ncols):
                if table[r, x] < 0:
                    complete = False
        if complete and st[1] == before_live and st[4] == 0:
            return STATUS_OK, table, st[0], st


@njit(cache=True)
def spanning_tree(table):
    """BFS tree from coset 0: (parent, letter, order)."""
    n, ncols = table.shape
    parent = np.full(n, -1, dtype=np.int64)
    letter = np.full(n, -1, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    seen = np.zeros(n, dtype=np.bool_)
    order[0] = 0
    seen[0] = True
    tail = 1
    i = 0
    while i < tail:
        c = order[i]
        for x in range(ncols):
            d = table[c, x]
            if not seen[d]:
                seen[d] = True
                parent[d] = c
                letter[d] = x
                order[tail] = d
                tail += 1
        i += 1
    return parent, letter, order[:tail]
