"""Pure-Python finite-field kernels (fallback for the compiled ``_ffkernel``).

Both implementations must agree exactly; ``tests/test_ffkernel.py`` checks this.

Projective points of ``F_p^h`` are enumerated in lexicographic order of their
normalized representatives (first nonzero coordinate equal to 1).  Index 0 is
``(0, ..., 0, 1)``; the last index is ``(1, p-1, ..., p-1)``.
"""


def rank_mod_p(rows, p):
    """Rank of an integer matrix (list of rows) modulo the prime ``p``."""
    m = [[x % p for x in r] for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    r = 0
    for c in range(ncols):
        piv = -1
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv < 0:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        row = [(x * inv) % p for x in m[r]]
        m[r] = row
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                mi = m[i]
                for j in range(c, ncols):
                    mi[j] = (mi[j] - f * row[j]) % p
        r += 1
        if r == nrows:
            break
    return r


def nullspace_mod_p(rows, ncols, p):
    """Basis of the right null space mod ``p`` (one vector per free column)."""
    m = [[x % p for x in r] for r in rows]
    nrows = len(m)
    pivots = []
    r = 0
    for c in range(ncols):
        piv = -1
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv < 0:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = [0] * ncols
        v[f] = 1
        for k, pc in enumerate(pivots):
            v[pc] = (-m[k][f]) % p
        basis.append(v)
    return basis


def num_points(h, p):
    return (p ** h - 1) // (p - 1)


def point_at(index, h, p):
    """Normalized representative of the ``index``-th projective point."""
    for lead in range(h - 1, -1, -1):
        block = p ** (h - 1 - lead)
        if index < block:
            u = [0] * h
            u[lead] = 1
            for pos in range(h - 1, lead, -1):
                u[pos] = index % p
                index //= p
            return u
        index -= block
    raise IndexError("point index out of range")


def first_candidate(D, h, m, p, start):
    """First point index ``>= start`` where ``u -> d(u ∧ ·)`` has rank <= h-2 mod p.

    ``D`` is a flat integer sequence with ``D[(a*h + b)*m + k]`` the k-th
    coordinate of ``d(e_a ∧ e_b)``.  Returns -1 when the search is exhausted.
    """
    total = num_points(h, p)
    Dm = [x % p for x in D]
    for idx in range(start, total):
        u = point_at(idx, h, p)
        mat = [[0] * h for _ in range(m)]
        for a in range(h):
            ua = u[a]
            if not ua:
                continue
            for b in range(h):
                base = (a * h + b) * m
                for k in range(m):
                    v = Dm[base + k]
                    if v:
                        mat[k][b] += ua * v
        if rank_mod_p(mat, p) <= h - 2:
            return idx
    return -1
