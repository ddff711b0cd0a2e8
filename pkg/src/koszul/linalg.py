"""
Exact linear algebra over the rationals.

Scalars are :class:`fractions.Fraction` (always in lowest terms with a
positive denominator).  Matrices are stored sparsely as a map
``(row, col) -> Fraction`` with no stored zeros.  Elimination is pivoted
Gauss-Jordan on sparse rows; for small inputs a dense path is used, and both
paths produce the same reduced echelon form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Rat = Fraction
Vector = List[Fraction]

DENSE_THRESHOLD = 24


def rat(x) -> Fraction:
    """Coerce ``x`` to a Fraction; strings may be ``"p/q"`` or ``"p"``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floating point scalars are not accepted")
    return Fraction(x)


def format_rat(x: Fraction) -> str:
    x = rat(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class SparseMat:
    nrows: int
    ncols: int
    entries: Dict[Tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.nrows and 0 <= j < self.ncols):
                raise IndexError(f"entry ({i}, {j}) outside {self.nrows}x{self.ncols}")
            v = rat(v)
            if v:
                clean[(i, j)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "SparseMat":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        ent = {}
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            for j, v in enumerate(row):
                v = rat(v)
                if v:
                    ent[(i, j)] = v
        return cls(nrows, ncols, ent)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> "SparseMat":
        ent = {}
        for j, col in enumerate(columns):
            if len(col) != nrows:
                raise ValueError("column length mismatch")
            for i, v in enumerate(col):
                if v:
                    ent[(i, j)] = rat(v)
        return cls(nrows, len(columns), ent)

    @classmethod
    def from_sparse_columns(cls, columns: Sequence[Dict[int, Fraction]], nrows: int) -> "SparseMat":
        ent = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    ent[(i, j)] = rat(v)
        return cls(nrows, len(columns), ent)

    def to_dense(self) -> List[List[Fraction]]:
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def rows(self) -> List[Dict[int, Fraction]]:
        out: List[Dict[int, Fraction]] = [{} for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def transpose(self) -> "SparseMat":
        return SparseMat(self.ncols, self.nrows, {(j, i): v for (i, j), v in self.entries.items()})

    def matvec(self, x: Sequence) -> Vector:
        if len(x) != self.ncols:
            raise ValueError(f"vector of length {len(x)} for {self.ncols} columns")
        out = [Fraction(0)] * self.nrows
        for (i, j), v in self.entries.items():
            xj = x[j]
            if xj:
                out[i] += v * xj
        return out

    def matmul(self, other: "SparseMat") -> "SparseMat":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matmul")
        orows = other.rows()
        acc: Dict[Tuple[int, int], Fraction] = {}
        for (i, k), v in self.entries.items():
            for j, w in orows[k].items():
                acc[(i, j)] = acc.get((i, j), 0) + v * w
        return SparseMat(self.nrows, other.ncols, acc)

    def is_zero(self) -> bool:
        return not self.entries


def _rref_sparse(rows: List[Dict[int, Fraction]], ncols: int):
    """Reduced row echelon form of sparse rows; returns (rref rows, pivots)."""
    work = [dict(r) for r in rows if r]
    pivots: List[int] = []
    reduced: List[Dict[int, Fraction]] = []
    for col in range(ncols):
        # smallest-support pivot row keeps fill-in down; ties broken by position
        best = None
        for idx, r in enumerate(work):
            if col in r and (best is None or len(r) < len(work[best])):
                best = idx
        if best is None:
            continue
        prow = work.pop(best)
        inv = 1 / prow[col]
        prow = {c: v * inv for c, v in prow.items()}
        for r in work:
            f = r.get(col)
            if f:
                for c, v in prow.items():
                    nv = r.get(c, 0) - f * v
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
        work = [r for r in work if r]
        for r in reduced:
            f = r.get(col)
            if f:
                for c, v in prow.items():
                    nv = r.get(c, 0) - f * v
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
        reduced.append(prow)
        pivots.append(col)
        if not work:
            break
    return reduced, pivots


def _rref_dense(rows: List[Dict[int, Fraction]], ncols: int):
    mat = [[r.get(c, Fraction(0)) for c in range(ncols)] for r in rows]
    m = len(mat)
    pivots: List[int] = []
    prow = 0
    for col in range(ncols):
        if prow >= m:
            break
        sel = None
        for i in range(prow, m):
            if mat[i][col]:
                sel = i
                break
        if sel is None:
            continue
        mat[prow], mat[sel] = mat[sel], mat[prow]
        inv = 1 / mat[prow][col]
        mat[prow] = [v * inv for v in mat[prow]]
        for i in range(m):
            if i != prow and mat[i][col]:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[prow])]
        pivots.append(col)
        prow += 1
    reduced = [{c: v for c, v in enumerate(mat[i]) if v} for i in range(prow)]
    return reduced, pivots


def rref(m: SparseMat):
    """Return ``(rows, pivots)`` of the reduced row echelon form of ``m``.

    The RREF is unique, so the dense and sparse paths agree exactly.
    """
    rows = m.rows()
    if m.nrows * m.ncols <= DENSE_THRESHOLD * DENSE_THRESHOLD:
        return _rref_dense(rows, m.ncols)
    return _rref_sparse(rows, m.ncols)


def rank(m: SparseMat) -> int:
    return len(rref(m)[1])


def kernel_basis(m: SparseMat) -> List[Vector]:
    """Basis of the right null space, one vector per free column.

    Each vector has a 1 in its free column and zeros in the other free
    columns, so the list is in reduced echelon form up to row order.
    """
    red, pivots = rref(m)
    pivset = set(pivots)
    basis = []
    for f in range(m.ncols):
        if f in pivset:
            continue
        v = [Fraction(0)] * m.ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            c = row.get(f)
            if c:
                v[pc] = -c
        basis.append(v)
    return basis


def solve(m: SparseMat, b: Sequence) -> Optional[Vector]:
    """Some ``x`` with ``m x = b``, free variables zero; ``None`` if inconsistent."""
    if len(b) != m.nrows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m.nrows}")
    rows = m.rows()
    n = m.ncols
    aug = []
    for r, bi in zip(rows, b):
        r = dict(r)
        bi = rat(bi)
        if bi:
            r[n] = bi
        aug.append(r)
    red, pivots = rref(SparseMat(m.nrows, n + 1, {(i, c): v for i, r in enumerate(aug) for c, v in r.items()}))
    if pivots and pivots[-1] == n:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(red, pivots):
        x[pc] = row.get(n, Fraction(0))
    return x


def membership(v: Sequence, span: Sequence[Sequence]) -> bool:
    if not any(v):
        return True
    if not span:
        return False
    n = len(v)
    if any(len(s) != n for s in span):
        raise ValueError("vectors of unequal length")
    return solve(SparseMat.from_columns(span, n), v) is not None


def row_space_basis(vectors: Iterable[Sequence], dim: int) -> List[Vector]:
    """Echelon-normalized (RREF) basis of the span of ``vectors``."""
    vecs = [list(map(rat, v)) for v in vectors]
    if not vecs:
        return []
    red, _ = rref(SparseMat.from_dense(vecs))
    return [[row.get(c, Fraction(0)) for c in range(dim)] for row in red]


class SpanReducer:
    """Incremental echelon basis of a growing span, for membership tests."""

    def __init__(self, vectors: Iterable[Sequence] = ()):
        self._pivots: Dict[int, Dict[int, Fraction]] = {}
        for v in vectors:
            self.add(v)

    @property
    def dim(self) -> int:
        return len(self._pivots)

    def reduce(self, vec) -> Dict[int, Fraction]:
        if isinstance(vec, dict):
            r = {i: rat(c) for i, c in vec.items() if c}
        else:
            r = {i: rat(c) for i, c in enumerate(vec) if c}
        done: Dict[int, Fraction] = {}
        while r:
            lead = min(r)
            prow = self._pivots.get(lead)
            if prow is None:
                done[lead] = r.pop(lead)
                continue
            f = r[lead]
            for c, val in prow.items():
                nv = r.get(c, 0) - f * val
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
        return done

    def add(self, vec) -> bool:
        """Add ``vec``; return True if it enlarged the span."""
        r = self.reduce(vec)
        if not r:
            return False
        lead = min(r)
        inv = 1 / r[lead]
        self._pivots[lead] = {c: val * inv for c, val in r.items()}
        return True

    def contains(self, vec) -> bool:
        return not self.reduce(vec)


def independent_prefix(vectors: Sequence[Sequence], base: Sequence[Sequence] = ()) -> List[int]:
    """Indices of ``vectors`` that enlarge the span of ``base`` (greedy, in order)."""
    red = SpanReducer(base)
    return [idx for idx, vec in enumerate(vectors) if red.add(vec)]


def columns(m: SparseMat) -> List[Dict[int, Fraction]]:
    cols: List[Dict[int, Fraction]] = [{} for _ in range(m.ncols)]
    for (i, j), v in m.entries.items():
        cols[j][i] = v
    return cols


def vec_is_zero(v: Iterable) -> bool:
    return not any(v)


def vec_add(a: Sequence, b: Sequence, scale=1) -> Vector:
    return [x + scale * y for x, y in zip(a, b)]
