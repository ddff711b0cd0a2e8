"""Exterior powers, Koszul differentials, 4x4 Pfaffians and tensor supports.

Conventions used everywhere in the package:

* Wedge bases of ``Λ^p`` are strictly increasing index tuples, ordered
  lexicographically (the order of :func:`itertools.combinations`).
* The Koszul differential removes the k-th factor (1-based) with sign
  ``(-1)**(k-1)`` and multiplies it into the second tensor factor.
* Tensor coordinates ``(I, s)`` are flattened as ``index(I) * dim + s``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from .linalg import SparseMat, Vector, rat, row_space_basis

Wedge = Tuple[int, ...]


@lru_cache(maxsize=None)
def wedge_basis(n: int, p: int) -> Tuple[Wedge, ...]:
    if p < 0 or p > n:
        return ()
    return tuple(combinations(range(n), p))


@lru_cache(maxsize=None)
def wedge_index(n: int, p: int) -> Dict[Wedge, int]:
    return {w: i for i, w in enumerate(wedge_basis(n, p))}


def check_wedge(subset: Sequence[int], ambient_dim: int) -> Wedge:
    w = tuple(int(i) for i in subset)
    if any(a >= b for a, b in zip(w, w[1:])):
        raise ValueError(f"wedge index {w} is not strictly increasing")
    if w and (w[0] < 0 or w[-1] >= ambient_dim):
        raise ValueError(f"wedge index {w} outside ambient dimension {ambient_dim}")
    return w


def sort_sign(seq: Sequence[int]) -> Tuple[int, Wedge]:
    """Sign of the permutation sorting ``seq``; 0 if an index repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0, ()
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign, tuple(sorted(seq))


def det(mat: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(mat)
    if n == 0:
        return Fraction(1)
    m = [list(map(rat, row)) for row in mat]
    sign = 1
    result = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        pv = m[col][col]
        result *= pv
        for r in range(col + 1, n):
            f = m[r][col] / pv
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return sign * result


def wedge_vectors(vectors: Sequence[Sequence], n: int) -> Dict[Wedge, Fraction]:
    """Coordinates of ``v_1 ∧ ... ∧ v_k`` in the wedge basis of ``Λ^k k^n`` (maximal minors)."""
    k = len(vectors)
    if k == 0:
        return {(): Fraction(1)}
    out = {}
    for cols in wedge_basis(n, k):
        d = det([[v[c] for c in cols] for v in vectors])
        if d:
            out[cols] = d
    return out


@dataclass(frozen=True)
class Pairing:
    """A bilinear map ``A x B -> C`` given on basis pairs.

    ``products[(i, j)]`` is the image of ``(a_i, b_j)`` as a dense vector of
    length ``target_dim``; missing pairs map to zero.
    """

    left_dim: int
    right_dim: int
    target_dim: int
    products: Dict[Tuple[int, int], Tuple[Fraction, ...]] = field(default_factory=dict)

    def product(self, i: int, j: int) -> Tuple[Fraction, ...]:
        v = self.products.get((i, j))
        if v is None:
            return (Fraction(0),) * self.target_dim
        return v

    def apply(self, a: Sequence, b: Sequence) -> Vector:
        out = [Fraction(0)] * self.target_dim
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if not bj:
                    continue
                c = ai * bj
                for k, v in enumerate(self.product(i, j)):
                    if v:
                        out[k] += c * v
        return out


def _dims(mult) -> Tuple[int, int, int]:
    if hasattr(mult, "left_dim"):
        return mult.left_dim, mult.right_dim, mult.target_dim
    return mult.dim1, mult.dim1, mult.dim2


@dataclass
class KoszulClass:
    """Sparse element of ``Λ^p V ⊗ V1``: keys are ``(wedge, basis index of V1)``."""

    p: int
    ambient_dim: int
    coeffs: Dict[Tuple[Wedge, int], Fraction] = field(default_factory=dict)
    target_dim: int = -1

    def __post_init__(self):
        if self.target_dim < 0:
            self.target_dim = self.ambient_dim
        clean = {}
        for (w, s), c in self.coeffs.items():
            w = check_wedge(w, self.ambient_dim)
            if len(w) != self.p:
                raise ValueError(f"wedge {w} has size {len(w)}, expected {self.p}")
            if not 0 <= s < self.target_dim:
                raise ValueError(f"second-factor index {s} out of range")
            c = rat(c)
            if c:
                clean[(w, s)] = clean.get((w, s), 0) + c
        self.coeffs = {k: v for k, v in sorted(clean.items()) if v}

    @property
    def ncoords(self) -> int:
        return len(wedge_basis(self.ambient_dim, self.p)) * self.target_dim

    def to_vector(self) -> Vector:
        idx = wedge_index(self.ambient_dim, self.p)
        out = [Fraction(0)] * self.ncoords
        for (w, s), c in self.coeffs.items():
            out[idx[w] * self.target_dim + s] = c
        return out

    @classmethod
    def from_vector(cls, p: int, ambient_dim: int, vec: Sequence, target_dim: int = -1) -> "KoszulClass":
        t = ambient_dim if target_dim < 0 else target_dim
        basis = wedge_basis(ambient_dim, p)
        coeffs = {}
        for k, c in enumerate(vec):
            if c:
                coeffs[(basis[k // t], k % t)] = rat(c)
        return cls(p, ambient_dim, coeffs, t)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "KoszulClass") -> "KoszulClass":
        self._compatible(other)
        c = dict(self.coeffs)
        for k, v in other.coeffs.items():
            c[k] = c.get(k, 0) + v
        return KoszulClass(self.p, self.ambient_dim, c, self.target_dim)

    def __neg__(self) -> "KoszulClass":
        return self.scale(-1)

    def __sub__(self, other: "KoszulClass") -> "KoszulClass":
        return self + (-other)

    def scale(self, a) -> "KoszulClass":
        a = rat(a)
        return KoszulClass(self.p, self.ambient_dim, {k: a * v for k, v in self.coeffs.items()}, self.target_dim)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, KoszulClass)
            and (self.p, self.ambient_dim, self.target_dim) == (other.p, other.ambient_dim, other.target_dim)
            and self.coeffs == other.coeffs
        )

    def _compatible(self, other):
        if (self.p, self.ambient_dim, self.target_dim) != (other.p, other.ambient_dim, other.target_dim):
            raise ValueError("classes live in different tensor spaces")

    def first_factor(self, s: int) -> Dict[Wedge, Fraction]:
        return {w: c for (w, t), c in self.coeffs.items() if t == s}

    @classmethod
    def from_wedge_terms(cls, p: int, n: int, terms, target_dim: int = -1) -> "KoszulClass":
        """Build from ``[(vectors, second_factor_vector, scalar)]`` where
        ``vectors`` are ``p`` elements of V wedged together."""
        t = n if target_dim < 0 else target_dim
        coeffs: Dict[Tuple[Wedge, int], Fraction] = {}
        for vectors, second, scalar in terms:
            wv = wedge_vectors(vectors, n)
            for w, a in wv.items():
                for s, b in enumerate(second):
                    if b:
                        coeffs[(w, s)] = coeffs.get((w, s), 0) + rat(scalar) * a * b
        return cls(p, n, coeffs, t)


@dataclass(frozen=True)
class SkewMap:
    """Alternating map ``Λ^2 k^h -> V1``; only ``i < j`` values are stored."""

    h: int
    target_dim: int
    values: Dict[Tuple[int, int], Tuple[Fraction, ...]] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), v in self.values.items():
            if i == j:
                if any(v):
                    raise ValueError("diagonal of a skew map must vanish")
                continue
            if not (0 <= i < self.h and 0 <= j < self.h):
                raise IndexError(f"pair ({i}, {j}) outside size {self.h}")
            v = tuple(rat(x) for x in v)
            if len(v) != self.target_dim:
                raise ValueError("value has wrong length")
            if i > j:
                i, j, v = j, i, tuple(-x for x in v)
            if any(v):
                clean[(i, j)] = v
        object.__setattr__(self, "values", dict(sorted(clean.items())))

    def entry(self, i: int, j: int) -> Tuple[Fraction, ...]:
        if not (0 <= i < self.h and 0 <= j < self.h):
            raise IndexError(f"pair ({i}, {j}) outside size {self.h}")
        zero = (Fraction(0),) * self.target_dim
        if i == j:
            return zero
        if i < j:
            return self.values.get((i, j), zero)
        return tuple(-x for x in self.values.get((j, i), zero))

    def evaluate(self, x: Sequence, y: Sequence) -> Vector:
        """Bilinear extension: ``d(x ∧ y)``."""
        out = [Fraction(0)] * self.target_dim
        for (i, j), v in self.values.items():
            c = rat(x[i]) * rat(y[j]) - rat(x[j]) * rat(y[i])
            if c:
                for k, a in enumerate(v):
                    if a:
                        out[k] += c * a
        return out

    def row(self, i: int) -> List[Tuple[Fraction, ...]]:
        return [self.entry(i, j) for j in range(self.h)]


def koszul_pairing_differential(p: int, n: int, pairing) -> SparseMat:
    """Matrix of ``Λ^p W ⊗ M1 -> Λ^{p-1} W ⊗ M2`` for a pairing ``W x M1 -> M2``.

    ``n`` is ``dim W``; column ``(I, s)``, row ``(J, m)``.
    """
    wdim, m1, m2 = _dims(pairing)
    if wdim != n:
        raise ValueError(f"pairing has left dimension {wdim}, expected {n}")
    if p < 0:
        raise ValueError("p must be nonnegative")
    src = wedge_basis(n, p)
    tgt = wedge_index(n, p - 1) if p >= 1 else {}
    ent: Dict[Tuple[int, int], Fraction] = {}
    for ci, I in enumerate(src):
        for k, ik in enumerate(I):
            J = I[:k] + I[k + 1:]
            ri = tgt[J]
            sign = 1 if k % 2 == 0 else -1
            for s in range(m1):
                prod = pairing.product(ik, s)
                col = ci * m1 + s
                for m, v in enumerate(prod):
                    if v:
                        key = (ri * m2 + m, col)
                        ent[key] = ent.get(key, 0) + sign * v
    nrows = len(wedge_basis(n, p - 1)) * m2 if p >= 1 else 0
    return SparseMat(nrows, len(src) * m1, ent)


def koszul_differential(p: int, V_dim: int, mult) -> SparseMat:
    """Matrix of ``δ: Λ^p V ⊗ V1 -> Λ^{p-1} V ⊗ V2`` in lexicographic wedge order."""
    if p < 1:
        raise ValueError("p must be at least 1")
    if mult.dim1 != V_dim:
        raise ValueError(f"multiplication table has dim1={mult.dim1}, expected {V_dim}")
    return koszul_pairing_differential(p, V_dim, mult)


def koszul_restriction(p: int, V_dim: int, second_dim: int = -1, inclusion: Sequence[Sequence] = ()) -> SparseMat:
    """Matrix of ``Λ^{p+1} V -> Λ^p V ⊗ V``, ``e_I -> Σ_k (-1)^(k-1) e_{I∖i_k} ⊗ e_{i_k}``.

    With ``inclusion`` (vectors of length ``second_dim``), the second factor
    ``e_{i_k}`` is replaced by ``inclusion[i_k]``; this gives the boundary map
    of a subspace ``W ⊂ V1`` written in W-coordinates.
    """
    if p + 1 > V_dim:
        raise ValueError(f"p+1={p + 1} exceeds dimension {V_dim}")
    t = V_dim if second_dim < 0 else second_dim
    if not inclusion:
        inclusion = [[Fraction(int(i == j)) for j in range(t)] for i in range(V_dim)]
    src = wedge_basis(V_dim, p + 1)
    tgt = wedge_index(V_dim, p)
    ent: Dict[Tuple[int, int], Fraction] = {}
    for ci, I in enumerate(src):
        for k, ik in enumerate(I):
            J = I[:k] + I[k + 1:]
            sign = 1 if k % 2 == 0 else -1
            for s, v in enumerate(inclusion[ik]):
                if v:
                    key = (tgt[J] * t + s, ci)
                    ent[key] = ent.get(key, 0) + sign * rat(v)
    return SparseMat(len(tgt) * t, len(src), ent)


def apply_differential(c: KoszulClass, mult) -> Dict[Tuple[Wedge, int], Fraction]:
    """``δ(c)`` as a sparse map ``(wedge of size p-1, V2 index) -> coefficient``."""
    out: Dict[Tuple[Wedge, int], Fraction] = {}
    for (I, s), a in c.coeffs.items():
        for k, ik in enumerate(I):
            J = I[:k] + I[k + 1:]
            sign = 1 if k % 2 == 0 else -1
            for m, v in enumerate(mult.product(ik, s)):
                if v:
                    out[(J, m)] = out.get((J, m), 0) + sign * a * v
    return {k: v for k, v in sorted(out.items()) if v}


def quadric_product(a: Sequence, b: Sequence, n: int) -> Dict[Tuple[int, int], Fraction]:
    """``a·b`` in the free quadric space S^2 V, keyed by monomials ``(i <= j)``."""
    out: Dict[Tuple[int, int], Fraction] = {}
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if not y:
                continue
            key = (i, j) if i <= j else (j, i)
            out[key] = out.get(key, 0) + rat(x) * rat(y)
    return {k: v for k, v in out.items() if v}


def pfaffian4(a: SkewMap, i: int, j: int, k: int, l: int, mult) -> Vector:
    """``a_ij a_kl - a_ik a_jl + a_il a_jk`` evaluated in V2 through ``mult``.

    Indices need not be sorted; the alternating extension is used, so an odd
    permutation flips the sign and a repeated index gives zero.
    """
    for x in (i, j, k, l):
        if not 0 <= x < a.h:
            raise IndexError(f"index {x} outside size {a.h}")
    out = [Fraction(0)] * mult.dim2
    for sgn, (p1, p2) in ((1, ((i, j), (k, l))), (-1, ((i, k), (j, l))), (1, ((i, l), (j, k)))):
        for m, v in enumerate(_mult_apply(mult, a.entry(*p1), a.entry(*p2))):
            if v:
                out[m] += sgn * v
    return out


def pfaffian4_free(a: SkewMap, i: int, j: int, k: int, l: int) -> Dict[Tuple[int, int], Fraction]:
    """The same Pfaffian as an element of the free quadric space S^2 V1."""
    out: Dict[Tuple[int, int], Fraction] = {}
    for sgn, (p1, p2) in ((1, ((i, j), (k, l))), (-1, ((i, k), (j, l))), (1, ((i, l), (j, k)))):
        for key, v in quadric_product(a.entry(*p1), a.entry(*p2), a.target_dim).items():
            out[key] = out.get(key, 0) + sgn * v
    return {k_: v for k_, v in sorted(out.items()) if v}


def _mult_apply(mult, x: Sequence, y: Sequence) -> Vector:
    out = [Fraction(0)] * mult.dim2
    for i, a in enumerate(x):
        if not a:
            continue
        for j, b in enumerate(y):
            if not b:
                continue
            c = a * b
            for m, v in enumerate(mult.product(i, j)):
                if v:
                    out[m] += c * v
    return out


def contractions(omega: Dict[Wedge, Fraction], n: int, p: int) -> List[Vector]:
    """All contractions of a p-vector by (p-1)-fold wedges of dual basis vectors.

    ``e_{J ∪ i} = sign · e_J ∧ e_i`` with ``sign = (-1)^{#(j in J, j > i)}``.
    """
    out: Dict[Wedge, Vector] = {}
    for I, c in omega.items():
        for pos, i in enumerate(I):
            J = I[:pos] + I[pos + 1:]
            sign = -1 if (p - 1 - pos) % 2 else 1
            vec = out.setdefault(J, [Fraction(0)] * n)
            vec[i] += sign * c
    return [v for _, v in sorted(out.items()) if any(v)]


def support(c: KoszulClass) -> List[Vector]:
    """Smallest W ⊂ V with ``c ∈ Λ^p W ⊗ V1``, as an RREF basis."""
    if c.is_zero():
        raise ValueError("support of the zero class is undefined")
    vecs: List[Vector] = []
    for s in range(c.target_dim):
        omega = c.first_factor(s)
        if omega:
            vecs.extend(contractions(omega, c.ambient_dim, c.p))
    return row_space_basis(vecs, c.ambient_dim)
