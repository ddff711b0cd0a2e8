"""Koszul classes from determinant data, line-bundle splittings and skew matrices.

A rank-2 bundle E never appears as an object.  Its computational content is a
:class:`DeterminantDatum`: a space H (standing in for sections of E) with an
alternating map ``d: Λ^2 H -> V1`` that satisfies the four-term relation.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

from . import ffield
from .core import PreconditionError, compute_K_p1_mixed
from .linalg import (
    SpanReducer,
    SparseMat,
    independent_prefix,
    kernel_basis,
    rank,
    rat,
    solve,
)
from .models import (
    CurveModel,
    MultTable,
    base_locus_rational,
    binary_form_mult,
    free_mult,
    mult_table,
)
from .multilinear import (
    KoszulClass,
    Pairing,
    SkewMap,
    apply_differential,
    pfaffian4,
    pfaffian4_free,
    sort_sign,
    support,
    wedge_basis,
    wedge_vectors,
)


class FourTermError(ValueError):
    """The determinant map violates the four-term relation."""


def _unit(i: int, n: int) -> List[Fraction]:
    return [Fraction(int(k == i)) for k in range(n)]


def _vec(v: Sequence) -> List[Fraction]:
    return [rat(x) for x in v]


@dataclass(frozen=True)
class DeterminantDatum:
    d: SkewMap
    mult: MultTable
    strict: bool = True

    def __post_init__(self):
        if self.d.target_dim != self.mult.dim1:
            raise ValueError("determinant map does not land in V1 of the table")
        if self.strict and not check_four_term(self):
            raise FourTermError("d violates the four-term relation")

    @property
    def H_dim(self) -> int:
        return self.d.h

    def d_t(self, t: Sequence, u: Sequence) -> List[Fraction]:
        return self.d.evaluate(t, u)


@dataclass(frozen=True)
class SplitDatum:
    """Sections of L1 and L2 with their product ``H^0(L1) x H^0(L2) -> V1``."""

    mult12: Pairing
    mult: MultTable
    rational_degrees: Optional[Tuple[int, int]] = None

    @property
    def r1(self) -> int:
        return self.mult12.left_dim - 1

    @property
    def r2(self) -> int:
        return self.mult12.right_dim - 1

    @property
    def H_dim(self) -> int:
        return self.mult12.left_dim + self.mult12.right_dim


def split_rational(d1: int, d2: int) -> SplitDatum:
    """``O(d1) ⊕ O(d2)`` on the projective line, with L = O(d1 + d2)."""
    if d1 < 0 or d2 < 0 or d1 + d2 < 1:
        raise ValueError("degrees must be nonnegative with positive sum")
    return SplitDatum(binary_form_mult(d1, d2), mult_table(CurveModel.rational(d1 + d2)), (d1, d2))


def datum_from_split(s: SplitDatum) -> DeterminantDatum:
    """``d((a1, a2) ∧ (b1, b2)) = a1·b2 - b1·a2``."""
    n1 = s.mult12.left_dim
    vals = {}
    for (i, j), v in s.mult12.products.items():
        vals[(i, n1 + j)] = v
    return DeterminantDatum(SkewMap(s.H_dim, s.mult.dim1, vals), s.mult)


def pullback(datum: DeterminantDatum, M: Sequence[Sequence], strict: bool = True) -> DeterminantDatum:
    """Precompose d with a linear map given by the images ``M[a]`` of new basis vectors."""
    h = len(M)
    vals = {}
    for a in range(h):
        for b in range(a + 1, h):
            v = datum.d.evaluate(M[a], M[b])
            if any(v):
                vals[(a, b)] = tuple(v)
    return DeterminantDatum(SkewMap(h, datum.d.target_dim, vals), datum.mult, strict)


def check_four_term(datum: DeterminantDatum) -> bool:
    """Four-term relation on all basis 4-tuples.

    The relation is multilinear and vanishes when two arguments coincide, so
    it suffices to test ``i < j < k < l``, where it is the 4x4 Pfaffian.
    """
    for i, j, k, l in combinations(range(datum.d.h), 4):
        if any(pfaffian4(datum.d, i, j, k, l, datum.mult)):
            return False
    return True


def voisin_subspace(datum: DeterminantDatum, t: Sequence, U: Sequence[Sequence]) -> List[List[Fraction]]:
    """``W = d_t(U)``; raises if ``U`` meets ``ker d_t``."""
    h = datum.H_dim
    if len(t) != h or any(len(u) != h for u in U):
        raise PreconditionError("t and U must be vectors of length dim H")
    W = [datum.d_t(t, u) for u in U]
    if W and rank(SparseMat.from_dense(W)) != len(U):
        raise PreconditionError("U meets the kernel of d_t")
    return W


def build_voisin_class(datum: DeterminantDatum, t: Sequence, U: Sequence[Sequence], p: int) -> KoszulClass:
    """The class γ(W, t) with W = d_t(U) and e_1 = t, e_2.. = U."""
    if p < 1:
        raise PreconditionError("p must be at least 1")
    if len(U) != p + 2:
        raise PreconditionError(f"dim U = {len(U)}, expected p+2 = {p + 2}")
    t = _vec(t)
    U = [_vec(u) for u in U]
    W = voisin_subspace(datum, t, U)
    n = datum.mult.dim1
    terms = []
    for a, b in combinations(range(p + 2), 2):
        rest = [W[k] for k in range(p + 2) if k not in (a, b)]
        sign = -1 if (a + b) % 2 else 1
        terms.append((rest, datum.d.evaluate(U[a], U[b]), sign))
    gamma = KoszulClass.from_wedge_terms(p, n, terms)
    if apply_differential(gamma, datum.mult):
        raise FourTermError("constructed class is not a cycle; the datum violates the four-term relation")
    return gamma


def _as_section(x, n: int) -> List[Fraction]:
    if isinstance(x, int):
        if not 0 <= x < n:
            raise PreconditionError(f"section index {x} out of range")
        return _unit(x, n)
    v = _vec(x)
    if len(v) != n:
        raise PreconditionError("section vector has the wrong length")
    return v


@dataclass
class GLResult:
    cls: KoszulClass
    t: List[Fraction]
    U: List[List[Fraction]]
    W: List[List[Fraction]]
    p: int


def build_gl_class(s: SplitDatum, s1=0, s2=None) -> GLResult:
    """Green-Lazarsfeld class γ(W, t) with ``t = (s1, s2)`` and ``W = im d_t``.

    ``s1``/``s2`` are basis indices or coefficient vectors; the default pair
    on rational models is ``(x^d1, y^d2)``, which has empty base divisor.
    """
    n1, n2 = s.mult12.left_dim, s.mult12.right_dim
    if s.r1 < 1 or s.r2 < 1:
        raise PreconditionError("both line bundles need r_i >= 1")
    if s2 is None:
        s2 = n2 - 1
    a = _as_section(s1, n1)
    b = _as_section(s2, n2)
    if not any(a) or not any(b):
        raise PreconditionError("chosen sections must be nonzero")
    if s.rational_degrees is not None:
        B = base_locus_rational([a, b])
        if not B.is_empty():
            raise PreconditionError(
                f"sections share a base divisor of degree {B.degree}; "
                "choose a pair without common zeros"
            )
    datum = datum_from_split(s)
    h = s.H_dim
    t = a + b
    images = [datum.d_t(t, _unit(k, h)) for k in range(h)]
    idx = independent_prefix(images)
    p = s.r1 + s.r2 - 1
    if len(idx) != p + 2:
        raise PreconditionError(f"dim W = {len(idx)} but r1 + r2 + 1 = {p + 2}: unhandled base locus")
    U = [_unit(k, h) for k in idx]
    gamma = build_voisin_class(datum, t, U, p)
    return GLResult(gamma, t, U, [images[k] for k in idx], p)


def split_detect(datum: DeterminantDatum, t: Sequence, U: Sequence[Sequence]) -> Optional[List[Fraction]]:
    """Find ``h`` on U with ``d(u_a ∧ u_b) = h(u_b) d_t(u_a) - h(u_a) d_t(u_b)``.

    Returns the values ``h(u_a)`` or None when no such functional exists.
    """
    t = _vec(t)
    U = [_vec(u) for u in U]
    W = voisin_subspace(datum, t, U)
    k = len(U)
    m = datum.mult.dim1
    rows = []
    rhs = []
    for a, b in combinations(range(k), 2):
        dab = datum.d.evaluate(U[a], U[b])
        for s in range(m):
            row = [Fraction(0)] * k
            row[b] += W[a][s]
            row[a] -= W[b][s]
            rows.append(row)
            rhs.append(dab[s])
    if not rows:
        return [Fraction(0)] * k
    return solve(SparseMat.from_dense(rows), rhs)


def is_W_coboundary(c: KoszulClass, W: Sequence[Sequence]) -> bool:
    """Whether ``c`` is the image of some element of ``Λ^{p+1} W``."""
    p, n = c.p, c.ambient_dim
    gens = []
    for J in wedge_basis(len(W), p + 1):
        terms = []
        for k, j in enumerate(J):
            rest = [W[i] for i in J[:k] + J[k + 1:]]
            terms.append((rest, W[j], 1 if k % 2 == 0 else -1))
        gens.append(KoszulClass.from_wedge_terms(p, n, terms, c.target_dim).to_vector())
    return SpanReducer(gens).contains(c.to_vector())


@dataclass(frozen=True)
class KSMatrix:
    """Skew (p+3)x(p+3) matrix of linear forms; row 0 spans W, index 0 is t."""

    A: SkewMap
    p: int

    def __post_init__(self):
        if self.A.h != self.p + 3:
            raise ValueError("KS matrix must have size p+3")

    def first_row(self) -> List[Tuple[Fraction, ...]]:
        return [self.A.entry(0, j) for j in range(1, self.A.h)]


def class_coordinates(c: KoszulClass, W: Sequence[Sequence]) -> Dict[Tuple[int, ...], List[Fraction]]:
    """Coefficients ``m_I ∈ V1`` with ``c = Σ_I w_I ⊗ m_I`` (I ⊂ range(dim W))."""
    n, p = c.ambient_dim, c.p
    basis_I = wedge_basis(len(W), p)
    cols = []
    for I in basis_I:
        wv = wedge_vectors([W[i] for i in I], n)
        cols.append([wv.get(J, Fraction(0)) for J in wedge_basis(n, p)])
    M = SparseMat.from_columns(cols, len(wedge_basis(n, p)))
    out = {I: [Fraction(0)] * c.target_dim for I in basis_I}
    Jidx = {J: k for k, J in enumerate(wedge_basis(n, p))}
    for s in range(c.target_dim):
        omega = c.first_factor(s)
        if not omega:
            continue
        rhs = [Fraction(0)] * len(Jidx)
        for J, a in omega.items():
            rhs[Jidx[J]] = a
        x = solve(M, rhs)
        if x is None:
            raise PreconditionError("class is not contained in Λ^p W ⊗ V")
        for I, a in zip(basis_I, x):
            out[I][s] = a
    return out


def ks_matrix_from_class(c: KoszulClass, W: Optional[Sequence[Sequence]] = None) -> KSMatrix:
    """Koh-Stillman matrix of a class represented in ``Λ^p W ⊗ V`` with dim W = p+2.

    ``W`` defaults to the support of ``c``.  Entries: ``a_{0,j} = w_j`` and
    ``a_{a,b} = -<w_a ∧ w_b ∧ m, vol>``, the sign that makes ``ks_alpha``
    reproduce the Koszul differential exactly.
    """
    p = c.p
    if c.target_dim != c.ambient_dim:
        raise PreconditionError("class must live in Λ^p V ⊗ V")
    if W is None:
        W = support(c)
    else:
        W = [_vec(w) for w in W]
        if rank(SparseMat.from_dense(W)) != len(W):
            raise PreconditionError("W basis is dependent")
    if len(W) != p + 2:
        raise PreconditionError(f"support has dimension {len(W)}, expected p+2 = {p + 2}")
    coords = class_coordinates(c, W)
    k = p + 2
    vals = {}
    for j in range(k):
        vals[(0, j + 1)] = tuple(W[j])
    for a, b in combinations(range(k), 2):
        I = tuple(i for i in range(k) if i not in (a, b))
        sign, _ = sort_sign([a, b, *I])
        vals[(a + 1, b + 1)] = tuple(-sign * x for x in coords[I])
    return KSMatrix(SkewMap(p + 3, c.ambient_dim, vals), p)


def ks_alpha(A: KSMatrix, mult: MultTable) -> Dict[Tuple[Tuple[int, ...], int], Fraction]:
    """α = Σ_{1<i<j<k} (-1)^{i+j+k} (∧_{l ≠ 1,i,j,k} a_{1l}) ⊗ Pf_{1ijk}(A).

    Indices in the formula are 1-based matrix indices; the Pfaffians are
    evaluated in V2 through ``mult``.  Returned as a sparse map on
    ``Λ^{p-1} V ⊗ V2``.
    """
    size = A.A.h
    n = A.A.target_dim
    row = A.first_row()
    out: Dict[Tuple[Tuple[int, ...], int], Fraction] = {}
    for i, j, k in combinations(range(2, size + 1), 3):
        sign = -1 if (i + j + k) % 2 else 1
        pf = pfaffian4(A.A, 0, i - 1, j - 1, k - 1, mult)
        if not any(pf):
            continue
        rest = [row[l - 2] for l in range(2, size + 1) if l not in (i, j, k)]
        for J, a in wedge_vectors(rest, n).items():
            for m, v in enumerate(pf):
                if v:
                    out[(J, m)] = out.get((J, m), 0) + sign * a * v
    return {key: v for key, v in sorted(out.items()) if v}


@dataclass
class KSReport:
    independent_first_row: bool
    nonzero_pfaffian: bool
    pfaffians_vanish_on_X: bool

    def to_dict(self) -> dict:
        return {
            "i_independent_first_row": self.independent_first_row,
            "ii_nonzero_pfaffian": self.nonzero_pfaffian,
            "iii_pfaffians_vanish_on_X": self.pfaffians_vanish_on_X,
        }


def check_ks_conditions(A: KSMatrix, mult: MultTable) -> KSReport:
    """(i) first row independent; (ii) some Pf_{1ijk} nonzero as a quadric in
    S^2 V; (iii) every Pf_{1ijk} is zero in V2."""
    size = A.A.h
    row = [list(r) for r in A.first_row()]
    indep = rank(SparseMat.from_dense(row)) == size - 1
    nonzero = False
    vanish = True
    for i, j, k in combinations(range(1, size), 3):
        if pfaffian4_free(A.A, 0, i, j, k):
            nonzero = True
        if any(pfaffian4(A.A, 0, i, j, k, mult)):
            vanish = False
    return KSReport(indep, nonzero, vanish)


def datum_from_ks(A: KSMatrix, mult: MultTable, strict: bool = True) -> DeterminantDatum:
    """The determinant datum on ``T = k ⊕ W`` defined by the matrix entries."""
    return DeterminantDatum(A.A, mult, strict)


@dataclass
class PluckerReport:
    on_grassmannian: bool
    on_linear_space: bool

    def to_dict(self) -> dict:
        return {"on_grassmannian": self.on_grassmannian, "on_linear_space": self.on_linear_space}


def plucker_check(A, mult: Optional[MultTable] = None) -> PluckerReport:
    """Grassmannian and linear-space membership of a skew matrix.

    ``A`` is a numeric skew matrix (nested lists) or a :class:`KSMatrix` /
    :class:`SkewMap` of linear forms, in which case ``mult`` is required and
    the conditions are evaluated in V2.
    """
    if isinstance(A, KSMatrix):
        A = A.A
    if isinstance(A, SkewMap):
        if mult is None:
            raise ValueError("symbolic Plücker check needs a multiplication table")
        skew = A
        tab = mult
    else:
        n = len(A)
        vals = {}
        for i in range(n):
            for j in range(n):
                if rat(A[i][j]) != -rat(A[j][i]):
                    raise ValueError("matrix is not skew-symmetric")
                if i < j and rat(A[i][j]):
                    vals[(i, j)] = (rat(A[i][j]),)
        skew = SkewMap(n, 1, vals)
        tab = free_mult(1)
    on_g = all(
        not any(pfaffian4(skew, i, j, k, l, tab)) for i, j, k, l in combinations(range(skew.h), 4)
    )
    on_lin = all(not any(skew.entry(0, j)) for j in range(1, skew.h))
    return PluckerReport(on_g, on_lin)


def mu_cokernel(mu: Pairing) -> int:
    """``dim coker(μ: W ⊗ H^0(K(-B)) -> H^0(K ⊗ L(-2B)))``."""
    cols = [list(mu.product(i, j)) for i in range(mu.left_dim) for j in range(mu.right_dim)]
    r = rank(SparseMat.from_columns(cols, mu.target_dim)) if cols else 0
    return mu.target_dim - r


def restrict_left(pairing: Pairing, W: Sequence[Sequence]) -> Pairing:
    """``W x B -> C`` from ``A x B -> C`` and a basis of ``W ⊂ A``."""
    prods = {}
    for a, w in enumerate(W):
        w = _vec(w)
        if len(w) != pairing.left_dim:
            raise PreconditionError("W vector has the wrong length")
        for j in range(pairing.right_dim):
            v = [Fraction(0)] * pairing.target_dim
            for i, c in enumerate(w):
                if c:
                    for k, x in enumerate(pairing.product(i, j)):
                        v[k] += c * x
            if any(v):
                prods[(a, j)] = tuple(v)
    return Pairing(len(W), pairing.right_dim, pairing.target_dim, prods)


def subspace_pairings(mult: MultTable, W: Sequence[Sequence]) -> Tuple[Pairing, Pairing]:
    """Pairings ``W x k -> V1`` and ``W x V1 -> V2`` whose mixed group is K_{p,1}(X, L, W)."""
    incl = {(a, 0): tuple(_vec(w)) for a, w in enumerate(W) if any(w)}
    return Pairing(len(W), 1, mult.dim1, incl), mult.restricted([_vec(w) for w in W])


# --- generalised zeros -------------------------------------------------------

DEFAULT_PRIMES = (5, 7, 11)


def _primes_for(h: int) -> Tuple[int, ...]:
    env = os.environ.get("KOSZUL_GENZERO_PRIMES")
    if env:
        return tuple(int(x) for x in env.replace(";", ",").split(",") if x.strip())
    if h <= 6:
        return DEFAULT_PRIMES
    if h <= 8:
        return DEFAULT_PRIMES[:1]
    return ()


@dataclass
class GenZeroResult:
    witness: Optional[Tuple[List[Fraction], List[Fraction]]]
    certificate: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        from .linalg import format_rat

        out = {"found": self.witness is not None, "certificate": self.certificate}
        if self.witness is not None:
            out["witness"] = [[format_rat(x) for x in v] for v in self.witness]
        return out


def _exact_partner(datum: DeterminantDatum, u: List[Fraction]) -> Optional[List[Fraction]]:
    h = datum.H_dim
    cols = [datum.d.evaluate(u, _unit(b, h)) for b in range(h)]
    M = SparseMat.from_columns(cols, datum.d.target_dim)
    for v in kernel_basis(M):
        if rank(SparseMat.from_dense([u, v])) == 2:
            return v
    return None


def has_generalized_zero(datum: DeterminantDatum, primes: Optional[Sequence[int]] = None) -> GenZeroResult:
    """Search for independent ``u, v`` with ``d(u ∧ v) = 0``.

    First basis pairs are tried, then every projective point ``u`` over each
    small prime field in lexicographic order; a point where ``d(u ∧ ·)`` drops
    rank mod p is lifted to small integers and the partner ``v`` is computed
    exactly over Q.  Witnesses are always verified exactly; ``None`` only means
    the enumeration recorded in the certificate found nothing.
    """
    h = datum.H_dim
    m = datum.d.target_dim
    for a, b in combinations(range(h), 2):
        if not any(datum.d.entry(a, b)):
            u, v = _unit(a, h), _unit(b, h)
            return GenZeroResult((u, v), {"stage": "basis_pairs", "pair": [a, b]})
    if h < 2:
        return GenZeroResult(None, {"stage": "exhausted", "primes": [], "points": 0})
    den = 1
    for v in datum.d.values.values():
        for x in v:
            den = lcm(den, x.denominator)
    D = [0] * (h * h * m)
    for a in range(h):
        for b in range(h):
            for k, x in enumerate(datum.d.entry(a, b)):
                D[(a * h + b) * m + k] = int(x * den)
    primes = tuple(_primes_for(h) if primes is None else primes)
    searched = []
    for p in primes:
        start = 0
        lifts = 0
        total = ffield.num_points(h, p)
        while True:
            idx = ffield.first_candidate(D, h, m, p, start)
            if idx < 0:
                break
            res = ffield.point_at(idx, h, p)
            u = [Fraction(x if x <= p // 2 else x - p) for x in res]
            lifts += 1
            v = _exact_partner(datum, u)
            if v is not None and not any(datum.d.evaluate(u, v)):
                return GenZeroResult(
                    (u, v),
                    {"stage": "enumeration", "prime": p, "point_index": idx},
                )
            start = idx + 1
        searched.append({"prime": p, "points": total, "failed_lifts": lifts})
    return GenZeroResult(None, {"stage": "exhausted", "fields": searched})


def mixed_duality_dims(model_mult: MultTable, mu: Pairing, W: Sequence[Sequence]) -> Tuple[int, int]:
    """``(dim coker μ, dim K_{p,1}(X, 0, L, W))`` with ``p = dim W - 2``."""
    pair0, pair1 = subspace_pairings(model_mult, W)
    p = len(W) - 2
    return mu_cokernel(mu), compute_K_p1_mixed(pair0, pair1, p).dim

