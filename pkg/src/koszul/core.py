"""Koszul cohomology groups K_{p,1}, nonvanishing and rank of classes."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import (
    SpanReducer,
    SparseMat,
    columns,
    kernel_basis,
    rank,
    row_space_basis,
    solve,
)
from .models import MultTable
from .multilinear import (
    KoszulClass,
    Pairing,
    apply_differential,
    koszul_differential,
    koszul_pairing_differential,
    koszul_restriction,
    support,
    wedge_basis,
    wedge_index,
    wedge_vectors,
)


class PreconditionError(ValueError):
    """Input violates an operation's precondition."""


class NotACycle(PreconditionError):
    """A class representative is not annihilated by the Koszul differential."""


@dataclass
class KoszulGroupReport:
    p: int
    dim: int
    cycle_basis: List[KoszulClass]
    boundary_dim: int
    kernel_dim: int

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "dim": self.dim,
            "kernel_dim": self.kernel_dim,
            "boundary_dim": self.boundary_dim,
        }


@dataclass
class SubspaceSpec:
    """A subspace W ⊂ V1; the basis is replaced by its RREF on ingest."""

    W: List[List[Fraction]]
    ambient_dim: int = field(default=-1)

    def __post_init__(self):
        if not self.W:
            raise PreconditionError("empty subspace")
        n = len(self.W[0])
        if self.ambient_dim < 0:
            self.ambient_dim = n
        basis = row_space_basis(self.W, n)
        if len(basis) != len(self.W):
            raise PreconditionError("subspace generators are linearly dependent")
        self.W = basis

    @property
    def dim(self) -> int:
        return len(self.W)


_cache_lock = threading.Lock()
_matrix_cache: Dict[tuple, SparseMat] = {}


def _cached(key, build):
    with _cache_lock:
        hit = _matrix_cache.get(key)
    if hit is not None:
        return hit
    value = build()
    with _cache_lock:
        return _matrix_cache.setdefault(key, value)


def differential_matrix(mult: MultTable, p: int) -> SparseMat:
    # the table is stored with the matrix so its id cannot be recycled
    owner, mat = _cached(("delta", id(mult), p), lambda: (mult, koszul_differential(p, mult.dim1, mult)))
    if owner is not mult:
        return koszul_differential(p, mult.dim1, mult)
    return mat


def restriction_matrix(n: int, p: int) -> SparseMat:
    return _cached(("res", n, p), lambda: koszul_restriction(p, n))


def _homology(d_out: SparseMat, d_in: SparseMat):
    """Kernel of ``d_out`` modulo the image of ``d_in``; returns a chosen complement."""
    if d_in.ncols and d_out.nrows:
        if not d_out.matmul(d_in).is_zero():
            raise PreconditionError("the two maps do not compose to zero")
    ker = kernel_basis(d_out) if d_out.nrows else [
        [Fraction(int(i == j)) for i in range(d_out.ncols)] for j in range(d_out.ncols)
    ]
    bdim = rank(d_in) if d_in.ncols else 0
    reducer = SpanReducer(columns(d_in))
    chosen = [k for k in ker if reducer.add(k)]
    return len(ker), bdim, chosen


def compute_K_p1(mult: MultTable, p: int) -> KoszulGroupReport:
    n = mult.dim1
    if p < 1 or p + 1 > n:
        raise PreconditionError(f"p={p} out of range for dim V = {n}")
    kdim, bdim, chosen = _homology(differential_matrix(mult, p), restriction_matrix(n, p))
    cycles = [KoszulClass.from_vector(p, n, v) for v in chosen]
    return KoszulGroupReport(p, kdim - bdim, cycles, bdim, kdim)


def _to_ambient(c_w: KoszulClass, W: Sequence[Sequence], n: int) -> KoszulClass:
    """Rewrite a tensor in W-coordinates (first factor) in V-coordinates."""
    coeffs: Dict[tuple, Fraction] = {}
    for (I, s), a in c_w.coeffs.items():
        for J, b in wedge_vectors([W[i] for i in I], n).items():
            coeffs[(J, s)] = coeffs.get((J, s), 0) + a * b
    return KoszulClass(c_w.p, n, coeffs, c_w.target_dim)


def compute_K_p1_subspace(mult: MultTable, p: int, W: SubspaceSpec) -> KoszulGroupReport:
    k = W.dim
    if p < 1 or p + 1 > k:
        raise PreconditionError(f"p={p} out of range for dim W = {k}")
    pair = mult.restricted(W.W)
    d_out = koszul_pairing_differential(p, k, pair)
    d_in = koszul_restriction(p, k, second_dim=mult.dim1, inclusion=W.W)
    kdim, bdim, chosen = _homology(d_out, d_in)
    cycles = [_to_ambient(KoszulClass.from_vector(p, k, v, mult.dim1), W.W, mult.dim1) for v in chosen]
    return KoszulGroupReport(p, kdim - bdim, cycles, bdim, kdim)


def compute_K_p1_mixed(pair0: Pairing, pair1: Optional[Pairing], p: int) -> KoszulGroupReport:
    """Middle cohomology of ``Λ^{p+1}W⊗M0 -> Λ^p W⊗M1 -> Λ^{p-1}W⊗M2``.

    ``pair0: W x M0 -> M1`` and ``pair1: W x M1 -> M2``.  For ``p = 0`` the
    outgoing map is zero and ``pair1`` may be omitted; the result is then the
    cokernel of ``pair0``.
    """
    k = pair0.left_dim
    if p < 0 or p + 1 > k:
        raise PreconditionError(f"p={p} out of range for dim W = {k}")
    if p >= 1:
        if pair1 is None:
            raise PreconditionError("second pairing required for p >= 1")
        if pair1.left_dim != k or pair1.right_dim != pair0.target_dim:
            raise PreconditionError("pairing dimensions are inconsistent")
        d_out = koszul_pairing_differential(p, k, pair1)
    else:
        d_out = SparseMat(0, pair0.target_dim)
    d_in = koszul_pairing_differential(p + 1, k, pair0)
    kdim, bdim, chosen = _homology(d_out, d_in)
    cycles = [KoszulClass.from_vector(p, k, v, pair0.target_dim) for v in chosen] if p >= 1 else []
    return KoszulGroupReport(p, kdim - bdim, cycles, bdim, kdim)


def is_cycle(mult: MultTable, c: KoszulClass) -> bool:
    return not apply_differential(c, mult)


def is_nonzero_class(mult: MultTable, c: KoszulClass) -> bool:
    if c.ambient_dim != mult.dim1 or c.target_dim != mult.dim1:
        raise PreconditionError("class does not live in Λ^p V ⊗ V for this table")
    if c.is_zero():
        return False
    if not is_cycle(mult, c):
        raise NotACycle("representative is not annihilated by the Koszul differential")
    return solve(restriction_matrix(c.ambient_dim, c.p), c.to_vector()) is None


def boundary_of(beta: Sequence, p: int, n: int) -> KoszulClass:
    """Image of ``beta ∈ Λ^{p+1} V`` in ``Λ^p V ⊗ V``."""
    return KoszulClass.from_vector(p, n, restriction_matrix(n, p).matvec(list(beta)))


@dataclass
class ClassRank:
    rank: int
    exact: bool
    certified_rep: Optional[KoszulClass] = None

    def to_dict(self) -> dict:
        out = {"exact": self.exact}
        out["rank" if self.exact else "upper_bound"] = self.rank
        return out


def symmetrization(c: KoszulClass) -> List[List[Fraction]]:
    """Gram matrix of the quadric ``Σ c_{i,s} x_i x_s`` attached to a p=1 tensor."""
    n = c.ambient_dim
    G = [[Fraction(0)] * n for _ in range(n)]
    for ((i,), s), a in c.coeffs.items():
        G[i][s] += a / 2
        G[s][i] += a / 2
    return G


def _contraction_constraints(p: int, n: int, t: int, phis: Sequence[Sequence]) -> SparseMat:
    """Stacked matrices of ``ι_φ: Λ^p V ⊗ V1 -> Λ^{p-1} V ⊗ V1`` for each φ."""
    src = wedge_basis(n, p)
    tgt = wedge_index(n, p - 1)
    block = len(tgt) * t
    ent: Dict[Tuple[int, int], Fraction] = {}
    for fi, phi in enumerate(phis):
        for ci, I in enumerate(src):
            for pos, i in enumerate(I):
                if not phi[i]:
                    continue
                J = I[:pos] + I[pos + 1:]
                sign = -1 if pos % 2 else 1
                for s in range(t):
                    key = (fi * block + tgt[J] * t + s, ci * t + s)
                    ent[key] = ent.get(key, 0) + sign * phi[i]
    return SparseMat(len(phis) * block, len(src) * t, ent)


def _reduce_into(c: KoszulClass, Wp: List[List[Fraction]]) -> Optional[KoszulClass]:
    """A cohomologous representative inside ``Λ^p W' ⊗ V``, if one exists."""
    n, p = c.ambient_dim, c.p
    if Wp:
        phis = kernel_basis(SparseMat.from_dense(Wp))
    else:
        phis = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    if not phis:
        return c
    C = _contraction_constraints(p, n, c.target_dim, phis)
    R = restriction_matrix(n, p)
    beta = solve(C.matmul(R), C.matvec(c.to_vector()))
    if beta is None:
        return None
    return c - boundary_of(beta, p, n)


def class_rank(mult: MultTable, c: KoszulClass) -> ClassRank:
    """Rank of a nonzero class.

    For ``p = 1`` this is exact: half the rank of the symmetrized quadric,
    rounded up.  For ``p >= 2`` a greedy coboundary reduction gives an upper
    bound together with the representative that attains it.
    """
    if not is_nonzero_class(mult, c):
        raise PreconditionError("rank of the zero class is undefined")
    if c.p == 1:
        r = rank(SparseMat.from_dense(symmetrization(c)))
        return ClassRank((r + 1) // 2, True)
    rep = c
    S = support(rep)
    improved = True
    while improved and len(S) > c.p:
        improved = False
        for j in range(len(S)):
            cand = _reduce_into(rep, S[:j] + S[j + 1:])
            if cand is not None:
                rep = cand
                S = support(rep)
                improved = True
                break
    return ClassRank(len(S), False, rep)


def gl_span(mult: MultTable, classes: Sequence[KoszulClass], p: int) -> int:
    """Dimension of the span of the given classes in K_{p,1}."""
    if any(c.p != p for c in classes):
        raise PreconditionError("classes of mixed p")
    if not classes:
        return 0
    for c in classes:
        if not is_cycle(mult, c):
            raise NotACycle("gl_span input is not a cycle")
    reducer = SpanReducer(columns(restriction_matrix(mult.dim1, p)))
    return sum(1 for c in classes if reducer.add(c.to_vector()))
