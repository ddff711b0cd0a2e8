"""Finite presentations of a curve with a line bundle.

A model only records what the Koszul complex needs: a basis of
``V1 = H^0(L)`` and the symmetric multiplication ``V1 x V1 -> V2 = H^0(L^2)``.

* ``rational(d)``: binary forms of degree ``d`` (the rational normal curve).
* ``quadric_presented(n, I2)``: linear forms in ``n`` variables, with ``V2``
  the quotient of all quadrics by the span of ``I2``.  This equals
  ``H^0(L^2)`` when the curve is projectively normal and ``I2`` is its full
  space of quadrics; that assumption is the caller's.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import SparseMat, rank, rat, rref
from .multilinear import Pairing


class ModelError(ValueError):
    """Inconsistent presentation data."""


@dataclass(frozen=True)
class MultTable:
    dim1: int
    dim2: int
    names1: Tuple[str, ...]
    names2: Tuple[str, ...]
    products: Dict[Tuple[int, int], Tuple[Fraction, ...]] = field(default_factory=dict)

    def product(self, i: int, j: int) -> Tuple[Fraction, ...]:
        key = (i, j) if i <= j else (j, i)
        v = self.products.get(key)
        if v is None:
            return (Fraction(0),) * self.dim2
        return v

    def multiply(self, a: Sequence, b: Sequence) -> List[Fraction]:
        out = [Fraction(0)] * self.dim2
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                c = rat(x) * rat(y)
                for m, v in enumerate(self.product(i, j)):
                    if v:
                        out[m] += c * v
        return out

    def project_quadric(self, q: Dict[Tuple[int, int], Fraction]) -> List[Fraction]:
        """Image in V2 of a quadric given by monomial coefficients ``(i <= j)``."""
        out = [Fraction(0)] * self.dim2
        for (i, j), c in q.items():
            for m, v in enumerate(self.product(i, j)):
                if v:
                    out[m] += c * v
        return out

    def restricted(self, W: Sequence[Sequence]) -> Pairing:
        """The pairing ``W x V1 -> V2`` for a subspace W given by a basis."""
        prods = {}
        for a, w in enumerate(W):
            for j in range(self.dim1):
                e = [Fraction(int(k == j)) for k in range(self.dim1)]
                v = tuple(self.multiply(w, e))
                if any(v):
                    prods[(a, j)] = v
        return Pairing(len(W), self.dim1, self.dim2, prods)


def monomials(n: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i, n)]


def free_mult(n: int, names: Optional[Sequence[str]] = None) -> MultTable:
    """Multiplication into the free quadric space ``S^2 V`` (no relations)."""
    names = tuple(names) if names else tuple(f"x{i + 1}" for i in range(n))
    mons = monomials(n)
    prods = {}
    for k, (i, j) in enumerate(mons):
        prods[(i, j)] = tuple(Fraction(int(m == k)) for m in range(len(mons)))
    names2 = tuple(f"{names[i]}*{names[j]}" for i, j in mons)
    return MultTable(n, len(mons), names, names2, prods)


def _binary_names(d: int) -> Tuple[str, ...]:
    def mono(a, b):
        parts = []
        for var, e in (("x", a), ("y", b)):
            if e == 1:
                parts.append(var)
            elif e > 1:
                parts.append(f"{var}^{e}")
        return "*".join(parts) or "1"

    return tuple(mono(d - i, i) for i in range(d + 1))


def binary_form_mult(d1: int, d2: int) -> Pairing:
    """Polynomial multiplication of binary forms of degrees ``d1`` and ``d2``.

    Basis of degree-e forms: ``x^(e-i) y^i``, i = 0..e.
    """
    t = d1 + d2 + 1
    prods = {}
    for i in range(d1 + 1):
        for j in range(d2 + 1):
            prods[(i, j)] = tuple(Fraction(int(m == i + j)) for m in range(t))
    return Pairing(d1 + 1, d2 + 1, t, prods)


def gram_to_quadric(G: Sequence[Sequence]) -> Dict[Tuple[int, int], Fraction]:
    n = len(G)
    out = {}
    for i in range(n):
        for j in range(i, n):
            c = rat(G[i][j]) if i == j else rat(G[i][j]) + rat(G[j][i])
            if c:
                out[(i, j)] = c
    return out


def quadric_to_gram(q: Dict[Tuple[int, int], Fraction], n: int) -> List[List[Fraction]]:
    G = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), c in q.items():
        if i == j:
            G[i][i] += c
        else:
            G[i][j] += c / 2
            G[j][i] += c / 2
    return G


@dataclass(frozen=True)
class CurveModel:
    """Either ``kind="rational"`` with ``degree``, or ``kind="quadric_presented"``
    with ``n_vars`` and ``I2`` (symmetric Gram matrices)."""

    kind: str
    degree: int = 0
    n_vars: int = 0
    I2: Tuple[Tuple[Tuple[Fraction, ...], ...], ...] = ()
    names: Tuple[str, ...] = ()
    canonical_mult: Optional[Pairing] = None
    notes: str = ""

    def __post_init__(self):
        if self.kind == "rational":
            if self.degree < 1:
                raise ModelError("rational model needs degree >= 1")
        elif self.kind == "quadric_presented":
            if self.n_vars < 1:
                raise ModelError("quadric-presented model needs n_vars >= 1")
            for G in self.I2:
                if len(G) != self.n_vars or any(len(r) != self.n_vars for r in G):
                    raise ModelError("I2 generator has the wrong size")
                if any(rat(G[i][j]) != rat(G[j][i]) for i in range(self.n_vars) for j in range(i)):
                    raise ModelError("I2 generator is not symmetric")
        else:
            raise ModelError(f"unknown model kind {self.kind!r}")

    @classmethod
    def rational(cls, d: int, **kw) -> "CurveModel":
        return cls("rational", degree=d, **kw)

    @classmethod
    def quadric_presented(cls, n: int, I2: Sequence[Sequence[Sequence]], **kw) -> "CurveModel":
        I2 = tuple(tuple(tuple(rat(x) for x in row) for row in G) for G in I2)
        return cls("quadric_presented", n_vars=n, I2=I2, **kw)

    @property
    def dim1(self) -> int:
        return self.degree + 1 if self.kind == "rational" else self.n_vars


def mult_table(m: CurveModel) -> MultTable:
    if m.kind == "rational":
        d = m.degree
        prods = {}
        for i in range(d + 1):
            for j in range(i, d + 1):
                prods[(i, j)] = tuple(Fraction(int(k == i + j)) for k in range(2 * d + 1))
        return MultTable(d + 1, 2 * d + 1, _binary_names(d), _binary_names(2 * d), prods)

    n = m.n_vars
    names = m.names or tuple(f"x{i + 1}" for i in range(n))
    mons = monomials(n)
    col = {mon: k for k, mon in enumerate(mons)}
    rows = []
    for G in m.I2:
        q = gram_to_quadric(G)
        rows.append([q.get(mon, Fraction(0)) for mon in mons])
    if rows:
        red, pivots = rref(SparseMat.from_dense(rows))
        if len(pivots) != len(rows):
            raise ModelError("I2 generators are linearly dependent")
    else:
        red, pivots = [], []
    pivset = set(pivots)
    free = [k for k in range(len(mons)) if k not in pivset]
    pos = {k: a for a, k in enumerate(free)}
    reducer = dict(zip(pivots, red))
    prods = {}
    for mon in mons:
        k = col[mon]
        v = [Fraction(0)] * len(free)
        if k in pos:
            v[pos[k]] = Fraction(1)
        else:
            for f, c in reducer[k].items():
                if f != k:
                    v[pos[f]] -= c
        prods[mon] = tuple(v)
    names2 = tuple(f"{names[mons[k][0]]}*{names[mons[k][1]]}" for k in free)
    return MultTable(n, len(free), tuple(names), names2, prods)


def quadric_rank(q: Sequence[Sequence]) -> int:
    """Rank of a symmetric Gram matrix."""
    n = len(q)
    if any(len(r) != n for r in q):
        raise ValueError("Gram matrix must be square")
    return rank(SparseMat.from_dense(q)) if n else 0


@dataclass(frozen=True)
class Divisor1D:
    """Effective divisor on the projective line.

    ``roots`` holds rational points ``(x:y)`` with multiplicities;
    ``irreducible`` holds factors without rational roots as
    ``(coefficients of x^(e-i) y^i, degree, multiplicity)``.
    """

    roots: Tuple[Tuple[Tuple[Fraction, Fraction], int], ...] = ()
    irreducible: Tuple[Tuple[Tuple[Fraction, ...], int, int], ...] = ()
    gcd: Tuple[Fraction, ...] = (Fraction(1),)

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.roots) + sum(e * m for _, e, m in self.irreducible)

    def is_empty(self) -> bool:
        return self.degree == 0


def base_locus_rational(W: Sequence[Sequence]) -> Divisor1D:
    """Base divisor of a space of binary forms: the gcd of a spanning set.

    Forms are coefficient vectors in the basis ``x^(d-i) y^i``.
    """
    import sympy

    x, y = sympy.symbols("x y")
    polys = []
    for w in W:
        d = len(w) - 1
        f = sum(sympy.Rational(rat(c).numerator, rat(c).denominator) * x ** (d - i) * y ** i for i, c in enumerate(w))
        if f != 0:
            polys.append(sympy.Poly(f, x, y, domain="QQ"))
    if not polys:
        raise ValueError("base locus of the zero space is undefined")
    g = polys[0]
    for f in polys[1:]:
        g = sympy.gcd(g, f)
    g = g.monic() if g.total_degree() > 0 else sympy.Poly(1, x, y, domain="QQ")
    e = g.total_degree()
    gcoeffs = tuple(Fraction(str(g.coeff_monomial(x ** (e - i) * y ** i))) for i in range(e + 1))
    roots = []
    irred = []
    _, factors = sympy.factor_list(g.as_expr(), x, y)
    for fac, mult in factors:
        fp = sympy.Poly(fac, x, y, domain="QQ")
        fe = fp.total_degree()
        if fe == 0:
            continue
        coeffs = [Fraction(str(fp.coeff_monomial(x ** (fe - i) * y ** i))) for i in range(fe + 1)]
        if fe == 1:
            a, b = coeffs  # a x + b y vanishes at (x:y) = (-b : a)
            if a:
                pt = (Fraction(-b) / a, Fraction(1))
            else:
                pt = (Fraction(1), Fraction(0))
            roots.append((pt, int(mult)))
        else:
            lead = next(c for c in coeffs if c)
            irred.append((tuple(c / lead for c in coeffs), fe, int(mult)))
    roots.sort()
    irred.sort()
    return Divisor1D(tuple(roots), tuple(irred), gcoeffs)


def divide_binary(f: Sequence, g: Sequence) -> List[Fraction]:
    """Exact quotient of binary forms ``f / g`` (coefficients in ``x^(e-i) y^i``)."""
    f = [rat(c) for c in f]
    g = [rat(c) for c in g]
    df, dg = len(f) - 1, len(g) - 1
    if dg > df:
        raise ValueError("divisor has larger degree")
    lead = next(i for i, c in enumerate(g) if c)
    q = [Fraction(0)] * (df - dg + 1)
    r = list(f)
    for k in range(df - dg + 1):
        c = r[k + lead] / g[lead]
        q[k] = c
        for i, gc in enumerate(g):
            r[k + i] -= c * gc
    if any(r):
        raise ValueError("binary forms do not divide exactly")
    return q
