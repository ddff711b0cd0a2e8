"""JSON (de)serialization.  All rationals travel as ``"p/q"`` strings."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from importlib import resources
from typing import Any, Dict, List, Sequence

from .constructors import DeterminantDatum, KSMatrix, datum_from_ks, datum_from_split, split_rational
from .linalg import format_rat, rat
from .models import CurveModel, ModelError, MultTable, mult_table
from .multilinear import KoszulClass, Pairing, SkewMap


class FormatError(ValueError):
    """Malformed input file."""


def load_json(path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def sha256_of(obj) -> str:
    return hashlib.sha256(canonical_dumps(obj).encode()).hexdigest()


def bundled_path(name: str):
    return resources.files("koszul") / "data" / name


def rats(v: Sequence) -> List[Fraction]:
    try:
        return [rat(x) for x in v]
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational in {v!r}") from exc


def fmt_vec(v: Sequence) -> List[str]:
    return [format_rat(x) for x in v]


def _gram(entry, n: int) -> List[List[Fraction]]:
    if entry and isinstance(entry[0], list):
        G = [rats(row) for row in entry]
        if len(G) != n or any(len(r) != n for r in G):
            raise FormatError("I2 matrix has the wrong size")
        return G
    flat = rats(entry)
    if len(flat) != n * (n + 1) // 2:
        raise FormatError(f"upper-triangular I2 entry needs {n * (n + 1) // 2} values, got {len(flat)}")
    G = [[Fraction(0)] * n for _ in range(n)]
    k = 0
    for i in range(n):
        for j in range(i, n):
            G[i][j] = G[j][i] = flat[k]
            k += 1
    return G


def pairing_from_json(obj: Dict) -> Pairing:
    try:
        left, right, target = int(obj["left_dim"]), int(obj["right_dim"]), int(obj["target_dim"])
        prods = {}
        for e in obj["products"]:
            v = tuple(rats(e["v"]))
            if len(v) != target:
                raise FormatError("product vector has the wrong length")
            i, j = int(e["i"]), int(e["j"])
            if not (0 <= i < left and 0 <= j < right):
                raise FormatError(f"product index ({i}, {j}) out of range")
            prods[(i, j)] = v
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed pairing: {exc}") from exc
    return Pairing(left, right, target, prods)


def pairing_to_json(p: Pairing) -> Dict:
    return {
        "left_dim": p.left_dim,
        "right_dim": p.right_dim,
        "target_dim": p.target_dim,
        "products": [{"i": i, "j": j, "v": fmt_vec(v)} for (i, j), v in sorted(p.products.items())],
    }


def model_from_json(obj: Dict) -> CurveModel:
    try:
        kind = obj["kind"]
        canon = pairing_from_json(obj["canonical_mult"]) if "canonical_mult" in obj else None
        if kind == "rational":
            return CurveModel.rational(int(obj["degree"]), canonical_mult=canon, notes=obj.get("notes", ""))
        if kind == "quadric_presented":
            n = int(obj["n_vars"])
            I2 = [_gram(q, n) for q in obj.get("I2", [])]
            return CurveModel.quadric_presented(
                n, I2, names=tuple(obj.get("names", ())), canonical_mult=canon, notes=obj.get("notes", "")
            )
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed model: {exc}") from exc
    except ModelError as exc:
        raise FormatError(str(exc)) from exc
    raise FormatError(f"unknown model kind {obj.get('kind')!r}")


def model_to_json(m: CurveModel) -> Dict:
    if m.kind == "rational":
        out: Dict[str, Any] = {"kind": "rational", "degree": m.degree}
    else:
        n = m.n_vars
        out = {
            "kind": "quadric_presented",
            "n_vars": n,
            "I2": [[format_rat(G[i][j]) for i in range(n) for j in range(i, n)] for G in m.I2],
        }
        if m.names:
            out["names"] = list(m.names)
    if m.canonical_mult is not None:
        out["canonical_mult"] = pairing_to_json(m.canonical_mult)
    if m.notes:
        out["notes"] = m.notes
    return out


def class_to_json(c: KoszulClass) -> Dict:
    return {
        "p": c.p,
        "ambient_dim": c.ambient_dim,
        "terms": [{"wedge": list(w), "v": s, "c": format_rat(a)} for (w, s), a in sorted(c.coeffs.items())],
    }


def class_from_json(obj: Dict, ambient_dim: int) -> KoszulClass:
    try:
        p = int(obj["p"])
        n = int(obj.get("ambient_dim", ambient_dim))
        if n != ambient_dim:
            raise FormatError(f"class lives in dimension {n}, model has {ambient_dim}")
        coeffs: Dict = {}
        for t in obj["terms"]:
            key = (tuple(int(i) for i in t["wedge"]), int(t["v"]))
            coeffs[key] = coeffs.get(key, 0) + rat(t["c"])
        return KoszulClass(p, n, coeffs)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"malformed class: {exc}") from exc


def skew_to_json(a: SkewMap) -> List[Dict]:
    return [{"pair": [i, j], "value": fmt_vec(v)} for (i, j), v in sorted(a.values.items())]


def skew_from_json(entries, h: int, target_dim: int) -> SkewMap:
    try:
        vals = {}
        for e in entries:
            i, j = (int(x) for x in e["pair"])
            v = tuple(rats(e["value"]))
            if len(v) != target_dim:
                raise FormatError("entry vector has the wrong length")
            vals[(i, j)] = v
        return SkewMap(h, target_dim, vals)
    except (KeyError, TypeError, IndexError) as exc:
        raise FormatError(f"malformed skew map: {exc}") from exc


def ks_to_json(A: KSMatrix) -> Dict:
    return {"p": A.p, "size": A.A.h, "entries": skew_to_json(A.A)}


def ks_from_json(obj: Dict, target_dim: int) -> KSMatrix:
    try:
        p = int(obj["p"])
        return KSMatrix(skew_from_json(obj["entries"], p + 3, target_dim), p)
    except KeyError as exc:
        raise FormatError(f"malformed KS matrix: {exc}") from exc


def datum_to_json(D: DeterminantDatum) -> Dict:
    return {"H_dim": D.H_dim, "d": skew_to_json(D.d)}


def datum_from_json(obj: Dict, model: CurveModel, mult: MultTable, strict: bool = True) -> DeterminantDatum:
    """Datum from ``{"H_dim", "d"}``, ``{"split": [d1, d2]}`` or ``{"ks": {...}}``."""
    if "split" in obj:
        d1, d2 = (int(x) for x in obj["split"])
        if model.kind != "rational" or model.degree != d1 + d2:
            raise FormatError("split datum needs the rational model of degree d1 + d2")
        return datum_from_split(split_rational(d1, d2))
    if "ks" in obj:
        return datum_from_ks(ks_from_json(obj["ks"], mult.dim1), mult, strict)
    try:
        h = int(obj["H_dim"])
    except (KeyError, TypeError) as exc:
        raise FormatError("datum needs H_dim") from exc
    return DeterminantDatum(skew_from_json(obj.get("d", []), h, mult.dim1), mult, strict)


def load_model(path):
    obj = load_json(path)
    return obj, model_from_json(obj), None


def model_and_table(path):
    obj = load_json(path)
    model = model_from_json(obj)
    return obj, model, mult_table(model)
