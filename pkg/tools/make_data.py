"""Regenerate the bundled JSON fixtures in src/koszul/data."""

import json
import pathlib
from fractions import Fraction as F

from koszul.constructors import datum_from_split, mixed_duality_dims, restrict_left, split_rational
from koszul.io import class_to_json, datum_to_json, model_from_json, model_to_json, pairing_to_json
from koszul.models import CurveModel, mult_table
from koszul.multilinear import KoszulClass, Pairing

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "koszul" / "data"


def gram(n, entries):
    G = [[F(0)] * n for _ in range(n)]
    for (i, j), v in entries.items():
        G[i][j] += F(v) / (1 if i == j else 2)
        if i != j:
            G[j][i] += F(v) / 2
    return G


def dump(name, obj):
    (OUT / name).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def full_pairing(mult):
    prods = {}
    for i in range(mult.dim1):
        for j in range(mult.dim1):
            v = mult.product(i, j)
            if any(v):
                prods[(i, j)] = tuple(v)
    return Pairing(mult.dim1, mult.dim1, mult.dim2, prods)


def main():
    OUT.mkdir(exist_ok=True)
    for d in range(2, 7):
        dump(f"rational{d}.json", {"kind": "rational", "degree": d})

    names5 = ("x1", "x2", "x3", "x4", "x5")
    # Q = x1 x4 - x2 x5 + x3^2
    elms = CurveModel.quadric_presented(
        5, [gram(5, {(0, 3): 1, (1, 4): -1, (2, 2): 1})], names=names5,
        notes="single rank-5 quadric Q = x1*x4 - x2*x5 + x3^2",
    )
    dump("elms-quadric.json", model_to_json(elms))
    q = KoszulClass(1, 5, {((0,), 3): 1, ((1,), 4): -1, ((2,), 2): 1})
    dump("q.json", class_to_json(q))

    scroll = CurveModel.quadric_presented(
        4, [gram(4, {(0, 1): 1, (2, 3): 1})], names=names5[:4],
        notes="single rank-4 quadric x1*x2 + x3*x4",
    )
    dump("scrollar-quadric.json", model_to_json(scroll))
    dump("scrollar-q.json", class_to_json(KoszulClass(1, 4, {((0,), 1): 1, ((2,), 3): 1})))

    # canonical genus-4 curve on the quadric x0 x3 - x1 x2 with L = K, B = 0
    g4 = CurveModel.quadric_presented(4, [gram(4, {(0, 3): 1, (1, 2): -1})], names=("x0", "x1", "x2", "x3"))
    m4 = mult_table(g4)
    W = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]
    obj = model_to_json(g4)
    obj["canonical_mult"] = pairing_to_json(full_pairing(m4))
    obj["canonical_mult"]["W"] = [[str(F(x)) for x in w] for w in W]
    obj["notes"] = "canonical genus-4 model, L = K, B = 0; W = projection from a point of the quadric"
    canon = model_from_json(obj)
    print("genus4 (coker, mixed):", mixed_duality_dims(m4, restrict_left(canon.canonical_mult, W), W))
    dump("genus4-canonical.json", obj)

    dump("conic-datum.json", datum_to_json(datum_from_split(split_rational(1, 1))))
    dump("split-datum-2-1.json", {"split": [2, 1]})
    # d(e0 ^ e1) = x^2, d(e2 ^ e3) = y^2 on rational(2)
    dump("broken-datum.json", {"H_dim": 4, "d": [
        {"pair": [0, 1], "value": ["1/1", "0/1", "0/1"]},
        {"pair": [2, 3], "value": ["0/1", "0/1", "1/1"]},
    ]})


if __name__ == "__main__":
    main()
