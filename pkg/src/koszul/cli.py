"""Command-line front end.

Every report echoes the command, its parameters and the SHA-256 of the model
file, and is printed with sorted keys so identical inputs give identical
bytes.  Exit codes: 0 success, 2 precondition violation, 3 malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from itertools import combinations
from typing import Any, Dict, List, Optional

from .constructors import (
    FourTermError,
    build_gl_class,
    build_voisin_class,
    check_four_term,
    check_ks_conditions,
    has_generalized_zero,
    is_W_coboundary,
    ks_alpha,
    ks_matrix_from_class,
    mixed_duality_dims,
    plucker_check,
    restrict_left,
    split_detect,
    split_rational,
    voisin_subspace,
)
from .core import (
    PreconditionError,
    SubspaceSpec,
    class_rank,
    compute_K_p1,
    compute_K_p1_subspace,
    is_nonzero_class,
)
from .io import (
    FormatError,
    bundled_path,
    class_from_json,
    class_to_json,
    datum_from_json,
    fmt_vec,
    ks_from_json,
    ks_to_json,
    load_json,
    model_from_json,
    rats,
    sha256_of,
)
from .models import ModelError, mult_table
from .multilinear import apply_differential, pfaffian4, pfaffian4_free, support

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_MALFORMED = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 by default, which is reserved for preconditions
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_MALFORMED, f"{self.prog}: error: {message}\n")


def _resolve(path: str) -> str:
    if os.path.exists(path):
        return path
    cand = bundled_path(os.path.basename(path))
    if cand.is_file():
        return str(cand)
    return path


def _json_arg(text: Optional[str], what: str):
    if text is None:
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"--{what} is not valid JSON: {exc}") from exc


def _vector_arg(text, what):
    v = _json_arg(text, what)
    if v is None:
        return None
    if not isinstance(v, list) or any(isinstance(x, list) for x in v):
        raise FormatError(f"--{what} must be a flat list")
    return rats(v)


def _matrix_arg(text, what):
    v = _json_arg(text, what)
    if v is None:
        return None
    if not isinstance(v, list) or not all(isinstance(r, list) for r in v):
        raise FormatError(f"--{what} must be a list of lists")
    return [rats(r) for r in v]


def _quadric_json(q) -> List[Dict[str, Any]]:
    return [{"i": i, "j": j, "c": fmt_vec([c])[0]} for (i, j), c in sorted(q.items()) if c]


class _Job:
    def __init__(self, args):
        self.args = args
        self.model_obj = None
        self.model = None
        self.mult = None
        if getattr(args, "model", None):
            self.model_obj = load_json(_resolve(args.model))
            self.model = model_from_json(self.model_obj)
            self.mult = mult_table(self.model)

    def need_model(self):
        if self.mult is None:
            raise FormatError("this command needs --model")
        return self.mult

    def datum(self, strict=True):
        if not self.args.datum:
            raise FormatError("this command needs --datum")
        return datum_from_json(load_json(_resolve(self.args.datum)), self.model, self.need_model(), strict)

    def klass(self):
        if not self.args.klass:
            raise FormatError("this command needs --class")
        return class_from_json(load_json(_resolve(self.args.klass)), self.need_model().dim1)


def cmd_dims(job: _Job) -> Dict:
    mult = job.need_model()
    W = _matrix_arg(job.args.W, "W")
    if W is None:
        rep = compute_K_p1(mult, job.args.p)
    else:
        rep = compute_K_p1_subspace(mult, job.args.p, SubspaceSpec(W))
    out = rep.to_dict()
    out["cycles"] = [class_to_json(c) for c in rep.cycle_basis]
    return out


def cmd_build_gl(job: _Job) -> Dict:
    mult = job.need_model()
    a = job.args
    if job.model.kind != "rational" or job.model.degree != a.d1 + a.d2:
        raise PreconditionError("build-gl needs the rational model of degree d1 + d2")
    s = split_rational(a.d1, a.d2)
    s1 = _json_arg(a.s1, "s1")
    s2 = _json_arg(a.s2, "s2")
    res = build_gl_class(s, 0 if s1 is None else s1, s2)
    nonzero = is_nonzero_class(mult, res.cls)
    return {
        "p": res.p,
        "class": class_to_json(res.cls),
        "nonzero": nonzero,
        "support_dim": len(support(res.cls)) if not res.cls.is_zero() else 0,
        "t": fmt_vec(res.t),
        "W": [fmt_vec(w) for w in res.W],
    }


def _t_and_U(job: _Job):
    t = _vector_arg(job.args.t, "t")
    U = _matrix_arg(job.args.U, "U")
    if t is None or U is None:
        raise FormatError("--t and --U are required")
    return t, U


def cmd_build_voisin(job: _Job) -> Dict:
    mult = job.need_model()
    D = job.datum()
    t, U = _t_and_U(job)
    p = job.args.p if job.args.p is not None else len(U) - 2
    c = build_voisin_class(D, t, U, p)
    W = voisin_subspace(D, t, U)
    nonzero = is_nonzero_class(mult, c)
    return {
        "p": p,
        "class": class_to_json(c),
        "nonzero": nonzero,
        "support_dim": len(support(c)) if not c.is_zero() else 0,
        "split_h": None if (h := split_detect(D, t, U)) is None else fmt_vec(h),
        "w_coboundary": is_W_coboundary(c, W),
    }


def cmd_class_rank(job: _Job) -> Dict:
    mult = job.need_model()
    r = class_rank(mult, job.klass())
    out = r.to_dict()
    if r.certified_rep is not None:
        out["certified_rep"] = class_to_json(r.certified_rep)
    return out


def cmd_split_detect(job: _Job) -> Dict:
    mult = job.need_model()
    D = job.datum()
    t, U = _t_and_U(job)
    h = split_detect(D, t, U)
    out: Dict[str, Any] = {"split": h is not None, "h": None if h is None else fmt_vec(h)}
    # both tests are reported: coboundary from Λ^{p+1}W and full vanishing
    if len(U) >= 3:
        c = build_voisin_class(D, t, U, len(U) - 2)
        out["w_coboundary"] = is_W_coboundary(c, voisin_subspace(D, t, U))
        out["nonzero"] = is_nonzero_class(mult, c)
    return out


def _ks_source(job: _Job):
    mult = job.need_model()
    if job.args.matrix:
        obj = load_json(_resolve(job.args.matrix))
        if "matrix" in obj:
            raise FormatError("numeric matrices are only accepted by plucker")
        return ks_from_json(obj, mult.dim1), None
    c = job.klass()
    W = _matrix_arg(job.args.W, "W")
    return ks_matrix_from_class(c, W), c


def cmd_check_ks(job: _Job) -> Dict:
    mult = job.need_model()
    A, c = _ks_source(job)
    out: Dict[str, Any] = {"conditions": check_ks_conditions(A, mult).to_dict(), "matrix": ks_to_json(A)}
    if c is not None:
        alpha = ks_alpha(A, mult)
        out["ks_identity"] = alpha == apply_differential(c, mult)
    return out


def cmd_check_four_term(job: _Job) -> Dict:
    return {"holds": check_four_term(job.datum(strict=False))}


def cmd_gen_zero(job: _Job) -> Dict:
    D = job.datum(strict=False)
    primes = None
    if job.args.primes:
        try:
            primes = [int(x) for x in job.args.primes.split(",") if x.strip()]
        except ValueError as exc:
            raise FormatError("--primes must be a comma separated list of integers") from exc
    return has_generalized_zero(D, primes).to_dict()


def cmd_plucker(job: _Job) -> Dict:
    if job.args.matrix:
        obj = load_json(_resolve(job.args.matrix))
        if "matrix" in obj:
            if not isinstance(obj["matrix"], list):
                raise FormatError("matrix must be a list of lists")
            return plucker_check([rats(r) for r in obj["matrix"]]).to_dict()
    A, _ = _ks_source(job)
    return plucker_check(A, job.mult).to_dict()


def cmd_mu_coker(job: _Job) -> Dict:
    mult = job.need_model()
    canon = job.model.canonical_mult
    if canon is None:
        raise PreconditionError("model has no canonical_mult block")
    W = _matrix_arg(job.args.W, "W")
    if W is None:
        W = job.model_obj["canonical_mult"].get("W")
        if W is None:
            raise FormatError("give --W or a W entry in the canonical_mult block")
        W = [rats(w) for w in W]
    W = SubspaceSpec(W).W
    if canon.left_dim != mult.dim1:
        raise PreconditionError("canonical_mult must be defined on V1 of the model")
    coker, mixed = mixed_duality_dims(mult, restrict_left(canon, W), W)
    return {"coker_dim": coker, "mixed_dim": mixed, "agree": coker == mixed, "W_dim": len(W)}


def cmd_pfaffian(job: _Job) -> Dict:
    mult = job.need_model()
    if job.args.matrix:
        A = ks_from_json(load_json(_resolve(job.args.matrix)), mult.dim1).A
    elif job.args.datum:
        A = job.datum(strict=False).d
    else:
        A, _ = _ks_source(job)
        A = A.A
    idx = job.args.indices
    if idx is None:
        quads = list(combinations(range(A.h), 4))
    else:
        if len(set(idx)) != 4 or any(not 0 <= i < A.h for i in idx):
            raise PreconditionError(f"need four distinct indices in 0..{A.h - 1}")
        quads = [tuple(sorted(idx))]
    rows = []
    for q in quads:
        rows.append({
            "indices": list(q),
            "value": fmt_vec(pfaffian4(A, *q, mult)),
            "free": _quadric_json(pfaffian4_free(A, *q)),
        })
    return {"pfaffians": rows, "all_vanish": all(not any(rats(r["value"])) for r in rows)}


COMMANDS = {
    "dims": cmd_dims,
    "build-gl": cmd_build_gl,
    "build-voisin": cmd_build_voisin,
    "class-rank": cmd_class_rank,
    "split-detect": cmd_split_detect,
    "check-ks": cmd_check_ks,
    "check-four-term": cmd_check_four_term,
    "gen-zero": cmd_gen_zero,
    "plucker": cmd_plucker,
    "mu-coker": cmd_mu_coker,
    "pfaffian": cmd_pfaffian,
}


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="koszul", description="Koszul cohomology K_{p,1} of curves from presentation data.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_, model=True):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--model", required=model, help="model JSON (bundled names are found automatically)")
        sp.add_argument("--output", choices=("json", "text"), default="json")
        return sp

    sp = add("dims", "dimension of K_{p,1}, optionally of the subspace version")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--W", help="JSON list of basis vectors of W in V1")

    sp = add("build-gl", "Green-Lazarsfeld class of a splitting O(d1)+O(d2)")
    sp.add_argument("--d1", type=int, required=True)
    sp.add_argument("--d2", type=int, required=True)
    sp.add_argument("--s1", help="section of O(d1): basis index or JSON vector")
    sp.add_argument("--s2", help="section of O(d2): basis index or JSON vector")

    for name, help_ in (("build-voisin", "class γ(W, t) of a determinant datum"),
                        ("split-detect", "look for the splitting functional h")):
        sp = add(name, help_)
        sp.add_argument("--datum", required=True)
        sp.add_argument("--t", required=True, help="JSON vector in H")
        sp.add_argument("--U", required=True, help="JSON list of vectors in H")
        if name == "build-voisin":
            sp.add_argument("--p", type=int)

    sp = add("class-rank", "rank of a nonzero class")
    sp.add_argument("--class", dest="klass", required=True)

    for name, help_, model in (("check-ks", "KS conditions and the KS identity", True),
                               ("plucker", "Grassmannian / linear-space test of a skew matrix", False),
                               ("pfaffian", "4x4 Pfaffians of a KS matrix or datum", True)):
        sp = add(name, help_, model)
        sp.add_argument("--class", dest="klass")
        sp.add_argument("--matrix")
        sp.add_argument("--W", help="JSON basis of W for the KS matrix")
        if name == "pfaffian":
            sp.add_argument("--datum")
            sp.add_argument("--indices", type=int, nargs=4)

    sp = add("check-four-term", "four-term relation of a datum")
    sp.add_argument("--datum", required=True)

    sp = add("gen-zero", "search for a generalised zero of a datum")
    sp.add_argument("--datum", required=True)
    sp.add_argument("--primes", help="comma separated primes (overrides KOSZUL_GENZERO_PRIMES)")

    sp = add("mu-coker", "dim coker μ against the mixed Koszul group")
    sp.add_argument("--W", help="JSON basis of W in V1")
    return ap


def _params(args) -> Dict[str, Any]:
    skip = {"command", "output"}
    out = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    if "klass" in out:
        out["class"] = out.pop("klass")
    return dict(sorted(out.items()))


def _emit_text(report: Dict, fh) -> None:
    for k in sorted(report):
        v = report[k]
        if isinstance(v, (dict, list)):
            v = json.dumps(v, sort_keys=True)
        elif isinstance(v, bool) or v is None:
            v = json.dumps(v)
        fh.write(f"{k}: {v}\n")


def run(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        job = _Job(args)
        result = COMMANDS[args.command](job)
    except (PreconditionError, FourTermError) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (FormatError, ModelError, ValueError, IndexError, KeyError, TypeError) as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    report = dict(result)
    report["command"] = args.command
    report["params"] = _params(args)
    if job.model_obj is not None:
        report["model_sha256"] = sha256_of(job.model_obj)
    if args.output == "json":
        out.write(json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n")
    else:
        _emit_text(report, out)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
