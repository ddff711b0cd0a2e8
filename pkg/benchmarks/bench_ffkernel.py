"""Compiled vs pure-Python generalised-zero enumeration.

    python benchmarks/bench_ffkernel.py [--repeat N]

Each case scans every projective point of F_p^h for a drop in rank of
d(u ^ .) on a random skew datum without generalised zeros over the field.
"""

import argparse
import random
import time

from koszul import _ffkernel_py as pure

try:
    from koszul import _ffkernel as compiled
except ImportError:
    compiled = None

CASES = [(4, 5, 11), (5, 5, 7), (5, 5, 11), (6, 6, 7)]  # (h, m, p)


def random_datum(h, m, seed):
    rng = random.Random(seed)
    D = [0] * (h * h * m)
    for a in range(h):
        for b in range(a + 1, h):
            for k in range(m):
                v = rng.randint(-5, 5)
                D[(a * h + b) * m + k] = v
                D[(b * h + a) * m + k] = -v
    return D


def scan(impl, D, h, m, p):
    hits, start = 0, 0
    while True:
        i = impl.first_candidate(D, h, m, p, start)
        if i < 0:
            return hits
        hits += 1
        start = i + 1


def best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'h':>2} {'m':>2} {'p':>3} {'points':>8} {'hits':>5} {'python s':>9} {'cython s':>9} {'speedup':>8}")
    for h, m, p in CASES:
        D = random_datum(h, m, seed=h * 100 + p)
        tp, hp = best_time(lambda: scan(pure, D, h, m, p), args.repeat)
        if compiled is not None:
            tc, hc = best_time(lambda: scan(compiled, D, h, m, p), args.repeat)
            assert hc == hp, "backends disagree"
            extra = f"{tc:9.4f} {tp / tc:7.1f}x"
        else:
            extra = f"{'n/a':>9} {'n/a':>8}"
        print(f"{h:2d} {m:2d} {p:3d} {pure.num_points(h, p):8d} {hp:5d} {tp:9.4f} {extra}")


if __name__ == "__main__":
    main()
