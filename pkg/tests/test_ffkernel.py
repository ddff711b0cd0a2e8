import random

import pytest

from koszul import _ffkernel_py as pure
from koszul import ffield

try:
    from koszul import _ffkernel as compiled
except ImportError:  # pragma: no cover
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernel not built")


def test_point_enumeration():
    p, h = 3, 3
    pts = [pure.point_at(i, h, p) for i in range(pure.num_points(h, p))]
    assert len(pts) == 13 == len(set(map(tuple, pts)))
    assert pts[0] == [0, 0, 1] and pts[-1] == [1, 2, 2]
    assert all(next(x for x in q if x) == 1 for q in pts)


def test_pure_rank_and_nullspace():
    assert pure.rank_mod_p([[1, 2], [2, 4]], 5) == 1
    assert pure.rank_mod_p([[1, 2], [3, 4]], 2) == 1
    N = pure.nullspace_mod_p([[1, 1, 1]], 3, 7)
    assert len(N) == 2 and all(sum(v) % 7 == 0 for v in N)


@needs_compiled
def test_backends_agree_on_rank():
    rng = random.Random(3)
    for _ in range(200):
        p = rng.choice([2, 3, 5, 7, 11])
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        M = [[rng.randint(-20, 20) for _ in range(c)] for _ in range(r)]
        assert compiled.rank_mod_p(M, p) == pure.rank_mod_p(M, p)


@needs_compiled
def test_backends_agree_on_candidates():
    rng = random.Random(5)
    for _ in range(40):
        h, m, p = rng.randint(2, 5), rng.randint(1, 3), rng.choice([3, 5, 7])
        D = [0] * (h * h * m)
        for a in range(h):
            for b in range(a + 1, h):
                for k in range(m):
                    v = rng.randint(-2, 2) if rng.random() < 0.5 else 0
                    D[(a * h + b) * m + k] = v
                    D[(b * h + a) * m + k] = -v
        start = 0
        while True:
            i1 = compiled.first_candidate(D, h, m, p, start)
            i2 = pure.first_candidate(D, h, m, p, start)
            assert i1 == i2
            if i1 < 0:
                break
            start = i1 + 1


def test_backend_name():
    assert ffield.BACKEND in ("cython", "python")
