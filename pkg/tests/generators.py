"""Seeded random expansions for the property suites.

Every expansion is a product of orthants ``R^a x R^b`` (with ``a, b`` in
{1, 2}) refined by a few stellar subdivisions at rays ``(x, t)`` where
``x`` is a small nonnegative vector and ``t`` is zero or a unit vector.
Rays of that shape project to faces of the base orthant, so most draws
pass validation; anything that does not is discarded.
"""

from __future__ import annotations

import random

from tropical_rubber.complexes import build_complex, star_subdivide
from tropical_rubber.cones import Cone
from tropical_rubber.expansion import make_expansion, validate_expansion


def _unit(n: int, i: int) -> tuple[int, ...]:
    return tuple(1 if j == i else 0 for j in range(n))


def random_expansion(rng: random.Random):
    a = rng.choice((1, 2))
    b = rng.choice((1, 2)) if a == 1 else rng.choice((1, 1, 2))
    n = a + b
    cx = build_complex(n, {"top": Cone(n, [_unit(n, i) for i in range(n)])})
    for k in range(rng.randint(0, 3)):
        x = tuple(rng.randint(0, 2) for _ in range(a))
        t = _unit(b, rng.randrange(b)) if rng.random() < 0.8 else (0,) * b
        w = x + t
        if not any(w):
            continue
        cx = star_subdivide(cx, w, name=f"w{k}")
    sigma = {"S": Cone(a, [_unit(a, i) for i in range(a)])}
    tau = Cone(b, [_unit(b, i) for i in range(b)])
    ups = {f"m{i}": cx[m] for i, m in enumerate(cx.maximal())}
    return make_expansion(sigma, tau, ups, sigma_rank=a)


def valid_expansions(count: int, seed: int = 20240611):
    """``count`` valid expansions together with the number of draws needed."""
    rng = random.Random(seed)
    out, draws = [], 0
    while len(out) < count:
        draws += 1
        E = random_expansion(rng)
        if validate_expansion(E).is_valid:
            out.append(E)
    return out, draws
