"""Random instances for property checks (seeded, reproducible)."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Optional

from .exactnum import RATIONAL, FieldContext, QuadScalar
from .geometry import Arrangement, Triple

FIELDS = (-3, -1, 2, 3, 5, -7)


def random_rational(rng: random.Random, size: int = 6) -> Fraction:
    return Fraction(rng.randint(-size, size), rng.randint(1, size))


def random_scalar(rng: random.Random, ctx: FieldContext, size: int = 6) -> QuadScalar:
    b = random_rational(rng, size) if ctx.d is not None else 0
    return ctx(random_rational(rng, size), b)


def random_arrangement(rng: random.Random, ell: int, ctx: FieldContext = RATIONAL, spread: Optional[int] = None) -> Arrangement:
    """``ell`` distinct lines with small integer coefficients.

    Small spreads give many concurrences, which is what makes the lattices
    interesting; coefficients pick up a sqrt(d) part with probability 1/4.
    """
    spread = rng.choice((1, 1, 2, 3)) if spread is None else spread
    lines: List[Triple] = []
    seen = set()
    attempts = 0
    while len(lines) < ell:
        attempts += 1
        if attempts > 10000:
            spread += 1
            attempts = 0
        coords = []
        for _ in range(3):
            a = rng.randint(-spread, spread)
            b = rng.randint(-1, 1) if ctx.d is not None and rng.random() < 0.25 else 0
            coords.append(ctx(a, b))
        if all(c.is_zero() for c in coords):
            continue
        t = Triple(*coords, ctx=ctx)
        if t not in seen:
            seen.add(t)
            lines.append(t)
    return Arrangement(ctx, tuple(lines))


def random_invertible(rng: random.Random, ctx: FieldContext, size: int = 3):
    while True:
        m = [[ctx(rng.randint(-size, size), rng.randint(-1, 1) if ctx.d is not None and rng.random() < 0.3 else 0)
              for _ in range(3)] for _ in range(3)]
        det = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
               - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
               + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
        if det:
            return m
