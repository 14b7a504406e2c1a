"""Shared generators for the randomized property suites.

All randomness is seeded per test, so failures reproduce deterministically.
"""

import random
from fractions import Fraction

import pytest

from symdiff2 import APPROX, EXACT, CoordMap, Series1, Series2


def rand_fraction(rnd: random.Random, small: int = 3) -> Fraction:
    return Fraction(rnd.randint(-small, small), rnd.randint(1, small))


def rand_nonzero_fraction(rnd: random.Random, small: int = 3) -> Fraction:
    while True:
        q = rand_fraction(rnd, small)
        if q:
            return q


def rand_scalar(ctx, rnd: random.Random, complex_ok: bool = True):
    re = rand_fraction(rnd)
    im = rand_fraction(rnd) if complex_ok and rnd.random() < 0.25 else 0
    return ctx.from_rational(re, im)


def rand_poly2(ctx, rnd: random.Random, deg: int = 4, nterms: int = 5, names=("z1", "z2"),
               small: int = 3):
    """Sparse random exact polynomial (order = inf)."""
    terms = {}
    for _ in range(nterms):
        i = rnd.randint(0, deg)
        j = rnd.randint(0, deg - i)
        terms[(i, j)] = ctx.from_rational(rand_fraction(rnd, small))
    return Series2.from_terms(ctx, terms, names=names)


def rand_unit2(ctx, rnd: random.Random, deg: int = 4, nterms: int = 5, constant=1,
               names=("z1", "z2"), small: int = 3):
    """Random polynomial unit; constant term defaults to 1 (exact-friendly).

    Approx-backend property tests should pass small=1 so that roundoff in
    high powers stays below the comparison tolerance.
    """
    s = rand_poly2(ctx, rnd, deg, nterms, names, small)
    shift = ctx.from_rational(Fraction(constant)) - s.constant_term
    return s + Series2.const(ctx, shift, names=names)


def tame(ctx) -> int:
    """Coefficient size bound keeping approx roundoff under the tolerance."""
    return 1 if ctx.name == "approx" else 3


def rand_poly1(ctx, rnd: random.Random, deg: int = 4, nterms: int = 3, var="z1"):
    terms = {rnd.randint(0, deg): ctx.from_rational(rand_fraction(rnd)) for _ in range(nterms)}
    return Series1(ctx, terms, float("inf"), var)


def rand_coordmap(ctx, rnd: random.Random, order: int = 8, names=("z1", "z2")) -> CoordMap:
    """Random invertible polynomial coordinate map with terms through degree 3.

    The linear part is kept close to the identity so jet inversion stays
    well conditioned on the approx backend.
    """
    small = tame(ctx)
    while True:
        a11 = 1 + rand_fraction(rnd, small) / 4
        a22 = 1 + rand_fraction(rnd, small) / 4
        a12 = rand_fraction(rnd, small) / 4
        a21 = rand_fraction(rnd, small) / 4
        if a11 * a22 - a12 * a21:
            break
    comps = []
    for lin in ((a11, a12), (a21, a22)):
        terms = {(1, 0): ctx.from_rational(lin[0]), (0, 1): ctx.from_rational(lin[1])}
        for _ in range(rnd.randint(0, 3)):
            i = rnd.randint(0, 3)
            j = rnd.randint(0, 3 - i)
            if i + j >= 2:
                terms[(i, j)] = ctx.from_rational(rand_fraction(rnd, small))
        comps.append(Series2.from_terms(ctx, terms, order=order, names=names))
    return CoordMap(comps[0], comps[1])


@pytest.fixture(params=["exact", "approx"])
def ctx(request):
    return EXACT if request.param == "exact" else APPROX


@pytest.fixture
def exact_ctx():
    return EXACT


@pytest.fixture
def approx_ctx():
    return APPROX
