"""The algebra of symmetric 2-differentials and 1-forms.

A :class:`SymTwoDiff` is the coefficient triple of
``a dz1^2 + b dz1 dz2 + c dz2^2``; a :class:`OneForm` is ``A dz1 + B dz2``.
This module computes products, discriminants (``a c - b^2 / 4``), rank,
local splittings into two 1-forms (with a certificate when the splitting is
obstructed by odd discriminant multiplicity), pullbacks along coordinate
maps and along monomial ramified covers of the first variable, and the
parity/geometry classification of discriminant components.

Component multiplicities are computed by exact division in the local series
ring.  Irreducible components are supplied explicitly as polynomials (the
coordinate axes in all the worked cases); no factorization is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DivisionFailure,
    Inconclusive,
    NotSplit,
    SingularJacobian,
    ValuationError,
)
from .series import DEFAULT_ORDER, INF, CoordMap, Series2


@dataclass(frozen=True)
class OneForm:
    """A 1-form A dz1 + B dz2."""

    A: Series2
    B: Series2

    @property
    def ctx(self):
        return self.A.ctx

    @property
    def names(self):
        return self.A.names

    def wedge(self, other: "OneForm") -> Series2:
        """The coefficient of dz1 ^ dz2 in self ^ other."""
        return self.A * other.B - self.B * other.A

    def is_closed(self) -> bool:
        """Mixed-partial test: d(A dz1 + B dz2) = 0."""
        return (self.B.derive(0) - self.A.derive(1)).is_zero()

    def scale(self, x) -> "OneForm":
        return OneForm(self.A.scale(x), self.B.scale(x))

    def mul_series(self, s: Series2) -> "OneForm":
        return OneForm(self.A * s, self.B * s)

    def is_zero(self) -> bool:
        return self.A.is_zero() and self.B.is_zero()

    def eq_through(self, other: "OneForm") -> bool:
        return self.A.eq_through(other.A) and self.B.eq_through(other.B)

    def __str__(self):
        n1, n2 = self.names
        return f"({self.A}) d{n1} + ({self.B}) d{n2}"


@dataclass
class SymTwoDiff:
    """A symmetric 2-differential a dz1^2 + b dz1 dz2 + c dz2^2."""

    a: Series2
    b: Series2
    c: Series2
    provenance: tuple | None = None  # (OneForm, OneForm) if built as a product

    @property
    def ctx(self):
        return self.a.ctx

    @property
    def names(self):
        return self.a.names

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero() and self.c.is_zero()

    def eq_through(self, other: "SymTwoDiff") -> bool:
        return (
            self.a.eq_through(other.a)
            and self.b.eq_through(other.b)
            and self.c.eq_through(other.c)
        )

    def scale_series(self, s: Series2) -> "SymTwoDiff":
        return SymTwoDiff(self.a * s, self.b * s, self.c * s)

    def __str__(self):
        n1, n2 = self.names
        return f"({self.a}) d{n1}^2 + ({self.b}) d{n1}d{n2} + ({self.c}) d{n2}^2"


def product(mu: OneForm, nu: OneForm) -> SymTwoDiff:
    """The symmetric product of two 1-forms."""
    return SymTwoDiff(
        mu.A * nu.A,
        mu.A * nu.B + mu.B * nu.A,
        mu.B * nu.B,
        provenance=(mu, nu),
    )


def discriminant(w: SymTwoDiff) -> Series2:
    """a c - b^2 / 4."""
    quarter = w.ctx.from_rational(Fraction(1, 4))
    return w.a * w.c - (w.b * w.b).scale(quarter)


def rank(w: SymTwoDiff):
    """2 when the discriminant is visibly nonzero, 1 when it vanishes exactly.

    A discriminant that merely vanishes through a finite guaranteed order is
    reported as Inconclusive rather than guessed.
    """
    if w.is_zero():
        raise ValueError("rank of the zero differential is undefined")
    d = discriminant(w)
    if not d.is_zero():
        return 2
    if d.order is INF:
        return 1
    raise Inconclusive(
        "discriminant vanishes through the guaranteed order; "
        "rank could be 1 or the truncation is too low"
    )


# -- local-ring division ----------------------------------------------------


def _homog_div(R: dict, H: dict, ctx, qdeg_max: int):
    """Divide homogeneous slices, encoded as x-exponent -> coefficient."""
    Q = {}
    R = dict(R)
    hmax = max(H)
    hlead_inv = ctx.inv(H[hmax])
    while R:
        rmax = max(R)
        qe = rmax - hmax
        if qe < 0 or qe > qdeg_max:
            return None
        qc = R[rmax] * hlead_inv
        Q[qe] = qc
        for he, hc in H.items():
            k = he + qe
            nv = R.get(k, ctx.zero) - qc * hc
            if ctx.is_zero(nv):
                R.pop(k, None)
            else:
                R[k] = nv
    return Q


def try_divide(s: Series2, h: Series2, order=None):
    """Exact division s / h in the local ring, through the guaranteed order.

    ``h`` must be an exact polynomial vanishing at the origin or a monomial.
    Returns the quotient, or None when h does not divide s.
    """
    ctx = s.ctx
    if h.is_zero():
        raise ZeroDivisionError("division by the zero series")
    if h.order is not INF:
        raise DivisionFailure("divisor components must be exact polynomials")
    if s.pole or h.pole:
        raise ValuationError("local-ring division is defined for pole-free series")
    if s.is_zero():
        new_order = s.order if s.order is INF else s.order - h.valuation
        return Series2.zero(ctx, new_order, s.names)
    if len(h.coeffs) == 1:
        ((i0, j0), c0) = next(iter(h.coeffs.items()))
        if any(i < i0 or j < j0 for (i, j) in s.coeffs):
            return None
        return s.div_monomial(i0, j0).scale(ctx.inv(c0))
    d = h.valuation
    if order is not None:
        bound = order
    elif s.order is not INF:
        bound = s.order
    else:
        bound = max(DEFAULT_ORDER, max(i + j for (i, j) in s.coeffs))
    H = {i: c for (i, j), c in h.coeffs.items() if i + j == d}
    rem = dict(s.coeffs)
    q = {}
    vmin = min(i + j for (i, j) in rem)
    for v in range(vmin, bound + 1):
        Rv = {
            i: c
            for (i, j), c in rem.items()
            if i + j == v and not ctx.is_zero(c)
        }
        if not Rv:
            continue
        Qv = _homog_div(Rv, H, ctx, v - d)
        if Qv is None:
            return None
        for qe, qc in Qv.items():
            qj = v - d - qe
            q[(qe, qj)] = qc
            for (hi, hj), hc in h.coeffs.items():
                k = (qe + hi, qj + hj)
                nv = rem.get(k, ctx.zero) - qc * hc
                if ctx.is_zero(nv):
                    rem.pop(k, None)
                else:
                    rem[k] = nv
    if s.order is INF:
        candidate = Series2(ctx, q, INF, s.names)
        if (candidate * h).eq_through(s) and not rem:
            return candidate
    return Series2(ctx, q, bound - d, s.names)


def _homog_sqrt(F: dict, ctx):
    """Square root of a homogeneous slice in x-encoding, or None.

    May raise ExactValueError when the leading coefficient has no square
    root in the exact scalar domain.
    """
    top = max(F)
    lead = ctx.sqrt(F[top])
    m = top // 2 if top % 2 == 0 else None
    if m is None:
        return None
    p = {m: lead}
    inv2lead = ctx.inv(lead * ctx.from_int(2))
    for s in range(top - 1, m - 1, -1):
        e = s - m
        acc = F.get(s, ctx.zero)
        for j, cj in list(p.items()):
            k = s - j
            if k in p and j > e and k > e:
                if j <= k:  # count each unordered pair once
                    term = cj * p[k]
                    acc = acc - (term if j == k else term * ctx.from_int(2))
        coeff = acc * inv2lead
        if not ctx.is_zero(coeff):
            p[e] = coeff
    # verify the full square, including the low-degree tail
    square = {}
    for j, cj in p.items():
        for k, ck in p.items():
            square[j + k] = square.get(j + k, ctx.zero) + cj * ck
    keys = set(F) | set(square)
    for key in keys:
        if not ctx.eq(F.get(key, ctx.zero), square.get(key, ctx.zero)):
            return None
    return p


def perfect_square_root(s: Series2, order=None):
    """A series delta with delta^2 = s through the guaranteed order, or None.

    Works degree by degree from the lowest homogeneous form, which must be a
    perfect square of a homogeneous polynomial; each correction solves an
    exact homogeneous division by that square root.  This covers square
    discriminants whose vanishing is not aligned with the coordinate axes.
    """
    ctx = s.ctx
    if s.is_zero() or s.pole:
        return None
    v = s.valuation
    if v % 2:
        return None
    d = v // 2
    if order is not None:
        bound = order
    elif s.order is not INF:
        bound = s.order
    else:
        bound = max(DEFAULT_ORDER, max(i + j for (i, j) in s.coeffs))
    F = {i: c for (i, j), c in s.coeffs.items() if i + j == v}
    H = _homog_sqrt(F, ctx)
    if H is None or max(H) > d:
        return None
    twoH = {e: c * ctx.from_int(2) for e, c in H.items()}
    delta = Series2(ctx, {(e, d - e): c for e, c in H.items()}, bound - d, s.names)
    for t in range(v + 1, bound + 1):
        rem = s - delta * delta
        Rt = {
            i: c for (i, j), c in rem.coeffs.items()
            if i + j == t and not ctx.is_zero(c)
        }
        if not Rt:
            continue
        Q = _homog_div(Rt, twoH, ctx, t - d)
        if Q is None:
            return None
        delta = delta + Series2(
            ctx, {(e, t - d - e): c for e, c in Q.items()}, bound - d, s.names
        )
    if not (delta * delta).eq_through(s.truncated(bound)):
        return None
    return delta


def multiplicity(s: Series2, h: Series2) -> int:
    """Largest k with h^k | s, decided through the guaranteed order."""
    if s.is_zero():
        raise Inconclusive("series vanishes; multiplicity is unbounded or unknown")
    count = 0
    cur = s
    while count <= 4 * DEFAULT_ORDER:
        nxt = try_divide(cur, h)
        if nxt is None:
            return count
        count += 1
        cur = nxt
        if cur.is_zero():
            raise Inconclusive(
                "quotient vanishes through the guaranteed order; "
                "multiplicity undecidable at this truncation"
            )
    raise Inconclusive("multiplicity loop exceeded sanity bound")


def core_discriminant(w: SymTwoDiff, components):
    """Discriminant multiplicities and the core discriminant representative.

    ``components`` is a sequence of (label, polynomial) pairs.  For each
    component the multiplicity in the discriminant is computed by repeated
    exact division; the divisorial content of w along the component (the
    least multiplicity across a, b, c) is subtracted twice from the
    discriminant to produce the core representative.
    """
    disc = discriminant(w)
    if disc.is_zero():
        raise Inconclusive("discriminant vanishes; core discriminant undefined")
    table = {}
    core = disc
    for label, h in components:
        m = multiplicity(disc, h)
        contents = [
            multiplicity(x, h) for x in (w.a, w.b, w.c) if not x.is_zero()
        ]
        g = min(contents) if contents else 0
        if g:
            for _ in range(2 * g):
                nxt = try_divide(core, h)
                if nxt is None:
                    raise DivisionFailure(
                        f"component {label} does not divide the discriminant "
                        f"at the requested multiplicity {2 * g}"
                    )
                core = nxt
        table[label] = {"disc": m, "content": g, "core": m - 2 * g}
    return core, table


# -- splitting ---------------------------------------------------------------


def _axis_content(w: SymTwoDiff):
    parts = [s for s in (w.a, w.b, w.c) if not s.is_zero()]
    if not parts:
        raise ValueError("zero differential")
    g1 = max(0, min(s.ord_along_axis(0) for s in parts))
    g2 = max(0, min(s.ord_along_axis(1) for s in parts))
    return g1, g2


def _normalize_pair(mu1: OneForm, mu2: OneForm):
    """Deterministic gauge: order foliations by their lowest monomials, then
    rescale by a constant pair so the first factor is monic in its lowest term."""

    def monokey(s: Series2):
        if s.is_zero():
            return (1, ())  # sort after nonzero series
        k = min((i + j, i, j) for (i, j) in s.coeffs)
        return (0, k)

    def formkey(mu: OneForm):
        return (monokey(mu.A), monokey(mu.B))

    if formkey(mu2) < formkey(mu1):
        mu1, mu2 = mu2, mu1
    lead_series = mu1.A if not mu1.A.is_zero() else mu1.B
    key = min((i + j, i, j) for (i, j) in lead_series.coeffs)
    lam = lead_series.coefficient(key[1], key[2])
    ctx = mu1.ctx
    return mu1.scale(ctx.inv(lam)), mu2.scale(lam)


def split(w: SymTwoDiff):
    """Split a rank-2 differential into two 1-forms, or certify failure.

    Axis powers of even multiplicity are removed from -4 disc before taking
    the series square root; an odd multiplicity along an axis is exactly the
    splitting obstruction and is raised as a NotSplit certificate carrying
    the witness axis.
    """
    ctx = w.ctx
    names = w.names
    g1, g2 = _axis_content(w)
    if g1 or g2:
        core = SymTwoDiff(
            w.a.div_monomial(g1, g2),
            w.b.div_monomial(g1, g2),
            w.c.div_monomial(g1, g2),
        )
    else:
        core = w
    one = Series2.const(ctx, ctx.one, INF, names)
    if core.a.is_zero():
        mu1, mu2 = OneForm(Series2.zero(ctx, core.a.order, names), one), OneForm(
            core.b, core.c
        )
    elif core.c.is_zero():
        mu1, mu2 = OneForm(one, Series2.zero(ctx, core.c.order, names)), OneForm(
            core.a, core.b
        )
    else:
        D = core.b * core.b - (core.a * core.c).scale(4)
        if D.is_zero():
            raise Inconclusive(
                "b^2 - 4ac vanishes through the guaranteed order; "
                "rank < 2 or precision exhausted"
            )
        k1 = max(0, D.ord_along_axis(0))
        k2 = max(0, D.ord_along_axis(1))
        if k1 % 2:
            raise NotSplit(names[0], k1)
        if k2 % 2:
            raise NotSplit(names[1], k2)
        Q = D.div_monomial(k1, k2)
        if Q.is_unit:
            if len(Q.coeffs) == 1:
                root = Series2.const(ctx, ctx.sqrt(Q.constant_term), Q.order, names)
            else:
                root = Q.sqrt()
        else:
            # non-axis vanishing: try a graded perfect-square root
            root = perfect_square_root(Q)
            if root is None:
                raise Inconclusive(
                    "b^2 - 4ac is not a perfect series square after removing "
                    "axis powers; cannot certify a splitting"
                )
        delta = root * Series2.monomial(ctx, k1 // 2, k2 // 2, names=names)
        half = ctx.from_rational(Fraction(1, 2))
        if core.a.is_unit:
            inv2a = core.a.scale(2).invert_unit()
            mu1 = OneForm(core.a, (core.b - delta).scale(half))
            mu2 = OneForm(one, (core.b + delta) * inv2a)
        elif core.c.is_unit:
            inv2c = core.c.scale(2).invert_unit()
            mu1 = OneForm((core.b - delta).scale(half), core.c)
            mu2 = OneForm((core.b + delta) * inv2c, one)
        else:
            for signed in (delta, -delta):
                cand = core.b + signed
                if cand.is_unit:
                    invc = cand.invert_unit()
                    mu1 = OneForm(cand.scale(half), core.c)
                    mu2 = OneForm(core.a.scale(2) * invc, one)
                    break
            else:
                raise Inconclusive(
                    "no unit normalization available for the split factors"
                )
    if g1 or g2:
        mono = Series2.monomial(ctx, g1, g2, names=names)
        mu1 = mu1.mul_series(mono)
    return _normalize_pair(mu1, mu2)


# -- pullbacks ---------------------------------------------------------------


def pullback(w: SymTwoDiff, phi: CoordMap) -> SymTwoDiff:
    """Chain rule along an invertible coordinate map."""
    if phi.ctx.is_zero(phi.det_origin()):
        raise SingularJacobian("pullback along a non-invertible map")
    a = w.a.substitute(phi.comp1, phi.comp2)
    b = w.b.substitute(phi.comp1, phi.comp2)
    c = w.c.substitute(phi.comp1, phi.comp2)
    d11, d12 = phi.comp1.derive(0), phi.comp1.derive(1)
    d21, d22 = phi.comp2.derive(0), phi.comp2.derive(1)
    return SymTwoDiff(
        a * d11 * d11 + b * d11 * d21 + c * d21 * d21,
        (a * d11 * d12).scale(2) + b * (d11 * d22 + d12 * d21) + (c * d21 * d22).scale(2),
        a * d12 * d12 + b * d12 * d22 + c * d22 * d22,
    )


def pullback_cover(w: SymTwoDiff, degree: int, new_var: str = "s") -> SymTwoDiff:
    """Pullback along the ramified cover z1 = s^degree (z2 unchanged)."""
    if degree < 1:
        raise ValueError("cover degree must be >= 1")
    ctx = w.ctx
    names = (new_var, w.names[1])
    inner1 = Series2.monomial(ctx, degree, 0, names=names)
    inner2 = Series2.variable(ctx, 1, INF, names)

    def comp(s):
        return s.with_names(names).substitute(inner1, inner2)

    jac = Series2.monomial(ctx, degree - 1, 0, coeff=degree, names=names)
    return SymTwoDiff(
        comp(w.a) * jac * jac,
        comp(w.b) * jac,
        comp(w.c),
    )


def jacobian_det(phi: CoordMap) -> Series2:
    """The full Jacobian determinant series of a coordinate map."""
    d11, d12 = phi.comp1.derive(0), phi.comp1.derive(1)
    d21, d22 = phi.comp2.derive(0), phi.comp2.derive(1)
    return d11 * d22 - d12 * d21


# -- component classification -------------------------------------------------


@dataclass(frozen=True)
class ComponentClass:
    """Parity and geometry of a discriminant component.

    ``parity`` is N (odd multiplicity, the non-split locus) or S (even);
    ``geometry`` is C for a common leaf of both foliations, R for a tangency
    that is not a leaf, "none" when neither test fires, and "undecided" when
    the differential does not split so the leaf test cannot run.
    """

    parity: str
    geometry: str
    mult_disc: int
    mult_core: int


def classify_component(w: SymTwoDiff, h: Series2, label: str = "h") -> ComponentClass:
    disc = discriminant(w)
    m = multiplicity(disc, h)
    if m == 0:
        raise DivisionFailure(f"component {label} does not divide the discriminant")
    parity = "N" if m % 2 else "S"
    contents = [multiplicity(x, h) for x in (w.a, w.b, w.c) if not x.is_zero()]
    g = min(contents) if contents else 0
    mult_core = m - 2 * g
    reduced = w
    if g:
        parts = []
        for s in (w.a, w.b, w.c):
            cur = s
            for _ in range(g):
                cur = try_divide(cur, h)
                if cur is None:
                    raise DivisionFailure(
                        f"content extraction along {label} failed"
                    )
            parts.append(cur)
        reduced = SymTwoDiff(*parts)
    try:
        mu1, mu2 = split(reduced)
    except (NotSplit, Inconclusive):
        return ComponentClass(parity, "undecided", m, mult_core)
    h1, h2 = h.derive(0), h.derive(1)

    def is_leaf(mu: OneForm) -> bool:
        # contraction with the tangent field (-dh/dz2, dh/dz1) of {h = 0}
        contraction = mu.B * h1 - mu.A * h2
        return try_divide(contraction, h) is not None

    if is_leaf(mu1) and is_leaf(mu2):
        geometry = "C"
    elif try_divide(mu1.wedge(mu2), h) is not None:
        geometry = "R"
    else:
        geometry = "none"
    return ComponentClass(parity, geometry, m, mult_core)
