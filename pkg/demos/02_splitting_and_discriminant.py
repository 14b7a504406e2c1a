"""Splitting a symmetric 2-differential into two 1-forms, reading the
discriminant, and resolving a non-split differential by a ramified cover.

The star input is w = z1 dz1^2 - dz2^2: its discriminant vanishes to odd
order along {z1 = 0}, which is exactly the obstruction to ordering the two
foliations.  Pulling back along z1 = s^2 removes it.

Run:  python demos/02_splitting_and_discriminant.py
"""

from symdiff2 import (
    EXACT,
    NotSplit,
    Series2,
    SymTwoDiff,
    classify_component,
    core_discriminant,
    discriminant,
    product,
    pullback_cover,
    rank,
    split,
)

ctx = EXACT
z1 = Series2.variable(ctx, 0)
z2 = Series2.variable(ctx, 1)
one = Series2.const(ctx, 1)
zero = Series2.zero(ctx)

print("== a differential that splits ==")
w = SymTwoDiff(one, z1 * z2, zero)  # dz1^2 + z1 z2 dz1 dz2
print("w    = dz1^2 + z1 z2 dz1 dz2")
print("rank =", rank(w))
print("disc =", discriminant(w))
mu1, mu2 = split(w)
print("factor 1:", mu1)
print("factor 2:", mu2)
print("product reproduces w:", product(mu1, mu2).eq_through(w))

print()
print("== classifying the discriminant components ==")
for label, h in (("z1", z1), ("z2", z2)):
    cc = classify_component(w, h, label)
    kind = {"C": "common leaf", "R": "tangency, not a leaf"}.get(cc.geometry, cc.geometry)
    print(f"  {{{label}=0}}: parity {cc.parity}, multiplicity {cc.mult_disc}, {kind}")
core, table = core_discriminant(w, [("z1", z1), ("z2", z2)])
print("core multiplicities:", {k: v["core"] for k, v in table.items()})

print()
print("== a non-split differential and its ramified cover ==")
w2 = SymTwoDiff(z1, zero, -one)  # z1 dz1^2 - dz2^2
print("w    = z1 dz1^2 - dz2^2")
print("disc =", discriminant(w2))
try:
    split(w2)
except NotSplit as exc:
    print("split fails:", exc)
    print("  -> the square root of z1 needs a degree-2 cover")

cov = pullback_cover(w2, 2)  # z1 = s^2
print("after z1 = s^2:", cov.a, "ds^2  -", -cov.c, "dz2^2")
f1, f2 = split(cov)
print("factor 1:", f1)
print("factor 2:", f2)
print("both factors exact (closed):", f1.is_closed(), f2.is_closed())
