"""Deciding closedness with the complexified curvature operator.

A 2-differential in the chart form g dz1 dz2 is a product of closed 1-forms
exactly when g separates as f(z1) h(z2); the obstruction is the numerator
of the complexified Gaussian curvature, a polynomial differential operator
in the coefficients.  Closed decompositions are unique up to a constant
pair (c, 1/c).

Run:  python demos/03_closedness_test.py
"""

from fractions import Fraction

from symdiff2 import (
    EXACT,
    NotSeparable,
    OneForm,
    Series2,
    SymTwoDiff,
    compare_decompositions,
    first_kind_decompose,
    is_closed,
    product,
    verify_abelian_relation,
)
from symdiff2.expressions import eval_text

ctx = EXACT
z1 = Series2.variable(ctx, 0)
z2 = Series2.variable(ctx, 1)
one = Series2.const(ctx, 1)
zero = Series2.zero(ctx)


def exact_form(s):
    return OneForm(s.derive(0), s.derive(1))


print("== products of exact 1-forms are closed ==")
F = z1.truncated(10).exp(10) + z2          # e^{z1} + z2
G = z1 - z2
w = product(exact_form(F), exact_form(G))  # d(e^{z1}+z2) d(z1-z2)
rep = is_closed(w)
print("w = d(e^z1 + z2) d(z1 - z2):", rep.verdict, "|", rep.note)

print()
print("== a chart-form differential that is not closed ==")
g = eval_text("exp(z1*z2)", 10, ctx)
rep = is_closed(SymTwoDiff(zero, g, zero))
print("w = e^{z1 z2} dz1 dz2:", rep.verdict)
print("curvature numerator leading term:", rep.numerator.terms_sorted()[0])

print()
print("== separation of variables when it exists ==")
sep = eval_text("exp(z1+z2)", 10, ctx)
f, h = first_kind_decompose(sep)
print("e^{z1+z2} = f(z1) h(z2) with f =", f)
try:
    first_kind_decompose(g)
except NotSeparable:
    print("e^{z1 z2} does not separate (certified residual attached)")

print()
print("== uniqueness up to a constant pair ==")
d1 = (OneForm(one, zero), OneForm(zero, one))               # dz1 * dz2
d2 = (OneForm(one.scale(2), zero), OneForm(zero, one.scale(Fraction(1, 2))))
c, cinv = compare_decompositions(d1, d2)
print("second decomposition differs by (c, 1/c) =", f"({c}, {cinv})")

print()
print("== abelian relations of a decomposition ==")
print("only the zero tuple works for independent factors:")
print("  (0, 0):  ", verify_abelian_relation((zero, zero), d1))
print("  (1, 1):  ", verify_abelian_relation((one, one), d1))
