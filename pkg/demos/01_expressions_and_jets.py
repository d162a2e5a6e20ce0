"""Expressions, exact derivatives, and third-order jets.

The expression module parses one-variable formulas into immutable trees and
differentiates them symbolically, so third derivatives (which the curvature
branch constants need) stay exact instead of being finite-differenced.
"""

import numpy as np

from sepsurf import Func1D, differentiate, evaluate, parse_expr, print_expr

print("== parse and print ==")
tree = parse_expr("-2*log(x)")
print("source  : -2*log(x)")
print("tree    :", tree)
print("printed :", print_expr(tree))

print("\n== symbolic derivatives ==")
d1 = differentiate(tree)
d2 = differentiate(d1)
print("d1      :", print_expr(d1))
print("d2      :", print_expr(d2))

print("\n== jets: value and three derivatives at a point ==")
f = Func1D.parse("-2*log(x)", domain=(0, np.inf))
print("jet at x=1:", f.jet3(1.0).as_tuple(), " (expected (0, -2, 2, -4))")

g = Func1D.parse("exp(x)")
print("jet of exp at 0:", g.jet3(0.0).as_tuple())

print("\n== finite differences as an independent cross-check ==")
h = 1e-5
x0 = 0.7
fd = (f.value(x0 + h) - f.value(x0 - h)) / (2 * h)
print(f"symbolic f'({x0}) = {f.jet3(x0).d1:.12f}")
print(f"central  f'({x0}) = {fd:.12f}")

print("\n== vectorized evaluation with NaN outside the real domain ==")
xs = np.array([-1.0, 0.5, 1.0, 2.0])
print("-2*log(x) over", xs, "->", f.value_array(xs))

print("\n== strict scalar evaluation raises instead ==")
try:
    evaluate(parse_expr("log(x)"), -1.0)
except Exception as exc:
    print("log(-1) ->", type(exc).__name__, "-", exc)
