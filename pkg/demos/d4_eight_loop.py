"""Exact fixed points of the eight-loop word at the D4 point theta = (8, 8, 8, 28).

A fixed point of sigma_2 sigma_3 sigma_2 sigma_1 (sigma_1 applied first)
satisfies sigma_2 sigma_1 x = sigma_3 sigma_2 x.  A lex Groebner basis of
that system together with f = 0 lists every affine solution; the solver
count is compared against it.  Requires sympy.
"""

import numpy as np
import sympy as sp

from painleve_dyn import SigmaWord, SolverConfig, find_periodic_points

THETA = (8, 8, 8, 28)
x1, x2, x3 = sp.symbols("x1 x2 x3")


def sigma(i, x):
    x = list(x)
    j, k = (m for m in range(3) if m != i)
    x[i] = THETA[i] - x[i] - x[j] * x[k]
    return [sp.expand(e) for e in x]


def exact_fixed_points():
    X = [x1, x2, x3]
    lhs = sigma(1, sigma(0, X))
    rhs = sigma(2, sigma(1, X))
    f = x1 * x2 * x3 + x1**2 + x2**2 + x3**2 - 8 * x1 - 8 * x2 - 8 * x3 + 28
    eqs = [sp.expand(a - b) for a, b in zip(lhs, rhs)] + [f]
    G = sp.groebner(eqs, x3, x2, x1, order="lex")
    print("last basis element:", sp.factor(G.exprs[-1]))
    return sp.solve(G.exprs, [x1, x2, x3], dict=True)


def main():
    sols = exact_fixed_points()
    pts = [tuple(complex(s[v]) for v in (x1, x2, x3)) for s in sols]
    smooth = [p for p in pts if not np.allclose(p, (2, 2, 2))]
    print(f"exact solutions: {len(pts)} ({len(smooth)} away from the singular point (2, 2, 2))")
    for p in smooth:
        print("  ", np.round(p, 12))
    res = find_periodic_points(np.array(THETA, dtype=complex), SigmaWord([1, 2, 3, 2]), 1, SolverConfig())
    print(f"solver: {len(res.points)} points")
    for p in res.points:
        m = ", ".join(f"{v:.4g}" for v in p.multipliers)
        print(f"   {np.round(p.point.array(), 10)}  {p.kind}  multipliers [{m}]")
    print("stated count for this case: 6")


if __name__ == "__main__":
    main()
