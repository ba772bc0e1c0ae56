"""Pochhammer counts on every stratum, with the exceptional-curve accounting.

The affine solver only sees points of the smooth part of the cubic.  When
every Riccati curve is aperiodic, fixed points also sit on the exceptional
curves; their number is measured by pushing theta off the wall and
counting the fixed points that collapse into the singular points.
"""

import cmath
import math

from painleve_dyn import BParam, SigmaWord, SolverConfig, classify_stratum
from painleve_dyn.params import b_to_theta
from painleve_dyn.periodic import count_report
from painleve_dyn.resolution import riccati_periods

W = cmath.exp(1j * math.pi / 4)
u, v = 1.31 + 0.22j, 0.64 - 0.41j
SAMPLES = {
    "A1 (fixed conic)": (W, W, W, cmath.exp(-3j * math.pi / 4)),
    "A1 (line)": (1, u, v, 1.7 + 0.3j),
    "A2": (1, u, v, 1 / (u * v)),
    "A1x2": (1, 1, u, v),
    "A3": (1, 1, u, u),
    "A1x3": (1, 1, 1, u),
    "D4": (1, 1, 1, 1),
    "A1x4": (1j, 1j, 1j, 1j),
}


def main():
    word = SigmaWord([1, 2, 3, 1, 2, 3])
    print(f"{'sample':18} {'type':5} {'affine':>6} {'exc':>4} {'total':>5} {'formula':>7} {'L':>3} {'xi':>3}  balanced")
    for name, b4 in SAMPLES.items():
        b = BParam.from_b1234(*b4)
        dt = classify_stratum(b)
        rep, _ = count_report(b_to_theta(b), dt, riccati_periods(b), word, 1, SolverConfig())
        exc = "-" if rep.exceptional is None else rep.exceptional
        print(f"{name:18} {dt.tag:5} {rep.found:6} {exc!s:>4} {rep.total:5} {rep.formula!s:>7} "
              f"{rep.lefschetz:3} {rep.xi_total!s:>3}  {rep.balanced}")


if __name__ == "__main__":
    main()
