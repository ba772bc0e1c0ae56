"""Periodic-point counts for generic parameters against lambda^n + lambda^-n + 4."""

from painleve_dyn import SigmaWord, SolverConfig, dynamical_degree, kappa_to_b, KappaParam
from painleve_dyn.params import b_to_theta
from painleve_dyn.periodic import asymptotic_check, count_report
import numpy as np


def main(seed=11):
    k = KappaParam.random(np.random.default_rng(seed))
    b = kappa_to_b(k)
    theta = b_to_theta(b)
    print("kappa =", np.round(k.k, 6))
    for name, word, ns in (("eight-loop", SigmaWord([1, 2, 3, 2]), (1, 2, 3)),
                           ("Pochhammer", SigmaWord([1, 2, 3, 1, 2, 3]), (1,))):
        counts, saddles = {}, {}
        for n in ns:
            rep, res = count_report(theta, "Empty", {}, word, n, SolverConfig())
            counts[n] = rep.found
            saddles[n] = sum(p.kind == "saddle" for p in res.points)
            print(f"{name} n={n}: found {rep.found}, formula {rep.formula}, L = {rep.lefschetz}, "
                  f"saddles {saddles[n]}, starts {res.starts}")
        lam = dynamical_degree(word).lam
        print("   ratios found / lambda^n:", {n: round(v, 4) for n, v in asymptotic_check(counts, lam, saddles)["ratios"].items()})


if __name__ == "__main__":
    main()
