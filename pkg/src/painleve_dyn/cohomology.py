"""Pullback actions of the involutions on H^2 of the resolved surface.

H^2 is Z^7 with basis E0..E6 and form diag(1, -1, ..., -1).  The
three tritangent-line classes L1, L2, L3 span V; V-perp is spanned by
L4..L7 (or by the primed classes L4'..L7').  On V every sigma_i acts by
the 3x3 matrix s_i; on V-perp it is diagonal +-1 in a basis that depends
on the stratum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coxeter import S_MATRICES, SigmaWord, dynamical_degree, is_AS, lucas_trace, v_block
from .errors import NotAS
from .params import DYNKIN_TAGS, DynkinType

FORM = np.diag([1, -1, -1, -1, -1, -1, -1]).astype(np.int64)


def _cls(*coeffs) -> np.ndarray:
    return np.array(coeffs, dtype=np.int64)


E = [np.eye(7, dtype=np.int64)[i] for i in range(7)]
L1 = _cls(1, -1, 0, 0, -1, 0, 0)
L2 = _cls(1, 0, -1, 0, 0, -1, 0)
L3 = _cls(1, 0, 0, -1, 0, 0, -1)
L4 = _cls(0, 1, 0, 0, -1, 0, 0)
L5 = _cls(0, 0, 1, 0, 0, -1, 0)
L6 = _cls(0, 0, 0, 1, 0, 0, -1)
L7 = _cls(2, -1, -1, -1, -1, -1, -1)
L4p = _cls(1, -1, 0, 0, 0, -1, -1)
L5p = _cls(1, 0, -1, 0, -1, 0, -1)
L6p = _cls(1, 0, 0, -1, -1, -1, 0)
L7p = _cls(1, -1, -1, -1, 0, 0, 0)

NAMED = {
    "E0": E[0], "E1": E[1], "E2": E[2], "E3": E[3], "E4": E[4], "E5": E[5], "E6": E[6],
    "L1": L1, "L2": L2, "L3": L3, "L4": L4, "L5": L5, "L6": L6, "L7": L7,
    "L4'": L4p, "L5'": L5p, "L6'": L6p, "L7'": L7p,
}


@dataclass(frozen=True)
class LatticeClass:
    coords: tuple

    def __init__(self, coords):
        c = tuple(int(v) for v in coords)
        if len(c) != 7:
            raise ValueError("lattice classes have 7 coordinates")
        object.__setattr__(self, "coords", c)

    @classmethod
    def named(cls, name: str) -> "LatticeClass":
        return cls(NAMED[name])

    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)


def intersection(u, v) -> int:
    u = u.array() if isinstance(u, LatticeClass) else np.asarray(u)
    v = v.array() if isinstance(v, LatticeClass) else np.asarray(v)
    return int(u @ FORM @ v)


# eigenbases of V-perp per stratum: generator -> (V_1 basis, V_-1 basis);
# {i, j, k} = {1, 2, 3}
def _vperp_basis(tag: str, i: int):
    j, k = (m for m in (1, 2, 3) if m != i)
    Lmid = {1: L4, 2: L5, 3: L6}
    if tag in ("A1", "A2", "Empty"):
        return [L7], [L4, L5, L6]
    if tag in ("A1x2", "A3"):
        return [Lmid[i], L7], [Lmid[j], Lmid[k]]
    if tag == "A1x3":
        return [L4p, L5p, L6p], [L7p]
    return [L4, L5, L6, L7], []


def _explicit_generator(i: int) -> np.ndarray:
    """Action read off from the quadratic map: columns are images of E0..E6."""
    j, k = (m for m in (1, 2, 3) if m != i)
    cols = {}
    cols[0] = 2 * E[0] - E[i] - E[i + 3]
    cols[i] = E[0] - E[i]
    cols[i + 3] = E[0] - E[i + 3]
    cols[j], cols[j + 3] = E[j + 3], E[j]
    cols[k], cols[k + 3] = E[k + 3], E[k]
    return np.stack([cols[c] for c in range(7)], axis=1)


def _block_generator(i: int, tag: str) -> np.ndarray:
    """s_i on V plus the diagonal +-1 action on V-perp, in the E basis."""
    plus, minus = _vperp_basis(tag, i)
    vperp = plus + minus
    P = np.stack([L1, L2, L3] + vperp, axis=1)
    D = np.zeros((7, 7), dtype=np.int64)
    D[:3, :3] = S_MATRICES[i]
    for n in range(len(vperp)):
        D[3 + n, 3 + n] = 1 if n < len(plus) else -1
    Pf = [[Fraction(int(v)) for v in row] for row in P]
    Pinv = _inverse_fraction(Pf)
    M = _matmul_fraction(_matmul_fraction(Pf, [[Fraction(int(v)) for v in row] for row in D]), Pinv)
    if any(v.denominator != 1 for row in M for v in row):
        raise ArithmeticError("generator matrix is not integral")
    return np.array([[int(v) for v in row] for row in M], dtype=np.int64)


def _matmul_fraction(A, B):
    return [[sum(A[r][t] * B[t][c] for t in range(len(B))) for c in range(len(B[0]))] for r in range(len(A))]


def _inverse_fraction(A):
    n = len(A)
    M = [row[:] + [Fraction(int(r == c)) for c in range(n)] for r, row in enumerate(A)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [v / p for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return [row[n:] for row in M]


_GEN_CACHE: dict = {}


def generator_matrix(i: int, tag: str) -> np.ndarray:
    key = (i, tag)
    if key not in _GEN_CACHE:
        if tag in ("Empty", "A1", "A2"):
            _GEN_CACHE[key] = _explicit_generator(i)
        else:
            _GEN_CACHE[key] = _block_generator(i, tag)
    return _GEN_CACHE[key].copy()


@dataclass(frozen=True)
class CohomologyAction:
    matrix: np.ndarray
    stratum: DynkinType
    word: SigmaWord

    def change_basis(self) -> np.ndarray:
        """The matrix in the basis (L1, L2, L3, L4, L5, L6, L7)."""
        P = np.stack([L1, L2, L3, L4, L5, L6, L7], axis=1).astype(float)
        return np.linalg.solve(P, self.matrix @ P)

    def v_block(self) -> np.ndarray:
        return self.change_basis()[:3, :3]

    def vperp_block(self) -> np.ndarray:
        return self.change_basis()[3:, 3:]

    def trace(self) -> int:
        return int(np.trace(self.matrix))

    def to_json(self) -> list:
        return self.matrix.tolist()


def _tag(stratum) -> str:
    tag = stratum.tag if isinstance(stratum, DynkinType) else str(stratum)
    if tag not in DYNKIN_TAGS:
        raise ValueError(f"unknown stratum {tag!r}")
    return tag


def sigma_pullback(i: int, stratum) -> CohomologyAction:
    tag = _tag(stratum)
    return CohomologyAction(generator_matrix(i, tag), DynkinType(tag), SigmaWord([i]))


def word_matrix(s: SigmaWord, tag: str) -> np.ndarray:
    M = np.eye(7, dtype=np.int64)
    for i in s.letters:
        M = generator_matrix(i, tag) @ M
    return M


def word_pullback(s: SigmaWord, stratum) -> CohomologyAction:
    """sigma^* = sigma_{i_m}^* ... sigma_{i_1}^*; the empty word gives the identity."""
    tag = _tag(stratum)
    if len(s) and not is_AS(s):
        raise NotAS(f"word {s} is not AS")
    return CohomologyAction(word_matrix(s, tag), DynkinType(tag), s)


def vperp_trace(s: SigmaWord, stratum, n: int = 1) -> int:
    """Trace of (sigma^n)^* on V-perp, exact."""
    tag = _tag(stratum)
    M = np.linalg.matrix_power(word_matrix(s, tag), n)
    return int(np.trace(M)) - int(np.trace(np.linalg.matrix_power(v_block(s), n)))


def lefschetz_number(s: SigmaWord, n: int, stratum) -> int:
    """2 + trace on H^2, with the V contribution from the integer recurrence."""
    if n < 1:
        raise ValueError("n must be positive")
    if not is_AS(s):
        raise NotAS(f"word {s} is not AS")
    # V has eigenvalues 0, lambda and sign/lambda
    dd = dynamical_degree(s)
    return 2 + lucas_trace(dd.alpha, dd.sign, n) + vperp_trace(s, stratum, n)
