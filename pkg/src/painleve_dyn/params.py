"""Parameter spaces of Painleve VI and the maps between them.

The chain is kappa -> b -> a -> theta, where kappa lives on the affine
hyperplane 2*k0 + k1 + k2 + k3 + k4 = 1, b on the multiplicative torus
b0^2 b1 b2 b3 b4 = 1, a collects the local traces and theta the cubic
coefficients.  The affine Weyl group W(D4^(1)) acts on kappa and on b,
and the singular locus of the cubic is a union of its reflection walls.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import AmbiguousNearWall

# abstract Dynkin types, ordered by rank
DYNKIN_TAGS = ("Empty", "A1", "A2", "A1x2", "A3", "A1x3", "D4", "A1x4")
DYNKIN_RANK = {"Empty": 0, "A1": 1, "A2": 2, "A1x2": 2, "A3": 3, "A1x3": 3, "D4": 4, "A1x4": 4}

# adjacency of W(F4^(1))-strata: tag -> tags lying in its closure one step down
ADJACENCY = {
    "Empty": ("A1",),
    "A1": ("A1x2", "A2"),
    "A1x2": ("A1x3", "A3"),
    "A2": ("A3",),
    "A1x3": ("A1x4", "D4"),
    "A3": ("D4",),
    "D4": (),
    "A1x4": (),
}

WALL_TOL = 1e-9
CONSTRAINT_TOL = 1e-12

# Cartan matrix of type D4^(1); node 0 is the central node
CARTAN = np.array(
    [
        [2, -1, -1, -1, -1],
        [-1, 2, 0, 0, 0],
        [-1, 0, 2, 0, 0],
        [-1, 0, 0, 2, 0],
        [-1, 0, 0, 0, 2],
    ]
)

# the eight sign vectors with eps1*eps2*eps3*eps4 = 1
EVEN_SIGNS = tuple(e for e in itertools.product((1, -1), repeat=4) if math.prod(e) == 1)
ALL_SIGNS = tuple(itertools.product((1, -1), repeat=4))


def _as_complex_tuple(values, n):
    out = tuple(complex(v) for v in values)
    if len(out) != n:
        raise ValueError(f"expected {n} components, got {len(out)}")
    if not all(cmath.isfinite(v) for v in out):
        raise ValueError("parameters must be finite")
    return out


def below_closure(tag: str) -> set[str]:
    """All tags strictly more degenerate than ``tag`` (transitive closure)."""
    seen: set[str] = set()
    stack = list(ADJACENCY[tag])
    while stack:
        t = stack.pop()
        if t not in seen:
            seen.add(t)
            stack.extend(ADJACENCY[t])
    return seen


@dataclass(frozen=True)
class KappaParam:
    k: tuple

    def __init__(self, k: Sequence[complex], check: bool = True):
        object.__setattr__(self, "k", _as_complex_tuple(k, 5))
        if check:
            c = self.constraint_residual()
            if abs(c) > CONSTRAINT_TOL * (1 + max(abs(v) for v in self.k)):
                raise ValueError(f"kappa violates 2*k0+k1+k2+k3+k4=1 (residual {abs(c):.3e})")

    def constraint_residual(self) -> complex:
        k0, k1, k2, k3, k4 = self.k
        return 2 * k0 + k1 + k2 + k3 + k4 - 1

    @classmethod
    def from_free(cls, k1, k2, k3, k4) -> "KappaParam":
        """Solve the linear constraint for k0."""
        k0 = (1 - k1 - k2 - k3 - k4) / 2
        return cls((k0, k1, k2, k3, k4))

    @classmethod
    def random(cls, rng: np.random.Generator, scale: float = 1.0, complex_part: bool = True):
        free = rng.uniform(-scale, scale, 4)
        if complex_part:
            free = free + 1j * rng.uniform(-scale, scale, 4) * 0.3
        return cls.from_free(*free)

    def __iter__(self):
        return iter(self.k)

    def __getitem__(self, i):
        return self.k[i]


@dataclass(frozen=True)
class BParam:
    b: tuple

    def __init__(self, b: Sequence[complex], check: bool = True):
        object.__setattr__(self, "b", _as_complex_tuple(b, 5))
        if any(v == 0 for v in self.b):
            raise ValueError("b components must be nonzero")
        if check:
            c = self.constraint_residual()
            if abs(c) > CONSTRAINT_TOL * 10 * self.scale() ** 6:
                raise ValueError(f"b violates b0^2*b1*b2*b3*b4=1 (residual {abs(c):.3e})")

    def constraint_residual(self) -> complex:
        b0, b1, b2, b3, b4 = self.b
        return b0 * b0 * b1 * b2 * b3 * b4 - 1

    def scale(self) -> float:
        return max(max(abs(v), 1 / abs(v)) for v in self.b)

    @classmethod
    def from_b1234(cls, b1, b2, b3, b4, sign: int = 1) -> "BParam":
        """Complete (b1..b4) by the root b0 = sign / sqrt(b1 b2 b3 b4)."""
        b0 = sign / cmath.sqrt(b1 * b2 * b3 * b4)
        return cls((b0, b1, b2, b3, b4))

    def __iter__(self):
        return iter(self.b)

    def __getitem__(self, i):
        return self.b[i]


@dataclass(frozen=True)
class AParam:
    a: tuple

    def __init__(self, a: Sequence[complex]):
        object.__setattr__(self, "a", _as_complex_tuple(a, 4))

    def __iter__(self):
        return iter(self.a)

    def __getitem__(self, i):
        return self.a[i]


@dataclass(frozen=True)
class ThetaParam:
    t: tuple

    def __init__(self, t: Sequence[complex]):
        object.__setattr__(self, "t", _as_complex_tuple(t, 4))

    def __iter__(self):
        return iter(self.t)

    def __getitem__(self, i):
        return self.t[i]

    def as_array(self) -> np.ndarray:
        return np.array(self.t, dtype=complex)


@dataclass(frozen=True)
class DynkinType:
    tag: str
    sub_index: int | None = None
    witness: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.tag not in DYNKIN_TAGS:
            raise ValueError(f"unknown Dynkin type {self.tag!r}")

    @property
    def rank(self) -> int:
        return DYNKIN_RANK[self.tag]


@dataclass(frozen=True)
class WeylElement:
    """Word in the generators of W(F4^(1)) = S4 x| W(D4^(1)).

    Letters are integers 0..4 for the reflections w_i, or 4-tuples giving
    a permutation p of (1,2,3,4) acting by k_i -> k_{p(i)}.  The word is
    applied right to left, like a composition of maps.
    """

    word: tuple = ()

    def __init__(self, word=()):
        letters = []
        for w in word:
            if isinstance(w, (tuple, list)):
                p = tuple(int(v) for v in w)
                if sorted(p) != [1, 2, 3, 4]:
                    raise ValueError(f"bad permutation {p}")
                letters.append(p)
            else:
                i = int(w)
                if not 0 <= i <= 4:
                    raise ValueError(f"bad reflection index {i}")
                letters.append(i)
        object.__setattr__(self, "word", tuple(letters))

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(self.word + other.word)


GENERATORS = tuple(WeylElement((i,)) for i in range(5))


# ---------------------------------------------------------------- maps


def kappa_to_b(k: KappaParam) -> BParam:
    b = [cmath.exp(1j * math.pi * k[i]) for i in range(4)]
    b.append(-cmath.exp(1j * math.pi * k[4]))
    return BParam(b)


def b_to_a(b: BParam) -> AParam:
    return AParam([b[i] + 1 / b[i] for i in range(1, 5)])


def a_to_theta(a: AParam) -> ThetaParam:
    a1, a2, a3, a4 = a
    return ThetaParam(
        [
            a1 * a4 + a2 * a3,
            a2 * a4 + a3 * a1,
            a3 * a4 + a1 * a2,
            a1 * a2 * a3 * a4 + a1 * a1 + a2 * a2 + a3 * a3 + a4 * a4 - 4,
        ]
    )


def b_to_theta(b: BParam) -> ThetaParam:
    return a_to_theta(b_to_a(b))


def rh(k: KappaParam) -> ThetaParam:
    """Riemann-Hilbert correspondence on the level of parameters."""
    return a_to_theta(b_to_a(kappa_to_b(k)))


# ------------------------------------------------------- discriminant


@dataclass(frozen=True)
class Discriminant:
    value: complex
    factors: tuple  # (label, value) pairs


def discriminant(b: BParam) -> Discriminant:
    """Factored discriminant of the cubic surface attached to ``b``."""
    factors = []
    for l in range(1, 5):
        factors.append((f"(b{l}-1/b{l})^2", (b[l] - 1 / b[l]) ** 2))
    for eps in ALL_SIGNS:
        be = math.prod(b[l + 1] ** e for l, e in enumerate(eps))
        label = "b^(" + ",".join("+" if e > 0 else "-" for e in eps) + ")-1"
        factors.append((label, be - 1))
    value = complex(math.prod(v for _, v in factors))
    return Discriminant(value, tuple(factors))


def discriminant_kappa(k: KappaParam) -> complex:
    """Trigonometric product form; equals discriminant(kappa_to_b(k)) / 2**24."""
    out = complex(1)
    for l in range(1, 5):
        out *= cmath.sin(math.pi * k[l]) ** 2
    for eps in ALL_SIGNS:
        dot = sum(e * k[l + 1] for l, e in enumerate(eps))
        out *= cmath.cos(math.pi * dot / 2)
    return out


# -------------------------------------------------------- Weyl actions


def _permute_kappa(p, k):
    kk = list(k.k)
    return KappaParam([kk[0]] + [kk[p[i]] for i in range(4)], check=False)


def weyl_apply(w: WeylElement, k: KappaParam) -> KappaParam:
    kk = np.array(k.k, dtype=complex)
    for letter in reversed(w.word):
        if isinstance(letter, tuple):
            kk = np.array(_permute_kappa(letter, KappaParam(kk, check=False)).k)
        else:
            kk = kk - kk[letter] * CARTAN[letter]
    return KappaParam(kk)


def _permute_b(p, b):
    # the S4 action is defined on kappa; on b it carries the sign of b4 = -exp(i pi k4)
    c = [b[1], b[2], b[3], -b[4]]
    c = [c[p[i] - 1] for i in range(4)]
    return [b[0], c[0], c[1], c[2], -c[3]]


def weyl_apply_b(w: WeylElement, b: BParam) -> BParam:
    bb = list(b.b)
    for letter in reversed(w.word):
        if isinstance(letter, tuple):
            bb = _permute_b(letter, bb)
        elif letter == 0:
            b0 = bb[0]
            bb = [1 / b0] + [b0 * v for v in bb[1:]]
        else:
            b0 = bb[0] * bb[letter] if letter < 4 else -bb[0] * bb[4]
            bb = list(bb)
            bb[0] = b0
            bb[letter] = 1 / bb[letter]
    return BParam(bb, check=False)


# ------------------------------------------------------ wall conditions


def wall_tolerance(b: BParam) -> float:
    return WALL_TOL * (1 + b.scale())


@dataclass(frozen=True)
class Condition:
    name: str  # "C1", "C2", "C3"
    points: tuple  # indices of the indeterminacy points involved
    value: complex
    fired: bool


def wall_conditions(b: BParam, tol: float | None = None, strict: bool = True) -> tuple:
    """Evaluate the algebraic configuration conditions (C1)-(C3).

    (C1) the six points lie on a conic; (C2) one point from each of the
    lines u1=0, u2=0, u3=0 is collinear (eight transversal triples);
    (C3) c_i coincides with c_{i+3}.  Raises AmbiguousNearWall when a
    value sits in the band (tol, 10*tol] and ``strict`` is set.
    """
    _, b1, b2, b3, b4 = b.b
    bs = {1: b1, 2: b2, 3: b3}
    tol = wall_tolerance(b) if tol is None else tol
    raw = [("C1", (1, 2, 3, 4, 5, 6), b1 * b2 * b3 * b4 - 1)]
    raw.append(("C2", (1, 2, 3), b4 - 1 / b4))
    raw.append(("C2", (4, 5, 6), b1 * b2 * b3 / b4 - 1))
    for i in (1, 2, 3):
        j, k = (m + 3 for m in (1, 2, 3) if m != i)
        raw.append(("C2", tuple(sorted((i, j, k))), bs[i] - 1 / bs[i]))
    for i in (4, 5, 6):
        j, k = (m for m in (1, 2, 3) if m != i - 3)
        raw.append(("C2", tuple(sorted((i, j, k))), bs[j] * bs[k] * b4 / bs[i - 3] - 1))
    for i in (1, 2, 3):
        j, k = (m for m in (1, 2, 3) if m != i)
        raw.append(("C3", (i, i + 3), bs[i] * b4 / (bs[j] * bs[k]) - 1))
    out = []
    for name, pts, val in raw:
        mag = abs(val)
        if strict and tol < mag <= 10 * tol:
            raise AmbiguousNearWall(f"{name}{pts} has |value|={mag:.3e} near tolerance {tol:.1e}")
        out.append(Condition(name, pts, complex(val), mag <= tol))
    return tuple(out)


def classify_stratum(b: BParam, tol: float | None = None) -> DynkinType:
    """Abstract Dynkin type of the singularities of the cubic for ``b``.

    Evaluates (C1)-(C3) and hands them to the dual-graph builder.
    """
    from .resolution import configuration_from_conditions, dynkin_from_configuration

    conds = wall_conditions(b, tol)
    report = configuration_from_conditions(conds)
    dt = dynkin_from_configuration(report)
    table = table_matches(b, tol)
    sub = None
    for tag, m, _ in table:
        if tag == dt.tag:
            sub = m
            break
    fired = tuple(f"{c.name}{c.points}" for c in conds if c.fired)
    return DynkinType(dt.tag, sub, fired)


# ----------------------------------------------------- table of families
#
# Each family returns residuals that must all vanish.  Index conventions
# follow the table: eps ranges over EVEN_SIGNS; (i, j, k, l) over the
# index patterns of each row.


def _row_residuals(b, tag, m):
    """Yield (piece, residual list) for one row of the table."""
    B = {i: b[i] for i in range(1, 5)}
    one_to_four = (1, 2, 3, 4)
    I = 1j
    if (tag, m) == ("D4", 1):
        for e in EVEN_SIGNS:
            yield (e,), [e[i] * B[i + 1] - 1 for i in range(4)]
    elif (tag, m) == ("A1x4", 1):
        for e in EVEN_SIGNS:
            for v in (1, I):
                yield (e, v), [e[0] * B[1] - v, e[1] * B[2] - v, e[2] * B[3] - v, -e[3] * B[4] - v]
    elif (tag, m) == ("A1x4", 2):
        for e in EVEN_SIGNS:
            yield (e,), [e[i] * B[i + 1] - I for i in range(4)]
    elif tag == "A3" and m in (1, 2):
        for i, j in itertools.combinations(one_to_four, 2):
            k, l = (x for x in one_to_four if x not in (i, j))
            for e in EVEN_SIGNS:
                E = dict(zip(one_to_four, e))
                last = E[k] * B[k] - E[l] * B[l] if m == 1 else E[k] * B[k] * E[l] * B[l] - 1
                yield (i, j, e), [E[i] * B[i] - 1, E[j] * B[j] - 1, last]
    elif (tag, m) == ("A1x3", 1):
        for i in one_to_four:
            j, k, l = (x for x in one_to_four if x != i)
            for e in EVEN_SIGNS:
                E = dict(zip(one_to_four, e))
                yield (i, e), [E[j] * B[j] - 1, E[k] * B[k] - 1, E[l] * B[l] - 1]
    elif (tag, m) == ("A1x3", 2):
        for i in one_to_four:
            j, k, l = (x for x in one_to_four if x != i)
            for e in EVEN_SIGNS:
                E = dict(zip(one_to_four, e))
                inv = 1 / (E[i] * B[i])
                yield (i, e), [E[j] * B[j] - inv, E[k] * B[k] - inv, E[l] * B[l] - inv]
    elif (tag, m) == ("A1x3", 3):
        for e in EVEN_SIGNS:
            v = e[0] * B[1]
            yield (e,), [e[1] * B[2] - v, e[2] * B[3] - v, e[3] * B[4] - v]
    elif (tag, m) == ("A1x3", 4):
        for i in (1, 2, 3):
            j, k = (x for x in (1, 2, 3) if x != i)
            for e in EVEN_SIGNS:
                E = dict(zip(one_to_four, e))
                inv = 1 / (E[i] * B[i])
                yield (i, e), [E[j] * B[j] - inv, E[k] * B[k] - inv, E[i] * B[i] - E[4] * B[4]]
    elif (tag, m) == ("A2", 2):
        for i in one_to_four:
            j, k, l = (x for x in one_to_four if x != i)
            for e in EVEN_SIGNS:
                E = dict(zip(one_to_four, e))
                yield (i, e), [E[i] * B[i] - 1, E[i] * B[j] * B[k] * B[l] - 1]
    elif (tag, m) == ("A1x2", 1):
        for i, j in itertools.combinations(one_to_four, 2):
            for e in EVEN_SIGNS:
                E = dict(zip(one_to_four, e))
                yield (i, j, e), [E[i] * B[i] - 1, E[j] * B[j] - 1]
    elif (tag, m) == ("A1x2", 2):
        for i, j in itertools.combinations(one_to_four, 2):
            k, l = (x for x in one_to_four if x not in (i, j))
            for s in (1, -1):
                yield (i, j, s), [B[i] / B[j] - s, B[k] * B[l] - s]
    elif (tag, m) == ("A1x2", 3):
        for i in (1, 2, 3):
            j, k = (x for x in (1, 2, 3) if x != i)
            for s in (1, -1):
                yield (i, s), [B[i] / B[4] - s, B[j] / B[k] - s]
    elif (tag, m) == ("A1x2", 4):
        for i in (1, 2, 3):
            j, k = (x for x in (1, 2, 3) if x != i)
            for s in (1, -1):
                yield (i, s), [B[i] * B[4] - s, B[j] * B[k] - s]
    elif (tag, m) == ("A1", 1):
        for i in one_to_four:
            for s in (1, -1):
                yield (i, s), [s * B[i] - 1]
    elif (tag, m) == ("A1", 2):
        for i in one_to_four:
            j, k, l = (x for x in one_to_four if x != i)
            yield (i,), [B[i] - B[j] * B[k] * B[l]]
    elif (tag, m) == ("A1", 3):
        for i in (1, 2, 3):
            j, k = (x for x in (1, 2, 3) if x != i)
            yield (i,), [B[i] * B[4] - B[j] * B[k]]
    elif (tag, m) == ("A1", 4):
        yield (), [B[1] * B[2] * B[3] * B[4] - 1]
    else:
        raise KeyError((tag, m))


TABLE_ROWS = (
    ("D4", 1),
    ("A1x4", 1),
    ("A1x4", 2),
    ("A3", 1),
    ("A3", 2),
    ("A1x3", 1),
    ("A1x3", 2),
    ("A1x3", 3),
    ("A1x3", 4),
    # ("A2", 1) is printed garbled and is deliberately absent
    ("A2", 2),
    ("A1x2", 1),
    ("A1x2", 2),
    ("A1x2", 3),
    ("A1x2", 4),
    ("A1", 1),
    ("A1", 2),
    ("A1", 3),
    ("A1", 4),
)


def table_matches(b: BParam, tol: float | None = None) -> list:
    """All (tag, m, piece) rows of the family table whose equations hold at b."""
    tol = wall_tolerance(b) if tol is None else tol
    hits = []
    for tag, m in TABLE_ROWS:
        for piece, res in _row_residuals(b, tag, m):
            if max(abs(r) for r in res) <= tol:
                hits.append((tag, m, piece))
                break
    return hits


def table_type(b: BParam, tol: float | None = None) -> DynkinType:
    """Classify by membership in the closed families, keeping the deepest one.

    Every matched tag must lie in the closure of the deepest match;
    otherwise the families contradict each other and ValueError is raised.
    """
    hits = table_matches(b, tol)
    if not hits:
        return DynkinType("Empty")
    tags = {t for t, _, _ in hits}
    for t in sorted(tags, key=lambda x: -DYNKIN_RANK[x]):
        # t is the answer if every other matched tag has t in its closure
        if all(o == t or t in below_closure(o) for o in tags):
            m = next(mm for tt, mm, _ in hits if tt == t)
            return DynkinType(t, m, tuple(f"B{mm}({tt})" for tt, mm, _ in hits))
    raise ValueError(f"incompatible family matches {sorted(tags)}")


# ------------------------------------------------- Riccati periodicity


def r_poly(b1, b2, b3):
    """Trace of the Moebius action on the conic for the Pochhammer word."""
    P = b1 * b1 * b2 * b2 * b3 * b3
    sq = (b1 * b1, b2 * b2, b3 * b3)
    s = sum(sq[i] - sq[(i + 1) % 3] * sq[(i + 2) % 3] for i in range(3))
    return 1 - 3 * P + (P - 1) * (P + s)


def R_n(b1, b2, b3, n: int) -> complex:
    r = r_poly(b1, b2, b3)
    P = b1 * b1 * b2 * b2 * b3 * b3
    out = complex(1)
    for m in range(1, n):
        if math.gcd(m, n) == 1:
            out *= r + 2 * P * math.cos(math.pi * m / n)
    return out


def riccati_period_condition(b: BParam, n: int, tol: float | None = None) -> bool:
    """Membership of ``b`` in B^(n)."""
    if n < 1:
        raise ValueError("n must be positive")
    tol = wall_tolerance(b) if tol is None else tol
    b0, b1, b2, b3, _ = b.b
    if abs(b0 - 1) > tol:
        return False
    if n == 1:
        s = b1 * b1
        if abs(s - 1j) > tol and abs(s + 1j) > tol:
            return False
        return abs(b2 * b2 - s) <= tol and abs(b3 * b3 - s) <= tol
    # normalise by the size of the terms in the product
    scale = 1 + abs(r_poly(b1, b2, b3)) + 2 * abs(b1 * b2 * b3) ** 2
    return abs(R_n(b1, b2, b3, n)) <= tol * scale ** max(1, _totient(n))


def _totient(n):
    return sum(1 for m in range(1, n) if math.gcd(m, n) == 1)
