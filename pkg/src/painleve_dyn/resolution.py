"""Six-point configurations in P^2 and the (-2)-curves of the resolution.

The minimal resolution of the cubic is P^2 blown up at six points
c_1..c_6 (possibly infinitely near).  Its (-2)-curves are read off from
the configuration: a point pair c_i = c_{i+3} gives E_i - E_{i+3}, a
collinear transversal triple gives E0 - E_p - E_q - E_r and a conic
through all six gives 2 E0 - sum E.  The Dynkin type comes from the
root system these effective roots generate.
"""

from __future__ import annotations

import cmath
import itertools
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import InconsistentWitness, NotOnConicStratum, UnrecognizedGraph
from .params import (
    ADJACENCY,
    BParam,
    DynkinType,
    KappaParam,
    WeylElement,
    kappa_to_b,
    r_poly,
    wall_conditions,
    wall_tolerance,
    weyl_apply_b,
)

FORM = np.diag([1, -1, -1, -1, -1, -1, -1])
GEOM_AGREE = 1e-9
GEOM_DISAGREE = 1e-6
PERIOD_SEARCH = 24
PERIOD_TOL = 1e-8


# ------------------------------------------------------------ the points


def _unit(u) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    return u / np.linalg.norm(u)


@dataclass(frozen=True)
class ProjectivePoint:
    u: tuple

    def __init__(self, u):
        u = tuple(complex(v) for v in u)
        if all(v == 0 for v in u):
            raise ValueError("projective point needs a nonzero coordinate")
        object.__setattr__(self, "u", u)

    def array(self) -> np.ndarray:
        return np.array(self.u, dtype=complex)

    def distance(self, other: "ProjectivePoint") -> float:
        """Largest 2x2 minor of the normalized coordinate pair."""
        a, c = _unit(self.u), _unit(other.u)
        return float(np.max(np.abs(np.outer(a, c) - np.outer(c, a))))

    def equals(self, other: "ProjectivePoint", tol: float = 1e-9) -> bool:
        return self.distance(other) <= tol


def six_points(b: BParam) -> tuple:
    _, b1, b2, b3, b4 = b.b
    return (
        ProjectivePoint((0, -b1 * b4, 1)),
        ProjectivePoint((-b1 * b3, 0, 1)),
        ProjectivePoint((-b3 * b4, 1, 0)),
        ProjectivePoint((0, -b2 * b3, 1)),
        ProjectivePoint((-b2 * b4, 0, 1)),
        ProjectivePoint((-b1 * b2, 1, 0)),
    )


# -------------------------------------------------------- configuration


@dataclass
class ConfigurationReport:
    conic: bool
    collinear_triples: list  # (triple, case) pairs
    degenerate_pairs: list  # i with c_i = c_{i+3}
    dual_graph: dict = field(default_factory=dict)  # node label -> neighbour labels
    roots: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "conic": self.conic,
            "collinear_triples": [{"points": list(t), "case": c} for t, c in self.collinear_triples],
            "degenerate_pairs": list(self.degenerate_pairs),
            "dual_graph": {k: sorted(v) for k, v in self.dual_graph.items()},
        }

    def to_dot(self) -> str:
        lines = ["graph dual {"]
        for node in sorted(self.dual_graph):
            lines.append(f'  "{node}";')
        for node in sorted(self.dual_graph):
            for other in sorted(self.dual_graph[node]):
                if node < other:
                    lines.append(f'  "{node}" -- "{other}";')
        lines.append("}")
        return "\n".join(lines)


def _c2_case(pts: tuple) -> str:
    if pts == (1, 2, 3):
        return "b4^2=1"
    if pts == (4, 5, 6):
        return "b1b2b3/b4=1"
    low = [p for p in pts if p <= 3]
    if len(low) == 1:
        return f"b{low[0]}^2=1"
    high = [p for p in pts if p > 3][0]
    return f"b{high - 3}^-1 b_j b_k b4=1"


def configuration_from_conditions(conds) -> ConfigurationReport:
    """Report built from evaluated (C1)-(C3) conditions, with its dual graph."""
    conic = any(c.fired for c in conds if c.name == "C1")
    triples = [(c.points, _c2_case(c.points)) for c in conds if c.name == "C2" and c.fired]
    pairs = [c.points[0] for c in conds if c.name == "C3" and c.fired]
    report = ConfigurationReport(conic, triples, pairs)
    _attach_graph(report)
    return report


def _conic_rows(pts, pairs):
    """Rows of the conic-through-six-points system, tangency rows for coincident pairs."""
    rows = []
    for idx, p in enumerate(pts, start=1):
        u = _unit(p.u)
        if idx > 3 and (idx - 3) in pairs:
            # infinitely near point along l_m: derivative along the line
            m = idx - 3
            d = np.zeros(3, dtype=complex)
            free = [k for k in range(3) if k != m - 1]
            d[free[0]], d[free[1]] = -u[free[1]], u[free[0]]
            rows.append(_conic_monomials_derivative(u, d))
        else:
            rows.append(_conic_monomials(u))
    return np.array(rows)


def _conic_monomials(u):
    u1, u2, u3 = u
    return [u1 * u1, u2 * u2, u3 * u3, u1 * u2, u1 * u3, u2 * u3]


def _conic_monomials_derivative(u, d):
    u1, u2, u3 = u
    d1, d2, d3 = d
    return [2 * u1 * d1, 2 * u2 * d2, 2 * u3 * d3, u1 * d2 + d1 * u2, u1 * d3 + d1 * u3, u2 * d3 + d2 * u3]


def check_conditions(b: BParam, tol: float | None = None) -> ConfigurationReport:
    """Evaluate (C1)-(C3) and confirm each one with a determinant test.

    Collinearity uses the 3x3 determinant of normalized coordinates,
    coincidence the 2x2 minors, and the conic the 6x6 determinant of the
    conic system (with tangency rows at coincident pairs).
    """
    conds = wall_conditions(b, tol)
    pts = six_points(b)
    pairs = [c.points[0] for c in conds if c.name == "C3" and c.fired]
    for c in conds:
        if c.name == "C3":
            i = c.points[0]
            geo = pts[i - 1].distance(pts[i + 2])
        elif c.name == "C2":
            geo = abs(np.linalg.det(np.array([_unit(pts[p - 1].u) for p in c.points])))
        else:
            rows = _conic_rows(pts, pairs)
            rows = rows / np.linalg.norm(rows, axis=1, keepdims=True)
            geo = abs(np.linalg.det(rows))
        alg = abs(c.value) / (1 + b.scale())
        if (c.fired and geo > GEOM_DISAGREE) or (alg > GEOM_DISAGREE and geo < GEOM_AGREE * 1e-3):
            raise InconsistentWitness(
                f"{c.name}{c.points}: algebraic {abs(c.value):.3e} vs geometric {geo:.3e}"
            )
    return configuration_from_conditions(conds)


# ----------------------------------------------------------- root lattice


def pairing(u, v) -> int:
    return int(np.asarray(u) @ FORM @ np.asarray(v))


def _effective_roots(report: ConfigurationReport) -> list:
    roots = []
    for i in report.degenerate_pairs:
        r = np.zeros(7, dtype=int)
        r[i], r[i + 3] = 1, -1
        roots.append(("E%d-E%d" % (i, i + 3), r))
    for pts, _ in report.collinear_triples:
        r = np.zeros(7, dtype=int)
        r[0] = 1
        r[list(pts)] = -1
        roots.append(("line" + "".join(map(str, pts)), r))
    if report.conic:
        r = np.array([2, -1, -1, -1, -1, -1, -1])
        roots.append(("conic", r))
    return roots


def _closure(roots: list) -> list:
    """Close under sums that are again roots (norm -2)."""
    out = {tuple(r): name for name, r in roots}
    changed = True
    while changed:
        changed = False
        for u, v in itertools.combinations(list(out), 2):
            s = tuple(a + c for a, c in zip(u, v))
            if s not in out and pairing(s, s) == -2:
                out[s] = f"({out[u]})+({out[v]})"
                changed = True
    return [(name, np.array(r)) for r, name in out.items()]


def _simple_roots(roots: list) -> list:
    keys = {tuple(r) for _, r in roots}
    simple = []
    for name, r in roots:
        decomposable = any(
            tuple(r - c) in keys and tuple(c) != tuple(r) for _, c in roots
        )
        if not decomposable:
            simple.append((name, r))
    return simple


def _attach_graph(report: ConfigurationReport):
    roots = _closure(_effective_roots(report))
    simple = _simple_roots(roots)
    graph = {name: set() for name, _ in simple}
    for (n1, r1), (n2, r2) in itertools.combinations(simple, 2):
        p = pairing(r1, r2)
        if p < 0 or p > 1:
            raise UnrecognizedGraph(f"curves {n1}, {n2} meet with multiplicity {p}")
        if p == 1:
            graph[n1].add(n2)
            graph[n2].add(n1)
    report.dual_graph = graph
    report.roots = roots


def _components(graph: dict) -> list:
    seen, comps = set(), []
    for start in sorted(graph):
        if start in seen:
            continue
        comp, queue = [], deque([start])
        seen.add(start)
        while queue:
            v = queue.popleft()
            comp.append(v)
            for w in graph[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        comps.append(comp)
    return comps


def _component_type(graph: dict, comp: list) -> str:
    n = len(comp)
    edges = sum(len(graph[v]) for v in comp) // 2
    degs = sorted(len(graph[v]) for v in comp)
    if edges != n - 1:
        raise UnrecognizedGraph("dual graph has a cycle")
    if max(degs, default=0) <= 2:
        return f"A{n}"
    if n == 4 and degs == [1, 1, 1, 3]:
        return "D4"
    raise UnrecognizedGraph(f"tree with degrees {degs}")


def dynkin_from_configuration(report: ConfigurationReport) -> DynkinType:
    """Abstract Dynkin type of the dual graph of (-2)-curves."""
    if not report.dual_graph and (report.conic or report.collinear_triples or report.degenerate_pairs):
        _attach_graph(report)
    kinds = sorted(_component_type(report.dual_graph, c) for c in _components(report.dual_graph))
    if not kinds:
        tag = "Empty"
    elif len(kinds) == 1:
        tag = kinds[0]
    elif set(kinds) == {"A1"}:
        tag = f"A1x{len(kinds)}"
    else:
        raise UnrecognizedGraph(f"components {kinds}")
    if tag not in ADJACENCY:
        raise UnrecognizedGraph(f"type {tag} is not among the eight admissible types")
    witness = (
        (("C1",) if report.conic else ())
        + tuple(f"C2{t}" for t, _ in report.collinear_triples)
        + tuple(f"C3({i},{i + 3})" for i in report.degenerate_pairs)
    )
    return DynkinType(tag, None, witness)


def central_node(report: ConfigurationReport):
    """Node of degree two in an A3 graph (None otherwise)."""
    mids = [v for v, nb in report.dual_graph.items() if len(nb) == 2]
    return mids[0] if len(mids) == 1 else None


# ------------------------------------------------ conic and Moebius data


def _require_conic(b: BParam):
    _, b1, b2, b3, b4 = b.b
    if abs(b1 * b2 * b3 * b4 - 1) > wall_tolerance(b):
        raise NotOnConicStratum("b1*b2*b3*b4 != 1")


def conic_equation(b: BParam, u) -> complex:
    bs = (b[1], b[2], b[3])
    u = np.asarray(u, dtype=complex)
    out = 0j
    for j in range(3):
        k = (j + 1) % 3
        out += u[j] * u[j] + (1 / (bs[j] * bs[k]) + bs[j] * bs[k]) * u[j] * u[k]
    return complex(out)


def _g(b1, b2, b3, z):
    if z == math.inf or (isinstance(z, complex) and cmath.isinf(z)):
        # leading coefficients
        return np.array([0, -b2 * b2 * b1 * b2 * b3 * b3, b2 * b3 * b1 * b2], dtype=complex)
    return np.array(
        [
            b1 * b2 * (1 - b2**2 * b3**2) * z + (1 - b1**2) * (1 - b2**2) + b1**2 * (1 - b2**2 * b3**2),
            -b2 * (b2 * z + b1) * (b1 * b2 * b3**2 * z + 1),
            b2 * b3 * (z + b1 * b2) * (b1 * b2 * z + 1),
        ],
        dtype=complex,
    )


def conic_parametrization(b: BParam, z) -> ProjectivePoint:
    """Point g(z) of the conic through the six points; z may be math.inf."""
    _require_conic(b)
    return ProjectivePoint(_g(b[1], b[2], b[3], z))


def conic_parameter(b: BParam, p: ProjectivePoint) -> complex:
    """Inverse of g: the parameter z with g(z) ~ p (the nearer root)."""
    b1, b2, b3 = b[1], b[2], b[3]
    u = p.array()
    # g1(z) u2 - g2(z) u1 is a quadratic in z; interpolate at three nodes
    nodes = np.array([-1.0, 0.0, 1.0])
    vals = [(_g(b1, b2, b3, z)[0] * u[1] - _g(b1, b2, b3, z)[1] * u[0]) for z in nodes]
    coeffs = np.polyfit(nodes, vals, 2)
    roots = np.roots(coeffs) if abs(coeffs[0]) > 0 else np.roots(coeffs[1:])
    if len(roots) == 0:
        return complex(math.inf)
    return complex(min(roots, key=lambda z: ProjectivePoint(_g(b1, b2, b3, z)).distance(p)))


def phi_map(i: int, b: BParam, u) -> np.ndarray:
    """The quadratic map of P^2 conjugate to sigma_i through tau."""
    _, b1, b2, b3, _ = b.b
    u1, u2, u3 = np.asarray(u, dtype=complex)
    if i == 1:
        return np.array([(b2 * u2 + u3 / b3) * (u2 / b2 + b3 * u3), u1 * u2, u1 * u3])
    if i == 2:
        return np.array([u1 * u2, (b3 * u3 + u1 / b1) * (u3 / b3 + b1 * u1), u2 * u3])
    if i == 3:
        return np.array([u1 * u3, u2 * u3, (b1 * u1 + u2 / b2) * (u1 / b1 + b2 * u2)])
    raise ValueError("i must be 1, 2 or 3")


def tau_map(b: BParam, u) -> np.ndarray:
    """Homogeneous coordinates [tau0 : tau1 : tau2 : tau3] of the image on the cubic."""
    b0, b1, b2, b3, b4 = b.b
    u1, u2, u3 = np.asarray(u, dtype=complex)
    q = b0 * b0
    p12, p13, p23 = b1 * b2 + b3 * b4, b1 * b3 + b2 * b4, b2 * b3 + b1 * b4
    t0 = -q * u1 * u2 * u3
    t1 = q * u1 * (q * u1 * u1 + u2 * u2 + u3 * u3 + q * p12 * u1 * u2 + q * p13 * u1 * u3)
    t2 = u2 * (q * q * u1 * u1 + q * u2 * u2 + u3 * u3 + q * q * p12 * u1 * u2 + q * p23 * u2 * u3)
    t3 = u3 * (q * u1 * u1 + q * u2 * u2 + u3 * u3 + q * p23 * u2 * u3 + q * p13 * u1 * u3)
    return np.array([t0, t1, t2, t3])


def tau_affine(b: BParam, u) -> np.ndarray:
    t = tau_map(b, u)
    return t[1:] / t[0]


@dataclass(frozen=True)
class MobiusMatrix:
    """Printed matrix Q together with the matrix T of the actual action.

    ``Q`` holds the entries as printed.  Numerically the map induced by
    the Pochhammer word on the conic is z -> (T11 z + T12) / (T21 z + T22)
    with T = [[-(r + c), -Q12], [Q21, c]], c = b1^2 b2^4 b3^4; only the
    (1,1) entry differs from the printed -Q11.  T has characteristic
    polynomial l^2 + r l + b1^4 b2^4 b3^4, so its eigenvalue ratio is the
    one the period test uses.
    """

    Q: np.ndarray
    T: np.ndarray
    r: complex

    def apply(self, z):
        T = self.T
        return (T[0, 0] * z + T[0, 1]) / (T[1, 0] * z + T[1, 1])

    def eigen_ratio(self) -> complex:
        ev = np.linalg.eigvals(self.T)
        return complex(ev[0] / ev[1])

    def period(self, max_n: int = PERIOD_SEARCH, tol: float = PERIOD_TOL):
        """Primitive period of the Moebius map, or None if it is not periodic."""
        T = self.T
        scale = np.max(np.abs(T))
        if np.max(np.abs(T - np.eye(2) * T[1, 1])) <= tol * scale * 10:
            return 1
        q = self.eigen_ratio()
        if abs(abs(q) - 1) > tol:
            return None
        k = cmath.phase(q) / (2 * math.pi)
        for n in range(2, max_n + 1):
            m = round(k * n)
            if abs(k * n - m) <= tol * n and math.gcd(m % n, n) == 1 and m % n != 0:
                return n
        return None


def mobius_action(b: BParam) -> MobiusMatrix:
    _require_conic(b)
    b1, b2, b3 = b[1], b[2], b[3]
    r = r_poly(b1, b2, b3)
    P = (b1 * b2 * b3) ** 2
    c = b1**2 * b2**4 * b3**4
    q12 = b1 * b2 * b3**2 * (P - b1**2 * b2**2 + b2**2 - 1)
    q21 = b1 * b2**3 * b3**2 * (P - b1**2 * b3**2 + b3**2 - 1)
    Q = np.array([[r - c, q12], [q21, c]], dtype=complex)
    T = np.array([[-(r + c), -q12], [q21, c]], dtype=complex)
    return MobiusMatrix(Q, T, complex(r))


def conic_word_map(b: BParam, u, word=(1, 2, 3, 1, 2, 3)) -> np.ndarray:
    """Push a point of P^2 through the phi maps, first letter first."""
    v = np.asarray(u, dtype=complex)
    for i in word:
        v = phi_map(i, b, v)
        v = v / np.linalg.norm(v)
    return v


# --------------------------------------------------------- Riccati curves

_F4_LETTERS = (
    WeylElement((0,)),
    WeylElement((1,)),
    WeylElement((2,)),
    WeylElement((3,)),
    WeylElement((4,)),
    WeylElement(((2, 1, 3, 4),)),
    WeylElement(((1, 3, 2, 4),)),
    WeylElement(((1, 2, 4, 3),)),
)


def normalize_to_conic(b: BParam, depth: int = 6):
    """Breadth-first search for w in W(F4^(1)) with w(b) on b1 b2 b3 b4 = 1.

    Returns (w, w(b)) or None when nothing is found within ``depth``.
    """
    def key(bb):
        return tuple(np.round(np.array(bb.b) * 1e6).astype(complex).tolist())

    start = (WeylElement(()), b)
    queue = deque([(start, 0)])
    seen = {key(b)}
    while queue:
        (w, bb), d = queue.popleft()
        if abs(bb[1] * bb[2] * bb[3] * bb[4] - 1) <= wall_tolerance(bb):
            return w, bb
        if d == depth:
            continue
        for g in _F4_LETTERS:
            nb = weyl_apply_b(g, bb)
            k = key(nb)
            if k not in seen:
                seen.add(k)
                queue.append(((g * w, nb), d + 1))
    return None


def riccati_periods(k, tol: float | None = None) -> dict:
    """Period of each Riccati curve under the Pochhammer word.

    Values are a positive int (primitive period), the string "aperiodic",
    or "undetermined" where neither the Moebius analysis nor the stratum
    facts decide.  Keys are dual-graph node labels.
    """
    from .params import classify_stratum

    b = kappa_to_b(k) if isinstance(k, KappaParam) else k
    dt = classify_stratum(b, tol)
    report = configuration_from_conditions(wall_conditions(b, tol))
    nodes = sorted(report.dual_graph)
    if dt.tag == "Empty":
        return {}
    if dt.tag == "D4":
        return {n: 1 for n in nodes}
    if dt.tag in ("A2", "A1x4"):
        return {n: "aperiodic" for n in nodes}
    if dt.tag == "A3":
        mid = central_node(report)
        return {n: (1 if n == mid else "aperiodic") for n in nodes}
    found = normalize_to_conic(b)
    if found is None:
        return {n: "undetermined" for n in nodes}
    period = mobius_action(found[1]).period()
    if dt.tag == "A1":
        return {nodes[0]: period if period is not None else "aperiodic"}
    # A1x2, A1x3: the curves share one primitive period and none is fixed
    if period is None:
        return {n: "aperiodic" for n in nodes}
    if period == 1:
        return {n: "undetermined" for n in nodes}
    return {n: period for n in nodes}
