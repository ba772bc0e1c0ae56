"""The affine cubic surface S(theta) and its three Vieta involutions.

    f(x, theta) = x1 x2 x3 + x1^2 + x2^2 + x3^2 - t1 x1 - t2 x2 - t3 x3 + t4

Each sigma_i swaps the two roots of f viewed as a quadratic in x_i:
x_i -> t_i - x_i - x_j x_k with the other coordinates fixed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateChart, OffSurface
from .params import ThetaParam

ESCAPE_RADIUS = 1e150
ORBIT_RESIDUAL = 1e-6
SURFACE_TOL = 1e-9

# (i, j, k) with j, k the complementary indices, zero based
_OTHERS = {0: (1, 2), 1: (0, 2), 2: (0, 1)}


def _theta(theta) -> np.ndarray:
    if isinstance(theta, ThetaParam):
        return theta.as_array()
    return np.asarray(theta, dtype=complex)


def eval_f(x, theta) -> complex:
    """Evaluate the cubic; ``x`` may also be an (..., 3) array."""
    t = _theta(theta)
    x = np.asarray(x, dtype=complex)
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    out = x1 * x2 * x3 + x1 * x1 + x2 * x2 + x3 * x3 - t[0] * x1 - t[1] * x2 - t[2] * x3 + t[3]
    return out if out.ndim else complex(out)


def grad_f(x, theta) -> np.ndarray:
    t = _theta(theta)
    x = np.asarray(x, dtype=complex)
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    return np.stack(
        [2 * x1 + x2 * x3 - t[0], 2 * x2 + x1 * x3 - t[1], 2 * x3 + x1 * x2 - t[2]], axis=-1
    )


def surface_tolerance(x) -> float:
    return SURFACE_TOL * (1 + float(np.linalg.norm(x)) ** 3)


@dataclass(frozen=True)
class SurfacePoint:
    x: tuple
    residual: float
    escaped: bool = False

    @classmethod
    def make(cls, x, theta, escaped: bool = False) -> "SurfacePoint":
        x = tuple(complex(v) for v in x)
        return cls(x, float(abs(eval_f(x, theta))), escaped)

    def array(self) -> np.ndarray:
        return np.array(self.x, dtype=complex)

    def on_surface(self) -> bool:
        return self.residual <= surface_tolerance(self.array())


def _check_on(p: SurfacePoint):
    if not p.on_surface():
        raise OffSurface(f"|f(x)| = {p.residual:.3e} exceeds tolerance")


def involution_array(i: int, x: np.ndarray, t: np.ndarray) -> np.ndarray:
    """sigma_i on an (..., 3) array; ``i`` is 1-based."""
    a = i - 1
    j, k = _OTHERS[a]
    y = np.array(x, dtype=complex, copy=True)
    y[..., a] = t[a] - x[..., a] - x[..., j] * x[..., k]
    return y


def involution(i: int, x: SurfacePoint, theta) -> SurfacePoint:
    _check_on(x)
    t = _theta(theta)
    return SurfacePoint.make(involution_array(i, x.array(), t), t)


def _letters(s) -> tuple:
    return tuple(getattr(s, "letters", s))


def word_map_array(s, x: np.ndarray, t: np.ndarray, n: int = 1) -> np.ndarray:
    """Apply the word n times to an array of points, first letter first."""
    letters = _letters(s)
    y = np.asarray(x, dtype=complex)
    for _ in range(n):
        for i in letters:
            y = involution_array(i, y, t)
    return y


def apply_word(s, x: SurfacePoint, theta, n: int = 1) -> SurfacePoint:
    """Iterate the word n times starting at x.

    Stops early and flags ``escaped`` when a coordinate exceeds the escape
    radius; raises OffSurface if the residual drifts beyond the orbit bound.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    _check_on(x)
    t = _theta(theta)
    y = x.array()
    letters = _letters(s)
    for _ in range(n):
        with np.errstate(over="ignore", invalid="ignore"):
            for i in letters:
                y = involution_array(i, y, t)
        if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > ESCAPE_RADIUS:
            return SurfacePoint(tuple(complex(v) for v in y), float("inf"), escaped=True)
        res = abs(eval_f(y, t))
        if res > ORBIT_RESIDUAL * (1 + np.linalg.norm(y) ** 3):
            raise OffSurface(f"orbit residual {res:.3e} drifted")
    return SurfacePoint.make(y, t)


def involution_jacobian(i: int, x: np.ndarray) -> np.ndarray:
    """Derivative of sigma_i, with an extra leading batch axis if x has one."""
    a = i - 1
    j, k = _OTHERS[a]
    x = np.asarray(x, dtype=complex)
    J = np.broadcast_to(np.eye(3, dtype=complex), x.shape[:-1] + (3, 3)).copy()
    J[..., a, a] = -1
    J[..., a, j] = -x[..., k]
    J[..., a, k] = -x[..., j]
    return J


def jacobian_word_array(s, x: np.ndarray, t: np.ndarray, n: int = 1):
    """Image and Jacobian of the n-th iterate, batched over leading axes."""
    y = np.asarray(x, dtype=complex)
    J = np.broadcast_to(np.eye(3, dtype=complex), y.shape[:-1] + (3, 3)).copy()
    for _ in range(n):
        for i in _letters(s):
            J = involution_jacobian(i, y) @ J
            y = involution_array(i, y, t)
    return y, J


def jacobian_word(s, x: SurfacePoint, theta, n: int = 1) -> np.ndarray:
    _check_on(x)
    return jacobian_word_array(s, x.array(), _theta(theta), n)[1]


def area_form_check(i: int, x: SurfacePoint, theta) -> float:
    """|d_i f(sigma_i x) + d_i f(x)|; zero means sigma_i flips the residue form."""
    _check_on(x)
    t = _theta(theta)
    g = grad_f(x.array(), t)[i - 1]
    if abs(g) == 0:
        raise DegenerateChart(f"d f/d x{i} vanishes at the point")
    g2 = grad_f(involution_array(i, x.array(), t), t)[i - 1]
    return float(abs(g2 + g))


@dataclass(frozen=True)
class TangentFrame:
    base: SurfacePoint
    u: np.ndarray
    v: np.ndarray


def tangent_frame(x: SurfacePoint, theta) -> TangentFrame:
    """Orthonormal basis of ker(df) at a smooth point."""
    g = grad_f(x.array(), _theta(theta))
    if np.linalg.norm(g) == 0:
        raise DegenerateChart("gradient vanishes: singular point")
    # null space of the row vector g (complex bilinear, so use g as-is)
    _, _, vh = np.linalg.svd(g.reshape(1, 3).conj())
    # rows 1, 2 of vh are Hermitian-orthogonal to conj(g), i.e. g.v = 0
    return TangentFrame(x, vh[1], vh[2])


def tangent_multipliers(J: np.ndarray, frame: TangentFrame) -> np.ndarray:
    """Eigenvalues of J restricted to the tangent plane spanned by the frame."""
    B = np.stack([frame.u, frame.v], axis=1)
    # least-squares coordinates of J B in the frame basis
    M = np.linalg.lstsq(B, J @ B, rcond=None)[0]
    return np.linalg.eigvals(M)


def sample_surface(theta, rng: np.random.Generator, count: int, radius: float = 10.0) -> np.ndarray:
    """Points on S(theta): random (x1, x2) in a disk, both roots in x3."""
    t = _theta(theta)
    half = (count + 1) // 2
    r = radius * np.sqrt(rng.uniform(0, 1, (half, 2)))
    ang = rng.uniform(0, 2 * np.pi, (half, 2))
    x12 = r * np.exp(1j * ang)
    x1, x2 = x12[:, 0], x12[:, 1]
    # x3^2 + (x1 x2 - t3) x3 + (x1^2 + x2^2 - t1 x1 - t2 x2 + t4) = 0
    bq = x1 * x2 - t[2]
    cq = x1 * x1 + x2 * x2 - t[0] * x1 - t[1] * x2 + t[3]
    disc = np.sqrt(bq * bq - 4 * cq + 0j)
    # stable root pair
    q = -0.5 * (bq + np.where((bq.conj() * disc).real >= 0, 1, -1) * disc)
    r1 = q
    r2 = np.where(q != 0, cq / np.where(q != 0, q, 1), -bq)
    pts = np.concatenate(
        [np.stack([x1, x2, r1], axis=1), np.stack([x1, x2, r2], axis=1)], axis=0
    )
    return pts[:count]


# ------------------------------------------------------- singular points


def critical_points(theta) -> np.ndarray:
    """All solutions of grad f = 0 (generically five), by elimination.

    From d1 f = d2 f = 0 one gets x2 = (2 t2 - t1 x3) / (4 - x3^2) and
    x1 = (t1 - x2 x3) / 2; substituting into d3 f gives a quintic in x3.
    The locus x3 = +-2 is handled separately.
    """
    t = _theta(theta)
    P = np.polynomial.polynomial
    D = np.array([4, 0, -1], dtype=complex)
    N = np.array([2 * t[1], -t[0]], dtype=complex)
    # 2 D^2 d3f = 4 x3 D^2 + (t1 D - N x3) N - 2 t3 D^2
    D2 = P.polymul(D, D)
    poly = P.polyadd(
        P.polymul([0, 4], D2),
        P.polysub(P.polymul(P.polysub(P.polymul([t[0]], D), P.polymul(N, [0, 1])), N), P.polymul([2 * t[2]], D2)),
    )
    poly = np.trim_zeros(poly, "b")
    roots = P.polyroots(poly) if len(poly) > 1 else np.array([], dtype=complex)
    pts = []
    for x3 in roots:
        d = 4 - x3 * x3
        if abs(d) < 1e-8:
            continue
        x2 = (2 * t[1] - t[0] * x3) / d
        x1 = (t[0] - x2 * x3) / 2
        pts.append([x1, x2, x3])
    # x3 = +-2: then the 2x2 system is singular; solve d1 f = d2 f = 0 directly
    for x3 in (2.0, -2.0):
        # 2 x1 + x3 x2 = t1, x3 x1 + 2 x2 = t2 -> consistent iff t2 = x3 t1 / 2
        if abs(t[1] - x3 * t[0] / 2) < 1e-10 * (1 + abs(t[0]) + abs(t[1])):
            # one-parameter family x1 = s, x2 = (t1 - 2 s) / x3; impose d3 f = 0
            # 2 x3 + s (t1 - 2 s)/x3 - t3 = 0 -> quadratic in s
            for s in np.roots([-2 / x3, t[0] / x3, 2 * x3 - t[2]]):
                pts.append([s, (t[0] - 2 * s) / x3, x3])
    return np.array(pts, dtype=complex).reshape(-1, 3)


def _cluster(points: np.ndarray, radius: float) -> list:
    """Greedy clustering; returns lists of row indices."""
    groups: list = []
    for idx, x in enumerate(points):
        for g in groups:
            if np.linalg.norm(points[g[0]] - x) < radius * (1 + np.linalg.norm(x)):
                g.append(idx)
                break
        else:
            groups.append([idx])
    return groups


def singular_points(theta, tol: float = 1e-7) -> np.ndarray:
    """Singular points of S(theta): critical points of f lying on f = 0.

    Near-coincident critical points (a degenerate critical point computed
    from a clustered root set) are replaced by their centroid.
    """
    t = _theta(theta)
    crit = critical_points(t)
    out = []
    for g in _cluster(crit, 1e-2):
        x = crit[g].mean(axis=0)
        scale = 1 + np.linalg.norm(x)
        if np.linalg.norm(grad_f(x, t)) > 1e-6 * scale**2:
            continue
        if abs(eval_f(x, t)) <= tol * scale**3:
            out.append(x)
    return np.array(out, dtype=complex).reshape(-1, 3)


def hessian(x) -> np.ndarray:
    x1, x2, x3 = x
    return np.array([[2, x3, x2], [x3, 2, x1], [x2, x1, 2]], dtype=complex)


def singularity_types(theta, delta: float = 1e-7, tol: float = 1e-7) -> list:
    """ADE type of each singular point, from Hessian rank and Milnor number.

    The Milnor number is the number of critical points that split off a
    singular point when theta1..theta3 are perturbed by ``delta``.
    """
    t = _theta(theta)
    sing = singular_points(t, tol)
    if len(sing) == 0:
        return []
    pert = t + np.array([delta * 0.7071, -delta * 0.5123, delta * 0.3331, 0])
    crit = critical_points(pert)
    out = []
    for x in sing:
        sv = np.linalg.svd(hessian(x), compute_uv=False)
        rank = int(np.sum(sv > 1e-4 * sv[0]))
        mu = max(1, int(np.sum(np.linalg.norm(crit - x, axis=1) < 1e-2 * (1 + np.linalg.norm(x)))))
        if rank == 3:
            out.append("A1")
        elif rank == 2:
            out.append(f"A{mu}")
        else:
            out.append("D4" if mu == 4 else f"rank1_mu{mu}")
    return sorted(out)


def singularity_tag(theta) -> str:
    """Combine per-point types into one of the eight abstract tags."""
    kinds = singularity_types(theta)
    if not kinds:
        return "Empty"
    if len(kinds) == 1:
        return kinds[0]
    if all(k == "A1" for k in kinds):
        return f"A1x{len(kinds)}"
    return "+".join(kinds)
