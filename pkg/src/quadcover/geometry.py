"""Quadrilateral validation, canonical frames and extremal ellipses.

Two ellipses are attached to a convex quadrilateral ``Q``:

* the maximal-area ellipse inscribed in ``Q`` (tangent to the four side
  lines), computed from the pencil of dual conics tangent to those lines;
* the minimal-area ellipse through the four vertices, computed in the
  similarity-normalized frame from the one-parameter family of conics
  through the vertices and the cubic that makes its area stationary.

Conics are plain quadratic forms ``c1 x^2 + c2 xy + c3 y^2 + c4 x + c5 y + c6``
and are compared through their scale-free geometric view
(:class:`EllipseGeo`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from numpy.polynomial import Polynomial

from .errors import (
    Degenerate,
    EmptyConic,
    NoEllipseRoot,
    NonConvex,
    NotAnEllipse,
    OutOfRange,
    SingularMap,
)
from .scalar import golden_section

MIN_AREA = 1e-9
# delta2 / (c1^2 + c2^2 + c3^2) at or below this is not an ellipse (axis ratio ~ 1e6)
ELLIPSE_EPS = 1e-12
# relative size below which |t - w| makes the circumscribed family degenerate
FAMILY_DEGENERACY = 1e-9


# --------------------------------------------------------------------------
# Quadrilaterals
# --------------------------------------------------------------------------

def _shoelace(pts):
    x = np.array([p[0] for p in pts], dtype=float)
    y = np.array([p[1] for p in pts], dtype=float)
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


@dataclass(frozen=True)
class Quadrilateral:
    """A strictly convex quadrilateral.

    ``labeled`` keeps the caller's vertex order, which fixes the roles of
    P1..P4 in the canonical maps. ``vertices`` is the same set of points
    in counter-clockwise order.
    """

    labeled: tuple
    vertices: tuple

    @property
    def area(self) -> float:
        return polygon_area(self)

    @property
    def diameter(self) -> float:
        pts = np.asarray(self.vertices)
        return float(max(np.linalg.norm(p - q) for p in pts for q in pts))

    @property
    def clockwise_input(self) -> bool:
        return self.labeled != self.vertices

    def edges(self):
        """Counter-clockwise edges as ``(start, end)`` point pairs."""
        v = self.vertices
        return [(v[i], v[(i + 1) % 4]) for i in range(4)]


def validate_quadrilateral(points) -> Quadrilateral:
    """Check four raw points and return a :class:`Quadrilateral`.

    Raises :class:`Degenerate` for repeated vertices or an area below
    ``1e-9`` m^2 and :class:`NonConvex` when the turn direction changes
    (or vanishes) along the boundary.
    """
    pts = [tuple(float(c) for c in p) for p in points]
    if len(pts) != 4 or any(len(p) != 2 for p in pts):
        raise Degenerate("a quadrilateral needs exactly four 2-D points")
    if not all(math.isfinite(c) for p in pts for c in p):
        raise Degenerate("vertex coordinates must be finite")
    for i in range(4):
        for j in range(i + 1, 4):
            if pts[i] == pts[j]:
                raise Degenerate(f"repeated vertex P{i + 1} = P{j + 1}")

    area = _shoelace(pts)
    if not abs(area) >= MIN_AREA:
        raise Degenerate(f"area {abs(area):.3g} m^2 is below {MIN_AREA:g}")

    crosses = []
    for i in range(4):
        p0, p1, p2 = (np.array(pts[(i + k) % 4]) for k in range(3))
        e1, e2 = p1 - p0, p2 - p1
        cr = e1[0] * e2[1] - e1[1] * e2[0]
        scale = np.linalg.norm(e1) * np.linalg.norm(e2)
        crosses.append(0.0 if abs(cr) <= 1e-12 * scale else cr)
    if not (all(c > 0 for c in crosses) or all(c < 0 for c in crosses)):
        raise NonConvex("edge cross-products change sign or vanish")

    labeled = tuple(pts)
    ccw = labeled if area > 0 else (pts[0], pts[3], pts[2], pts[1])
    return Quadrilateral(labeled=labeled, vertices=tuple(ccw))


def polygon_area(q: Quadrilateral) -> float:
    """Shoelace area of ``q`` (positive)."""
    return abs(_shoelace(q.vertices))


# --------------------------------------------------------------------------
# Plane maps and canonical quadrilaterals
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PlaneMap:
    """``p -> L p + t`` with ``L = [[a11, a12], [a21, a22]]``."""

    a11: float
    a12: float
    a21: float
    a22: float
    tx: float
    ty: float
    kind: str = "affine"

    @classmethod
    def from_matrix(cls, m, kind="affine"):
        m = np.asarray(m, dtype=float)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1], m[0, 2], m[1, 2], kind)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a11, self.a12, self.tx],
                         [self.a21, self.a22, self.ty],
                         [0.0, 0.0, 1.0]])

    @property
    def determinant(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a21

    @property
    def is_similarity(self) -> bool:
        scale = max(abs(self.a11), abs(self.a12), 1e-300)
        return (abs(self.a11 - self.a22) <= 1e-12 * scale
                and abs(self.a12 + self.a21) <= 1e-12 * scale)

    def apply(self, pts):
        p = np.asarray(pts, dtype=float)
        out = p @ np.array([[self.a11, self.a21], [self.a12, self.a22]])
        return out + np.array([self.tx, self.ty])

    def inverse(self) -> "PlaneMap":
        if self.determinant == 0.0:
            raise SingularMap("map is not invertible")
        return PlaneMap.from_matrix(np.linalg.inv(self.matrix), self.kind)


@dataclass(frozen=True)
class CanonicalQuad:
    """Image of ``Q`` in a canonical frame.

    Affine form: ``(0,0), (0,1), (s,t), (1,0)``. Similarity form:
    ``(0,0), (0,1), (s,t), (v,w)``.
    """

    s: float
    t: float
    v: Optional[float] = None
    w: Optional[float] = None

    @property
    def kind(self) -> str:
        return "affine" if self.v is None else "similarity"

    @property
    def fourth(self):
        return (1.0, 0.0) if self.v is None else (self.v, self.w)

    def vertices(self):
        return ((0.0, 0.0), (0.0, 1.0), (self.s, self.t), self.fourth)


def affine_to_canonical(q: Quadrilateral):
    """Affine map sending P1, P2, P4 to (0,0), (0,1), (1,0).

    Each output coordinate is an affine function fixed by three point
    constraints, so the map is two 3x3 linear solves. ``(s, t)`` is the
    image of P3.
    """
    p1, p2, p3, p4 = q.labeled
    system = np.array([[p1[0], p1[1], 1.0],
                       [p2[0], p2[1], 1.0],
                       [p4[0], p4[1], 1.0]])
    if abs(np.linalg.det(system)) <= 1e-14 * q.diameter ** 2:
        raise SingularMap("P1, P2 and P4 are collinear")
    row_x = np.linalg.solve(system, [0.0, 0.0, 1.0])
    row_y = np.linalg.solve(system, [0.0, 1.0, 0.0])
    m = PlaneMap(row_x[0], row_x[1], row_y[0], row_y[1], row_x[2], row_y[2],
                 "affine")
    s, t = m.apply(p3)
    cq = CanonicalQuad(float(s), float(t))
    validate_quadrilateral(cq.vertices())
    return m, cq


def similarity_to_canonical(q: Quadrilateral):
    """Rotation + uniform scale sending P1 to (0,0) and P2 to (0,1).

    The rotation is ``pi/2 - atan2(y2 - y1, x2 - x1)`` and the scale is
    ``1 / |P2 - P1|``. ``(s, t)`` and ``(v, w)`` are the images of P3, P4.
    """
    p1, p2, p3, p4 = (np.asarray(p) for p in q.labeled)
    dx, dy = p2 - p1
    dist = math.hypot(dx, dy)
    if dist == 0.0:
        raise SingularMap("P1 coincides with P2")
    phi = math.pi / 2 - math.atan2(dy, dx)
    sigma = 1.0 / dist
    c, sn = sigma * math.cos(phi), sigma * math.sin(phi)
    m = PlaneMap(c, -sn, sn, c,
                 -(c * p1[0] - sn * p1[1]), -(sn * p1[0] + c * p1[1]),
                 "similarity")
    (s, t), (v, w) = m.apply([p3, p4])
    return m, CanonicalQuad(float(s), float(t), float(v), float(w))


def compose(outer: PlaneMap, inner: PlaneMap) -> PlaneMap:
    """``outer(inner(p))``."""
    kind = "similarity" if outer.kind == inner.kind == "similarity" else "affine"
    return PlaneMap.from_matrix(outer.matrix @ inner.matrix, kind)


def normal_frame(q: Quadrilateral):
    """Similarity moving the vertex centroid to the origin with unit diameter.

    Returns ``(map, centre, scale)``; world points are ``centre + scale * p``.
    """
    pts = np.asarray(q.vertices, dtype=float)
    centre = pts.mean(axis=0)
    scale = q.diameter
    m = PlaneMap(1 / scale, 0.0, 0.0, 1 / scale,
                 -centre[0] / scale, -centre[1] / scale, "similarity")
    return m, centre, scale


def _unframe(geo: "EllipseGeo", centre, scale) -> "EllipseGeo":
    cx, cy = geo.center
    return EllipseGeo((float(centre[0] + scale * cx), float(centre[1] + scale * cy)),
                      geo.a * scale, geo.b * scale, geo.rotation)


# --------------------------------------------------------------------------
# Conics
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Conic:
    """``c1 x^2 + c2 xy + c3 y^2 + c4 x + c5 y + c6 = 0``, up to scale."""

    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    c6: float

    @classmethod
    def from_matrix(cls, m):
        m = np.asarray(m, dtype=float)
        return cls(m[0, 0], m[0, 1] + m[1, 0], m[1, 1],
                   m[0, 2] + m[2, 0], m[1, 2] + m[2, 1], m[2, 2])

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3, self.c4, self.c5, self.c6])

    @property
    def matrix(self) -> np.ndarray:
        c1, c2, c3, c4, c5, c6 = self.coefficients
        return np.array([[c1, c2 / 2, c4 / 2],
                         [c2 / 2, c3, c5 / 2],
                         [c4 / 2, c5 / 2, c6]])

    @property
    def delta2(self) -> float:
        return 4.0 * self.c1 * self.c3 - self.c2 ** 2

    @property
    def delta1(self) -> float:
        f1, f2, f3, f4, f5, f6 = self.coefficients
        return f3 * f4 ** 2 + f1 * f5 ** 2 - f2 * f4 * f5 - f6 * self.delta2

    def quadratic_delta2(self) -> float:
        """``delta2`` relative to the size of the quadratic part (scale free)."""
        q2 = self.c1 ** 2 + self.c2 ** 2 + self.c3 ** 2
        return self.delta2 / q2 if q2 > 0 else -math.inf

    def is_ellipse(self) -> bool:
        n = self.normalized()
        return n.quadratic_delta2() > ELLIPSE_EPS and n.delta1 > 0.0

    def normalized(self) -> "Conic":
        """Unit coefficient norm, ``c1 > 0`` (``c3 > 0`` when ``c1 == 0``)."""
        v = self.coefficients
        norm = float(np.linalg.norm(v))
        if norm == 0.0 or not math.isfinite(norm):
            raise NotAnEllipse("conic has no finite nonzero coefficients")
        v = v / norm
        lead = next((x for x in v if abs(x) > 1e-15), 1.0)
        if abs(v[0]) > 1e-15:
            lead = v[0]
        elif abs(v[2]) > 1e-15:
            lead = v[2]
        if lead < 0:
            v = -v
        return Conic(*map(float, v))

    def evaluate(self, x, y):
        c1, c2, c3, c4, c5, c6 = self.coefficients
        return c1 * x * x + c2 * x * y + c3 * y * y + c4 * x + c5 * y + c6

    def area(self) -> float:
        """``pi a b`` via ``2 pi delta1 / delta2^(3/2)``."""
        n = self.normalized()
        if n.delta2 <= 0.0:
            raise NotAnEllipse(f"delta2 = {n.delta2:.3g} <= 0")
        if n.delta1 <= 0.0:
            raise EmptyConic("ellipse equation has no real points")
        return 2.0 * math.pi * n.delta1 / n.delta2 ** 1.5

    def as_dict(self):
        n = self.normalized()
        return {f"c{i + 1}": float(x) for i, x in enumerate(n.coefficients)}


@dataclass(frozen=True)
class EllipseGeo:
    center: tuple
    a: float
    b: float
    rotation: float

    @property
    def area(self) -> float:
        return math.pi * self.a * self.b

    def boundary(self, n=720) -> np.ndarray:
        t = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
        cr, sr = math.cos(self.rotation), math.sin(self.rotation)
        x, y = self.a * np.cos(t), self.b * np.sin(t)
        return np.column_stack([self.center[0] + cr * x - sr * y,
                                self.center[1] + sr * x + cr * y])

    def to_conic(self) -> Conic:
        cr, sr = math.cos(self.rotation), math.sin(self.rotation)
        rot = np.array([[cr, -sr], [sr, cr]])
        A = rot @ np.diag([1 / self.a ** 2, 1 / self.b ** 2]) @ rot.T
        c = np.asarray(self.center, dtype=float)
        m = np.zeros((3, 3))
        m[:2, :2] = A
        m[:2, 2] = m[2, :2] = -A @ c
        m[2, 2] = c @ A @ c - 1.0
        return Conic.from_matrix(m).normalized()


def conic_to_geometric(c: Conic) -> EllipseGeo:
    """Center, semi-axes and major-axis angle of an ellipse conic.

    The semi-axes follow ``a, b = sqrt(mu (F1 + F3 +- r) / 2)`` with
    ``r = sqrt((F1 - F3)^2 + F2^2)`` and ``mu = 4 delta1 / delta2^2``.
    """
    n = c.normalized()
    f1, f2, f3, f4, f5, _ = n.coefficients
    d2 = n.delta2
    if n.quadratic_delta2() <= ELLIPSE_EPS:
        raise NotAnEllipse(f"delta2 = {d2:.3g} <= 0")
    d1 = n.delta1
    if d1 <= 0.0:
        raise EmptyConic("ellipse equation has no real points")
    mu = 4.0 * d1 / d2 ** 2
    r = math.hypot(f1 - f3, f2)
    a = math.sqrt(mu * (f1 + f3 + r) / 2.0)
    b = math.sqrt(max(mu * (f1 + f3 - r) / 2.0, 0.0))
    center = ((f2 * f5 - 2 * f3 * f4) / d2, (f2 * f4 - 2 * f1 * f5) / d2)
    if r <= 1e-12 * (f1 + f3):
        rotation = 0.0
    else:
        # the major axis is the direction of least curvature
        rotation = (0.5 * math.atan2(f2, f1 - f3) + math.pi / 2) % math.pi
    return EllipseGeo(center=center, a=a, b=b, rotation=rotation)


def transform_conic(c: Conic, m: PlaneMap) -> Conic:
    """Conic ``c'`` such that ``x`` lies on ``c`` iff ``m(x)`` lies on ``c'``."""
    if m.determinant == 0.0:
        raise SingularMap("map is not invertible")
    inv = np.linalg.inv(m.matrix)
    return Conic.from_matrix(inv.T @ c.matrix @ inv).normalized()


def edge_restriction(c: Conic, p, q):
    """Coefficients ``(A, B, C)`` of the conic on ``p + tau (q - p)``."""
    M = c.normalized().matrix
    P = np.array([p[0], p[1], 1.0])
    D = np.array([q[0] - p[0], q[1] - p[1], 0.0])
    return float(D @ M @ D), float(2 * D @ M @ P), float(P @ M @ P)


def tangency(c: Conic, p, q):
    """Scale-free discriminant and contact parameter of ``c`` on edge ``pq``.

    The discriminant ``(B^2 - 4AC) / (B^2 + 4|AC|)`` lies in ``[-1, 1]``
    and vanishes for a tangent line. ``tau`` in ``[0, 1]`` means the double
    root sits on the closed segment.
    """
    A, B, C = edge_restriction(c, p, q)
    denom = B * B + 4 * abs(A * C)
    disc = (B * B - 4 * A * C) / denom if denom > 0 else 0.0
    tau = -B / (2 * A) if A != 0 else math.nan
    return disc, tau


# --------------------------------------------------------------------------
# Cubic roots
# --------------------------------------------------------------------------

def _newton(coeffs, x):
    p = np.polyval(coeffs, x)
    dp = np.polyval(np.polyder(coeffs), x)
    return x - p / dp if dp != 0 else x


def real_cubic_roots(a, b, c, d):
    """Real roots of ``a x^3 + b x^2 + c x + d`` in ascending order.

    Closed form (trigonometric for three real roots, Cardano otherwise),
    followed by one Newton step per root. A vanishing leading coefficient
    drops to the quadratic or linear case.
    """
    coeffs = np.array([a, b, c, d], dtype=float)
    scale = float(np.max(np.abs(coeffs)))
    if scale == 0.0:
        raise OutOfRange("zero polynomial has no isolated roots")
    a, b, c, d = coeffs / scale
    if abs(a) <= 1e-14:
        if abs(b) <= 1e-14:
            return [] if abs(c) <= 1e-14 else [-d / c]
        disc = c * c - 4 * b * d
        if disc < 0:
            return []
        sq = math.sqrt(disc)
        qq = -0.5 * (c + math.copysign(sq, c))
        roots = [qq / b] + ([d / qq] if qq != 0 else [])
        return sorted(set(roots))

    b, c, d = b / a, c / a, d / a
    shift = b / 3.0
    p = c - b * b / 3.0
    q = 2 * b ** 3 / 27.0 - b * c / 3.0 + d
    disc = (q / 2) ** 2 + (p / 3) ** 3
    if p == 0.0 and q == 0.0:
        ys = [0.0]
    elif disc > 0:
        sq = math.sqrt(disc)
        u = -q / 2 + sq if q <= 0 else -q / 2 - sq
        u = math.copysign(abs(u) ** (1 / 3), u)
        ys = [u - p / (3 * u)]
    else:
        r = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * r) if p != 0 else 0.0
        ang = math.acos(max(-1.0, min(1.0, arg))) / 3.0
        ys = [r * math.cos(ang - 2 * math.pi * k / 3) for k in range(3)]
    monic = np.array([1.0, b, c, d])
    roots = sorted(_newton(monic, y - shift) for y in ys)
    out = []
    for x in roots:
        if not out or abs(x - out[-1]) > 1e-12 * max(1.0, abs(x)):
            out.append(float(x))
    return out


# --------------------------------------------------------------------------
# Maximal inscribed ellipse
# --------------------------------------------------------------------------

class EllipseFit(NamedTuple):
    conic: Conic
    ellipse: EllipseGeo
    diagnostics: dict


def inscribed_family_conic(c: CanonicalQuad, q: float) -> Conic:
    """Member ``q`` of the printed inscribed-ellipse family (affine frame).

    Restricted to ``y' = 0`` it is ``t^2 (x' - q)^2``; restricted to
    ``x' = 0`` it is a perfect square touching at ``qt / ((1-q) s + qt)``.
    """
    if not 0.0 <= q <= 1.0:
        raise OutOfRange(f"family parameter q = {q} outside [0, 1]")
    s, t = c.s, c.t
    k = (1 - q) * s + q * t
    conic = Conic(t * t,
                  4 * q * q * (s - 1) * t + 2 * q * t * (s - t + 2) - 2 * s * t,
                  k * k,
                  -2 * q * t * t,
                  -2 * q * t * k,
                  q * q * t * t)
    if conic.normalized().quadratic_delta2() <= ELLIPSE_EPS:
        raise NotAnEllipse(f"family member q = {q} is not an ellipse")
    return conic


def published_inscribed_q(s: float, t: float) -> float:
    """Closed-form family parameter as printed for the maximal ellipse."""
    k = s * t - t + 1
    return (-k + math.sqrt(k * k + t * (s - 1) * (t - s + 2))) / ((t - 1) * (t - s + 2))


def _dual_area2(D):
    # ellipse (x-c)^T A (x-c) = 1  <->  dual conic ~ [[A^-1 - c c^T, -c], [-c^T, -1]]
    D = D / -D[2, 2]
    c = -D[:2, 2]
    shape = D[:2, :2] + np.outer(c, c)
    return float(np.linalg.det(shape))


def _inscribed_pencil(points):
    """The two degenerate dual conics spanning the inscribed pencil."""
    hom = [np.array([p[0], p[1], 1.0]) for p in points]
    lines = [np.cross(hom[i], hom[(i + 1) % 4]) for i in range(4)]
    # dual points pairwise joined: l1 x l2 etc. recover the vertices
    meet = [np.cross(lines[i - 1], lines[i]) for i in range(4)]
    meet = [m / m[2] for m in meet]

    def pair(p, r):
        return np.outer(p, r) + np.outer(r, p)

    return pair(meet[0], meet[2]), pair(meet[1], meet[3])


def _steiner_candidates(pts):
    """Steiner inellipses of the triangles bounded by three of the four side lines.

    ``pts`` are the CCW vertices. Dropping side ``i`` leaves its two
    neighbours, which close a triangle with the opposite side when they
    converge beyond side ``i``. Yields ``(i, center, M)`` where the ellipse
    is ``center + M u`` for ``|u| <= 1``.
    """
    pts = np.asarray(pts, dtype=float)
    for i in range(4):
        a, b = pts[(i + 2) % 4], pts[(i + 3) % 4]       # opposite side
        p0, d0 = pts[(i + 1) % 4], pts[(i + 2) % 4] - pts[(i + 1) % 4]
        p1, d1 = pts[i], pts[(i + 3) % 4] - pts[i]
        # p0 + s d0 == p1 + r d1, apex lies behind both p0 and p1
        mat = np.column_stack([d0, -d1])
        if abs(np.linalg.det(mat)) <= 1e-12 * np.linalg.norm(d0) * np.linalg.norm(d1):
            continue
        s_, r_ = np.linalg.solve(mat, p1 - p0)
        if s_ >= 0 or r_ >= 0:
            continue
        apex = p0 + s_ * d0
        g = (a + b + apex) / 3.0
        m = np.column_stack([(apex - g) / 2.0, (a - b) / (2.0 * math.sqrt(3.0))])
        yield i, g, m


def _fits_side(center, m, p, r):
    e = np.asarray(r) - np.asarray(p)
    n = np.array([e[1], -e[0]]) / np.linalg.norm(e)      # outward for CCW order
    return np.linalg.norm(m.T @ n) + n @ center <= n @ np.asarray(p) + 1e-12


def _geo_from_affine_disk(center, m) -> EllipseGeo:
    u, sv, _ = np.linalg.svd(m)
    rotation = math.atan2(u[1, 0], u[0, 0]) % math.pi
    return EllipseGeo((float(center[0]), float(center[1])), float(sv[0]), float(sv[1]),
                      rotation)


def max_inscribed_ellipse(q: Quadrilateral) -> EllipseFit:
    """Maximal-area ellipse inside ``q``.

    Works in the affine canonical frame. Every dual conic
    ``(1 - lam) S13 + lam S24`` (``S13`` joining the vertex pair P1, P3,
    ``S24`` the pair P2, P4) is tangent to the four side lines; for
    ``lam`` in ``(0, 1)`` it is an ellipse inscribed in the quadrilateral,
    degenerating to a diagonal at either end. The area is maximized over
    ``lam`` by golden-section search.

    The optimum need not touch all four sides: when the Steiner inellipse
    of the triangle cut out by three side lines already fits inside ``q``,
    it is the maximal ellipse of that triangle and hence of ``q``. Both
    candidates are evaluated and the larger feasible one is returned.

    ``diagnostics`` carries the sides touched, the pencil optimum, the
    printed closed-form parameter, whether it falls in ``[0, 1]``, and the
    area of the printed family member when it is a valid ellipse.
    """
    amap, cq = affine_to_canonical(q)
    frame, centre, scale = normal_frame(q)
    s13, s24 = _inscribed_pencil(cq.vertices())

    def neg_area2(lam):
        return -_dual_area2((1 - lam) * s13 + lam * s24)

    lam, _, iters, _ = golden_section(neg_area2, 0.0, 1.0, 1e-13)
    dual = (1 - lam) * s13 + lam * s24
    canon = Conic.from_matrix(np.linalg.inv(dual)).normalized()
    framed = transform_conic(canon, compose(frame, amap.inverse()))
    best_conic, best_geo = framed, conic_to_geometric(framed)
    pencil_area = best_geo.area * scale * scale
    untouched = None

    fpts = frame.apply(q.vertices)
    fedges = [(fpts[i], fpts[(i + 1) % 4]) for i in range(4)]
    for i, g, m in _steiner_candidates(fpts):
        p, r = fedges[i]
        if not _fits_side(g, m, p, r):
            continue
        geo = _geo_from_affine_disk(g, m)
        if geo.area > best_geo.area:
            best_geo, best_conic, untouched = geo, geo.to_conic(), i

    world = transform_conic(best_conic, frame.inverse())
    geo = _unframe(best_geo, centre, scale)

    diag = {"family_parameter": lam, "iterations": iters,
            "canonical": {"s": cq.s, "t": cq.t},
            "sides_touched": 4 if untouched is None else 3,
            "untouched_side": None if untouched is None else
            [_label_index(q, q.vertices[untouched]),
             _label_index(q, q.vertices[(untouched + 1) % 4])],
            "pencil_area": pencil_area}
    try:
        pq = published_inscribed_q(cq.s, cq.t)
    except (ZeroDivisionError, ValueError):
        pq = math.nan
    diag["published_q"] = pq
    diag["published_q_in_range"] = bool(0.0 <= pq <= 1.0)
    diag["published_conic_area"] = None
    if diag["published_q_in_range"]:
        try:
            pc = transform_conic(inscribed_family_conic(cq, pq), amap.inverse())
            diag["published_conic_area"] = pc.area()
        except (NotAnEllipse, EmptyConic):
            pass
    return EllipseFit(world, geo, diag)


def _label_index(q: Quadrilateral, vertex):
    """1-based label (P1..P4) of a vertex."""
    return q.labeled.index(vertex) + 1


# --------------------------------------------------------------------------
# Minimal circumscribed ellipse
# --------------------------------------------------------------------------

def _family_polys(c: CanonicalQuad):
    s, t = c.s, c.t
    v, w = c.fourth
    k = s * v * (t - w)
    P = Polynomial
    return (P([0.0, k]),
            P([s * w * w - t * t * v + v * t - w * s, -s * v * (s - v)]),
            P([k]),
            P([(v * (t - 1) + (1 - w) * s) * t * w, -(v * t - w * s) * s * v]),
            P([-k]),
            P([0.0]))


def circumscribed_family_conic(c: CanonicalQuad, u: float) -> Conic:
    """Member ``u`` of the family of conics through the canonical vertices."""
    conic = Conic(*(float(p(u)) for p in _family_polys(c)))
    if conic.normalized().quadratic_delta2() <= ELLIPSE_EPS:
        raise NotAnEllipse(f"family member u = {u} is not an ellipse")
    return conic


def printed_circumscribed_cubic(s: float, t: float):
    """Cubic coefficients (highest first) exactly as printed; uses only (s, t)."""
    return (s ** 3 * (s - 1) ** 2,
            s ** 2 * t * (2 * (s - 1) ** 2 + s * t + s + t - 1),
            -s * t ** 2 * (2 * (t - 1) ** 2 + s * t + s + t - 1),
            -t ** 3 * (t - 1) ** 2)


def circumscribed_stationarity_cubic(c: CanonicalQuad):
    """Cubic in ``u`` whose roots make the family's ellipse area stationary.

    Area is proportional to ``delta1 / delta2^(3/2)``, so stationarity is
    ``2 delta1' delta2 - 3 delta1 delta2' = 0``. With ``delta1`` and
    ``delta2`` quadratic in ``u`` this is a cubic. For the fourth vertex at
    ``(1, 0)`` it coincides, up to a constant factor, with
    :func:`printed_circumscribed_cubic`.
    """
    f1, f2, f3, f4, f5, f6 = _family_polys(c)
    d2 = 4 * f1 * f3 - f2 * f2
    d1 = f3 * f4 * f4 + f1 * f5 * f5 - f2 * f4 * f5 - f6 * d2
    stat = 2 * d1.deriv() * d2 - 3 * d1 * d2.deriv()
    coef = list(stat.coef) + [0.0] * 4
    return tuple(float(x) for x in coef[3::-1])


def _ellipse_area_or_none(conic: Conic):
    try:
        return conic.area()
    except (NotAnEllipse, EmptyConic):
        return None


def _pick_min_area_root(c: CanonicalQuad, roots):
    best = None
    for u in roots:
        area = _ellipse_area_or_none(Conic(*(float(p(u)) for p in _family_polys(c))))
        if area is not None and (best is None or area < best[1]):
            best = (u, area)
    return best


def solve_min_circumscribed_u(c: CanonicalQuad) -> float:
    """Family parameter of the minimal-area ellipse through the vertices.

    Among the real roots of :func:`circumscribed_stationarity_cubic`,
    keeps those whose family member is a real ellipse and returns the one
    with the least area.
    """
    roots = real_cubic_roots(*circumscribed_stationarity_cubic(c))
    best = _pick_min_area_root(c, roots)
    if best is None:
        raise NoEllipseRoot(f"no real root of the area cubic gives an ellipse "
                            f"(roots {roots})")
    return best[0]


def _relabelings(q: Quadrilateral):
    lab = q.labeled
    for k in range(4):
        yield k, Quadrilateral(labeled=lab[k:] + lab[:k], vertices=q.vertices)


def pencil_min_circumscribed(q: Quadrilateral, samples=1440):
    """Independent minimal-area search over the pencil through the vertices.

    The pencil is spanned by the two line-pair conics made of opposite
    sides. Members are parametrized by an angle in ``[0, pi)``, scanned for
    the ellipse with least area and refined by golden-section search.
    Returns ``(conic, area)`` in world coordinates.
    """
    norm, _, scale = normal_frame(q)
    hom = [np.array([p[0], p[1], 1.0]) for p in norm.apply(q.vertices)]
    lines = [np.cross(hom[i], hom[(i + 1) % 4]) for i in range(4)]

    def pair(l, m):
        out = np.outer(l, m) + np.outer(m, l)
        return out / np.linalg.norm(out)

    l13, l24 = pair(lines[0], lines[2]), pair(lines[1], lines[3])

    def area_at(tau):
        a = _ellipse_area_or_none(
            Conic.from_matrix(math.cos(tau) * l13 + math.sin(tau) * l24))
        return math.inf if a is None else a

    taus = np.linspace(0.0, math.pi, samples, endpoint=False)
    areas = np.array([area_at(x) for x in taus])
    if not np.isfinite(areas).any():
        raise NoEllipseRoot("no ellipse in the pencil through the vertices")
    i = int(np.argmin(areas))
    step = taus[1] - taus[0]
    tau, area, _, _ = golden_section(area_at, taus[i] - step, taus[i] + step, 1e-12)
    conic = Conic.from_matrix(math.cos(tau) * l13 + math.sin(tau) * l24)
    world = transform_conic(conic, norm.inverse())
    return world, area * scale * scale


def published_circumscribed_ellipse(q: Quadrilateral) -> EllipseFit:
    """Ellipse obtained by feeding the similarity-frame (s, t) to the printed cubic.

    This reproduces the published case-study numbers. It is not the
    minimal ellipse unless the fourth canonical vertex is ``(1, 0)``.
    """
    smap, cq = similarity_to_canonical(q)
    roots = real_cubic_roots(*printed_circumscribed_cubic(cq.s, cq.t))
    best = _pick_min_area_root(cq, roots)
    if best is None:
        raise NoEllipseRoot(f"printed cubic has no ellipse root (roots {roots})")
    u = best[0]
    canon = circumscribed_family_conic(cq, u)
    world = transform_conic(canon, smap.inverse())
    frame, centre, scale = normal_frame(q)
    geo = _unframe(conic_to_geometric(
        transform_conic(canon, compose(frame, smap.inverse()))), centre, scale)
    return EllipseFit(world, geo,
                      {"u": u, "roots": roots,
                       "canonical": {"s": cq.s, "t": cq.t, "v": cq.v, "w": cq.w}})


def min_circumscribed_ellipse(q: Quadrilateral) -> EllipseFit:
    """Minimal-area ellipse through the four vertices of ``q``.

    Similarity-normalize, solve the area cubic for the family parameter,
    and pull the family member back. When ``t == w`` the family
    parametrization collapses, so the vertex labels are rotated until it
    is well conditioned; the ellipse itself does not depend on labeling.

    ``diagnostics``: ``u``, the canonical coordinates used, the root of the
    printed cubic with its ellipse, and the pencil-search area with its
    relative gap to the returned ellipse.
    """
    for shift, relabeled in _relabelings(q):
        smap, cq = similarity_to_canonical(relabeled)
        if abs(cq.t - cq.w) > FAMILY_DEGENERACY * max(1.0, abs(cq.t), abs(cq.w)):
            break
    else:  # pragma: no cover - a convex quadrilateral always has one
        raise NoEllipseRoot("circumscribed family degenerate for every labeling")

    u = solve_min_circumscribed_u(cq)
    canon = circumscribed_family_conic(cq, u)
    world = transform_conic(canon, smap.inverse())
    frame, centre, scale = normal_frame(q)
    geo = _unframe(conic_to_geometric(
        transform_conic(canon, compose(frame, smap.inverse()))), centre, scale)

    diag = {"u": u, "label_shift": shift,
            "canonical": {"s": cq.s, "t": cq.t, "v": cq.v, "w": cq.w}}
    try:
        published = published_circumscribed_ellipse(q)
        diag["published_u"] = published.diagnostics["u"]
        diag["published_a"], diag["published_b"] = published.ellipse.a, published.ellipse.b
        diag["published_area"] = published.ellipse.area
    except (NoEllipseRoot, NotAnEllipse, EmptyConic):
        diag["published_u"] = None
    _, pencil_area = pencil_min_circumscribed(q)
    diag["pencil_area"] = pencil_area
    diag["pencil_relative_gap"] = abs(geo.area - pencil_area) / pencil_area
    return EllipseFit(world, geo, diag)


def circumscribed_family_area(c: CanonicalQuad, u: float) -> float:
    """Area (canonical units) of family member ``u``; inf if not an ellipse."""
    area = _ellipse_area_or_none(Conic(*(float(p(u)) for p in _family_polys(c))))
    return math.inf if area is None else area


def inscribed_pencil_area(q: Quadrilateral, lam: float) -> float:
    """World area of the inscribed pencil member ``lam`` in ``[0, 1]``."""
    amap, cq = affine_to_canonical(q)
    s13, s24 = _inscribed_pencil(cq.vertices())
    a2 = _dual_area2((1 - lam) * s13 + lam * s24)
    return math.pi * math.sqrt(max(a2, 0.0)) / abs(amap.determinant)
