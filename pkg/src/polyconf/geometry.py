"""Plane primitives: points, normalized lines, circles, parabolas and spiral similarities."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DegenerateError

DEGENERACY_TOL = 1e-9
INCIDENCE_TOL = 1e-7


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DegenerateError(f"non-finite point ({self.x}, {self.y})")

    def __add__(self, o: "Point2") -> "Point2":
        return Point2(self.x + o.x, self.y + o.y)

    def __sub__(self, o: "Point2") -> "Point2":
        return Point2(self.x - o.x, self.y - o.y)

    def scale(self, k: float) -> "Point2":
        return Point2(k * self.x, k * self.y)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dist(self, o: "Point2") -> float:
        return math.hypot(self.x - o.x, self.y - o.y)

    def as_complex(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def from_complex(cls, z: complex) -> "Point2":
        return cls(z.real, z.imag)

    @classmethod
    def polar(cls, r: float, angle: float) -> "Point2":
        return cls(r * math.cos(angle), r * math.sin(angle))

    def close_to(self, o: "Point2", tol: float = 1e-9) -> bool:
        return self.dist(o) <= tol


ORIGIN = Point2(0.0, 0.0)


@dataclass(frozen=True)
class Line2:
    """``a x + b y + c = 0`` with ``a^2 + b^2 = 1`` and the first nonzero of ``(a, b)`` positive."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        a, b, c = float(self.a), float(self.b), float(self.c)
        n = math.hypot(a, b)
        if not n > 0 or not math.isfinite(n) or not math.isfinite(c):
            raise DegenerateError("line normal vanishes")
        a, b, c = a / n, b / n, c / n
        if a < 0 or (a == 0 and b < 0):
            a, b, c = -a, -b, -c
        object.__setattr__(self, "a", a + 0.0)
        object.__setattr__(self, "b", b + 0.0)
        object.__setattr__(self, "c", c + 0.0)

    @classmethod
    def from_normalized(cls, a: float, b: float, c: float) -> "Line2":
        """Rebuild a line from already-normalized coefficients without rounding them again."""
        line = cls(a, b, c)
        if abs(math.hypot(a, b) - 1.0) > 1e-12 or not (a > 0 or (a == 0 and b > 0)):
            return line
        object.__setattr__(line, "a", float(a))
        object.__setattr__(line, "b", float(b))
        object.__setattr__(line, "c", float(c))
        return line

    @property
    def normal(self) -> Point2:
        return Point2(self.a, self.b)

    @property
    def direction(self) -> Point2:
        return Point2(-self.b, self.a)

    def foot(self, p: Point2 = ORIGIN) -> Point2:
        """Orthogonal projection of ``p`` onto the line."""
        r = point_line_residual(p, self)
        return Point2(p.x - r * self.a, p.y - r * self.b)

    def close_to(self, o: "Line2", tol: float = 1e-9) -> bool:
        d = max(abs(self.a - o.a), abs(self.b - o.b), abs(self.c - o.c))
        # a vertical line can flip sign under tiny perturbations of a
        e = max(abs(self.a + o.a), abs(self.b + o.b), abs(self.c + o.c))
        return min(d, e) <= tol


@dataclass(frozen=True)
class Circle2:
    center: Point2
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise DegenerateError("circle radius must be positive")

    def residual(self, p: Point2) -> float:
        return p.dist(self.center) - self.radius


@dataclass(frozen=True)
class Parabola2:
    focus: Point2
    directrix: Line2

    def __post_init__(self):
        if abs(point_line_residual(self.focus, self.directrix)) <= DEGENERACY_TOL:
            raise DegenerateError("focus lies on the directrix")

    @property
    def focal_parameter(self) -> float:
        """Half the focus-directrix distance (``p`` in ``x^2 = 4 p y``)."""
        return abs(point_line_residual(self.focus, self.directrix)) / 2.0

    @property
    def axis(self) -> Point2:
        """Unit vector from the directrix towards the focus."""
        r = point_line_residual(self.focus, self.directrix)
        s = 1.0 if r > 0 else -1.0
        return Point2(s * self.directrix.a, s * self.directrix.b)

    @property
    def vertex(self) -> Point2:
        return self.focus - self.axis.scale(self.focal_parameter)

    def residual(self, p: Point2) -> float:
        return p.dist(self.focus) - abs(point_line_residual(p, self.directrix))

    def to_local(self, p: Point2) -> tuple[float, float]:
        """Coordinates ``(u, v)`` with origin at the focus and ``v`` along the axis."""
        ax = self.axis
        d = p - self.focus
        return (d.x * ax.y - d.y * ax.x, d.x * ax.x + d.y * ax.y)

    def from_local(self, u: float, v: float) -> Point2:
        ax = self.axis
        return Point2(self.focus.x + u * ax.y + v * ax.x, self.focus.y - u * ax.x + v * ax.y)

    def point_at(self, u: float) -> Point2:
        p = self.focal_parameter
        return self.from_local(u, u * u / (4 * p) - p)


@dataclass(frozen=True)
class Similarity2:
    """``z -> center + scale * e^{i angle} (z - center)``."""

    center: Point2
    scale: float
    angle: float

    def __post_init__(self):
        if not self.scale > 0:
            raise DegenerateError("similarity scale must be positive")

    @property
    def factor(self) -> complex:
        return self.scale * cmath.exp(1j * self.angle)

    def __call__(self, obj):
        if isinstance(obj, Line2):
            d = obj.direction
            p = obj.foot(self.center) if abs(point_line_residual(self.center, obj)) > 0 else self.center
            return join(self(p), self(p + d))
        z = obj.as_complex() - self.center.as_complex()
        return Point2.from_complex(self.center.as_complex() + self.factor * z)

    def compose(self, other: "Similarity2") -> "Similarity2":
        """``self`` after ``other``; both must share a center."""
        if not self.center.close_to(other.center, 1e-12):
            raise DegenerateError("similarities with different centers")
        return Similarity2(self.center, self.scale * other.scale, self.angle + other.angle)

    def inverse(self) -> "Similarity2":
        return Similarity2(self.center, 1.0 / self.scale, -self.angle)

    def is_identity(self, tol: float = 1e-12) -> bool:
        return abs(self.factor - 1) <= tol


def point_line_residual(p: Point2, l: Line2) -> float:
    """Signed distance from ``p`` to ``l`` (positive on the side of the normal)."""
    return l.a * p.x + l.b * p.y + l.c


def join(p: Point2, q: Point2) -> Line2:
    dx, dy = q.x - p.x, q.y - p.y
    if math.hypot(dx, dy) <= DEGENERACY_TOL:
        raise DegenerateError("join of coincident points")
    a, b = -dy, dx
    return Line2(a, b, -(a * p.x + b * p.y))


def meet(l: Line2, m: Line2) -> Point2:
    det = l.a * m.b - m.a * l.b
    if abs(det) <= DEGENERACY_TOL:
        raise DegenerateError("meet of parallel lines")
    x = (l.b * m.c - m.b * l.c) / det
    y = (l.c * m.a - m.c * l.a) / det
    return Point2(x, y)


def rotate(obj: Union[Point2, Line2], angle: float, center: Point2 = ORIGIN):
    """Rotate a point or a line by ``angle`` radians about ``center``."""
    c, s = math.cos(angle), math.sin(angle)
    if isinstance(obj, Line2):
        # the rotated normal keeps the signed distance from the center
        a = c * obj.a - s * obj.b
        b = s * obj.a + c * obj.b
        r = point_line_residual(center, obj)
        return Line2(a, b, r - a * center.x - b * center.y)
    dx, dy = obj.x - center.x, obj.y - center.y
    return Point2(center.x + c * dx - s * dy, center.y + s * dx + c * dy)


def reflect(p: Point2, l: Line2) -> Point2:
    r = point_line_residual(p, l)
    return Point2(p.x - 2 * r * l.a, p.y - 2 * r * l.b)


def collinearity_det(p: Point2, q: Point2, r: Point2) -> float:
    """Determinant of the homogeneous coordinates of three points."""
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)


def circle_through(a: Point2, b: Point2, c: Point2) -> Circle2:
    d = 2 * collinearity_det(a, b, c)
    scale = max(a.dist(b), b.dist(c), a.dist(c), 1.0)
    if abs(d) <= DEGENERACY_TOL * scale * scale:
        raise DegenerateError("circle through collinear points")
    sa, sb, sc = a.x ** 2 + a.y ** 2, b.x ** 2 + b.y ** 2, c.x ** 2 + c.y ** 2
    ux = (sa * (b.y - c.y) + sb * (c.y - a.y) + sc * (a.y - b.y)) / d
    uy = (sa * (c.x - b.x) + sb * (a.x - c.x) + sc * (b.x - a.x)) / d
    center = Point2(ux, uy)
    return Circle2(center, center.dist(a))


def line_circle_intersections(l: Line2, c: Circle2, tol: float = DEGENERACY_TOL) -> list[Point2]:
    """0, 1 (tangency within ``tol``) or 2 points, ordered along the line direction."""
    d = point_line_residual(c.center, l)
    foot = l.foot(c.center)
    gap = abs(d) - c.radius
    if gap > tol * max(1.0, c.radius):
        return []
    if abs(gap) <= tol * max(1.0, c.radius):
        return [foot]
    h = math.sqrt(c.radius ** 2 - d * d)
    u = l.direction
    return [foot - u.scale(h), foot + u.scale(h)]


def envelope_parabola(l: Line2, theta: float, center: Point2 = ORIGIN) -> Parabola2:
    """Envelope of the chords ``P rotate(P, theta, center)`` for ``P`` on ``l``.

    The focus is ``center``; the directrix joins the reflections of ``center``
    in ``l`` and in its rotate.
    """
    if abs(math.remainder(theta, 2 * math.pi)) <= DEGENERACY_TOL:
        raise DegenerateError("rotation angle is a multiple of 2*pi")
    if abs(point_line_residual(center, l)) <= DEGENERACY_TOL:
        raise DegenerateError("center lies on the line")
    l2 = rotate(l, theta, center)
    if abs(l.a * l2.b - l.b * l2.a) <= DEGENERACY_TOL:
        raise DegenerateError("rotated line is parallel to the original")
    return Parabola2(center, join(reflect(center, l), reflect(center, l2)))


def _quartic(par: Parabola2, circ: Circle2) -> np.ndarray:
    p = par.focal_parameter
    cu, cv = par.to_local(circ.center)
    k = p + cv
    return np.array([1.0 / (16 * p * p), 0.0, 1.0 - k / (2 * p), -2.0 * cu, cu * cu + k * k - circ.radius ** 2])


def _newton(coeffs: np.ndarray, x: float, steps: int = 60) -> float:
    d = np.polyder(coeffs)
    for _ in range(steps):
        fd = np.polyval(d, x)
        if fd == 0:
            break
        step = np.polyval(coeffs, x) / fd
        x -= step
        if abs(step) < 1e-16 * max(1.0, abs(x)):
            break
    return float(x)


def parabola_circle_intersections(
    par: Parabola2, circ: Circle2, cluster_tol: float = 1e-7
) -> list[tuple[Point2, bool]]:
    """Real intersection points, each flagged ``True`` when it is a tangency.

    Works in the parabola's own frame (``u^2 = 4 p v + 4 p^2``), eliminates
    ``v`` to a quartic in ``u`` and clusters its roots; a cluster of even size
    is a point of even intersection multiplicity.
    """
    coeffs = _quartic(par, circ)
    scale = np.max(np.abs(coeffs))
    roots = np.roots(coeffs / scale)
    used = [False] * len(roots)
    clusters = []
    for i, r in enumerate(roots):
        if used[i]:
            continue
        group = [r]
        used[i] = True
        for j in range(i + 1, len(roots)):
            if not used[j] and abs(roots[j] - r) <= max(cluster_tol, 1e-7 * abs(r)):
                group.append(roots[j])
                used[j] = True
        clusters.append(group)
    out = []
    for group in clusters:
        mean = complex(np.mean(group))
        if abs(mean.imag) > cluster_tol:
            continue
        u = mean.real
        if len(group) % 2 == 0:
            u = _newton(np.polyder(coeffs), u)
        else:
            u = _newton(coeffs, u)
        out.append((par.point_at(u), len(group) % 2 == 0))
    out.sort(key=lambda t: (t[0].x, t[0].y))
    return out


def similarity_mapping(center: Point2, src: Point2, dst: Point2) -> Similarity2:
    """The dilative rotation about ``center`` taking ``src`` to ``dst``."""
    a = src.as_complex() - center.as_complex()
    b = dst.as_complex() - center.as_complex()
    if abs(a) <= DEGENERACY_TOL or abs(b) <= DEGENERACY_TOL:
        raise DegenerateError("similarity point coincides with its center")
    f = b / a
    return Similarity2(center, abs(f), cmath.phase(f))


def polar_line(p: Point2, c: Circle2) -> Line2:
    """Polar of ``p`` with respect to ``c``: ``(p - O).(x - O) = r^2``."""
    a, b = p.x - c.center.x, p.y - c.center.y
    if math.hypot(a, b) <= DEGENERACY_TOL:
        raise DegenerateError("pole at the circle center")
    return Line2(a, b, -(a * c.center.x + b * c.center.y) - c.radius ** 2)


def pole_point(l: Line2, c: Circle2) -> Point2:
    """Inverse of :func:`polar_line`."""
    s = point_line_residual(c.center, l)
    if abs(s) <= DEGENERACY_TOL:
        raise DegenerateError("line through the circle center has no finite pole")
    lam = -c.radius ** 2 / s
    return Point2(c.center.x + lam * l.a, c.center.y + lam * l.b)
