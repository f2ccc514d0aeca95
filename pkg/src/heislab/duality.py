"""Point-line duality between horizontal lines and light rays.

Non-vertical horizontal lines are parametrized by (a, b, c):

    ell(a, b, c) = {(a s + b, s, (b / 2) s + c) : s in R},

and every point p = (x, y, t) has a dual light ray

    ell*(p) = (0, x, t - x y / 2) + L_y,   L_y(s) = (s, -s y, s y^2 / 2),

whose direction part L_y lies on the cone {z2^2 = 2 z1 z3}.  The duality
is the exact biconditional

    p lies on ell(a, b, c)   <=>   (a, b, c) lies on ell*(p),

both sides reducing to { a y + b = x,  (b / 2) y + c = t }.  The residual
vectors of the two predicates are related by an invertible triangular
transform, so the equivalence is exact, not approximate.

The pushforward m = ell_# Leb of Lebesgue measure on parameters is the
natural measure on lines; the X-ray transform integrates a density over a
line against arclength, with constant speed sqrt(1 + a^2 + b^2 / 4).

All predicates run exactly on Fraction/int inputs (tol=0) and to a
tolerance on floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sampling import make_rng


@dataclass(frozen=True)
class HorizontalLine:
    """Non-vertical horizontal line with parameters (a, b, c)."""

    a: object
    b: object
    c: object

    def point_at(self, s):
        return (self.a * s + self.b, s, self.b * s / 2 + self.c)

    def tangent(self):
        """Unnormalized tangent (a, 1, b/2); horizontal at every point."""
        return (self.a, 1, self.b / 2)

    def speed(self):
        return math.sqrt(1.0 + float(self.a) ** 2 + float(self.b) ** 2 / 4.0)


@dataclass(frozen=True)
class LightRay:
    """Dual ray (0, u, v) + L_y with L_y(s) = (s, -s y, s y^2 / 2)."""

    u: object
    v: object
    y: object

    def point_at(self, s):
        return (s, self.u - s * self.y, self.v + s * self.y ** 2 / 2)

    def direction(self, s=1):
        return (s, -s * self.y, s * self.y ** 2 / 2)


def line_of(pstar):
    """The line whose parameter point is pstar = (a, b, c)."""
    a, b, c = pstar
    return HorizontalLine(a, b, c)


def dual_ray(p):
    """The light ray dual to the point p = (x, y, t)."""
    x, y, t = p
    return LightRay(x, t - x * y / 2, y)


def on_cone(v, tol=0.0):
    """Membership of v in the cone {z2^2 = 2 z1 z3}."""
    z1, z2, z3 = v
    return abs(z2 * z2 - 2 * z1 * z3) <= tol


def line_residuals(p, line):
    """Residuals of { a y + b = x, (b/2) y + c = t }; exact on Fractions."""
    x, y, t = p
    return (x - (line.a * y + line.b), t - (line.b * y / 2 + line.c))


def ray_residuals(pstar, ray):
    """Residuals of pstar = (0, u, v) + L_y(a); exact on Fractions."""
    a, b, c = pstar
    return (b - (ray.u - a * ray.y), c - (ray.v + a * ray.y ** 2 / 2))


def incident_point_line(p, line, tol=1e-10):
    r1, r2 = line_residuals(p, line)
    return abs(r1) <= tol and abs(r2) <= tol


def incident_point_ray(pstar, ray, tol=1e-10):
    r1, r2 = ray_residuals(pstar, ray)
    return abs(r1) <= tol and abs(r2) <= tol


def residual_pair_arrays(points, pstars):
    """Both residual pairs for batched (p, pstar) rows, shape (n, 2) each.

    Row i pairs points[i] = (x, y, t) with pstars[i] = (a, b, c); the
    second pair is evaluated on the ray dual to points[i].
    """
    p = np.asarray(points, dtype=float).reshape(-1, 3)
    q = np.asarray(pstars, dtype=float).reshape(-1, 3)
    x, y, t = p[:, 0], p[:, 1], p[:, 2]
    a, b, c = q[:, 0], q[:, 1], q[:, 2]
    r1 = x - (a * y + b)
    r2 = t - (b * y / 2 + c)
    u = x
    v = t - x * y / 2
    s1 = b - (u - a * y)
    s2 = c - (v + a * y * y / 2)
    return np.stack([r1, r2], axis=1), np.stack([s1, s2], axis=1)


def line_measure(predicate, box_lo, box_hi, n, seed=0):
    """Monte Carlo m-measure of a set of lines.

    m is the pushforward of Lebesgue measure on parameters (a, b, c);
    predicate receives arrays (a, b, c) and returns a boolean mask.
    Returns (estimate, standard_error).
    """
    lo = np.asarray(box_lo, dtype=float)
    hi = np.asarray(box_hi, dtype=float)
    if np.any(hi <= lo):
        raise ValueError("box must have positive volume")
    rng = make_rng(seed)
    pts = rng.random((n, 3)) * (hi - lo) + lo
    hits = np.asarray(predicate(pts[:, 0], pts[:, 1], pts[:, 2]), dtype=float)
    vol = float(np.prod(hi - lo))
    est = vol * float(hits.mean())
    se = vol * float(hits.std(ddof=1)) / math.sqrt(n) if n > 1 else float("inf")
    return est, se


def angle_cone_mask(a, halfwidth=1.0):
    """Lines within the angular cone |a| <= halfwidth (45 degrees by default)."""
    return np.abs(np.asarray(a, dtype=float)) <= halfwidth


def xray_transform(density, line, step=None):
    """Arclength integral of a gridded density over a horizontal line.

    density must expose origin (3,), spacing (3,), values (nx, ny, nz);
    lookup is nearest-cell.  The quadrature step along the y-parameter
    defaults to half the smallest spacing.
    """
    origin = np.asarray(density.origin, dtype=float)
    spacing = np.asarray(density.spacing, dtype=float)
    values = density.values
    a, b, c = float(line.a), float(line.b), float(line.c)
    if step is None:
        step = float(spacing.min()) / 2.0
    y0 = origin[1]
    y1 = origin[1] + spacing[1] * values.shape[1]
    s = np.arange(y0 + step / 2.0, y1, step)
    pts = np.stack([a * s + b, s, (b / 2.0) * s + c], axis=1)
    idx = np.floor((pts - origin) / spacing).astype(np.int64)
    ok = np.all((idx >= 0) & (idx < np.array(values.shape)), axis=1)
    total = float(values[idx[ok, 0], idx[ok, 1], idx[ok, 2]].sum())
    speed = math.sqrt(1.0 + a * a + b * b / 4.0)
    return total * speed * step
