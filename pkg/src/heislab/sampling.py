"""Deterministic sampling helpers: Philox RNG and low-discrepancy ball clouds."""

from __future__ import annotations

import numpy as np
from scipy.stats import qmc

from .core import UNIT_BALL_VOLUME, dilate, group_mul

_BOX_LO = np.array([-1.0, -1.0, -0.25])
_BOX_SCALE = np.array([2.0, 2.0, 0.5])


def make_rng(seed):
    """Counter-based generator; reproducible independent of thread count."""
    return np.random.Generator(np.random.Philox(seed))


def _in_unit_ball(p):
    return (p[:, 0] ** 2 + p[:, 1] ** 2) ** 2 + 16.0 * p[:, 2] ** 2 <= 1.0


_halton_cache = {}


def unit_ball_points(n):
    """First n Halton points of the bounding box that land in the unit ball.

    Unscrambled Halton, so the cloud is deterministic and nested: the
    first n points of a longer cloud equal the n-point cloud.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    cached = _halton_cache.get("pts")
    if cached is None or len(cached) < n:
        # acceptance rate is V1 / box volume ~ 0.617
        draw = max(4096, int(n / 0.55) + 64)
        eng = qmc.Halton(d=3, scramble=False)
        pts = np.empty((0, 3))
        while len(pts) < n:
            raw = eng.random(draw) * _BOX_SCALE + _BOX_LO
            pts = np.concatenate([pts, raw[_in_unit_ball(raw)]])
        _halton_cache["pts"] = pts
        cached = pts
    return cached[:n].copy()


def ball_points(center, radius, n):
    """Low-discrepancy cloud in B(center, radius) = center * delta_r(B(1))."""
    u = unit_ball_points(n)
    return group_mul(np.asarray(center, dtype=float), dilate(radius, u))


def uniform_ball_points(n, rng, radius=1.0):
    """Uniform random points in the gauge ball B(0, radius) by rejection."""
    out = np.empty((0, 3))
    while len(out) < n:
        raw = rng.random((int((n - len(out)) / 0.55) + 16, 3)) * _BOX_SCALE + _BOX_LO
        out = np.concatenate([out, raw[_in_unit_ball(raw)]])
    return dilate(radius, out[:n])


def monte_carlo_ball_volume(n, seed=0):
    """Rejection estimate of the unit ball volume; oracle for UNIT_BALL_VOLUME."""
    rng = make_rng(seed)
    box_vol = float(np.prod(_BOX_SCALE))
    hits = 0
    done = 0
    while done < n:
        m = min(n - done, 4_000_000)
        raw = rng.random((m, 3)) * _BOX_SCALE + _BOX_LO
        hits += int(np.count_nonzero(_in_unit_ball(raw)))
        done += m
    return box_vol * hits / n


def quadrature_ball_volume(n=20000):
    """Cylindrical-coordinate quadrature of the unit ball volume.

    The t-extent at cylinder radius rho is sqrt(1 - rho^4) / 4, so the
    volume is int_0^1 pi rho sqrt(1 - rho^4) drho, evaluated with the
    midpoint rule (the closed form is pi^2 / 8).
    """
    rho = (np.arange(n) + 0.5) / n
    return float(np.pi * np.sum(rho * np.sqrt(1.0 - rho ** 4)) / n)
