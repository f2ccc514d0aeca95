"""Discrete measures on the group: energies, convolution, augmentation.

The truncated s-energy of a discrete measure mu = sum_i w_i delta_{x_i} is

    I_s^delta(mu) = sum_{i, j} w_i w_j / max(d(x_i, x_j), delta)^s,

diagonal included (each diagonal term contributes w_i^2 / delta^s).

Group convolution of discrete measures is the pushforward of the product
measure under (p, q) -> p * q; it is generally non-commutative and the
total mass multiplies.

augment_to_dim3 upgrades a (delta, t)-style measure to dimension s + t by
convolving with a random s-dimensional density: H is a Bernoulli sample
of the Euclidean grid delta Z^3 inside the unit gauge ball with inclusion
probability delta^-s / (2 |Z|), redrawn until |H| <= delta^-s (at most
max_retries times), and eta puts weight delta^s on each point of H.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ball_volume, gauge_norm, group_mul, heis_dist_trunc
from .sampling import make_rng


@dataclass
class DiscreteMeasure:
    """Finitely supported measure: atoms (n, 3) with nonnegative weights."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 3)
        self.weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if len(self.points) != len(self.weights):
            raise ValueError("points and weights length mismatch")
        if np.any(self.weights < 0) or not np.all(np.isfinite(self.weights)):
            raise ValueError("weights must be finite and nonnegative")

    def __len__(self):
        return len(self.points)

    @property
    def total_mass(self):
        return float(self.weights.sum())

    @classmethod
    def uniform(cls, points):
        points = np.asarray(points, dtype=float).reshape(-1, 3)
        n = len(points)
        return cls(points, np.full(n, 1.0 / n))


def riesz_energy(mu, s, delta, block=4096):
    """Truncated s-energy, evaluated in blocks; exact double sum."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    if delta <= 0:
        raise ValueError("delta must be positive")
    pts = mu.points
    w = mu.weights
    n = len(pts)
    total = 0.0
    for i in range(0, n, block):
        pi = pts[i:i + block]
        wi = w[i:i + block]
        # diagonal block
        d = heis_dist_trunc(pi[:, None, :], pi[None, :, :], delta)
        total += float((wi[:, None] * wi[None, :] / d ** s).sum())
        for j in range(i + block, n, block):
            d = heis_dist_trunc(pi[:, None, :], pts[None, j:j + block, :],
                                delta)
            total += 2.0 * float(
                (wi[:, None] * w[None, j:j + block] / d ** s).sum())
    return total


def heis_convolve(mu, nu, max_atoms=5_000_000):
    """Convolution mu * nu: atoms p * q with weights w_p w_q."""
    n = len(mu) * len(nu)
    if n > max_atoms:
        raise ValueError("convolution would produce %d atoms" % n)
    pts = group_mul(mu.points[:, None, :], nu.points[None, :, :]).reshape(-1, 3)
    w = (mu.weights[:, None] * nu.weights[None, :]).reshape(-1)
    return DiscreteMeasure(pts, w)


def ball_masses(mu, centers, radius):
    """mu(B(x, r)) for each center x, closed balls."""
    centers = np.asarray(centers, dtype=float).reshape(-1, 3)
    out = np.empty(len(centers))
    block = max(1, int(4e6 // max(len(mu), 1)))
    for i in range(0, len(centers), block):
        d = heis_dist_trunc(centers[i:i + block, None, :],
                            mu.points[None, :, :], 0.0)
        out[i:i + block] = (mu.weights[None, :] * (d <= radius)).sum(axis=1)
    return out


@dataclass
class GridDensity:
    """Density on an axis-aligned anisotropic grid.

    values[i, j, k] is the density on the cell with lower corner
    origin + (i, j, k) * spacing; cells are delta x delta x delta^2
    shaped for gauge work but the spacing is free.
    """

    origin: np.ndarray
    spacing: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.origin = np.asarray(self.origin, dtype=float).reshape(3)
        self.spacing = np.asarray(self.spacing, dtype=float).reshape(3)
        self.values = np.asarray(self.values, dtype=float)
        if np.any(self.spacing <= 0):
            raise ValueError("spacing must be positive")

    @property
    def cell_volume(self):
        return float(np.prod(self.spacing))

    @property
    def total_mass(self):
        return float(self.values.sum()) * self.cell_volume

    def occupied(self):
        """Centers and densities of the nonzero cells."""
        idx = np.argwhere(self.values > 0)
        centers = self.origin + (idx + 0.5) * self.spacing
        return centers, self.values[idx[:, 0], idx[:, 1], idx[:, 2]]


def rasterize(mu, spacing, origin=None, shape=None):
    """Bin a discrete measure onto a grid; density = cell mass / volume."""
    spacing = np.asarray(spacing, dtype=float).reshape(3)
    pts = mu.points
    if origin is None:
        origin = np.floor(pts.min(axis=0) / spacing) * spacing
    origin = np.asarray(origin, dtype=float).reshape(3)
    idx = np.floor((pts - origin) / spacing).astype(np.int64)
    if shape is None:
        shape = tuple(idx.max(axis=0) + 1)
    ok = np.all((idx >= 0) & (idx < np.array(shape)), axis=1)
    values = np.zeros(shape)
    np.add.at(values, (idx[ok, 0], idx[ok, 1], idx[ok, 2]), mu.weights[ok])
    return GridDensity(origin, spacing, values / float(np.prod(spacing)))


def delta_measure_report(grid, delta, C=1.0, max_cells=4096, seed=0):
    """Check the pointwise (delta, C) bound density <= C mu(B(x, delta)) / Leb(B(x, delta)).

    Evaluated at occupied cell centers (a seeded subsample beyond
    max_cells).  Returns the worst ratio density / (C * ball average).
    """
    centers, dens = grid.occupied()
    if len(centers) == 0:
        return {"passes": True, "max_ratio": 0.0, "cells": 0}
    if len(centers) > max_cells:
        rng = make_rng(seed)
        pick = rng.choice(len(centers), size=max_cells, replace=False)
    else:
        pick = np.arange(len(centers))
    vol = float(ball_volume(delta))
    cellvol = grid.cell_volume
    worst = 0.0
    block = max(1, int(4e6 // max(len(centers), 1)))
    for i in range(0, len(pick), block):
        sel = pick[i:i + block]
        d = heis_dist_trunc(centers[sel, None, :], centers[None, :, :], 0.0)
        mass = ((d <= delta) * dens[None, :]).sum(axis=1) * cellvol
        ratio = dens[sel] / (C * mass / vol)
        worst = max(worst, float(ratio.max()))
    return {"passes": worst <= 1.0 + 1e-9, "max_ratio": worst,
            "cells": int(len(centers))}


def layer_decomposition(mu, delta):
    """Split atoms by dyadic level of the local ball mass mu(B(x, delta)).

    Returns a list of (alpha, index_array, discardable) with
    alpha / 2 <= mu(B(x, delta)) <= alpha; layers with alpha <= delta^10
    are flagged discardable.
    """
    m = ball_masses(mu, mu.points, delta)
    levels = np.full(len(m), np.iinfo(np.int64).min, dtype=np.int64)
    pos = m > 0
    levels[pos] = np.ceil(np.log2(m[pos])).astype(np.int64)
    out = []
    for lev in np.unique(levels[pos]):
        idx = np.nonzero(levels == lev)[0]
        alpha = 2.0 ** float(lev)
        out.append((alpha, idx, alpha <= delta ** 10))
    return out


def grid_z(delta):
    """Euclidean grid Z = delta Z^3 intersected with the unit gauge ball."""
    k = int(math.floor(1.0 / delta)) + 1
    xs = np.arange(-k, k + 1) * delta
    X, Y, T = np.meshgrid(xs, xs, xs, indexing="ij")
    pts = np.stack([X.ravel(), Y.ravel(), T.ravel()], axis=1)
    return pts[gauge_norm(pts) <= 1.0]


def augment_to_dim3(mu, s, t, delta, seed=0, max_retries=64,
                    energies=True):
    """Convolve mu with a random s-dimensional Bernoulli grid measure.

    Draws H subset Z = delta Z^3 (unit ball) with inclusion probability
    delta^-s / (2 |Z|), retrying until |H| <= delta^-s; eta weights each
    point of H by delta^s.  Returns eta, eta * mu and an energy report
    comparing I_{s+t}(eta * mu) against I_t(mu).
    """
    if s <= 0 or t < 0:
        raise ValueError("need s > 0 and t >= 0")
    Z = grid_z(delta)
    nz = len(Z)
    target = delta ** -s
    prob = min(1.0, target / (2.0 * nz))
    rng = make_rng(seed)
    h_idx = None
    retries = 0
    for retries in range(max_retries + 1):
        mask = rng.random(nz) < prob
        if int(mask.sum()) <= target and int(mask.sum()) > 0:
            h_idx = np.nonzero(mask)[0]
            break
    if h_idx is None:
        raise RuntimeError("augmentation failed to draw |H| <= delta^-s "
                           "in %d retries" % max_retries)
    H = Z[h_idx]
    eta = DiscreteMeasure(H, np.full(len(H), delta ** s))
    conv = heis_convolve(eta, mu)
    report = {
        "grid_size": nz,
        "prob": prob,
        "H_size": len(H),
        "H_bound": target,
        "retries": retries,
        "expected_H": prob * nz,
    }
    if energies:
        report["energy_mu_t"] = riesz_energy(mu, t, delta)
        report["energy_conv_st"] = riesz_energy(conv, s + t, delta)
        denom = report["energy_mu_t"] * math.log(1.0 / delta) ** 2
        report["energy_ratio"] = report["energy_conv_st"] / denom
    return eta, conv, report
