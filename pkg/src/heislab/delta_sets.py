"""(delta, t, C)-sets of gauge balls: generators, verifier, file format.

A family of delta-separated centers P in the unit gauge ball is a
(delta, t, C)-set when for every center x and every radius r >= delta

    |P intersect B(x, r)|_delta  <=  C r^t |P|_delta.

Since the centers are delta-separated, counting centers inside B(x, r)
agrees with delta-covering numbers up to a bounded factor which is folded
into C; the verifier scans dyadic radii r = delta * 2^k only and
subsamples test centers for very large families.

Generators: the anisotropic lattice delta Z^2 x delta^2 Z inside the unit
ball (4-regular; spacings delta, delta, delta^2 are delta-separated since
||(0, 0, delta^2)|| = 2 delta), a vertical-plane coset slab of it
(3-regular), a random lattice subsample of delta^-3 points (3-regular,
spread in all coordinates), and sharpness examples: uniformly spaced
vertical-axis subsets of any dimension s <= 2, a planar Cantor set times
a vertical delta^2-grid, and a horizontal line of balls.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .core import gauge_norm, heis_dist
from .sampling import make_rng


@dataclass
class BallFamily:
    """delta-separated ball centers with a claimed regularity (t, C)."""

    centers: np.ndarray
    delta: float
    claimed_t: float
    claimed_C: float
    kind: str = "custom"

    def __post_init__(self):
        self.centers = np.asarray(self.centers, dtype=float).reshape(-1, 3)

    def __len__(self):
        return len(self.centers)

    def validate(self, max_pairs=20000, seed=0):
        """Check finiteness, containment in the unit ball and separation.

        Separation is checked exhaustively up to max_pairs centers and on
        a random pair subsample beyond that (the lattice generators are
        delta-separated by construction).
        """
        c = self.centers
        if not np.all(np.isfinite(c)):
            raise ValueError("centers must be finite")
        if not (0 < self.delta <= 0.5):
            raise ValueError("delta must lie in (0, 1/2]")
        if float(gauge_norm(c).max(initial=0.0)) > 1.0 + 1e-12:
            raise ValueError("centers must lie in the unit gauge ball")
        n = len(c)
        if n <= 1:
            return True
        if n <= max_pairs:
            block = 2048
            for i in range(0, n, block):
                d = heis_dist(c[i:i + block, None, :], c[None, :, :])
                rows = np.arange(i, min(i + block, n))
                d[np.arange(len(rows)), rows] = np.inf
                if float(d.min()) < self.delta - 1e-12:
                    raise ValueError("centers are not delta-separated")
        else:
            rng = make_rng(seed)
            ii = rng.integers(0, n, 200000)
            jj = rng.integers(0, n, 200000)
            keep = ii != jj
            d = heis_dist(c[ii[keep]], c[jj[keep]])
            if float(d.min()) < self.delta - 1e-12:
                raise ValueError("centers are not delta-separated")
        return True


def covering_number(points, delta):
    """Size of a greedy first-fit delta-net in the gauge metric.

    A 2-approximation of the covering number; constants are folded into
    the C of any (delta, t, C) statement built on it.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    if len(pts) == 0:
        return 0
    net = [pts[0]]
    net_arr = pts[0][None, :]
    for p in pts[1:]:
        if float(heis_dist(net_arr, p).min()) > delta:
            net.append(p)
            net_arr = np.asarray(net)
    return len(net)


def brute_force_min_cover(points, delta):
    """Exact minimum number of delta-balls centered at points covering them.

    Exponential search; intended as a small-input oracle (n <= 12).
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    n = len(pts)
    if n == 0:
        return 0
    if n > 14:
        raise ValueError("brute force cover limited to 14 points")
    cover = heis_dist(pts[:, None, :], pts[None, :, :]) <= delta + 1e-12
    for k in range(1, n + 1):
        for combo in itertools.combinations(range(n), k):
            if np.all(np.any(cover[list(combo)], axis=0)):
                return k
    return n


def verify_delta_t_set(family, max_centers=512, seed=0):
    """Scan dyadic radii and report the worst (delta, t, C) ratio.

    Counts |P intersect B(x, r)| over test centers x drawn from the
    family (all of them up to max_centers, a seeded subsample beyond).
    Passes iff max over (x, r) of count / (C r^t n) is at most 1.
    """
    c = family.centers
    n = len(c)
    if n == 0:
        raise ValueError("empty family")
    rng = make_rng(seed)
    if n > max_centers:
        test = c[rng.choice(n, size=max_centers, replace=False)]
    else:
        test = c
    radii = []
    r = family.delta
    while r <= 2.0:
        radii.append(r)
        r *= 2.0
    radii = np.asarray(radii)
    worst = 0.0
    witness = (None, None)
    block = max(1, int(4e6 // max(n, 1)))
    for i in range(0, len(test), block):
        d = heis_dist(test[i:i + block, None, :], c[None, :, :])
        for r in radii:
            counts = np.count_nonzero(d <= r, axis=1)
            ratios = counts / (family.claimed_C * r ** family.claimed_t * n)
            j = int(np.argmax(ratios))
            if ratios[j] > worst:
                worst = float(ratios[j])
                witness = (tuple(test[i + j]), float(r))
    return {
        "passes": worst <= 1.0,
        "max_ratio": worst,
        "witness_center": witness[0],
        "witness_radius": witness[1],
        "count": n,
        "delta": family.delta,
        "claimed_t": family.claimed_t,
        "claimed_C": family.claimed_C,
    }


def _lattice_points(delta, margin):
    k = int(math.floor(1.0 / delta)) + 1
    xs = np.arange(-k, k + 1) * delta
    m = int(math.floor(0.25 / delta ** 2)) + 1
    ts = np.arange(-m, m + 1) * delta ** 2
    X, Y, T = np.meshgrid(xs, xs, ts, indexing="ij")
    pts = np.stack([X.ravel(), Y.ravel(), T.ravel()], axis=1)
    return pts[gauge_norm(pts) <= 1.0 - margin]


def gen_heis_lattice(delta):
    """Anisotropic lattice delta Z^2 x delta^2 Z in the unit ball; 4-regular."""
    pts = _lattice_points(delta, margin=delta)
    return BallFamily(pts, delta, 4.0, 8.0, kind="heis-lattice")


def gen_lattice_slab(delta, x0=0.0):
    """Left coset of the vertical plane {x = 0} over the lattice; 3-regular.

    Points (x0, 0, 0) * (0, j delta, k delta^2); for x0 = 0 this is the
    plane grid itself.
    """
    k = int(math.floor(1.0 / delta)) + 1
    ys = np.arange(-k, k + 1) * delta
    m = int(math.floor(0.25 / delta ** 2)) + 1
    ts = np.arange(-m, m + 1) * delta ** 2
    Y, T = np.meshgrid(ys, ts, indexing="ij")
    pts = np.stack([np.full(Y.size, float(x0)), Y.ravel(),
                    T.ravel() + 0.5 * x0 * Y.ravel()], axis=1)
    pts = pts[gauge_norm(pts) <= 1.0 - delta]
    return BallFamily(pts, delta, 3.0, 8.0, kind="slab")


def gen_random3(delta, seed=0):
    """Random lattice subsample with ~delta^-3 points; (delta, 3)-set."""
    pts = _lattice_points(delta, margin=delta)
    target = min(len(pts), int(round(0.75 * delta ** -3)))
    rng = make_rng(seed)
    idx = rng.choice(len(pts), size=target, replace=False)
    return BallFamily(pts[np.sort(idx)], delta, 3.0, 8.0, kind="random3")


def gen_t_axis(delta, s=2.0):
    """Uniform vertical-axis centers of gauge dimension s <= 2.

    Spacing delta^s / 2 in t gives gauge separation sqrt(2) delta^(s/2)
    >= delta and exactly delta^-s points across t in [-1/4, 1/4].
    """
    if not 0 < s <= 2:
        raise ValueError("s must lie in (0, 2]")
    n = int(round(delta ** -s))
    spacing = 0.5 / n
    ts = -0.25 + (np.arange(n) + 0.5) * spacing
    pts = np.zeros((n, 3))
    pts[:, 2] = ts
    return BallFamily(pts, delta, float(s), 4.0, kind="t-axis")


def gen_horizontal_line(delta):
    """Balls along the horizontal x-axis; (delta, 1)-set."""
    k = int(math.floor(1.0 / delta))
    xs = np.arange(-k, k + 1) * delta
    pts = np.zeros((len(xs), 3))
    pts[:, 0] = xs
    return BallFamily(pts, delta, 1.0, 4.0, kind="horizontal-line")


def gen_product(delta, dim0=0.5):
    """Planar Cantor set of dimension dim0 times a vertical delta^2-grid.

    Four-map IFS with ratio 4^(-1/dim0) on [-c, c]^2, iterated while the
    level separation stays above delta; gauge dimension dim0 + 2.
    """
    if not 0 < dim0 < 2:
        raise ValueError("dim0 must lie in (0, 2)")
    rho = 4.0 ** (-1.0 / dim0)
    c = 0.3
    corners = np.array([[c, c], [c, -c], [-c, c], [-c, -c]])
    pts2 = np.zeros((1, 2))
    while True:
        nxt = (rho * pts2[:, None, :]
               + (1 - rho) * corners[None, :, :]).reshape(-1, 2)
        d = nxt[:, None, :] - nxt[None, :, :]
        sep = np.sqrt((d ** 2).sum(-1))
        sep[sep == 0] = np.inf
        if float(sep.min()) < delta or len(nxt) > 4096:
            break
        pts2 = nxt
    m = int(math.floor(0.25 / delta ** 2))
    ts = np.arange(-m, m + 1) * delta ** 2
    Z = np.repeat(pts2, len(ts), axis=0)
    pts = np.concatenate([Z, np.tile(ts, len(pts2))[:, None]], axis=1)
    pts = pts[gauge_norm(pts) <= 1.0 - delta]
    return BallFamily(pts, delta, dim0 + 2.0, 16.0, kind="product")


_GENERATORS = {
    "heis-lattice": lambda delta, **kw: gen_heis_lattice(delta),
    "slab": lambda delta, **kw: gen_lattice_slab(delta, kw.get("x0", 0.0)),
    "random3": lambda delta, **kw: gen_random3(delta, kw.get("seed", 0)),
    "t-axis": lambda delta, **kw: gen_t_axis(delta, kw.get("s", 2.0)),
    "horizontal-line": lambda delta, **kw: gen_horizontal_line(delta),
    "product": lambda delta, **kw: gen_product(delta, kw.get("dim0", 0.5)),
}


def generate(kind, delta, **kwargs):
    if kind not in _GENERATORS:
        raise ValueError("unknown family kind %r (choose from %s)"
                         % (kind, sorted(_GENERATORS)))
    return _GENERATORS[kind](delta, **kwargs)


def write_family(path, family):
    """Text format: header 'delta t C count', then one 'x y t' per center."""
    with open(path, "w") as fh:
        fh.write("%.17g %.17g %.17g %d\n"
                 % (family.delta, family.claimed_t, family.claimed_C,
                    len(family)))
        for x, y, t in family.centers:
            fh.write("%.17g %.17g %.17g\n" % (x, y, t))


def read_family(path):
    with open(path) as fh:
        head = fh.readline().split()
        if len(head) != 4:
            raise ValueError("bad family header")
        delta, t, C = float(head[0]), float(head[1]), float(head[2])
        count = int(head[3])
        rows = np.loadtxt(fh, dtype=float, ndmin=2)
    if rows.shape != (count, 3):
        raise ValueError("family body does not match header count")
    return BallFamily(rows, delta, t, C)
