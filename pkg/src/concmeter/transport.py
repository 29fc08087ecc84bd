"""The two push-forward maps: norm-ratio rescaling and radial transport.

norm_ratio_map rescales each point so that its L-norm equals its
K-norm, ``x -> x * |x|_K / |x|_L``; it carries any measure on the
K-sphere onto the L-sphere while moving points as little as the norm
gap forces.  Under the sandwich |.|_K <= |.|_L <= lam |.|_K it is
(2 lam + 1)-Lipschitz from the K-metric to the L-metric, which the
harness probes empirically.

radial_transport couples two radially symmetric measures through their
radial quantiles: u = F_target^{-1} o F_source is the unique monotone
map with u(0) = 0 matching the radial laws, and lifting it radially,
``x -> x * u(|x|) / |x|``, pushes one measure onto the other.  The map
is stored as a piecewise-linear interpolant with knots placed where
the source law has mass, plus a handle on the exact composition so the
Lipschitz constant can be resolved by local refinement (for
exponential-to-ball transports the steepest slope sits at the origin,
where fixed grids under-resolve).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .measures import RadialCdf, SampleBatch
from .normspace import NormSpec, norm_eval


# ---------------------------------------------------------------------------
# Norm-ratio map
# ---------------------------------------------------------------------------

def norm_ratio_map(K: NormSpec, L: NormSpec, x: np.ndarray) -> np.ndarray:
    """x * |x|_K / |x|_L for a vector or row-wise for a matrix; 0 -> 0."""
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    rows = x[None, :] if single else x
    rk = norm_eval(K, rows)
    rl = norm_eval(L, rows)
    ratio = np.divide(rk, rl, out=np.zeros_like(rk), where=rl > 0.0)
    out = rows * ratio[:, None]
    return out[0] if single else out


def ratio_map_lipschitz(K: NormSpec, L: NormSpec, points: np.ndarray, *,
                        pairs: int = 100000, seed: int = 0x11F,
                        perturbation_scale: Optional[float] = None) -> float:
    """Empirical sup of |pi(x) - pi(y)|_L / |x - y|_K over probe pairs.

    Half the pairs are independent point pairs, half are local
    perturbations of a point (scale ~ 1e-3 of the typical K-norm),
    which probe the worst-case local ratio.  Coincident pairs are
    skipped.
    """
    from . import rng

    points = np.asarray(points, dtype=np.float64)
    n_pts, dim = points.shape
    half = pairs // 2
    i_a = (rng.uniforms(seed, np.arange(pairs, dtype=np.uint64), 0, 0)
           * n_pts).astype(np.int64)
    i_b = (rng.uniforms(seed, np.arange(pairs, dtype=np.uint64), 1, 0)
           * n_pts).astype(np.int64)
    xa = points[i_a]
    xb = points[i_b].copy()

    if perturbation_scale is None:
        perturbation_scale = 1e-3 * float(np.median(norm_eval(K, points)))
    rows = np.arange(half, dtype=np.uint64)[:, None]
    cols = np.arange(dim, dtype=np.uint64)[None, :]
    noise = rng.normals(seed, rows, cols, 2)
    noise *= perturbation_scale / norm_eval(K, noise)[:, None]
    xb[:half] = xa[:half] + noise

    num = norm_eval(L, norm_ratio_map(K, L, xa) - norm_ratio_map(K, L, xb))
    den = norm_eval(K, xa - xb)
    ok = den > 0.0
    return float(np.max(num[ok] / den[ok]))


# ---------------------------------------------------------------------------
# Monotone radial maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonotoneMap:
    """Nondecreasing scalar map with u(0) = 0, stored piecewise-linear.

    Evaluation interpolates linearly between knots and extrapolates
    linearly with the last slope beyond them.  ``exact`` optionally
    holds the underlying closed-form map for local refinement.
    """

    knots: np.ndarray
    values: np.ndarray
    exact: Optional[Callable[[np.ndarray], np.ndarray]] = field(
        default=None, repr=False, compare=False)

    def __post_init__(self):
        k = np.asarray(self.knots, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        if k.ndim != 1 or k.shape != v.shape or k.size < 2:
            raise ValueError("knots/values must be 1-d arrays of equal length >= 2")
        if k[0] != 0.0 or v[0] != 0.0:
            raise ValueError("a monotone radial map must anchor u(0) = 0")
        if np.any(np.diff(k) <= 0.0):
            raise ValueError("knots must be strictly increasing")
        if np.any(np.diff(v) < -1e-12 * max(1.0, float(np.abs(v).max()))):
            raise ValueError("values must be nondecreasing")
        k.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "knots", k)
        object.__setattr__(self, "values", v)

    def __call__(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=np.float64)
        out = np.interp(r, self.knots, self.values)
        last_slope = ((self.values[-1] - self.values[-2])
                      / (self.knots[-1] - self.knots[-2]))
        beyond = r > self.knots[-1]
        out = np.where(beyond, self.values[-1] + (r - self.knots[-1]) * last_slope, out)
        return out

    def to_csv(self, path) -> None:
        np.savetxt(path, np.column_stack([self.knots, self.values]),
                   delimiter=",", fmt="%.17g", header="r,u", comments="")


def identity_map(r_max: float = 1.0, knots: int = 16) -> MonotoneMap:
    k = np.linspace(0.0, r_max, knots)
    return MonotoneMap(knots=k, values=k.copy(), exact=lambda r: np.asarray(r, float))


def radial_transport(F_source: RadialCdf, F_target: RadialCdf, *,
                     knots: int = 4096, tail: float = 1e-7) -> MonotoneMap:
    """Monotone map matching the radial quantiles of two measures.

    u = F_target.quantile o F_source.eval, sampled on the union of a
    quantile-spaced grid (dense wherever the source has mass) and a
    uniform grid, then thinned to at most ``knots`` knots.  Fails with
    a diagnostic if either CDF has flat stretches on the probed range
    (quantile matching needs strictly increasing laws).
    """
    q_lo, q_hi = tail, 1.0 - tail
    r_hi = float(F_source.quantile(np.asarray(q_hi)))
    if not np.isfinite(r_hi) or r_hi <= 0.0:
        raise ValueError("source radial law has no usable upper quantile")
    log_path = F_source.log_eval is not None and F_target.quantile_log is not None
    log_q_hi = math.log(q_hi)

    if log_path:
        def exact(r):
            lq = np.minimum(np.asarray(F_source.log_eval(r), dtype=np.float64),
                            log_q_hi)
            return np.asarray(F_target.quantile_log(lq), dtype=np.float64)
    else:
        def exact(r):
            q = np.clip(np.asarray(F_source.eval(r), dtype=np.float64), 0.0, q_hi)
            return np.asarray(F_target.quantile(q), dtype=np.float64)

    # seed grid: quantile-spaced with geometric tails, uniform, and
    # origin-resolving geometric points
    qs = np.unique(np.concatenate([np.linspace(q_lo, q_hi, knots // 8),
                                   np.geomspace(q_lo, 0.5, knots // 16),
                                   1.0 - np.geomspace(tail, 0.5, knots // 16)]))
    r_quant = np.asarray(F_source.quantile(qs), dtype=np.float64)
    r_unif = np.linspace(0.0, r_hi, knots // 8)
    r_geo = np.geomspace(max(r_hi * 1e-6, 1e-12), r_hi, knots // 16)
    grid = np.unique(np.concatenate([[0.0], r_quant, r_unif, r_geo]))
    grid = grid[(grid >= 0.0) & (grid <= r_hi)]
    if not log_path:
        # without the log path the plain CDF underflows near the origin;
        # knots there would carry denormal noise, so they are dropped and
        # the leading segment interpolates straight from (0, 0)
        q_at = np.asarray(F_source.eval(grid), dtype=np.float64)
        grid = grid[(grid == 0.0) | (q_at > 1e-280)]
    vals = exact(grid)
    vals[grid == 0.0] = 0.0

    # adaptive refinement: bisect every interval whose midpoint deviates
    # from the chord until the interpolant is uniformly tight or the
    # knot budget is exhausted
    span = float(vals[-1] - vals[0]) or 1.0
    tol = 2e-8 * span
    for _ in range(12):
        if grid.size >= knots:
            break
        mids = 0.5 * (grid[:-1] + grid[1:])
        vmids = exact(mids)
        gap = np.abs(vmids - 0.5 * (vals[:-1] + vals[1:]))
        need = (gap > tol) & (np.diff(grid) > 1e-12 * r_hi)
        if not need.any():
            break
        if grid.size + int(need.sum()) > knots:
            worst = np.argsort(gap * need)[::-1][: knots - grid.size]
            mask = np.zeros_like(need)
            mask[worst] = need[worst]
            need = mask
        order = np.argsort(np.concatenate([grid, mids[need]]))
        grid = np.concatenate([grid, mids[need]])[order]
        vals = np.concatenate([vals, vmids[need]])[order]

    if np.any(np.diff(vals) < 0.0):
        raise ValueError("quantile matching failed: target quantile not "
                         "monotone on the probed range (flat CDF region?)")
    flat_frac = float(np.mean(np.diff(vals) <= 0.0))
    if flat_frac > 0.2:
        raise ValueError("quantile matching failed: a CDF is flat on "
                         f"{flat_frac:.0%} of the probed range")
    keep = np.concatenate([[True], np.diff(grid) > 1e-12 * r_hi])
    grid, vals = grid[keep], vals[keep]
    vals = np.maximum.accumulate(vals)

    return MonotoneMap(knots=grid, values=vals, exact=exact)


def lipschitz_constant(u: MonotoneMap, *, refine_rounds: int = 3,
                       refine_points: int = 64) -> float:
    """Max slope of a monotone map, sharpened around the argmax.

    Starts from the knot-interval slopes, then zooms into the steepest
    interval with ``refine_rounds`` shrinking grids (factor 10 each),
    re-evaluating through the exact map when available.
    """
    k, v = u.knots, u.values
    if k.size < 3:
        raise ValueError("need at least 3 knots")
    slopes = np.diff(v) / np.diff(k)
    best = float(slopes.max())
    idx = int(slopes.argmax())
    lo, hi = float(k[idx]), float(k[idx + 1])
    fn = u.exact if u.exact is not None else u
    for _ in range(refine_rounds):
        grid = np.linspace(lo, hi, refine_points)
        vals = np.asarray(fn(grid), dtype=np.float64)
        s = np.diff(vals) / np.diff(grid)
        j = int(s.argmax())
        best = max(best, float(s.max()))
        width = (hi - lo) / 10.0
        center = 0.5 * (grid[j] + grid[j + 1])
        lo = max(lo, center - 0.5 * width)
        hi = min(hi, center + 0.5 * width)
    return best


def radial_map(u: MonotoneMap, L: NormSpec, x: np.ndarray) -> np.ndarray:
    """x * u(|x|_L) / |x|_L for a vector or row-wise matrix; 0 -> 0."""
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    rows = x[None, :] if single else x
    r = norm_eval(L, rows)
    scale = np.divide(u(r), r, out=np.zeros_like(r), where=r > 0.0)
    out = rows * scale[:, None]
    return out[0] if single else out


# ---------------------------------------------------------------------------
# Batch push-forward
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PushforwardBatch:
    """Image of a sample batch under a row-wise map."""

    source: SampleBatch
    image: np.ndarray = field(repr=False)
    descriptor: str = ""

    def __post_init__(self):
        if self.image.shape[0] != self.source.count:
            raise ValueError("push-forward must preserve the row count")
        self.image.setflags(write=False)

    @property
    def count(self) -> int:
        return self.image.shape[0]


def pushforward(map_rows: Callable[[np.ndarray], np.ndarray],
                batch: SampleBatch, descriptor: str = "") -> PushforwardBatch:
    """Apply a row-wise map; the image rows are an i.i.d. sample of the
    push-forward measure because they are the same rows, transformed."""
    image = np.asarray(map_rows(batch.data), dtype=np.float64)
    if image.ndim == 1:
        image = image[:, None]
    return PushforwardBatch(source=batch, image=image, descriptor=descriptor)
