"""Measure catalog: declarative specs, reproducible samplers, radial laws.

Families
--------
uniform_ball(K)   uniform probability on the unit body of a norm K.
cone_surface(K)   push-forward of uniform_ball(K) to the boundary by
                  x -> x / |x|_K; for the Euclidean ball this is Haar
                  measure on the sphere.
ggp(p)            product measure with per-coordinate density
                  c_p^{-1} exp(-|t|^p / p), c_p = 2 Gamma(1+1/p) p^(1/p),
                  for p in [1, 2].  p=1 is the symmetric exponential
                  product, p=2 the standard gaussian.
gaussian          alias of ggp(2).
haar_sphere       alias of cone_surface(l2).

Sampling constructions
----------------------
A ggp coordinate is sign * (p W)^(1/p) with W ~ Gamma(1/p, 1).  For the
lp ball, a ggp vector t plus one extra unit exponential Z gives

    x = t / (p (sum_k |t_k|^p / p + Z))^(1/p),

which is exactly uniform in the ball (the classical gaussian-plus-
exponential normalization at p=2).  The radial law of |x|_p is then
r^n, and of a ggp vector it is Gamma(n/p, 1) evaluated at r^p / p; both
closed forms are exposed through :func:`radial_cdf`.

Transformed bodies: if K carries a map T (|x|_K = |Tx|_p), the body is
T^{-1}(lp ball), so samples are base-body samples mapped through T^{-1}.

All samplers draw from the counter-based streams in :mod:`.rng`, keyed
by (seed, sample index, coordinate index), so batches are reproducible
bit-for-bit under any chunking of the sample range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import rng
from .normspace import INF, NormSpec, lp, norm_eval

FAMILIES = ("uniform_ball", "cone_surface", "ggp", "gaussian", "haar_sphere")

MAX_GAMMA_SHAPE = 2048.0

_SAMPLE_CHUNK = 16384


# ---------------------------------------------------------------------------
# Regularized lower incomplete gamma and its inverse
# ---------------------------------------------------------------------------

def _gamma_series_log(a: float, xs: np.ndarray) -> np.ndarray:
    """log P(a, x) for 0 < x < a + 1 via the ascending series.

    The series total is bounded by (a+1)/(a+1-x), so it never overflows,
    and working in logs keeps the result meaningful far below the double
    underflow threshold (radial transports need P down to e^-600).
    """
    term = np.ones_like(xs)
    total = np.ones_like(xs)
    k = 0.0
    while True:
        k += 1.0
        term = term * xs / (a + k)
        total += term
        if np.all(term <= 1e-17 * total) or k > 10000:
            break
    return np.log(total) + a * np.log(xs) - xs - math.lgamma(a + 1.0)


def _gamma_upper_cf(a: float, xs: np.ndarray) -> np.ndarray:
    """Q(a, x) for x >= a + 1 by the Lentz continued fraction."""
    tiny = 1e-300
    b = xs + 1.0 - a
    c = np.full_like(xs, 1e300)
    d = 1.0 / b
    h = d.copy()
    for i in range(1, 2000):
        an = -i * (i - a)
        b = b + 2.0
        d = an * d + b
        d = np.where(np.abs(d) < tiny, tiny, d)
        c = b + an / c
        c = np.where(np.abs(c) < tiny, tiny, c)
        d = 1.0 / d
        delta = d * c
        h *= delta
        if np.all(np.abs(delta - 1.0) < 4e-16):
            break
    return np.exp(a * np.log(xs) - xs - math.lgamma(a)) * h


def _check_gamma_args(shape: float, x) -> tuple[float, np.ndarray, bool]:
    a = float(shape)
    if not 0.0 < a <= MAX_GAMMA_SHAPE:
        raise ValueError(f"shape must be in (0, {MAX_GAMMA_SHAPE}], got {a}")
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x) | np.isposinf(x)):
        raise ValueError("non-finite input to gamma_cdf")
    if np.any(x < 0.0):
        raise ValueError("gamma_cdf requires x >= 0")
    return a, np.atleast_1d(x).copy(), x.ndim == 0


def gamma_cdf(shape: float, x) -> np.ndarray:
    """Regularized lower incomplete gamma P(shape, x), vectorized in x.

    Power series for x < shape + 1, Lentz continued fraction for the
    complement otherwise; absolute error <= 1e-12 on shape <= 2048.
    """
    a, x, single = _check_gamma_args(shape, x)
    out = np.zeros_like(x)
    out[np.isposinf(x)] = 1.0
    lo = (x > 0.0) & (x < a + 1.0)
    hi = np.isfinite(x) & (x >= a + 1.0)
    if np.any(lo):
        out[lo] = np.exp(_gamma_series_log(a, x[lo]))
    if np.any(hi):
        out[hi] = 1.0 - _gamma_upper_cf(a, x[hi])
    return out[0] if single else out


def gamma_log_cdf(shape: float, x) -> np.ndarray:
    """log of :func:`gamma_cdf`, exact deep into the lower tail."""
    a, x, single = _check_gamma_args(shape, x)
    out = np.full_like(x, -np.inf)
    out[np.isposinf(x)] = 0.0
    lo = (x > 0.0) & (x < a + 1.0)
    hi = np.isfinite(x) & (x >= a + 1.0)
    if np.any(lo):
        out[lo] = _gamma_series_log(a, x[lo])
    if np.any(hi):
        out[hi] = np.log1p(-_gamma_upper_cf(a, x[hi]))
    return out[0] if single else out


def gamma_quantile(shape: float, q) -> np.ndarray:
    """Inverse of :func:`gamma_cdf` in its second argument, by bisection."""
    a = float(shape)
    q = np.asarray(q, dtype=np.float64)
    single = q.ndim == 0
    q = np.atleast_1d(q)
    if np.any((q < 0.0) | (q >= 1.0)):
        raise ValueError("gamma_quantile requires q in [0, 1)")
    # bracket: the mean plus a generous multiple of the std always covers
    hi0 = a + 40.0 * math.sqrt(a) + 40.0
    lo = np.zeros_like(q)
    hi = np.full_like(q, hi0)
    grow = gamma_cdf(a, hi) < q
    while np.any(grow):
        hi[grow] *= 2.0
        grow = gamma_cdf(a, hi) < q
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        below = gamma_cdf(a, mid) < q
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all((hi - lo) <= 1e-14 * np.maximum(hi, 1.0)):
            break
    out = 0.5 * (lo + hi)
    out[q == 0.0] = 0.0
    return out[0] if single else out


def gamma_quantile_log(shape: float, log_q) -> np.ndarray:
    """Inverse of :func:`gamma_log_cdf`: x with log P(shape, x) = log_q.

    For log_q in the ordinary range this defers to the bisection solver;
    deep in the lower tail (where exp(log_q) would underflow) it solves
    the series form  log P = log S(x) + a log x - x - lgamma(a+1)  by
    fixed point in log x, which converges immediately because x is tiny.
    """
    a = float(shape)
    lq = np.asarray(log_q, dtype=np.float64)
    single = lq.ndim == 0
    lq = np.atleast_1d(lq).astype(np.float64)
    if np.any(lq > 0.0):
        raise ValueError("log_q must be <= 0")
    out = np.empty_like(lq)
    ordinary = lq > -600.0
    if np.any(ordinary):
        out[ordinary] = gamma_quantile(a, np.exp(lq[ordinary]))
    deep = ~ordinary & np.isfinite(lq)
    if np.any(deep):
        target = lq[deep] + math.lgamma(a + 1.0)
        x = np.exp(target / a)
        for _ in range(4):
            correction = x - np.log1p(x / (a + 1.0) * (1.0 + x / (a + 2.0)))
            x = np.exp((target + correction) / a)
        out[deep] = x
    out[np.isneginf(lq)] = 0.0
    return out[0] if single else out


def ggp_normalizer(p: float) -> float:
    """Per-coordinate normalizer c_p = 2 Gamma(1+1/p) p^(1/p)."""
    return 2.0 * math.gamma(1.0 + 1.0 / p) * p ** (1.0 / p)


# ---------------------------------------------------------------------------
# Measure specifications and sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeasureSpec:
    """Declarative description of one catalog measure."""

    family: str
    dim: int
    p: Optional[float] = None
    transform: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown measure family {self.family!r}")
        if self.dim < 1:
            raise ValueError("dim must be a positive integer")
        if self.family in ("uniform_ball", "cone_surface"):
            if self.p is None:
                raise ValueError(f"{self.family} requires an lp exponent")
            object.__setattr__(self, "p", float(self.p) if self.p != "inf" else INF)
        elif self.family == "ggp":
            if self.p is None or not (1.0 <= float(self.p) <= 2.0):
                raise ValueError("ggp requires p in [1, 2]")
            object.__setattr__(self, "p", float(self.p))
        if self.transform is not None:
            if self.family not in ("uniform_ball", "cone_surface"):
                raise ValueError(f"{self.family} does not accept a transform")
            # validation (invertibility, conditioning) delegated to NormSpec
            body = NormSpec(dim=self.dim, p=self.p, transform=self.transform)
            object.__setattr__(self, "transform", body.transform)

    @property
    def body_norm(self) -> Optional[NormSpec]:
        """The norm whose unit body carries the measure, when there is one."""
        if self.family in ("uniform_ball", "cone_surface"):
            return NormSpec(dim=self.dim, p=self.p, transform=self.transform)
        if self.family == "haar_sphere":
            return lp(2, self.dim)
        return None

    def to_config(self) -> dict:
        cfg = {"family": self.family, "dim": self.dim}
        if self.p is not None:
            cfg["p"] = "inf" if self.p == INF else self.p
        if self.transform is not None:
            cfg["transform"] = self.transform.tolist()
        return cfg

    @staticmethod
    def from_config(cfg: dict) -> "MeasureSpec":
        return MeasureSpec(family=cfg["family"], dim=int(cfg["dim"]),
                           p=cfg.get("p"), transform=cfg.get("transform"))


def uniform_ball(norm: NormSpec) -> MeasureSpec:
    return MeasureSpec("uniform_ball", norm.dim, norm.p, norm.transform)


def cone_surface(norm: NormSpec) -> MeasureSpec:
    return MeasureSpec("cone_surface", norm.dim, norm.p, norm.transform)


def ggp(p: float, dim: int) -> MeasureSpec:
    return MeasureSpec("ggp", dim, p)


def gaussian(dim: int) -> MeasureSpec:
    return MeasureSpec("gaussian", dim)


def haar_sphere(dim: int) -> MeasureSpec:
    return MeasureSpec("haar_sphere", dim)


@dataclass(frozen=True)
class SampleBatch:
    """Immutable N x dim matrix of samples plus its provenance."""

    measure: MeasureSpec
    seed: int
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.data.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    @property
    def count(self) -> int:
        return self.data.shape[0]


def _ggp_rows(p: float, seed: int, rows: np.ndarray, dim: int) -> np.ndarray:
    """Generalized-gaussian product rows; slot 0 = sign, 1.. = magnitude."""
    i = rows[:, None].astype(np.uint64)
    j = np.arange(dim, dtype=np.uint64)[None, :]
    sgn = rng.signs(seed, i, j, 0)
    if p == 1.0:
        mag = rng.exponentials(seed, i, j, 1)
    elif p == 2.0:
        mag = np.abs(rng.normals(seed, i, j, 1))
    else:
        w = rng.gammas(1.0 / p, seed, i, j, base_slot=1)
        mag = (p * w) ** (1.0 / p)
    return sgn * mag


def _generate(measure: MeasureSpec, seed: int, start: int, stop: int) -> np.ndarray:
    """Rows [start, stop) of the infinite sample table for (measure, seed)."""
    n = measure.dim
    rows = np.arange(start, stop, dtype=np.uint64)
    i = rows[:, None]
    j = np.arange(n, dtype=np.uint64)[None, :]
    fam, p = measure.family, measure.p

    if fam == "gaussian":
        return rng.normals(seed, i, j, 0)
    if fam == "haar_sphere":
        g = rng.normals(seed, i, j, 0)
        return g / np.linalg.norm(g, axis=1, keepdims=True)

    if fam == "ggp":
        return _ggp_rows(p, seed, rows, n)

    # ball / cone families: build in the plain-lp body, then pull back
    if p == INF:
        u = rng.uniforms(seed, i, j, 0)
        base = 2.0 * u - 1.0
        if fam == "cone_surface":
            base = base / np.abs(base).max(axis=1, keepdims=True)
    else:
        t = _ggp_rows(p, seed, rows, n)
        if fam == "cone_surface":
            base = t / ((np.abs(t) ** p).sum(axis=1, keepdims=True)) ** (1.0 / p)
        else:
            # one extra exponential per sample, on the virtual coordinate n
            z = rng.exponentials(seed, rows[:, None], np.uint64(n), 1)
            w_sum = (np.abs(t) ** p).sum(axis=1, keepdims=True) / p
            base = t / (p * (w_sum + z)) ** (1.0 / p)
    if measure.transform is not None:
        inv = np.linalg.inv(measure.transform)
        base = base @ inv.T
    return base


def sample(measure: MeasureSpec, count: int, seed: int) -> SampleBatch:
    """Draw an i.i.d. batch; identical (measure, count, seed) arguments
    reproduce identical bits regardless of chunking or worker count."""
    if count < 1:
        raise ValueError("count must be >= 1")
    blocks = [_generate(measure, seed, s, min(s + _SAMPLE_CHUNK, count))
              for s in range(0, count, _SAMPLE_CHUNK)]
    data = np.vstack(blocks)
    return SampleBatch(measure=measure, seed=seed, data=data)


def batch_to_csv(batch: SampleBatch, path) -> None:
    np.savetxt(path, batch.data, delimiter=",", fmt="%.17g")


# ---------------------------------------------------------------------------
# Radial CDFs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RadialCdf:
    """CDF/quantile pair of |x| under a measure, analytic or empirical.

    Analytic entries also expose the log CDF and a quantile that consumes
    log probabilities; quantile couplings between two such entries can
    then be composed entirely in log space, which keeps the coupling
    accurate deep in the lower tail where the plain CDF underflows.
    """

    eval: Callable[[np.ndarray], np.ndarray]
    quantile: Callable[[np.ndarray], np.ndarray]
    source: str
    median: float
    log_eval: Optional[Callable[[np.ndarray], np.ndarray]] = None
    quantile_log: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __call__(self, r):
        return self.eval(r)


def _norms_match(measure: MeasureSpec, norm: NormSpec) -> bool:
    body = measure.body_norm
    if body is None or body.p != norm.p:
        return False
    a = body.transform
    b = norm.transform
    if a is None and b is None:
        return True
    if a is None or b is None:
        return False
    return a.shape == b.shape and np.array_equal(a, b)


def radial_cdf(measure: MeasureSpec, norm: NormSpec, *, empirical_count: int = 100000,
               seed: int = 0xCDF) -> RadialCdf:
    """Law of |x|_norm under the measure.

    Analytic entries: uniform_ball with its own body norm has F(r) =
    min(r, 1)^n; a ggp/gaussian product measured in the matching plain
    lp norm has F(r) = P(Gamma(n/p) <= r^p / p).  Any other pairing
    falls back to the empirical CDF of a fresh sample, with midpoint
    plotting positions (i - 1/2) / N, and is flagged as such.
    """
    if measure.dim != norm.dim:
        raise ValueError("measure/norm dimension mismatch")
    n = measure.dim

    if measure.family == "uniform_ball" and _norms_match(measure, norm):
        def ball_eval(r):
            r = np.asarray(r, dtype=np.float64)
            return np.clip(r, 0.0, 1.0) ** n

        def ball_quantile(q):
            q = np.asarray(q, dtype=np.float64)
            return q ** (1.0 / n)

        def ball_log_eval(r):
            r = np.asarray(r, dtype=np.float64)
            with np.errstate(divide="ignore"):
                return n * np.log(np.clip(r, 0.0, 1.0))

        def ball_quantile_log(lq):
            return np.exp(np.asarray(lq, dtype=np.float64) / n)

        return RadialCdf(ball_eval, ball_quantile, source="analytic:ball",
                         median=2.0 ** (-1.0 / n), log_eval=ball_log_eval,
                         quantile_log=ball_quantile_log)

    fam_p = {"ggp": measure.p, "gaussian": 2.0}.get(measure.family)
    if fam_p is not None and norm.is_plain and norm.p == fam_p:
        p = fam_p
        shape = n / p

        def ggp_eval(r):
            r = np.asarray(r, dtype=np.float64)
            return gamma_cdf(shape, np.maximum(r, 0.0) ** p / p)

        def ggp_quantile(q):
            return (p * gamma_quantile(shape, q)) ** (1.0 / p)

        def ggp_log_eval(r):
            r = np.asarray(r, dtype=np.float64)
            return gamma_log_cdf(shape, np.maximum(r, 0.0) ** p / p)

        def ggp_quantile_log(lq):
            return (p * gamma_quantile_log(shape, lq)) ** (1.0 / p)

        return RadialCdf(ggp_eval, ggp_quantile, source="analytic:ggp",
                         median=float(ggp_quantile(0.5)), log_eval=ggp_log_eval,
                         quantile_log=ggp_quantile_log)

    batch = sample(measure, empirical_count, seed)
    radii = np.sort(norm_eval(norm, batch.data))
    pos = (np.arange(1, empirical_count + 1) - 0.5) / empirical_count

    def emp_eval(r):
        return np.interp(np.asarray(r, dtype=np.float64), radii, pos,
                         left=0.0, right=1.0)

    def emp_quantile(q):
        return np.interp(np.asarray(q, dtype=np.float64), pos, radii)

    return RadialCdf(emp_eval, emp_quantile, source="empirical",
                     median=float(np.median(radii)))
