"""Norm algebra: lp evaluation, dual norms, and containment constants.

A norm here is an lp norm, optionally composed with an invertible linear
map T, i.e. ``|x| = |T x|_p``.  The unit body of such a norm is the
preimage of the lp ball under T, which is how uniform-ball and
cone-surface samplers handle transformed bodies.

The containment constant of a pair (K, L) is the tightest sandwich

    scale * |x|_K  <=  |x|_L  <=  scale * lam * |x|_K        for all x,

so ``lam`` measures how far the two unit bodies are from being dilates
of each other.  For plain lp/lq pairs the constant is closed form (a
Holder computation); for transformed norms it is estimated from random
and vertex candidate directions and flagged as a heuristic lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import rng

MAX_CONDITION = 1e8

INF = float("inf")


def _as_p(p) -> float:
    if isinstance(p, str):
        if p.lower() in ("inf", "infinity", "linf"):
            return INF
        p = float(p)
    p = float(p)
    if not (p >= 1.0):
        raise ValueError(f"lp exponent must satisfy p >= 1, got {p}")
    return p


@dataclass(frozen=True)
class NormSpec:
    """An lp norm on R^dim, optionally precomposed with an invertible map."""

    dim: int
    p: float
    transform: Optional[np.ndarray] = None
    transform_inv: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be a positive integer")
        object.__setattr__(self, "p", _as_p(self.p))
        if self.transform is not None:
            t = np.array(self.transform, dtype=np.float64)
            if t.shape != (self.dim, self.dim):
                raise ValueError(f"transform must be {self.dim}x{self.dim}, got {t.shape}")
            cond = np.linalg.cond(t)
            if not np.isfinite(cond) or cond > MAX_CONDITION:
                raise ValueError(f"transform is singular or ill-conditioned (cond={cond:.3g})")
            t.setflags(write=False)
            inv = np.linalg.inv(t)
            inv.setflags(write=False)
            object.__setattr__(self, "transform", t)
            object.__setattr__(self, "transform_inv", inv)

    @property
    def is_plain(self) -> bool:
        return self.transform is None

    @property
    def condition_number(self) -> float:
        return 1.0 if self.transform is None else float(np.linalg.cond(self.transform))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return norm_eval(self, x)

    def to_config(self) -> dict:
        cfg = {"kind": "lp", "p": "inf" if self.p == INF else self.p, "dim": self.dim}
        if self.transform is not None:
            cfg["transform"] = self.transform.tolist()
        return cfg

    @staticmethod
    def from_config(cfg: dict) -> "NormSpec":
        if cfg.get("kind", "lp") != "lp":
            raise ValueError(f"unknown norm kind {cfg.get('kind')!r}")
        return NormSpec(dim=int(cfg["dim"]), p=_as_p(cfg["p"]),
                        transform=cfg.get("transform"))


def lp(p, dim: int) -> NormSpec:
    """Shorthand constructor for a plain lp norm."""
    return NormSpec(dim=dim, p=p)


def scaled(norm: NormSpec, factor: float) -> NormSpec:
    """The norm x -> factor * |x| (unit body shrinks by 1/factor)."""
    if not factor > 0:
        raise ValueError("scale factor must be positive")
    t = norm.transform if norm.transform is not None else np.eye(norm.dim)
    return NormSpec(dim=norm.dim, p=norm.p, transform=factor * t)


def norm_eval(norm: NormSpec, x: np.ndarray) -> np.ndarray:
    """|x| for a single vector or row-wise for an (N, dim) matrix.

    Finite-p evaluation rescales by the max coordinate before
    exponentiating, so large p cannot overflow.
    """
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.shape[1] != norm.dim:
        raise ValueError(f"dimension mismatch: norm has dim {norm.dim}, input has {x.shape[1]}")
    if not np.all(np.isfinite(x)):
        raise ValueError("non-finite input component")
    if norm.transform is not None:
        x = x @ norm.transform.T
    ax = np.abs(x)
    m = ax.max(axis=1)
    if norm.p == INF:
        out = m
    else:
        safe = np.where(m > 0.0, m, 1.0)[:, None]
        out = m * ((ax / safe) ** norm.p).sum(axis=1) ** (1.0 / norm.p)
    return out[0] if single else out


def dual_norm(norm: NormSpec) -> NormSpec:
    """The dual norm: conjugate exponent, inverse-transpose transform."""
    p = norm.p
    if p == 1.0:
        q = INF
    elif p == INF:
        q = 1.0
    else:
        q = p / (p - 1.0)
    t = None if norm.transform is None else norm.transform_inv.T
    return NormSpec(dim=norm.dim, p=q, transform=t)


@dataclass(frozen=True)
class ContainmentConstant:
    """Constants of the sandwich scale*|x|_K <= |x|_L <= scale*lam*|x|_K."""

    lam: float
    scale: float
    exact: bool

    def __post_init__(self):
        if not (self.lam >= 1.0 - 1e-12):
            raise ValueError(f"containment lam must be >= 1, got {self.lam}")
        if not self.scale > 0:
            raise ValueError("containment scale must be positive")


def _candidate_directions(dim: int, count: int, seed: int) -> np.ndarray:
    """Random gaussian directions plus lp extreme candidates."""
    rows = np.arange(count, dtype=np.uint64)[:, None]
    cols = np.arange(dim, dtype=np.uint64)[None, :]
    dirs = rng.normals(seed, rows, cols, 0)
    extremes = [np.eye(dim), np.ones((1, dim))]
    # sign-flip diagonals probe the corners that pure axes miss
    alt = np.ones(dim)
    alt[1::2] = -1.0
    extremes.append(alt[None, :])
    return np.vstack([dirs] + extremes)


def containment_constant(K: NormSpec, L: NormSpec, *, directions: int = 4096,
                         seed: int = 0x5EED) -> ContainmentConstant:
    """Tightest sandwich constants between two norms.

    Plain lp/lq pairs get the exact Holder constants.  Anything with a
    transform falls back to maximizing/minimizing |x|_L / |x|_K over
    candidate directions; the resulting lam is a lower bound on the true
    constant and is flagged ``exact=False``.
    """
    if K.dim != L.dim:
        raise ValueError(f"dimension mismatch: {K.dim} vs {L.dim}")
    n = K.dim
    if K.is_plain and L.is_plain:
        p, q = K.p, L.p
        inv_p = 0.0 if p == INF else 1.0 / p
        inv_q = 0.0 if q == INF else 1.0 / q
        if inv_p >= inv_q:
            # |x|_q <= |x|_p <= n^(1/p-1/q) |x|_q
            scale = float(n) ** (inv_q - inv_p)
            lam = float(n) ** (inv_p - inv_q)
        else:
            # |x|_p <= |x|_q <= n^(1/q-1/p) |x|_p
            scale = 1.0
            lam = float(n) ** (inv_q - inv_p)
        return ContainmentConstant(lam=lam, scale=scale, exact=True)

    cand = _candidate_directions(n, directions, seed)
    ratios = norm_eval(L, cand) / norm_eval(K, cand)
    scale = float(ratios.min())
    lam = float(ratios.max() / ratios.min())
    return ContainmentConstant(lam=max(lam, 1.0), scale=scale, exact=False)


def normalize_containment(K: NormSpec, L: NormSpec, **kwargs):
    """Rescale L so that |x|_K <= |x|_L' <= lam |x|_K holds with scale 1.

    Returns ``(L_rescaled, constant)`` where the constant carries the
    original scale for reporting.
    """
    cc = containment_constant(K, L, **kwargs)
    L_r = L if abs(cc.scale - 1.0) < 1e-15 else scaled(L, 1.0 / cc.scale)
    return L_r, cc
