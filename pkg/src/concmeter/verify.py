"""Inequality checks: hypothesis, both sides, zero-violation accounting.

Each check re-creates one transfer statement numerically: it samples
the source measure, builds the push-forward (or probe sets) it needs,
computes the left side from the sound lower-bound estimator and the
right side from an analytic profile, and emits a CheckReport.  Grid
points where the statement's smallness precondition fails under the
profile are excluded from violation counts but listed.  Empirical
medians stand in for true medians, with their CI propagated into the
comparison slack by finite differences on the profile.

Left sides always come from the half-space estimator (a lower bound of
the true concentration function) and right sides from profiles (upper
bounds), so every comparison is one-sided: a violation indicates a
real bug or a false profile, never Monte Carlo bad luck beyond CI.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import rng
from .concentration import (AnalyticProfile, analytic_profile,
                            concentration_lower_curve, empirical_median)
from .measures import MeasureSpec, ggp, haar_sphere, radial_cdf, sample, uniform_ball
from .normspace import (NormSpec, dual_norm, lp, norm_eval,
                        normalize_containment)
from .parameters import cube_concentration_floor, embedding_lower_bound
from .transport import (lipschitz_constant, norm_ratio_map, pushforward,
                        radial_map, radial_transport, ratio_map_lipschitz)

_ALGEBRAIC_TOL = 1e-9


class CheckError(RuntimeError):
    """A check could not be run (failed hypothesis, bad inputs)."""


@dataclass(frozen=True)
class CheckReport:
    """Machine-readable verdict of one inequality check."""

    check_id: str
    inputs: dict
    quantities: dict
    eps: list
    lhs: list
    rhs: list
    ci: list
    slack: list
    precondition: list
    relation: str               # "le": lhs - ci <= rhs + slack ; "ge": lhs + ci >= rhs - slack
    violations: int
    worst_margin: float         # max signed violation margin over admitted points
    verdict: str                # "pass" | "fail" | "not-applicable"
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "inputs": self.inputs,
            "quantities": self.quantities,
            "grid": {
                "eps": list(self.eps),
                "lhs": list(self.lhs),
                "rhs": list(self.rhs),
                "ci": list(self.ci),
                "slack": list(self.slack),
                "precondition": [bool(b) for b in self.precondition],
                "relation": self.relation,
            },
            "violations": {"count": self.violations, "worst_margin": self.worst_margin},
            "verdict": self.verdict,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _finish(check_id: str, inputs: dict, quantities: dict, eps, lhs, rhs, ci,
            slack, precondition, relation: str, notes=()) -> CheckReport:
    eps = np.asarray(eps, dtype=np.float64)
    lhs = np.asarray(lhs, dtype=np.float64)
    rhs = np.asarray(rhs, dtype=np.float64)
    ci = np.broadcast_to(np.asarray(ci, dtype=np.float64), eps.shape)
    slack = np.broadcast_to(np.asarray(slack, dtype=np.float64), eps.shape)
    pre = np.broadcast_to(np.asarray(precondition, dtype=bool), eps.shape)

    if relation == "le":
        margin = (lhs - ci) - (rhs + slack)
    elif relation == "ge":
        margin = (rhs - slack) - (lhs + ci)
    else:
        raise ValueError(f"unknown relation {relation!r}")
    admitted = margin[pre]
    violations = int((admitted > 0.0).sum())
    worst = float(admitted.max()) if admitted.size else float("nan")
    if not pre.any():
        verdict = "not-applicable"
    else:
        verdict = "pass" if violations == 0 else "fail"
    return CheckReport(check_id=check_id, inputs=inputs, quantities=quantities,
                       eps=eps.tolist(), lhs=lhs.tolist(), rhs=rhs.tolist(),
                       ci=ci.tolist(), slack=slack.tolist(),
                       precondition=pre.tolist(), relation=relation,
                       violations=violations, worst_margin=worst,
                       verdict=verdict, notes=list(notes))


def _median_slack(rhs_fn: Callable[..., np.ndarray], medians: dict) -> np.ndarray:
    """CI propagation: sum over medians of |d rhs / d m| * ci by central
    finite differences at the CI half-width."""
    base = {k: est.value for k, est in medians.items()}
    total = np.zeros_like(np.asarray(rhs_fn(**base), dtype=np.float64))
    for key, est in medians.items():
        h = est.half_width
        if h == 0.0:
            continue
        up = dict(base, **{key: est.value + h})
        dn = dict(base, **{key: max(est.value - h, 1e-300)})
        total += 0.5 * np.abs(np.asarray(rhs_fn(**up)) - np.asarray(rhs_fn(**dn)))
    return total


def _resolve_profile(profile, n: int) -> AnalyticProfile:
    if isinstance(profile, AnalyticProfile):
        return profile
    if isinstance(profile, str):
        return analytic_profile(profile, n)
    if isinstance(profile, dict):
        return analytic_profile(profile.get("name", "custom"), n,
                                C=profile.get("C"), c=profile.get("c"))
    raise ValueError(f"cannot interpret profile spec {profile!r}")


# ---------------------------------------------------------------------------
# Lipschitz transfer through an arbitrary map
# ---------------------------------------------------------------------------

def build_map(cfg: dict, dim: int) -> tuple[Callable[[np.ndarray], np.ndarray], int, str]:
    """Row-wise map from a config descriptor; returns (fn, out_dim, label)."""
    kind = cfg.get("kind")
    if kind == "identity":
        return (lambda x: x), dim, "identity"
    if kind == "scale":
        factor = float(cfg["factor"])
        return (lambda x: factor * x), dim, f"scale:{factor}"
    if kind == "coordinate":
        index = int(cfg.get("index", 0))
        return (lambda x: x[:, index:index + 1]), 1, f"coordinate:{index}"
    raise ValueError(f"unknown map kind {cfg.get('kind')!r}")


def check_lipschitz_transfer(*, measure: MeasureSpec, map_cfg: dict, lip: float,
                             metric_in: NormSpec, metric_out: Optional[NormSpec] = None,
                             eps_grid: Sequence[float], count: int = 100000,
                             seed: int = 1, profile="gaussian") -> CheckReport:
    """Push-forward through an L-Lipschitz map can only slow concentration
    down by the factor L: image curve at r versus source profile at r/L."""
    if lip <= 0.0:
        raise CheckError("Lipschitz constant must be positive")
    map_rows, out_dim, label = build_map(map_cfg, measure.dim)
    metric_out = metric_out if metric_out is not None else lp(metric_in.p, out_dim)
    prof = _resolve_profile(profile, measure.dim)

    batch = sample(measure, count, seed)
    # empirical Lipschitz pre-check on probe pairs
    m = min(20000, count)
    idx_a = (rng.uniforms(seed, np.arange(m, dtype=np.uint64), 0, 7) * count).astype(np.int64)
    idx_b = (rng.uniforms(seed, np.arange(m, dtype=np.uint64), 1, 7) * count).astype(np.int64)
    fa = np.atleast_2d(map_rows(batch.data[idx_a]))
    fb = np.atleast_2d(map_rows(batch.data[idx_b]))
    den = norm_eval(metric_in, batch.data[idx_a] - batch.data[idx_b])
    num = norm_eval(metric_out, fa - fb)
    ok = den > 0.0
    emp_lip = float(np.max(num[ok] / den[ok])) if ok.any() else 0.0
    if emp_lip > lip * (1.0 + 1e-9):
        raise CheckError(f"map is not {lip}-Lipschitz on samples: observed {emp_lip}")

    image = pushforward(map_rows, batch, descriptor=label)
    eps_grid = np.asarray(eps_grid, dtype=np.float64)
    curve = concentration_lower_curve(image.image, metric_out, eps_grid,
                                      direction_seed=rng.derive_seed(seed, 0xD17))
    rhs = prof(eps_grid / lip)
    inputs = {"measure": measure.to_config(), "map": label, "lip": lip,
              "metric_in": metric_in.to_config(), "metric_out": metric_out.to_config(),
              "count": count, "seed": seed, "eps": eps_grid.tolist(),
              "profile": prof.to_config()}
    quantities = {"empirical_lipschitz": emp_lip, "family_size": curve.family_size}
    return _finish("lipschitz_transfer", inputs, quantities, eps_grid,
                   curve.alpha_hat, rhs, curve.ci, 0.0, True, "le")


# ---------------------------------------------------------------------------
# Norm-ratio transfer
# ---------------------------------------------------------------------------

def check_norm_ratio_transfer(*, K: NormSpec, L: NormSpec, measure: MeasureSpec,
                              eps_grid: Sequence[float], count: int = 100000,
                              seed: int = 1, profile="sphere") -> CheckReport:
    """Concentration of the norm-ratio push-forward, against the source
    profile slowed by 14 lam m_K / m_L, on the grid points where the
    smallness precondition (16 x profile at the 7-scale) holds."""
    L_r, cc = normalize_containment(K, L)
    prof = _resolve_profile(profile, measure.dim)
    batch = sample(measure, count, seed)

    vk = norm_eval(K, batch.data)
    vl = norm_eval(L_r, batch.data)
    med_k = empirical_median(vk)
    med_l = empirical_median(vl)
    if med_k.value <= 0.0:
        raise CheckError("the source measure must give the K-norm a positive median")

    image = pushforward(lambda x: norm_ratio_map(K, L_r, x), batch,
                        descriptor="norm_ratio")
    eps_grid = np.asarray(eps_grid, dtype=np.float64)
    curve = concentration_lower_curve(image.image, L_r, eps_grid,
                                      direction_seed=rng.derive_seed(seed, 0xD17))

    def rhs_fn(m_k, m_l, scale=14.0):
        return 16.0 * prof(eps_grid * m_l / (scale * cc.lam * m_k))

    rhs = rhs_fn(med_k.value, med_l.value)
    pre = 16.0 * prof(eps_grid * med_l.value / (7.0 * cc.lam * med_k.value)) <= 1.0
    slack = _median_slack(lambda m_k, m_l: rhs_fn(m_k, m_l),
                          {"m_k": med_k, "m_l": med_l})

    inputs = {"K": K.to_config(), "L": L.to_config(), "measure": measure.to_config(),
              "count": count, "seed": seed, "eps": eps_grid.tolist(),
              "profile": prof.to_config()}
    quantities = {"lambda": cc.lam, "containment_scale": cc.scale,
                  "exact_lambda": cc.exact, "median_K": med_k.value,
                  "median_K_ci": med_k.half_width, "median_L": med_l.value,
                  "median_L_ci": med_l.half_width, "family_size": curve.family_size}
    notes = ["lhs is a statistical lower bound of the image concentration function"]
    return _finish("norm_ratio_transfer", inputs, quantities, eps_grid,
                   curve.alpha_hat, rhs, curve.ci, slack, pre, "le", notes)


# ---------------------------------------------------------------------------
# Shell-inclusion chain (pointwise, zero tolerance)
# ---------------------------------------------------------------------------

def check_shell_inclusion(*, K: NormSpec, L: NormSpec, measure: MeasureSpec,
                          eps: float, count: int = 100000, probes: int = 100000,
                          seed: int = 1) -> CheckReport:
    """Pointwise chain behind the norm-ratio transfer: any point within
    delta m_L / lam (K-distance) of the median-shell preimage of a target
    half-space maps within 7 delta m_K of it, hence into the eps-expansion.

    The chain is algebra, not statistics: the admitted violation count is
    exactly zero (up to float round-off).
    """
    if eps <= 0.0:
        raise CheckError("eps must be positive")
    L_r, cc = normalize_containment(K, L)
    lam = cc.lam
    batch = sample(measure, count, seed)
    vk = norm_eval(K, batch.data)
    vl = norm_eval(L_r, batch.data)
    med_k = empirical_median(vk).value
    med_l = empirical_median(vl).value
    delta = eps / (7.0 * med_k)
    radius = delta * med_l / lam

    image = norm_ratio_map(K, L_r, batch.data)
    n = measure.dim
    theta = rng.normals(rng.derive_seed(seed, 0xA0), 0, np.arange(n, dtype=np.uint64), 0)
    proj = image @ theta
    t_cut = float(np.median(proj))
    dual_w = float(norm_eval(dual_norm(L_r), theta))

    shell_l = np.abs(vl - med_l) < delta * med_l
    shell_k = np.abs(vk - med_k) < delta * med_k
    in_a = proj <= t_cut
    members = np.flatnonzero(shell_l & shell_k & in_a)
    inputs = {"K": K.to_config(), "L": L.to_config(), "measure": measure.to_config(),
              "eps": eps, "count": count, "probes": probes, "seed": seed}
    quantities = {"lambda": lam, "median_K": med_k, "median_L": med_l,
                  "delta": delta, "probe_radius": radius,
                  "shell_set_size": int(members.size)}
    if members.size == 0:
        return _finish("shell_inclusion", inputs, quantities, [eps], [0.0],
                       [eps], [0.0], [0.0], [False], "le",
                       ["shell preimage set is empirically empty"])

    pseed = rng.derive_seed(seed, 0xB1)
    pick = (rng.uniforms(pseed, np.arange(probes, dtype=np.uint64), 0, 0)
            * members.size).astype(np.int64)
    y = batch.data[members[pick]]

    cols = np.arange(n, dtype=np.uint64)[None, :]
    direction = rng.normals(pseed, np.arange(probes, dtype=np.uint64)[:, None], cols, 1)
    direction /= norm_eval(K, direction)[:, None]
    scale_u = rng.uniforms(pseed, np.arange(probes, dtype=np.uint64), 0, 3)
    # half the probes sit exactly on the K-ball boundary, the worst case;
    # a slice is collinear with y and a slice repeats y itself
    scale_u[: probes // 2] = 1.0
    x = y + direction * (radius * scale_u)[:, None]
    n_col = probes // 10
    yk = norm_eval(K, y[-n_col:])
    x[-n_col:] = y[-n_col:] * (1.0 + radius / yk)[:, None]
    x[probes // 2: probes // 2 + n_col] = y[probes // 2: probes // 2 + n_col]

    pix = norm_ratio_map(K, L_r, x)
    piy = norm_ratio_map(K, L_r, y)
    moved = norm_eval(L_r, pix - piy)
    bound = 7.0 * delta * med_k
    tol = _ALGEBRAIC_TOL * max(bound, 1.0)
    bad_move = moved > bound + tol
    overshoot = pix @ theta - (t_cut + eps * dual_w)
    bad_member = overshoot > tol
    violations = int(bad_move.sum() + bad_member.sum())

    quantities.update({"max_displacement": float(moved.max()),
                       "displacement_bound": bound,
                       "membership_failures": int(bad_member.sum())})
    # grid rows summarize the two probe-wise assertions; the violation
    # count is per probe, not per row
    lhs = [float(moved.max()), float(overshoot.max())]
    rhs = [bound + tol, tol]
    margins = [lhs[0] - rhs[0], lhs[1] - rhs[1]]
    return CheckReport(
        check_id="shell_inclusion", inputs=inputs, quantities=quantities,
        eps=[eps, eps], lhs=lhs, rhs=rhs, ci=[0.0, 0.0], slack=[0.0, 0.0],
        precondition=[True, True], relation="le", violations=violations,
        worst_margin=float(max(margins)),
        verdict="pass" if violations == 0 else "fail",
        notes=["pointwise algebraic chain; zero tolerance beyond round-off"])


# ---------------------------------------------------------------------------
# Two-set product bound
# ---------------------------------------------------------------------------

def check_separated_sets(*, measure: MeasureSpec, metric: NormSpec,
                         num_pairs: int = 1000, count: int = 100000,
                         seed: int = 1, profile="sphere") -> CheckReport:
    """Product of the masses of two sets against 4 x profile at half
    their distance, over random parallel half-space pairs whose metric
    distance is exact through the dual norm."""
    prof = _resolve_profile(profile, measure.dim)
    batch = sample(measure, count, seed)
    n = measure.dim
    dseed = rng.derive_seed(seed, 0xC2)
    cols = np.arange(n, dtype=np.uint64)[None, :]
    thetas = rng.normals(dseed, np.arange(num_pairs, dtype=np.uint64)[:, None], cols, 0)
    q_lo = 0.02 + 0.43 * rng.uniforms(dseed, np.arange(num_pairs, dtype=np.uint64), 0, 2)
    q_hi = 0.55 + 0.43 * rng.uniforms(dseed, np.arange(num_pairs, dtype=np.uint64), 1, 2)

    dual = dual_norm(metric)
    lhs = np.empty(num_pairs)
    ci = np.empty(num_pairs)
    half_dist = np.empty(num_pairs)
    for k in range(num_pairs):
        s = batch.data @ thetas[k]
        a = np.quantile(s, q_lo[k])
        b = np.quantile(s, q_hi[k])
        pa = float((s <= a).mean())
        pb = float((s >= b).mean())
        lhs[k] = pa * pb
        var = (pb * pb * pa * (1 - pa) + pa * pa * pb * (1 - pb)) / count
        ci[k] = 1.96 * math.sqrt(max(var, 0.0)) + 1.0 / count
        gap = max(b - a, 0.0)
        half_dist[k] = 0.5 * gap / float(norm_eval(dual, thetas[k]))
    order = np.argsort(half_dist)
    rhs = prof(half_dist)

    inputs = {"measure": measure.to_config(), "metric": metric.to_config(),
              "num_pairs": num_pairs, "count": count, "seed": seed,
              "profile": prof.to_config()}
    quantities = {"max_product": float(lhs.max()),
                  "min_half_distance": float(half_dist.min()),
                  "max_half_distance": float(half_dist.max())}
    return _finish("separated_sets", inputs, quantities, half_dist[order],
                   lhs[order], 4.0 * rhs[order], ci[order], 0.0, True, "le")


# ---------------------------------------------------------------------------
# Cube floor
# ---------------------------------------------------------------------------

def check_cube_floor(*, n: int, eps_grid: Sequence[float], count: int = 100000,
                     seed: int = 1, measure: Optional[MeasureSpec] = None
                     ) -> CheckReport:
    """No symmetric measure on the cube concentrates past (1 - mass of
    the eps-cube) / 2n; the half-space estimator must clear that floor."""
    measure = measure if measure is not None else uniform_ball(lp(math.inf, n))
    metric = lp(math.inf, n)
    batch = sample(measure, count, seed)
    sup_norm = norm_eval(metric, batch.data)
    if float(sup_norm.max()) > 1.0 + 1e-12:
        raise CheckError("measure is not supported on the unit cube")

    eps_grid = np.asarray(eps_grid, dtype=np.float64)
    curve = concentration_lower_curve(batch.data, metric, eps_grid,
                                      direction_seed=rng.derive_seed(seed, 0xD17))
    small_mass = np.array([(sup_norm <= e).mean() for e in eps_grid])
    floor = np.array([cube_concentration_floor(m, n) for m in small_mass])

    inputs = {"n": n, "measure": measure.to_config(), "count": count,
              "seed": seed, "eps": eps_grid.tolist()}
    quantities = {"family_size": curve.family_size,
                  "small_ball_mass": small_mass.tolist()}
    return _finish("cube_floor", inputs, quantities, eps_grid, curve.alpha_hat,
                   floor, curve.ci, 0.0, True, "ge",
                   ["floor uses the empirical eps-cube mass"])


# ---------------------------------------------------------------------------
# Sup-norm embedding bound
# ---------------------------------------------------------------------------

def check_sup_embedding(*, K: NormSpec, measure: MeasureSpec,
                        functionals: np.ndarray, d: float,
                        eps_grid: Sequence[float], count: int = 100000,
                        seed: int = 1, profile=None) -> CheckReport:
    """A d-embedding into a sup-normed space needs at least
    (1 - mass(d eps K)) / (2 alpha(eps)) coordinates; alpha comes from a
    profile upper bound when one exists, else from the cube floor, so
    the computed requirement never overshoots the true one."""
    functionals = np.asarray(functionals, dtype=np.float64)
    n_func = functionals.shape[0]
    batch = sample(measure, count, seed)
    vk = norm_eval(K, batch.data)
    sup_f = np.abs(batch.data @ functionals.T).max(axis=1)
    tol = 1e-9
    if np.any(sup_f > vk * (1.0 + tol)) or np.any(sup_f < vk / d * (1.0 - tol)):
        raise CheckError("functionals do not form a d-embedding on samples")

    eps_grid = np.asarray(eps_grid, dtype=np.float64)
    small_mass = np.array([(vk <= d * e).mean() for e in eps_grid])
    if profile is None:
        # cube case: the dimension floor is the only valid alpha source
        alpha = np.array([cube_concentration_floor(m, measure.dim)
                          for m in small_mass])
        alpha_label = "cube_floor"
    else:
        prof = _resolve_profile(profile, measure.dim)
        alpha = prof(eps_grid)
        alpha_label = prof.to_config()

    bound = np.array([embedding_lower_bound(a, m) if a > 0.0 else math.inf
                      for a, m in zip(alpha, small_mass)])
    pre = (eps_grid < 1.0 / d) & (alpha > 0.0)

    inputs = {"K": K.to_config(), "measure": measure.to_config(),
              "n_functionals": n_func, "d": d, "count": count, "seed": seed,
              "eps": eps_grid.tolist(), "alpha_source": alpha_label}
    quantities = {"small_ball_mass": small_mass.tolist(),
                  "alpha_values": alpha.tolist()}
    lhs = np.full(eps_grid.shape, float(n_func))
    return _finish("sup_embedding", inputs, quantities, eps_grid, lhs, bound,
                   0.0, _ALGEBRAIC_TOL, pre, "ge")


# ---------------------------------------------------------------------------
# Radial transfer between two radial measures
# ---------------------------------------------------------------------------

def check_radial_transfer(*, p: float, n: int, eps_grid: Sequence[float],
                          count: int = 100000, seed: int = 1,
                          profile=None, lam: float = 1.0) -> CheckReport:
    """Transfer from the generalized-gaussian product to the uniform lp
    ball through the radial quantile map u: image curve at eps versus
    16 x source profile at eps / (14 |u|_Lip lam), where the two-median
    smallness precondition holds."""
    if not 1.0 <= p <= 2.0:
        raise CheckError("the radial transfer catalog covers p in [1, 2]")
    metric = lp(p, n)
    mu = ggp(p, n)
    nu = uniform_ball(metric)
    if profile is None:
        profile = "gaussian" if p == 2.0 else "gamma1"
    prof = _resolve_profile(profile, n)

    F_mu = radial_cdf(mu, metric)
    F_nu = radial_cdf(nu, metric)
    u = radial_transport(F_mu, F_nu)
    u_lip = lipschitz_constant(u)

    batch = sample(mu, count, seed)
    r_mu = norm_eval(metric, batch.data)
    med_l = empirical_median(r_mu)
    med_u = empirical_median(u(r_mu))

    image = pushforward(lambda x: radial_map(u, metric, x), batch,
                        descriptor=f"radial:p={p}")
    eps_grid = np.asarray(eps_grid, dtype=np.float64)
    curve = concentration_lower_curve(image.image, metric, eps_grid,
                                      direction_seed=rng.derive_seed(seed, 0xD17))

    rhs = 16.0 * prof(eps_grid / (14.0 * u_lip * lam))

    def pre_fn(m_l, m_u):
        return 8.0 * (prof(eps_grid / (7.0 * u_lip * lam))
                      + prof(eps_grid * m_u / (7.0 * u_lip ** 2 * m_l)))

    pre = pre_fn(med_l.value, med_u.value) <= 1.0
    # the rhs has no median dependence; medians only gate the precondition
    slack = np.zeros_like(eps_grid)

    inputs = {"p": p, "n": n, "count": count, "seed": seed,
              "eps": eps_grid.tolist(), "profile": prof.to_config(),
              "lambda": lam}
    quantities = {"u_lipschitz": u_lip, "median_L": med_l.value,
                  "median_u": med_u.value, "u_knots": int(u.knots.size),
                  "family_size": curve.family_size}
    return _finish("radial_transfer", inputs, quantities, eps_grid,
                   curve.alpha_hat, rhs, curve.ci, slack, pre, "le",
                   ["u built from analytic radial laws; image sampled by "
                    "pushing the source batch through the radial map"])


# ---------------------------------------------------------------------------
# Registry for the CLI
# ---------------------------------------------------------------------------

def default_eps_grid(lo: float = 0.05, hi: float = 12.0, num: int = 40) -> list:
    return np.geomspace(lo, hi, num).tolist()


def _run_lipschitz_transfer(n=16, **kw):
    return check_lipschitz_transfer(
        measure=kw.pop("measure", ggp(2.0, n)),
        map_cfg=kw.pop("map", {"kind": "identity"}), lip=kw.pop("lip", 1.0),
        metric_in=kw.pop("metric", lp(2, n)),
        eps_grid=kw.pop("eps", np.linspace(0.1, 4.0, 20)),
        profile=kw.pop("profile", "gaussian"), **kw)


def _run_norm_ratio_transfer(n=32, **kw):
    return check_norm_ratio_transfer(
        K=kw.pop("K", lp(2, n)), L=kw.pop("L", lp(1, n)),
        measure=kw.pop("measure", haar_sphere(n)),
        eps_grid=kw.pop("eps", default_eps_grid()),
        profile=kw.pop("profile", "sphere"), **kw)


def _run_shell_inclusion(n=16, **kw):
    return check_shell_inclusion(
        K=kw.pop("K", lp(2, n)), L=kw.pop("L", lp(1, n)),
        measure=kw.pop("measure", haar_sphere(n)), eps=kw.pop("eps", 0.5), **kw)


def _run_separated_sets(n=64, **kw):
    return check_separated_sets(
        measure=kw.pop("measure", haar_sphere(n)),
        metric=kw.pop("metric", lp(2, n)), profile=kw.pop("profile", "sphere"),
        **kw)


def _run_cube_floor(n=8, **kw):
    return check_cube_floor(n=n, eps_grid=kw.pop("eps", np.linspace(0.1, 0.9, 9)),
                            **kw)


def _run_sup_embedding(n=8, **kw):
    return check_sup_embedding(
        K=kw.pop("K", lp(math.inf, n)),
        measure=kw.pop("measure", uniform_ball(lp(math.inf, n))),
        functionals=kw.pop("functionals", np.eye(n)), d=kw.pop("d", 1.0),
        eps_grid=kw.pop("eps", np.linspace(0.1, 0.9, 9)), **kw)


def _run_radial_transfer(n=16, **kw):
    return check_radial_transfer(p=kw.pop("p", 1.0), n=n,
                                 eps_grid=kw.pop("eps", default_eps_grid()), **kw)


CHECKS: dict[str, Callable[..., CheckReport]] = {
    "lipschitz_transfer": _run_lipschitz_transfer,
    "norm_ratio_transfer": _run_norm_ratio_transfer,
    "shell_inclusion": _run_shell_inclusion,
    "separated_sets": _run_separated_sets,
    "cube_floor": _run_cube_floor,
    "sup_embedding": _run_sup_embedding,
    "radial_transfer": _run_radial_transfer,
}


def run_check(check_id: str, **params) -> CheckReport:
    if check_id not in CHECKS:
        raise CheckError(f"unknown check id {check_id!r}; known: {sorted(CHECKS)}")
    params = {k: v for k, v in params.items() if v is not None}
    return CHECKS[check_id](**params)
