"""Kick-time search for the antisymmetric four-kick template.

Times are handled as ``x = omega t`` (control-ion trap units). Each mode of
frequency ``r omega`` closes when ``sin(r x1) + sin(r x2) = 0``; the
entangling phase is proportional to ``G = sum_m w_m K(x1, x2; r_m)`` with
``w = (1/r_com, -1/r_str)``. The search runs a batch penalty descent from a
32 x 32 grid of seeds, polishes every endpoint and every seed on the exact constraint (or
KKT) system, and reduces deterministically: largest ``|G|``, ties within a
relative 1e-9 broken by the lexicographically smallest ``(t1, t2)``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import root

from qls._accel import max_threads
from qls.crystal import IonPair, mode_ratios
from qls.errors import InfeasibleError
from qls.phase.gaussian import PhaseResult
from qls.phase.kernels import penalty_descent, template_terms
from qls.phase.kicks import KickSequence, kick_entangling_phase

__all__ = ["Candidate", "KickOptimum", "search_template", "optimize_kick_times", "template_objective",
           "CLOSURE_TOL", "T1_MAX_PERIODS"]

CLOSURE_TOL = 1e-6
T1_MAX_PERIODS = 3.0
_TIE_RTOL = 1e-9


@dataclass(frozen=True)
class Candidate:
    x1: float
    x2: float
    G: float
    closures: tuple[float, ...]


@dataclass(frozen=True)
class KickOptimum:
    t1: float  # s
    t2: float  # s
    G: float  # dimensionless phase factor
    result: PhaseResult
    closures: dict = field(default_factory=dict)  # |sin r x1 + sin r x2| per mode
    n_candidates: int = 0

    @property
    def periods(self) -> tuple[float, float]:
        """(t1, t2) in units of the control trap period, filled by the caller's omega."""
        return self._periods

    def __iter__(self):
        # unpacks as (t1, t2, PhaseResult)
        return iter((self.t1, self.t2, self.result))


def template_objective(x1, x2, ratios, weights):
    """(G, closures) at times ``x`` for mode ratios and weights."""
    g = 0.0
    cl = []
    for r, w in zip(ratios, weights):
        k, c, *_ = template_terms(x1, x2, r)
        g = g + w * k
        cl.append(c)
    return g, cl


def _polish(x, ratios, weights, closed):
    idx = [m for m in range(len(ratios)) if closed[m]]
    if len(idx) > 2:
        raise ValueError("at most two closure constraints fit two kick times")

    def parts(x1, x2):
        g = dg1 = dg2 = 0.0
        cs = []
        for m, (r, w) in enumerate(zip(ratios, weights)):
            k, c, dk1, dk2, dc1, dc2 = template_terms(x1, x2, r)
            g += w * k
            dg1 += w * dk1
            dg2 += w * dk2
            if closed[m]:
                cs.append((float(c), float(dc1), float(dc2)))
        return float(g), float(dg1), float(dg2), cs

    if len(idx) == 2:
        def fun(v):
            _, _, _, cs = parts(*v)
            return [cs[0][0], cs[1][0]]

        def jac(v):
            _, _, _, cs = parts(*v)
            return [[cs[0][1], cs[0][2]], [cs[1][1], cs[1][2]]]

        sol = root(fun, x, jac=jac, method="hybr", options={"xtol": 1e-14})
        return sol.x if sol.success else None

    # one constraint: stationarity of G^2/2 along the closure curve
    g, dg1, dg2, cs = parts(*x)
    c, dc1, dc2 = cs[0]
    lam0 = g * (dg1 * dc1 + dg2 * dc2) / max(dc1 * dc1 + dc2 * dc2, 1e-300)

    def kkt(v):
        g, dg1, dg2, cs = parts(v[0], v[1])
        c, dc1, dc2 = cs[0]
        return [g * dg1 - v[2] * dc1, g * dg2 - v[2] * dc2, c]

    sol = root(kkt, [x[0], x[1], lam0], method="hybr", options={"xtol": 1e-14})
    return sol.x[:2] if sol.success else None


def search_template(ratios, weights, closed=None, seeds_per_axis: int = 32, seed_span: float = 1.25,
                    t1_max: float = T1_MAX_PERIODS) -> list[Candidate]:
    """All distinct feasible stationary points found, best first.

    ``seed_span`` and ``t1_max`` are in units of the trap period ``2 pi``.
    """
    ratios = np.asarray(ratios, dtype=float)
    weights = np.asarray(weights, dtype=float)
    closed = np.ones(len(ratios), dtype=bool) if closed is None else np.asarray(closed, dtype=bool)
    if not closed.any():
        raise ValueError("at least one mode must be closed")
    axis = 2.0 * math.pi * seed_span * np.arange(1, seeds_per_axis + 1) / seeds_per_axis
    s1, s2 = np.meshgrid(axis, axis, indexing="ij")
    seeds = np.stack([np.maximum(s1, s2).ravel(), np.minimum(s1, s2).ravel()], axis=1)
    seeds = seeds[seeds[:, 0] > seeds[:, 1]]
    seeds = np.unique(seeds, axis=0)

    ends = penalty_descent(seeds, ratios, weights, closed)
    ends = ends[np.all(np.isfinite(ends), axis=1)]
    # descent endpoints can leave a seed's basin, so the seeds are polished too
    starts = np.unique(np.round(np.concatenate([ends, seeds]), 6), axis=0)

    workers = min(max_threads(), 8)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            polished = list(pool.map(lambda x: _polish(x, ratios, weights, closed), starts))
    else:
        polished = [_polish(x, ratios, weights, closed) for x in starts]

    x_max = 2.0 * math.pi * t1_max
    found = {}
    for x in polished:
        if x is None:
            continue
        x1, x2 = float(x[0]), float(x[1])
        if not (x2 > 1e-9 and x1 - x2 > 1e-9 and x1 <= x_max + 1e-12):
            continue
        g, cl = template_objective(x1, x2, ratios, weights)
        closures = tuple(abs(float(c)) for m, c in enumerate(cl) if closed[m])
        if max(closures) > 1e-10:
            continue
        key = (round(x1, 8), round(x2, 8))
        found.setdefault(key, Candidate(x1, x2, float(g), closures))
    cands = list(found.values())
    if not cands:
        return []
    best = max(abs(c.G) for c in cands)
    top = sorted((c for c in cands if abs(c.G) >= best * (1 - _TIE_RTOL)), key=lambda c: (c.x1, c.x2))
    rest = sorted((c for c in cands if abs(c.G) < best * (1 - _TIE_RTOL)), key=lambda c: (-abs(c.G), c.x1, c.x2))
    cands = top + rest
    return cands


def optimize_kick_times(pair: IonPair, n_kicks: int = 4, delta_k: float = 1.0, modes: str = "both") -> KickOptimum:
    """Kick times maximizing ``|phi_CT|`` with the selected modes closed.

    ``modes`` is ``"both"``, ``"com"`` or ``"str"``; only the selected modes
    enter the objective and the closure constraints. Unpacks as
    ``(t1, t2, PhaseResult)``.
    """
    if n_kicks != 4:
        raise ValueError("only the four-kick antisymmetric template is supported")
    r_c, r_s = mode_ratios(pair.mu)
    table = {"com": ([r_c], [1.0 / r_c]), "str": ([r_s], [-1.0 / r_s]), "both": ([r_c, r_s], [1.0 / r_c, -1.0 / r_s])}
    if modes not in table:
        raise ValueError(f"modes must be one of {sorted(table)}")
    ratios, weights = table[modes]
    cands = search_template(ratios, weights)
    if not cands:
        raise InfeasibleError(
            f"no kick times close the {modes} mode(s) with t1 <= {T1_MAX_PERIODS} trap periods"
        )
    best = cands[0]
    t1, t2 = best.x1 / pair.omega, best.x2 / pair.omega
    seq = KickSequence.template(delta_k, t1, t2)
    phi_ct, phi_com, phi_str, res_c, res_s = kick_entangling_phase(seq, seq, pair)
    sel = {"com": [res_c], "str": [res_s], "both": [res_c, res_s]}[modes]
    result = PhaseResult(
        phi_com=phi_com,
        phi_str=phi_str,
        phi_CT=phi_ct,
        residual_com=res_c,
        residual_str=res_s,
        restored=max(sel) < CLOSURE_TOL,
    )
    names = {"com": ["com"], "str": ["str"], "both": ["com", "str"]}[modes]
    opt = KickOptimum(t1=t1, t2=t2, G=best.G, result=result, closures=dict(zip(names, best.closures)),
                      n_candidates=len(cands))
    object.__setattr__(opt, "_periods", (best.x1 / (2 * math.pi), best.x2 / (2 * math.pi)))
    return opt
