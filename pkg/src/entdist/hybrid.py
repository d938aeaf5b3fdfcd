"""Hybrid purify-then-encode strategy and the refined efficiency metric.

Below a code's pseudo-threshold a single QEC round lowers fidelity, so the
hybrid strategy runs DEJMPS (no twirl) until the fidelity reaches the
threshold, Werner-twirls the biased output so the depolarizing decoder
assumption holds, and applies one QEC round.  The matching pure-DEJMPS
strategy instead keeps purifying until it meets or beats the hybrid's
output fidelity.

Rates:  pure 1G  (1/2^i)(1 - P_total_discard);  pure 2G  k/n;  hybrid
k/(2^i n)(1 - P_total_discard).

The refined efficiency replaces the raw input distillable entanglement in
the denominator with the value after the minimum number of DEJMPS rounds
needed to lift it to at least 0.12 (no rounds if already above), folds in
the survival factor, and clamps negatives to zero:

    E = max( (n_out/n_in) * D(F_out) / D_baseline * (1 - P_total), 0 ).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .codes import builtin_code
from .decoder import LogicalFidelityPolynomial, builtin_polynomial, eval_qec_map
from .purify import PauliDistribution, purify_step, twirl
from .werner import distillable_entanglement

__all__ = [
    "DEFAULT_BASELINE_D",
    "HybridResult",
    "StrategyResult",
    "ScanPoint",
    "pseudo_threshold",
    "builtin_threshold",
    "min_rounds_to_fidelity",
    "hybrid_run",
    "baseline_distillable",
    "refined_efficiency",
    "checkpoint_scan",
    "default_scan_grid",
]

DEFAULT_BASELINE_D = 0.12


def pseudo_threshold(poly: LogicalFidelityPolynomial, *, bracket=(0.8, 0.9999), tol: float = 1e-6) -> float:
    """Largest fixed point below 1 of the code's fidelity map, by bisection
    on eval(F) - F.  Above it one QEC round improves fidelity; below, it
    degrades."""
    lo, hi = bracket
    grid = np.linspace(lo, hi, 400)
    g = eval_qec_map(poly, grid) - grid
    pair = None
    for i in range(len(grid) - 1, 0, -1):
        if g[i] > 0.0 and g[i - 1] < 0.0:
            pair = (grid[i - 1], grid[i])
            break
    if pair is None:
        raise ValueError("no fidelity fixed point inside the bracket")
    a, b = (float(v) for v in pair)
    while b - a > tol:
        mid = 0.5 * (a + b)
        if eval_qec_map(poly, mid) - mid < 0.0:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


@lru_cache(maxsize=None)
def builtin_threshold(code_name: str) -> float:
    return pseudo_threshold(builtin_polynomial(code_name), tol=1e-9)


def _dejmps_trace(f_in: float, max_rounds: int):
    """Fidelities and cumulative discard of DEJMPS (no twirl) from a
    depolarizing start; index i = after i rounds."""
    dist = PauliDistribution.from_fidelity(f_in)
    fids = [f_in]
    discards = [0.0]
    p_total = 0.0
    for _ in range(max_rounds):
        step = purify_step("dejmps", dist)
        dist = step.dist
        p_total = p_total + (1.0 - p_total) * step.p_discard
        fids.append(dist.fidelity)
        discards.append(p_total)
    return fids, discards


def min_rounds_to_fidelity(f_in: float, target: float, *, max_rounds: int = 40) -> int | None:
    """Smallest number of DEJMPS (no twirl) rounds from a depolarizing
    start whose fidelity reaches the target; None if not reached within
    ``max_rounds`` (F_in <= 0.5 is pinned at the 0.5 fixed point)."""
    if not 0.0 < f_in <= 1.0:
        raise ValueError("input fidelity must lie in (0, 1]")
    if not 0.5 < target < 1.0:
        raise ValueError("target fidelity must lie in (0.5, 1)")
    if f_in >= target:
        return 0
    if f_in <= 0.5:
        return None
    fids, _ = _dejmps_trace(f_in, max_rounds)
    for i, f in enumerate(fids):
        if f >= target:
            return i
    return None


@dataclass(frozen=True)
class HybridResult:
    """One hybrid evaluation: DEJMPS rounds to threshold, the fidelity
    handed to the code, the post-QEC fidelity, the combined rate, and the
    pure-DEJMPS round count that matches or beats the hybrid output."""

    f_in: float
    code_name: str
    i_pre: int
    f_at_threshold: float
    f_out: float
    rate: float
    p_total_discard: float
    i_match: int | None


def hybrid_run(
    f_in: float,
    code_name: str = "933",
    *,
    threshold: float | None = None,
    max_rounds: int = 40,
) -> HybridResult:
    """DEJMPS to the code's pseudo-threshold, Werner twirl, one QEC round."""
    code = builtin_code(code_name)
    poly = builtin_polynomial(code_name)
    if threshold is None:
        threshold = builtin_threshold(code_name)
    fids, discards = _dejmps_trace(f_in, max_rounds)
    i_pre = next((i for i, f in enumerate(fids) if f >= threshold), None)
    if i_pre is None:
        raise ValueError(
            f"threshold {threshold:.6f} not reachable from F={f_in} in {max_rounds} rounds"
        )
    # the twirl symmetrizes the Z bias without changing the fidelity
    purified = twirl(PauliDistribution.from_fidelity(fids[i_pre]))
    f_out = eval_qec_map(poly, purified.fidelity)
    p_total = discards[i_pre]
    rate = code.k / (2.0**i_pre * code.n) * (1.0 - p_total)
    i_match = next((i for i, f in enumerate(fids) if f >= f_out), None)
    return HybridResult(f_in, code.name, i_pre, fids[i_pre], f_out, rate, p_total, i_match)


def baseline_distillable(
    f_in: float,
    *,
    min_d: float = DEFAULT_BASELINE_D,
    max_rounds: int = 40,
) -> tuple[float, int]:
    """Denominator for the refined efficiency: D after the minimum number
    of DEJMPS rounds lifting it to at least ``min_d`` (zero rounds when
    already there).  Returns (D, rounds used)."""
    d0 = distillable_entanglement(f_in)
    if d0 >= min_d:
        return d0, 0
    fids, _ = _dejmps_trace(f_in, max_rounds)
    for i, f in enumerate(fids):
        d = distillable_entanglement(f)
        if d >= min_d:
            return d, i
    raise ValueError(
        f"distillable entanglement {min_d} not reachable from F={f_in} in {max_rounds} rounds"
    )


@dataclass(frozen=True)
class StrategyResult:
    """What the refined metric needs to score a strategy."""

    label: str
    f_in: float
    f_out: float
    output_ratio: float  # n_out / n_in
    p_total_discard: float


def refined_efficiency(
    result: StrategyResult,
    *,
    baseline_min_d: float = DEFAULT_BASELINE_D,
    max_rounds: int = 40,
) -> float:
    d_base, _ = baseline_distillable(result.f_in, min_d=baseline_min_d, max_rounds=max_rounds)
    value = (
        result.output_ratio
        * distillable_entanglement(result.f_out)
        / d_base
        * (1.0 - result.p_total_discard)
    )
    return max(value, 0.0)


@dataclass(frozen=True)
class ScanPoint:
    f_in: float
    i_pre: int
    i_match: int | None
    f_out_dejmps: float
    f_out_hybrid: float
    rate_dejmps: float
    rate_hybrid: float
    eff_dejmps: float
    eff_hybrid: float
    winner: str


def default_scan_grid(points: int = 10000) -> np.ndarray:
    """10,000 uniform points on [0.501, 1).  The right endpoint is
    excluded: at F = 1 exactly, both strategies are no-ops and the
    round-count comparison degenerates."""
    return np.linspace(0.501, 1.0, points, endpoint=False)


def checkpoint_scan(
    code_name: str = "933",
    grid=None,
    *,
    max_rounds: int = 40,
    baseline_min_d: float = DEFAULT_BASELINE_D,
) -> list[ScanPoint]:
    """Evaluate hybrid vs matching pure DEJMPS across an input grid.

    Jumps in i_pre / i_match across the grid are the checkpoints; they
    crowd together near F = 0.5 where each round gains little.
    """
    if grid is None:
        grid = default_scan_grid()
    grid = np.asarray(grid, dtype=float)
    if np.any(grid <= 0.501 - 1e-12) or np.any(grid >= 1.0):
        raise ValueError("scan grid must lie inside [0.501, 1)")
    code = builtin_code(code_name)
    poly = builtin_polynomial(code_name)
    threshold = builtin_threshold(code_name)
    points: list[ScanPoint] = []
    for f_in in grid:
        f_in = float(f_in)
        fids, discards = _dejmps_trace(f_in, max_rounds)
        i_pre = next((i for i, f in enumerate(fids) if f >= threshold), None)
        if i_pre is None:
            raise ValueError(
                f"threshold not reachable from F={f_in} in {max_rounds} rounds; raise max_rounds"
            )
        f_hybrid = eval_qec_map(poly, fids[i_pre])
        rate_hybrid = code.k / (2.0**i_pre * code.n) * (1.0 - discards[i_pre])
        hybrid_sr = StrategyResult(
            "hybrid", f_in, f_hybrid, code.k / (2.0**i_pre * code.n), discards[i_pre]
        )
        i_match = next((i for i, f in enumerate(fids) if f >= f_hybrid), None)
        if i_match is not None:
            f_dejmps = fids[i_match]
            rate_dejmps = (1.0 - discards[i_match]) / 2.0**i_match
            dejmps_sr = StrategyResult(
                "dejmps", f_in, f_dejmps, 1.0 / 2.0**i_match, discards[i_match]
            )
            eff_dejmps = refined_efficiency(
                dejmps_sr, baseline_min_d=baseline_min_d, max_rounds=max_rounds
            )
        else:
            f_dejmps = fids[-1]
            rate_dejmps = (1.0 - discards[-1]) / 2.0 ** (len(fids) - 1)
            eff_dejmps = 0.0
        eff_hybrid = refined_efficiency(
            hybrid_sr, baseline_min_d=baseline_min_d, max_rounds=max_rounds
        )
        winner = "hybrid" if eff_hybrid > eff_dejmps else "dejmps"
        points.append(
            ScanPoint(
                f_in,
                i_pre,
                i_match,
                f_dejmps,
                float(f_hybrid),
                rate_dejmps,
                rate_hybrid,
                eff_dejmps,
                eff_hybrid,
                winner,
            )
        )
    return points
