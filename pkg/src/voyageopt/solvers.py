"""Classical minimizers: exhaustive search, simulated annealing, landscapes.

The brute-force oracle is the ground truth every other solver is checked
against. Randomness comes exclusively from numpy's Philox counter-based
generator keyed through SeedSequence, so results reproduce bit-for-bit
across platforms and worker counts.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Sequence

import numpy as np

from .polynomial import PseudoBooleanPolynomial, evaluate_on_integers
from .scenario import (
    DEFAULT_ENCODING,
    EncodingConfig,
    RouteScenario,
    ground_speed_coefficients,
    validate_scenario,
)

BRUTE_FORCE_LIMIT = 26
_DEGENERACY_TOL = 1e-12
_BLOCK = 1 << 18


@dataclass(frozen=True)
class SolveResult:
    """Outcome of one solver call.

    Brute force lists every minimizer (ascending by basis index); annealing
    lists the single best assignment found. Each listed bitstring evaluates
    to best_value within 1e-12.
    """

    best_value: float
    minimizers: tuple[tuple[int, ...], ...]
    evaluations: int
    seed: int | None = None


@dataclass(frozen=True)
class AnnealConfig:
    """Simulated-annealing knobs.

    t_start/t_end of None derive from the polynomial at solve time:
    t_start = max |coefficient|, t_end = 1e-3 * t_start.
    """

    sweeps: int = 200
    t_start: float | None = None
    t_end: float | None = None
    restarts: int = 4
    seed: int = 0

    def __post_init__(self):
        if self.sweeps < 1:
            raise ValueError("sweeps must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.t_start is not None and not self.t_start > 0:
            raise ValueError("t_start must be > 0")
        if self.t_end is not None and not self.t_end > 0:
            raise ValueError("t_end must be > 0")
        if self.t_start is not None and self.t_end is not None and self.t_start < self.t_end:
            raise ValueError("t_start must be >= t_end")


def _bits_of(code: int, width: int) -> tuple[int, ...]:
    return tuple((code >> q) & 1 for q in range(width))


def flip_delta(pbp: PseudoBooleanPolynomial, bits: Sequence[int], index: int) -> float:
    """Cost change from flipping bit `index`, from only the terms containing it."""
    if not 0 <= index < pbp.num_vars:
        raise ValueError(f"variable index {index} outside 0..{pbp.num_vars - 1}")
    total = 0.0
    for key, coeff in pbp.terms.items():
        if index in key:
            for v in key:
                if v != index and not bits[v]:
                    break
            else:
                total += coeff
    return (1 - 2 * bits[index]) * total


# ---------------------------------------------------------------------------
# Brute force
# ---------------------------------------------------------------------------

def _scan_range(pbp: PseudoBooleanPolynomial, lo: int, hi: int) -> tuple[float, list[tuple[int, float]]]:
    """Minimum over [lo, hi) plus all (code, value) within tolerance of it."""
    best = math.inf
    candidates: list[tuple[int, float]] = []
    for start in range(lo, hi, _BLOCK):
        codes = np.arange(start, min(start + _BLOCK, hi), dtype=np.int64)
        values = evaluate_on_integers(pbp, codes)
        block_min = float(values.min())
        if block_min < best:
            best = block_min
        keep = values <= best + _DEGENERACY_TOL
        candidates.extend(zip(codes[keep].tolist(), values[keep].tolist()))
    candidates = [(c, v) for c, v in candidates if v <= best + _DEGENERACY_TOL]
    return best, candidates


def brute_force(pbp: PseudoBooleanPolynomial, workers: int = 1) -> SolveResult:
    """Exact global minimum and the complete set of minimizing bitstrings.

    The basis-index range may be partitioned across threads; the merge is
    deterministic (minimizers ascend by basis index), so results are
    identical for any worker count.
    """
    if pbp.num_vars > BRUTE_FORCE_LIMIT:
        raise ValueError(f"{pbp.num_vars} variables exceeds the brute-force limit {BRUTE_FORCE_LIMIT}")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    size = 1 << pbp.num_vars
    bounds = [size * i // workers for i in range(workers + 1)]
    chunks = [(lo, hi) for lo, hi in zip(bounds, bounds[1:]) if lo < hi]
    if workers == 1 or len(chunks) == 1:
        results = [_scan_range(pbp, lo, hi) for lo, hi in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda span: _scan_range(pbp, *span), chunks))
    best = min(chunk_best for chunk_best, _ in results)
    codes = sorted(
        code
        for _, candidates in results
        for code, value in candidates
        if value <= best + _DEGENERACY_TOL
    )
    minimizers = tuple(_bits_of(code, pbp.num_vars) for code in codes)
    return SolveResult(best_value=best, minimizers=minimizers, evaluations=size)


# ---------------------------------------------------------------------------
# Simulated annealing
# ---------------------------------------------------------------------------

def resolve_temperatures(pbp: PseudoBooleanPolynomial, cfg: AnnealConfig) -> tuple[float, float]:
    """The (t_start, t_end) a run will actually use: defaults derive from the
    polynomial's largest |coefficient|."""
    t_start = cfg.t_start
    if t_start is None:
        t_start = max((abs(c) for c in pbp.terms.values()), default=1.0)
        if t_start == 0.0:
            t_start = 1.0
    t_end = cfg.t_end if cfg.t_end is not None else 1e-3 * t_start
    if not 0.0 < t_end <= t_start:
        raise ValueError(f"invalid temperature ladder {t_start}..{t_end}")
    return t_start, t_end


def simulated_annealing(pbp: PseudoBooleanPolynomial, cfg: AnnealConfig = AnnealConfig()) -> SolveResult:
    """Single-bit-flip Metropolis search over a geometric temperature ladder.

    Each sweep proposes every variable once in ascending index order and
    accepts with probability min(1, exp(-delta/T)); a uniform draw is consumed
    only on uphill proposals. Flip deltas come incrementally from the terms
    containing the flipped variable. Restart r runs on its own Philox stream
    keyed by SeedSequence(cfg.seed).spawn(...)[r], so identical (pbp, cfg)
    give bit-identical results. Returns the best assignment ever visited.
    """
    if pbp.num_vars < 1:
        raise ValueError("polynomial has no variables")
    t_start, t_end = resolve_temperatures(pbp, cfg)
    n = pbp.num_vars
    per_var: list[list[tuple[float, tuple[int, ...]]]] = [[] for _ in range(n)]
    for key, coeff in pbp.terms.items():
        for q in key:
            per_var[q].append((coeff, tuple(v for v in key if v != q)))

    ratio = t_end / t_start
    span = max(cfg.sweeps - 1, 1)
    best_value = math.inf
    best_bits: list[int] = []
    for child in np.random.SeedSequence(cfg.seed).spawn(cfg.restarts):
        rng = np.random.Generator(np.random.Philox(child))
        bits = rng.integers(0, 2, size=n).tolist()
        current = pbp.evaluate(bits)
        if current < best_value:
            best_value, best_bits = current, bits[:]
        for sweep in range(cfg.sweeps):
            temp = t_start * ratio ** (sweep / span)
            for q in range(n):
                delta = 0.0
                for coeff, others in per_var[q]:
                    for v in others:
                        if not bits[v]:
                            break
                    else:
                        delta += coeff
                delta *= 1 - 2 * bits[q]
                if delta <= 0.0 or rng.random() < math.exp(-delta / temp):
                    bits[q] = 1 - bits[q]
                    current += delta
                    if current < best_value:
                        best_value, best_bits = current, bits[:]
    evaluations = cfg.restarts * (1 + cfg.sweeps * n)
    return SolveResult(
        best_value=best_value,
        minimizers=(tuple(best_bits),),
        evaluations=evaluations,
        seed=cfg.seed,
    )


# ---------------------------------------------------------------------------
# Arrival-time landscape
# ---------------------------------------------------------------------------

def landscape(scenario: RouteScenario,
              enc: EncodingConfig = DEFAULT_ENCODING) -> list[tuple[float, float]]:
    """Minimum total cost achievable at each reachable arrival time.

    Enumerates every plan on the pace grid, groups plans by exact arrival
    time (rational arithmetic on the dyadic grid, so equal times collide
    exactly), and keeps the cheapest cost per group. Rows ascend by arrival
    time.
    """
    validate_scenario(scenario)
    n = scenario.num_sectors
    if n * enc.bits > BRUTE_FORCE_LIMIT:
        raise ValueError(f"{n * enc.bits} variables exceeds the enumeration limit {BRUTE_FORCE_LIMIT}")
    levels = range(1 << enc.bits)
    grid_step = Fraction(2) ** enc.j_min
    # Per-sector tables over grid levels: fuel, float time, exact time.
    fuel_tab: list[list[float]] = []
    time_tab: list[list[float]] = []
    exact_tab: list[list[Fraction]] = []
    for sec in scenario.sectors:
        a_coeff, b_coeff, g_coeff = ground_speed_coefficients(sec)
        fuel_row, time_row, exact_row = [], [], []
        for k in levels:
            u = k * (2.0 ** enc.j_min)
            if k == 0:
                fuel_row.append(b_coeff * sec.length)
            else:
                fuel_row.append(a_coeff * sec.length * u + b_coeff * sec.length
                                + g_coeff * sec.length * (1.0 / u))
            time_row.append(sec.length * u)
            exact_row.append(Fraction(sec.length) * k * grid_step)
        fuel_tab.append(fuel_row)
        time_tab.append(time_row)
        exact_tab.append(exact_row)

    best: dict[Fraction, float] = {}
    for combo in product(levels, repeat=n):
        arrival = 0.0
        fuel = 0.0
        key = Fraction(0)
        for i, k in enumerate(combo):
            arrival += time_tab[i][k]
            fuel += fuel_tab[i][k]
            key += exact_tab[i][k]
        miss = arrival - scenario.rta
        total = fuel + scenario.alpha * miss * miss
        found = best.get(key)
        if found is None or total < found:
            best[key] = total
    return [(float(key), best[key]) for key in sorted(best)]


def write_landscape_csv(rows: Sequence[tuple[float, float]], destination: str | Path) -> None:
    """Write landscape rows as CSV with header t_A,cost."""
    with open(destination, "w", encoding="utf-8") as fh:
        fh.write("t_A,cost\n")
        for t_arrival, cost in rows:
            fh.write(f"{t_arrival!r},{cost!r}\n")
