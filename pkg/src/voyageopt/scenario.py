"""Route scenarios, fixed-point speed encoding, and the voyage cost model.

A voyage follows a fixed route cut into sectors. Each sector carries its
length, the water-current components along and across the track, and a fuel
rate curve in the vessel's through-water speed. A plan is judged by total
fuel burned plus a quadratic charge on missing the requested time of arrival
(RTA), so arriving early costs just like arriving late.

The decision variable per sector is the inverse ground speed ("pace", time
per unit distance), held on a dyadic grid by a fixed-point binary encoding so
the whole problem can be compiled into a binary polynomial. All types here
are immutable and all operations are pure functions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence


@dataclass(frozen=True)
class FuelModel:
    """Fuel cost per unit time as a polynomial in through-water speed v.

    rate(v) = a + b*v + c*v**2, plus e*(cross-track flow)**2 for holding
    course against the perpendicular current. c == 0 is "linear mode".
    """

    a: float
    b: float = 0.0
    c: float = 0.0
    e: float = 0.0


@dataclass(frozen=True)
class Sector:
    """One leg of the route with its local current and fuel curve.

    parallel_flow is the water speed along the track (positive = boost);
    perp_flow is the cross-track water speed, which only enters the cost
    through the fuel model's e-term.
    """

    length: float
    fuel: FuelModel
    parallel_flow: float = 0.0
    perp_flow: float = 0.0


@dataclass(frozen=True)
class RouteScenario:
    """A route (ordered sectors), the requested arrival time, and the
    weight alpha of the quadratic arrival-time penalty."""

    sectors: tuple[Sector, ...]
    rta: float
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "sectors", tuple(self.sectors))

    @property
    def num_sectors(self) -> int:
        return len(self.sectors)

    @property
    def total_length(self) -> float:
        return sum(s.length for s in self.sectors)


@dataclass(frozen=True)
class EncodingConfig:
    """Dyadic fixed-point grid: values sum(2**j * bit_j) for j_min <= j <= j_max.

    The default grid (-5, 0) spans 0 .. 2 - 2**-5 in steps of 2**-5.
    """

    j_min: int = -5
    j_max: int = 0

    def __post_init__(self):
        if self.j_min > self.j_max:
            raise ValueError(f"encoding j_min {self.j_min} exceeds j_max {self.j_max}")
        if not 1 <= self.bits <= 16:
            raise ValueError(f"encoding width {self.bits} outside 1..16")

    @property
    def bits(self) -> int:
        return self.j_max - self.j_min + 1

    @property
    def weights(self) -> tuple[float, ...]:
        """Bit weights 2**j, ascending j."""
        return tuple(2.0 ** j for j in range(self.j_min, self.j_max + 1))


DEFAULT_ENCODING = EncodingConfig(-5, 0)


@dataclass(frozen=True)
class DecodedPlan:
    """A bitstring decoded into physical per-sector quantities.

    inverse_speeds[i] is the pace u_i; ground_speeds[i] its reciprocal (None
    when u_i == 0); water_speeds[i] the through-water speed (ground minus
    parallel flow); times[i] the sector transit time. The reciprocal identity
    ground_speed * inverse_speed == 1 holds by construction: cost formulas
    substitute 1 for that product instead of multiplying it out.

    Sectors with u_i == 0 ("infinite speed", zero transit time) are legal grid
    points and are flagged in infeasible_sectors rather than rejected.
    """

    inverse_speeds: tuple[float, ...]
    ground_speeds: tuple[float | None, ...]
    water_speeds: tuple[float | None, ...]
    times: tuple[float, ...]
    arrival_time: float
    infeasible_sectors: frozenset[int]


@dataclass(frozen=True)
class CostBreakdown:
    """Total voyage cost split into per-sector fuel and the arrival penalty."""

    fuel_per_sector: tuple[float, ...]
    fuel_total: float
    delay_cost: float
    total: float


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _finite(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def validate_scenario(scenario: RouteScenario) -> RouteScenario:
    """Check every scenario invariant; return the scenario unchanged.

    Raises ValueError naming the first violated invariant, with the sector
    index where one applies.
    """
    if scenario.num_sectors < 1:
        raise ValueError("scenario has no sectors")
    for i, sec in enumerate(scenario.sectors):
        where = f"sector {i}"
        if not _finite(sec.length):
            raise ValueError(f"{where}: non-finite sector length")
        if sec.length <= 0:
            raise ValueError(f"{where}: non-positive sector length")
        if not _finite(sec.parallel_flow):
            raise ValueError(f"{where}: non-finite parallel flow")
        if not _finite(sec.perp_flow):
            raise ValueError(f"{where}: non-finite perpendicular flow")
        for name in ("a", "b", "c", "e"):
            value = getattr(sec.fuel, name)
            if not _finite(value):
                raise ValueError(f"{where}: non-finite fuel coefficient {name}")
            if name != "b" and value < 0:
                raise ValueError(f"{where}: negative fuel coefficient {name}")
    if not _finite(scenario.rta):
        raise ValueError("non-finite arrival deadline")
    if scenario.rta < 0:
        raise ValueError("negative arrival deadline")
    if not _finite(scenario.alpha):
        raise ValueError("non-finite delay weight")
    if scenario.alpha < 0:
        raise ValueError("negative delay weight")
    return scenario


def ground_speed_coefficients(sector: Sector) -> tuple[float, float, float]:
    """Fuel rate rebased from through-water speed v to ground speed w.

    With w = v + parallel_flow the rate a + b*v + c*v**2 + e*perp**2 becomes
    A + B*w + G*w**2; returns (A, B, G).
    """
    f = sector.fuel
    dv = sector.parallel_flow
    a_coeff = f.a - f.b * dv + f.c * dv * dv + f.e * sector.perp_flow ** 2
    b_coeff = f.b - 2.0 * f.c * dv
    return a_coeff, b_coeff, f.c


# ---------------------------------------------------------------------------
# Encoding / decoding
# ---------------------------------------------------------------------------

def encode_levels(levels: Sequence[int], enc: EncodingConfig = DEFAULT_ENCODING) -> tuple[int, ...]:
    """Write one integer grid level per sector into a flat bitstring.

    Layout is sector-major with bit exponents ascending within each sector,
    so level k decodes back to exactly k * 2**j_min.
    """
    bits: list[int] = []
    top = 1 << enc.bits
    for i, level in enumerate(levels):
        if not isinstance(level, int) or isinstance(level, bool) or not 0 <= level < top:
            raise ValueError(f"sector {i}: level {level!r} outside 0..{top - 1}")
        bits.extend((level >> q) & 1 for q in range(enc.bits))
    return tuple(bits)


def decode(bits: Sequence[int], scenario: RouteScenario,
           enc: EncodingConfig = DEFAULT_ENCODING) -> DecodedPlan:
    """Decode a flat bitstring into a physical voyage plan.

    Expects exactly num_sectors * enc.bits entries, sector-major, exponent
    ascending within a sector. Zero-pace sectors are flagged infeasible and
    get undefined (None) speeds and zero transit time.
    """
    n = scenario.num_sectors
    expected = n * enc.bits
    if len(bits) != expected:
        raise ValueError(f"expected {expected} bits, got {len(bits)}")
    if any(b not in (0, 1) for b in bits):
        raise ValueError("bits must be 0 or 1")

    weights = enc.weights
    inverse_speeds: list[float] = []
    ground_speeds: list[float | None] = []
    water_speeds: list[float | None] = []
    times: list[float] = []
    infeasible: set[int] = set()
    for i, sec in enumerate(scenario.sectors):
        chunk = bits[i * enc.bits:(i + 1) * enc.bits]
        u = 0.0
        for w, bit in zip(weights, chunk):
            if bit:
                u += w
        inverse_speeds.append(u)
        times.append(sec.length * u)
        if u == 0.0:
            infeasible.add(i)
            ground_speeds.append(None)
            water_speeds.append(None)
        else:
            w = 1.0 / u
            ground_speeds.append(w)
            water_speeds.append(w - sec.parallel_flow)
    return DecodedPlan(
        inverse_speeds=tuple(inverse_speeds),
        ground_speeds=tuple(ground_speeds),
        water_speeds=tuple(water_speeds),
        times=tuple(times),
        arrival_time=sum(times),
        infeasible_sectors=frozenset(infeasible),
    )


# ---------------------------------------------------------------------------
# Cost model
# ---------------------------------------------------------------------------

def scenario_cost(plan: DecodedPlan, scenario: RouteScenario) -> CostBreakdown:
    """Ground-truth voyage cost of a decoded plan.

    Per-sector fuel is the ground-speed-basis rate integrated over the sector
    time, with the reciprocal identity w*u == 1 substituted exactly:
    A*s*u + B*s + G*s*w. The zero-pace limit contributes B*s. The arrival
    penalty is alpha * (arrival_time - rta)**2.
    """
    if len(plan.inverse_speeds) != scenario.num_sectors:
        raise ValueError("plan does not match scenario sector count")
    fuel: list[float] = []
    for i, sec in enumerate(scenario.sectors):
        a_coeff, b_coeff, g_coeff = ground_speed_coefficients(sec)
        s = sec.length
        u = plan.inverse_speeds[i]
        if i in plan.infeasible_sectors:
            fuel.append(b_coeff * s)
        else:
            w = plan.ground_speeds[i]
            fuel.append(a_coeff * s * u + b_coeff * s + g_coeff * s * w)
    fuel_total = sum(fuel)
    miss = plan.arrival_time - scenario.rta
    delay = scenario.alpha * miss * miss
    return CostBreakdown(
        fuel_per_sector=tuple(fuel),
        fuel_total=fuel_total,
        delay_cost=delay,
        total=fuel_total + delay,
    )


def replan(scenario: RouteScenario, completed: int, elapsed: float,
           new_rta: float) -> RouteScenario:
    """Drop the first `completed` sectors and rebase the deadline.

    Models a mid-voyage RTA change: the remaining sectors keep their data and
    the new scenario's deadline is the remaining time budget new_rta - elapsed.
    """
    n = scenario.num_sectors
    if not isinstance(completed, int) or isinstance(completed, bool):
        raise ValueError("completed sector count must be an integer")
    if completed < 0 or completed >= n:
        raise ValueError(f"completed sector count {completed} outside 0..{n - 1}")
    if elapsed < 0:
        raise ValueError("negative elapsed time")
    if new_rta < elapsed:
        raise ValueError("new arrival deadline precedes elapsed time")
    return RouteScenario(
        sectors=scenario.sectors[completed:],
        rta=new_rta - elapsed,
        alpha=scenario.alpha,
    )


# ---------------------------------------------------------------------------
# Scenario files
# ---------------------------------------------------------------------------

_FUEL_KEYS = {"a", "b", "c", "e"}
_SECTOR_KEYS = {"length", "parallel_flow", "perp_flow", "fuel"}
_TOP_KEYS = {"sectors", "rta", "alpha", "encoding"}
_ENCODING_KEYS = {"j_min", "j_max"}


def _reject_unknown(mapping: dict, allowed: set[str], where: str) -> None:
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        raise ValueError(f"unknown field(s) in {where}: {', '.join(unknown)}")


def _number(mapping: dict, key: str, where: str, default: float | None = None) -> float:
    if key not in mapping:
        if default is not None:
            return default
        raise ValueError(f"missing field '{key}' in {where}")
    value = mapping[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"field '{key}' in {where} must be a number")
    return float(value)


def _integer(mapping: dict, key: str, where: str) -> int:
    if key not in mapping:
        raise ValueError(f"missing field '{key}' in {where}")
    value = mapping[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"field '{key}' in {where} must be an integer")
    return value


def parse_scenario(doc: dict) -> tuple[RouteScenario, EncodingConfig]:
    """Build and validate a scenario (plus its encoding) from a parsed JSON
    document. Unknown fields are rejected at every level; perp_flow, c and e
    default to 0 and the encoding defaults to (-5, 0)."""
    if not isinstance(doc, dict):
        raise ValueError("scenario document must be a JSON object")
    _reject_unknown(doc, _TOP_KEYS, "scenario")
    raw_sectors = doc.get("sectors")
    if not isinstance(raw_sectors, list):
        raise ValueError("missing or non-array field 'sectors' in scenario")
    sectors: list[Sector] = []
    for i, raw in enumerate(raw_sectors):
        where = f"sector {i}"
        if not isinstance(raw, dict):
            raise ValueError(f"{where} must be a JSON object")
        _reject_unknown(raw, _SECTOR_KEYS, where)
        raw_fuel = raw.get("fuel")
        if not isinstance(raw_fuel, dict):
            raise ValueError(f"missing or non-object field 'fuel' in {where}")
        _reject_unknown(raw_fuel, _FUEL_KEYS, f"{where} fuel")
        fuel = FuelModel(
            a=_number(raw_fuel, "a", f"{where} fuel"),
            b=_number(raw_fuel, "b", f"{where} fuel"),
            c=_number(raw_fuel, "c", f"{where} fuel", default=0.0),
            e=_number(raw_fuel, "e", f"{where} fuel", default=0.0),
        )
        sectors.append(Sector(
            length=_number(raw, "length", where),
            fuel=fuel,
            parallel_flow=_number(raw, "parallel_flow", where),
            perp_flow=_number(raw, "perp_flow", where, default=0.0),
        ))
    scenario = RouteScenario(
        sectors=tuple(sectors),
        rta=_number(doc, "rta", "scenario"),
        alpha=_number(doc, "alpha", "scenario"),
    )
    if "encoding" in doc:
        raw_enc = doc["encoding"]
        if not isinstance(raw_enc, dict):
            raise ValueError("field 'encoding' must be a JSON object")
        _reject_unknown(raw_enc, _ENCODING_KEYS, "encoding")
        enc = EncodingConfig(
            j_min=_integer(raw_enc, "j_min", "encoding"),
            j_max=_integer(raw_enc, "j_max", "encoding"),
        )
    else:
        enc = DEFAULT_ENCODING
    return validate_scenario(scenario), enc


def load_scenario(path: str | Path) -> tuple[RouteScenario, EncodingConfig]:
    """Read, parse and validate a scenario file."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return parse_scenario(doc)
