"""Multilinear pseudo-Boolean polynomials over voyage-plan bits.

Builders compile a route scenario into an unconstrained binary polynomial:
a degree-<=2 form over pace bits when every fuel curve is linear, and a
higher-order form over pace and ground-speed bits, tied together by a
reciprocal-consistency penalty, when fuel is quadratic. Degree reduction via
the standard pair-substitution gadget and the {0,1} -> {-1,+1} change of
basis prepare problems for annealing-style backends; JSON export/import
round-trips them losslessly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .scenario import (
    DEFAULT_ENCODING,
    EncodingConfig,
    RouteScenario,
    ground_speed_coefficients,
    validate_scenario,
)

DEFAULT_SPEED_ENCODING = EncodingConfig(0, 4)

TermKey = tuple[int, ...]


class PseudoBooleanPolynomial:
    """A multilinear polynomial over binary variables, any degree.

    Terms map sorted, duplicate-free index tuples to nonzero coefficients;
    the empty tuple holds the constant offset. Repeated indices collapse on
    construction (x*x == x) and exactly-zero coefficients are dropped, so two
    polynomials are equal iff they evaluate equally everywhere. Instances are
    treated as immutable.
    """

    __slots__ = ("num_vars", "terms")

    def __init__(self, num_vars: int,
                 terms: Mapping[Sequence[int], float] | Iterable[tuple[Sequence[int], float]] = ()):
        if not isinstance(num_vars, int) or isinstance(num_vars, bool) or num_vars < 0:
            raise ValueError("num_vars must be a non-negative integer")
        items = terms.items() if isinstance(terms, Mapping) else terms
        canonical: dict[TermKey, float] = {}
        for indices, coeff in items:
            for q in indices:
                if isinstance(q, bool) or not isinstance(q, (int, np.integer)) \
                        or not 0 <= q < num_vars:
                    raise ValueError(f"variable index {q!r} outside 0..{num_vars - 1}")
            key = tuple(sorted({int(q) for q in indices}))
            canonical[key] = canonical.get(key, 0.0) + float(coeff)
        self.num_vars = num_vars
        self.terms = {
            key: canonical[key]
            for key in sorted(canonical, key=lambda k: (len(k), k))
            if canonical[key] != 0.0
        }

    @property
    def degree(self) -> int:
        return max((len(key) for key in self.terms), default=0)

    def coefficient(self, indices: Sequence[int]) -> float:
        return self.terms.get(tuple(sorted(set(indices))), 0.0)

    def evaluate(self, bits: Sequence[int]) -> float:
        """Sum of coefficient * product of the term's bits."""
        if len(bits) != self.num_vars:
            raise ValueError(f"expected {self.num_vars} bits, got {len(bits)}")
        total = 0.0
        for key, coeff in self.terms.items():
            for q in key:
                if not bits[q]:
                    break
            else:
                total += coeff
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, PseudoBooleanPolynomial):
            return NotImplemented
        return self.num_vars == other.num_vars and self.terms == other.terms

    def __repr__(self) -> str:
        return f"PseudoBooleanPolynomial(num_vars={self.num_vars}, terms={len(self.terms)}, degree={self.degree})"


def evaluate_on_integers(pbp: PseudoBooleanPolynomial, codes) -> np.ndarray:
    """Vectorized evaluation on basis indices.

    Bit q of each integer code is variable q (little-endian), matching the
    qubit convention of the statevector simulator.
    """
    codes = np.asarray(codes, dtype=np.int64)
    out = np.zeros(codes.shape, dtype=np.float64)
    for key, coeff in pbp.terms.items():
        if key:
            mask = np.ones(codes.shape, dtype=bool)
            for q in key:
                mask &= ((codes >> q) & 1).astype(bool)
            out += coeff * mask
        else:
            out += coeff
    return out


# ---------------------------------------------------------------------------
# Variable roles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UBit:
    """Pace bit: exponent `exponent` of sector `sector`'s inverse speed."""
    sector: int
    exponent: int


@dataclass(frozen=True)
class WBit:
    """Ground-speed bit: exponent `exponent` of sector `sector`'s speed."""
    sector: int
    exponent: int


@dataclass(frozen=True)
class AuxVar:
    """Degree-reduction variable standing for the product of two parents."""
    parent_a: int
    parent_b: int


@dataclass(frozen=True)
class PlainVar:
    """An unlabeled binary variable (polynomials built outside the scenario
    pipeline)."""
    index: int


Role = Union[UBit, WBit, AuxVar, PlainVar]


@dataclass(frozen=True)
class VariableMap:
    """Bijection between flat variable indices and semantic roles.

    entries[i] is the role of variable i. Builders lay out pace bits first
    (sector-major, exponent ascending), then ground-speed bits in the same
    order, then auxiliary variables in creation order.
    """

    entries: tuple[Role, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, index: int) -> Role:
        return self.entries[index]

    def with_aux(self, pairs: Iterable[tuple[int, int]]) -> "VariableMap":
        return VariableMap(self.entries + tuple(AuxVar(p, q) for p, q in pairs))

    @classmethod
    def pace_grid(cls, num_sectors: int, enc: EncodingConfig) -> "VariableMap":
        entries = [
            UBit(i, j)
            for i in range(num_sectors)
            for j in range(enc.j_min, enc.j_max + 1)
        ]
        return cls(tuple(entries))

    @classmethod
    def pace_speed_grid(cls, num_sectors: int, enc_u: EncodingConfig,
                        enc_w: EncodingConfig) -> "VariableMap":
        entries: list[Role] = [
            UBit(i, j)
            for i in range(num_sectors)
            for j in range(enc_u.j_min, enc_u.j_max + 1)
        ]
        entries += [
            WBit(i, k)
            for i in range(num_sectors)
            for k in range(enc_w.j_min, enc_w.j_max + 1)
        ]
        return cls(tuple(entries))

    @classmethod
    def plain(cls, num_vars: int) -> "VariableMap":
        return cls(tuple(PlainVar(i) for i in range(num_vars)))


# ---------------------------------------------------------------------------
# Ising form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsingModel:
    """Spin model over {-1,+1}: offset + sum h_i s_i + sum_{i<j} J_ij s_i s_j."""

    num_spins: int
    h: tuple[float, ...]
    J: dict[tuple[int, int], float]
    offset: float

    def energy(self, spins: Sequence[int]) -> float:
        if len(spins) != self.num_spins:
            raise ValueError(f"expected {self.num_spins} spins, got {len(spins)}")
        if any(s not in (-1, 1) for s in spins):
            raise ValueError("spin values must be -1 or +1")
        total = self.offset
        for i, field in enumerate(self.h):
            total += field * spins[i]
        for (i, j), coupling in self.J.items():
            total += coupling * spins[i] * spins[j]
        return total


def ising_energy(model: IsingModel, spins: Sequence[int]) -> float:
    return model.energy(spins)


def to_ising(pbp: PseudoBooleanPolynomial) -> IsingModel:
    """Change of basis x = (1 + s)/2; exact for degree <= 2 polynomials."""
    if pbp.degree > 2:
        raise ValueError(f"polynomial has degree {pbp.degree}; quadratize to degree <= 2 first")
    offset = 0.0
    h = [0.0] * pbp.num_vars
    couplings: dict[tuple[int, int], float] = {}
    for key, coeff in pbp.terms.items():
        if len(key) == 0:
            offset += coeff
        elif len(key) == 1:
            offset += coeff / 2.0
            h[key[0]] += coeff / 2.0
        else:
            i, j = key
            offset += coeff / 4.0
            h[i] += coeff / 4.0
            h[j] += coeff / 4.0
            couplings[(i, j)] = couplings.get((i, j), 0.0) + coeff / 4.0
    couplings = {k: v for k, v in sorted(couplings.items()) if v != 0.0}
    return IsingModel(num_spins=pbp.num_vars, h=tuple(h), J=couplings, offset=offset)


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def _add(acc: dict[TermKey, float], indices: Iterable[int], coeff: float) -> None:
    key = tuple(sorted(set(indices)))
    acc[key] = acc.get(key, 0.0) + coeff


def _add_arrival_penalty(acc: dict[TermKey, float], time_weights: list[tuple[int, float]],
                         alpha: float, rta: float) -> None:
    """alpha * (sum_v tw_v x_v - rta)**2, expanded multilinearly."""
    if alpha == 0.0:
        return
    _add(acc, (), alpha * rta * rta)
    for v, tw in time_weights:
        _add(acc, (v,), alpha * tw * tw - 2.0 * alpha * rta * tw)
    for a in range(len(time_weights)):
        va, ta = time_weights[a]
        for b in range(a + 1, len(time_weights)):
            vb, tb = time_weights[b]
            _add(acc, (va, vb), 2.0 * alpha * ta * tb)


def build_linear_qubo(scenario: RouteScenario,
                      enc: EncodingConfig = DEFAULT_ENCODING
                      ) -> tuple[PseudoBooleanPolynomial, VariableMap]:
    """Compile a linear-fuel scenario to a degree-<=2 polynomial over pace bits.

    The polynomial equals, on every bitstring, the exact voyage cost of the
    decoded plan: per-sector A*s*u fuel, the constant B*s fuel floor, and the
    quadratic arrival penalty. Requires every sector's fuel curve to be linear
    (c == 0).
    """
    validate_scenario(scenario)
    for i, sec in enumerate(scenario.sectors):
        if sec.fuel.c != 0.0:
            raise ValueError(f"sector {i}: quadratic fuel rate; use the higher-order builder")
    num_vars = scenario.num_sectors * enc.bits
    weights = enc.weights
    acc: dict[TermKey, float] = {}
    time_weights: list[tuple[int, float]] = []
    for i, sec in enumerate(scenario.sectors):
        a_coeff, b_coeff, _ = ground_speed_coefficients(sec)
        _add(acc, (), b_coeff * sec.length)
        for q, bit_weight in enumerate(weights):
            v = i * enc.bits + q
            _add(acc, (v,), a_coeff * sec.length * bit_weight)
            time_weights.append((v, sec.length * bit_weight))
    _add_arrival_penalty(acc, time_weights, scenario.alpha, scenario.rta)
    return PseudoBooleanPolynomial(num_vars, acc), VariableMap.pace_grid(scenario.num_sectors, enc)


def default_reciprocal_penalty(objective: PseudoBooleanPolynomial) -> float:
    """Default weight for the reciprocal-consistency penalty: ten times the
    objective's total coefficient mass (1.0 for an all-zero objective)."""
    mass = sum(abs(c) for c in objective.terms.values())
    return 10.0 * mass if mass > 0.0 else 1.0


def build_quadratic_hobo(scenario: RouteScenario,
                         enc_u: EncodingConfig = DEFAULT_ENCODING,
                         enc_w: EncodingConfig = DEFAULT_SPEED_ENCODING,
                         penalty_weight: float | None = None,
                         ) -> tuple[PseudoBooleanPolynomial, VariableMap]:
    """Compile a (possibly) quadratic-fuel scenario to a higher-order polynomial.

    Ground speed gets its own binary encoding; each sector contributes
    A*s*u + B*s + G*s*w plus the arrival penalty, and a penalty
    P*(w*u - 1)**2 ties the speed bits to the pace bits (degree 4). On bit
    patterns where w*u == 1 for every sector the value equals the exact
    quadratic-fuel voyage cost, since G*s*w == G*s*w**2*u there.

    penalty_weight=None picks default_reciprocal_penalty(objective).
    """
    validate_scenario(scenario)
    n = scenario.num_sectors
    num_u = n * enc_u.bits
    num_vars = num_u + n * enc_w.bits
    u_weights = enc_u.weights
    w_weights = enc_w.weights

    acc: dict[TermKey, float] = {}
    time_weights: list[tuple[int, float]] = []
    for i, sec in enumerate(scenario.sectors):
        a_coeff, b_coeff, g_coeff = ground_speed_coefficients(sec)
        _add(acc, (), b_coeff * sec.length)
        for q, bw in enumerate(u_weights):
            v = i * enc_u.bits + q
            _add(acc, (v,), a_coeff * sec.length * bw)
            time_weights.append((v, sec.length * bw))
        for k, bw in enumerate(w_weights):
            v = num_u + i * enc_w.bits + k
            _add(acc, (v,), g_coeff * sec.length * bw)
    _add_arrival_penalty(acc, time_weights, scenario.alpha, scenario.rta)

    objective = PseudoBooleanPolynomial(num_vars, acc)
    pen = default_reciprocal_penalty(objective) if penalty_weight is None else penalty_weight
    if not pen > 0.0:
        raise ValueError("non-positive penalty weight")

    for i in range(n):
        # P * (w_i*u_i - 1)^2 with w_i*u_i expanded as a bilinear bit form.
        bilinear: list[tuple[int, int, float]] = []
        for q, uw in enumerate(u_weights):
            vu = i * enc_u.bits + q
            for k, ww in enumerate(w_weights):
                vw = num_u + i * enc_w.bits + k
                bilinear.append((vu, vw, uw * ww))
        _add(acc, (), pen)
        for vu, vw, coeff in bilinear:
            _add(acc, (vu, vw), -2.0 * pen * coeff)
        for vu1, vw1, c1 in bilinear:
            for vu2, vw2, c2 in bilinear:
                _add(acc, (vu1, vw1, vu2, vw2), pen * c1 * c2)

    varmap = VariableMap.pace_speed_grid(n, enc_u, enc_w)
    return PseudoBooleanPolynomial(num_vars, acc), varmap


# ---------------------------------------------------------------------------
# Degree reduction
# ---------------------------------------------------------------------------

def default_reduction_weight(pbp: PseudoBooleanPolynomial) -> float:
    """One plus the polynomial's total coefficient mass: provably enough for
    the pair-substitution gadget to preserve every minimizer."""
    return 1.0 + sum(abs(c) for c in pbp.terms.values())


def quadratize(pbp: PseudoBooleanPolynomial, weight: float | None = None,
               varmap: VariableMap | None = None,
               ) -> tuple[PseudoBooleanPolynomial, VariableMap]:
    """Reduce a polynomial to degree <= 2 with product-substitution variables.

    Repeatedly picks the variable pair occurring in the most terms of degree
    >= 3 (ties: lowest pair lexicographically), replaces the pair by a fresh
    variable y inside those terms, and adds the enforcement gadget
    weight * (x_p x_q - 2 x_p y - 2 x_q y + 3 y), which is zero exactly when
    y == x_p x_q and at least `weight` otherwise. With weight=None the default
    exceeds the input's coefficient mass, so minimizing the output over the
    added variables reproduces the input value on every original assignment.

    Returns the reduced polynomial and the variable map extended with the
    added variables; varmap=None labels the original variables as plain.
    """
    if weight is None:
        weight = default_reduction_weight(pbp)
    if not weight > 0.0:
        raise ValueError("non-positive reduction weight")
    if varmap is None:
        varmap = VariableMap.plain(pbp.num_vars)
    if len(varmap) != pbp.num_vars:
        raise ValueError(f"variable map covers {len(varmap)} variables, polynomial has {pbp.num_vars}")

    terms = dict(pbp.terms)
    num_vars = pbp.num_vars
    aux_pairs: list[tuple[int, int]] = []
    while True:
        high = [key for key in terms if len(key) >= 3]
        if not high:
            break
        counts: dict[tuple[int, int], int] = {}
        for key in high:
            for a in range(len(key)):
                for b in range(a + 1, len(key)):
                    pair = (key[a], key[b])
                    counts[pair] = counts.get(pair, 0) + 1
        top = max(counts.values())
        p, q = min(pair for pair, c in counts.items() if c == top)
        y = num_vars
        num_vars += 1
        aux_pairs.append((p, q))
        for key in high:
            if p in key and q in key:
                coeff = terms.pop(key)
                new_key = tuple(sorted((set(key) - {p, q}) | {y}))
                terms[new_key] = terms.get(new_key, 0.0) + coeff
                if terms[new_key] == 0.0:
                    del terms[new_key]
        for key, coeff in (((p, q), weight), ((p, y), -2.0 * weight),
                           ((q, y), -2.0 * weight), ((y,), 3.0 * weight)):
            terms[key] = terms.get(key, 0.0) + coeff
            if terms[key] == 0.0:
                del terms[key]
    return PseudoBooleanPolynomial(num_vars, terms), varmap.with_aux(aux_pairs)


# ---------------------------------------------------------------------------
# Problem files
# ---------------------------------------------------------------------------

_ROLE_NAMES = {UBit: "u", WBit: "w", AuxVar: "aux", PlainVar: "x"}


def _varmap_to_json(varmap: VariableMap) -> list[dict]:
    rows = []
    for entry in varmap.entries:
        role = _ROLE_NAMES[type(entry)]
        if isinstance(entry, (UBit, WBit)):
            rows.append({"role": role, "sector": entry.sector, "exponent": entry.exponent})
        elif isinstance(entry, AuxVar):
            # Parent indices ride in the two integer slots of the row shape.
            rows.append({"role": role, "sector": entry.parent_a, "exponent": entry.parent_b})
        else:
            rows.append({"role": role, "sector": entry.index, "exponent": 0})
    return rows


def _varmap_from_json(rows, num_vars: int) -> VariableMap:
    if not isinstance(rows, list):
        raise ValueError("variable_map must be an array")
    if len(rows) != num_vars:
        raise ValueError(f"variable_map covers {len(rows)} variables, expected {num_vars}")
    entries: list[Role] = []
    for i, row in enumerate(rows):
        where = f"variable_map entry {i}"
        if not isinstance(row, dict):
            raise ValueError(f"{where} must be an object")
        if set(row) != {"role", "sector", "exponent"}:
            raise ValueError(f"{where} must have exactly role/sector/exponent")
        role, sector, exponent = row["role"], row["sector"], row["exponent"]
        for v in (sector, exponent):
            if not isinstance(v, int) or isinstance(v, bool):
                raise ValueError(f"{where}: sector/exponent must be integers")
        if role == "u":
            entries.append(UBit(sector, exponent))
        elif role == "w":
            entries.append(WBit(sector, exponent))
        elif role == "aux":
            entries.append(AuxVar(sector, exponent))
        elif role == "x":
            entries.append(PlainVar(sector))
        else:
            raise ValueError(f"{where}: unknown role {role!r}")
    return VariableMap(tuple(entries))


def export_problem(pbp: PseudoBooleanPolynomial, varmap: VariableMap,
                   destination: str | Path) -> None:
    """Write a polynomial and its variable map as a JSON problem file.

    Terms are sorted by (degree, indices); the empty index list holds the
    offset. For "aux" variable-map rows the sector/exponent slots carry the
    two parent indices; "x" rows label plain variables by their own index.
    """
    if len(varmap) != pbp.num_vars:
        raise ValueError(f"variable map covers {len(varmap)} variables, polynomial has {pbp.num_vars}")
    doc = {
        "num_vars": pbp.num_vars,
        "terms": [{"vars": list(key), "coeff": coeff} for key, coeff in pbp.terms.items()],
        "variable_map": _varmap_to_json(varmap),
    }
    with open(destination, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def import_problem(source: str | Path) -> tuple[PseudoBooleanPolynomial, VariableMap]:
    """Read a problem file back; strict, lossless inverse of export_problem.

    Rejects malformed documents, out-of-range indices, unsorted or repeated
    index lists, and duplicate term keys.
    """
    with open(source, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or set(doc) != {"num_vars", "terms", "variable_map"}:
        raise ValueError("malformed problem document: expected num_vars/terms/variable_map")
    num_vars = doc["num_vars"]
    if not isinstance(num_vars, int) or isinstance(num_vars, bool) or num_vars < 0:
        raise ValueError("malformed problem document: bad num_vars")
    raw_terms = doc["terms"]
    if not isinstance(raw_terms, list):
        raise ValueError("malformed problem document: terms must be an array")
    seen: set[TermKey] = set()
    terms: dict[TermKey, float] = {}
    for i, row in enumerate(raw_terms):
        where = f"term {i}"
        if not isinstance(row, dict) or set(row) != {"vars", "coeff"}:
            raise ValueError(f"malformed problem document: {where} must have vars/coeff")
        indices, coeff = row["vars"], row["coeff"]
        if not isinstance(indices, list):
            raise ValueError(f"malformed problem document: {where} vars must be an array")
        for q in indices:
            if not isinstance(q, int) or isinstance(q, bool) or not 0 <= q < num_vars:
                raise ValueError(f"{where}: variable index {q!r} outside 0..{num_vars - 1}")
        key = tuple(indices)
        if list(key) != sorted(set(key)):
            raise ValueError(f"{where}: vars must be strictly ascending")
        if key in seen:
            raise ValueError(f"duplicate term {list(key)}")
        seen.add(key)
        if isinstance(coeff, bool) or not isinstance(coeff, (int, float)):
            raise ValueError(f"{where}: coeff must be a number")
        terms[key] = float(coeff)
    varmap = _varmap_from_json(doc["variable_map"], num_vars)
    return PseudoBooleanPolynomial(num_vars, terms), varmap


def export_ising(model: IsingModel, varmap: VariableMap,
                 destination: str | Path) -> None:
    """Write a spin model as JSON: fields h, couplings J as [i, j, value]
    triples with i < j, the constant offset, and the variable map."""
    if len(varmap) != model.num_spins:
        raise ValueError(f"variable map covers {len(varmap)} variables, model has {model.num_spins}")
    doc = {
        "num_vars": model.num_spins,
        "h": list(model.h),
        "J": [[i, j, coeff] for (i, j), coeff in sorted(model.J.items())],
        "offset": model.offset,
        "variable_map": _varmap_to_json(varmap),
    }
    with open(destination, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
