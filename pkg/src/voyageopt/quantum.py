"""Statevector simulation of annealing-style quantum optimization.

Two simulated algorithms act on the diagonal Hamiltonian whose eigenvalue on
each basis state is the cost polynomial's value there: alternating
phase-separator/mixer layers with classically optimized angles, and continuous
interpolation from the transverse-field ground state integrated by first-order
operator splitting. Qubit q is bit q of the basis index (little-endian), and
the transverse-field mixer is fixed to -sum_q sigma_x(q), whose ground state
is the uniform superposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .polynomial import PseudoBooleanPolynomial, evaluate_on_integers

QUBIT_LIMIT = 20
_NORM_TOL = 1e-9


@dataclass(frozen=True)
class DiagonalHamiltonian:
    """Diagonal cost operator: energies[z] is the cost of basis state z."""

    num_qubits: int
    energies: np.ndarray
    min_energy: float
    max_energy: float

    def __post_init__(self):
        if self.energies.shape != (1 << self.num_qubits,):
            raise ValueError("energies length must be 2**num_qubits")

    def rescaled(self) -> "DiagonalHamiltonian":
        """Affine rescale of the spectrum to [0, 1]; a flat spectrum maps to
        all zeros. Minimizer sets are unchanged."""
        span = self.max_energy - self.min_energy
        if span == 0.0:
            scaled = np.zeros_like(self.energies)
        else:
            scaled = (self.energies - self.min_energy) / span
        return _make_hamiltonian(self.num_qubits, scaled)


def _make_hamiltonian(num_qubits: int, energies: np.ndarray) -> DiagonalHamiltonian:
    energies = np.asarray(energies, dtype=np.float64)
    energies.setflags(write=False)
    return DiagonalHamiltonian(
        num_qubits=num_qubits,
        energies=energies,
        min_energy=float(energies.min()),
        max_energy=float(energies.max()),
    )


def build_diagonal(pbp: PseudoBooleanPolynomial) -> DiagonalHamiltonian:
    """Tabulate a polynomial over all basis states (variable q = bit q)."""
    if pbp.num_vars > QUBIT_LIMIT:
        raise ValueError(f"{pbp.num_vars} variables exceeds the qubit limit {QUBIT_LIMIT}")
    codes = np.arange(1 << pbp.num_vars, dtype=np.int64)
    return _make_hamiltonian(pbp.num_vars, evaluate_on_integers(pbp, codes))


class StateVector:
    """2**N complex amplitudes with unit norm (checked to 1e-9)."""

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, num_qubits: int, amplitudes: np.ndarray):
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        if amplitudes.shape != (1 << num_qubits,):
            raise ValueError("amplitude count must be 2**num_qubits")
        norm = float(np.sum(np.abs(amplitudes) ** 2))
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"state vector norm {norm} deviates from 1 beyond {_NORM_TOL}")
        self.num_qubits = num_qubits
        self.amplitudes = amplitudes

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))


def init_uniform(num_qubits: int) -> StateVector:
    """The uniform superposition: every amplitude 2**(-N/2), phase 0."""
    if num_qubits > QUBIT_LIMIT:
        raise ValueError(f"{num_qubits} qubits exceeds the qubit limit {QUBIT_LIMIT}")
    dim = 1 << num_qubits
    return StateVector(num_qubits, np.full(dim, dim ** -0.5, dtype=np.complex128))


def apply_phase(state: StateVector, ham: DiagonalHamiltonian, gamma: float) -> StateVector:
    """Phase separator exp(-i * gamma * H): amplitude[z] *= exp(-i*gamma*E[z])."""
    if ham.num_qubits != state.num_qubits:
        raise ValueError("state and Hamiltonian qubit counts differ")
    return StateVector(state.num_qubits, state.amplitudes * np.exp(-1j * gamma * ham.energies))


def _mix_inplace(amplitudes: np.ndarray, beta: float, num_qubits: int) -> None:
    c = math.cos(beta)
    s = 1j * math.sin(beta)
    for q in range(num_qubits):
        view = amplitudes.reshape(-1, 2, 1 << q)
        a0 = view[:, 0, :].copy()
        a1 = view[:, 1, :].copy()
        view[:, 0, :] = c * a0 + s * a1
        view[:, 1, :] = s * a0 + c * a1


def apply_mixer(state: StateVector, beta: float) -> StateVector:
    """Transverse-field layer exp(-i * beta * H_mix) with H_mix = -sum sigma_x.

    Per qubit this is the unitary [[cos b, i sin b], [i sin b, cos b]] applied
    to each amplitude pair differing in that qubit only.
    """
    amplitudes = state.amplitudes.copy()
    _mix_inplace(amplitudes, beta, state.num_qubits)
    return StateVector(state.num_qubits, amplitudes)


def expectation_value(state: StateVector, ham: DiagonalHamiltonian) -> float:
    if ham.num_qubits != state.num_qubits:
        raise ValueError("state and Hamiltonian qubit counts differ")
    return float(np.sum(ham.energies * state.probabilities()))


# ---------------------------------------------------------------------------
# Layered (phase/mixer) algorithm
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QaoaParams:
    """Angles of a p-layer phase/mixer circuit."""

    p: int
    betas: tuple[float, ...]
    gammas: tuple[float, ...]

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("layer count must be >= 1")
        object.__setattr__(self, "betas", tuple(self.betas))
        object.__setattr__(self, "gammas", tuple(self.gammas))
        if len(self.betas) != self.p or len(self.gammas) != self.p:
            raise ValueError("betas and gammas must each have length p")


def qaoa_state(ham: DiagonalHamiltonian, params: QaoaParams) -> StateVector:
    """Run the layered circuit from the uniform state: per layer k, the phase
    separator with gamma_k then the mixer with beta_k."""
    amplitudes = init_uniform(ham.num_qubits).amplitudes.copy()
    for beta, gamma in zip(params.betas, params.gammas):
        amplitudes *= np.exp(-1j * gamma * ham.energies)
        _mix_inplace(amplitudes, beta, ham.num_qubits)
    return StateVector(ham.num_qubits, amplitudes)


def qaoa_expectation(ham: DiagonalHamiltonian, params: QaoaParams) -> float:
    """Energy expectation of the layered circuit's output state; always lies
    within [min energy, max energy]."""
    return expectation_value(qaoa_state(ham, params), ham)


def _coordinate_descent(ham: DiagonalHamiltonian, start: np.ndarray, p: int,
                        counter: list[int], trace: list | None,
                        best_seen: list[float]) -> tuple[np.ndarray, float]:
    """Cyclic coordinate descent with +-delta trial steps, delta halved after
    each sweep without improvement, from 0.5 down to 1e-4."""

    def value(vec: np.ndarray) -> float:
        params = QaoaParams(p, tuple(vec[:p]), tuple(vec[p:]))
        v = qaoa_expectation(ham, params)
        counter[0] += 1
        if trace is not None and v < best_seen[0]:
            best_seen[0] = v
            trace.append((counter[0], v))
        return v

    point = start.copy()
    best = value(point)
    delta = 0.5
    while delta >= 1e-4:
        improved = False
        for i in range(2 * p):
            for step in (delta, -delta):
                trial = point.copy()
                trial[i] += step
                trial_value = value(trial)
                if trial_value < best:
                    point, best, improved = trial, trial_value, True
                    break
        if not improved:
            delta *= 0.5
    return point, best


def qaoa_optimize(ham: DiagonalHamiltonian, p: int, restarts: int = 8, seed: int = 0,
                  warm_starts: Iterable[QaoaParams] = (),
                  trace: list | None = None) -> tuple[QaoaParams, float]:
    """Derivative-free angle search: seeded random restarts with beta in
    [0, pi) and gamma in [0, 2*pi), each refined by coordinate descent.

    warm_starts are searched first (handy for padding a (p-1)-layer optimum
    with an identity layer). Deterministic given (ham, p, restarts, seed,
    warm_starts). If `trace` is a list, (evaluation index, expectation) rows
    are appended every time the best-so-far improves.
    """
    if p < 1:
        raise ValueError("layer count must be >= 1")
    if restarts < 0:
        raise ValueError("restarts must be >= 0")
    starts: list[np.ndarray] = []
    for params in warm_starts:
        if params.p != p:
            raise ValueError("warm start layer count differs from p")
        starts.append(np.array(params.betas + params.gammas, dtype=np.float64))
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    for _ in range(restarts):
        betas = rng.uniform(0.0, math.pi, p)
        gammas = rng.uniform(0.0, 2.0 * math.pi, p)
        starts.append(np.concatenate([betas, gammas]))
    if not starts:
        raise ValueError("no starting points: restarts == 0 and no warm starts")

    counter = [0]
    best_seen = [math.inf]
    best_vec: np.ndarray | None = None
    best_value = math.inf
    for start in starts:
        vec, val = _coordinate_descent(ham, start, p, counter, trace, best_seen)
        if val < best_value:
            best_vec, best_value = vec, val
    params = QaoaParams(p, tuple(float(x) for x in best_vec[:p]),
                        tuple(float(x) for x in best_vec[p:]))
    return params, best_value


def sample(state: StateVector, shots: int, seed: int = 0) -> dict[tuple[int, ...], int]:
    """Draw basis states from |amplitude|^2; Philox-seeded, counts sum to shots."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = state.probabilities()
    probs = probs / probs.sum()
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    draws = rng.choice(len(probs), size=shots, p=probs)
    codes, counts = np.unique(draws, return_counts=True)
    n = state.num_qubits
    return {
        tuple((int(code) >> q) & 1 for q in range(n)): int(count)
        for code, count in zip(codes, counts)
    }


# ---------------------------------------------------------------------------
# Interpolated evolution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AdiabaticConfig:
    """Evolution time, step count, and interpolation schedule.

    schedule maps t in [0, T] to s in [0, 1] with s(0) == 0 and s(T) == 1,
    monotone non-decreasing; None means the linear ramp t/T.
    """

    total_time: float
    steps: int
    schedule: Callable[[float], float] | None = None

    def __post_init__(self):
        if not self.total_time > 0 or not math.isfinite(self.total_time):
            raise ValueError("total_time must be positive and finite")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")


def adiabatic_evolve(ham: DiagonalHamiltonian, cfg: AdiabaticConfig,
                     rescale: bool = True,
                     callback: Callable[[int, float, float, np.ndarray], None] | None = None,
                     ) -> StateVector:
    """Integrate the interpolation (1-s)*H_mix + s*H_cost from the uniform state.

    First-order operator splitting with the schedule evaluated at each step's
    midpoint: mixer with angle (1-s)*dt, then phase with angle s*dt. By
    default the cost spectrum is first rescaled to [0, 1] (raw voyage costs
    span ~1e4, which would demand absurdly small steps; the rescale preserves
    minimizers). callback(step, t, s, amplitudes) fires after each step with a
    read-only view; amplitudes must not be mutated.
    """
    total_time, steps = cfg.total_time, cfg.steps
    schedule = cfg.schedule if cfg.schedule is not None else (lambda t: t / total_time)
    if schedule(0.0) != 0.0 or schedule(total_time) != 1.0:
        raise ValueError("schedule must satisfy s(0) == 0 and s(T) == 1")
    energies = (ham.rescaled() if rescale else ham).energies
    amplitudes = init_uniform(ham.num_qubits).amplitudes.copy()
    dt = total_time / steps
    previous_s = 0.0
    for step in range(steps):
        t_mid = (step + 0.5) * dt
        s_mid = schedule(t_mid)
        if s_mid < previous_s:
            raise ValueError("schedule must be monotone non-decreasing")
        previous_s = s_mid
        _mix_inplace(amplitudes, (1.0 - s_mid) * dt, ham.num_qubits)
        amplitudes *= np.exp(-1j * s_mid * dt * energies)
        if callback is not None:
            view = amplitudes.view()
            view.setflags(write=False)
            callback(step, (step + 1) * dt, s_mid, view)
    return StateVector(ham.num_qubits, amplitudes)


def ground_overlap(state: StateVector, minimizers: Iterable[Sequence[int]]) -> float:
    """Probability mass of the state on a set of basis bitstrings."""
    probs = state.probabilities()
    total = 0.0
    for bits in minimizers:
        if len(bits) != state.num_qubits:
            raise ValueError(f"bitstring length {len(bits)} does not match {state.num_qubits} qubits")
        if any(b not in (0, 1) for b in bits):
            raise ValueError("bits must be 0 or 1")
        code = sum(b << q for q, b in enumerate(bits))
        total += float(probs[code])
    return total
