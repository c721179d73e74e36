"""Acceptance gate: one test per release criterion, each printing a PASS/FAIL
line with the measured numbers. Run with `pytest tests/test_acceptance.py -v -s`
to see the lines.

Reference instances: REF1 (one 100-unit sector, unit constant fuel rate,
alpha 1, RTA 6; 6 variables) and REF2 (two such sectors, RTA 12; 12
variables). Derived expectations below are confirmed against the brute-force
oracle inside the tests themselves before being asserted.
"""

from __future__ import annotations

import json
import time

import numpy as np
import pytest

from voyageopt import (
    AnnealConfig,
    PseudoBooleanPolynomial,
    adiabatic_evolve,
    AdiabaticConfig,
    brute_force,
    build_diagonal,
    build_linear_qubo,
    decode,
    encode_levels,
    evaluate_on_integers,
    ground_overlap,
    qaoa_optimize,
    qaoa_state,
    quadratize,
    replan,
    sample,
    scenario_cost,
    simulated_annealing,
    to_ising,
)
from voyageopt.cli import main
from conftest import REF1_DOC, REF2_DOC, make_ref_scenario


def report(criterion: int, ok: bool, detail: str) -> bool:
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {criterion} {status} - {detail}")
    return ok


def test_criterion_1_builder_matches_cost_oracle_on_ref2():
    """Polynomial value equals the decoded-plan cost on all 4096 bitstrings."""
    ref2 = make_ref_scenario(2, rta=12.0)
    started = time.perf_counter()
    pbp, _ = build_linear_qubo(ref2)
    qubo_values = evaluate_on_integers(pbp, np.arange(1 << 12))
    worst = 0.0
    for code in range(1 << 12):
        bits = [(code >> q) & 1 for q in range(12)]
        oracle = scenario_cost(decode(bits, ref2), ref2).total
        worst = max(worst, abs(qubo_values[code] - oracle))
    elapsed = time.perf_counter() - started
    ok = worst < 1e-9 and elapsed < 1.0
    assert report(1, ok, f"max|builder - oracle| = {worst:.3e} over 4096 bitstrings "
                         f"in {elapsed:.2f}s")


def test_criterion_2_reference_optima():
    """REF2 optimum 12.75 with exactly the u1+u2 = 4/32 family; REF1 optimum
    6.3125 at u = 2/32."""
    ref2 = make_ref_scenario(2, rta=12.0)
    pbp2, _ = build_linear_qubo(ref2)
    res2 = brute_force(pbp2)
    family = {encode_levels([k, 4 - k]) for k in range(5)}
    ok2 = res2.best_value == 12.75 and set(res2.minimizers) == family

    ref1 = make_ref_scenario(1, rta=6.0)
    pbp1, _ = build_linear_qubo(ref1)
    res1 = brute_force(pbp1)
    ok1 = res1.best_value == 6.3125 and res1.minimizers == (encode_levels([2]),)

    ok = ok1 and ok2
    assert report(2, ok, f"REF2 best {res2.best_value} with {len(res2.minimizers)} minimizers; "
                         f"REF1 best {res1.best_value}")


def test_criterion_3_ising_equivalence():
    """100 random degree-<=2 polynomials on <= 12 variables: spin energies
    match polynomial values on every assignment within 1e-12."""
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        num_vars = int(rng.integers(2, 13))
        terms = {(): float(rng.normal() * 5)}
        for _ in range(int(rng.integers(3, 2 * num_vars + 4))):
            degree = int(rng.integers(1, 3))
            key = tuple(sorted(rng.choice(num_vars, size=degree, replace=False)))
            terms[key] = float(rng.normal() * 10)
        pbp = PseudoBooleanPolynomial(num_vars, terms)
        model = to_ising(pbp)
        codes = np.arange(1 << num_vars)
        values = evaluate_on_integers(pbp, codes)
        spins = np.array([(2 * ((codes >> q) & 1) - 1) for q in range(num_vars)])
        energies = np.full(len(codes), model.offset)
        for q in range(num_vars):
            energies += model.h[q] * spins[q]
        for (i, j), coupling in model.J.items():
            energies += coupling * spins[i] * spins[j]
        worst = max(worst, float(np.max(np.abs(energies - values))))
    ok = worst <= 1e-12
    assert report(3, ok, f"max spin/polynomial disagreement {worst:.3e} over 100 instances")


def test_criterion_4_quadratization_preserves_minimizers():
    """50 random degree-3/4 polynomials, default reduction weight: the reduced
    problem has the same global minimum value and the same set of minimizing
    original-variable assignments, checked exhaustively."""
    rng = np.random.default_rng(77)
    checked = 0
    for _ in range(50):
        num_vars = int(rng.integers(4, 9))
        terms = {}
        for _ in range(int(rng.integers(2, 6))):
            degree = int(rng.integers(3, 5))
            key = tuple(sorted(rng.choice(num_vars, size=min(degree, num_vars), replace=False)))
            terms[key] = float(rng.normal() * 8)
        for _ in range(int(rng.integers(0, 4))):
            degree = int(rng.integers(1, 3))
            key = tuple(sorted(rng.choice(num_vars, size=degree, replace=False)))
            terms[key] = terms.get(key, 0.0) + float(rng.normal() * 4)
        pbp = PseudoBooleanPolynomial(num_vars, terms)
        if pbp.degree < 3:
            continue
        reduced, _ = quadratize(pbp)
        assert reduced.degree <= 2
        num_aux = reduced.num_vars - num_vars

        original_values = evaluate_on_integers(pbp, np.arange(1 << num_vars))
        all_values = evaluate_on_integers(reduced, np.arange(1 << reduced.num_vars))
        # Aux bits are the high bits: row a holds assignments with aux code a.
        folded = all_values.reshape(1 << num_aux, 1 << num_vars).min(axis=0)

        assert float(folded.min()) == pytest.approx(float(original_values.min()), abs=1e-9)
        input_set = set(np.flatnonzero(original_values <= original_values.min() + 1e-12))
        output_set = set(np.flatnonzero(folded <= folded.min() + 1e-12))
        assert input_set == output_set
        checked += 1
    ok = checked >= 45
    assert report(4, ok, f"{checked} random higher-order instances reduced and verified")


def test_criterion_5_annealing_hits_ref2_optimum():
    """At least 90 of 100 seeds reach 12.75 with 200 sweeps x 4 restarts,
    each run under 0.1 s."""
    ref2 = make_ref_scenario(2, rta=12.0)
    pbp, _ = build_linear_qubo(ref2)
    hits = 0
    slowest = 0.0
    for seed in range(100):
        started = time.perf_counter()
        result = simulated_annealing(pbp, AnnealConfig(sweeps=200, restarts=4, seed=seed))
        slowest = max(slowest, time.perf_counter() - started)
        hits += abs(result.best_value - 12.75) <= 1e-9
    ok = hits >= 90 and slowest < 0.1
    assert report(5, ok, f"{hits}/100 seeds reached 12.75, slowest run {slowest * 1000:.1f}ms")


def test_criterion_6_layered_circuit_recovers_ref1_optimum():
    """p=1 optimized expectation beats the uniform mean; the p=2 sampled modal
    bitstring is the brute-force minimizer with frequency >= 5/64 over 1e4
    shots; all within 60 s."""
    started = time.perf_counter()
    ref1 = make_ref_scenario(1, rta=6.0)
    pbp, _ = build_linear_qubo(ref1)
    ham = build_diagonal(pbp).rescaled()
    minimizer = brute_force(pbp).minimizers[0]

    _, value1 = qaoa_optimize(ham, p=1, restarts=8, seed=1)
    uniform_mean = float(ham.energies.mean())
    p1_ok = value1 < uniform_mean

    params2, _ = qaoa_optimize(ham, p=2, restarts=8, seed=1)
    counts = sample(qaoa_state(ham, params2), shots=10_000, seed=1)
    modal_bits, _ = max(
        counts.items(), key=lambda kv: (kv[1], -sum(b << q for q, b in enumerate(kv[0])))
    )
    frequency = counts.get(minimizer, 0) / 10_000
    modal_ok = modal_bits == minimizer
    freq_ok = frequency >= 5 / 64
    elapsed = time.perf_counter() - started
    ok = p1_ok and modal_ok and freq_ok and elapsed < 60.0
    assert report(
        6, ok,
        f"p=1 expectation {value1:.4f} vs uniform mean {uniform_mean:.4f}; "
        f"p=2 modal bitstring {''.join(map(str, modal_bits))} "
        f"(minimizer {''.join(map(str, minimizer))}), minimizer frequency "
        f"{frequency:.4f} (need >= {5 / 64:.4f}); {elapsed:.1f}s",
    )


def test_criterion_7_adiabatic_ladder_on_rescaled_ref1():
    """Ground overlap non-decreasing (slack 0.02) over T in {1, 5, 25, 125}
    and >= 0.9 at T = 125 with 4000 steps; norm drift < 1e-9; under 60 s."""
    started = time.perf_counter()
    ref1 = make_ref_scenario(1, rta=6.0)
    pbp, _ = build_linear_qubo(ref1)
    ham = build_diagonal(pbp)
    minimizers = brute_force(pbp).minimizers

    overlaps = []
    drift = 0.0
    for total_time in (1.0, 5.0, 25.0, 125.0):
        state = adiabatic_evolve(ham, AdiabaticConfig(total_time=total_time, steps=4000),
                                 rescale=True)
        overlaps.append(ground_overlap(state, minimizers))
        drift = max(drift, abs(state.norm() - 1.0))
    elapsed = time.perf_counter() - started

    monotone = all(b >= a - 0.02 for a, b in zip(overlaps, overlaps[1:]))
    final_ok = overlaps[-1] >= 0.9
    drift_ok = drift < 1e-9
    ok = monotone and final_ok and drift_ok and elapsed < 60.0
    assert report(
        7, ok,
        f"overlaps {[round(o, 4) for o in overlaps]} over T=(1,5,25,125); "
        f"need final >= 0.9; norm drift {drift:.2e}; {elapsed:.1f}s",
    )


def test_criterion_8_rta_raise_slows_arrival():
    """Raising the deadline from 12 to 16 moves the cheapest arrival from 12.5
    to 15.625 (total pace 4/32 -> 5/32)."""
    ref2 = make_ref_scenario(2, rta=12.0)

    def optimal_plan(scenario):
        pbp, _ = build_linear_qubo(scenario)
        bits = brute_force(pbp).minimizers[0]
        return decode(bits, scenario)

    before = optimal_plan(ref2)
    after = optimal_plan(replan(ref2, completed=0, elapsed=0.0, new_rta=16.0))
    pace_before = sum(before.inverse_speeds)
    pace_after = sum(after.inverse_speeds)
    ok = (before.arrival_time == 12.5 and after.arrival_time == 15.625
          and pace_before == 4 / 32 and pace_after == 5 / 32)
    assert report(8, ok, f"arrival {before.arrival_time} -> {after.arrival_time}, "
                         f"total pace {pace_before} -> {pace_after}")


def test_criterion_9_determinism(tmp_path, capsys):
    """Seeded commands repeat byte-identically; brute force is identical for
    1, 2 and 8 workers."""
    ref1_path = tmp_path / "ref1.json"
    ref1_path.write_text(json.dumps(REF1_DOC))
    ref2_path = tmp_path / "ref2.json"
    ref2_path.write_text(json.dumps(REF2_DOC))

    def run_twice(argv):
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        second = capsys.readouterr().out
        return first == second and first != ""

    anneal_same = run_twice(["solve", str(ref2_path), "--solver", "anneal", "--seed", "7"])
    qaoa_same = run_twice(["qaoa", str(ref1_path), "--p", "1", "--restarts", "2",
                           "--shots", "1000", "--seed", "5",
                           "--trace", str(tmp_path / "t.csv")])
    adiabatic_same = run_twice(["adiabatic", str(ref1_path), "--T", "5", "--steps", "200",
                                "--trace", str(tmp_path / "a.csv")])

    pbp, _ = build_linear_qubo(make_ref_scenario(2, rta=12.0))
    reference = brute_force(pbp, workers=1)
    workers_same = all(brute_force(pbp, workers=w) == reference for w in (2, 8))

    ok = anneal_same and qaoa_same and adiabatic_same and workers_same
    assert report(9, ok, f"anneal {anneal_same}, layered {qaoa_same}, "
                         f"interpolated {adiabatic_same}, workers(1,2,8) {workers_same}")
