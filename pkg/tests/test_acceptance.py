"""Acceptance criteria.

Each test checks one criterion at its stated tolerance and records a
PASS/FAIL line that is printed in the pytest terminal summary.

Fixed seeds keep every randomized criterion reproducible.
"""

from __future__ import annotations

import math
import random
import time

import pytest

from conftest import ACCEPTANCE_LINES
from nbiot_ul.adaptation import AdaptationInput, CoverageInfeasible, PayloadTooLarge, adapt, oracle_adapt
from nbiot_ul.cli import EXIT_TABLE, main
from nbiot_ul.grid import BANDWIDTH_CONFIGS, REPETITIONS, RU_COUNTS, TransmissionConfig, default_table_path
from nbiot_ul.metrics import ChannelParams, PayloadSpec, combined_metrics, from_db
from nbiot_ul.sweeps import SweepSpec, run_mcl_sweep, run_tbs_sweep

# 50-digit mpmath evaluation of the worked example
# (b=160, 12 tones, RU=1, R=1, L=100 dB, P_max=23 dBm); see test_metrics.py.
ORACLE_SNR_REQ = 1.0310450250085499
ORACLE_GAMMA = 1.0222222222222222
ORACLE_ENERGY = 8.0118408388333125e-11
ORACLE_LMAX_DB = 141.31449863865556


def record(criterion: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
    assert ok, f"{criterion}: {detail}"


def _random_config(rng: random.Random, repetitions=None) -> TransmissionConfig:
    bw = rng.choice(BANDWIDTH_CONFIGS)
    return TransmissionConfig(
        bw,
        rng.randint(0, bw.mcs_max),
        rng.randrange(len(RU_COUNTS)),
        rng.choice(REPETITIONS) if repetitions is None else repetitions,
    )


def test_c01_repetition_scaling():
    rng = random.Random(1)
    ch = ChannelParams.from_db(100.0)
    worst = 0.0
    for _ in range(500):
        b = rng.randint(1, 2500)
        cfg = _random_config(rng)
        one = TransmissionConfig(cfg.bw, cfg.i_mcs, cfg.i_ru, 1)
        got = combined_metrics(PayloadSpec(b), cfg, ch).snr_req * cfg.repetitions
        want = combined_metrics(PayloadSpec(b), one, ch).snr_req
        worst = max(worst, abs(got - want) / want)
    record("1 snr_req(R)*R = snr_req(1)", worst <= 1e-12, f"500 pairs, worst rel err {worst:.2e} (tol 1e-12)")


def test_c02_energy_repetition_independent():
    rng = random.Random(2)
    mismatches = 0
    for _ in range(100):
        b = rng.randint(1, 2500)
        bw = rng.choice(BANDWIDTH_CONFIGS)
        i_ru = rng.randrange(len(RU_COUNTS))
        ch = ChannelParams.from_db(rng.uniform(80, 175))
        energies = {combined_metrics(PayloadSpec(b), TransmissionConfig(bw, 0, i_ru, r), ch).energy_per_bit_j
                    for r in REPETITIONS}
        mismatches += len(energies) != 1
    record("2 energy_per_bit bitwise identical across R", mismatches == 0,
           f"100 tuples x {len(REPETITIONS)} repetition levels, {mismatches} mismatches")


def test_c03_bandwidth_invariance(table):
    ch = ChannelParams.from_db(100.0)
    worst = 0.0
    ordering_violations = 0
    for tbs in table.distinct_sizes():
        for i_ru in range(len(RU_COUNTS)):
            ms = [combined_metrics(PayloadSpec(tbs), TransmissionConfig(bw, 0, i_ru, 1), ch)
                  for bw in BANDWIDTH_CONFIGS]
            triples = [(m.snr_req, m.gamma, m.energy_per_bit_j) for m in ms]
            for a, b in [(0, 1), (0, 2), (3, 4)]:
                for x, y in zip(triples[a], triples[b]):
                    worst = max(worst, abs(x - y) / abs(x))
            ordering_violations += sum(not (s > m) for s, m in zip(triples[3], triples[0]))
    ok = worst <= 1e-12 and ordering_violations == 0
    record("3 multi-tone invariance, single-tone higher", ok,
           f"{len(table.distinct_sizes())} TBS x 8 RU, worst rel err {worst:.2e}, "
           f"{ordering_violations} ordering violations")


def test_c04_power_path_loss_duality():
    rng = random.Random(4)
    worst = 0.0
    for _ in range(200):
        b = rng.randint(1, 2500)
        cfg = _random_config(rng)
        ch = ChannelParams.from_db(rng.uniform(80, 175))
        l_max = combined_metrics(PayloadSpec(b), cfg, ch).l_max
        p = combined_metrics(PayloadSpec(b), cfg, ChannelParams(path_loss=l_max)).p_tx_w
        worst = max(worst, abs(p - ch.p_max_w) / ch.p_max_w)
    record("4 P_tx(L=l_max) = P_max", worst <= 1e-9, f"200 configs, worst rel err {worst:.2e} (tol 1e-9)")


def test_c05_worked_anchors():
    ch = ChannelParams.from_db(100.0, p_max_dbm=23.0)
    m = combined_metrics(PayloadSpec(160), TransmissionConfig(BANDWIDTH_CONFIGS[0], 0, 0, 1), ch)
    checks = {
        "snr_req": (m.snr_req, ORACLE_SNR_REQ, 1.031),
        "gamma": (m.gamma, ORACLE_GAMMA, 1.0222),
        "energy": (m.energy_per_bit_j, ORACLE_ENERGY, 8.01e-11),
        "l_max": (m.l_max, from_db(ORACLE_LMAX_DB), from_db(141.3)),
    }
    errs = {k: max(abs(v - o) / o, abs(v - s) / s) for k, (v, o, s) in checks.items()}
    ok = all(e <= 5e-3 for e in errs.values())
    detail = ", ".join(f"{k} {e:.2e}" for k, e in errs.items())
    record("5 worked numeric anchors within 0.5%", ok, f"{detail}; l_max {m.l_max_db:.3f} dB")


def _outcome(fn, inp, table, ch):
    try:
        return fn(inp, table, ch).selected
    except PayloadTooLarge:
        return "payload-too-large"
    except CoverageInfeasible:
        return "coverage-infeasible"


def test_c06_algorithm_oracle_equivalence(table):
    rng = random.Random(6)
    start = time.perf_counter()
    mismatches = infeasible = 0
    for _ in range(1000):
        inp = AdaptationInput(rng.randint(16, 2000))
        ch = ChannelParams.from_db(rng.uniform(80.0, 175.0))
        a = _outcome(adapt, inp, table, ch)
        o = _outcome(oracle_adapt, inp, table, ch)
        mismatches += a != o
        infeasible += isinstance(o, str)
    elapsed = time.perf_counter() - start
    record("6 adapt == oracle_adapt", mismatches == 0,
           f"1000 inputs ({1000 - infeasible} feasible), {mismatches} mismatches, {elapsed:.1f} s")


@pytest.fixture(scope="module")
def fig4_rows(table):
    rows = run_mcl_sweep(SweepSpec("mcl-sweep", payload_bits_list=(160, 1600)), table)
    return {b: [r for r in rows if r["payload_bits"] == b] for b in (160, 1600)}


def test_c07_transmission_time_shape(fig4_rows):
    violations = 0
    for rows in fig4_rows.values():
        times = [r["tx_time_s"] for r in rows]
        violations += sum(t2 < t1 for t1, t2 in zip(times, times[1:]))

    # infeasible points count as never completing (infinite time)
    def first_exceeding(rows, threshold):
        return next((r["mcl_db"] for r in rows if r["tx_time_s"] > threshold), math.inf)

    thresholds = sorted({r["tx_time_s"] for rows in fig4_rows.values() for r in rows if r["feasible"]})
    order_violations = sum(
        first_exceeding(fig4_rows[1600], t) > first_exceeding(fig4_rows[160], t) for t in thresholds
    )
    feasible_200 = sum(r["feasible"] for r in fig4_rows[1600])
    ok = violations == 0 and order_violations == 0
    record("7 tx_time non-decreasing; 200 B struggles first", ok,
           f"{violations} monotonicity violations, {order_violations} ordering violations over "
           f"{len(thresholds)} thresholds; 200 B feasible at {feasible_200}/{len(fig4_rows[1600])} MCL points")


def test_c08_configuration_shape(fig4_rows):
    rep_violations = 0
    bw_violations = []
    for b, rows in fig4_rows.items():
        prev_bw = math.inf
        for r in rows:
            if not r["feasible"]:
                continue
            rep_violations += r["repetitions"] > 1 and r["n_tones"] != 1
            bw = r["n_tones"] * r["scs_hz"]
            if bw > prev_bw:
                bw_violations.append((b, r["mcl_db"], prev_bw, bw))
            prev_bw = bw
    ok = rep_violations == 0 and not bw_violations
    detail = f"{rep_violations} multi-tone points with R>1, {len(bw_violations)} bandwidth increases"
    if bw_violations:
        detail += " at " + ", ".join(f"{b} b/{m:g} dB ({p / 1e3:g}->{w / 1e3:g} kHz)"
                                     for b, m, p, w in bw_violations)
    record("8 R>1 only single-tone; bandwidth non-increasing", ok, detail)


def _tbs_rows(approach, table):
    rows = run_tbs_sweep(SweepSpec("tbs-sweep", approach=approach, power_mode="unconstrained"), table)
    return {(r["tbs_bits"], r["setting"]): r for r in rows}


def test_c09a_repetition_vs_ru_snr(table):
    ru, rep = _tbs_rows("ru", table), _tbs_rows("repetition", table)
    factors = sorted(set(RU_COUNTS) & set(REPETITIONS))
    violations = [
        (tbs, k) for tbs in table.distinct_sizes() for k in factors
        if rep[(tbs, k)]["snr_req_db"] > ru[(tbs, k)]["snr_req_db"]
    ]
    record("9a repetition snr_req <= RU snr_req at equal time extension", not violations,
           f"{len(violations)} violations over {len(table.distinct_sizes())} TBS x factors {factors}")


def test_c09b_ru_energy_decreasing(table):
    ru = _tbs_rows("ru", table)
    violations = sum(
        ru[(tbs, k2)]["energy_per_bit_j"] >= ru[(tbs, k1)]["energy_per_bit_j"]
        for tbs in table.distinct_sizes()
        for k1, k2 in zip(RU_COUNTS, RU_COUNTS[1:])
    )
    record("9b RU energy_per_bit strictly decreasing in RU", violations == 0,
           f"{violations} violations over {len(table.distinct_sizes())} TBS")


def _mutants(text: str) -> dict[str, str]:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    rows = [ln.split() for ln in lines]

    def render(rs):
        return "\n".join(" ".join(r) for r in rs) + "\n"

    shortened = [r[:] for r in rows]
    shortened[4] = shortened[4][:7]
    negative = [r[:] for r in rows]
    negative[2][3] = "-176"
    broken = [r[:] for r in rows]
    broken[6][2] = "100"
    token = [r[:] for r in rows]
    token[8][1] = "2x6"
    return {
        "shortened row": render(shortened),
        "negative cell": render(negative),
        "monotonicity break": render(broken),
        "non-numeric token": render(token),
        "missing row": render(rows[:9] + rows[10:]),
    }


def test_c10_table_ingestion(tmp_path, capsys):
    bundled = default_table_path()
    codes = {"bundled": main(["validate-table", "--tbs-table", str(bundled)])}
    for name, text in _mutants(bundled.read_text()).items():
        path = tmp_path / (name.replace(" ", "_") + ".txt")
        path.write_text(text)
        codes[name] = main(["validate-table", "--tbs-table", str(path)])
    capsys.readouterr()
    ok = codes["bundled"] == 0 and all(c == EXIT_TABLE for n, c in codes.items() if n != "bundled")
    record("10 validate-table accepts bundled, rejects 5 mutants with exit 4", ok,
           ", ".join(f"{n}={c}" for n, c in codes.items()))
