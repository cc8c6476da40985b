"""Parameter sweeps producing plot-ready tables.

``run_tbs_sweep`` compares the three coverage approaches (more RUs, narrower
bandwidth, repetitions) over the TBS axis with unconstrained power.
``run_mcl_sweep`` runs link adaptation over a range of coupling losses with
3GPP power control. Rows are plain dicts in sweep order.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Literal, Optional, Sequence

from .adaptation import AdaptationInput, CoverageInfeasible, PayloadTooLarge, adapt
from .grid import (
    BANDWIDTH_CONFIGS,
    REPETITIONS,
    RU_COUNTS,
    TbsTable,
    TransmissionConfig,
    tbs_lookup,
)
from .metrics import (
    ChannelParams,
    PayloadSpec,
    available_snr,
    combined_metrics,
    npusch_tx_power,
    to_db,
    w_to_dbm,
)

Approach = Literal["ru", "bandwidth", "repetition"]
PowerMode = Literal["unconstrained", "3gpp"]

APPROACHES = ("ru", "bandwidth", "repetition")
TBS_SWEEP_COLUMNS = ("tbs_bits", "setting", "snr_req_db", "gamma", "energy_per_bit_j", "p_tx_dbm")
MCL_SWEEP_COLUMNS = (
    "mcl_db", "payload_bits", "tx_time_s", "repetitions", "n_tones", "scs_hz",
    "i_mcs", "ru_count", "feasible",
)
DB_COLUMNS = {"snr_req_db", "p_tx_dbm", "mcl_db"}

FIG3_PATH_LOSS_DB = 100.0


@dataclass(frozen=True)
class SweepSpec:
    kind: Literal["tbs-sweep", "mcl-sweep", "single-point"]
    payload_bits_list: tuple[int, ...] = (160, 1600)
    mcl_range: tuple[float, float, float] = (100.0, 170.0, 0.5)
    approach: Optional[Approach] = None
    power_mode: PowerMode = "3gpp"
    tbs_values: Optional[tuple[int, ...]] = None
    repetitions: tuple[int, ...] = REPETITIONS
    path_loss_db: float = FIG3_PATH_LOSS_DB
    output_path: Optional[str] = None
    output_format: Literal["csv", "json"] = "csv"
    channel: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        start, stop, step = self.mcl_range
        if not step > 0:
            raise ValueError(f"MCL step must be positive, got {step}")
        if stop < start:
            raise ValueError(f"empty MCL range {start}:{stop}")
        if not self.payload_bits_list:
            raise ValueError("payload_bits_list is empty")
        if self.kind == "tbs-sweep" and self.approach not in APPROACHES:
            raise ValueError(f"approach must be one of {APPROACHES}, got {self.approach!r}")
        if self.output_format not in ("csv", "json"):
            raise ValueError(f"unknown output format {self.output_format!r}")

    def mcl_points(self) -> list[float]:
        start, stop, step = (float(v) for v in self.mcl_range)
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(n)]

    def channel_at(self, path_loss_db: float) -> ChannelParams:
        return ChannelParams.from_db(path_loss_db, **self.channel)


def approach_configs(approach: Approach, repetitions: Sequence[int] = REPETITIONS) -> list[tuple[Any, TransmissionConfig]]:
    """``(setting, config)`` pairs for one approach, others at base values.

    The MCS index is irrelevant to the Shannon metrics and is left at 0.
    """
    widest = BANDWIDTH_CONFIGS[0]
    if approach == "ru":
        return [(RU_COUNTS[i], TransmissionConfig(widest, 0, i, 1)) for i in range(len(RU_COUNTS))]
    if approach == "bandwidth":
        return [(bw.id, TransmissionConfig(bw, 0, 0, 1)) for bw in BANDWIDTH_CONFIGS]
    if approach == "repetition":
        return [(r, TransmissionConfig(widest, 0, 0, r)) for r in repetitions]
    raise ValueError(f"approach must be one of {APPROACHES}, got {approach!r}")


def run_tbs_sweep(spec: SweepSpec, table: TbsTable) -> list[dict]:
    if spec.power_mode != "unconstrained":
        raise ValueError("tbs-sweep uses unconstrained power")
    ch = spec.channel_at(spec.path_loss_db)
    tbs_axis = spec.tbs_values or tuple(table.distinct_sizes())
    pairs = approach_configs(spec.approach, spec.repetitions)
    rows = []
    for tbs in tbs_axis:
        p = PayloadSpec(tbs)
        for setting, cfg in pairs:
            m = combined_metrics(p, cfg, ch)
            rows.append({
                "tbs_bits": tbs,
                "setting": setting,
                "snr_req_db": m.snr_req_db,
                "gamma": m.gamma,
                "energy_per_bit_j": m.energy_per_bit_j,
                "p_tx_dbm": m.p_tx_dbm,
            })
    return rows


def run_mcl_sweep(spec: SweepSpec, table: TbsTable) -> list[dict]:
    if spec.power_mode != "3gpp":
        raise ValueError("mcl-sweep uses 3GPP power control")
    rows = []
    for b in spec.payload_bits_list:
        inp = AdaptationInput(b, mode="power-controlled")
        for mcl in spec.mcl_points():
            ch = spec.channel_at(mcl)
            try:
                res = adapt(inp, table, ch, repetitions=spec.repetitions)
            except CoverageInfeasible:
                rows.append({
                    "mcl_db": mcl, "payload_bits": b, "tx_time_s": math.inf,
                    "repetitions": None, "n_tones": None, "scs_hz": None,
                    "i_mcs": None, "ru_count": None, "feasible": False,
                })
                continue
            cfg = res.selected
            rows.append({
                "mcl_db": mcl, "payload_bits": b, "tx_time_s": cfg.tx_time_s,
                "repetitions": cfg.repetitions, "n_tones": cfg.bw.n_tones,
                "scs_hz": cfg.bw.scs_hz, "i_mcs": cfg.i_mcs, "ru_count": cfg.ru_count,
                "feasible": True,
            })
    return rows


def _metrics_dict(m) -> dict:
    return {
        "snr_req": m.snr_req,
        "snr_req_db": m.snr_req_db,
        "gamma": m.gamma,
        "energy_per_bit_j": m.energy_per_bit_j,
        "code_rate": m.code_rate,
        "code_rate_valid": m.code_rate_valid,
        "data_rate_bps": m.data_rate_bps,
        "p_tx_w": m.p_tx_w,
        "p_tx_dbm": m.p_tx_dbm,
        "l_max_db": m.l_max_db,
        "tx_time_s": m.tx_time_s,
    }


def _config_dict(cfg: TransmissionConfig) -> dict:
    return {
        "config_id": cfg.bw.id, "n_tones": cfg.bw.n_tones, "scs_hz": cfg.bw.scs_hz,
        "bandwidth_hz": cfg.bw.bandwidth_hz, "i_mcs": cfg.i_mcs, "i_ru": cfg.i_ru,
        "ru_count": cfg.ru_count, "repetitions": cfg.repetitions,
    }


def run_single(
    payload_bits: int,
    mcl_db: float,
    table: TbsTable,
    power_mode: PowerMode = "3gpp",
    config: Optional[TransmissionConfig] = None,
    repetitions: Sequence[int] = REPETITIONS,
    channel: Optional[dict] = None,
) -> dict:
    """Evaluate one point.

    With an explicit ``config`` the payload is evaluated on that grant as
    is. Without one, link adaptation picks the grant. An infeasible point
    yields ``feasible: False`` with the lowest required SNR found and the path
    loss that grant could tolerate at maximum power.
    """
    ch = ChannelParams.from_db(mcl_db, **(channel or {}))
    report: dict = {"payload_bits": payload_bits, "mcl_db": mcl_db, "power_mode": power_mode}

    def snr_available(cfg: TransmissionConfig) -> float:
        return math.inf if power_mode == "unconstrained" else available_snr(ch, cfg)

    if config is not None:
        m = combined_metrics(PayloadSpec(payload_bits), config, ch)
        snr_in = snr_available(config)
        tbs = tbs_lookup(table, config.i_mcs, config.i_ru)
        report.update({
            "mode": "explicit",
            "config": _config_dict(config),
            "tbs_bits": tbs,
            "metrics": _metrics_dict(m),
            "snr_available_db": to_db(snr_in) if math.isfinite(snr_in) else math.inf,
            "p_tx_3gpp_dbm": w_to_dbm(npusch_tx_power(ch, config)),
            "feasible": m.snr_req <= snr_in and tbs >= payload_bits,
        })
        return report

    if power_mode == "unconstrained":
        inp = AdaptationInput(payload_bits, mode="fixed", snr_in=math.inf)
    else:
        inp = AdaptationInput(payload_bits, mode="power-controlled")
    report["mode"] = "adapted"
    try:
        res = adapt(inp, table, ch, repetitions=repetitions)
    except CoverageInfeasible as exc:
        report["feasible"] = False
        report["reason"] = str(exc)
        report["payload_too_large"] = isinstance(exc, PayloadTooLarge)
        if exc.best_snr_req is not None:
            bw = exc.best_config.bw
            l_max = ch.p_max_w / (ch.noise_figure * ch.noise_density_w_per_hz * bw.bandwidth_hz * exc.best_snr_req)
            report["best_snr_req_db"] = to_db(exc.best_snr_req)
            report["best_config"] = _config_dict(exc.best_config)
            report["l_max_db"] = to_db(l_max)
        return report
    report.update({
        "feasible": True,
        "config": _config_dict(res.selected),
        "tbs_bits": res.tbs_bits,
        "metrics": _metrics_dict(res.metrics),
        "snr_available_db": to_db(res.snr_in) if math.isfinite(res.snr_in) else math.inf,
        "candidates_examined": res.candidates_examined,
    })
    return report


def _csv_cell(column: str, value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if column in DB_COLUMNS and math.isfinite(value):
            return f"{value:.4f}"
        return repr(value)
    return str(value)


def to_csv(rows: Sequence[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_csv_cell(c, row[c]) for c in columns])
    return buf.getvalue()


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def to_json(obj: Any) -> str:
    return json.dumps(_json_safe(obj), indent=2) + "\n"


def config_from_row(approach: Approach, setting: Any, repetitions: Sequence[int] = REPETITIONS) -> TransmissionConfig:
    """Rebuild the grant behind a tbs-sweep row."""
    for s, cfg in approach_configs(approach, repetitions):
        if s == setting:
            return cfg
    raise KeyError(f"no {approach} setting {setting!r}")

