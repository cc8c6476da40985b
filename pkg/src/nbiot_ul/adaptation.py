"""Three-dimensional uplink link adaptation.

Picks the (bandwidth config, MCS, RU count, repetitions) grant that carries a
packet in the shortest time given the available SNR. ``adapt`` runs a staged
search that visits configurations in priority order and stops early once no
remaining stage can beat the best point found. ``oracle_adapt`` is a plain
exhaustive search used to check it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal, Mapping, Optional, Sequence

from .grid import (
    BANDWIDTH_CONFIGS,
    DEFAULT_R_MAX,
    REPETITIONS,
    RU_COUNTS,
    TbsTable,
    TransmissionConfig,
    enumerate_configs,
    tbs_lookup,
)
from .metrics import (
    ChannelParams,
    LinkMetrics,
    PayloadSpec,
    available_snr,
    combined_metrics,
)

Mode = Literal["fixed", "power-controlled"]
SnrKey = tuple[int, int, int, int]


class CoverageInfeasible(Exception):
    """No grant satisfies both the TBS and the SNR constraint.

    Attributes
    ----------
    best_snr_req : float or None
        Lowest required SNR over grants whose TBS fits the payload, or None
        when the payload fits no grant.
    best_config : TransmissionConfig or None
        The grant achieving ``best_snr_req``.
    """

    def __init__(self, message: str, best_snr_req: Optional[float] = None,
                 best_config: Optional[TransmissionConfig] = None):
        super().__init__(message)
        self.best_snr_req = best_snr_req
        self.best_config = best_config


class PayloadTooLarge(CoverageInfeasible):
    """The payload exceeds every transport block size; fragmentation is not modelled."""


@dataclass(frozen=True)
class AdaptationInput:
    """Payload and SNR model for one adaptation run.

    With ``mode="fixed"`` the same ``snr_in`` (linear, may be ``inf``) applies
    to every grant. With ``mode="power-controlled"`` each grant gets the SNR
    produced by NPUSCH power control over the given channel.
    """

    payload_bits: int
    mode: Mode = "power-controlled"
    snr_in: Optional[float] = None

    def __post_init__(self) -> None:
        if self.payload_bits <= 0:
            raise ValueError(f"payload_bits must be positive, got {self.payload_bits}")
        if self.mode == "fixed":
            if self.snr_in is None or not self.snr_in > 0:
                raise ValueError("fixed mode needs a positive snr_in")
        elif self.mode != "power-controlled":
            raise ValueError(f"unknown mode {self.mode!r}")

    def snr_for(self, cfg: TransmissionConfig, ch: ChannelParams) -> float:
        if self.mode == "fixed":
            return self.snr_in
        return available_snr(ch, cfg)


@dataclass(frozen=True)
class AdaptationResult:
    selected: TransmissionConfig
    tbs_bits: int
    metrics: LinkMetrics
    snr_in: float
    candidates_examined: int
    all_feasible: Optional[tuple[TransmissionConfig, ...]] = field(default=None, compare=False)


def preference_key(cfg: TransmissionConfig) -> tuple:
    """Sort key: shortest time, then wider bandwidth, fewer repetitions,
    fewer RUs, higher MCS."""
    return (cfg.tx_time_ms, cfg.bw.id, cfg.repetitions, cfg.ru_count, -cfg.i_mcs)


def precompute_snr_req(
    table: TbsTable,
    r_max: Optional[Mapping[int, int]] = None,
    repetitions: Sequence[int] = REPETITIONS,
    crc_bits: int = 24,
) -> dict[SnrKey, float]:
    """Required SNR of every table cell under every enumerated grant.

    Each cell is evaluated at its own TBS, the largest block it can carry.
    Keys are ``(C, i_mcs, i_ru, R)``.
    """
    return dict(_precompute(table, _freeze(r_max), tuple(repetitions), crc_bits))


def _freeze(r_max: Optional[Mapping[int, int]]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((DEFAULT_R_MAX if r_max is None else r_max).items()))


@lru_cache(maxsize=16)
def _precompute(table: TbsTable, r_max: tuple, repetitions: tuple, crc_bits: int) -> tuple:
    # Channel terms cancel in snr_req; any channel will do.
    ch = ChannelParams(path_loss=1.0)
    out = []
    for cfg in enumerate_configs(r_max=dict(r_max), repetitions=repetitions):
        tbs = tbs_lookup(table, cfg.i_mcs, cfg.i_ru)
        m = combined_metrics(PayloadSpec(tbs, crc_bits), cfg, ch)
        out.append((cfg.key(), m.snr_req))
    return tuple(out)


def _finish(inp: AdaptationInput, table: TbsTable, ch: ChannelParams, cfg: TransmissionConfig,
            snr_in: float, examined: int, feasible: list[TransmissionConfig],
            crc_bits: int) -> AdaptationResult:
    tbs = tbs_lookup(table, cfg.i_mcs, cfg.i_ru)
    return AdaptationResult(
        selected=cfg,
        tbs_bits=tbs,
        metrics=combined_metrics(PayloadSpec(tbs, crc_bits), cfg, ch),
        snr_in=snr_in,
        candidates_examined=examined,
        all_feasible=tuple(feasible),
    )


def _infeasible(inp: AdaptationInput, table: TbsTable, snr_map: Mapping[SnrKey, float],
                r_max: Mapping[int, int], repetitions: Sequence[int]) -> CoverageInfeasible:
    b = inp.payload_bits
    if b > table.max_tbs:
        return PayloadTooLarge(f"payload of {b} bits exceeds the largest TBS ({table.max_tbs} bits)")
    best_key, best_snr = None, math.inf
    for key, snr in snr_map.items():
        c, i_mcs, i_ru, _ = key
        if tbs_lookup(table, i_mcs, i_ru) >= b and snr < best_snr:
            best_key, best_snr = key, snr
    best_cfg = None
    if best_key is not None:
        c, i_mcs, i_ru, r = best_key
        best_cfg = TransmissionConfig(BANDWIDTH_CONFIGS[c - 1], i_mcs, i_ru, r)
    return CoverageInfeasible(
        f"no grant carries {b} bits at the available SNR",
        best_snr_req=best_snr if best_key is not None else None,
        best_config=best_cfg,
    )


def adapt(
    inp: AdaptationInput,
    table: TbsTable,
    ch: ChannelParams,
    *,
    r_max: Optional[Mapping[int, int]] = None,
    repetitions: Sequence[int] = REPETITIONS,
    crc_bits: int = 24,
) -> AdaptationResult:
    """Select the feasible grant with minimum transmission time.

    A grant is feasible when its TBS is at least the payload and its
    required SNR does not exceed the SNR available to it. Configurations are
    visited widest bandwidth first; within a configuration repetitions rise
    until no larger repetition count can shorten the best time found.

    Raises
    ------
    PayloadTooLarge
        If the payload exceeds every TBS.
    CoverageInfeasible
        If no grant meets its SNR requirement.
    """
    caps = DEFAULT_R_MAX if r_max is None else r_max
    reps = tuple(sorted(repetitions))
    snr_map = precompute_snr_req(table, caps, reps, crc_bits)
    b = inp.payload_bits

    points: list[TransmissionConfig] = []
    snr_in_of: dict[tuple[int, int], float] = {}
    best: Optional[TransmissionConfig] = None
    examined = 0

    for bw in BANDWIDTH_CONFIGS:
        # Shortest grant this configuration could offer; ties go to lower C.
        if best is not None and best.tx_time_ms <= bw.ru_duration_ms:
            break
        for r in reps:
            if r > caps[bw.id]:
                break
            if best is not None and best.tx_time_ms <= r * RU_COUNTS[0] * bw.ru_duration_ms:
                break
            probe = TransmissionConfig(bw, 0, 0, r)
            snr_in = inp.snr_for(probe, ch)
            snr_in_of[(bw.id, r)] = snr_in
            for i_mcs in range(bw.mcs_max + 1):
                row = [snr_map[(bw.id, i_mcs, i_ru, r)] for i_ru in range(len(RU_COUNTS))]
                if min(row) > snr_in:
                    examined += len(row)
                    continue
                for i_ru in range(len(RU_COUNTS)):
                    examined += 1
                    if table.entries[i_mcs][i_ru] >= b and row[i_ru] <= snr_in:
                        cfg = TransmissionConfig(bw, i_mcs, i_ru, r)
                        points.append(cfg)
                        if best is None or preference_key(cfg) < preference_key(best):
                            best = cfg
                        # More RUs at this MCS only take longer.
                        break

    if best is None:
        raise _infeasible(inp, table, snr_map, caps, reps)
    return _finish(inp, table, ch, best, snr_in_of[(best.bw.id, best.repetitions)],
                   examined, points, crc_bits)


def oracle_adapt(
    inp: AdaptationInput,
    table: TbsTable,
    ch: ChannelParams,
    *,
    r_max: Optional[Mapping[int, int]] = None,
    repetitions: Sequence[int] = REPETITIONS,
    crc_bits: int = 24,
) -> AdaptationResult:
    """Exhaustive reference for :func:`adapt`.

    Builds every grant directly from the parameter sets, keeps the feasible
    ones and returns the minimum under :func:`preference_key`.
    """
    caps = DEFAULT_R_MAX if r_max is None else r_max
    b = inp.payload_bits
    feasible = []
    examined = 0
    best_infeasible: tuple[float, Optional[TransmissionConfig]] = (math.inf, None)
    for bw, r, i_mcs, i_ru in itertools.product(
        BANDWIDTH_CONFIGS, repetitions, range(table.n_mcs), range(len(table.ru_counts))
    ):
        if r > caps[bw.id] or i_mcs > bw.mcs_max:
            continue
        examined += 1
        tbs = table.entries[i_mcs][i_ru]
        if tbs < b:
            continue
        cfg = TransmissionConfig(bw, i_mcs, i_ru, r)
        snr_req = combined_metrics(PayloadSpec(tbs, crc_bits), cfg, ch).snr_req
        snr_in = inp.snr_for(cfg, ch)
        if snr_req <= snr_in:
            feasible.append((preference_key(cfg), cfg, snr_in))
        elif snr_req < best_infeasible[0]:
            best_infeasible = (snr_req, cfg)

    if not feasible:
        if b > table.max_tbs:
            raise PayloadTooLarge(f"payload of {b} bits exceeds the largest TBS ({table.max_tbs} bits)")
        raise CoverageInfeasible(
            f"no grant carries {b} bits at the available SNR",
            best_snr_req=best_infeasible[0],
            best_config=best_infeasible[1],
        )
    feasible.sort(key=lambda t: t[0])
    _, cfg, snr_in = feasible[0]
    return _finish(inp, table, ch, cfg, snr_in, examined, [f[1] for f in feasible], crc_bits)
