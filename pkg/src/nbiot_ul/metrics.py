"""Shannon-bound link metrics for NB-IoT uplink transmissions.

All computation is in linear SI units (W, Hz, s, J). dB and dBm only appear
in the conversion helpers and in the 3GPP power-control rule, which is
itself a dB formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .grid import BandwidthConfig, TransmissionConfig

# 2**x overflows a double at x = 1024.
MAX_EXPONENT = 1024.0

CRC_BITS = 24
BITS_PER_SYMBOL = 2  # QPSK
PC_REFERENCE_SCS_HZ = 15000.0


def to_db(x: float) -> float:
    return 10.0 * math.log10(x)


def from_db(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def dbm_to_w(p_dbm: float) -> float:
    return from_db(p_dbm - 30.0)


def w_to_dbm(p_w: float) -> float:
    return to_db(p_w) + 30.0


class InfeasibleMetricError(ArithmeticError):
    """The Shannon exponent is too large to evaluate in double precision."""


@dataclass(frozen=True)
class ChannelParams:
    """Path-loss-only channel and UE power limits, in linear units.

    Use :meth:`from_db` to build one from the usual dB quantities.
    """

    path_loss: float
    noise_figure: float = field(default_factory=lambda: from_db(3.0))
    noise_density_w_per_hz: float = field(default_factory=lambda: dbm_to_w(-174.0))
    p_max_w: float = field(default_factory=lambda: dbm_to_w(23.0))
    p0_dbm: float = -100.0
    alpha: float = 1.0

    def __post_init__(self) -> None:
        for name in ("path_loss", "noise_figure", "noise_density_w_per_hz", "p_max_w"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be positive and finite, got {v}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")

    @classmethod
    def from_db(
        cls,
        path_loss_db: float,
        noise_figure_db: float = 3.0,
        noise_density_dbm_hz: float = -174.0,
        p_max_dbm: float = 23.0,
        p0_dbm: float = -100.0,
        alpha: float = 1.0,
    ) -> "ChannelParams":
        return cls(
            path_loss=from_db(path_loss_db),
            noise_figure=from_db(noise_figure_db),
            noise_density_w_per_hz=dbm_to_w(noise_density_dbm_hz),
            p_max_w=dbm_to_w(p_max_dbm),
            p0_dbm=p0_dbm,
            alpha=alpha,
        )

    @property
    def path_loss_db(self) -> float:
        return to_db(self.path_loss)

    @property
    def mcl_db(self) -> float:
        # Path loss is the only loss in the model.
        return self.path_loss_db

    @property
    def p_max_dbm(self) -> float:
        return w_to_dbm(self.p_max_w)

    def with_path_loss_db(self, path_loss_db: float) -> "ChannelParams":
        return replace(self, path_loss=from_db(path_loss_db))

    def noise_per_hz(self) -> float:
        """Loss times noise figure times noise density, ``L*F*N0``."""
        return self.path_loss * self.noise_figure * self.noise_density_w_per_hz


@dataclass(frozen=True)
class PayloadSpec:
    payload_bits: int
    crc_bits: int = CRC_BITS

    def __post_init__(self) -> None:
        if self.payload_bits <= 0:
            raise ValueError(f"payload_bits must be positive, got {self.payload_bits}")
        if self.crc_bits < 0:
            raise ValueError(f"crc_bits must be non-negative, got {self.crc_bits}")

    @property
    def total_bits(self) -> int:
        return self.payload_bits + self.crc_bits


@dataclass(frozen=True)
class LinkMetrics:
    """Transmission properties of one grant.

    Attributes
    ----------
    snr_req : float
        Minimum per-repetition SNR (linear) at the Shannon bound.
    gamma : float
        Bandwidth utilization in bit/s/Hz, repetition overhead included.
    energy_per_bit_j : float
        Transmitted energy per bit.
    code_rate : float
        May exceed 1; see ``code_rate_valid``.
    data_rate_bps : float
        Rate of one repetition.
    p_tx_w : float
        Power needed to meet ``snr_req`` with no power cap.
    l_max : float
        Largest supportable path loss (linear) at maximum power.
    tx_time_s : float
        ``R * RU * T``.
    """

    snr_req: float
    gamma: float
    energy_per_bit_j: float
    code_rate: float
    data_rate_bps: float
    p_tx_w: float
    l_max: float
    tx_time_s: float

    @property
    def code_rate_valid(self) -> bool:
        return self.code_rate <= 1.0

    @property
    def snr_req_db(self) -> float:
        return to_db(self.snr_req)

    @property
    def p_tx_dbm(self) -> float:
        return w_to_dbm(self.p_tx_w)

    @property
    def l_max_db(self) -> float:
        return to_db(self.l_max)


def _check_positive(**values: float) -> None:
    for name, v in values.items():
        if not v > 0:
            raise ValueError(f"{name} must be positive, got {v}")


def channel_snr(p_tx: float, ch: ChannelParams, bw: BandwidthConfig) -> float:
    """Received SNR of a transmission at power ``p_tx`` (W)."""
    _check_positive(p_tx=p_tx)
    return p_tx / (ch.noise_per_hz() * bw.bandwidth_hz)


def code_rate(p: PayloadSpec, ru_count: int, bw: BandwidthConfig) -> float:
    if ru_count < 1:
        raise ValueError(f"ru_count must be >= 1, got {ru_count}")
    return p.total_bits / (ru_count * bw.data_symbols_per_ru * BITS_PER_SYMBOL)


def data_rate(p: PayloadSpec, ru_count: int, bw: BandwidthConfig) -> float:
    if ru_count < 1:
        raise ValueError(f"ru_count must be >= 1, got {ru_count}")
    return p.total_bits / (ru_count * bw.ru_duration_s)


def spectral_load(p: PayloadSpec, ru_count: int, bw: BandwidthConfig) -> float:
    """Bits per second per Hz of a single repetition, the Shannon exponent."""
    return p.total_bits / (bw.bandwidth_hz * ru_count * bw.ru_duration_s)


def shannon_snr(x: float) -> float:
    """``2**x - 1`` with an explicit overflow guard."""
    if x >= MAX_EXPONENT:
        raise InfeasibleMetricError(f"Shannon exponent {x:.4g} exceeds {MAX_EXPONENT:g}")
    return math.expm1(x * math.log(2.0))


def combined_metrics(p: PayloadSpec, cfg: TransmissionConfig, ch: ChannelParams) -> LinkMetrics:
    """Metrics of a grant combining RU count, bandwidth and repetitions.

    The TBS table plays no part here: ``p`` is the block actually carried.
    """
    bw = cfg.bw
    x = spectral_load(p, cfg.ru_count, bw)
    snr_one = shannon_snr(x)
    snr_req = snr_one / cfg.repetitions
    lfn0 = ch.noise_per_hz()
    energy = snr_one / x * lfn0
    p_tx = snr_req * lfn0 * bw.bandwidth_hz
    l_max = ch.p_max_w / (ch.noise_figure * ch.noise_density_w_per_hz * bw.bandwidth_hz * snr_req)
    return LinkMetrics(
        snr_req=snr_req,
        gamma=x / cfg.repetitions,
        energy_per_bit_j=energy,
        code_rate=code_rate(p, cfg.ru_count, bw),
        data_rate_bps=data_rate(p, cfg.ru_count, bw),
        p_tx_w=p_tx,
        l_max=l_max,
        tx_time_s=cfg.tx_time_s,
    )


def npusch_tx_power(ch: ChannelParams, cfg: TransmissionConfig) -> float:
    """UE transmit power (W) under open-loop NPUSCH power control.

    More than two repetitions always use maximum power. Otherwise the UE
    targets ``10*log10(M) + P0 + alpha*L`` dBm, capped at ``P_max``, where
    ``M`` is the allocation width in units of 15 kHz (1/4 at 3.75 kHz).
    """
    if cfg.repetitions > 2:
        return ch.p_max_w
    m = cfg.bw.bandwidth_hz / PC_REFERENCE_SCS_HZ
    target_dbm = 10.0 * math.log10(m) + ch.p0_dbm + ch.alpha * ch.path_loss_db
    return min(ch.p_max_w, dbm_to_w(target_dbm))


def available_snr(ch: ChannelParams, cfg: TransmissionConfig) -> float:
    return channel_snr(npusch_tx_power(ch, cfg), ch, cfg.bw)


# Single-approach forms. Each fixes two of (RU count, bandwidth, repetitions)
# at its base value; combined_metrics reduces to these.

def ru_approach(p: PayloadSpec, ru_count: int, bw_max: BandwidthConfig, ch: ChannelParams) -> tuple[float, float, float]:
    """``(snr_req, gamma, energy_per_bit)`` varying only the RU count."""
    x = p.total_bits / (bw_max.bandwidth_hz * ru_count * bw_max.ru_duration_s)
    snr = 2.0 ** x - 1.0
    return snr, x, snr / x * ch.noise_per_hz()


def bandwidth_approach(p: PayloadSpec, bw: BandwidthConfig, ch: ChannelParams) -> tuple[float, float, float]:
    """``(snr_req, gamma, energy_per_bit)`` varying only the bandwidth."""
    x = p.total_bits / (bw.bandwidth_hz * bw.ru_duration_s)
    snr = 2.0 ** x - 1.0
    return snr, x, snr / x * ch.noise_per_hz()


def repetition_approach(
    p: PayloadSpec, repetitions: int, bw_max: BandwidthConfig, ch: ChannelParams
) -> tuple[float, float, float]:
    """``(snr_req, gamma, energy_per_bit)`` varying only the repetitions.

    Combining sums the per-copy SNRs, so the requirement falls as ``1/R``
    while the energy per bit stays put.
    """
    x = p.total_bits / (bw_max.bandwidth_hz * bw_max.ru_duration_s)
    snr_one = 2.0 ** x - 1.0
    return snr_one / repetitions, x / repetitions, snr_one / x * ch.noise_per_hz()
