"""NB-IoT uplink configuration space.

Bandwidth configurations, RU counts, repetition levels and the NPUSCH
transport block size table, plus enumeration of every legal grant in
search-priority order.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterator, Mapping, Optional, Sequence, Union

TBS_TABLE_ENV = "NBIOT_TBS_TABLE"

RU_COUNTS: tuple[int, ...] = (1, 2, 3, 4, 5, 6, 8, 10)
REPETITIONS: tuple[int, ...] = (1, 2, 4, 8, 16, 32, 64, 128)
# Literal repetition set of the evaluation parameter table (no 64).
REPETITIONS_TABLE1: tuple[int, ...] = (1, 2, 4, 8, 16, 32, 128)

MCS_MAX_MULTI_TONE = 12
MCS_MAX_SINGLE_TONE = 10

N_TBS_ROWS = 13


@dataclass(frozen=True)
class BandwidthConfig:
    """One of the five uplink tone allocations.

    Parameters
    ----------
    id : int
        Configuration index, 1 (widest) to 5 (narrowest).
    n_tones : int
        Number of allocated subcarriers.
    scs_hz : float
        Subcarrier spacing in Hz.
    ru_duration_s : float
        Duration of one resource unit in seconds.
    """

    id: int
    n_tones: int
    scs_hz: float
    ru_duration_s: float

    def __post_init__(self) -> None:
        if self.scs_hz == 3750.0 and self.n_tones != 1:
            raise ValueError("3.75 kHz spacing is single-tone only")

    @property
    def bandwidth_hz(self) -> float:
        return self.scs_hz * self.n_tones

    @property
    def is_single_tone(self) -> bool:
        return self.n_tones == 1

    @property
    def data_symbols_per_ru(self) -> int:
        # 6 data SC-FDMA symbols per slot (one DMRS); slots per RU times tones.
        return 96 if self.is_single_tone else 144

    @property
    def ru_duration_ms(self) -> int:
        return round(self.ru_duration_s * 1000)

    @property
    def mcs_max(self) -> int:
        return MCS_MAX_SINGLE_TONE if self.is_single_tone else MCS_MAX_MULTI_TONE


BANDWIDTH_CONFIGS: tuple[BandwidthConfig, ...] = (
    BandwidthConfig(1, 12, 15000.0, 0.001),
    BandwidthConfig(2, 6, 15000.0, 0.002),
    BandwidthConfig(3, 3, 15000.0, 0.004),
    BandwidthConfig(4, 1, 15000.0, 0.008),
    BandwidthConfig(5, 1, 3750.0, 0.032),
)


def bandwidth_config(config_id: int) -> BandwidthConfig:
    """Return the bandwidth configuration with index ``config_id`` (1..5)."""
    if not 1 <= config_id <= len(BANDWIDTH_CONFIGS):
        raise ValueError(f"bandwidth config id must be in 1..5, got {config_id}")
    return BANDWIDTH_CONFIGS[config_id - 1]


# Repetition cap per config id: no repetitions until single-tone.
DEFAULT_R_MAX: Mapping[int, int] = {1: 1, 2: 1, 3: 1, 4: 128, 5: 128}


class TableError(ValueError):
    """Base class for TBS table problems."""


class TableParseError(TableError):
    """The table file is malformed."""


class TableValidationError(TableError):
    """The table parsed but breaks a table invariant."""


@dataclass(frozen=True)
class TbsTable:
    """Transport block sizes in bits, ``entries[i_mcs][i_ru]``."""

    entries: tuple[tuple[int, ...], ...]
    ru_counts: tuple[int, ...] = field(default=RU_COUNTS)

    def __post_init__(self) -> None:
        validate_tbs_table(self.entries, self.ru_counts)

    @property
    def n_mcs(self) -> int:
        return len(self.entries)

    @property
    def max_tbs(self) -> int:
        return max(max(row) for row in self.entries)

    def distinct_sizes(self) -> list[int]:
        return sorted({v for row in self.entries for v in row})


def validate_tbs_table(entries: Sequence[Sequence[int]], ru_counts: Sequence[int] = RU_COUNTS) -> None:
    """Check shape, positivity and row/column monotonicity.

    Raises
    ------
    TableValidationError
        Naming the first offending cell.
    """
    if tuple(ru_counts) != RU_COUNTS:
        raise TableValidationError(f"ru_counts must be {RU_COUNTS}, got {tuple(ru_counts)}")
    if len(entries) != N_TBS_ROWS:
        raise TableValidationError(f"expected {N_TBS_ROWS} rows, got {len(entries)}")
    for i, row in enumerate(entries):
        if len(row) != len(RU_COUNTS):
            raise TableValidationError(f"row {i}: expected {len(RU_COUNTS)} columns, got {len(row)}")
        for j, v in enumerate(row):
            if not isinstance(v, int) or isinstance(v, bool) or v <= 0:
                raise TableValidationError(f"cell (i_mcs={i}, i_ru={j}): {v!r} is not a positive integer")
            if j > 0 and v < row[j - 1]:
                raise TableValidationError(
                    f"cell (i_mcs={i}, i_ru={j}): {v} < {row[j - 1]} breaks row monotonicity"
                )
            if i > 0 and v < entries[i - 1][j]:
                raise TableValidationError(
                    f"cell (i_mcs={i}, i_ru={j}): {v} < {entries[i - 1][j]} breaks column monotonicity"
                )


def parse_tbs_table(text: str) -> TbsTable:
    """Parse the plain-text table format.

    One row per MCS index, eight whitespace-separated integers per row.
    Blank lines and lines starting with ``#`` are ignored.
    """
    rows: list[tuple[int, ...]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        row_idx = len(rows)
        if len(tokens) != len(RU_COUNTS):
            raise TableParseError(
                f"line {lineno} (row {row_idx}): expected {len(RU_COUNTS)} values, got {len(tokens)}"
            )
        values = []
        for col, tok in enumerate(tokens):
            try:
                values.append(int(tok))
            except ValueError:
                raise TableParseError(
                    f"line {lineno} (row {row_idx}, column {col}): {tok!r} is not an integer"
                ) from None
        rows.append(tuple(values))
    return TbsTable(tuple(rows))


def default_table_path() -> Path:
    env = os.environ.get(TBS_TABLE_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("nbiot_ul") / "data" / "tbs_npusch.txt"))


def load_tbs_table(source: Union[str, os.PathLike, None] = None) -> TbsTable:
    """Load and validate a TBS table file.

    Parameters
    ----------
    source : path-like, optional
        Table file. Defaults to ``$NBIOT_TBS_TABLE`` or the bundled table.
    """
    path = Path(source) if source is not None else default_table_path()
    return parse_tbs_table(path.read_text())


def tbs_lookup(table: TbsTable, i_mcs: int, i_ru: int) -> int:
    if not 0 <= i_mcs < table.n_mcs:
        raise IndexError(f"i_mcs={i_mcs} out of range 0..{table.n_mcs - 1}")
    if not 0 <= i_ru < len(table.ru_counts):
        raise IndexError(f"i_ru={i_ru} out of range 0..{len(table.ru_counts) - 1}")
    return table.entries[i_mcs][i_ru]


@dataclass(frozen=True)
class TransmissionConfig:
    """A complete uplink grant."""

    bw: BandwidthConfig
    i_mcs: int
    i_ru: int
    repetitions: int = 1

    def __post_init__(self) -> None:
        if self.repetitions not in REPETITIONS:
            raise ValueError(f"repetitions must be one of {REPETITIONS}, got {self.repetitions}")
        if not 0 <= self.i_mcs <= self.bw.mcs_max:
            raise ValueError(f"i_mcs={self.i_mcs} out of range 0..{self.bw.mcs_max} for config {self.bw.id}")
        if not 0 <= self.i_ru < len(RU_COUNTS):
            raise ValueError(f"i_ru={self.i_ru} out of range 0..{len(RU_COUNTS) - 1}")

    @property
    def ru_count(self) -> int:
        return RU_COUNTS[self.i_ru]

    @property
    def tx_time_s(self) -> float:
        return self.repetitions * self.ru_count * self.bw.ru_duration_s

    @property
    def tx_time_ms(self) -> int:
        """Exact transmission time, for comparisons."""
        return self.repetitions * self.ru_count * self.bw.ru_duration_ms

    def key(self) -> tuple[int, int, int, int]:
        """``(C, i_mcs, i_ru, R)`` tuple."""
        return (self.bw.id, self.i_mcs, self.i_ru, self.repetitions)


def enumerate_configs(
    bw_filter: Optional[int] = None,
    r_max: Optional[Mapping[int, int]] = None,
    repetitions: Sequence[int] = REPETITIONS,
) -> Iterator[TransmissionConfig]:
    """Yield legal grants in search-priority order.

    Order is config id ascending (widest bandwidth first), then repetitions,
    then MCS index, then RU index.

    Parameters
    ----------
    bw_filter : int, optional
        Restrict to a single configuration id.
    r_max : mapping, optional
        Repetition cap per configuration id, defaults to ``DEFAULT_R_MAX``.
    repetitions : sequence of int
        Allowed repetition levels; pass ``REPETITIONS_TABLE1`` to drop 64.
    """
    caps = DEFAULT_R_MAX if r_max is None else r_max
    for bw in BANDWIDTH_CONFIGS:
        if bw_filter is not None and bw.id != bw_filter:
            continue
        cap = caps[bw.id]
        if cap not in REPETITIONS:
            raise ValueError(f"r_max for config {bw.id} must be in {REPETITIONS}, got {cap}")
        for r in sorted(repetitions):
            if r > cap:
                break
            for i_mcs in range(bw.mcs_max + 1):
                for i_ru in range(len(RU_COUNTS)):
                    yield TransmissionConfig(bw, i_mcs, i_ru, r)
