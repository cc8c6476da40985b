"""Analytical NB-IoT uplink link budget and link adaptation."""

from .adaptation import (
    AdaptationInput,
    AdaptationResult,
    CoverageInfeasible,
    PayloadTooLarge,
    adapt,
    oracle_adapt,
    precompute_snr_req,
)
from .grid import (
    BANDWIDTH_CONFIGS,
    REPETITIONS,
    REPETITIONS_TABLE1,
    RU_COUNTS,
    BandwidthConfig,
    TableError,
    TableParseError,
    TableValidationError,
    TbsTable,
    TransmissionConfig,
    bandwidth_config,
    enumerate_configs,
    load_tbs_table,
    parse_tbs_table,
    tbs_lookup,
)
from .metrics import (
    ChannelParams,
    InfeasibleMetricError,
    LinkMetrics,
    PayloadSpec,
    available_snr,
    channel_snr,
    code_rate,
    combined_metrics,
    data_rate,
    dbm_to_w,
    from_db,
    npusch_tx_power,
    to_db,
    w_to_dbm,
)

__version__ = "0.1.0"
