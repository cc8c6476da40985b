# %% [markdown]
# # Link adaptation across coupling loss
#
# Minimum-time grant selection under 3GPP power control (P0 = -100 dBm,
# full path-loss compensation) for growing MCL.

# %%
from pathlib import Path

from nbiot_ul import AdaptationInput, ChannelParams, adapt, load_tbs_table, oracle_adapt
from nbiot_ul.sweeps import MCL_SWEEP_COLUMNS, SweepSpec, run_mcl_sweep, to_csv

table = load_tbs_table()

# %% [markdown]
# One point: a 20-byte packet at 164 dB needs single-tone repetitions.

# %%
res = adapt(AdaptationInput(160), table, ChannelParams.from_db(164.0))
cfg = res.selected
print(f"{cfg.bw.n_tones} tone @ {cfg.bw.scs_hz / 1e3} kHz, MCS {cfg.i_mcs}, {cfg.ru_count} RU, "
      f"R={cfg.repetitions}, {cfg.tx_time_s * 1e3:.0f} ms")
assert oracle_adapt(AdaptationInput(160), table, ChannelParams.from_db(164.0)).selected == cfg

# %% [markdown]
# The sweep. 1600 bits exceed every block in the bundled table, so 100 bytes
# is shown alongside for a second feasible curve.

# %%
spec = SweepSpec("mcl-sweep", payload_bits_list=(160, 800, 1600))
rows = run_mcl_sweep(spec, table)
out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)
(out / "mcl_sweep.csv").write_text(to_csv(rows, MCL_SWEEP_COLUMNS))

for b in spec.payload_bits_list:
    print(f"payload {b} bits")
    last = None
    for r in (r for r in rows if r["payload_bits"] == b):
        key = (r["tx_time_s"], r["n_tones"], r["scs_hz"], r["repetitions"])
        if key != last:
            if r["feasible"]:
                print(f"  from {r['mcl_db']:6.1f} dB: {r['tx_time_s'] * 1e3:7.0f} ms  "
                      f"{r['n_tones']:>2d} tone(s) @ {r['scs_hz'] / 1e3:5.2f} kHz  R={r['repetitions']}")
            else:
                print(f"  from {r['mcl_db']:6.1f} dB: infeasible")
            last = key
