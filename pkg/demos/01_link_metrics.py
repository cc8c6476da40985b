# %% [markdown]
# # Link metrics of a single NB-IoT uplink grant
#
# A 20-byte packet (160 bits plus a 24-bit CRC) on the full 12-tone carrier,
# one resource unit, no repetitions, 100 dB path loss.

# %%
from nbiot_ul import BANDWIDTH_CONFIGS, ChannelParams, PayloadSpec, TransmissionConfig, combined_metrics

ch = ChannelParams.from_db(100.0)
cfg = TransmissionConfig(BANDWIDTH_CONFIGS[0], i_mcs=0, i_ru=0, repetitions=1)
m = combined_metrics(PayloadSpec(160), cfg, ch)

print(f"required SNR     {m.snr_req:.4f} ({m.snr_req_db:.2f} dB)")
print(f"utilization      {m.gamma:.4f} bit/s/Hz")
print(f"energy per bit   {m.energy_per_bit_j:.3e} J")
print(f"needed power     {m.p_tx_dbm:.2f} dBm")
print(f"max path loss    {m.l_max_db:.2f} dB at 23 dBm")

# %% [markdown]
# Repetitions divide the required SNR but leave the energy per bit alone.

# %%
for r in (1, 2, 4, 8):
    mr = combined_metrics(PayloadSpec(160), TransmissionConfig(cfg.bw, 0, 0, r), ch)
    print(f"R={r:<3d} SNR_req {mr.snr_req_db:7.2f} dB  E_b {mr.energy_per_bit_j:.3e} J  L_max {mr.l_max_db:.1f} dB")

# %% [markdown]
# Narrowing the band keeps every metric while the allocation stays
# multi-tone; single-tone allocations cost more.

# %%
for bw in BANDWIDTH_CONFIGS:
    mb = combined_metrics(PayloadSpec(160), TransmissionConfig(bw, 0, 0, 1), ch)
    print(f"{bw.n_tones:>2d} tone(s) @ {bw.scs_hz / 1e3:5.2f} kHz  SNR_req {mb.snr_req_db:6.2f} dB  "
          f"gamma {mb.gamma:.3f}  E_b {mb.energy_per_bit_j:.3e} J")
