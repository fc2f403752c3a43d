"""What detector noise does (and does not do) to the correlation.

Uncorrelated dark noise, even ten times stronger than the photocurrent
noise, leaves the expected correlation untouched because it never correlates
the two channels.  Correlated dark noise and classical LO intensity noise
shift every phase by the same offset, which the blocked-signal calibration
removes.
"""

import numpy as np
from dataclasses import replace

from hccm.config import preset_config
from hccm.detector import DetectorConfig, scan_correlations

cfg = preset_config("paper-quick")
cfg = replace(cfg, samples_per_phase=50_000, blocked_samples=100_000)

clean = scan_correlations(cfg)

noisy_det = DetectorConfig(
    eta1=0.94, eta2=0.94, dark_uncorr1=120.0, dark_uncorr2=120.0, dark_corr=3.0,
    lo_excess=0.001,
)
noisy = scan_correlations(replace(cfg, detector=noisy_det))

print("clean vs noisy run (same seed; dark noise ~10x photocurrent variance):")
print(
    f"{'phi/pi':>8s}{'C clean':>11s}{'C noisy':>11s}{'noisy-offset':>14s}{'stderr':>9s}"
)
offset = noisy.blocked_signal
for (phi, ec, en) in list(zip(clean.phis, clean.estimates, noisy.estimates))[::8]:
    corrected = en.value - offset.value
    print(
        f"{phi / np.pi:8.3f}{ec.value:11.4f}{en.value:11.4f}{corrected:14.4f}{en.stderr:9.4f}"
    )
print(
    f"\nblocked-signal offset = {offset.value:.4f} +- {offset.stderr:.4f} "
    f"(correlated dark + LO intensity noise; phase independent)"
)

resid = [
    (en.value - offset.value) - (ec.value - clean.blocked_signal.value)
    for ec, en in zip(clean.estimates, noisy.estimates)
]
pooled = float(np.mean(resid))
se = float(np.std(resid, ddof=1) / np.sqrt(len(resid)))
print(
    f"pooled corrected-minus-clean residual: {pooled:+.4f} +- {se:.4f} "
    f"({abs(pooled) / se:.1f} sigma from zero)"
)
print("the offset correction recovers the clean correlation at every phase")
