"""Build a Gabor filter bank and look at what the kernels are made of.

Each filter is a complex sinusoid under a Gaussian envelope; the bank spans
five frequencies (halving every two scales) and eight orientations.  This
script prints the bank geometry and writes each kernel's magnitude as a small
PGM so you can eyeball the oriented blobs.
"""

from pathlib import Path

import numpy as np

from gaborboost import GaborBankConfig, make_bank, save_pgm

out_dir = Path(__file__).resolve().parent / "output"
out_dir.mkdir(exist_ok=True)

config = GaborBankConfig()  # f_max 0.25 c/px, gamma = eta = sqrt(2), 5x8 bank
bank = make_bank(config)
print(f"bank of {len(bank)} kernels, side {2 * config.kernel_radius + 1} px")
print("scale  orientation  frequency(c/px)  angle(rad)  peak")
for k in bank[::8]:  # one orientation per scale is enough to see the trend
    peak = abs(k.taps[k.radius, k.radius])
    print(
        f"{k.scale_index:5d}  {k.orientation_index:11d}  {k.f_u:15.4f}"
        f"  {k.theta_v:10.4f}  {peak:.5f}"
    )

# magnitudes rendered as images: frequency shrinks, envelope widens
for k in bank:
    mag = np.abs(k.taps)
    save_pgm(
        out_dir / f"kernel_u{k.scale_index}_v{k.orientation_index}.pgm",
        mag / mag.max(),
    )
print(f"\nwrote {len(bank)} kernel renderings to {out_dir}")

# the real part oscillates along the wave axis; the origin tap is the peak
k = bank[0]
row = k.taps[k.radius, k.radius - 8 : k.radius + 9].real
print("\ncenter row of kernel (0,0), real part:")
print("  " + " ".join(f"{v:+.3f}" for v in row))
