"""Three ways to boost the same stumps: serial, filtered, and parallel.

Trains the plain sequential selector, the redundancy-filtered variant, and
the parallel variant that replaces post-warmup weight updates with draws from
per-sample Gamma models.  Shows the selected wavelets and two structural
facts: the filter changes which features survive, and the parallel trainer's
output does not depend on the worker count.
"""

import math

import numpy as np

from gaborboost import (
    BoostConfig,
    FeatureLayout,
    GaborBankConfig,
    GallerySample,
    SyntheticSpec,
    build_pairs,
    extract_features,
    fit_gamma,
    generate_synthetic,
    make_bank,
    train_ab,
    train_pab,
)

spec = SyntheticSpec(10, 3, image_size=64, noise_sigma=0.05, seed=21)
dataset = generate_synthetic(spec)
config = GaborBankConfig()
bank = make_bank(config)
layout = FeatureLayout.for_image(config, spec.image_size, spec.image_size)
gallery = [
    GallerySample(ident, f"{ident}/{i}", extract_features(img, bank, config.downsample_step))
    for i, (ident, img) in enumerate(dataset)
]
tset = build_pairs(gallery, 10, 80, seed=4)
tset.layout = layout

plain = train_ab(tset, BoostConfig(20, 20, mi_threshold=math.inf, seed=2))
filtered = train_ab(tset, BoostConfig(20, 20, mi_threshold=0.2, seed=2))
overlap = len(set(plain.selection) & set(filtered.selection))
print(f"unfiltered picks : {plain.selection[:8]} ...")
print(f"filtered picks   : {filtered.selection[:8]} ...")
print(f"shared features  : {overlap} of 20")

print("\nfirst selected wavelets (scale, orientation, x, y, weight):")
for h, c in filtered.rounds[:6]:
    u, v, row, col = layout.decode(h.feature_index)
    print(f"  u={u} v={v} x={col * layout.step:2d} y={row * layout.step:2d} c={c:.3f}")

# parallel variant: warm up 5 rounds, model the weight histories, sample the rest
cfg = BoostConfig(total_rounds=20, serial_rounds=5, mi_threshold=0.2, seed=2)
one_worker, trajectory = train_pab(tset, cfg, workers=1, record_trajectory=True)
four_workers = train_pab(tset, cfg, workers=4)
print(f"\nparallel phase rounds: {cfg.total_rounds - cfg.serial_rounds}")
print(f"worker count changes nothing: {one_worker.rounds == four_workers.rounds}")

# the per-sample weight histories behind the Gamma models
params = [fit_gamma(trajectory[:, i]) for i in range(trajectory.shape[1])]
shapes = np.array([p.alpha for p in params if not p.is_degenerate])
print(
    f"fitted weight models: {len(shapes)} samples,"
    f" shape quartiles {np.percentile(shapes, [25, 50, 75]).round(2)}"
)
