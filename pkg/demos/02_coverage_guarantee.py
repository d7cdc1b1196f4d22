"""Show the distribution-free coverage guarantee holding across seeds.

For exchangeable calibration/test data the probability that a calibrated
interval contains the truth is at least 1 - alpha (and at most
1 - alpha + 1/(m+1) for continuous scores). Whatever the noise family,
the empirical coverage concentrates inside that band.
"""

import numpy as np

import calconform as cc

ALPHA = 0.1
M, N = 500, 4000
SEEDS = range(15)

for family in ("gaussian", "student_t"):
    noise = cc.NoiseModel(family=family, dof=3.0)
    coverages = []
    for seed in SEEDS:
        config = cc.SimConfig(
            seed=seed, n_samples=M + N, calib_fraction=M / (M + N), noise=noise
        )
        trial = cc.run_trial(config)
        hits = total = 0
        for axis in cc.AXES:
            calibrator = cc.fit_calibrator(trial.calibration[axis], ALPHA)
            test = trial.test[axis]
            lower, upper = cc.predict_bounds(
                calibrator, [r.y_hat for r in test], [r.sigma for r in test]
            )
            y = np.array([r.y_true for r in test])
            hits += int(np.sum((y >= lower) & (y <= upper)))
            total += len(test)
        coverages.append(hits / total)

    low, high = 1 - ALPHA, 1 - ALPHA + 1 / (M + 1)
    print(f"{family:>10}: guaranteed band [{low:.4f}, {high:.4f}]  "
          f"empirical mean {np.mean(coverages):.4f}  "
          f"per-seed range [{min(coverages):.4f}, {max(coverages):.4f}]")

print("\nSingle seeds fluctuate around the band; the across-seed mean sits within")
print("Monte-Carlo error of it, for heavy-tailed noise just as for gaussian.")
