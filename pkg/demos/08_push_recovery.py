"""Hierarchical fuzzy push-recovery controller.

Sweeps push magnitudes for a backward push and shows the strategy escalating
from ankle torque through knee and hip to the recovery limit, then checks the
online inference against the precomputed offline lookup table and a captured
joint-angle validation row.
"""

import json

import numpy as np

from gaitforge.push_fuzzy import (
    Direction, ForceInput, RecoveryImpossible, fuzzify_force, lookup_strategy,
    recover, validate_against_ranges,
)

print("force fuzzification at a few magnitudes:")
for f in (0.0, 4.5, 7.0, 8.5, 11.0):
    degrees = fuzzify_force(f)
    print(f"  {f:5.1f} N -> " + " ".join(f"{k}={v:.2f}" for k, v in degrees.items()))

print("\nstrategy sweep, backward push:")
last = None
for f in np.arange(0.0, 12.01, 0.25):
    strategy = recover(ForceInput(float(f), Direction.BACKWARD)).strategy
    if strategy != last:
        print(f"  from {f:5.2f} N: {strategy.value}")
        last = strategy

try:
    recover(ForceInput(13.0, Direction.BACKWARD))
except RecoveryImpossible as exc:
    print(f"  13.00 N: {exc}")

print("\na diagonal shove excites both roll and pitch:")
response = recover(ForceInput(10.0, {Direction.LEFT: 1.0, Direction.BACKWARD: 1.0}))
print(json.dumps(response.as_dict(), indent=2, sort_keys=True))

print("\noffline lookup agrees with the inference path:")
for f, description in ((2.0, "Small Roll and Small Pitch"),
                       (6.5, "Average Pitch and Small Roll"),
                       (10.0, "Large Roll and Small Pitch")):
    print(f"  {f:5.1f} N, {description!r} -> {lookup_strategy(f, description).value}")

observed = {
    "left_hip": 5.0, "left_knee": 6.0, "left_ankle": 2.0,
    "right_hip": -7.0, "right_knee": -3.0, "right_ankle": -3.0,
}
outcome = validate_against_ranges(recover(ForceInput(2.0, Direction.BACKWARD)), observed)
print(f"\nvalidation against captured angle bands: {outcome.status} "
      f"(band {outcome.band})")
