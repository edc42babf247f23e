"""Cellular-automaton gait-state codes and their transition rules.

A leg state packs (leg, sub-phase) into four bits. The rule table swaps the
leg bit and toggles the stance/swing group; as tabulated it is an
involution, so predictions alternate between two codes.
"""

from gaitforge.gait_ca import (
    CAState, Leg, SubPhase, complement, encode, next_state, predict_sequence,
)

print("code layout: bit3 = leg (0 left, 1 right), bits2..0 = sub-phase\n")

for leg in Leg:
    row = []
    for sp in SubPhase:
        row.append(f"{sp.name}={encode(leg, sp).bits}")
    print(f"{leg.name:>5}: " + " ".join(row))

print("\ntransition table:")
for code in range(16):
    state = CAState(code)
    print(f"  {state.bits} -> {next_state(state).bits}", end="")
    if code % 4 == 3:
        print()

seq = predict_sequence(CAState.from_bits("0000"), 6)
print("\npredicted sequence from 0000:", " ".join(s.bits for s in seq))
print("(the printed rules form an involution: period two)")

print("\nopposite-leg sub-phase pairing:")
for sp in SubPhase:
    print(f"  left {sp.name:>3} <-> right {complement(sp).name}")
