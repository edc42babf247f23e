"""Hierarchical type-1 fuzzy push-recovery controller.

Two chained inference stages decide how a standing biped answers a push.
The first fuzzifies the push magnitude into small/average/large and crosses
it with the push direction to grade the body reaction (roll for sideways
pushes, pitch for sagittal ones). The second maps the reaction grid onto a
recovery strategy: counter-torque at the ankle, knee bend, hip lunge, or a
fall when the reaction saturates both axes. Rule firing is min, aggregation
across rules max (consequent clipping); the categorical output is the
highest-degree strategy. Pushes above 12 N are outside the controller's
envelope and signal recovery-impossible instead of classifying as a fall.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Mapping

from .fixtures import fixture_path


class Direction(Enum):
    LEFT = "left"
    RIGHT = "right"
    FORWARD = "forward"
    BACKWARD = "backward"


class Strategy(Enum):
    ANKLE = "ankle"
    KNEE = "knee"
    HIP = "hip"
    FALL_FRONTAL = "fall_frontal"
    FALL_SIDEWAYS = "fall_sideways"
    FALL = "fall"

    @property
    def severity(self) -> int:
        return _SEVERITY[self]

    @property
    def is_fall(self) -> bool:
        return self.severity >= 3


_SEVERITY = {
    Strategy.ANKLE: 0, Strategy.KNEE: 1, Strategy.HIP: 2,
    Strategy.FALL_FRONTAL: 3, Strategy.FALL_SIDEWAYS: 4, Strategy.FALL: 5,
}

REACTION_KEYS = (
    "small_roll", "average_roll", "large_roll",
    "small_pitch", "average_pitch", "large_pitch",
)
ROLL_KEYS = ("small_roll", "average_roll", "large_roll")
PITCH_KEYS = ("small_pitch", "average_pitch", "large_pitch")

FORCE_LIMIT = 12.0


class RecoveryImpossible(ValueError):
    """Push magnitude beyond the recoverable envelope."""


class NoDecision(ValueError):
    """Every reaction degree is zero; no rule fires."""


@dataclass(frozen=True)
class ForceInput:
    """A push: magnitude in Newtons plus a crisp direction.

    A mapping of per-direction degrees in [0, 1] is accepted instead of a
    crisp direction, e.g. to describe a diagonal push exciting both axes.
    """

    magnitude: float
    direction: Direction | Mapping[Direction, float]

    def __post_init__(self):
        if not self.magnitude >= 0.0:
            raise ValueError("force magnitude must be finite and >= 0")

    def direction_degrees(self) -> dict[Direction, float]:
        if isinstance(self.direction, Direction):
            return {d: 1.0 if d == self.direction else 0.0 for d in Direction}
        degrees = {d: 0.0 for d in Direction}
        for d, v in self.direction.items():
            d = Direction(d) if not isinstance(d, Direction) else d
            if not 0.0 <= v <= 1.0:
                raise ValueError("direction degrees must lie in [0, 1]")
            degrees[d] = float(v)
        return degrees


@dataclass(frozen=True)
class ReactionMembership:
    """Degrees of the six reaction terms, each in [0, 1]."""

    small_roll: float = 0.0
    average_roll: float = 0.0
    large_roll: float = 0.0
    small_pitch: float = 0.0
    average_pitch: float = 0.0
    large_pitch: float = 0.0

    def __post_init__(self):
        for key in REACTION_KEYS:
            v = getattr(self, key)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{key} degree {v} outside [0, 1]")

    def as_dict(self) -> dict[str, float]:
        return {key: getattr(self, key) for key in REACTION_KEYS}


@dataclass(frozen=True)
class PushResponse:
    reaction: ReactionMembership
    strategy: Strategy
    fell: bool                            # the fall/no-fall verdict
    strategy_degrees: Mapping[str, float]

    def as_dict(self) -> dict:
        return {
            "reaction": self.reaction.as_dict(),
            "strategy": self.strategy.value,
            "state": "fall" if self.fell else "not_fall",
            "strategy_degrees": dict(self.strategy_degrees),
        }


@lru_cache(maxsize=1)
def _rules() -> dict:
    with open(fixture_path("push_rules.json"), "r", encoding="utf-8") as fh:
        return json.load(fh)


def _trapezoid(x: float, abcd) -> float:
    a, b, c, d = abcd
    if x < a or x > d:
        return 0.0
    if x < b:
        return (x - a) / (b - a)
    if x <= c:
        return 1.0
    if d == c:
        return 1.0
    return (d - x) / (d - c)


def fuzzify_force(magnitude: float) -> dict[str, float]:
    """Membership of a push magnitude in {small, average, large}.

    The linguistic supports overlap (4-5 N and 8-9 N), so neighbouring
    degrees ramp linearly across the overlap and every magnitude in
    [0, 12] activates at least one term. Beyond 12 N the controller cannot
    recover and raises :class:`RecoveryImpossible`.
    """
    if not magnitude >= 0.0:
        raise ValueError("force must be finite and >= 0")
    limit = _rules()["force_limit"]
    if magnitude > limit:
        raise RecoveryImpossible(f"{magnitude} N exceeds the {limit} N envelope")
    return {
        name: _trapezoid(magnitude, abcd)
        for name, abcd in _rules()["force_sets"].items()
    }


def fis1_infer(force_degrees: Mapping[str, float],
               direction: Direction | Mapping[Direction, float]) -> ReactionMembership:
    """First stage: grade the body reaction from force level and direction.

    Sideways pushes (left/right) feed the roll terms, sagittal pushes
    (forward/backward) the pitch terms; each rule fires with the min of its
    force degree and its direction degree, and rules sharing a consequent
    aggregate with max. A crisp direction is degree 1 for itself, 0 for the
    rest.
    """
    dd = ForceInput(0.0, direction).direction_degrees()
    roll_dir = max(dd[Direction.LEFT], dd[Direction.RIGHT])
    pitch_dir = max(dd[Direction.FORWARD], dd[Direction.BACKWARD])
    out = {key: 0.0 for key in REACTION_KEYS}
    for level, consequents in _rules()["fis1"].items():
        strength = float(force_degrees.get(level, 0.0))
        roll_key, pitch_key = consequents["roll"], consequents["pitch"]
        out[roll_key] = max(out[roll_key], min(strength, roll_dir))
        out[pitch_key] = max(out[pitch_key], min(strength, pitch_dir))
    return ReactionMembership(**out)


def fis2_infer(reaction: ReactionMembership) -> PushResponse:
    """Second stage: reaction grid to recovery strategy.

    Each strategy takes the max over its grid cells of min(roll degree,
    pitch degree). A push that excites only one axis leaves the other silent;
    a silent axis is read as fully small (no roll evidence means at most a
    small roll), otherwise no two-sided rule could fire. Ties at the argmax
    resolve to the lower-severity strategy.
    """
    degrees = reaction.as_dict()
    if all(v == 0.0 for v in degrees.values()):
        raise NoDecision("all reaction degrees are zero")
    eff = dict(degrees)
    if all(eff[k] == 0.0 for k in ROLL_KEYS):
        eff["small_roll"] = 1.0
    if all(eff[k] == 0.0 for k in PITCH_KEYS):
        eff["small_pitch"] = 1.0

    strategy_degrees = {}
    for name, cells in _rules()["fis2"].items():
        strategy_degrees[name] = max(
            min(eff[roll_key], eff[pitch_key]) for roll_key, pitch_key in cells
        )
    best = max(
        Strategy,
        key=lambda s: (strategy_degrees[s.value], -s.severity),
    )
    return PushResponse(
        reaction=reaction,
        strategy=best,
        fell=best.is_fall,
        strategy_degrees=strategy_degrees,
    )


def recover(push: ForceInput) -> PushResponse:
    """Full pipeline: fuzzify the force, grade the reaction, pick the
    strategy. Deterministic; propagates the over-limit signal."""
    force_degrees = fuzzify_force(push.magnitude)
    reaction = fis1_infer(force_degrees, push.direction)
    return fis2_infer(reaction)


# ---------------------------------------------------------------------------
# Offline lookup and validation tables
# ---------------------------------------------------------------------------

_LEVELS = ("small", "average", "large")


def _parse_reaction_description(description) -> tuple[str, str]:
    """Accept "<level> Roll and <level> Pitch" in either order, or a
    (roll_level, pitch_level) pair."""
    if isinstance(description, (tuple, list)) and len(description) == 2:
        roll, pitch = (str(v).lower() for v in description)
    else:
        text = str(description).lower()
        roll = pitch = None
        for level in _LEVELS:
            if f"{level} roll" in text:
                roll = level
            if f"{level} pitch" in text:
                pitch = level
        if roll is None or pitch is None:
            raise ValueError(f"cannot parse reaction description {description!r}")
    if roll not in _LEVELS or pitch not in _LEVELS:
        raise ValueError(f"unknown reaction levels ({roll}, {pitch})")
    return roll, pitch


def lookup_strategy(magnitude: float, reaction_description) -> Strategy:
    """Offline controller: exact row lookup of the precomputed table.

    The force bands overlap, so the magnitude may admit two bands; the row
    whose band contains the magnitude and whose reaction pair matches wins.
    """
    limit = _rules()["force_limit"]
    if magnitude > limit:
        raise RecoveryImpossible(f"{magnitude} N exceeds the {limit} N envelope")
    if magnitude < 0.0:
        raise ValueError("force must be >= 0")
    roll, pitch = _parse_reaction_description(reaction_description)
    bands = _rules()["bands"]
    candidates = {
        name for name, (lo, hi) in bands.items() if lo <= magnitude <= hi
    }
    for row in _rules()["lookup"]:
        if row["band"] in candidates and row["roll"] == roll and row["pitch"] == pitch:
            return Strategy(row["strategy"])
    raise LookupError(
        f"no table row for {magnitude} N with {roll} roll / {pitch} pitch"
    )


@dataclass(frozen=True)
class RangeCheckOutcome:
    status: str                      # "pass" | "mismatch" | "unmatched"
    band: str | None = None
    expected: Strategy | None = None

    @property
    def ok(self) -> bool:
        return self.status == "pass"


def validation_bands() -> list[dict]:
    return _rules()["validation"]


def validate_against_ranges(response: PushResponse,
                            observed_angles: Mapping[str, float],
                            bands: list[dict] | None = None) -> RangeCheckOutcome:
    """Check a response against the captured joint-angle bands.

    Finds the force band whose six intervals contain the observation and
    compares its expected strategy with the response's. Observations outside
    every band report "unmatched" rather than failing.
    """
    bands = bands if bands is not None else validation_bands()
    if len(observed_angles) != 6:
        raise ValueError("expected one angle per joint (six values)")
    for row in bands:
        hit = True
        for jkey, (a, b) in row["intervals"].items():
            lo, hi = min(a, b), max(a, b)
            angle = observed_angles.get(jkey)
            if angle is None or not lo <= angle <= hi:
                hit = False
                break
        if hit:
            expected = Strategy(row["strategy"])
            status = "pass" if expected == response.strategy else "mismatch"
            return RangeCheckOutcome(status=status, band=row["band"], expected=expected)
    return RangeCheckOutcome(status="unmatched")
