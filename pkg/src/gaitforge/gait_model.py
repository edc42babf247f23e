"""Piecewise-polynomial gait engine.

One stride is parameterized by a cycle coordinate ``x`` in ``[0, 1.6]``.
The cycle is split into seven sub-phases by a :class:`PhaseSchedule`; inside
each phase, every one of the six leg joints follows its own polynomial
"vector field" (angle as a function of ``x``) with an additive error offset.
This module evaluates those fields, stitches them into full-cycle
trajectories, checks tabulated joint-angle ranges, builds phase portraits,
and fits new fields from captured samples.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Iterable, Mapping, Sequence

import numpy as np

from .fixtures import fixture_path

CYCLE_LENGTH = 1.6

# Guard thresholds: the coordinate where each phase hands over to the next.
GUARD_BOUNDARIES = (0.5, 0.733, 0.9833, 1.1167, 1.2667, 1.4333, 1.600)

# Alternate preset: phase ends as fractions of the cycle.
PERCENT_FRACTIONS = (0.10, 0.30, 0.50, 0.60, 0.73, 0.87, 1.00)

DEFAULT_TC = 0.0167


class GaitPhase(IntEnum):
    """The seven gait sub-phases, in cyclic order."""

    LR = 0    # loading response
    MST = 1   # mid stance
    TS = 2    # terminal stance
    PS = 3    # pre swing
    IS = 4    # initial swing
    MSW = 5   # mid swing
    TSW = 6   # terminal swing

    @property
    def successor(self) -> "GaitPhase":
        return GaitPhase((int(self) + 1) % 7)


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"


class Joint(Enum):
    HIP = "hip"
    KNEE = "knee"
    ANKLE = "ankle"


@dataclass(frozen=True)
class JointId:
    side: Side
    joint: Joint

    @property
    def key(self) -> str:
        return f"{self.side.value}_{self.joint.value}"

    @classmethod
    def from_key(cls, key: str) -> "JointId":
        side, joint = key.split("_", 1)
        return cls(Side(side), Joint(joint))


# Column order used by trajectory files.
JOINTS = (
    JointId(Side.LEFT, Joint.HIP),
    JointId(Side.RIGHT, Joint.HIP),
    JointId(Side.LEFT, Joint.KNEE),
    JointId(Side.RIGHT, Joint.KNEE),
    JointId(Side.LEFT, Joint.ANKLE),
    JointId(Side.RIGHT, Joint.ANKLE),
)
JOINT_KEYS = tuple(j.key for j in JOINTS)


class MissingFieldError(LookupError):
    """A (joint, phase) pair has no vector field in the bank."""


class SingularFitError(ValueError):
    """The least-squares normal system is rank deficient."""


@dataclass(frozen=True)
class PhaseSchedule:
    """Seven strictly increasing phase-end coordinates; the last one is the
    cycle length."""

    boundaries: tuple[float, ...]

    def __post_init__(self):
        b = tuple(float(v) for v in self.boundaries)
        if len(b) != 7:
            raise ValueError(f"expected 7 boundaries, got {len(b)}")
        if b[0] <= 0.0 or any(hi <= lo for lo, hi in zip(b, b[1:])):
            raise ValueError("boundaries must be strictly increasing and positive")
        object.__setattr__(self, "boundaries", b)

    @property
    def x_max(self) -> float:
        return self.boundaries[-1]

    def interval(self, phase: GaitPhase) -> tuple[float, float]:
        """Half-open-on-the-left interval (lo, hi] owned by `phase`; LR also
        owns x = 0."""
        lo = 0.0 if phase == GaitPhase.LR else self.boundaries[int(phase) - 1]
        return lo, self.boundaries[int(phase)]

    @classmethod
    def guard(cls) -> "PhaseSchedule":
        """Default preset: the guard-map thresholds."""
        return cls(GUARD_BOUNDARIES)

    @classmethod
    def percent(cls, x_max: float = CYCLE_LENGTH) -> "PhaseSchedule":
        """Alternate preset: fixed per-phase percentages scaled to `x_max`."""
        return cls(tuple(x_max * f for f in PERCENT_FRACTIONS))

    @classmethod
    def preset(cls, name: str) -> "PhaseSchedule":
        if name == "guard":
            return cls.guard()
        if name == "percent":
            return cls.percent()
        raise ValueError(f"unknown schedule preset {name!r}")


def phase_of(x: float, schedule: PhaseSchedule | None = None) -> GaitPhase:
    """Map a cycle coordinate to its gait phase.

    Guards are strict, so a coordinate sitting exactly on a boundary belongs
    to the earlier phase; x = 0 is LR. Coordinates past the cycle end wrap
    around (the stride repeats).
    """
    schedule = schedule or PhaseSchedule.guard()
    if not math.isfinite(x) or x < 0.0:
        raise ValueError(f"cycle coordinate must be finite and >= 0, got {x}")
    if x > schedule.x_max:
        x = math.fmod(x, schedule.x_max)
    for phase in GaitPhase:
        if x <= schedule.boundaries[int(phase)]:
            return phase
    return GaitPhase.TSW  # unreachable: x <= x_max held above


@dataclass(frozen=True)
class PolynomialVectorField:
    """Polynomial joint-angle field for one (joint, phase) pair.

    Coefficients are ordered highest degree first. `error_offset` is the
    tabulated constant correction (degrees) added on top of the polynomial.
    """

    coefficients: tuple[float, ...]
    error_offset: float = 0.0
    valid_interval: tuple[float, float] = (0.0, CYCLE_LENGTH)

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        if not 3 <= len(coeffs) <= 5:
            raise ValueError("degree must be between 2 and 4")
        lo, hi = (float(v) for v in self.valid_interval)
        if not (hi > lo and 0.0 <= lo and hi <= CYCLE_LENGTH):
            raise ValueError(f"invalid interval [{lo}, {hi}]")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "valid_interval", (lo, hi))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x, strict: bool = False):
        return eval_vector_field(self, x, strict=strict)


def eval_vector_field(vf: PolynomialVectorField, x, strict: bool = False):
    """Evaluate a field by Horner's scheme, plus the error offset.

    With ``strict`` the coordinate must lie inside the field's valid
    interval. Accepts scalars or arrays.
    """
    xs = np.asarray(x, dtype=float)
    if strict:
        lo, hi = vf.valid_interval
        if np.any(xs < lo) or np.any(xs > hi):
            raise ValueError(
                f"coordinate outside valid interval [{lo}, {hi}]"
            )
    acc = np.zeros_like(xs)
    for c in vf.coefficients:
        acc = acc * xs + c
    acc = acc + vf.error_offset
    return float(acc) if np.isscalar(x) else acc


@dataclass(frozen=True)
class GaitModelConfig:
    """Physical and sampling parameters of the walking model.

    Lengths are meters, masses grams. Only `tc` and `schedule` affect
    trajectory generation; the morphological parameters configure the model
    for a subject and ride along into reports.
    """

    l1: float = 0.4      # thigh
    l2: float = 0.4      # shank
    l3: float = 0.1      # foot
    m1: float = 5000.0   # torso
    m2: float = 3000.0   # shank
    m3: float = 1000.0   # swing
    g: float = 9.8
    gamma: float = 0.0   # ground slope, radians
    tc: float = DEFAULT_TC
    schedule: PhaseSchedule = field(default_factory=PhaseSchedule.guard)

    def __post_init__(self):
        for name in ("l1", "l2", "l3", "m1", "m2", "m3"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be strictly positive")
        if self.tc <= 0.0:
            raise ValueError("tc must be strictly positive")


class FieldBank:
    """The full 6-joint x 7-phase collection of vector fields."""

    def __init__(self, fields: Mapping[str, Mapping[str, PolynomialVectorField]]):
        self._fields = {
            joint: dict(phases) for joint, phases in fields.items()
        }

    def get(self, joint: JointId | str, phase: GaitPhase | str) -> PolynomialVectorField:
        jkey = joint.key if isinstance(joint, JointId) else joint
        pkey = phase.name if isinstance(phase, GaitPhase) else phase
        try:
            return self._fields[jkey][pkey]
        except KeyError:
            raise MissingFieldError(f"no field for ({jkey}, {pkey})") from None

    def joints(self) -> tuple[str, ...]:
        return tuple(self._fields)

    def require_complete(self, joints: Iterable[str] = JOINT_KEYS) -> None:
        for jkey in joints:
            for phase in GaitPhase:
                self.get(jkey, phase)

    def to_dict(self) -> dict:
        return {
            jkey: {
                pkey: {
                    "coeffs": list(vf.coefficients),
                    "error": vf.error_offset,
                    "interval": list(vf.valid_interval),
                }
                for pkey, vf in phases.items()
            }
            for jkey, phases in self._fields.items()
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> "FieldBank":
        fields: dict[str, dict[str, PolynomialVectorField]] = {}
        for jkey, phases in doc.items():
            fields[jkey] = {}
            for pkey, spec in phases.items():
                fields[jkey][pkey] = PolynomialVectorField(
                    coefficients=tuple(spec["coeffs"]),
                    error_offset=float(spec["error"]),
                    valid_interval=tuple(spec["interval"]),
                )
        return cls(fields)

    @classmethod
    def from_json(cls, path) -> "FieldBank":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=1, sort_keys=True)
            fh.write("\n")

    @classmethod
    def default(cls) -> "FieldBank":
        return cls.from_json(fixture_path("tables_5_1_to_5_6.json"))


@dataclass(frozen=True)
class BoundaryGap:
    """C0 mismatch between adjacent phase fields at one boundary."""

    x: float
    from_phase: GaitPhase
    to_phase: GaitPhase
    gaps: Mapping[str, float]  # joint key -> |f_from(x) - f_to(x)|


@dataclass
class JointTrajectorySet:
    """Six joint-angle sequences sampled on a shared cycle grid."""

    x: np.ndarray                      # grid, strictly increasing, step tc
    angles: dict[str, np.ndarray]      # joint key -> degrees
    phases: np.ndarray                 # GaitPhase ordinal per grid point
    tc: float
    schedule: PhaseSchedule
    boundary_report: list[BoundaryGap] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.x)

    def joint(self, joint: JointId | str) -> np.ndarray:
        key = joint.key if isinstance(joint, JointId) else joint
        return self.angles[key]

    def write_tsv(self, path) -> None:
        """Tab-separated trajectory: time then the six joint columns, six
        decimal places."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("time\t" + "\t".join(JOINT_KEYS) + "\n")
            for i, xi in enumerate(self.x):
                row = [f"{xi:.6f}"]
                row += [f"{self.angles[k][i]:.6f}" for k in JOINT_KEYS]
                fh.write("\t".join(row) + "\n")


def generate_gait_cycle(
    bank: FieldBank,
    config: GaitModelConfig | None = None,
    cross_fade: bool = False,
) -> JointTrajectorySet:
    """Sample all six joints over one full cycle.

    Each grid point takes the active phase's field. Adjacent fields are not
    C0-matched in general, so the per-boundary jump magnitudes are recorded
    in the returned report. With ``cross_fade`` the two fields are blended
    linearly over +-2 samples around each interior boundary, which bounds the
    jerk if the trajectory is to be executed.
    """
    config = config or GaitModelConfig()
    bank.require_complete()
    schedule = config.schedule
    tc = config.tc
    n = int(math.floor(schedule.x_max / tc)) + 1
    grid = np.arange(n) * tc
    phases = np.array([int(phase_of(float(xi), schedule)) for xi in grid])

    angles: dict[str, np.ndarray] = {}
    for jkey in JOINT_KEYS:
        vals = np.empty(n)
        for i, xi in enumerate(grid):
            vals[i] = eval_vector_field(bank.get(jkey, GaitPhase(phases[i])), xi)
        angles[jkey] = vals

    report = []
    for phase in GaitPhase:
        b = schedule.boundaries[int(phase)]
        nxt = phase.successor
        # the wrap boundary compares the cycle end against the next cycle start
        x_next = 0.0 if nxt == GaitPhase.LR else b
        gaps = {
            jkey: abs(
                eval_vector_field(bank.get(jkey, phase), b)
                - eval_vector_field(bank.get(jkey, nxt), x_next)
            )
            for jkey in JOINT_KEYS
        }
        report.append(BoundaryGap(x=b, from_phase=phase, to_phase=nxt, gaps=gaps))

    if cross_fade:
        half = 2 * tc
        for b in schedule.boundaries[:-1]:
            lo, hi = b - half, b + half
            idx = np.nonzero((grid >= lo) & (grid <= hi))[0]
            if len(idx) == 0:
                continue
            before = phase_of(b, schedule)
            after = before.successor
            for jkey in JOINT_KEYS:
                fa = eval_vector_field(bank.get(jkey, before), grid[idx])
                fb = eval_vector_field(bank.get(jkey, after), grid[idx])
                w = (grid[idx] - lo) / (2.0 * half)
                angles[jkey][idx] = (1.0 - w) * fa + w * fb

    return JointTrajectorySet(
        x=grid, angles=angles, phases=phases, tc=tc, schedule=schedule,
        boundary_report=report,
    )


# ---------------------------------------------------------------------------
# Joint-angle range table
# ---------------------------------------------------------------------------

# Range rows are keyed by the eight-sub-phase names; a seven-phase trajectory
# checks against the matching seven rows.
RANGE_ROW_OF_PHASE = {
    GaitPhase.LR: "loading_response",
    GaitPhase.MST: "mid_stance",
    GaitPhase.TS: "terminal_stance",
    GaitPhase.PS: "pre_swing",
    GaitPhase.IS: "initial_swing",
    GaitPhase.MSW: "mid_swing",
    GaitPhase.TSW: "terminal_swing",
}


class RangeTable:
    """Admissible angle interval per (sub-phase, joint).

    Intervals are stored order-normalized: several source rows print their
    endpoints high-before-low, so the two tabulated values are sorted on
    load. Normalizing twice changes nothing.
    """

    def __init__(self, rows: Mapping[str, Mapping[str, Sequence[float]]]):
        self._rows = {
            row: {
                jkey: (min(float(a), float(b)), max(float(a), float(b)))
                for jkey, (a, b) in joints.items()
            }
            for row, joints in rows.items()
        }

    def rows(self) -> tuple[str, ...]:
        return tuple(self._rows)

    def interval(self, row: str | GaitPhase, joint: JointId | str):
        if isinstance(row, GaitPhase):
            row = RANGE_ROW_OF_PHASE[row]
        jkey = joint.key if isinstance(joint, JointId) else joint
        return self._rows.get(row, {}).get(jkey)

    @classmethod
    def from_json(cls, path) -> "RangeTable":
        with open(path, "r", encoding="utf-8") as fh:
            return cls(json.load(fh))

    @classmethod
    def default(cls) -> "RangeTable":
        return cls.from_json(fixture_path("joint_ranges.json"))


@dataclass(frozen=True)
class RangeViolation:
    phase: GaitPhase
    joint: str
    index: int
    x: float
    angle: float
    lo: float
    hi: float


@dataclass
class ValidationReport:
    violations: list[RangeViolation]
    checked: int

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.ok:
            return f"all {self.checked} checked samples within tabulated ranges"
        worst = max(
            self.violations,
            key=lambda v: max(v.lo - v.angle, v.angle - v.hi),
        )
        return (
            f"{len(self.violations)} of {self.checked} checked samples out of "
            f"range (worst: {worst.joint} {worst.phase.name} x={worst.x:.4f} "
            f"angle={worst.angle:.3f} not in [{worst.lo:.4f}, {worst.hi:.4f}])"
        )


def validate_ranges(
    traj: JointTrajectorySet, ranges: RangeTable | None = None
) -> ValidationReport:
    """Flag every sample outside its phase's tabulated interval.

    Report-only: joints or phases without a tabulated interval are skipped.
    """
    if len(traj) == 0:
        raise ValueError("empty trajectory")
    ranges = ranges or RangeTable.default()
    violations = []
    checked = 0
    for jkey in JOINT_KEYS:
        vals = traj.angles[jkey]
        for i, xi in enumerate(traj.x):
            phase = GaitPhase(int(traj.phases[i]))
            interval = ranges.interval(phase, jkey)
            if interval is None:
                continue
            checked += 1
            lo, hi = interval
            if not (lo <= vals[i] <= hi):
                violations.append(
                    RangeViolation(phase, jkey, i, float(xi), float(vals[i]), lo, hi)
                )
    return ValidationReport(violations=violations, checked=checked)


# ---------------------------------------------------------------------------
# Phase portrait / limit cycle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LimitCycle:
    """Phase portrait of one joint: (angle, angular velocity) pairs."""

    points: np.ndarray  # shape (n, 2)
    closure_gap: float  # distance between first and last portrait points


def limit_cycle(traj: JointTrajectorySet, joint: JointId | str) -> LimitCycle:
    """Angle/velocity portrait of one joint over the cycle.

    Velocities come from central differences (one-sided at the ends) on the
    trajectory grid. The closure gap between the first and last points is
    reported, not asserted: a periodic, stable gait closes its loop.
    """
    angles = traj.joint(joint)
    if len(angles) < 3:
        raise ValueError("need at least 3 samples for a phase portrait")
    velocity = np.gradient(angles, traj.tc)
    points = np.column_stack([angles, velocity])
    gap = float(np.hypot(*(points[0] - points[-1])))
    return LimitCycle(points=points, closure_gap=gap)


# ---------------------------------------------------------------------------
# Field fitting
# ---------------------------------------------------------------------------

def fit_vector_field(
    xs: Sequence[float],
    ys: Sequence[float],
    degree: int,
    valid_interval: tuple[float, float] | None = None,
) -> tuple[PolynomialVectorField, float]:
    """Ordinary least-squares polynomial fit of captured (x, angle) samples.

    Solves the normal equations after scaling each Vandermonde column to
    unit norm, which keeps the system well conditioned on the narrow phase
    intervals. Returns the fitted field (error offset zero) and the residual
    RMS.
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if not 2 <= degree <= 4:
        raise ValueError("degree must be between 2 and 4")
    if len(x) < degree + 1:
        raise ValueError(f"need at least {degree + 1} samples for degree {degree}")
    if np.all(x == x[0]):
        raise SingularFitError("all sample abscissae identical")

    vander = np.vander(x, degree + 1)  # highest degree first
    scale = np.sqrt((vander * vander).sum(axis=0))
    scale[scale == 0.0] = 1.0
    v_scaled = vander / scale
    gram = v_scaled.T @ v_scaled
    if np.linalg.matrix_rank(gram) < degree + 1:
        raise SingularFitError("normal system is rank deficient")
    coeffs = np.linalg.solve(gram, v_scaled.T @ y) / scale

    if valid_interval is None:
        lo = max(0.0, float(x.min()))
        hi = min(CYCLE_LENGTH, float(x.max()))
        valid_interval = (lo, hi) if hi > lo else (0.0, CYCLE_LENGTH)
    vf = PolynomialVectorField(
        coefficients=tuple(coeffs), error_offset=0.0, valid_interval=valid_interval
    )
    residual = y - eval_vector_field(vf, x)
    return vf, float(np.sqrt(np.mean(residual * residual)))


def overfit_band(xs: Sequence[float], ys: Sequence[float]) -> np.ndarray:
    """Per-sample width of the band between a quartic and a quadratic fit.

    The spread between the two fits brackets where the joint angle may vary;
    it collapses to zero when the data is genuinely quadratic.
    """
    x = np.asarray(xs, dtype=float)
    if len(x) < 5:
        raise ValueError("need at least 5 samples")
    f4, _ = fit_vector_field(x, ys, degree=4)
    f2, _ = fit_vector_field(x, ys, degree=2)
    return np.abs(eval_vector_field(f4, x) - eval_vector_field(f2, x))
