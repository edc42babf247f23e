"""Batch command-line front end.

One verb per capability; every verb is deterministic given its inputs and
seed, so re-runs are byte-identical. Numeric output uses six decimal
places. Missing or malformed input files exit with status 2 and a
line-numbered message where one applies.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import capture, features, gait_ca, gait_model, learn, push_fuzzy, rocking_block
from .fixtures import fixture_path


class InputError(Exception):
    """Bad or missing input: reported on stderr, exit code 2."""


def _round6(obj):
    if isinstance(obj, float):
        return round(obj, 6)
    if isinstance(obj, dict):
        return {k: _round6(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round6(v) for v in obj]
    return obj


def _write_json(path, doc) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_round6(doc), fh, indent=1, sort_keys=True)
        fh.write("\n")


def _load_bank(path: str | None) -> gait_model.FieldBank:
    if path is None:
        return gait_model.FieldBank.default()
    if not Path(path).exists():
        raise InputError(f"model bank not found: {path}")
    try:
        return gait_model.FieldBank.from_json(path)
    except (ValueError, KeyError) as exc:
        raise InputError(f"{path}: malformed model bank: {exc}") from exc


# ---------------------------------------------------------------------------
# Verbs
# ---------------------------------------------------------------------------

def cmd_gen_gait(args) -> int:
    bank = _load_bank(args.model_bank)
    config = gait_model.GaitModelConfig(
        tc=args.tc, schedule=gait_model.PhaseSchedule.preset(args.schedule)
    )
    traj = gait_model.generate_gait_cycle(bank, config, cross_fade=args.cross_fade)
    traj.write_tsv(args.out)
    report = {
        "boundaries": [
            {
                "x": gap.x,
                "from": gap.from_phase.name,
                "to": gap.to_phase.name,
                "gaps": dict(gap.gaps),
            }
            for gap in traj.boundary_report
        ]
    }
    _write_json(str(args.out) + ".report.json", report)
    validation = gait_model.validate_ranges(traj)
    print(f"wrote {len(traj)} samples to {args.out}")
    print("range check:", validation.summary())
    return 0


def cmd_simulate_block(args) -> int:
    params = rocking_block.BlockParams(
        alpha=args.alpha, r=args.r, dt=args.dt, restoring_sign=args.restoring,
    )
    init = rocking_block.BlockState(
        mode=rocking_block.Mode(args.mode), x1=args.x1, x2=args.x2,
    )
    trace = rocking_block.simulate(init, params, args.t_end)
    trace.write_csv(args.out)
    print(f"{len(trace.states)} states, {len(trace.impacts)} impacts, "
          f"status {trace.status}; wrote {args.out}")
    return 0


def cmd_ca_predict(args) -> int:
    try:
        init = gait_ca.CAState.from_bits(args.init)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    seq = gait_ca.predict_sequence(init, args.n)
    line = " ".join(s.bits for s in seq)
    print(line)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(line + "\n")
    return 0


def cmd_ingest(args) -> int:
    try:
        series = capture.load_accelerometer_csv(args.infile)
    except FileNotFoundError:
        raise InputError(f"input not found: {args.infile}") from None
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    xs, ys = series["x"], series["y"]
    if args.zero_correct:
        xs, ys = capture.zero_correct(xs), capture.zero_correct(ys)
    if args.smooth == "moving-average":
        xs, ys = capture.smooth_moving_average(xs), capture.smooth_moving_average(ys)
    elif args.smooth == "spline":
        xs = capture.smooth_cubic_spline(xs, knot_stride=args.knot_stride)
        ys = capture.smooth_cubic_spline(ys, knot_stride=args.knot_stride)
    geom = capture.TwoLinkGeometry(l1=args.l1, l2=args.l2)
    if args.ik == "alg1":
        try:
            t1, t2 = capture.ik_alg1_batch(xs, ys, geom)
        except ValueError as exc:
            raise InputError(f"{args.infile}: {exc}") from exc
        theta1, theta2 = t1.values, t2.values
    else:
        pairs = []
        for i, (x, y) in enumerate(zip(xs.values, ys.values)):
            try:
                pairs.append(
                    capture.ik_two_link(float(x), float(y), geom, elbow=args.elbow)
                )
            except capture.UnreachableError as exc:
                raise InputError(f"{args.infile}: line {i + 2}: {exc}") from exc
        theta1 = np.array([p[0] for p in pairs])
        theta2 = np.array([p[1] for p in pairs])
    t = xs.times
    capture.write_joint_angle_csv(
        args.out, t, np.degrees(theta1), np.degrees(theta2)
    )
    print(f"wrote {len(t)} joint-angle rows to {args.out}")
    return 0


def cmd_features(args) -> int:
    try:
        t, th1, th2 = capture.load_joint_angle_csv(args.infile)
    except FileNotFoundError:
        raise InputError(f"input not found: {args.infile}") from None
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rows = []
    for joint, series in (("theta1", th1), ("theta2", th2)):
        try:
            imfs, _ = features.emd_decompose(series, max_imfs=args.max_imfs)
        except ValueError as exc:
            raise InputError(f"{args.infile}: {exc}") from exc
        for imf in imfs:
            fv = features.feature_vector(imf.values, bins=args.bins)
            rows.append((args.subject, joint, imf.index, fv, args.label))
    features.write_feature_matrix_csv(args.out, rows)
    print(f"wrote {len(rows)} feature rows to {args.out}")
    return 0


def _metrics_report(cm, per_class, error, class_names) -> dict:
    bio = learn.biometric_metrics(cm)
    return {
        "class_names": list(class_names),
        "confusion": cm.counts.tolist(),
        "per_class_acc": [float(a) for a in per_class],
        "overall_error": error,
        "tar": bio.tar, "far": bio.far, "frr": bio.frr,
        "per_class_tar": [float(v) for v in bio.per_class_tar],
        "per_class_far": [float(v) for v in bio.per_class_far],
        "per_class_frr": [float(v) for v in bio.per_class_frr],
    }


def _load_dataset(path) -> learn.Dataset:
    if not Path(path).exists():
        raise InputError(f"dataset not found: {path}")
    try:
        return learn.Dataset.from_csv(path)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _parse_layers(text: str | None):
    if not text:
        return None
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise InputError(f"bad --layers value {text!r}") from None


def _make_trainer(args):
    if args.method == "knn":
        return learn.knn_trainer(args.k)
    return learn.mlp_trainer(
        _parse_layers(args.layers), eta=args.eta, epochs=args.epochs, seed=args.seed
    )


def cmd_classify(args) -> int:
    train = _load_dataset(args.train)
    test = _load_dataset(args.test)
    if train.class_names != test.class_names:
        # align test labels onto the training class order
        mapping = {name: i for i, name in enumerate(train.class_names)}
        try:
            relabeled = np.array([mapping[test.class_names[l]] for l in test.labels])
        except KeyError as exc:
            raise InputError(f"test set has unknown class {exc}") from exc
        test = learn.Dataset(test.features, relabeled, train.class_names)
    predict = _make_trainer(args)(train)
    preds = predict(test.features)
    cm, per_class, error = learn.confusion_and_accuracy(
        preds, test.labels, train.n_classes
    )
    report = _metrics_report(cm, per_class, error, train.class_names)
    _write_json(args.out, report)
    print(f"overall error {error:.6f}; wrote {args.out}")
    return 0


def cmd_cv(args) -> int:
    data = _load_dataset(args.data) if args.data else learn.Dataset.from_csv(
        fixture_path("synthetic_gait_features.csv")
    )
    try:
        result = learn.kfold_cv(data, _make_trainer(args), folds=args.folds, seed=args.seed)
    except learn.StratificationError as exc:
        raise InputError(str(exc)) from exc
    report = {
        "folds": args.folds,
        "method": args.method,
        "fold_accuracies": result.fold_accuracies,
        "mean": result.mean,
        "variance": result.variance,
        "sigma": result.sigma,
    }
    if args.baseline:
        base_args = argparse.Namespace(**vars(args))
        base_args.method = args.baseline
        baseline = learn.kfold_cv(data, _make_trainer(base_args),
                                  folds=args.folds, seed=args.seed)
        anova = learn.anova_single_factor(
            [result.fold_accuracies, baseline.fold_accuracies]
        )
        report["baseline"] = {
            "method": args.baseline,
            "fold_accuracies": baseline.fold_accuracies,
            "mean": baseline.mean,
            "variance": baseline.variance,
            "sigma": baseline.sigma,
        }
        report["anova"] = anova.as_dict()
    if args.out:
        _write_json(args.out, report)
    accs = " ".join(f"{a:.6f}" for a in result.fold_accuracies)
    print(f"fold accuracies: {accs}")
    print(f"mean {result.mean:.6f} sigma {result.sigma:.6f}")
    return 0


def cmd_push(args) -> int:
    push = push_fuzzy.ForceInput(
        magnitude=args.force, direction=push_fuzzy.Direction(args.dir)
    )
    try:
        response = push_fuzzy.recover(push)
    except push_fuzzy.RecoveryImpossible as exc:
        doc = {"recovery_impossible": True, "reason": str(exc)}
        print(json.dumps(_round6(doc), indent=1, sort_keys=True))
        if args.out:
            _write_json(args.out, doc)
        return 0
    doc = response.as_dict()
    print(json.dumps(_round6(doc), indent=1, sort_keys=True))
    if args.out:
        _write_json(args.out, doc)
    return 0


def cmd_plot_data(args) -> int:
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    bank = _load_bank(args.model_bank)
    config = gait_model.GaitModelConfig(
        tc=args.tc, schedule=gait_model.PhaseSchedule.preset(args.schedule)
    )
    traj = gait_model.generate_gait_cycle(bank, config)

    # phase portraits, one file per joint
    for jkey in gait_model.JOINT_KEYS:
        cycle = gait_model.limit_cycle(traj, jkey)
        with open(outdir / f"limit_cycle_{jkey}.csv", "w", encoding="utf-8") as fh:
            fh.write("angle,velocity\n")
            for angle, velocity in cycle.points:
                fh.write(f"{angle:.6f},{velocity:.6f}\n")

    # stick-figure frames from hip/knee angles via forward kinematics
    geom = capture.TwoLinkGeometry(l1=config.l1, l2=config.l2)
    for side in ("left", "right"):
        hips = np.radians(traj.angles[f"{side}_hip"])
        knees = np.radians(traj.angles[f"{side}_knee"])
        with open(outdir / f"stick_{side}.csv", "w", encoding="utf-8") as fh:
            fh.write("x,y\n")
            for i in range(0, len(traj), args.frame_stride):
                # hang the leg from the hip: 0 degrees points straight down
                t1 = hips[i] - np.pi / 2.0
                elbow, tip = capture.fk_two_link(float(t1), float(knees[i]), geom)
                fh.write("0.000000,0.000000\n")
                fh.write(f"{elbow[0]:.6f},{elbow[1]:.6f}\n")
                fh.write(f"{tip[0]:.6f},{tip[1]:.6f}\n")

    # box-plot statistics of each trajectory IMF
    with open(outdir / "box_stats.csv", "w", encoding="utf-8") as fh:
        fh.write("imf_index,value\n")
        imfs, _ = features.emd_decompose(traj.angles["left_hip"])
        for imf in imfs:
            stats = features.quartile_stats(imf.values)
            for value in (stats.q1 - 1.5 * stats.iqr, stats.q1, stats.q2,
                          stats.q3, stats.q3 + 1.5 * stats.iqr):
                fh.write(f"{imf.index},{value:.6f}\n")
    print(f"wrote plot data to {outdir}")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaitforge",
        description="Batch gait modeling, simulation, classification, and push recovery.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-gait", help="generate a full six-joint gait cycle")
    p.add_argument("--model-bank", help="bank JSON (default: bundled tables)")
    p.add_argument("--schedule", choices=("guard", "percent"), default="guard")
    p.add_argument("--tc", type=float, default=gait_model.DEFAULT_TC)
    p.add_argument("--cross-fade", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_gait)

    p = sub.add_parser("simulate-block", help="rocking-block simulation with impacts")
    p.add_argument("--alpha", type=float, default=0.3)
    p.add_argument("--r", type=float, default=0.9)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--x1", type=float, default=-0.5)
    p.add_argument("--x2", type=float, default=0.0)
    p.add_argument("--mode", choices=("left", "right"), default="left")
    p.add_argument("--t-end", type=float, default=10.0)
    p.add_argument("--restoring", action="store_true",
                   help="flip the right-mode acceleration sign")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate_block)

    p = sub.add_parser("ca-predict", help="iterate the gait-state rule table")
    p.add_argument("--init", required=True, metavar="BITS")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ca_predict)

    p = sub.add_parser("ingest", help="accelerometer CSV to joint angles")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--l1", type=float, default=5.0)
    p.add_argument("--l2", type=float, default=4.0)
    p.add_argument("--ik", choices=("alg1", "exact"), default="alg1")
    p.add_argument("--elbow", choices=("down", "up"), default="down",
                   help="knee-bend branch for --ik exact")
    p.add_argument("--smooth", choices=("none", "moving-average", "spline"),
                   default="none")
    p.add_argument("--knot-stride", type=int, default=5,
                   help="spline smoother keeps every Nth sample as a knot")
    p.add_argument("--zero-correct", action="store_true")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("features", help="EMD features from a joint-angle CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--label", default="unlabeled")
    p.add_argument("--subject", default="s1")
    p.add_argument("--max-imfs", type=int, default=6)
    p.add_argument("--bins", type=int, default=16)
    p.set_defaults(func=cmd_features)

    def add_trainer_args(p):
        p.add_argument("--method", choices=("knn", "mlp"), default="knn")
        p.add_argument("--k", type=int, default=3)
        p.add_argument("--layers", help="comma-separated MLP layer sizes")
        p.add_argument("--eta", type=float, default=0.5)
        p.add_argument("--epochs", type=int, default=200)
        p.add_argument("--seed", type=int, default=42)

    p = sub.add_parser("classify", help="train on one CSV, score another")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--out", required=True)
    add_trainer_args(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("cv", help="stratified k-fold cross-validation")
    p.add_argument("--data", help="dataset CSV (default: bundled synthetic set)")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--baseline", choices=("knn", "mlp"),
                   help="also run this method and ANOVA the two fold sets")
    p.add_argument("--out")
    add_trainer_args(p)
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("push", help="push-recovery verdict as JSON")
    p.add_argument("--force", type=float, required=True)
    p.add_argument("--dir", choices=[d.value for d in push_fuzzy.Direction],
                   required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_push)

    p = sub.add_parser("plot-data", help="two-column CSVs for the standard figures")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--model-bank")
    p.add_argument("--schedule", choices=("guard", "percent"), default="guard")
    p.add_argument("--tc", type=float, default=gait_model.DEFAULT_TC)
    p.add_argument("--frame-stride", type=int, default=8)
    p.set_defaults(func=cmd_plot_data)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
