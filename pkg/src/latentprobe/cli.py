"""Command-line surface: plan construction, toy rendering, SVM, PCA, rings.

Stages communicate only through files (plan JSON, FVEC, model/report JSON), so
any stage can be swapped for an external process speaking the same formats.
Exit codes: 0 success, 1 domain error (single "error: ..." line on stderr),
2 usage error. Set LATENTPROBE_LOG to quiet/info/debug to tune stderr logging.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import dataset_io, interp, pca, rings, svm, toygen
from .errors import LatentProbeError, ParseError
from .features import SOURCE_PIXELS, FeatureMatrix, labeled_set

logger = logging.getLogger("latentprobe")

_LOG_LEVELS = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def _configure_logging():
    level = _LOG_LEVELS.get(os.environ.get("LATENTPROBE_LOG", "info"), logging.INFO)
    root = logging.getLogger("latentprobe")
    root.setLevel(level)
    if not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
        root.addHandler(handler)


def _steps(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"steps must be an integer, got {text!r}")
    if value < 2:
        raise argparse.ArgumentTypeError(f"steps must be at least 2, got {value}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _load_latent_file(path) -> interp.LatentCode:
    doc = dataset_io._load_json(path)
    if isinstance(doc, dict):
        if "latent" not in doc:
            raise ParseError(f"{path}: latent file object must carry a 'latent' array")
        doc = doc["latent"]
    if not isinstance(doc, list):
        raise ParseError(f"{path}: latent file must hold a JSON array of numbers")
    return interp.as_latent(np.asarray(doc, dtype=np.float64))


def _load_conditioning_file(path) -> interp.ConditioningPair:
    doc = dataset_io._load_json(path)
    if not isinstance(doc, dict) or "words" not in doc or "sentence" not in doc:
        raise ParseError(f"{path}: conditioning file must carry 'words' and 'sentence'")
    return interp.ConditioningPair(
        np.asarray(doc["words"], dtype=np.float64),
        np.asarray(doc["sentence"], dtype=np.float64),
    )


# --- plan ---------------------------------------------------------------------

def _pick_plan_mode(parser, args, n_corners):
    latent_flags = [getattr(args, f"z{i}") for i in range(n_corners)]
    ling_flags = [args.z] + [getattr(args, f"c{i}") for i in range(n_corners)]
    if all(v is not None for v in latent_flags) and all(v is None for v in ling_flags):
        return "latent"
    if all(v is not None for v in ling_flags) and all(v is None for v in latent_flags):
        return "linguistic"
    corner_names = "/".join(f"--z{i}" for i in range(n_corners))
    ling_names = "--z plus " + "/".join(f"--c{i}" for i in range(n_corners))
    parser.error(f"give either {corner_names} (latent) or {ling_names} (linguistic)")


def cmd_plan(parser, args) -> int:
    n_corners = 2 if args.shape == "lerp" else 3
    mode = _pick_plan_mode(parser, args, n_corners)
    if mode == "latent":
        corners = [_load_latent_file(getattr(args, f"z{i}")) for i in range(n_corners)]
        if args.shape == "lerp":
            plan = interp.lerp_latent(corners[0], corners[1], args.steps)
        else:
            plan = interp.tri_latent(corners[0], corners[1], corners[2], args.steps)
        degenerate = all(c == corners[0] for c in corners[1:])
    else:
        z = _load_latent_file(args.z)
        corners = [_load_conditioning_file(getattr(args, f"c{i}")) for i in range(n_corners)]
        if args.shape == "lerp":
            plan = interp.lerp_linguistic(z, corners[0], corners[1], args.steps)
        else:
            plan = interp.tri_linguistic(z, corners[0], corners[1], corners[2], args.steps)
        degenerate = all(c == corners[0] for c in corners[1:])
    if degenerate:
        logger.warning("degenerate corners: all %d corners are identical, plan is constant", n_corners)
    dataset_io.write_plan(plan, args.out)
    print(f"{plan.kind}, steps={plan.steps}, {len(plan.points)} points")
    return 0


# --- toygen ---------------------------------------------------------------------

def cmd_toygen(args) -> int:
    plan = dataset_io.read_plan(args.plan)
    params = toygen.ToyGenParams(
        seed=args.seed, height=args.height, width=args.width, projection_scale=args.scale
    )
    frames = toygen.render_plan(plan, params)
    ids = tuple(f"point-{i:05d}" for i in range(len(plan.points)))
    written = dataset_io.write_fvec(FeatureMatrix(ids, frames, SOURCE_PIXELS), args.out)
    delta = toygen.max_consecutive_delta(frames)
    print(f"rendered {frames.shape[0]} frames ({params.height}x{params.width}x3), {written} bytes")
    print(f"max consecutive frame delta: {delta:.17g}")
    return 0


# --- svm ---------------------------------------------------------------------

def _load_labeled(features_path, labels_path):
    features = dataset_io.read_fvec(features_path)
    labels = dataset_io.read_labels(labels_path)
    return labeled_set(features, labels)


def _svm_config(args) -> svm.SvmConfig:
    return svm.SvmConfig(
        kernel=args.kernel,
        c=args.c,
        tolerance=args.tolerance,
        max_iterations=args.max_iterations,
        seed=args.seed,
        normalize=not args.no_normalize,
        gamma=args.gamma,
    )


def cmd_svm_train(args) -> int:
    train = _load_labeled(args.features, args.labels)
    model = svm.train_svm(train, _svm_config(args))
    dataset_io._dump_json(svm.model_to_dict(model), args.out)
    print(f"final objective: {model.train_meta['final_objective']:.10g}")
    print(
        f"trained {model.kernel} svm on {len(train)} samples "
        f"in {model.train_meta['iterations']} iterations"
    )
    return 0


def cmd_svm_eval(args) -> int:
    model = svm.model_from_dict(dataset_io._load_json(args.model, error_cls=dataset_io.FormatError))
    test = _load_labeled(args.features, args.labels)
    report = svm.evaluate(model, test)
    if args.out:
        dataset_io._dump_json(svm.report_to_dict(report), args.out)
    print(f"accuracy: {report.accuracy:.4f}")
    return 0


def cmd_svm_rank(args) -> int:
    model = svm.model_from_dict(dataset_io._load_json(args.model, error_cls=dataset_io.FormatError))
    features = dataset_io.read_fvec(args.features)
    if args.labels:
        samples = labeled_set(features, dataset_io.read_labels(args.labels))
    else:
        samples = features
    ranked = svm.rank_by_margin(model, samples)
    doc = {
        "distance_kind": model.distance_kind,
        "samples": [
            {
                "id": r.id,
                "label": r.label.value if r.label is not None else None,
                "distance": r.distance,
            }
            for r in ranked
        ],
    }
    dataset_io._dump_json(doc, args.out)
    print(f"ranked {len(ranked)} samples ({model.distance_kind})")
    return 0


# --- pca ---------------------------------------------------------------------

def cmd_pca_fit(args) -> int:
    features = dataset_io.read_fvec(args.features)
    model = pca.fit_pca(features, args.k)
    dataset_io._dump_json(pca.pca_to_dict(model), args.out)
    print(f"fitted {model.k} components over dim {model.feature_dim}")
    return 0


def cmd_pca_transform(args) -> int:
    model = pca.pca_from_dict(dataset_io._load_json(args.model, error_cls=dataset_io.FormatError))
    features = dataset_io.read_fvec(args.features)
    projected = pca.pca_transform_matrix(model, features)
    dataset_io.write_fvec(projected, args.out)
    print(f"projected {len(projected)} rows to dim {projected.dim}")
    return 0


# --- rings ---------------------------------------------------------------------

def cmd_rings(args) -> int:
    config = rings.RingsConfig(
        seed=args.seed,
        n_train=args.n_train,
        n_test=args.n_test,
        radii=tuple(args.radii),
        noise=args.noise,
    )
    data = rings.rings_oracle(config)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, block in (
        ("raw-train", data.raw_train),
        ("raw-test", data.raw_test),
        ("lifted-train", data.lifted_train),
        ("lifted-test", data.lifted_test),
    ):
        dataset_io.write_fvec(block, out_dir / f"{name}.fvec")
    dataset_io.write_labels(dataset_io.labels_of(data.raw_train), out_dir / "train-labels.json")
    dataset_io.write_labels(dataset_io.labels_of(data.raw_test), out_dir / "test-labels.json")
    print(f"wrote 4 feature files and 2 label maps to {out_dir}")
    if args.evaluate:
        raw_model = svm.train_svm(data.raw_train)
        lifted_model = svm.train_svm(data.lifted_train)
        raw_acc = svm.evaluate(raw_model, data.raw_test).accuracy
        lifted_acc = svm.evaluate(lifted_model, data.lifted_test).accuracy
        dataset_io._dump_json(
            {
                "raw_accuracy": raw_acc,
                "lifted_accuracy": lifted_acc,
                "gap": lifted_acc - raw_acc,
            },
            out_dir / "comparison.json",
        )
        print(f"raw accuracy: {raw_acc:.4f}")
        print(f"lifted accuracy: {lifted_acc:.4f}")
    return 0


# --- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latentprobe",
        description="Interpolation plans and Good/Bad latent-code gating.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    plan = sub.add_parser("plan", help="build an interpolation plan file")
    plan.add_argument("shape", choices=["lerp", "tri"], help="pairwise or triangular")
    plan.add_argument("--z0", help="first latent corner (JSON)")
    plan.add_argument("--z1", help="second latent corner (JSON)")
    plan.add_argument("--z2", help="third latent corner (JSON, tri only)")
    plan.add_argument("--z", help="fixed latent code for linguistic plans (JSON)")
    plan.add_argument("--c0", help="first conditioning corner (JSON)")
    plan.add_argument("--c1", help="second conditioning corner (JSON)")
    plan.add_argument("--c2", help="third conditioning corner (JSON, tri only)")
    plan.add_argument("--steps", type=_steps, default=10)
    plan.add_argument("-o", "--out", required=True, help="plan JSON output path")

    toy = sub.add_parser("toygen", help="render a plan with the deterministic toy generator")
    toy.add_argument("--plan", required=True)
    toy.add_argument("--seed", type=int, default=0)
    toy.add_argument("--height", type=_positive_int, default=16)
    toy.add_argument("--width", type=_positive_int, default=16)
    toy.add_argument("--scale", type=float, default=0.1)
    toy.add_argument("-o", "--out", required=True, help="FVEC output path")

    svm_parser = sub.add_parser("svm", help="train, evaluate, or rank with an SVM")
    svm_sub = svm_parser.add_subparsers(dest="action", required=True)

    train = svm_sub.add_parser("train")
    train.add_argument("--features", required=True, help="training FVEC")
    train.add_argument("--labels", required=True, help="id -> good/bad JSON map")
    train.add_argument("--kernel", choices=[svm.KERNEL_LINEAR, svm.KERNEL_RBF], default=svm.KERNEL_LINEAR)
    train.add_argument("--c", type=float, default=1.0)
    train.add_argument("--tolerance", type=float, default=1e-6)
    train.add_argument("--max-iterations", type=_positive_int, default=10000)
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--gamma", type=float, default=None, help="RBF width (default 1/dim)")
    train.add_argument("--no-normalize", action="store_true", help="skip per-vector L2 normalization")
    train.add_argument("-o", "--out", required=True, help="model JSON output path")

    evaluate = svm_sub.add_parser("eval")
    evaluate.add_argument("--model", required=True)
    evaluate.add_argument("--features", required=True)
    evaluate.add_argument("--labels", required=True)
    evaluate.add_argument("-o", "--out", help="optional report JSON output path")

    rank = svm_sub.add_parser("rank")
    rank.add_argument("--model", required=True)
    rank.add_argument("--features", required=True)
    rank.add_argument("--labels", help="optional id -> good/bad JSON map")
    rank.add_argument("-o", "--out", required=True, help="ranked JSON output path")

    pca_parser = sub.add_parser("pca", help="fit or apply a PCA projection")
    pca_sub = pca_parser.add_subparsers(dest="action", required=True)

    fit = pca_sub.add_parser("fit")
    fit.add_argument("--features", required=True)
    fit.add_argument("--k", type=_positive_int, default=128)
    fit.add_argument("-o", "--out", required=True, help="PCA model JSON output path")

    transform = pca_sub.add_parser("transform")
    transform.add_argument("--model", required=True)
    transform.add_argument("--features", required=True)
    transform.add_argument("-o", "--out", required=True, help="projected FVEC output path")

    rings_parser = sub.add_parser("rings", help="generate the synthetic rings benchmark")
    rings_parser.add_argument("--seed", type=int, default=7)
    rings_parser.add_argument("--n-train", type=_positive_int, default=300)
    rings_parser.add_argument("--n-test", type=_positive_int, default=120)
    rings_parser.add_argument("--radii", type=float, nargs=2, default=[1.0, 2.0])
    rings_parser.add_argument("--noise", type=float, default=0.1)
    rings_parser.add_argument("--evaluate", action="store_true", help="train SVMs on both spaces")
    rings_parser.add_argument("--out-dir", required=True)

    return parser


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "plan":
            return cmd_plan(parser, args)
        if args.command == "toygen":
            return cmd_toygen(args)
        if args.command == "svm":
            return {"train": cmd_svm_train, "eval": cmd_svm_eval, "rank": cmd_svm_rank}[args.action](args)
        if args.command == "pca":
            return {"fit": cmd_pca_fit, "transform": cmd_pca_transform}[args.action](args)
        if args.command == "rings":
            return cmd_rings(args)
    except (LatentProbeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
