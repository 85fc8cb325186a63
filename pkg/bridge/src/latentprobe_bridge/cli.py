"""Bridge CLI: generate images from plans, extract deep features, export pixels.

All outputs are the toolkit's wire formats (image files + manifest JSON,
FVEC), so the main pipeline can consume them without importing any ML
framework. Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import BridgeError
from .features import LAYER_CUTOFFS, extract_features
from .generate import generate
from .pixels import export_pixels
from .wire import write_fvec

logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s", stream=sys.stderr)


def cmd_generate(args) -> int:
    manifest = generate(
        args.plan,
        args.weights,
        args.out,
        text_path=args.text,
        batch_size=args.batch_size,
        device=args.device,
    )
    print(f"{manifest['kind']}: wrote {manifest['count']} images to {args.out}")
    if "center_index" in manifest:
        print(f"center index: {manifest['center_index']}")
    return 0


def cmd_extract(args) -> int:
    ids, matrix, tag = extract_features(
        args.images,
        layer=args.layer,
        pooling=args.pool,
        weights_path=args.vgg_weights,
        batch_size=args.batch_size,
        device=args.device,
        strict=args.strict,
    )
    written = write_fvec(ids, matrix, tag, args.out)
    print(f"extracted {len(ids)} x {matrix.shape[1]} features ({tag}), {written} bytes")
    return 0


def cmd_pixels(args) -> int:
    ids, matrix, tag = export_pixels(args.images, size=args.size, strict=args.strict)
    written = write_fvec(ids, matrix, tag, args.out)
    print(f"exported {len(ids)} x {matrix.shape[1]} pixel rows, {written} bytes")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latentprobe-bridge",
        description="Execute interpolation plans against a real generator and CNN.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="render a plan file to images")
    gen.add_argument("--plan", required=True, help="plan JSON produced by the toolkit")
    gen.add_argument("--weights", required=True, help="TorchScript generator archive")
    gen.add_argument("--text", help="text metadata JSON for latent-only plans")
    gen.add_argument("--batch-size", type=int, default=16)
    gen.add_argument("--device", default="cpu")
    gen.add_argument("-o", "--out", required=True, help="output image directory")

    extract = sub.add_parser("extract", help="extract deep features to FVEC")
    extract.add_argument("--images", required=True, help="image directory or manifest.json")
    extract.add_argument("--layer", choices=sorted(LAYER_CUTOFFS), default="conv5_1")
    extract.add_argument("--pool", default="gap", help="gap (512-d) or flatten")
    extract.add_argument("--vgg-weights", help="local VGG-16 state dict (else torchvision download)")
    extract.add_argument("--batch-size", type=int, default=16)
    extract.add_argument("--device", default="cpu")
    extract.add_argument("--strict", action="store_true",
                         help="fail on undecodable images instead of skipping")
    extract.add_argument("-o", "--out", required=True, help="FVEC output path")

    pix = sub.add_parser("pixels", help="export flattened RGB rows to FVEC")
    pix.add_argument("--images", required=True, help="image directory or manifest.json")
    pix.add_argument("--size", type=int, default=64)
    pix.add_argument("--strict", action="store_true")
    pix.add_argument("-o", "--out", required=True, help="FVEC output path")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"generate": cmd_generate, "extract": cmd_extract, "pixels": cmd_pixels}
    try:
        return handlers[args.command](args)
    except (BridgeError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
