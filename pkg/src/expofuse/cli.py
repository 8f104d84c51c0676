"""Command-line interface.

Subcommands: ``fuse`` runs the full pipeline on a stack of image files,
``metrics`` scores images, ``synth`` renders bracketed stacks of the
built-in scenes, ``wellexp`` writes the pixelwise-max well-exposedness
map, and ``verify`` checks the exposure-doubling relation of a stack
written with an EV sidecar.

Settings resolve as flags > config file (``key=value`` lines) > defaults;
the defaults are the published constants (sigma_spatial 16, sigma_range
3/255, middle gray 0.18).  Exit codes: 0 success, 1 usage error, 2
processing error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .filters import BilateralParams
from .fuse import FusionConfig
from .image import ExposureStack
from .io import read_ev_sidecar, read_image, write_image
from .metrics import (
    discrete_entropy,
    max_well_exposedness,
    statistical_naturalness,
    well_exposedness_map,
)
from .pipeline import PipelineParams, run
from .synth import CrfModel, builtin_fields, make_stack, write_stack

DEFAULTS = {
    "weights": "simple",
    "blend": "naive",
    "levels": "auto",
    "adjust": True,
    "sigma-spatial": 16.0,
    "sigma-range": 3.0 / 255.0,
    "epsilon": 1e-6,
    "target-gray": 0.18,
    "assume-srgb": False,
    "exact-bilateral": False,
    "threads": None,
    "gamut": "clip",
}

_BOOL_KEYS = {"adjust", "assume-srgb", "exact-bilateral"}


class _Parser(argparse.ArgumentParser):
    """argparse with the documented usage-error exit code (1, not 2)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_config_file(path: str) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, raw = (part.strip() for part in line.split("=", 1))
            if key not in DEFAULTS:
                raise ValueError(f"{path}:{lineno}: unknown setting {key!r}")
            if key in _BOOL_KEYS:
                if raw.lower() in ("1", "true", "yes", "on"):
                    values[key] = True
                elif raw.lower() in ("0", "false", "no", "off"):
                    values[key] = False
                else:
                    raise ValueError(f"{path}:{lineno}: bad boolean {raw!r}")
            elif key in ("weights", "blend", "levels", "gamut"):
                values[key] = raw
            elif key == "threads":
                values[key] = int(raw)
            else:
                values[key] = float(raw)
    return values


def _resolve(args, config: dict, key: str):
    """Flag value if given, else config file, else default."""
    attr = key.replace("-", "_")
    value = getattr(args, attr, None)
    if value is not None:
        return value
    if key in config:
        return config[key]
    return DEFAULTS[key]


def _set_threads(n) -> None:
    if n is None:
        return
    import numba

    numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))


def _read_stack(paths, assume_srgb: bool) -> ExposureStack:
    images = [read_image(p, assume_srgb=assume_srgb) for p in paths]
    return ExposureStack.from_images(images)


def _parse_levels(raw) -> int | None:
    if raw is None or raw == "auto":
        return None
    return int(raw)


def _add_common_fuse_flags(sub) -> None:
    sub.add_argument("--weights", choices=["simple", "mertens"])
    sub.add_argument("--blend", choices=["naive", "pyramid"])
    sub.add_argument("--levels", help="pyramid levels (integer or 'auto')")
    sub.add_argument("--no-adjust", dest="adjust", action="store_false", default=None)
    sub.add_argument("--sigma-spatial", type=float)
    sub.add_argument("--sigma-range", type=float)
    sub.add_argument("--epsilon", type=float)
    sub.add_argument("--target-gray", type=float)
    sub.add_argument("--exact-bilateral", action="store_true", default=None)
    sub.add_argument("--gamut", choices=["clip", "warn"])
    sub.add_argument("--threads", type=int)
    sub.add_argument("--config", help="key=value settings file")


def _add_srgb_flags(sub) -> None:
    group = sub.add_mutually_exclusive_group()
    group.add_argument(
        "--assume-srgb", dest="assume_srgb", action="store_true", default=None
    )
    group.add_argument("--linear", dest="assume_srgb", action="store_false")


def build_parser() -> _Parser:
    parser = _Parser(prog="expofuse")
    subs = parser.add_subparsers(dest="command", required=True)

    p_fuse = subs.add_parser("fuse", help="fuse an exposure stack")
    p_fuse.add_argument("inputs", nargs="+", help="stack image files")
    p_fuse.add_argument("--out", required=True, help="fused output image")
    _add_common_fuse_flags(p_fuse)
    _add_srgb_flags(p_fuse)
    p_fuse.add_argument("--dump-intermediates", metavar="DIR")
    p_fuse.add_argument("--report", metavar="PATH", help="write metrics JSON")

    p_metrics = subs.add_parser("metrics", help="score images")
    p_metrics.add_argument("inputs", nargs="+")
    p_metrics.add_argument("--csv", action="store_true")
    p_metrics.add_argument("--out", help="write output to file instead of stdout")
    _add_srgb_flags(p_metrics)

    p_synth = subs.add_parser("synth", help="render a synthetic exposure stack")
    p_synth.add_argument("scene", choices=sorted(builtin_fields((8, 8)).keys()))
    p_synth.add_argument("--evs", default="-1,0,1", help="comma-separated EV list")
    p_synth.add_argument("--out-dir", default=".")
    p_synth.add_argument("--size", default="128x128", help="WxH")
    p_synth.add_argument(
        "--crf", choices=["linear", "gamma", "saturating-linear"], default="linear"
    )
    p_synth.add_argument("--gamma", type=float, default=1.0)
    p_synth.add_argument("--saturation", type=float, default=1.0)
    p_synth.add_argument("--base-shutter", type=float, default=1.0)
    p_synth.add_argument("--bit-depth", type=int, choices=[8, 16], default=8)
    p_synth.add_argument("--srgb", action="store_true", help="sRGB-encode outputs")
    p_synth.add_argument("--prefix", help="output name prefix (default: scene)")

    p_well = subs.add_parser(
        "wellexp", help="write the stack's max well-exposedness map"
    )
    p_well.add_argument("inputs", nargs="+")
    p_well.add_argument("--out", required=True)
    _add_srgb_flags(p_well)

    p_verify = subs.add_parser(
        "verify", help="check the exposure-doubling relation of a written stack"
    )
    p_verify.add_argument("sidecar", help="EV sidecar file of the stack")
    p_verify.add_argument("--tolerance", type=float)
    _add_srgb_flags(p_verify)

    return parser


def cmd_fuse(args) -> int:
    config = _parse_config_file(args.config) if args.config else {}
    _set_threads(_resolve(args, config, "threads"))
    assume_srgb = _resolve(args, config, "assume-srgb")
    stack = _read_stack(args.inputs, assume_srgb)

    fusion = FusionConfig(
        scheme=_resolve(args, config, "weights"),
        blend=_resolve(args, config, "blend"),
        pyramid_levels=_parse_levels(_resolve(args, config, "levels")),
    )
    params = PipelineParams(
        bilateral=BilateralParams(
            sigma_spatial=_resolve(args, config, "sigma-spatial"),
            sigma_range=_resolve(args, config, "sigma-range"),
        ),
        epsilon=_resolve(args, config, "epsilon"),
        target_gray=_resolve(args, config, "target-gray"),
        exact_bilateral=_resolve(args, config, "exact-bilateral"),
    )
    adjust = _resolve(args, config, "adjust")
    keep = args.dump_intermediates is not None
    result = run(stack, fusion, adjust=adjust, params=params, keep_intermediates=keep)

    if _resolve(args, config, "gamut") == "warn":
        clipped = int(np.count_nonzero((result.fused < 0) | (result.fused > 1)))
        print(f"gamut: {clipped} channel samples outside [0, 1]", file=sys.stderr)

    write_image(result.fused, args.out, encode_srgb=assume_srgb)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(result.report.to_dict(), fh, indent=2)
            fh.write("\n")
    if keep:
        _dump_intermediates(result.intermediates, args.dump_intermediates)
    return 0


def _dump_intermediates(inter, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    for i, lum in enumerate(inter.enhanced_lums):
        write_image(np.clip(lum, 0, 1), os.path.join(out_dir, f"enhanced_{i}.png"))
    for i, lum in enumerate(inter.tonemapped_lums):
        write_image(lum, os.path.join(out_dir, f"tonemapped_{i}.png"))
    for i, img in enumerate(inter.adjusted.images):
        write_image(img, os.path.join(out_dir, f"adjusted_{i}.png"))
    if inter.weight_maps is not None:
        peak = max(float(w.max()) for w in inter.weight_maps) or 1.0
        for i, w in enumerate(inter.weight_maps):
            write_image(w / peak, os.path.join(out_dir, f"weight_{i}.png"))
    if inter.plan is not None:
        plan = {
            "middle_index": inter.plan.middle_index,
            "gains": [float(a) for a in inter.plan.gains],
            "thresholds": [float(t) for t in inter.plan.thresholds],
            "target_gray": inter.plan.target_gray,
        }
        with open(os.path.join(out_dir, "plan.json"), "w", encoding="utf-8") as fh:
            json.dump(plan, fh, indent=2)
            fh.write("\n")


def cmd_metrics(args) -> int:
    assume_srgb = args.assume_srgb or False
    lines = []
    if args.csv:
        lines.append("path,discrete_entropy,statistical_naturalness,mean_well_exposedness")
    for path in args.inputs:
        img = read_image(path, assume_srgb=assume_srgb)
        entropy = discrete_entropy(img)
        natural = statistical_naturalness(img)
        wellexp = float(well_exposedness_map(img).mean())
        if args.csv:
            lines.append(f"{path},{entropy:.6f},{natural:.6f},{wellexp:.6f}")
        else:
            lines.append(
                f"{path}: entropy={entropy:.4f} bits, "
                f"naturalness={natural:.4f}, well_exposedness={wellexp:.4f}"
            )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_synth(args) -> int:
    try:
        width, height = (int(v) for v in args.size.lower().split("x"))
    except ValueError:
        raise ValueError(f"bad --size {args.size!r}, expected WxH") from None
    evs = [float(v) for v in args.evs.split(",")]
    field = builtin_fields((height, width))[args.scene]
    crf = CrfModel(args.crf, gamma=args.gamma, saturation_level=args.saturation)
    stack = make_stack(field, evs, crf, base_shutter=args.base_shutter)
    paths = write_stack(
        stack,
        args.out_dir,
        prefix=args.prefix or args.scene,
        bit_depth=args.bit_depth,
        encode_srgb=args.srgb,
    )
    print("\n".join(paths))
    return 0


def cmd_wellexposedness(args) -> int:
    assume_srgb = args.assume_srgb or False
    stack = _read_stack(args.inputs, assume_srgb)
    write_image(max_well_exposedness(stack.images), args.out)
    return 0


def cmd_verify(args) -> int:
    assume_srgb = args.assume_srgb or False
    entries = read_ev_sidecar(args.sidecar)
    base = os.path.dirname(os.path.abspath(args.sidecar))
    entries.sort(key=lambda e: e[1])
    images = [
        read_image(os.path.join(base, name), assume_srgb=assume_srgb)
        for name, _ in entries
    ]
    evs = [ev for _, ev in entries]
    worst = 0.0
    for (dark, v_dark), (bright, v_bright) in zip(
        zip(images, evs), zip(images[1:], evs[1:])
    ):
        ratio = 2.0 ** (v_bright - v_dark)
        tol = args.tolerance
        if tol is None:
            # Half-step quantization error on both sides of the relation.
            tol = (1.0 + ratio) * (0.5 / 255.0) + 1e-9
        unsaturated = bright < 1.0 - 0.75 / 255.0
        if not np.any(unsaturated):
            continue
        dev = float(np.abs(bright - ratio * dark)[unsaturated].max())
        worst = max(worst, dev)
        if dev > tol:
            print(
                f"exposure relation violated at {ratio:g}x: "
                f"max deviation {dev:.6g} > {tol:.6g}",
                file=sys.stderr,
            )
            return 2
    print(f"stack consistent; max deviation {worst:.6g}")
    return 0


_COMMANDS = {
    "fuse": cmd_fuse,
    "metrics": cmd_metrics,
    "synth": cmd_synth,
    "wellexp": cmd_wellexposedness,
    "verify": cmd_verify,
}


def _absorb_ev_list(argv: list[str]) -> list[str]:
    """Fold ``--evs -1,0,1`` into ``--evs=-1,0,1``.

    A leading minus in the value would otherwise be classified as an
    unknown option.
    """
    out = []
    tokens = iter(argv)
    for token in tokens:
        if token == "--evs":
            value = next(tokens, None)
            out.append(token if value is None else f"--evs={value}")
        else:
            out.append(token)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_absorb_ev_list(list(argv)))
    try:
        return _COMMANDS[args.command](args)
    except Exception as exc:  # processing error contract: exit 2
        print(f"expofuse {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
