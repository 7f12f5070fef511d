"""Command-line front end: noise injection, denoising, benchmark CSV reports.

Exit codes: 0 success, 1 usage error, 2 I/O or file-format error,
3 numerical divergence.
"""

import argparse
import csv
import hashlib
import sys
import time
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .diffusion import (
    DiffusionConfig,
    DivergenceError,
    SchemeKind,
    coupling_field,
    denoise,
    prepare_weights,
)
from .image import RNG_ALGORITHM, FormatError, PlanarImage, add_gaussian_noise, load, save
from .metrics import SSIM_WINDOW, mssim, psnr, ssim_map
from .weights import TvConfig

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_DIVERGED = 3

_SCHEME_LABELS = {
    SchemeKind.PROPOSED: "Proposed",
    SchemeKind.TD: "TD",
    SchemeKind.PERONA_MALIK: "PeronaMalik",
}

CSV_HEADER = "image,scheme,sigma_n,seed,iters,psnr_db,mssim,wall_ms"

# flat key set shared by the flags and the optional TOML config file;
# precedence is flags > config file > these defaults
_DEFAULTS = {
    "scheme": "proposed",
    "sigma": 2.0,
    "rho": 2.0,
    "dt": 0.2,
    "iters": 30,
    "tv_iters": 50,
    "coupling_gain": 0.25,
    "seed": 0,
    "sigma_n": 20.0,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; the contract here reserves 2 for
    # I/O errors and uses 1 for usage
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_config_flags(p):
    p.add_argument("--scheme", choices=["proposed", "td", "pm"], default=None)
    p.add_argument("--sigma", type=float, default=None, help="structure-tensor smoothing (pixels)")
    p.add_argument("--rho", type=float, default=None, help="weight-map smoothing (pixels)")
    p.add_argument("--dt", type=float, default=None, help="diffusion time step")
    p.add_argument("--iters", type=int, default=None, help="diffusion iterations")
    p.add_argument("--tv-iters", type=int, default=None, help="TV-flow iterations for the weights")
    p.add_argument("--coupling-gain", type=float, default=None, help="scale on the exchange term")
    p.add_argument("--seed", type=int, default=None, help="noise RNG seed")
    p.add_argument("--sigma-n", type=float, default=None, help="noise std on the 0-255 scale")
    p.add_argument("--config", type=Path, default=None, help="TOML file with the same keys as the flags")


def build_parser():
    parser = _Parser(prog="chromadiff", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_noise = sub.add_parser("noise", help="add seeded Gaussian noise and report the PSNR")
    p_noise.add_argument("input", type=Path)
    p_noise.add_argument("output", type=Path)
    _add_config_flags(p_noise)

    p_den = sub.add_parser("denoise", help="denoise one image")
    p_den.add_argument("input", type=Path)
    p_den.add_argument("output", type=Path)
    p_den.add_argument("--clean", type=Path, default=None, help="ground truth for metrics")
    p_den.add_argument("--report-best", action="store_true",
                       help="keep the iterate with maximum PSNR (needs --clean)")
    p_den.add_argument("--dump-weights", type=Path, default=None, help="write the channel weight maps")
    p_den.add_argument("--dump-coupling", type=Path, default=None,
                       help="write the exchange-term magnitude on the input, rescaled to [0,1]")
    p_den.add_argument("--dump-ssim", type=Path, default=None,
                       help="write the channel-mean SSIM map vs --clean")
    _add_config_flags(p_den)

    p_bench = sub.add_parser("bench", help="run every scheme over a corpus and write a CSV")
    p_bench.add_argument("corpus", type=Path, help="directory of clean PNG/PPM images")
    p_bench.add_argument("out_csv", type=Path)
    p_bench.add_argument("--report-best", action="store_true",
                         help="per row, keep the iterate with maximum PSNR")
    _add_config_flags(p_bench)

    return parser


def _load_config_file(path):
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise UsageError(f"{path}: invalid TOML: {exc}") from exc
    unknown = sorted(set(data) - set(_DEFAULTS))
    if unknown:
        raise UsageError(f"{path}: unknown config keys: {', '.join(unknown)}")
    for key, value in data.items():
        if isinstance(value, bool) or not isinstance(value, (int, float, str)):
            raise UsageError(f"{path}: key {key!r} has unusable value {value!r}")
    return data


def _resolve_options(args):
    opts = dict(_DEFAULTS)
    if args.config is not None:
        opts.update(_load_config_file(args.config))
    for key in _DEFAULTS:
        flag_value = getattr(args, key)
        if flag_value is not None:
            opts[key] = flag_value
    opts["iters"] = int(opts["iters"])
    opts["tv_iters"] = int(opts["tv_iters"])
    opts["seed"] = int(opts["seed"])
    if opts["scheme"] not in ("proposed", "td", "pm"):
        raise UsageError(f"unknown scheme {opts['scheme']!r} (choose proposed, td or pm)")
    return opts


def _diffusion_config(opts):
    tv = TvConfig(iterations=opts["tv_iters"], rho=float(opts["rho"]))
    return DiffusionConfig(
        sigma=float(opts["sigma"]),
        dt=float(opts["dt"]),
        iterations=opts["iters"],
        coupling_gain=float(opts["coupling_gain"]),
        tv=tv,
    )


def _scheme_kind(name):
    return {"proposed": SchemeKind.PROPOSED, "td": SchemeKind.TD, "pm": SchemeKind.PERONA_MALIK}[name]


def _image_seed(base_seed, name):
    # stable per-image seed so corpus ordering cannot change results
    digest = hashlib.blake2b(f"{base_seed}:{name}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def _rescaled_unit(field):
    lo = float(field.min())
    hi = float(field.max())
    if hi - lo < 1e-300:
        return np.zeros_like(field)
    return (field - lo) / (hi - lo)


def _run_best(noisy, clean, cfg, kind):
    """Evolve and keep the iterate with maximum PSNR against clean.

    The input itself counts as iterate 0, so a run that only hurts PSNR
    reports best_iteration=0 and returns the input.
    """
    best = {"k": 0, "img": noisy, "psnr": psnr(noisy, clean)}

    def track(k, img):
        p = psnr(img, clean)
        if p > best["psnr"]:
            best.update(k=k, img=img, psnr=p)

    denoise(noisy, cfg, kind, on_iteration=track)
    return best["img"], best["k"]


def cmd_noise(args):
    opts = _resolve_options(args)
    img = load(args.input)
    noisy = add_gaussian_noise(img, float(opts["sigma_n"]), opts["seed"])
    save(noisy, args.output)
    print(f"psnr_db={psnr(noisy, img):.4f}")
    return EXIT_OK


def cmd_denoise(args):
    opts = _resolve_options(args)
    cfg = _diffusion_config(opts)
    kind = _scheme_kind(opts["scheme"])
    if args.report_best and args.clean is None:
        raise UsageError("--report-best needs --clean for the PSNR oracle")
    if args.dump_ssim is not None and args.clean is None:
        raise UsageError("--dump-ssim needs --clean")

    img = load(args.input)
    clean = load(args.clean) if args.clean is not None else None

    if args.dump_weights is not None or args.dump_coupling is not None:
        weights = prepare_weights(img, cfg)
        if args.dump_weights is not None:
            save(PlanarImage(weights.data), args.dump_weights)
        if args.dump_coupling is not None:
            magnitude = np.abs(coupling_field(img, weights)).max(axis=0)
            save(PlanarImage(_rescaled_unit(magnitude)[None]), args.dump_coupling)

    if args.report_best:
        result, best_k = _run_best(img, clean, cfg, kind)
    else:
        result = denoise(img, cfg, kind)
    save(result, args.output)

    if clean is not None:
        print(f"psnr_db={psnr(result, clean):.4f}")
        print(f"mssim={mssim(result, clean):.5f}")
        if args.report_best:
            print(f"best_iteration={best_k}")
        if args.dump_ssim is not None:
            channel_mean = np.mean(
                [ssim_map(result.channel(c), clean.channel(c)) for c in range(3)], axis=0
            )
            save(PlanarImage(channel_mean[None]), args.dump_ssim)
    return EXIT_OK


def _corpus_files(corpus):
    if not corpus.is_dir():
        raise UsageError(f"{corpus}: not a directory")
    files = sorted(p for p in corpus.iterdir() if p.suffix.lower() in (".png", ".ppm"))
    if not files:
        raise UsageError(f"{corpus}: no PNG/PPM images found")
    return files


def cmd_bench(args):
    opts = _resolve_options(args)
    cfg = _diffusion_config(opts)
    sigma_n = float(opts["sigma_n"])
    files = _corpus_files(args.corpus)

    rows = []
    sums = {kind: [0.0, 0.0] for kind in SchemeKind}
    for path in files:
        clean = load(path)
        seed = _image_seed(opts["seed"], path.name)
        noisy = add_gaussian_noise(clean, sigma_n, seed)
        for kind in (SchemeKind.PROPOSED, SchemeKind.TD, SchemeKind.PERONA_MALIK):
            t0 = time.perf_counter()
            if args.report_best:
                result, iters_used = _run_best(noisy, clean, cfg, kind)
            else:
                result = denoise(noisy, cfg, kind)
                iters_used = cfg.iterations
            wall_ms = (time.perf_counter() - t0) * 1e3
            p = psnr(result, clean)
            m = mssim(result, clean)
            sums[kind][0] += p
            sums[kind][1] += m
            rows.append(
                [path.name, _SCHEME_LABELS[kind], f"{sigma_n:g}", str(seed),
                 str(iters_used), f"{p:.6f}", f"{m:.6f}", f"{wall_ms:.1f}"]
            )

    n = len(files)
    with open(args.out_csv, "w", newline="") as fh:
        fh.write(f"# rng={RNG_ALGORITHM}\n")
        fh.write(f"# ssim={SSIM_WINDOW} reduction=per-channel-mean\n")
        fh.write(
            f"# sigma={cfg.sigma:g} rho={cfg.tv.rho:g} dt={cfg.dt:g} iters={cfg.iterations}"
            f" tv_iters={cfg.tv.iterations} coupling_gain={cfg.coupling_gain:g}"
            f" base_seed={opts['seed']}\n"
        )
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER.split(","))
        writer.writerows(rows)
        for kind in (SchemeKind.PROPOSED, SchemeKind.TD, SchemeKind.PERONA_MALIK):
            writer.writerow(
                ["mean", _SCHEME_LABELS[kind], f"{sigma_n:g}", "", "",
                 f"{sums[kind][0] / n:.6f}", f"{sums[kind][1] / n:.6f}", ""]
            )
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"noise": cmd_noise, "denoise": cmd_denoise, "bench": cmd_bench}[args.command]
    try:
        return handler(args)
    except UsageError as exc:
        print(f"chromadiff: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DivergenceError as exc:
        print(f"chromadiff: diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except FormatError as exc:
        print(f"chromadiff: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        # bad parameter values surface here from the config dataclasses
        print(f"chromadiff: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"chromadiff: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
