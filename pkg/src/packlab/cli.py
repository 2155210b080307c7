"""Batch experiment runner wrapping both cores.

Subcommands mirror the experiment kinds; a config file (INI sections per
experiment) can hold defaults and explicit flags override it.  Exit codes:
0 success, 2 violated invariant, 3 invalid config or budget.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .reporting import to_json, write_csv, write_json

EXIT_OK = 0
EXIT_ASSERTION = 2
EXIT_INVALID = 3

FIXTURES = {
    "cantor3": "middle-thirds two-branch measure on [0,1), d=1 (box dim ~0.631)",
    "cantor-a": "two-branch measure with ratio 0.45, d=1 (box dim ~0.868)",
    "circle": "arc-length measure on a centered circle of radius 1/4, d=2",
    "segment": "uniform measure on a centered horizontal segment, d=2",
    "plane-slice": "smooth bump density on an axis slice, d=2 (flat direction)",
    "dust-product": "planar product of two middle-thirds measures (box dim ~1.262)",
}


def build_fixture(name: str, n: int, depth: int):
    from . import fractal as F

    if name == "cantor3":
        return F.cantor_measure(1 / 3, depth, n)
    if name == "cantor-a":
        return F.cantor_measure(0.45, depth, n)
    if name == "circle":
        return F.sphere_measure(n)
    if name == "segment":
        return F.segment_measure(n)
    if name == "plane-slice":
        return F.plane_slice_measure(n)
    if name == "dust-product":
        line = F.cantor_measure(1 / 3, depth, n)
        return F.product_measure(line, line)
    raise ValueError(f"unknown fixture {name!r}; see list-fixtures")


def fixture_set(name: str, n: int, depth: int):
    """Occupancy version of a fixture (rasterized, no resolution floor)."""
    from . import fractal as F

    if name == "cantor3":
        return F.cantor_set_1d(1 / 3, depth, n)
    if name == "cantor-a":
        return F.cantor_set_1d(0.45, depth, n)
    if name == "circle":
        return F.circle_set(n)
    if name == "segment":
        return F.segment_set(n)
    if name == "dust-product":
        return F.cantor_dust_set(1 / 3, depth, n)
    return build_fixture(name, n, depth).support()


# ---------------------------------------------------------------------------
# experiment runners; each returns a report dict


def run_ff_verify(args) -> dict:
    from .rigidpack import verify_theorem

    return verify_theorem(
        args.theorem, args.q, args.d, trials=args.trials, seed=args.seed,
        margin=args.margin, threads=args.threads,
    )


def run_ff_restrict(args) -> dict:
    from .ffourier import restriction_ratio_report

    return restriction_ratio_report(
        args.q, args.d, trials=args.trials, seed=args.seed,
        exhaustive=args.exhaustive, threads=args.threads,
    )


def run_ff_constants(args) -> dict:
    from .rigidpack import second_moment_constant_report

    q_list = [int(tok) for tok in args.q_list.split(",")]
    return second_moment_constant_report(q_list, trials=args.trials, seed=args.seed, threads=args.threads)


def run_frac_dim(args) -> dict:
    from . import fractal as F
    from .reporting import report_envelope

    S = fixture_set(args.fixture, args.n, args.depth)
    rep = F.box_dimension(S)
    config = {"fixture": args.fixture, "n": args.n, "depth": args.depth}
    return report_envelope("frac-dim", config, [rep.to_dict()], {"box_dimension": rep.slope})


def run_frac_decay(args) -> dict:
    from . import fractal as F
    from .reporting import report_envelope

    mu = build_fixture(args.fixture, args.n, args.depth)
    spec = F.spectrum(mu)
    if args.mode == "spherical":
        rep = F.spherical_decay(spec)
    elif args.mode == "envelope":
        rep = F.envelope_decay(spec)
    elif args.mode == "ball":
        rep = F.ball_growth(spec)
    else:
        raise ValueError(f"unknown decay mode {args.mode!r}")
    config = {"fixture": args.fixture, "n": args.n, "depth": args.depth, "mode": args.mode}
    return report_envelope(
        "frac-decay", config, [rep.to_dict()],
        {"slope": rep.slope, "decay_exponent": rep.decay_exponent, "residual": rep.residual},
    )


def run_frac_push(args) -> dict:
    from . import fractal as F
    from .reporting import report_envelope

    mu = build_fixture(args.fixture, args.n, args.depth)
    if args.transform == "dilate":
        mu = F.rescale(mu, 0.5)
        zeta = F.ScaleSample.uniform(args.nodes)
        nu = F.pushforward_dilate(mu, zeta)
        # identity check against the defining scale-average at integer frequencies
        spec_nu = F.spectrum(nu)
        ks = np.arange(1, args.n // 8 + 1, dtype=float)
        xi = ks[:, None] if mu.d == 1 else np.stack([ks, np.zeros_like(ks)], axis=1)
        lhs = np.array([spec_nu.value(np.rint(x).astype(int)) for x in xi])
        rhs = np.zeros(len(xi), dtype=complex)
        for r, w in zip(zeta.r, zeta.w):
            rhs += w * F.nonuniform_transform(mu, xi * r)
        identity_err = float(np.abs(lhs - rhs).max())
    elif args.transform == "rotate":
        gamma = F.RotationSample.uniform(args.angles)
        nu = F.pushforward_rotate(mu, gamma)
        identity_err = float("nan")
    elif args.transform == "similarity":
        gamma = F.RotationSample.uniform(args.angles)
        zeta = F.ScaleSample.uniform(args.nodes, 1.0, 1.8)
        nu = F.pushforward_similarity(F.rescale(mu, 0.5, 0.25), gamma, zeta)
        identity_err = float("nan")
    else:
        raise ValueError(f"unknown transform {args.transform!r}")
    rep = F.envelope_decay(F.spectrum(nu)) if nu.d == 1 else F.spherical_decay(F.spectrum(nu))
    config = {
        "fixture": args.fixture, "n": args.n, "depth": args.depth,
        "transform": args.transform, "nodes": args.nodes, "angles": args.angles,
    }
    summary = {"decay_exponent": rep.decay_exponent, "mass": nu.total()}
    if not np.isnan(identity_err):
        summary["identity_max_err"] = identity_err
    return report_envelope("frac-push", config, [rep.to_dict()], summary)


def run_frac_union(args) -> dict:
    import numpy as np

    from . import fractal as F
    from .reporting import report_envelope

    base = F.circle_set(args.n, center=(0.25, 0.5), radius=0.2) if args.base == "circle" \
        else fixture_set(args.base, args.n, args.depth)
    ratio = 1 / 3 if args.sample == "cantor3" else 0.45
    lefts, _ = F.cantor_intervals(ratio, args.depth)
    # translate along the first axis, scaled to the room the base leaves free
    max_x = (np.argwhere(base.cells)[:, 0].max() + 1) / args.n
    scale = max(0.0, 1.0 - 1.0 / args.n - max_x)
    if scale <= 0:
        raise ValueError(f"base {args.base!r} leaves no room for translations")
    transforms = [F.AffineMap.translate_dilate([scale * t] + [0.0] * (base.d - 1)) for t in lefts]
    union = F.union_construct(base, transforms)
    rep = F.box_dimension(union)
    config = {
        "base": args.base, "sample": args.sample, "n": args.n,
        "depth": args.depth, "translates": len(transforms), "translate_scale": scale,
    }
    return report_envelope("frac-union", config, [rep.to_dict()], {"box_dimension": rep.slope})


RUNNERS = {
    "ff-verify": run_ff_verify,
    "ff-restrict": run_ff_restrict,
    "ff-constants": run_ff_constants,
    "frac-dim": run_frac_dim,
    "frac-decay": run_frac_decay,
    "frac-push": run_frac_push,
    "frac-union": run_frac_union,
}

RANDOMIZED = {"ff-verify", "ff-restrict", "ff-constants"}


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="packlab", description=__doc__)
    top.add_argument("--version", action="version", version=f"packlab {__version__}")
    top.add_argument("--config", help="INI file with one section per experiment kind")
    sub = top.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--out", help="output path prefix (.json/.csv are appended)")
        p.add_argument("--threads", type=int, default=None, help="worker cap (PACKLAB_THREADS also applies)")

    p = sub.add_parser("ff-verify", help="ratio report for a union-size inequality")
    p.add_argument("--theorem", choices=["1.11", "1.12", "1.13-1", "1.13-2"])
    p.add_argument("--q", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--margin", type=float)
    common(p)

    p = sub.add_parser("ff-restrict", help="spherical restriction ratio table")
    p.add_argument("--q", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--exhaustive", action="store_true", default=None)
    common(p)

    p = sub.add_parser("ff-constants", help="second-moment fitted-constant sweep")
    p.add_argument("--q-list", dest="q_list")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    common(p)

    p = sub.add_parser("frac-dim", help="box-counting dimension of a fixture")
    p.add_argument("--fixture")
    p.add_argument("--n", type=int)
    p.add_argument("--depth", type=int)
    common(p)

    p = sub.add_parser("frac-decay", help="spectral decay report of a fixture")
    p.add_argument("--fixture")
    p.add_argument("--n", type=int)
    p.add_argument("--depth", type=int)
    p.add_argument("--mode", choices=["spherical", "envelope", "ball"])
    common(p)

    p = sub.add_parser("frac-push", help="pushforward construction and its decay")
    p.add_argument("--fixture")
    p.add_argument("--n", type=int)
    p.add_argument("--depth", type=int)
    p.add_argument("--transform", choices=["dilate", "rotate", "similarity"])
    p.add_argument("--nodes", type=int)
    p.add_argument("--angles", type=int)
    common(p)

    p = sub.add_parser("frac-union", help="union of transformed copies and its dimension")
    p.add_argument("--base")
    p.add_argument("--sample")
    p.add_argument("--n", type=int)
    p.add_argument("--depth", type=int)
    common(p)

    sub.add_parser("list-fixtures", help="print the fixture catalog")
    return top


DEFAULTS = {
    "ff-verify": {"theorem": "1.11", "q": 7, "d": 2, "trials": 100, "margin": 1.0},
    "ff-restrict": {"q": 3, "d": 2, "trials": 0, "exhaustive": False},
    "ff-constants": {"q_list": "3,7,11,19,23", "trials": 100},
    "frac-dim": {"fixture": "cantor3", "n": 4096, "depth": 8},
    "frac-decay": {"fixture": "circle", "n": 2048, "depth": 7, "mode": "spherical"},
    "frac-push": {"fixture": "cantor3", "n": 4096, "depth": 7, "transform": "dilate",
                  "nodes": 64, "angles": 256},
    "frac-union": {"base": "circle", "sample": "cantor3", "n": 4096, "depth": 7},
}

_BOOL_KEYS = {"exhaustive"}
_INT_KEYS = {"q", "d", "trials", "seed", "n", "depth", "nodes", "angles", "threads"}
_FLOAT_KEYS = {"margin"}


def _coerce(key: str, raw: str):
    if key in _BOOL_KEYS:
        return raw.strip().lower() in ("1", "true", "yes", "on")
    if key in _INT_KEYS:
        return int(raw)
    if key in _FLOAT_KEYS:
        return float(raw)
    return raw


def resolve_config(args: argparse.Namespace) -> argparse.Namespace:
    """Defaults < config file section < explicit flags."""
    merged = dict(DEFAULTS.get(args.command, {}))
    if args.config:
        ini = configparser.ConfigParser()
        read = ini.read(args.config)
        if not read:
            raise ValueError(f"config file not found: {args.config}")
        if ini.has_section(args.command):
            for key, raw in ini.items(args.command):
                merged[key.replace("-", "_")] = _coerce(key.replace("-", "_"), raw)
    for key, val in vars(args).items():
        if key not in merged:
            merged[key] = val  # carry non-configurable keys (command, out, ...)
        elif val is not None:
            merged[key] = val  # explicit flag beats config and defaults
    return argparse.Namespace(**merged)


def _print_summary(report: dict):
    print(f"packlab {report['version']}  kind={report['kind']}  config_hash={report['config_hash']}")
    print(f"config: {to_json(report['config'])}")
    print(f"records: {len(report['records'])}")
    for key, val in sorted(report["summary"].items()):
        print(f"  {key} = {val}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_INVALID
    if args.command == "list-fixtures":
        for name, desc in FIXTURES.items():
            print(f"{name:14s} {desc}")
        return EXIT_OK
    try:
        args = resolve_config(args)
        if args.command in RANDOMIZED and getattr(args, "seed", None) is None:
            exhaustive = getattr(args, "exhaustive", False)
            if not (args.command == "ff-restrict" and exhaustive):
                raise ValueError("randomized experiments require --seed")
        report = RUNNERS[args.command](args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except AssertionError as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_ASSERTION
    _print_summary(report)
    if getattr(args, "out", None):
        out = Path(args.out)
        write_json(out.with_suffix(".json"), report)
        write_csv(out.with_suffix(".csv"), report["records"])
        print(f"wrote {out.with_suffix('.json')} and {out.with_suffix('.csv')}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
