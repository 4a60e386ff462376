"""Command-line front end: independence tests, landscape sweeps, one-off fits.

Exit codes: 0 success, 1 usage error, 2 numeric failure.  CSV numeric fields
are serialized with 17 significant digits so doubles round-trip exactly, and
every run is fully determined by its flags plus --seed.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys

import numpy as np

from . import bss, sources
from .density import BandwidthSelector
from .errors import FdbssError
from .estimators import ESTIMATOR_KINDS, config_for, fit


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _subseed(*parts) -> int:
    return int(np.random.SeedSequence(list(parts)).generate_state(1)[0])


def _parse_bandwidth(text: str) -> BandwidthSelector:
    if text == "rot":
        return BandwidthSelector.rot()
    if text.startswith("fixed:"):
        try:
            return BandwidthSelector.fixed(float(text.split(":", 1)[1]))
        except ValueError:
            pass
    raise argparse.ArgumentTypeError(f"bandwidth must be 'rot' or 'fixed:<h>', got {text!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fdbss", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, estimator_default="lsfd", estimator_choices=ESTIMATOR_KINDS):
        p.add_argument("--estimator", default=estimator_default, choices=estimator_choices)
        p.add_argument("--b", type=int, default=None, help="basis count (default min(100, N))")
        p.add_argument("--lambda", dest="lam", type=float, default=0.01)
        p.add_argument("--bandwidth", type=_parse_bandwidth, default=BandwidthSelector.rot(),
                       help="'rot' or 'fixed:<h>'")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="CSV output path (default stdout)")

    p = sub.add_parser("independence-test", help="paired independent/dependent trials")
    common(p, estimator_default="all", estimator_choices=ESTIMATOR_KINDS + ("all",))
    p.add_argument("--n", type=int, default=300)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_independence_test)

    p = sub.add_parser("landscape", help="contrast values over rotation angles")
    common(p)
    p.add_argument("--dist", required=True, choices=list(sources.KINDS))
    p.add_argument("--n", type=int, default=300)
    p.add_argument("--grid", type=int, default=100)
    p.add_argument("--theta0", type=float, default=0.0, help="mixing rotation (radians)")
    p.add_argument("--freeze-basis", action="store_true")
    p.set_defaults(func=cmd_landscape)

    p = sub.add_parser("estimate", help="fit one estimator to a two-column CSV")
    common(p)
    p.add_argument("data", help="CSV file, one sample per row, two columns")
    p.set_defaults(func=cmd_estimate)

    return parser


def _emit_csv(rows, header, out_path):
    if out_path is None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _summary(lines, out_path):
    stream = sys.stdout if out_path is not None else sys.stderr
    for key, value in lines:
        print(f"{key}={value}", file=stream)


def cmd_independence_test(args) -> int:
    kinds = list(ESTIMATOR_KINDS) if args.estimator == "all" else [args.estimator]
    rows = []
    means = {}
    for kind in kinds:
        for condition in ("independent", "dependent"):
            values = []
            for trial in range(args.trials):
                if condition == "independent":
                    data = np.vstack([
                        sources.sample("c", args.n, [args.seed, trial, 0]),
                        sources.sample("c", args.n, [args.seed, trial, 1]),
                    ])
                else:
                    data = sources.dependent_pair(args.n, [args.seed, trial, 2])
                cfg = config_for(kind, b=args.b, lam=args.lam, bandwidth=args.bandwidth,
                                 seed=_subseed(args.seed, trial))
                value = fit(data, cfg).value
                values.append(value)
                rows.append([trial, kind, condition, _fmt(value)])
            means[(kind, condition)] = float(np.mean(values))
    for (kind, condition), mean in means.items():
        rows.append(["mean", kind, condition, _fmt(mean)])
    _emit_csv(rows, ["trial", "estimator", "condition", "value"], args.out)
    _summary([(f"mean_{k}_{c}", _fmt(v)) for (k, c), v in means.items()], args.out)
    return 0


def cmd_landscape(args) -> int:
    data = np.vstack([
        sources.sample(args.dist, args.n, [args.seed, 0]),
        sources.sample(args.dist, args.n, [args.seed, 1]),
    ])
    mixing = bss.rotation2(args.theta0)
    observed = bss.mix(data, mixing)
    whitened = bss.whiten(observed)
    cfg = config_for(args.estimator, b=args.b, lam=args.lam, bandwidth=args.bandwidth,
                     seed=_subseed(args.seed, 3))
    scape = bss.landscape(whitened.white, cfg, grid_size=args.grid,
                          freeze_basis=args.freeze_basis)
    truth = bss.true_unmixing_angle(whitened.transform @ mixing)
    rows = [[_fmt(t), _fmt(v)] for t, v in zip(scape.thetas, scape.values)]
    _emit_csv(rows, ["theta", "value"], args.out)
    _summary([
        ("argmin_theta", _fmt(scape.argmin_theta)),
        ("argmin_value", _fmt(scape.values[scape.argmin_index])),
        ("truth_theta", _fmt(truth)),
        ("angle_error", _fmt(bss.angle_error(scape.argmin_theta, truth))),
    ], args.out)
    return 0


def _read_two_column_csv(path) -> np.ndarray:
    rows = []
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        print(f"cannot open {path}: {exc}", file=sys.stderr)
        raise SystemExit(1)
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            try:
                rows.append([float(parts[0]), float(parts[1])])
            except (ValueError, IndexError):
                if lineno == 1:
                    continue  # header row
                print(f"{path}: line {lineno}: expected two numeric columns",
                      file=sys.stderr)
                raise SystemExit(2)
    if len(rows) < 2:
        print(f"{path}: need at least two data rows", file=sys.stderr)
        raise SystemExit(2)
    return np.asarray(rows).T


def cmd_estimate(args) -> int:
    data = _read_two_column_csv(args.data)
    cfg = config_for(args.estimator, b=args.b, lam=args.lam, bandwidth=args.bandwidth,
                     seed=args.seed)
    report = fit(data, cfg)
    for key, value in [
        ("estimator", args.estimator),
        ("value", _fmt(report.value)),
        ("objective", _fmt(report.objective)),
        ("v2_hat", _fmt(report.v2_hat)),
        ("crip_hat", _fmt(report.crip_hat)),
        ("residual", _fmt(report.residual)),
        ("sigma", _fmt(report.sigma)),
        ("lambda", _fmt(report.lam)),
        ("b", report.b),
    ]:
        print(f"{key}={value}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except (FdbssError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
