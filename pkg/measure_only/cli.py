"""Command line front end: ``measure-only <subcommand>``.

Subcommands
-----------
run SPEC           run an experiment spec file
collapse CSV       collapse the steady-state records of a result file
percolate          square-lattice bond percolation exponents
audit              stabilizer engine vs exact statevector audit
preset NAME        run a preset experiment at desk or paper scale
"""
import argparse
import logging
import os
import sys

from measure_only import __version__
from measure_only.experiments import (
    ExperimentSpec, PRESETS, SCALES, flatten_summary, format_value,
    get_preset, parse_grid, read_results, read_spec, run_experiment,
    write_results, write_summary)
from measure_only.oracle import audit_equivalence
from measure_only.scaling import ScalingDataset, find_collapse

logger = logging.getLogger(__name__)

WORKERS_ENV = "MEASURE_ONLY_WORKERS"


def get_n_jobs(workers=None):
    """Worker count: ``--workers``, else $MEASURE_ONLY_WORKERS, else 1."""
    if workers is None:
        value = os.environ.get(WORKERS_ENV, "1")
        try:
            workers = int(value)
        except ValueError:
            raise ValueError("%s must be an integer, got %r"
                             % (WORKERS_ENV, value))
    if workers == 0 or workers < -1:
        raise ValueError("workers must be >= 1 or -1 (all cores), got %i"
                         % workers)
    return workers


def _range(text):
    lo, hi = (float(v) for v in text.split(':'))
    return lo, hi


def _print_summary(summary):
    for key, value in flatten_summary(summary):
        print("%s = %s" % (key, format_value(value)))


def _cmd_run(args, n_jobs):
    spec = read_spec(args.spec)
    if args.seed is not None:
        spec.seed = args.seed
    if args.out is not None:
        spec.output = args.out
    result = run_experiment(spec, n_jobs=n_jobs, verbose=True)
    _print_summary({k: v for k, v in result.summary.items() if k != 'spec'})


def _cmd_collapse(args, n_jobs):
    frame = read_results(args.csv)
    observable = args.observable
    if observable is None:
        names = frame['observable'].unique()
        if len(names) != 1:
            raise ValueError("result file holds observables %s, pick one "
                             "with --observable" % list(names))
        observable = names[0]
    data = ScalingDataset.from_frame(frame, args.sweep,
                                     observable=observable)
    mutual_info = (args.mutual_info if args.mutual_info is not None
                   else observable.startswith('mi_'))
    result = find_collapse(
        data, p_c_range=args.p_c_range, nu_range=args.nu_range,
        n_grid=args.n_grid, mutual_info=mutual_info, weighted=args.weighted,
        n_jobs=n_jobs, verbose=True)
    summary = dict(collapse=result.to_dict(), version=__version__)
    stem = args.out or args.csv
    write_summary(summary, stem + '.result.txt')
    if args.landscape:
        write_results(result.to_frame(),
                      os.path.splitext(stem)[0] + '.landscape.csv')
    _print_summary(summary)


def _cmd_percolate(args, n_jobs):
    spec = ExperimentSpec(
        "Percolation", grid=parse_grid(args.grid),
        sizes=tuple(int(s) for s in args.sizes.split(',')),
        n_samples=args.n_samples,
        seed=0 if args.seed is None else args.seed, output=args.out)
    result = run_experiment(spec, n_jobs=n_jobs, verbose=True)
    _print_summary({k: v for k, v in result.summary.items() if k != 'spec'})


def _cmd_audit(args, n_jobs):
    report = audit_equivalence(
        n_circuits=args.n_circuits, n_sites=args.L,
        n_updates=args.n_updates, seed=0 if args.seed is None else args.seed,
        verbose=True)
    summary = dict(audit=report.to_dict(), version=__version__)
    if args.out is not None:
        write_summary(summary, args.out + '.result.txt')
    _print_summary(summary)
    if not report.passed:
        raise ValueError("oracle audit failed: %r" % report)


def _cmd_preset(args, n_jobs):
    output = args.out or os.path.join("results", args.name + ".csv")
    specs = get_preset(args.name, scale=args.scale,
                       seed=0 if args.seed is None else args.seed,
                       output=output)
    for k, spec in enumerate(specs):
        logger.info("preset %s: spec %i / %i", args.name, k + 1, len(specs))
        result = run_experiment(spec, n_jobs=n_jobs, verbose=True)
        _print_summary({key: value for key, value in result.summary.items()
                        if key != 'spec'})


def build_parser():
    parser = argparse.ArgumentParser(
        prog="measure-only",
        description="Stabilizer simulation of measurement-only circuits "
                    "with X, ZZ and ZXZ measurements.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--seed", type=int, default=None,
                        help="master seed (overrides the spec)")
    parser.add_argument("--workers", type=int, default=None,
                        help="worker processes (default $%s or 1)"
                        % WORKERS_ENV)
    parser.add_argument("--out", default=None,
                        help="output CSV path or stem")
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment spec file")
    p.add_argument("spec")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("collapse", help="collapse a result CSV")
    p.add_argument("csv")
    p.add_argument("--observable", default=None)
    p.add_argument("--sweep", default="sweep_value",
                   help="column holding the swept probability")
    p.add_argument("--p-c-range", type=_range, default=None,
                   metavar="LO:HI")
    p.add_argument("--nu-range", type=_range, default=(0.8, 2.5),
                   metavar="LO:HI")
    p.add_argument("--n-grid", type=int, default=101)
    p.add_argument("--mutual-info", dest="mutual_info",
                   action="store_true", default=None,
                   help="subtract the interpolated value at p_c first "
                        "(default for mi_* observables)")
    p.add_argument("--no-mutual-info", dest="mutual_info",
                   action="store_false")
    p.add_argument("--weighted", action="store_true")
    p.add_argument("--landscape", action="store_true",
                   help="also write the epsilon landscape as CSV")
    p.set_defaults(func=_cmd_collapse)

    p = sub.add_parser("percolate", help="bond percolation exponents")
    p.add_argument("--sizes", default="16,32,64")
    p.add_argument("--grid", default="0.4:0.6:0.01")
    p.add_argument("--n-samples", type=int, default=500)
    p.set_defaults(func=_cmd_percolate)

    p = sub.add_parser("audit", help="exact statevector audit")
    p.add_argument("--n-circuits", type=int, default=100)
    p.add_argument("--L", type=int, default=8)
    p.add_argument("--n-updates", type=int, default=64)
    p.set_defaults(func=_cmd_audit)

    p = sub.add_parser("preset", help="run a preset experiment")
    p.add_argument("name", choices=sorted(PRESETS))
    p.add_argument("--scale", choices=sorted(SCALES), default="desk")
    p.set_defaults(func=_cmd_preset)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(name)s %(levelname)s %(message)s")
    try:
        args.func(args, get_n_jobs(args.workers))
    except (ValueError, OSError, KeyError) as e:
        print("error: %s: %s" % (type(e).__name__, e), file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
