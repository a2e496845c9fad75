"""Command line: ``pathrisk {simulate,report,study,verify-duality}``.

Exit codes: 0 success, 1 property failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .config import ConfigError, load_config
from .experiment import DEFAULT_GAMMAS, cmd_report, cmd_simulate, run_study
from .io import CorruptEnsembleFile, dumps_json
from .risk import InsufficientTailSample
from .verify import run_verification, sign_flipped_pairing

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _gammas(text: str) -> tuple[float, ...]:
    try:
        gs = tuple(float(g) for g in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad gamma list {text!r}") from None
    if not all(0 < g <= 1 for g in gs):
        raise argparse.ArgumentTypeError("gammas must lie in (0, 1]")
    return gs


def _named_file(text: str) -> tuple[str, str]:
    name, sep, path = text.partition("=")
    if not sep:
        name, path = os.path.splitext(os.path.basename(text))[0], text
    return name, path


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pathrisk", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: $PATHRISK_THREADS or 1)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", help="simulate an ensemble from a config file")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True, help="output file (.csv for CSV, otherwise PRSK1)")
    s.add_argument("--seed", type=int)
    s.add_argument("--ito-correction", action="store_true", default=None)
    s.add_argument("--p-jump", type=float, help="probability of an up-jump (kou)")

    r = sub.add_parser("report", help="tables and figure data from saved ensembles")
    r.add_argument("ensembles", nargs="+", type=_named_file, metavar="NAME=FILE")
    r.add_argument("--out", required=True, help="output directory")
    r.add_argument("--gamma", type=_gammas, default=DEFAULT_GAMMAS)

    st = sub.add_parser("study", help="simulate both models and report")
    st.add_argument("--out", required=True, help="output directory")
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--n-paths", type=int, default=1000)
    st.add_argument("--n-steps", type=int, default=1000)
    st.add_argument("--p-jump", type=float, default=0.5)
    st.add_argument("--ito-correction", action="store_true")
    st.add_argument("--gamma", type=_gammas, default=DEFAULT_GAMMAS)

    v = sub.add_parser("verify-duality", aliases=["verify"], help="randomised duality and axiom checks")
    v.add_argument("--instances", type=int, default=200)
    v.add_argument("--max-scenarios", type=int, default=4)
    v.add_argument("--max-grid", type=int, default=5)
    v.add_argument("--seed", type=int, default=7)
    v.add_argument("--out", help="write the JSON verdicts here as well as to stdout")
    v.add_argument("--inject-fault", choices=["pairing-sign"], help=argparse.SUPPRESS)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            cfg = load_config(args.config, seed=args.seed, ito_correction=args.ito_correction,
                              p=args.p_jump)
            sys.stdout.write(dumps_json(cmd_simulate(cfg, args.out, args.threads)))
        elif args.command == "report":
            report = cmd_report(dict(args.ensembles), args.out, args.gamma)
            sys.stdout.write(dumps_json({"table2": report["table2"], "orderings": report["orderings"]}))
        elif args.command == "study":
            report = run_study(args.out, seed=args.seed, n_paths=args.n_paths, n_steps=args.n_steps,
                               p=args.p_jump, ito_correction=args.ito_correction,
                               gammas=args.gamma, threads=args.threads)
            sys.stdout.write(dumps_json({"table2": report["table2"], "orderings": report["orderings"]}))
        else:
            if args.instances < 1 or args.max_scenarios < 1 or args.max_grid < 2:
                raise ConfigError("need instances >= 1, max-scenarios >= 1, max-grid >= 2")
            pair = sign_flipped_pairing if args.inject_fault == "pairing-sign" else None
            result = run_verification(args.instances, args.max_scenarios, args.max_grid,
                                      args.seed, pair=pair)
            text = dumps_json(result)
            if args.out:
                with open(args.out, "w") as fh:
                    fh.write(text)
            sys.stdout.write(text)
            return EXIT_OK if result["passed"] else EXIT_FAIL
    except (ConfigError, CorruptEnsembleFile, InsufficientTailSample) as exc:
        print(f"pathrisk: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"pathrisk: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
