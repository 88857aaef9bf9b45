"""``faradayct`` command line.

Machine-readable JSON goes to standard output (or ``--output``); a short
human summary goes to standard error. Exit codes: 0 success, 1 verification
failure, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .cavity import (
    PRESET_DIR_ENV,
    CavityParams,
    cavity_preset,
    faraday_phases,
    load_cavity_params,
    reflection,
    reflection_empty,
)
from .errors import FaradayCTError, TableFormatError
from .protocol.results import run_json, sample_json
from .protocol.runner import run
from .protocol.spec import FAMILIES, build
from .protocol.tables import TABLE_NUMBERS, verify_tables
from .resources import (
    DEFAULT_LOSS_PRESET,
    expected_event_period,
    load_loss_model,
    loss_preset,
    monte_carlo_yield,
    success_probability,
    success_probability_exact,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(doc: dict, output: str | None) -> None:
    text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


# --- cavity parameters -------------------------------------------------------

_CAVITY_FLAGS = ("omega_c", "omega_0", "omega_p", "kappa", "gamma", "lambda_")


def _add_cavity_args(p: argparse.ArgumentParser, default_preset: str | None) -> None:
    g = p.add_argument_group("cavity")
    g.add_argument("--preset", default=default_preset,
                   help=f"cavity preset name (searched in ${PRESET_DIR_ENV} first)")
    g.add_argument("--params", metavar="FILE", help="cavity parameters as JSON")
    for name in _CAVITY_FLAGS:
        flag = "--" + name.rstrip("_").replace("_", "-")
        g.add_argument(flag, dest=name, type=float, default=None)


def _cavity_from_args(args) -> CavityParams | None:
    overrides = {k: getattr(args, k) for k in _CAVITY_FLAGS if getattr(args, k) is not None}
    if args.params:
        base = load_cavity_params(args.params)
    elif args.preset:
        base = cavity_preset(args.preset)
    elif overrides:
        base = cavity_preset("standard-tuning")
    else:
        return None
    return base.replace(**overrides) if overrides else base


# --- payload -------------------------------------------------------------------


def _payload(args) -> tuple[complex, complex]:
    if args.alpha == "random" or args.beta == "random":
        rng = np.random.default_rng(args.seed)
        v = rng.normal(size=4)
        a, b = complex(v[0], v[1]), complex(v[2], v[3])
        n = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
        return a / n, b / n
    try:
        a, b = complex(args.alpha.replace(" ", "")), complex(args.beta.replace(" ", ""))
    except ValueError as exc:
        raise UsageError(f"cannot read amplitude: {exc}") from None
    if args.normalize:
        n = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
        if n == 0:
            raise UsageError("alpha and beta are both zero")
        a, b = a / n, b / n
    return a, b


# --- subcommands ---------------------------------------------------------------


def cmd_phases(args) -> int:
    params = _cavity_from_args(args)
    r, r0 = reflection(params), reflection_empty(params)
    ph = faraday_phases(params)
    doc = {
        "cavity": params.to_dict(),
        "phi": ph.phi,
        "phi0": ph.phi0,
        "theta_minus": ph.theta_minus,
        "theta_plus": ph.theta_plus,
        "abs_r": abs(r),
        "abs_r0": abs(r0),
        "lossless": ph.is_lossless,
    }
    _emit(doc, args.output)
    _note(f"phi = {ph.phi:.12f}, phi0 = {ph.phi0:.12f}, |r| = {abs(r):.12f}, |r0| = {abs(r0):.12f}")
    if not ph.is_lossless:
        _note("warning: |r| < 1; the strict gate layer rejects these parameters "
              "(use --loss-mode renormalize in `run`)")
    return EXIT_OK


def _build_from_args(args):
    payload = _payload(args)
    kwargs = {}
    params = _cavity_from_args(args)
    if params is not None:
        kwargs["phases"] = params
    if args.protocol == "ct-entangled" and args.controls > 2:
        kwargs["extended"] = True
    spec = build(args.protocol, args.controls, payload, **kwargs)
    if args.loss_mode != "strict":
        spec = replace(spec, loss_mode=args.loss_mode)
    return spec


def cmd_run(args) -> int:
    spec = _build_from_args(args)
    _, records = run(spec, require_correction=args.loss_mode == "strict")
    if args.mode == "sample":
        if args.samples < 1:
            raise UsageError("--samples must be >= 1")
        doc = sample_json(spec, records, args.samples, args.seed)
        _note(f"{spec.name}: {args.samples} sampled shot(s), seed {args.seed}")
    else:
        doc = run_json(spec, records)
        worst = min(r.corrected_payload_fidelity for r in records)
        _note(f"{spec.name}: {len(records)} branches, minimum corrected fidelity {worst:.12f}")
    _emit(doc, args.output)
    return EXIT_OK


def cmd_sample(args) -> int:
    args.mode = "sample"
    return cmd_run(args)


def cmd_verify_tables(args) -> int:
    if args.file:
        if not args.family:
            raise UsageError("--file needs --family")
        reports = [verify_tables(Path(args.file), family=args.family, errata={})]
    else:
        reports = [verify_tables(n) for n in (args.table or TABLE_NUMBERS)]
    ok = all(r.ok for r in reports)
    _emit({"ok": ok, "reports": [r.to_dict() for r in reports]}, args.output)
    for r in reports:
        _note(r.summary())
        for row in r.rows:
            if not row.match:
                tag = "allowlisted" if row.allowlisted else "MISMATCH"
                _note(f"  {tag} row {row.index}: {row.note}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_resources(args) -> int:
    model = load_loss_model(args.model) if args.model else loss_preset(args.preset)
    if args.paths is not None:
        model = model.with_paths(args.paths)
    p_exact = success_probability_exact(model)
    period = expected_event_period(model)
    doc = {
        "model": model.to_dict(),
        "success_probability": success_probability(model),
        "success_probability_exact": f"{p_exact.numerator}/{p_exact.denominator}",
        "expected_event_period_s": None if math.isinf(period) else period,
    }
    if args.monte_carlo:
        y = monte_carlo_yield(model, trials=args.monte_carlo, seed=args.seed)
        p = float(p_exact)
        doc["monte_carlo"] = {
            "trials": y.trials,
            "successes": y.successes,
            "rate": y.rate,
            "sigma": y.sigma(p),
            "within_3_sigma": y.within(p),
            "seed": args.seed,
        }
    _emit(doc, args.output)
    if math.isinf(period):
        shown = "never"
    elif period >= 60:
        shown = f"{period:.4g} s ({period / 60:.3g} min)"
    else:
        shown = f"{period:.4g} s"
    _note(f"P = {float(p_exact):.6g}; one success every {shown}")
    return EXIT_OK


# --- parser --------------------------------------------------------------------


def _add_run_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--protocol", choices=FAMILIES, required=True)
    p.add_argument("--controls", type=int, default=1)
    p.add_argument("--alpha", default="random", help='complex amplitude, e.g. "0.6" or "0.8j", or "random"')
    p.add_argument("--beta", default="random")
    p.add_argument("--normalize", action="store_true", help="rescale alpha, beta to unit norm")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--loss-mode", choices=("strict", "renormalize"), default="strict")
    _add_cavity_args(p, default_preset=None)
    p.add_argument("--output", "-o")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="faradayct", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phases", help="reflection phases for a cavity configuration")
    _add_cavity_args(p, default_preset="standard-tuning")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_phases)

    p = sub.add_parser("run", help="run a protocol and list every branch")
    _add_run_args(p)
    p.add_argument("--mode", choices=("enumerate", "sample"), default="enumerate")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sample", help="draw measurement outcomes of a protocol")
    _add_run_args(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify-tables", help="check printed outcome tables against simulation")
    p.add_argument("--table", type=int, action="append", choices=TABLE_NUMBERS)
    p.add_argument("--file", help="a table file in the bundled JSON layout")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_verify_tables)

    p = sub.add_parser("resources", help="success probability and event period under loss")
    p.add_argument("--preset", default=DEFAULT_LOSS_PRESET)
    p.add_argument("--model", metavar="FILE", help="loss model as JSON")
    p.add_argument("--paths", type=int, help="override n_photon_paths")
    p.add_argument("--monte-carlo", type=int, metavar="TRIALS")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_resources)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, FaradayCTError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        kind = "parse error" if isinstance(exc, (TableFormatError, json.JSONDecodeError)) else "error"
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        _note(f"faradayct: {kind}: {msg}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
