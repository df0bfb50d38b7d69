"""Command-line frontend: reduce expressions, run identity suites,
inspect presets.

Exit codes: 0 all checks pass, 1 any identity fails, 2 usage or
expression errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Callable

from . import hdeform, hopf, presets, supermatrix
from .algebra import TensorElement
from .errors import ExpressionError, UnknownPreset, UnknownSuite, Z3HopfError
from .parsing import parse_expression, presentation_from_json, presentation_to_json
from .report import CheckReport, IdentityResult
from .rewrite import (
    check_homogeneity,
    check_local_confluence,
    check_strategy_independence_exhaustive,
)

CLI_PRESETS = presets.PRESET_NAMES


def _suite_confluence(opts) -> list[CheckReport]:
    reports = []
    targets = [(n, presets.build_preset(n)) for n in CLI_PRESETS]
    if opts.preset_file:
        targets.append(("file", opts.preset_file_presentation))
    for _, p in targets:
        q = _apply_drops(p, opts)
        reports.append(check_strategy_independence_exhaustive(q, max_len=min(opts.max_len, 4)))
        reports.append(check_local_confluence(q, max_len=opts.max_len, trials=opts.trials, seed=opts.seed))
    return reports


def _suite_homogeneity(opts) -> list[CheckReport]:
    reports = []
    for n in CLI_PRESETS:
        reports.append(check_homogeneity(presets.build_preset(n)))
    if opts.preset_file:
        reports.append(check_homogeneity(opts.preset_file_presentation))
    return reports


def _apply_drops(p, opts):
    drops = [d for d in opts.drop_rule if "," in d]
    if not drops:
        return p
    pairs = [tuple(d.split(",", 1)) for d in drops]
    pairs = [pair for pair in pairs if p.has_gen(pair[0]) and p.has_gen(pair[1])]
    if not pairs:
        return p
    return p.copy(p.name + "-ablated", drop_pairs=pairs, free_instead=True)


def _gl(opts):
    return opts.preset_file_presentation if opts.preset_file else presets.build_preset("gl")


SUITES: dict[str, Callable] = {
    "derive-relations": lambda opts: presets.covariance_suite(),
    "product-closure": lambda opts: [
        presets.check_product_closure(True),
        presets.check_product_closure(False),
    ],
    "transpose": lambda opts: supermatrix.check_supertranspose(_gl(opts)),
    "inverse": lambda opts: supermatrix.check_inverse_identity(_gl(opts)),
    "sdet": lambda opts: supermatrix.check_sdet_commutation(_gl(opts)),
    "delta": lambda opts: supermatrix.check_delta_relations(_gl(opts)),
    "mixed": lambda opts: supermatrix.check_mixed_relations(_gl(opts)),
    "membership": lambda opts: supermatrix.check_inverse_membership(_gl(opts)),
    "hopf-coassoc": lambda opts: hopf.check_coassociativity(_gl(opts)),
    "hopf-counit": lambda opts: hopf.check_counit(_gl(opts)),
    "hopf-antipode": lambda opts: hopf.check_antipode(_gl(opts)),
    "hopf-homomorphism": lambda opts: _hopf_homomorphism(opts),
    "h-deformation": lambda opts: hdeform.h_deformation_suite(tuple(opts.drop_rule)),
    "confluence": _suite_confluence,
    "homogeneity": _suite_homogeneity,
}

SUITE_ALIASES = {"derive-12": "derive-relations"}


def _hopf_homomorphism(opts) -> list[CheckReport]:
    p = _gl(opts)
    reports = [
        hopf.check_coproduct_multiplicative(p, seed=opts.seed),
        hopf.check_morphism_preserves_relations("coproduct", p),
        hopf.check_morphism_preserves_relations("counit", p),
        hopf.check_morphism_preserves_relations("antipode-graded", p),
    ]
    # the plain convention is measured, not asserted: its outcomes are notes
    plain = hopf.check_morphism_preserves_relations("antipode-plain", p)
    survey = CheckReport("hopf-antipode-plain-survey", plain.presentation)
    survey.elapsed_ms = plain.elapsed_ms
    survey.add(IdentityResult("plain-convention outcomes recorded below", "pass"))
    for r in plain.identities:
        note = f"{r.name}: {r.status}"
        if r.residual:
            note += f" (residual {r.residual})"
        survey.notes.append(note)
    reports.append(survey)
    return reports


def expand_suites(names: list[str]) -> list[str]:
    out: list[str] = []
    for raw in names:
        for name in raw.split(","):
            name = name.strip()
            if not name:
                continue
            name = SUITE_ALIASES.get(name, name)
            if name == "all":
                out.extend(sorted(SUITES))
            elif name in SUITES:
                out.append(name)
            else:
                raise UnknownSuite(
                    f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))} or all"
                )
    seen: set[str] = set()
    unique = []
    for n in out:
        if n not in seen:
            seen.add(n)
            unique.append(n)
    return sorted(unique)


def run_suites(names: list[str], opts) -> list[CheckReport]:
    reports: list[CheckReport] = []
    for name in expand_suites(names):
        try:
            result = SUITES[name](opts)
        except Z3HopfError as exc:
            rep = CheckReport(name, "error")
            rep.add(IdentityResult(f"suite execution", "fail", f"{type(exc).__name__}: {exc}"))
            result = rep
        if isinstance(result, CheckReport):
            reports.append(result)
        else:
            reports.extend(result)
    return reports


def _use_color(stream) -> bool:
    env = os.environ.get("Z3HOPF_COLOR")
    if env is not None:
        return env.lower() in ("1", "true", "yes", "on")
    return hasattr(stream, "isatty") and stream.isatty()


def _emit(text: str, opts) -> None:
    if opts.out:
        with open(opts.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _build_argparser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="z3hopf",
        description="Exact symbolic checks for a Z3-graded quantum supergroup",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    red = sub.add_parser("reduce", help="normalize an expression in a preset")
    red.add_argument("expression")
    red.add_argument("--preset", default="gl", help=f"one of {', '.join(CLI_PRESETS)}")
    red.add_argument("--preset-file", default=None, help="presentation JSON file")
    red.add_argument("--out", default=None)

    chk = sub.add_parser("check", help="run identity suites")
    chk.add_argument("--suite", action="append", required=True, help="suite name(s), comma separated, or all")
    chk.add_argument("--seed", type=int, default=0)
    chk.add_argument("--max-len", type=int, default=6, dest="max_len")
    chk.add_argument("--trials", type=int, default=1000)
    chk.add_argument("--format", choices=("json", "text"), default="text")
    chk.add_argument("--drop-rule", action="append", default=[], dest="drop_rule",
                     help="ablations: h3, theta-h-rule, theta-h-correction, or g,b style pairs")
    chk.add_argument("--preset-file", default=None, help="replace the supergroup presentation")
    chk.add_argument("--out", default=None)

    pre = sub.add_parser("presets", help="list or dump catalog presentations")
    psub = pre.add_subparsers(dest="presets_command", required=True)
    psub.add_parser("list")
    dump = psub.add_parser("dump")
    dump.add_argument("name")
    dump.add_argument("--out", default=None)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = _build_argparser()
    try:
        opts = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0

    if not hasattr(opts, "out"):
        opts.out = None

    try:
        if getattr(opts, "preset_file", None):
            with open(opts.preset_file) as fh:
                opts.preset_file_presentation = presentation_from_json(fh.read())
        if opts.command == "reduce":
            if opts.preset_file:
                p = opts.preset_file_presentation
            else:
                p = presets.build_preset(opts.preset)
            value = parse_expression(opts.expression, p)
            if isinstance(value, TensorElement):
                _emit(str(value.normalize()), opts)
            else:
                _emit(str(p.normalize(value)), opts)
            return 0
        if opts.command == "presets":
            if opts.presets_command == "list":
                _emit("\n".join(CLI_PRESETS), opts)
            else:
                _emit(presentation_to_json(presets.build_preset(opts.name)), opts)
            return 0
        # check
        reports = run_suites(opts.suite, opts)
        if opts.format == "json":
            _emit(json.dumps([r.to_dict() for r in reports], indent=2), opts)
        else:
            color = _use_color(sys.stdout) and not opts.out
            _emit("\n".join(r.render_text(color) for r in reports), opts)
        return 0 if all(r.passed for r in reports) else 1
    except (ExpressionError, UnknownPreset, UnknownSuite, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"z3hopf: error: {exc}", file=sys.stderr)
        return 2
    except Z3HopfError as exc:
        print(f"z3hopf: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
