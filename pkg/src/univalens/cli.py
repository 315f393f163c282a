"""Command-line front end.

Exit codes: 0 when every requested check is satisfied, 1 when one is
violated, 2 on an input or evaluation error.  The JSON report is written on
exits 0 and 1.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
import time

import numpy as np

from . import __version__
from .criteria import CriterionSpec, FirstCenter, GridSpec, Variant, check_criterion, resolve_preset
from .errors import UnivalensError
from .expr import class_a_check, parse
from .loewner import DEFAULT_TIMES, ChainParams, verify_chain
from .qcext import ExtensionMap, check_qc_criterion, estimate_k, univalence_evidence
from .quad import integral_operator
from .report import (
    chain_section,
    cnum,
    condition_section,
    dumps,
    evidence_section,
    new_report,
    real,
)
from .svg import SAMPLES_PER_CURVE, mapped_mesh, to_svg

EXAMPLE1_F = "z/(1 - z^2/2)"
EXIT_OK, EXIT_VIOLATED, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Bad flag value; the message names the flag."""


_COMPLEX_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def parse_complex(text: str) -> complex:
    """Parse ``a``, ``bi``, ``a+bi`` or ``a-bi`` (``j`` is accepted for ``i``)."""
    s = text.strip().replace(" ", "").replace("j", "i")
    if not s:
        raise ValueError("empty complex value")
    if s.endswith("i"):
        body = s[:-1]
        # split at the last sign that is not part of an exponent
        cut = max((k for k, c in enumerate(body) if c in "+-" and k > 0 and body[k - 1] not in "eE"), default=0)
        re_part, im_part = (body[:cut], body[cut:]) if cut else ("", body)
        if im_part in ("", "+", "-"):
            im_part += "1"
        if re_part and not _COMPLEX_RE.match(re_part) or not _COMPLEX_RE.match(im_part):
            raise ValueError(f"cannot parse complex value {text!r}")
        return complex(float(re_part) if re_part else 0.0, float(im_part))
    if not _COMPLEX_RE.match(s):
        raise ValueError(f"cannot parse complex value {text!r}")
    return complex(float(s), 0.0)


def parse_grid(text: str) -> GridSpec:
    keys = {"nr": ("n_radii", int), "ntheta": ("n_angles", int), "rmin": ("r_min", float), "rmax": ("r_max", float)}
    values = {}
    for item in filter(None, text.split(",")):
        name, sep, value = item.partition("=")
        if not sep or name.strip() not in keys:
            raise ValueError(f"unknown grid entry {item!r}; use nr=,ntheta=,rmin=,rmax=")
        field, kind = keys[name.strip()]
        values[field] = kind(value)
    return GridSpec(**values)


def parse_times(text: str) -> tuple:
    ts = tuple(float(v) for v in text.split(",") if v.strip())
    if not ts or any(t < 0 or not np.isfinite(t) for t in ts):
        raise ValueError("times must be a non-empty list of finite reals >= 0")
    return ts


def parse_annulus(text: str) -> tuple:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise ValueError("annulus must be written rin:rout")
    r_in, r_out = float(lo), float(hi)
    if not 1 < r_in < r_out:
        raise ValueError("annulus must satisfy 1 < rin < rout")
    return r_in, r_out


def _flag(name, parser):
    def convert(text):
        try:
            return parser(text)
        except (ValueError, UnivalensError) as exc:
            raise argparse.ArgumentTypeError(f"{name}: {exc}") from None
    convert.__name__ = name
    return convert


def _positive_int(text):
    n = int(text)
    if n < 1:
        raise ValueError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="univalens", description="Univalence and quasiconformal-extension checks")
    parser.add_argument("--version", action="version", version=f"univalens {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--f", required=True, help="analytic function of z with f(0)=0, f'(0)=1")
    shared.add_argument("--g", help="expression or preset name (fprime, fsecond, ...)")
    shared.add_argument("--h", help="expression or preset name")
    shared.add_argument("--alpha", type=_flag("--alpha", parse_complex), default=0j)
    shared.add_argument("--beta", type=_flag("--beta", parse_complex), default=1 + 0j)
    shared.add_argument("--m", type=float, default=1.0)
    shared.add_argument("--k", type=float, default=None)
    shared.add_argument("--variant", default="general", help="general, becker, corollary-c34, ...")
    shared.add_argument("--first-center", choices=("proof", "printed"), default="proof")
    shared.add_argument("--grid", type=_flag("--grid", parse_grid), default=GridSpec())
    shared.add_argument("--out", help="write the JSON report here instead of standard output")
    shared.add_argument("--json", action="store_true", help="also print the JSON report when --out is given")
    shared.add_argument("--timing", action="store_true", help="record wall time (makes output non-reproducible)")

    sub.add_parser("check", parents=[shared], help="evaluate both criterion conditions")
    p_chain = sub.add_parser("chain", parents=[shared], help="verify the Loewner chain transfer function")
    p_chain.add_argument("--t", type=_flag("--t", parse_times), default=DEFAULT_TIMES)
    p_ext = sub.add_parser("extend", parents=[shared], help="measure the Beltrami coefficient of the extension")
    p_ext.add_argument("--annulus", type=_flag("--annulus", parse_annulus), default=(1.001, 3.0))
    p_ext.add_argument("--k-estimate", action="store_true", help="estimate k as the sup of |mu| on the annulus")
    p_map = sub.add_parser("map", parents=[shared], help="render images of a polar mesh under f and F_beta")
    p_map.add_argument("--rings", type=_flag("--rings", _positive_int), default=8)
    p_map.add_argument("--rays", type=_flag("--rays", _positive_int), default=16)
    p_map.add_argument("--svg", required=True)

    p_rep = sub.add_parser("reproduce", help="rerun a worked example")
    p_rep.add_argument("example", choices=("example1",))
    p_rep.add_argument("--outdir", default="example1_out")
    p_rep.add_argument("--json", action="store_true")
    p_rep.add_argument("--timing", action="store_true")
    return parser


# -- helpers -----------------------------------------------------------------


def _spec_from_args(args) -> CriterionSpec:
    try:
        variant = Variant.from_name(args.variant)
    except ValueError as exc:
        raise InputError(f"--variant: {exc}") from None
    first = FirstCenter.PROOF_FORM if args.first_center == "proof" else FirstCenter.PRINTED_FORM
    try:
        return CriterionSpec(args.m, args.alpha, args.beta, variant, args.g, args.h, first, args.k)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _parse_f(text):
    try:
        f = parse(text)
    except UnivalensError as exc:
        raise InputError(f"--f: {exc}") from None
    report = class_a_check(f)
    if not report.is_class_a:
        raise InputError(f"--f: f(0)={report.f_at_0:.3g}, f'(0)={report.fprime_at_0:.3g}; need f(0)=0, f'(0)=1")
    return f


def _spec_echo(args, resolved=None, **extra) -> dict:
    grid = args.grid
    echo = {
        "f": args.f,
        "g": args.g,
        "h": args.h,
        "alpha": cnum(args.alpha),
        "beta": cnum(args.beta),
        "m": real(args.m),
        "k": real(args.k),
        "variant": Variant.from_name(args.variant).value,
        "first_center": args.first_center,
        "grid": {"n_radii": grid.n_radii, "n_angles": grid.n_angles, "r_min": grid.r_min, "r_max": grid.r_max},
        "resolved": None,
        "t": None,
        "annulus": None,
        "rings": None,
        "rays": None,
    }
    if resolved is not None:
        rs = resolved.spec
        echo["resolved"] = {
            "g": str(resolved.g),
            "h": str(resolved.h),
            "alpha": cnum(rs.alpha),
            "beta": cnum(rs.beta),
            "m": real(rs.m),
        }
    echo.update(extra)
    return echo


def _emit(report: dict, out: str | None, also_stdout: bool) -> None:
    text = dumps(report)
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    if not out or also_stdout:
        sys.stdout.write(text)


def _resolve(args, f):
    spec = _spec_from_args(args)
    try:
        return spec, resolve_preset(spec, f)
    except ValueError as exc:
        raise InputError(str(exc)) from None


# -- commands ----------------------------------------------------------------


def cmd_check(args, report_base):
    f = _parse_f(args.f)
    spec, resolved = _resolve(args, f)
    if spec.k is not None:
        result = check_qc_criterion(spec, f, args.grid)
    else:
        result = check_criterion(spec, f, args.grid)
    report = report_base("check", _spec_echo(args, resolved))
    report["condition1"] = condition_section(result.first)
    report["condition2"] = condition_section(result.main)
    ok = result.overall
    if spec.k is not None:
        report["extension"] = {
            "annulus": [1.001, 5.0],
            "k": real(spec.k),
            "k_estimate": real(result.k_estimate),
            "boundary_jump": None,
            "cross_validated": result.cross_validated,
            "passed": bool(ok),
        }
    return report, ok


def cmd_chain(args, report_base):
    f = _parse_f(args.f)
    _, resolved = _resolve(args, f)
    params = ChainParams.from_resolved(f, resolved)
    rep = verify_chain(params, args.grid.points().reshape(-1), args.t, args.k)
    report = report_base("chain", _spec_echo(args, resolved, t=[float(t) for t in args.t]))
    report["chain"] = chain_section(rep, args.t)
    return report, rep.passed


def boundary_jump(emap: ExtensionMap, n: int = 256, eps: float = 1e-9) -> float:
    """Largest gap between the extension just inside and just outside |z| = 1."""
    u = np.exp(2j * np.pi * np.arange(n) / n)
    return float(np.max(np.abs(emap((1 + eps) * u) - emap((1 - eps) * u))))


def cmd_extend(args, report_base):
    f = _parse_f(args.f)
    _, resolved = _resolve(args, f)
    emap = ExtensionMap(ChainParams.from_resolved(f, resolved))
    jump = boundary_jump(emap)
    k_est = estimate_k(emap, args.annulus) if (args.k_estimate or args.k is not None) else None
    passed = None
    if k_est is not None:
        passed = k_est < 1 if args.k is None else k_est <= args.k + 5e-3
    report = report_base("extend", _spec_echo(args, resolved, annulus=list(args.annulus)))
    report["extension"] = {
        "annulus": list(args.annulus),
        "k": real(args.k),
        "k_estimate": real(k_est),
        "boundary_jump": real(jump),
        "cross_validated": None,
        "passed": passed,
    }
    return report, passed is not False


def _render(f, beta, rings, rays, path, panels=("f", "F_beta")):
    scenes = []
    if "f" in panels:
        scenes.append(mapped_mesh(f, rings, rays, title="f"))
    if "F_beta" in panels:
        scenes.append(mapped_mesh(lambda z: integral_operator(f, beta, z), rings, rays, title="F_beta"))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(to_svg(*scenes))
    return {"path": os.path.basename(path), "panels": list(panels), "rings": rings, "rays": rays,
            "samples_per_curve": SAMPLES_PER_CURVE}


def cmd_map(args, report_base):
    f = _parse_f(args.f)
    figure = _render(f, args.beta, args.rings, args.rays, args.svg)
    report = report_base("map", _spec_echo(args, rings=args.rings, rays=args.rays))
    report["figures"] = [figure]
    return report, True


def reproduce_example1(outdir: str, report_base):
    """Rerun the worked example: c34 with beta=2, m=1 for f = z/(1 - z^2/2)."""
    os.makedirs(outdir, exist_ok=True)
    f = parse(EXAMPLE1_F)
    spec = CriterionSpec(m=1, beta=2, variant=Variant.COROLLARY_C34)
    result = check_criterion(spec, f)
    fbeta = lambda z: integral_operator(f, 2, z)  # noqa: E731
    evidence = univalence_evidence(fbeta)
    figures = [
        _render(f, 2, 8, 16, os.path.join(outdir, "example1_f.svg"), panels=("f",)),
        _render(f, 2, 8, 16, os.path.join(outdir, "example1_F2.svg"), panels=("F_beta",)),
    ]
    c1, c2 = result.first, result.main
    assertions = [
        {"name": "condition1 sup = 0.5 within 1e-6", "passed": bool(abs(c1.sup_estimate - 0.5) <= 1e-6),
         "detail": f"sup = {c1.sup_estimate:.12f}"},
        {"name": "condition1 satisfied", "passed": bool(c1.satisfied), "detail": f"bound = {c1.bound}"},
        {"name": "condition2 sup <= 24/27 + 1e-6", "passed": bool(c2.sup_estimate <= 24 / 27 + 1e-6),
         "detail": f"sup = {c2.sup_estimate:.12f}"},
        {"name": "condition2 satisfied", "passed": bool(c2.satisfied), "detail": f"bound = {c2.bound}"},
        {"name": "univalence evidence for F_2", "passed": bool(evidence.passed),
         "detail": f"min |F_2'| = {evidence.min_abs_derivative:.6g}"},
    ]
    echo = {
        "f": EXAMPLE1_F, "g": None, "h": None, "alpha": cnum(0), "beta": cnum(2), "m": 1.0, "k": None,
        "variant": Variant.COROLLARY_C34.value, "first_center": "proof",
        "grid": {"n_radii": 64, "n_angles": 256, "r_min": GridSpec().r_min, "r_max": GridSpec().r_max},
        "resolved": None, "t": None, "annulus": None, "rings": 8, "rays": 16,
    }
    rs = result.resolved.spec
    echo["resolved"] = {"g": str(result.resolved.g), "h": str(result.resolved.h),
                        "alpha": cnum(rs.alpha), "beta": cnum(rs.beta), "m": real(rs.m)}
    report = report_base("reproduce example1", echo)
    report["condition1"] = condition_section(c1)
    report["condition2"] = condition_section(c2)
    report["evidence"] = evidence_section(evidence)
    report["figures"] = figures
    report["assertions"] = assertions
    return report, all(a["passed"] for a in assertions)


COMMANDS = {"check": cmd_check, "chain": cmd_chain, "extend": cmd_extend, "map": cmd_map}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()

    def report_base(command, echo):
        return new_report(__version__, command, echo)

    try:
        if args.command == "reproduce":
            report, ok = reproduce_example1(args.outdir, report_base)
            out = os.path.join(args.outdir, "example1.json")
        else:
            report, ok = COMMANDS[args.command](args, report_base)
            out = args.out
    except InputError as exc:
        print(f"univalens: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (UnivalensError, ValueError, ArithmeticError) as exc:
        print(f"univalens: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.timing:
        report["wall_time_ms"] = int(round(1000 * (time.perf_counter() - start)))
    _emit(report, out, args.json)
    if not ok and report["assertions"]:
        for a in report["assertions"]:
            if not a["passed"]:
                print(f"univalens: assertion failed: {a['name']} ({a['detail']})", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VIOLATED


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
