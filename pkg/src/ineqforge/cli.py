"""Batch front door: certify, verify, convert, sweep, baseline.

Every JSON artifact carries a provenance block (tool version and a hash
of the parsed config) but no timestamps, so identical configs produce
byte-identical outputs.  Exit codes: 0 success, 1 input error, 2
certificate-soundness violations.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import __version__
from .baseline import lebesgue_baseline, lebesgue_beta, nash_constant, neumann_kernel_sup
from .certificates import (
    DEFAULT_EPS_GRID,
    PowerLaw,
    certificate_from_dict,
    certificate_to_dict,
    certify_distance,
    certify_levelset,
    certify_logdensity,
    certify_route_one,
    certify_route_two,
    classify,
)
from .conversions import FSobDescriptor, detect_dlsi, fsob_from_beta, rothaus_tighten
from .errors import IneqForgeError
from .lyapunov import ExpAV, ExpDist, PhiForm, fit_witness, make_witness
from .potential import spec_from_dict
from .serialize import (
    config_hash,
    read_json,
    write_json,
    write_report_csv,
    write_sweep_csv,
)
from .verify import build_battery, build_model, check_certificate


def worker_count() -> int:
    """Cap from INEQFORGE_THREADS; execution is currently serial."""
    cap = os.environ.get("INEQFORGE_THREADS")
    try:
        return max(1, min(int(cap), os.cpu_count() or 1)) if cap else 1
    except ValueError:
        return 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage errors, not argparse's 2
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_s_grid(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise ValueError("s-grid spec must be from:to:steps[:log]")
    lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    if not (0 < lo <= hi and steps >= 1):
        raise ValueError("s-grid must be strictly positive and increasing")
    if len(parts) == 4 and parts[3] == "log":
        return [float(v) for v in np.geomspace(lo, hi, steps)]
    return [float(v) for v in np.linspace(lo, hi, steps)]


def _parse_witness(text: str):
    kind, _, rest = text.partition(":")
    vals = [float(v) for v in rest.split(",")] if rest else []
    if kind == "expaV" and len(vals) == 1:
        return ExpAV(vals[0])
    if kind == "expdist" and len(vals) == 2:
        return ExpDist(vals[0], vals[1])
    raise ValueError("witness must be expaV:a or expdist:a,b")


def _parse_phi(text: str) -> PhiForm:
    kind, _, rest = text.partition(":")
    vals = rest.split(",")
    if len(vals) != 2:
        raise ValueError("phi must be abs:c1,p or pot:c1,q")
    coeff = None if vals[0] == "auto" else float(vals[0])
    expo = float(vals[1])
    if kind == "abs":
        return PhiForm("power_abs", coeff, expo)
    if kind == "pot":
        return PhiForm("power_V", coeff, expo)
    raise ValueError("phi kind must be abs or pot")


def _load_spec(arg: str):
    if arg.strip().startswith("{"):
        import json

        return spec_from_dict(json.loads(arg))
    return spec_from_dict(read_json(arg))


def _provenance(args_dict: dict) -> dict:
    return {"tool": "ineqforge", "version": __version__, "config_hash": config_hash(args_dict)}


def _cmd_certify(args) -> int:
    spec = _load_spec(args.potential)
    eps_grid = (
        tuple(float(v) for v in args.eps_grid.split(",")) if args.eps_grid else DEFAULT_EPS_GRID
    )
    s_max = args.s_max if args.s_max is not None else math.inf
    if args.route in ("main1", "main2", "levelset"):
        fam = _parse_witness(args.witness)
        if args.phi and args.r0:
            witness = make_witness(spec, fam, _parse_phi(args.phi), args.r0, b_const=args.b_const)
        else:
            cands = (
                (_parse_phi(args.phi),)
                if args.phi
                else (
                    PhiForm("power_abs", None, 2.0),
                    PhiForm("power_V", None, 1.0),
                    PhiForm("power_abs", None, 6.0),
                )
            )
            r0s = (args.r0,) if args.r0 else (1.0, 2.0, 3.0, 4.0)
            witness = fit_witness(spec, fam, r0s, cands)
        if args.route == "main1":
            cert = certify_route_one(spec, witness, eps_grid=eps_grid, s_max=s_max)
        elif args.route == "main2":
            cert = certify_route_two(spec, witness, s_max=s_max)
        else:
            cert = certify_levelset(spec, witness, eps_grid=eps_grid, s_max=s_max)
    elif args.route in ("logdensity1", "logdensity2"):
        variant = 1 if args.route.endswith("1") else 2
        p_lead, c_lead = spec.tail_power()
        q = args.eta_q if args.eta_q else max(2.0 * (p_lead - 1.0) / p_lead, 0.1)
        gamma = PowerLaw(
            p_lead * c_lead ** (1.0 / p_lead), (p_lead - 1.0) / p_lead
        )
        cert = certify_logdensity(
            spec, variant, PowerLaw(1.0, q), gamma, c=args.c, C=args.C,
            s_max=min(s_max, 1.0) if math.isfinite(s_max) else 1.0,
        )
    elif args.route == "distance":
        cert = certify_distance(
            spec, args.case, b=args.growth_b, b_prime=args.growth_b_prime,
            c=args.c, C=args.C, s_max=min(s_max, 1.0) if math.isfinite(s_max) else 1.0,
        )
    else:
        raise ValueError(f"unknown route {args.route!r}")
    if args.classify:
        cert = classify(cert)
    table_s = _parse_s_grid(args.table) if args.table else None
    doc = certificate_to_dict(cert, table_s)
    doc["provenance_tool"] = _provenance(vars(args))
    write_json(args.out, doc)
    return 0


def _cmd_verify(args) -> int:
    doc = read_json(args.cert)
    cert = certificate_from_dict(doc)
    spec = (
        _load_spec(args.potential)
        if args.potential
        else spec_from_dict(doc["provenance"]["inputs"]["potential"])
    )
    L, m = args.grid.split(":")
    model = build_model(spec, L=float(L), m=int(m))
    battery = build_battery(model)
    mode = args.mode or ("shape" if cert.is_unnormalized else "absolute")
    report = check_certificate(cert, model, battery, _parse_s_grid(args.s), mode=mode)
    out = report.to_dict()
    out["provenance_tool"] = _provenance(vars(args))
    write_json(args.out, out)
    if args.csv:
        write_report_csv(args.csv, report)
    return 0 if report.passed else 2


def _cmd_sweep(args) -> int:
    cert = certificate_from_dict(read_json(args.cert))
    if cert.rate is None:
        raise ValueError("certificate has no rate to sweep")
    rows = [(s, cert.rate(s)) for s in _parse_s_grid(args.s)]
    write_sweep_csv(args.out, rows)
    return 0


def _cmd_convert(args) -> int:
    if args.rothaus:
        cls, dls, cp = (float(v) for v in args.rothaus.split(":"))
        out = {
            "C_LS": cls,
            "D_LS": dls,
            "C_P": cp,
            "tight_C_LS": rothaus_tighten(cls, dls, cp),
        }
        out["provenance_tool"] = _provenance(vars(args))
        write_json(args.out, out)
        return 0
    cert = certificate_from_dict(read_json(args.cert))
    if cert.rate is None:
        raise ValueError("certificate has no rate")
    us = _parse_s_grid(args.u) if args.u else [float(v) for v in np.geomspace(1.0, 1e4, 25)]
    if args.detect_dlsi:
        samples = [(u, cert.rate(1.0 / u)) for u in us]  # beta as a function of u = 1/s
        out = detect_dlsi([(u, b) for u, b in samples if math.isfinite(b)])
        out["provenance_tool"] = _provenance(vars(args))
        write_json(args.out, out)
        return 0
    rows = [(u, fsob_from_beta(cert.rate, args.c1, args.c2, u)) for u in us]
    write_sweep_csv(args.out, rows, header="u,F")
    return 0


def _cmd_baseline(args) -> int:
    out: dict = {}
    if args.lebesgue:
        n, s = args.lebesgue.split(":")
        out["lebesgue_beta"] = {"n": int(n), "s": float(s), "value": lebesgue_beta(int(n), float(s))}
    if args.nash is not None:
        out["nash_constant"] = {"n": args.nash, "value": nash_constant(args.nash)}
    if args.neumann:
        parts = args.neumann.split(":")
        r, t = float(parts[0]), float(parts[1])
        tol = float(parts[2]) if len(parts) > 2 else 1e-15
        out["neumann_kernel_sup"] = {"r": r, "t": t, "value": neumann_kernel_sup(r, t, tol)}
    if not out:
        raise ValueError("nothing to compute: pass --lebesgue, --nash or --neumann")
    out["provenance_tool"] = _provenance(vars(args))
    write_json(args.out, out)
    return 0


def build_parser() -> _Parser:
    p = _Parser(prog="ineqforge", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("certify", help="assemble a rate certificate")
    c.add_argument("--potential", required=True, help="spec JSON path or inline JSON")
    c.add_argument(
        "--route",
        required=True,
        choices=["main1", "main2", "levelset", "logdensity1", "logdensity2", "distance"],
    )
    c.add_argument("--witness", default="expaV:0.5")
    c.add_argument("--phi", default=None, help="abs:c1,p or pot:c1,q (c1 may be 'auto')")
    c.add_argument("--r0", type=float, default=None)
    c.add_argument("--b-const", dest="b_const", type=float, default=None)
    c.add_argument("--eps-grid", dest="eps_grid", default=None, help="comma list in (0,1)")
    c.add_argument("--s-max", dest="s_max", type=float, default=None)
    c.add_argument("--eta-q", dest="eta_q", type=float, default=None)
    c.add_argument("--case", type=int, default=1, choices=[1, 2, 3, 4])
    c.add_argument("--growth-b", dest="growth_b", type=float, default=None)
    c.add_argument("--growth-b-prime", dest="growth_b_prime", type=float, default=None)
    c.add_argument("--c", type=float, default=1.0)
    c.add_argument("--C", type=float, default=1.0)
    c.add_argument("--classify", action="store_true")
    c.add_argument("--table", default=None, help="sample the rate onto from:to:steps[:log]")
    c.add_argument("--out", required=True)
    c.set_defaults(fn=_cmd_certify)

    v = sub.add_parser("verify", help="check a certificate against the oracle")
    v.add_argument("--cert", required=True)
    v.add_argument("--potential", default=None)
    v.add_argument("--grid", default="8:2001", help="L:m")
    v.add_argument("--s", default="0.01:1:20:log")
    v.add_argument("--mode", choices=["absolute", "shape"], default=None)
    v.add_argument("--out", required=True)
    v.add_argument("--csv", default=None)
    v.set_defaults(fn=_cmd_verify)

    w = sub.add_parser("sweep", help="sample (s, beta(s)) to CSV")
    w.add_argument("--cert", required=True)
    w.add_argument("--s", default="0.01:1:20:log")
    w.add_argument("--out", required=True)
    w.set_defaults(fn=_cmd_sweep)

    k = sub.add_parser("convert", help="F-Sobolev conversions and DLSI detection")
    k.add_argument("--cert", default=None)
    k.add_argument("--to", choices=["fsob"], default="fsob")
    k.add_argument("--u", default=None, help="from:to:steps[:log]")
    k.add_argument("--c1", type=float, default=1.0)
    k.add_argument("--c2", type=float, default=1.0)
    k.add_argument("--detect-dlsi", dest="detect_dlsi", action="store_true")
    k.add_argument("--rothaus", default=None, help="C_LS:D_LS:C_P")
    k.add_argument("--out", required=True)
    k.set_defaults(fn=_cmd_convert)

    b = sub.add_parser("baseline", help="reference-measure constants")
    b.add_argument("--lebesgue", default=None, help="n:s")
    b.add_argument("--nash", type=int, default=None)
    b.add_argument("--neumann", default=None, help="r:t[:tol]")
    b.add_argument("--out", required=True)
    b.set_defaults(fn=_cmd_baseline)
    return p


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (IneqForgeError, ValueError, OSError, KeyError) as exc:
        print(f"ineqforge: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch())
