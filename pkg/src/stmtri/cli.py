"""Command-line surface: parameter tables, curve sweeps, verification
commands, and machine-readable output.

Subcommands
-----------
critical-masses   window edges of an odd sector
s-curve           sweep of the resonance exponent over a mass range
nu                the tail-coupling constant by both representations
kernel-check      residual of the operator's formal zero mode
bound             the explicit lower bound for an extension triple
schur             coercivity constants and their maximizer
form-eval         evaluate the shifted sector form on a charge

Global flags select tolerances, output format (csv or json), an optional
plain-text key=value config file, a resonance-exponent cache, and the
Monte-Carlo seed.  stdout carries data only; diagnostics go to stderr.
Exit codes: 0 success, 2 domain/regime error, 3 non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__, criticality, forms, gamma0
from .charges import (ExtensionParams, GaussianTimesK, PowerLawCharge,
                      RadialGridCharge, SectorCharge)
from .errors import DomainError, NonConvergedError, RepresentationMismatchError
from .quad import QuadSpec
from .specfun import SectorIndex

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_NONCONVERGED = 3


@dataclass
class RunConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000
    mc_seed: int = 20260810
    mc_samples: int = 10_000_000
    format: str = "json"
    cache: str = ""

    def spec(self) -> QuadSpec:
        return QuadSpec(rel_tol=self.rel_tol, abs_tol=self.abs_tol,
                        max_subdivisions=self.max_subdivisions)


_CONFIG_CASTS = {
    "rel_tol": float,
    "abs_tol": float,
    "max_subdivisions": int,
    "mc_seed": int,
    "mc_samples": int,
    "format": str,
    "cache": str,
}


def load_config(path: str) -> dict:
    """Plain text key=value lines; '#' starts a comment."""
    out: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected key=value, got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _CONFIG_CASTS:
                raise DomainError(f"{path}:{lineno}: unknown config key {key!r}")
            out[key] = _CONFIG_CASTS[key](value)
    return out


@dataclass
class OutputRecord:
    command: str
    inputs: dict
    results: dict
    tolerances: dict
    flags: dict = field(default_factory=dict)
    version: str = __version__

    def as_obj(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "tolerances": self.tolerances,
            "flags": self.flags,
            "version": self.version,
        }


def _tolerances(cfg: RunConfig) -> dict:
    return {"rel_tol": cfg.rel_tol, "abs_tol": cfg.abs_tol,
            "max_subdivisions": cfg.max_subdivisions}


def _fmt_cell(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit_record(rec: OutputRecord, cfg: RunConfig, stream) -> None:
    if cfg.format == "json":
        json.dump(rec.as_obj(), stream, indent=2, sort_keys=False)
        stream.write("\n")
        return
    writer = csv.writer(stream, lineterminator="\n")
    stream.write(f"# command={rec.command} version={rec.version}\n")
    stream.write(f"# tolerance=rel_tol:{cfg.rel_tol!r},abs_tol:{cfg.abs_tol!r}\n")
    keys = list(rec.inputs) + list(rec.results) + list(rec.flags)
    vals = list(rec.inputs.values()) + list(rec.results.values()) \
        + list(rec.flags.values())
    writer.writerow(keys)
    writer.writerow([_fmt_cell(v) for v in vals])


def emit_rows(command: str, rows: list[dict], cfg: RunConfig, stream) -> None:
    if cfg.format == "json":
        payload = {
            "command": command,
            "tolerances": _tolerances(cfg),
            "rows": rows,
            "version": __version__,
        }
        json.dump(payload, stream, indent=2, sort_keys=False)
        stream.write("\n")
        return
    writer = csv.writer(stream, lineterminator="\n")
    stream.write(f"# command={command} version={__version__}\n")
    stream.write(f"# tolerance=rel_tol:{cfg.rel_tol!r},abs_tol:{cfg.abs_tol!r}\n")
    if rows:
        keys = list(rows[0])
        writer.writerow(keys)
        for row in rows:
            writer.writerow([_fmt_cell(row[k]) for k in keys])


# ---------------------------------------------------------------------------
# resonance-exponent cache


class SCache:
    """CSV-backed cache of resonance-exponent roots keyed by the mass."""

    def __init__(self, path: str):
        self.path = path
        self.entries: dict[str, tuple[float, float]] = {}
        self.dirty = False
        try:
            with open(path, "r", encoding="utf-8", newline="") as fh:
                for row in csv.DictReader(
                        r for r in fh if not r.startswith("#")):
                    self.entries[row["m"]] = (float(row["s"]),
                                              float(row["residual"]))
        except FileNotFoundError:
            pass

    def s_of_m(self, m: float, spec: QuadSpec) -> criticality.RootResult:
        key = repr(float(m))
        if key in self.entries:
            s, residual = self.entries[key]
            return criticality.RootResult(s, residual)
        root = criticality.s_of_m(m, spec)
        self.entries[key] = (root.value, root.residual)
        self.dirty = True
        return root

    def save(self) -> None:
        if not self.dirty:
            return
        with open(self.path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["m", "s", "residual"])
            for key in sorted(self.entries, key=float):
                s, residual = self.entries[key]
                writer.writerow([key, repr(s), repr(residual)])


def _s_resolver(cfg: RunConfig):
    cache = SCache(cfg.cache) if cfg.cache else None

    def resolve(m: float, spec: QuadSpec) -> criticality.RootResult:
        if cache is not None:
            return cache.s_of_m(m, spec)
        return criticality.s_of_m(m, spec)

    def finish() -> None:
        if cache is not None:
            cache.save()

    return resolve, finish


# ---------------------------------------------------------------------------
# charge mini-grammar


def parse_charge(text: str, ell: int) -> SectorCharge:
    """power:q,gamma[,trunc=below|above,R] | gauss:q,scale | file:PATH"""
    kind, _, rest = text.partition(":")
    if kind == "power":
        parts = rest.split(",")
        if len(parts) not in (2, 4):
            raise DomainError(f"bad power charge spec {text!r}")
        q, gamma = float(parts[0]), float(parts[1])
        trunc, radius = None, 1.0
        if len(parts) == 4:
            key, _, side = parts[2].partition("=")
            if key != "trunc" or side not in ("below", "above"):
                raise DomainError(f"bad truncation in {text!r}")
            trunc, radius = side, float(parts[3])
        profile = PowerLawCharge(q, gamma, trunc, radius)
    elif kind == "gauss":
        parts = rest.split(",")
        if len(parts) != 2:
            raise DomainError(f"bad gauss charge spec {text!r}")
        profile = GaussianTimesK(float(parts[0]), float(parts[1]))
    elif kind == "file":
        profile = _load_charge_file(rest)
    else:
        raise DomainError(f"unknown charge kind {kind!r} in {text!r}")
    return SectorCharge(SectorIndex(ell), profile)


def _load_charge_file(path: str) -> RadialGridCharge:
    head, tail = 0.0, -4.0
    nodes, values = [], []
    with open(path, "r", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for row in reader:
            if not row:
                continue
            first = row[0].strip()
            if first.startswith("#"):
                text = ",".join(row).lstrip("#").strip()
                for token in text.split(","):
                    key, _, value = token.partition("=")
                    if key.strip() == "head_exponent":
                        head = float(value)
                    elif key.strip() == "tail_exponent":
                        tail = float(value)
                continue
            if first == "k":
                continue
            k = float(first)
            re = float(row[1])
            im = float(row[2]) if len(row) > 2 else 0.0
            nodes.append(k)
            values.append(complex(re, im))
    return RadialGridCharge(tuple(nodes), tuple(values), head, tail)


def parse_beta(text: str) -> ExtensionParams:
    parts = text.split(",")
    if len(parts) != 3:
        raise DomainError(f"beta must be three comma-separated values, got {text!r}")
    return ExtensionParams(tuple(float(p) for p in parts))


# ---------------------------------------------------------------------------
# subcommands


def cmd_critical_masses(args, cfg: RunConfig, out) -> int:
    spec = cfg.spec()
    pair = criticality.critical_pair(args.l, spec)
    rec = OutputRecord(
        command="critical-masses",
        inputs={"ell": args.l},
        results={
            "m_star": pair.m_star,
            "m_star_star": pair.m_star_star,
            "residual_star": pair.residual_star,
            "residual_star_star": pair.residual_star_star,
        },
        tolerances=_tolerances(cfg),
        flags={"converged": True},
    )
    emit_record(rec, cfg, out)
    return EXIT_OK


def cmd_s_curve(args, cfg: RunConfig, out) -> int:
    spec = cfg.spec()
    resolve, finish = _s_resolver(cfg)
    pair = criticality.critical_pair(1, spec)
    m_min = max(args.m_min, pair.m_star)
    m_max = min(args.m_max, pair.m_star_star)
    if not m_min < m_max:
        raise DomainError(
            f"empty sweep range after clamping to ({pair.m_star!r}, "
            f"{pair.m_star_star!r})"
        )
    rows = []
    for m in np.linspace(m_min, m_max, args.points):
        root = resolve(float(m), spec)
        rows.append({"m": float(m), "s": root.value, "residual": root.residual})
    finish()
    emit_rows("s-curve", rows, cfg, out)
    return EXIT_OK


def cmd_nu(args, cfg: RunConfig, out) -> int:
    spec = cfg.spec()
    result = gamma0.nu(args.m, spec)
    rec = OutputRecord(
        command="nu",
        inputs={"m": args.m},
        results={
            "nu": result.value,
            "signed": result.signed,
            "positive": result.positive,
            "rel_gap": result.rel_gap,
            "s": result.s,
        },
        tolerances=_tolerances(cfg),
        flags={"converged": True},
    )
    emit_record(rec, cfg, out)
    return EXIT_OK


def cmd_kernel_check(args, cfg: RunConfig, out) -> int:
    spec = cfg.spec()
    resolve, finish = _s_resolver(cfg)
    s = resolve(args.m, spec).value
    momenta = np.geomspace(1e-2, 1e2, 11)
    worst = 0.0
    for p in momenta:
        residual = abs(gamma0.apply_power(args.m, s, float(p), spec)) \
            * float(p) ** (1.0 - s)
        worst = max(worst, residual)
    finish()
    rec = OutputRecord(
        command="kernel-check",
        inputs={"m": args.m},
        results={"s": s, "max_residual": worst,
                 "p_min": 1e-2, "p_max": 1e2, "points": len(momenta)},
        tolerances=_tolerances(cfg),
        flags={"pass": worst <= 1e-8},
    )
    emit_record(rec, cfg, out)
    return EXIT_OK


def cmd_bound(args, cfg: RunConfig, out) -> int:
    spec = cfg.spec()
    params = parse_beta(args.beta)
    report = forms.e0_bound(args.m, params, spec)
    rec = OutputRecord(
        command="bound",
        inputs={"m": args.m, "beta": list(params.beta)},
        results={
            "e0": report.e0,
            "s": report.s,
            "d1": report.d1,
            "d2": report.d2,
            "lambda1_surrogate": report.lambda1_surrogate,
            "c1_lower": report.c1_lower,
            "c2_upper": report.c2_upper,
            "a_star": report.a_star,
        },
        tolerances=_tolerances(cfg),
        flags={"positive_form": report.e0 == 0.0},
    )
    emit_record(rec, cfg, out)
    return EXIT_OK


def cmd_schur(args, cfg: RunConfig, out) -> int:
    spec = cfg.spec()
    lc = forms.lower_constant(args.m, spec)
    a = args.a if args.a is not None else lc.a_star
    sc = forms.schur_constants(args.m, a, spec)
    rec = OutputRecord(
        command="schur",
        inputs={"m": args.m, "a": a},
        results={
            "c0": sc.c0, "c1s": sc.c1s, "c2s": sc.c2s,
            "c1t": sc.c1t, "c2t": sc.c2t,
            "c1_lower": lc.c1_lower, "a_star": lc.a_star,
            "c2_upper": forms.upper_constant(args.m, spec),
        },
        tolerances=_tolerances(cfg),
        flags={"coercive": lc.c1_lower > 0},
    )
    emit_record(rec, cfg, out)
    return EXIT_OK


def cmd_form_eval(args, cfg: RunConfig, out) -> int:
    spec = cfg.spec()
    charge = parse_charge(args.charge, args.l)
    diag, cross = forms.phi_lambda_terms(args.m, args.lam, charge, spec)
    results = {
        "phi_lambda": diag + cross,
        "diagonal": diag,
        "cross": cross,
        "h_minus_half_norm": forms.h_minus_half_norm(charge, args.lam, 0.0, spec)
        if args.lam > 0 else float("nan"),
    }
    flags = {"converged": True}
    if args.mc:
        mc = forms.mc_potential_norm(args.m, args.lam, charge,
                                     n_samples=cfg.mc_samples, seed=cfg.mc_seed)
        pn = forms.potential_norm(args.m, args.lam, 0.0, charge, spec)
        results.update({
            "potential_norm": pn,
            "mc_potential_norm": mc.value,
            "mc_stderr": mc.stderr,
        })
        flags["mc_within_3_sigma"] = abs(pn - mc.value) <= 3.0 * mc.stderr
    rec = OutputRecord(
        command="form-eval",
        inputs={"m": args.m, "lambda": args.lam, "ell": args.l,
                "charge": args.charge},
        results=results,
        tolerances=_tolerances(cfg),
        flags=flags,
    )
    emit_record(rec, cfg, out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# driver


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stmtri",
        description="Numerics for zero-range 2+1 fermion systems at unitarity",
    )
    parser.add_argument("--rel-tol", type=float, default=None)
    parser.add_argument("--abs-tol", type=float, default=None)
    parser.add_argument("--max-subdivisions", type=int, default=None)
    parser.add_argument("--format", choices=("csv", "json"), default=None)
    parser.add_argument("--config", default=None, help="key=value config file")
    parser.add_argument("--cache", default=None,
                        help="CSV cache for resonance-exponent roots")
    parser.add_argument("--seed", type=int, default=None,
                        help="Monte-Carlo seed")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("critical-masses", help="window edges of an odd sector")
    p.add_argument("--l", type=int, required=True)
    p.set_defaults(fn=cmd_critical_masses)

    p = sub.add_parser("s-curve", help="resonance exponent sweep")
    p.add_argument("--m-min", type=float, required=True)
    p.add_argument("--m-max", type=float, required=True)
    p.add_argument("--points", type=int, default=20)
    p.set_defaults(fn=cmd_s_curve)

    p = sub.add_parser("nu", help="tail-coupling constant")
    p.add_argument("--m", type=float, required=True)
    p.set_defaults(fn=cmd_nu)

    p = sub.add_parser("kernel-check", help="zero-mode residual over 5 decades")
    p.add_argument("--m", type=float, required=True)
    p.set_defaults(fn=cmd_kernel_check)

    p = sub.add_parser("bound", help="explicit lower bound")
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--beta", required=True, help="three values, inf allowed")
    p.set_defaults(fn=cmd_bound)

    p = sub.add_parser("schur", help="coercivity constants")
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--a", type=float, default=None)
    p.set_defaults(fn=cmd_schur)

    p = sub.add_parser("form-eval", help="evaluate the shifted sector form")
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--lam", "--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--charge", required=True,
                   help="power:q,gamma[,trunc=below|above,R] | gauss:q,scale "
                        "| file:PATH")
    p.add_argument("--mc", action="store_true",
                   help="cross-check the potential norm with the seeded "
                        "Monte-Carlo oracle")
    p.set_defaults(fn=cmd_form_eval)
    return parser


def make_config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        for key, value in load_config(args.config).items():
            setattr(cfg, key, value)
    # flags win over the config file
    if args.rel_tol is not None:
        cfg.rel_tol = args.rel_tol
    if args.abs_tol is not None:
        cfg.abs_tol = args.abs_tol
    if args.max_subdivisions is not None:
        cfg.max_subdivisions = args.max_subdivisions
    if args.format is not None:
        cfg.format = args.format
    if args.cache is not None:
        cfg.cache = args.cache
    if args.seed is not None:
        cfg.mc_seed = args.seed
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        return args.fn(args, cfg, sys.stdout)
    except (DomainError, ValueError) as exc:
        print(f"stmtri: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (NonConvergedError, RepresentationMismatchError) as exc:
        print(f"stmtri: did not converge: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED


if __name__ == "__main__":
    sys.exit(main())
