"""Command-line front end. Every command prints one canonical JSON report.

Exit status: 0 when every requested check passes, 1 when a check fails,
2 for usage, parse, guard and I/O errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .errors import ScatPlaneError, ParseError
from .field import FieldSpec, FieldTower, build_field
from .linpoly import LinearizedPoly, is_scattered, linear_set, max_linear_set_size
from .lp import LPParams, lp_census, lp_poly
from .plane import collineation_order, plane_from_spread, verify_affine
from .quasifield import build_quasifield, kernel, verify_axioms
from .spread import andre_spread, desarguesian, pseudoregulus_spread, spread_from_poly, verify_planar
from .subspace import equivalence_fast, normalize_poly, orbit_census, stabilizer_order

log = logging.getLogger("scatplane")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ScatPlaneError):
    pass


@dataclass
class RunConfig:
    command: str
    tower: FieldTower
    polys: list[LinearizedPoly]
    group: str = "GL"
    s: int | None = None
    b: int | None = None
    mode: str = "structural"
    workers: int = 1
    force: bool = False
    out: str = "-"
    timing: bool = False

    def echo(self) -> dict:
        T = self.tower
        out = {
            "command": self.command,
            "field": T.spec.to_json(),
            "polys": [f.to_json() for f in self.polys],
        }
        if self.command == "stab":
            out["group"] = self.group
        if self.command == "plane":
            out["mode"] = self.mode
        if self.s is not None:
            out["s"] = self.s
        if self.b is not None:
            out["b"] = T.encode(self.b)
        return out


@dataclass
class Report:
    command: dict
    results: dict
    passed: bool
    version: str = __version__
    timing_ms: float | None = field(default=None)
    destination: str = "-"  # not serialized

    def to_json(self) -> dict:
        out = {"command": self.command, "results": self.results, "passed": self.passed,
               "version": self.version}
        if self.timing_ms is not None:
            out["timing_ms"] = self.timing_ms
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# -- input parsing -----------------------------------------------------------


def _load_json(arg: str):
    """``arg`` is inline JSON (starting with '{') or a path to a JSON file."""
    text = arg
    source = "inline"
    if not arg.lstrip().startswith("{"):
        try:
            text = Path(arg).read_text()
        except OSError as exc:
            raise ParseError(f"cannot read {arg!r}: {exc.strerror}") from None
        source = arg
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _tower(arg: str, force: bool) -> FieldTower:
    try:
        spec = FieldSpec.from_json(_load_json(arg))
    except ParseError as exc:
        raise ParseError(f"--field: {exc}") from None
    return build_field(spec, force=force)


def _poly(tower: FieldTower, arg: str, k: int) -> LinearizedPoly:
    try:
        return LinearizedPoly.from_json(tower, _load_json(arg))
    except ParseError as exc:
        raise ParseError(f"--poly #{k}: {exc}") from None


def parse_specs(args: argparse.Namespace) -> RunConfig:
    T = _tower(args.field, args.force)
    polys = [_poly(T, a, k) for k, a in enumerate(args.poly or [], 1)]
    b = None
    if args.b is not None:
        try:
            b = T.decode(args.b)
        except ParseError as exc:
            raise ParseError(f"--b: {exc}") from None
    if args.workers < 1:
        raise UsageError("--workers must be at least 1")
    return RunConfig(
        command=args.command,
        tower=T,
        polys=polys,
        group=args.group,
        s=args.s,
        b=b,
        mode=args.mode,
        workers=args.workers,
        force=args.force,
        out=args.out,
        timing=args.timing,
    )


def _need_polys(cfg: RunConfig, n: int) -> list[LinearizedPoly]:
    """Polynomials from --poly, or P_{b,s} built from --b/--s when n == 1."""
    if not cfg.polys and n == 1 and cfg.b is not None:
        return [lp_poly(cfg.tower, LPParams(cfg.b, cfg.s or 1))]
    if len(cfg.polys) != n:
        raise UsageError(f"{cfg.command} needs exactly {n} --poly argument(s), got {len(cfg.polys)}")
    return cfg.polys


def _search_kw(cfg: RunConfig) -> dict:
    return {"force": cfg.force, "workers": cfg.workers}


# -- commands ----------------------------------------------------------------


def cmd_scattered(cfg: RunConfig):
    (f,) = _need_polys(cfg, 1)
    if f.is_zero:
        return {"scattered": False, "zero_polynomial": True}, False
    ok = is_scattered(f)
    res = {
        "scattered": ok,
        "linear_set_size": len(linear_set(f)),
        "max_size": max_linear_set_size(cfg.tower),
        "kernel_dimension": f.kernel_dimension(),
    }
    return res, ok


def cmd_quasifield(cfg: RunConfig):
    (f,) = _need_polys(cfg, 1)
    T = cfg.tower
    g, mu = normalize_poly(f)
    Q = build_quasifield(g)
    Q.materialize(force=cfg.force)
    rep = verify_axioms(Q)
    K = kernel(Q)
    kernel_is_fq = K == frozenset(int(x) for x in T.subfield)
    res = {
        **rep.to_json(),
        "kernel_is_subfield": kernel_is_fq,
        "normalized_poly": g.to_json(),
        "normalizing_map": mu.to_json(T),
    }
    return res, rep.passed and kernel_is_fq


def cmd_spread(cfg: RunConfig):
    if cfg.polys or cfg.b is not None:
        (f,) = _need_polys(cfg, 1)
        S = spread_from_poly(f)
    else:
        S = desarguesian(cfg.tower)
    planar = verify_planar(S)
    return {**S.report(planar.planar), "witness": planar.witness}, planar.planar


def cmd_plane(cfg: RunConfig):
    T = cfg.tower
    if cfg.polys or cfg.b is not None:
        (f,) = _need_polys(cfg, 1)
        S = spread_from_poly(f)
    else:
        f = None
        S = desarguesian(T)
    A = plane_from_spread(S, check=False)
    rep = verify_affine(A, cfg.mode)
    res = {**A.report(), **rep.to_json()}
    if f is not None and T.q > 3:
        res["collineation_order_GL"] = collineation_order(f, "GL", **_search_kw(cfg))
    else:
        res["collineation_order_GL"] = None
    return res, rep.passed


def cmd_equiv(cfg: RunConfig):
    f, g = _need_polys(cfg, 2)
    lam = equivalence_fast(f, g, **_search_kw(cfg))
    res = {"equivalent": lam is not None, "witness": None if lam is None else lam.to_json(cfg.tower)}
    return res, lam is not None


def cmd_stab(cfg: RunConfig):
    (f,) = _need_polys(cfg, 1)
    T = cfg.tower
    order = stabilizer_order(f, cfg.group, **_search_kw(cfg))
    res = {"order": order, "group": cfg.group, "divisible_by_kernel_homology": order % (T.order - 1) == 0}
    return res, res["divisible_by_kernel_homology"]


def cmd_lp_census(cfg: RunConfig):
    res = lp_census(cfg.tower, cfg.s, **_search_kw(cfg))
    return res, bool(res["agree_solver_vs_ejj"] and res["all_s_meets_lower_bound"])


def cmd_andre_check(cfg: RunConfig):
    """Pseudoregulus spread against the single-net Andre replacement."""
    T = cfg.tower
    s = cfg.s if cfg.s is not None else 1
    norms = T.rel_norm(T.elements)
    if cfg.b is not None:
        omegas = [cfg.b]
    else:
        omegas = [int(w) for w in T.elements if int(norms[w]) not in (0, 1)]
    mismatched, nonplanar = [], []
    for w in omegas:
        S = pseudoregulus_spread(T, w, s)
        if S != andre_spread(T, {int(norms[w]): s}):
            mismatched.append(T.encode(w))
        if not verify_planar(S).planar:
            nonplanar.append(T.encode(w))
    res = {
        "s": s,
        "checked": len(omegas),
        "identical": not mismatched,
        "planar": not nonplanar,
        "mismatched": mismatched,
        "nonplanar": nonplanar,
    }
    return res, not mismatched and not nonplanar


def cmd_pseudoregulus_class(cfg: RunConfig):
    """GammaL-classes of {omega x^(q^s) : gcd(s, t) = 1} against s = +-s' (mod t)."""
    T = cfg.tower
    t = T.t
    omega = cfg.b if cfg.b is not None else 1
    if omega == 0:
        raise UsageError("--b must be nonzero")
    svals = [s for s in range(1, t) if math.gcd(s, t) == 1]
    family = [LinearizedPoly.monomial(T, s, omega) for s in svals]
    groups = orbit_census(family, **_search_kw(cfg))
    found = [[svals[i] for i in grp] for grp in groups]
    predicted = sorted({tuple(sorted({s, t - s})) for s in svals})
    predicted = [list(p) for p in predicted]
    res = {
        "s_values": svals,
        "classes": len(found),
        "partition": found,
        "predicted_partition": predicted,
        "expected_classes": len(predicted),
        "matches": found == predicted,
    }
    return res, found == predicted


COMMANDS = {
    "scattered": (cmd_scattered, "test whether a polynomial is scattered"),
    "quasifield": (cmd_quasifield, "build Q_f (normalizing first) and check the axioms"),
    "spread": (cmd_spread, "build B_f (or the Desarguesian spread) and check it is planar"),
    "plane": (cmd_plane, "translation plane counts, affine axioms, collineation order"),
    "equiv": (cmd_equiv, "GammaL(2, q^t)-equivalence of two graph subspaces"),
    "stab": (cmd_stab, "order of the collineation group preserving B_f"),
    "lp-census": (cmd_lp_census, "classify the scattered x^(q^s) + b x^(q^(t-s))"),
    "andre-check": (cmd_andre_check, "pseudoregulus spreads versus Andre net replacement"),
    "pseudoregulus-class": (cmd_pseudoregulus_class, "GammaL-classes of the monomials omega x^(q^s)"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="scatplane", description="Translation planes from scattered linearized polynomials.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--field", required=True, help="field spec: JSON file or inline JSON")
        p.add_argument("--poly", action="append", help="polynomial spec: JSON file or inline JSON (repeatable)")
        p.add_argument("--group", choices=("GL", "GammaL"), default="GL")
        p.add_argument("--s", type=int)
        p.add_argument("--b", help="field element: 0, 1, g^k or a decimal index")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out", default="-", help="output path, '-' for stdout")
        p.add_argument("--force", action="store_true", help="override size guards")
        p.add_argument("--mode", choices=("structural", "direct"), default="structural")
        p.add_argument("--timing", action="store_true", help="add wall time to the report")
    return ap


def run(argv) -> tuple[int, Report | None]:
    """Parse ``argv`` and run one command; errors yield (2, None)."""
    try:
        args = build_parser().parse_args(argv)
        cfg = parse_specs(args)
        handler = COMMANDS[cfg.command][0]
        t0 = time.perf_counter()
        results, passed = handler(cfg)
        elapsed = (time.perf_counter() - t0) * 1e3
    except ScatPlaneError as exc:
        print(f"scatplane: error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    report = Report(cfg.echo(), results, bool(passed), destination=cfg.out)
    if cfg.timing:
        report.timing_ms = round(elapsed, 3)
    return (EXIT_OK if passed else EXIT_FAIL), report


def emit_report(report: Report, path: str = "-"):
    text = report.dumps()
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(path).write_text(text)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    logging.basicConfig(level=logging.WARNING, format="scatplane: %(levelname)s: %(message)s")
    try:
        code, report = run(argv)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    if report is None:
        return code
    try:
        emit_report(report, report.destination)
    except OSError as exc:
        print(f"scatplane: error: cannot write {report.destination!r}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    return code
