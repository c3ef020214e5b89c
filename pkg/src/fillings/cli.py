"""Command-line interface: ``fillings <subcommand> ...``.

Exit status is 0 on success, 1 on validation or hypothesis failures and 2
when a search budget is exhausted.  Reports are CSV or JSON and depend only
on the inputs and ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from . import fixtures
from .complex import Ring, SimplicialComplex, homology_summary
from .errors import BudgetError, FillingError, SearchBudgetExceeded, ValidationError
from .fillrad import filling_radius
from .fillvol import Cone, NerveAtScale, fillvol_upper
from .io import (complex_from_json, complex_to_json, dump_json, load_json, map_from_json,
                 metric_to_json)
from .lipschitz import PartialMap, extension_report
from .maps import (SimplicialMap, attach_cell, check_monotone, comparison_experiment,
                   extension_experiment)
from .metric import FiniteMetricSpace, MetricComplex, path_metric

log = logging.getLogger("fillings")


class UsageError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2
        raise UsageError(message)


@dataclass
class RunConfig:
    subcommand: str
    inputs: List[str]
    ring: str = "z2"
    max_dim: Optional[int] = None
    tolerance: float = 0.0
    out: Optional[str] = None
    seed: int = 0
    fixture: Optional[str] = None

    def __post_init__(self):
        Ring.parse(self.ring)
        if self.tolerance < 0:
            raise ValidationError("tolerance must be nonnegative")


def _common(p: argparse.ArgumentParser, ring_default: str = "z2") -> None:
    p.add_argument("input", nargs="?", help="complex+metric JSON file")
    p.add_argument("--fixture", help="generate the input instead, e.g. cycle:48:6.283185307")
    p.add_argument("--ring", default=ring_default, choices=["z", "q", "z2"])
    p.add_argument("--max-dim", type=int, default=None)
    p.add_argument("--tolerance", type=float, default=0.0)
    p.add_argument("--out", help="write the report here")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fillings", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    cx = sub.add_parser("complex", help="complex utilities")
    cxs = cx.add_subparsers(dest="action", parser_class=_Parser)
    _common(cxs.add_parser("validate", help="check a complex and report inferred faces"))

    _common(sub.add_parser("homology", help="homology groups over a ring"), "z")

    p = sub.add_parser("fillrad", help="filling radius with a CSV certificate")
    _common(p)
    p.add_argument("--metric", choices=["path", "geodesic"], default="path",
                   help="vertex distances: 1-skeleton path metric, or round distances "
                        "(sphere2/rp2 fixtures only)")

    p = sub.add_parser("fillvol", help="filling-volume upper bound as JSON")
    _common(p, "q")
    p.add_argument("--ambient", choices=["cone", "nerve"], default="cone")
    p.add_argument("--scale", type=Fraction, help="nerve scale (default: the filling-radius death scale)")

    mp = sub.add_parser("map", help="simplicial map utilities")
    mps = mp.add_subparsers(dest="action", parser_class=_Parser)
    p = mps.add_parser("check", help="(n,d)-monotonicity and degree")
    _common(p, "z")
    p.add_argument("--d", type=int, default=1)

    p = sub.add_parser("extend", help="attach a cell and write the extended complex")
    _common(p)
    _attach_args(p)

    ex = sub.add_parser("experiment", help="axiom experiments")
    exs = ex.add_subparsers(dest="action", parser_class=_Parser)
    p = exs.add_parser("compare", help="comparison axiom rows")
    _common(p)
    p.add_argument("--t", default="1,1/2,1/4", help="comma-separated t values")
    p.add_argument("--map", choices=["identity", "automorphism"], default="identity",
                   help="with --fixture torus: which self-map to use")
    p = exs.add_parser("extend", help="extension axiom report")
    _common(p)
    _attach_args(p)

    fx = sub.add_parser("fixture", help="fixture generators")
    fxs = fx.add_subparsers(dest="action", parser_class=_Parser)
    _common(fxs.add_parser("emit", help="write a fixture as JSON"))

    p = sub.add_parser("extension-check", help="dilation profile before/after Lipschitz extension")
    _common(p)
    p.add_argument("--points", type=int, default=10, help="random space size (no input)")
    p.add_argument("--subset", type=int, default=4)
    p.add_argument("--dim", type=int, default=3, help="target sup-norm dimension")
    return parser


def _attach_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, default=1, help="cell dimension")
    p.add_argument("--attach", required=True, help="comma-separated attaching vertices")
    p.add_argument("--R", type=float, default=1.0)
    p.add_argument("--mesh", type=int, default=2)


# --------------------------------------------------------------------------


def _load(args) -> MetricComplex | SimplicialComplex:
    if args.fixture and args.input:
        raise UsageError("give either an input file or --fixture, not both")
    if args.fixture:
        return fixtures.generate_fixture(args.fixture)
    if not args.input:
        raise UsageError("an input file or --fixture is required")
    return complex_from_json(load_json(args.input))


def _metric(args) -> MetricComplex:
    obj = _load(args)
    if not isinstance(obj, MetricComplex):
        raise ValidationError("this command needs edge_lengths in the input")
    return obj


def _emit(text: str, args, also_stdout: bool = True) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    if also_stdout or not args.out:
        sys.stdout.write(text)


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return f"{v} = {float(v):.10g}" if v.denominator != 1 else str(v.numerator)
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def cmd_complex_validate(args) -> int:
    obj = _load(args)
    cx = obj.complex if isinstance(obj, MetricComplex) else obj
    print(f"vertices {cx.vertex_count}")
    print(f"f-vector {' '.join(map(str, cx.f_vector()))}")
    print(f"dimension {cx.dimension}")
    print(f"connected {cx.is_connected}")
    print(f"inferred faces {len(cx.inferred)}")
    for s in cx.inferred:
        print(f"  {list(s)}")
    if isinstance(obj, MetricComplex):
        print(f"metric {'exact' if obj.exact else 'float'}")
    return 0


def cmd_homology(args) -> int:
    obj = _load(args)
    cx = obj.complex if isinstance(obj, MetricComplex) else obj
    summary = homology_summary(cx, args.ring)
    text = str(summary) + "\n"
    if args.out:
        dump_json({"ring": args.ring, "betti": summary.betti,
                   "torsion": summary.torsion}, args.out)
    sys.stdout.write(text)
    return 0


def cmd_fillrad(args) -> int:
    mc = _metric(args)
    if args.metric == "geodesic":
        space = fixtures.geodesic_space(args.fixture) if args.fixture else None
        if space is None:
            raise UsageError("--metric geodesic needs a sphere2 or rp2 fixture")
        cert = filling_radius(space, args.ring, args.max_dim, complex_=mc.complex)
    else:
        cert = filling_radius(mc, args.ring, args.max_dim)
    print(f"radius {_fmt(cert.radius)}")
    print(f"death_scale {_fmt(cert.death_scale)}")
    csv_text = cert.to_csv()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    return 0


def cmd_fillvol(args) -> int:
    mc = _metric(args)
    if args.ambient == "cone":
        ambient = Cone()
    else:
        scale = args.scale
        if scale is None:
            scale = filling_radius(mc, args.ring, args.max_dim).death_scale
        elif not mc.exact:
            scale = float(scale)
        ambient = NerveAtScale(scale)
    try:
        cert = fillvol_upper(mc, args.ring, ambient)
    except SearchBudgetExceeded as exc:
        best = getattr(exc, "certificate", None)
        if best is not None:
            # still a valid upper bound, just not proven optimal
            _emit(dump_json(best.to_json()), args)
        raise
    _emit(dump_json(cert.to_json()), args)
    return 0


def cmd_map_check(args) -> int:
    if not args.input:
        raise UsageError("map check needs a map JSON file")
    f, _, _ = map_from_json(load_json(args.input))
    n = f.target.dimension
    rep = check_monotone(f, n, args.d)
    data = {"n": n, "d": args.d, "is_n1_monotone": rep.is_n1_monotone,
            "is_nd_monotone": rep.is_nd_monotone,
            "offending": [list(s) for s in rep.offending],
            "degree": {k: (str(v) if isinstance(v, Fraction) else v) for k, v in rep.degree.items()}}
    _emit(dump_json(data), args)
    return 0 if rep.is_nd_monotone else 1


def _vertices(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"bad vertex list {text!r}") from None


def cmd_extend(args) -> int:
    mc = _metric(args)
    ext = attach_cell(mc, args.k, _vertices(args.attach), args.R, args.mesh)
    log.info("attached %d new vertices", len(ext.attached_cells[0].new_vertices))
    print(f"strong isometry gap {_fmt(ext.strong_isometry_gap)}", file=sys.stderr)
    _emit(dump_json(metric_to_json(ext.result)), args)
    return 0


def _parse_t(text: str) -> List:
    out = []
    for part in text.split(","):
        try:
            q = Fraction(part.strip())
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad t value {part!r}") from None
        out.append(q.numerator if q.denominator == 1 else q)
    return out


def cmd_experiment_compare(args) -> int:
    ts = _parse_t(args.t)
    if args.input:
        f, g1, g2 = map_from_json(load_json(args.input))
        if g1 is None or g2 is None:
            raise ValidationError("map JSON needs edge_lengths on source and target")
    else:
        mc = _metric(args)
        name = (args.fixture or "").split(":")[0]
        if args.map == "identity":
            vm = list(range(mc.complex.vertex_count))
        elif name == "torus":
            parts = args.fixture.split(":")[1:]
            m, k = (int(parts[0]) if parts else 4), (int(parts[1]) if len(parts) > 1 else 4)
            vm = fixtures.torus_automorphism(m, k, args.seed)
        else:
            raise UsageError("--map automorphism is available for torus fixtures")
        f = SimplicialMap(mc.complex, mc.complex, vm)
        g1 = g2 = mc
    rep = comparison_experiment(f, g2, g1, ts, args.ring, args.max_dim)
    _emit(rep.to_csv(), args)
    return 0 if rep.ok else 1


def cmd_experiment_extend(args) -> int:
    mc = _metric(args)
    ext = attach_cell(mc, args.k, _vertices(args.attach), args.R, args.mesh)
    rep = extension_experiment(ext, args.ring, args.max_dim)
    if args.tolerance:
        rep.fillrad_equal = rep.fillrad_equal or abs(
            float(rep.fillrad_Vprime) - float(rep.fillrad_V)) <= args.tolerance
    _emit(rep.to_csv(), args)
    return 0 if rep.ok else 1


def cmd_fixture_emit(args) -> int:
    if not args.fixture:
        raise UsageError("fixture emit needs --fixture NAME:ARGS")
    mc = fixtures.generate_fixture(args.fixture)
    _emit(dump_json(metric_to_json(mc)), args, also_stdout=False)
    return 0


def cmd_extension_check(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.input or args.fixture:
        space = path_metric(_metric(args))
    else:
        # random exact metric: shortest paths over random integer weights
        n = args.points
        w = rng.integers(1, 10, size=(n, n))
        w = np.triu(w, 1)
        w = w + w.T
        d = w.astype(object)
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    if d[i, k] + d[k, j] < d[i, j]:
                        d[i, j] = d[i, k] + d[k, j]
        space = FiniteMetricSpace(tuple(range(n)), d)
    n = len(space)
    size = min(max(args.subset, 1), n)
    domain = sorted(int(v) for v in rng.choice(n, size=size, replace=False))
    values = rng.integers(0, 10, size=(size, args.dim)).astype(object)
    rep = extension_report(PartialMap(space, tuple(domain), values))
    before, after = rep["before"], rep["after"]
    print(f"domain {domain}")
    print(f"dil(f) {_fmt(before.global_)}  dil(F) {_fmt(after.global_)}")
    for y in domain:
        print(f"  y={y}: dil(f,y) {_fmt(before.per_point[y])}  dil(F,y) {_fmt(after.per_point[y])}")
    ok = rep["extends"] == 0 and rep["global_equal"] and rep["per_point_equal"]
    print(f"extends {rep['extends'] == 0} global_equal {rep['global_equal']} "
          f"per_point_equal {rep['per_point_equal']}")
    return 0 if ok else 1


COMMANDS = {
    ("complex", "validate"): cmd_complex_validate,
    ("homology", None): cmd_homology,
    ("fillrad", None): cmd_fillrad,
    ("fillvol", None): cmd_fillvol,
    ("map", "check"): cmd_map_check,
    ("extend", None): cmd_extend,
    ("experiment", "compare"): cmd_experiment_compare,
    ("experiment", "extend"): cmd_experiment_extend,
    ("fixture", "emit"): cmd_fixture_emit,
    ("extension-check", None): cmd_extension_check,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        key = (args.command, getattr(args, "action", None))
        if key not in COMMANDS:
            parser.print_help(sys.stderr)
            return 1
        RunConfig(args.command, [args.input] if getattr(args, "input", None) else [],
                  args.ring, args.max_dim, args.tolerance, args.out, args.seed, args.fixture)
        return COMMANDS[key](args)
    except BudgetError as exc:
        print(f"fillings: budget exhausted: {exc}", file=sys.stderr)
        return 2
    except (FillingError, ValueError, OSError) as exc:
        print(f"fillings: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
