"""Command-line front end: ``cfdim dim|classify|verify|cantor|cover``.

Output is JSON (sorted keys, repr floats) or CSV where a table makes sense.
Every JSON document carries ``schema_version`` and the run configuration.

Exit codes: 0 ok, 1 verify failure, 2 malformed input, 3 solver failure,
4 missing limit for Phi2.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import cantor, classify, covering, growth, kernels, pressure, verify

SCHEMA_VERSION = 1

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_SOLVER, EXIT_LIMIT = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code, self.kind, self.message = code, kind, message


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_PARSE, "usage", message)


def _emit(doc: dict, out) -> None:
    out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _config(args) -> dict:
    # the thread count is left out: it never changes a result, and outputs must be byte-identical
    keys = ("M", "K", "tol", "depth", "seed", "format", "budget", "A1", "A2", "scheme_M", "N", "eps",
            "levels", "offset", "count")
    return {k: getattr(args, k) for k in keys if hasattr(args, k)}


def _doc(args, body: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": args.cmd_path, "config": _config(args), **body}


def _spectral(args) -> pressure.SpectralConfig:
    return pressure.SpectralConfig(alphabet_max=args.M, nodes=args.K, root_tol=args.tol)


def _spec(text: str) -> growth.GrowthSpec:
    try:
        return growth.parse_spec(text)
    except (growth.GrowthSpecError, ValueError) as e:
        raise CliError(EXIT_PARSE, "spec", f"{text!r}: {e}") from e


# ---------------------------------------------------------------------------


def cmd_dim(args, out) -> int:
    if args.target == "sB":
        pot = pressure.Potential.sB(args.B)
    elif args.target == "s0":
        pot = pressure.Potential.s0(args.B)
    else:
        pot = pressure.Potential.g(args.B1, args.B2)
    cfg = _spectral(args)
    ladder = tuple(m for m in (args.M // 4, args.M // 2, args.M) if m >= 1)
    ext = pressure.dim_ladder(pot, ladder, cfg)
    # independent cross-check: spectral pressure vs cylinder ratio at M=3
    small = cfg.with_alphabet(3)
    s = ext.value
    spec = pressure.spectral_eigenvalue(pot, s, small)
    ratio = pressure.ratio_oracle(pot, s, 12, 3, args.budget)
    body = {
        "potential": pot.label(),
        "value": ext.value,
        "extrapolated": ext.extrapolated,
        "error_estimate": ext.error,
        "M_ladder": [[m, v] for m, v in ext.ladder],
        "method_agreement": {"M": 3, "n": 12, "s": s, "spectral": spec, "cylinder_ratio": ratio,
                             "difference": abs(spec - ratio)},
    }
    if args.format == "csv":
        rows = [(m, args.K, None, v, v, "spectral-root") for m, v in ext.ladder]
        out.write(pressure.convergence_csv(rows))
    else:
        _emit(_doc(args, body), out)
    return EXIT_OK


def cmd_classify(args, out) -> int:
    cfg = classify.ClassifierConfig(_spectral(args))
    t = args.target
    if t == "e1":
        v = classify.classify_E1(_spec(args.phi), cfg)
    elif t == "e2":
        v = classify.classify_E2(_spec(args.phi), cfg)
    elif t == "f":
        v = classify.classify_F(_spec(args.phi), cfg)
    elif t == "f2":
        v = classify.classify_F2(_spec(args.phi1), _spec(args.phi2), cfg)
    elif t == "fbb":
        v = classify.classify_FBB(args.B1, args.B2, cfg)
    else:
        v = classify.dim_EA(args.A1, args.A2, cfg)
    _emit(_doc(args, {"verdict": v.to_json()}), out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    rep = verify.run_suite(args.suite, seed=args.seed)
    if args.format == "csv":
        out.write("name,gate,ok\n")
        for c in rep.checks:
            out.write(f"{c.name},{int(c.gate)},{int(c.ok)}\n")
    else:
        _emit(_doc(args, {"report": rep.to_json()}), out)
    return EXIT_OK if rep.ok else EXIT_VERIFY


def _scheme(args) -> cantor.CantorScheme:
    return cantor.build_scheme(args.A1, args.A2, args.scheme_M, args.N, args.eps, levels=args.levels,
                               offset=args.offset)


def cmd_cantor(args, out) -> int:
    sc = _scheme(args)
    if args.action == "describe":
        _emit(_doc(args, {"scheme": sc.to_json()}), out)
    elif args.action == "dump":
        body = json.loads(cantor.enumeration_dump(sc, args.depth, args.budget))
        _emit(_doc(args, body), out)
    else:
        out.write(cantor.points_csv(cantor.sample_points(sc, args.seed, args.depth, args.count)))
    return EXIT_OK


def cmd_cover(args, out) -> int:
    sc = _scheme(args)
    pred = verify.cover_prediction(sc)
    last = args.depth if args.depth else verify.deepest_cover_depth(sc, args.budget)
    reps = [covering.covering_root(sc, d, pred, args.budget) for d in range(1, last + 1)]
    if args.format == "csv":
        out.write(covering.convergence_csv(reps))
    else:
        _emit(_doc(args, {"scheme": sc.to_json(), "reports": [r.to_json() for r in reps]}), out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--threads", type=int, default=None, help="numba worker count (never changes results)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--budget", type=int, default=None,
                        help="word-count cap (default 10^7 for sums, 2*10^5 for cylinder enumeration)")

    solver = _Parser(add_help=False)
    solver.add_argument("--M", type=int, default=128, help="alphabet cap")
    solver.add_argument("--K", type=int, default=32, help="collocation nodes")
    solver.add_argument("--tol", type=float, default=1e-10, help="root tolerance")

    scheme = _Parser(add_help=False)
    scheme.add_argument("--A1", type=float, default=2.0)
    scheme.add_argument("--A2", type=float, default=2.0)
    scheme.add_argument("--scheme-M", dest="scheme_M", type=int, default=3, help="free-digit cap")
    scheme.add_argument("--N", type=int, default=3, help="free block length")
    scheme.add_argument("--eps", type=float, default=verify.TOY_EPS)
    scheme.add_argument("--levels", type=int, default=verify.TOY_LEVELS)
    scheme.add_argument("--offset", type=int, choices=(1, 2), default=2)

    p = _Parser(prog="cfdim", description="Dimensions of continued-fraction digit-growth sets.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    d = sub.add_parser("dim", help="s_B, s_0 or g_{B1,B2}")
    dsub = d.add_subparsers(dest="target", required=True, parser_class=_Parser)
    for name in ("sB", "s0"):
        x = dsub.add_parser(name, parents=[common, solver])
        x.add_argument("--B", type=float, required=True)
    x = dsub.add_parser("g", parents=[common, solver])
    x.add_argument("--B1", type=float, required=True)
    x.add_argument("--B2", type=float, required=True)

    c = sub.add_parser("classify", help="classify a digit-growth set")
    csub = c.add_subparsers(dest="target", required=True, parser_class=_Parser)
    for name in ("e1", "e2", "f"):
        x = csub.add_parser(name, parents=[common, solver])
        x.add_argument("--phi", required=True, help="growth spec, e.g. exp:B=4")
    x = csub.add_parser("f2", parents=[common, solver])
    x.add_argument("--phi1", required=True)
    x.add_argument("--phi2", required=True)
    x = csub.add_parser("fbb", parents=[common, solver])
    x.add_argument("--B1", type=float, required=True)
    x.add_argument("--B2", type=float, required=True)
    x = csub.add_parser("ea", parents=[common, solver])
    x.add_argument("--A1", type=float, required=True)
    x.add_argument("--A2", type=float, required=True)

    v = sub.add_parser("verify", help="run an invariant suite")
    vsub = v.add_subparsers(dest="suite", required=True, parser_class=_Parser)
    for name in verify.SUITES:
        vsub.add_parser(name, parents=[common])

    k = sub.add_parser("cantor", help="toy Cantor scheme: describe, dump cylinders, sample points")
    ksub = k.add_subparsers(dest="action", required=True, parser_class=_Parser)
    ksub.add_parser("describe", parents=[common, scheme])
    x = ksub.add_parser("dump", parents=[common, scheme])
    x.add_argument("--depth", type=int, default=3)
    x = ksub.add_parser("sample", parents=[common, scheme])
    x.add_argument("--depth", type=int, default=20)
    x.add_argument("--count", type=int, default=100)

    x = sub.add_parser("cover", help="covering-sum roots by depth", parents=[common, scheme])
    x.add_argument("--depth", type=int, default=0, help="deepest order (0: deepest within budget)")
    return p


def _run(argv, out) -> int:
    args = build_parser().parse_args(argv)
    args.cmd_path = " ".join(
        str(x) for x in (args.cmd, getattr(args, "target", None) or getattr(args, "suite", None)
                         or getattr(args, "action", None)) if x
    )
    if args.budget is None:
        enumerating = args.cmd in ("cantor", "cover")
        args.budget = cantor.DEFAULT_ENUM_BUDGET if enumerating else pressure.DEFAULT_BUDGET
    kernels.set_threads(args.threads)
    handler = {"dim": cmd_dim, "classify": cmd_classify, "verify": cmd_verify, "cantor": cmd_cantor,
               "cover": cmd_cover}[args.cmd]
    try:
        return handler(args, out)
    except classify.LimitMissing as e:
        raise CliError(EXIT_LIMIT, "LimitMissing", str(e)) from e
    except (pressure.PressureError, cantor.Infeasible, cantor.EnumerationBudget, classify.Unsupported) as e:
        raise CliError(EXIT_SOLVER, type(e).__name__, str(e)) from e
    except (growth.GrowthSpecError, ValueError) as e:
        raise CliError(EXIT_PARSE, type(e).__name__, str(e)) from e


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        return _run(argv, out)
    except CliError as e:
        _emit({"schema_version": SCHEMA_VERSION, "error": {"kind": e.kind, "message": e.message}}, out)
        return e.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
