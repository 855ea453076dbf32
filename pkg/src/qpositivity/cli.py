"""Command-line driver.

Every subcommand writes one record per check (JSON lines, or CSV rows) and
then a summary record; the exit status is 0 exactly when every check passed.
Floats are printed with 17 significant digits so they round-trip.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import math
import sys
import time

import numpy as np

from . import __version__
from . import certify as cert
from . import gram as gr
from . import oracle as orc
from . import qkernel as qk
from .errors import CutoffInsufficient, QPositivityError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


# ---------------------------------------------------------------------------
# Output


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def to_json(obj) -> str:
    """Compact JSON with fixed key order and 17-digit floats."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, complex):
        return "[" + _fmt_float(obj.real) + ", " + _fmt_float(obj.imag) + "]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(json.dumps(str(k)) + ": " + to_json(v) for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, dict):
        return ";".join(f"{k}={_csv_cell(x)}" for k, x in v.items())
    if isinstance(v, (list, tuple)):
        return "|".join(_csv_cell(x) for x in v)
    return str(v)


class Writer:
    """Serializes records to stdout in task order."""

    def __init__(self, fmt: str, columns: list[str], stream=None):
        self.fmt = fmt
        self.columns = columns
        self.stream = stream or sys.stdout
        self._header_done = False

    def record(self, rec: dict):
        if self.fmt == "json":
            self.stream.write(to_json(rec) + "\n")
            return
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if not self._header_done:
            w.writerow(self.columns)
            self._header_done = True
        w.writerow([_csv_cell(rec.get(c, "")) for c in self.columns])
        self.stream.write(buf.getvalue())

    def summary(self, rec: dict):
        # CSV keeps stdout rectangular; the summary goes to stderr there
        if self.fmt == "json":
            self.stream.write(to_json(rec) + "\n")
        else:
            sys.stderr.write(to_json(rec) + "\n")


def _summary(args, passed: int, failed: int, worst: dict | None, started: float) -> dict:
    out = {"summary": True, "pass_count": passed, "fail_count": failed, "worst": worst,
           "version": __version__}
    if not args.no_timestamp:
        out["wall_clock_s"] = round(time.perf_counter() - started, 6)
        out["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat()
    return out


# ---------------------------------------------------------------------------
# eval


EVAL_FUNCTIONS = ("qpoch-inf", "qpoch-fin", "aq", "phi11", "theta4", "theta4-product", "qgamma")


def cmd_eval(args) -> int:
    policy = qk.TruncationPolicy(tail_tol=args.tol if args.tol is not None else 1e-16,
                                 max_terms=args.max_terms)
    name = args.function

    def need(*names):
        missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
        if missing:
            raise UsageError(f"eval {name} needs --{' --'.join(missing)}")
        return [getattr(args, n.replace("-", "_")) for n in names]

    terms, tail = 0, 0.0
    if name == "qpoch-inf":
        a, q = need("a", "q")
        r = qk.qpoch_inf(a, q, policy)
    elif name == "qpoch-fin":
        a, q, n = need("a", "q", "n")
        r = qk.EvalResult(qk.qpoch_fin(a, q, n), n, 0.0)
    elif name == "aq":
        z, q = need("z", "q")
        r = qk.ramanujan_Aq(z, q, policy)
    elif name == "phi11":
        a, b, q, z = need("a", "b", "q", "z")
        r = qk.phi11(a, b, q, z, policy)
    elif name == "theta4":
        if args.tau_im is not None:
            v = args.v if args.v is not None else 0j
            r = qk.theta4_vtau(v, complex(args.tau_re, args.tau_im), policy)
        else:
            z, q = need("z", "q")
            r = qk.theta4_series(z, q, policy)
    elif name == "theta4-product":
        z, q = need("z", "q")
        r = qk.theta4_product(z, q, policy)
    elif name == "qgamma":
        x, q = need("x", "q")
        r = qk.q_gamma(x, q, policy)
    else:  # argparse restricts choices
        raise UsageError(f"unknown function {name}")
    terms, tail = r.terms_used, r.tail_bound
    rec = {"function": name, "value_re": r.value.real, "value_im": r.value.imag,
           "terms_used": terms, "tail_bound": tail}
    Writer(args.output, list(rec)).record(rec)
    return EXIT_OK


# ---------------------------------------------------------------------------
# gram


def _load_gram_input(args):
    if args.spec_file is None:
        if args.random is None:
            raise UsageError("gram needs a spec file or --random THEOREM")
        rng = np.random.default_rng(args.seed)
        return gr.random_gram_spec(args.random, rng, m=args.m, n=args.n), None
    with open(args.spec_file) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{args.spec_file}: not valid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise UsageError(f"{args.spec_file}: expected a JSON object")
    if "matrix" in doc:
        return None, gr.HermitianMatrix.from_json(doc["matrix"])
    try:
        return gr.GramSpec.from_dict(doc), None
    except KeyError as exc:
        raise UsageError(f"{args.spec_file}: missing field {exc}") from None


def cmd_gram(args) -> int:
    rel_tol = args.tol if args.tol is not None else 1e-10
    spec, matrix = _load_gram_input(args)
    if matrix is None:
        matrix = gr.build_gram(spec)
    verdict = gr.psd_check(matrix, rel_tol)
    rec = {"dim": matrix.dim, **verdict.to_dict()}
    if spec is not None:
        rec["theorem"] = spec.theorem.value
        rec["variant"] = spec.variant.value
    if args.dump_matrix:
        rec["matrix"] = matrix.to_json()
    Writer(args.output, list(rec)).record(rec)
    return EXIT_OK if verdict.is_psd else EXIT_FAIL


# ---------------------------------------------------------------------------
# certify / sweep-all

PARAM_NAMES = ("y", "q", "x", "u", "v", "a", "b", "z", "c", "k")
REPORT_COLUMNS = ["ineq_id", "variant", "inputs", "lhs", "rhs", "margin", "rel_margin", "pass"]
DEFAULT_RANDOM = 1000


def _grid_from_args(args, ineq_id: str, seed: int) -> cert.SweepGrid:
    ranges = {}
    for name in PARAM_NAMES:
        text = getattr(args, "p_" + name)
        if text is not None:
            try:
                ranges[name] = cert.ParamRange.parse(text)
            except ValueError as exc:
                raise UsageError(f"--{name}: {exc}") from None
    random = args.random
    if random is None:
        random = 0 if ranges else DEFAULT_RANDOM
    if random == 0 and not ranges:
        raise UsageError("empty grid: give parameter ranges or --random N with N > 0")
    if random == 0:
        names = list(cert.DRAW_BOXES[ineq_id])
        missing = [n for n in names if n not in ranges]
        if missing:
            raise UsageError(f"certify {ineq_id} grid needs ranges for {names}; missing {missing}")
    return cert.SweepGrid(ranges=ranges, random=random, seed=seed,
                          variant=args.variant, n_factors=args.factors)


def _run_sweeps(args, ids: list[str]) -> int:
    started = time.perf_counter()
    rel_tol = args.tol if args.tol is not None else 1e-10
    writer = Writer(args.output, REPORT_COLUMNS)
    passed = failed = 0
    worst = None
    for idx, ineq_id in enumerate(ids):
        # each id gets its own stream derived from the seed, so adding ids keeps earlier draws
        seed = [args.seed, idx] if len(ids) > 1 else args.seed
        grid = _grid_from_args(args, ineq_id, seed)
        res = cert.sweep(ineq_id, grid, rel_tol=rel_tol)
        for r in res.reports:
            rec = r.to_dict()
            rec["pass"] = r.holds(rel_tol)
            if not args.summary_only:
                writer.record(rec)
        passed += res.pass_count
        failed += res.fail_count
        if worst is None or res.min_rel_margin < worst["rel_margin"]:
            worst = {"ineq_id": ineq_id, "rel_margin": res.min_rel_margin, "inputs": res.argmin_inputs}
    writer.summary(_summary(args, passed, failed, worst, started))
    return EXIT_OK if failed == 0 else EXIT_FAIL


def cmd_certify(args) -> int:
    if args.ineq_id is None:
        ids = list(cert.INEQUALITY_IDS)
    elif args.ineq_id not in cert.INEQUALITY_IDS:
        raise UsageError(f"unknown inequality id {args.ineq_id!r}; choose from {', '.join(cert.INEQUALITY_IDS)}")
    else:
        ids = [args.ineq_id]
    return _run_sweeps(args, ids)


def cmd_sweep_all(args) -> int:
    for name in PARAM_NAMES:
        setattr(args, "p_" + name, None)
    args.factors = None
    ids = list(cert.VARIANT_IDS) if args.variant == gr.Variant.AS_PRINTED.value else list(cert.INEQUALITY_IDS)
    return _run_sweeps(args, ids)


# ---------------------------------------------------------------------------
# oracle

TRANSFORMS = ("euler", "phi11", "ramanujan", "ramanujan-abs")
ORACLE_BOXES = {
    "euler": {"z": (0.05, 0.95), "q": (0.05, 0.95), "x": (-math.pi, math.pi)},
    "phi11": {"a": (-0.95, 0.95), "b": (0.05, 0.95), "z": (0.05, 0.95), "q": (0.05, 0.95),
              "x": (-math.pi, math.pi)},
    "ramanujan": {"c_abs": (0.05, 0.95), "c_arg": (0.0, 2.0 * math.pi), "k": (0.1, 2.0),
                  "m_re": (-1.0, 1.0), "m_im": (-math.pi, math.pi)},
    "ramanujan-abs": {"c_abs": (0.05, 0.95), "c_arg": (0.0, 2.0 * math.pi), "k": (0.1, 2.0),
                      "m": (-math.pi, math.pi)},
}
ORACLE_COLUMNS = ["transform", "params", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "rel_err",
                  "density_min", "cutoff", "node_count", "tail_bound", "condition", "pass"]


def draw_oracle_params(transform: str, rng: np.random.Generator) -> dict:
    """One random in-domain parameter record for ``transform``."""
    box = ORACLE_BOXES[transform]
    raw = {k: float(rng.uniform(*v)) for k, v in box.items()}
    if transform in ("euler", "phi11"):
        return raw
    c = raw["c_abs"] * complex(math.cos(raw["c_arg"]), math.sin(raw["c_arg"]))
    if transform == "ramanujan":
        return {"c": c, "k": raw["k"], "m": complex(raw["m_re"], raw["m_im"])}
    return {"c": c, "k": raw["k"], "m": raw["m"]}


def run_oracle(transform: str, p: dict, quad: orc.QuadratureSpec) -> orc.TransformCheck:
    if transform == "euler":
        return orc.verify_euler_transform(p["z"], p["q"], p["x"], quad)
    if transform == "phi11":
        return orc.verify_phi11_transform(p["a"], p["b"], p["z"], p["q"], p["x"], quad)
    if transform == "ramanujan":
        return orc.verify_ramanujan_integral(p["c"], p["k"], p["m"], quad)
    return orc.verify_ramanujan_abs_square(p["c"], p["k"], p["m"], quad)


_ORACLE_ARGS = {
    "euler": ("z", "q", "x"),
    "phi11": ("a", "b", "z", "q", "x"),
    "ramanujan": ("c", "k", "m"),
    "ramanujan-abs": ("c", "k", "m"),
}


def cmd_oracle(args) -> int:
    started = time.perf_counter()
    tol = args.tol if args.tol is not None else 1e-8
    quad = orc.QuadratureSpec(args.cutoff, args.nodes, args.order, args.scheme)
    if args.random:
        rng = np.random.default_rng(args.seed)
        draws = [draw_oracle_params(args.transform, rng) for _ in range(args.random)]
    else:
        p = {}
        for name in _ORACLE_ARGS[args.transform]:
            val = getattr(args, "o_" + name)
            if val is None:
                raise UsageError(f"oracle {args.transform} needs --{name} (or --random N)")
            p[name] = val.real if name not in ("c", "m") and val.imag == 0 else val
        if args.transform == "ramanujan-abs":
            p["m"] = p["m"].real if isinstance(p["m"], complex) else p["m"]
        draws = [p]
    writer = Writer(args.output, ORACLE_COLUMNS)
    passed = failed = 0
    worst = None
    for p in draws:
        chk = run_oracle(args.transform, p, quad)
        ok = chk.rel_err <= tol and not (chk.density_min < 0)
        passed += ok
        failed += not ok
        if worst is None or chk.rel_err > worst["rel_err"]:
            worst = {"rel_err": chk.rel_err, "params": p}
        writer.record({"transform": args.transform, "params": p, **chk.to_dict(), "pass": ok})
    writer.summary(_summary(args, passed, failed, worst, started))
    return EXIT_OK if failed == 0 else EXIT_FAIL


# ---------------------------------------------------------------------------
# Parser


class UsageError(Exception):
    pass


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _common(parser: argparse.ArgumentParser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--output", choices=("json", "csv"), default=d("json"))
    parser.add_argument("--seed", type=int, default=d(0))
    parser.add_argument("--tol", type=float, default=d(None),
                        help="pass tolerance override for the subcommand")
    parser.add_argument("--no-timestamp", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qpositivity", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one special function")
    _common(p, suppress=True)
    p.add_argument("function", choices=EVAL_FUNCTIONS)
    for name in ("a", "b", "z", "x", "v"):
        p.add_argument("--" + name, type=_complex)
    p.add_argument("--q", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--tau-im", type=float)
    p.add_argument("--tau-re", type=float, default=0.0)
    p.add_argument("--max-terms", type=int, default=10_000)
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("gram", help="build a Gram matrix and certify it is PSD")
    _common(p, suppress=True)
    p.add_argument("spec_file", nargs="?", help="JSON GramSpec, or {\"matrix\": [[[re, im], ...], ...]}")
    p.add_argument("--random", choices=[t.value for t in gr.Theorem], help="draw a random spec instead")
    p.add_argument("--m", type=int, help="number of points for --random")
    p.add_argument("--n", type=int, help="number of factors for --random")
    p.add_argument("--dump-matrix", action="store_true")
    p.set_defaults(handler=cmd_gram)

    for name, handler, helptext in (("certify", cmd_certify, "sweep one inequality (all when omitted)"),
                                    ("sweep-all", cmd_sweep_all, "sweep every inequality")):
        p = sub.add_parser(name, help=helptext)
        _common(p, suppress=True)
        if name == "certify":
            p.add_argument("ineq_id", nargs="?")
            for pn in PARAM_NAMES:
                p.add_argument("--" + pn, dest="p_" + pn, metavar="LO:HI:COUNT")
            p.add_argument("--factors", type=int, help="factor count for the product inequalities")
        p.add_argument("--random", type=int, help=f"random draws per id (default {DEFAULT_RANDOM})")
        p.add_argument("--variant", choices=[v.value for v in gr.Variant], default=gr.Variant.DERIVED.value)
        p.add_argument("--summary-only", action="store_true")
        p.set_defaults(handler=handler)

    p = sub.add_parser("oracle", help="check an integral representation by quadrature")
    _common(p, suppress=True)
    p.add_argument("transform", choices=TRANSFORMS)
    for pn in ("a", "b", "z", "q", "x", "c", "k", "m"):
        p.add_argument("--" + pn, dest="o_" + pn, type=_complex)
    p.add_argument("--random", type=int, default=0)
    p.add_argument("--cutoff", type=float)
    p.add_argument("--nodes", type=int)
    p.add_argument("--order", type=int, default=64)
    p.add_argument("--scheme", choices=[s.value for s in orc.Scheme], default=orc.Scheme.GAUSS_LEGENDRE.value)
    p.set_defaults(handler=cmd_oracle)
    return parser


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Rewrite ``--v -2:2:41`` as ``--v=-2:2:41``; argparse would read it as a flag."""
    out: list[str] = []
    for tok in argv:
        if (out and out[-1].startswith("--") and "=" not in out[-1] and len(tok) > 1
                and tok[0] == "-" and (tok[1].isdigit() or tok[1] == ".")):
            out[-1] = out[-1] + "=" + tok
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    try:
        return args.handler(args)
    except UsageError as exc:
        parser.error(str(exc))
    except CutoffInsufficient as exc:
        sys.stderr.write(to_json({"error": "CutoffInsufficient", "message": str(exc),
                                  "suggested_cutoff": exc.suggested_cutoff}) + "\n")
        return EXIT_USAGE
    except (QPositivityError, ValueError, OSError) as exc:
        sys.stderr.write(to_json({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
