"""
Command-line experiment runner.

Every subcommand writes one CSV or JSON document to ``--out`` (or stdout).
Exit status: 0 on success, 2 when a checked claim fails, 1 on usage errors.

Size lists for ``--n`` accept ``64,128,256``, an inclusive range ``64..512``
(every integer), a stepped range ``64..512:16`` or a doubling range
``64..512:x2``.

Options may also come from ``--config FILE`` holding flat ``key = value``
lines named after the long flags (``delta = 1.0``, ``map = power3``) plus an
optional ``command`` key.  Flags on the command line win over the file.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import sys
from pathlib import Path

import numpy as np

from . import io
from .decomposition import (BlockDecomposition, amgm_certificate, search_constant_splits,
                            solve_feasibility)
from .distribution import (eigen_distribution_test, extreme_convergence_study,
                           negative_count_law, singular_distribution_test)
from .eigsolve import fit_convergence_order, jacobi_eigenvalues, singular_values
from .grid import GridMap, GridSpec, power_ratio_exact, ratios_of
from .matrix import build_L, build_momentary_matrix, residual_spectral_gap, stationary_toeplitz, symmetrize
from .symbol import (DELTA, ETA, Phi, SymbolParams, cos_quadratic, eval_kappa, eval_re_kappa,
                     extrema_on_interval, negative_level_measure, sample_symbol)

__all__ = ["main", "run", "parse_sizes", "UsageError"]

EXIT_OK, EXIT_USAGE, EXIT_CLAIM = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def parse_sizes(text: str) -> list[int]:
    text = str(text).strip()
    try:
        if ".." in text:
            lo, rest = text.split("..", 1)
            hi, _, step = rest.partition(":")
            lo, hi = int(lo), int(hi)
            if step.startswith("x"):
                factor = int(step[1:])
                if factor < 2 or lo < 1:
                    raise ValueError
                out = []
                n = lo
                while n <= hi:
                    out.append(n)
                    n *= factor
            else:
                out = list(range(lo, hi + 1, int(step) if step else 1))
        else:
            out = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None
    if not out or any(n < 2 for n in out):
        raise argparse.ArgumentTypeError(f"size list {text!r} must be non-empty with every n >= 2")
    return out


def _map_spec(name: str) -> dict:
    key = name.strip().lower().replace("_", "-")
    if key in ("identity", "uniform", "power1"):
        return {"kind": "uniform"}
    if key in ("affine-quadratic", "affquad"):
        return {"kind": "affine-quadratic"}
    if key.startswith("power"):
        try:
            return {"kind": "power", "p": float(key[5:])}
        except ValueError:
            pass
    raise UsageError(f"unknown map {name!r} (try power2, power3, affine-quadratic, identity)")


# ----------------------------------------------------------------- options

def _common(p: argparse.ArgumentParser):
    p.add_argument("--delta", type=float, default=DELTA)
    p.add_argument("--eta", type=float, default=ETA)
    p.add_argument("--T", type=float, default=1.0, help="final time")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--tol", type=float, default=1e-12, help="Jacobi tolerance")


def _grid_opts(p: argparse.ArgumentParser, n_default="64"):
    g = p.add_argument_group("grid")
    g.add_argument("--grid", choices=("uniform", "power", "affine-quadratic", "random", "constant"))
    g.add_argument("--map", help="power2, power3, affine-quadratic, identity")
    g.add_argument("--p", type=float, help="exponent of a power grid")
    g.add_argument("--r", type=float, help="constant step ratio")
    g.add_argument("--lo", type=float, default=0.5)
    g.add_argument("--hi", type=float, default=1.9398)
    g.add_argument("--seed", type=int, default=42)
    g.add_argument("--ratios-file", help="CSV of ratios r_2..r_n (overrides n)")
    g.add_argument("--n", type=parse_sizes, default=parse_sizes(n_default))


def _build_parser() -> _Parser:
    top = _Parser(prog="vartoeplitz", description="Variable-step BDF2 matrix experiments.")
    sub = top.add_subparsers(dest="command", parser_class=_Parser)

    def cmd(name, help_, n_default="64"):
        p = sub.add_parser(name, help=help_, description=help_)
        _common(p)
        if n_default is not None:
            _grid_opts(p, n_default)
        return p

    p = cmd("build", "emit the grid, L and its symmetric part S")
    p.add_argument("--matrix", choices=("L", "S", "both"), default="both")
    p.add_argument("--dense", action="store_true", help="dense text instead of COO")

    cmd("eigs", "Jacobi eigenvalues of S")
    cmd("svd", "one-sided Jacobi singular values of L")

    p = cmd("symbol", "symbol extrema, negative-set measure or samples", n_default=None)
    p.add_argument("mode", nargs="?", choices=("extrema", "measure", "sample"), default="extrema")
    p.add_argument("--stationary", action="store_true", help="constant-ratio symbol (uses --r, default 1)")
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--phi", default="one", help="one, square, one_plus_cos2 or a number")
    p.add_argument("--part", choices=("real", "modulus"), default="real")
    p.add_argument("--nx", type=int, default=64)
    p.add_argument("--ntheta", type=int, default=64)
    p.add_argument("--quantiles", action="store_true", help="emit sorted samples k,q_k")

    p = cmd("dist-test", "quantile distance of spectra to the symbol as n grows", n_default=None)
    p.add_argument("--phi", default="square")
    p.add_argument("--n", type=parse_sizes, default=parse_sizes("80,160,240"))
    p.add_argument("--kind", choices=("eig", "svd", "both"), default="both")
    p.add_argument("--slack", type=float, default=0.1)
    p.add_argument("--oversample", type=int, default=4)

    p = cmd("psd-scan", "smallest eigenvalue of S against n", n_default="64..512")
    p.add_argument("--solver", choices=("lapack", "jacobi"), default="lapack")
    p.add_argument("--expect", choices=("pd", "indefinite"))

    p = cmd("extremes", "convergence order of the extreme eigenvalues", n_default=None)
    p.add_argument("--n", type=parse_sizes, default=parse_sizes("64..1024:x2"))
    p.add_argument("--order", type=float, default=2.0)
    p.add_argument("--order-tol", type=float, default=0.15)

    p = cmd("count", "negative eigenvalue count against n mu / pi", n_default=None)
    p.add_argument("--r", type=float, default=2.5)
    p.add_argument("--n", type=parse_sizes, default=parse_sizes("128..1024:x2"))

    p = cmd("momentary", "residuals against the Toeplitz and momentary models", n_default=None)
    p.add_argument("--map", default="affine-quadratic")
    p.add_argument("--n", type=parse_sizes, default=parse_sizes("64..512:x2"))
    p.add_argument("--slope1", type=float, default=-1.0)
    p.add_argument("--slope1-tol", type=float, default=0.3)
    p.add_argument("--slope2-max", type=float, default=-1.7)

    p = cmd("decompose", "PSD block splitting of 2S with verification and certificate", n_default="16")
    p.add_argument("--strategy", choices=("proportional-iterative", "constant-split", "exhaustive"),
                   default="proportional-iterative")
    p.add_argument("--step", type=float, default=1e-3, help="alpha step for --strategy exhaustive")
    p.add_argument("--max-iter", type=int, default=5000)
    p.add_argument("--expect", choices=("feasible", "infeasible"))
    return top


# ----------------------------------------------------------------- helpers

def _params(a) -> SymbolParams:
    return SymbolParams(a.delta, a.eta)


def _ratios(a, n: int) -> np.ndarray:
    if a.ratios_file:
        return io.read_ratios_csv(a.ratios_file)
    kind = a.grid
    spec = {}
    if a.map:
        spec = _map_spec(a.map)
        kind = kind or spec["kind"]
    if kind is None:
        kind = "constant" if a.r is not None else "uniform"
    if kind == "constant":
        if a.r is None:
            raise UsageError("--grid constant needs --r")
        if not a.r > 0:
            raise UsageError("--r must be positive")
        return np.full(n - 1, float(a.r))
    p = a.p if a.p is not None else spec.get("p")
    gs = GridSpec(kind=kind, n=n, T=a.T, p=p, lo=a.lo, hi=a.hi, seed=a.seed)
    return ratios_of(gs.build(n))


def _single_n(a) -> int:
    if len(a.n) != 1:
        raise UsageError("this subcommand takes a single --n")
    return a.n[0]


def _phi(name: str, T: float) -> Phi:
    try:
        return Phi.builtin(name, T)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _records(a, schema: str, records, fields, extra: dict | None = None) -> str:
    if a.format == "json":
        return io.dump_json(schema, {**(extra or {}), "records": records})
    return io.write_records_csv(schema, records, fields)


# ----------------------------------------------------------------- commands

def _cmd_build(a):
    n = _single_n(a)
    r = _ratios(a, n)
    L = build_L(r, _params(a))
    S = symmetrize(L)
    if a.format == "json":
        payload = {"n": r.size + 1, "ratios": r}
        if a.matrix in ("L", "both"):
            payload["L"] = L.toarray()
        if a.matrix in ("S", "both"):
            payload["S"] = S
        return io.dump_json("build", payload), True
    write = io.write_matrix_dense if a.dense else io.write_matrix_coo
    parts = [io.write_ratios_csv(r)]
    if a.matrix in ("L", "both"):
        parts.append(write(L))
    if a.matrix in ("S", "both"):
        parts.append(write(S))
    return "".join(parts), True


def _spectrum(a, kind):
    n = _single_n(a)
    r = _ratios(a, n)
    L = build_L(r, _params(a))
    if kind == "eigs":
        sample = jacobi_eigenvalues(symmetrize(L), a.tol)
    else:
        sample = singular_values(L, a.tol)
    if a.format == "json":
        return io.dump_json(f"spectrum-{sample.kind}", {"n": n, "sweeps": sample.sweeps,
                                                        "values": sample.values}), True
    return io.write_spectrum_csv(sample), True


def _cmd_symbol(a):
    params = _params(a)
    if a.mode == "extrema":
        r = 1.0 if a.r is None else a.r
        if not a.stationary and a.r is None:
            phi = _phi(a.phi, a.T)
            if not phi.is_constant:
                raise UsageError("extrema are available for constant ratios; use --stationary or --r")
            r = phi.value
        ext = extrema_on_interval(params, r)
        q = cos_quadratic(params, r)
        rows = {"r": r, "min": ext.min, "argmin": ext.argmin, "max": ext.max, "argmax": ext.argmax,
                "z_e": q.vertex if q.a != 0 else None,
                "P_z_e": q.vertex_value if q.a != 0 else None}
        if a.format == "json":
            return io.dump_json("symbol-extrema", rows), True
        return io.write_records_csv("symbol-extrema", [{"quantity": k, "value": v} for k, v in rows.items()],
                                    ("quantity", "value")), True
    if a.mode == "measure":
        r = 1.0 if a.r is None else a.r
        mu = negative_level_measure(params, r)
        rows = {"r": r, "mu": mu, "fraction": mu / math.pi}
        if a.format == "json":
            return io.dump_json("symbol-measure", rows), True
        return io.write_records_csv("symbol-measure", [{"quantity": k, "value": v} for k, v in rows.items()],
                                    ("quantity", "value")), True
    phi = Phi.constant(1.0 if a.r is None else a.r) if (a.stationary or a.r is not None) else _phi(a.phi, a.T)
    if a.nx < 1 or a.ntheta < 1:
        raise UsageError("--nx and --ntheta must be positive")
    if a.quantiles:
        vals = sample_symbol(params, phi, a.nx, a.ntheta, a.part)
        if a.format == "json":
            return io.dump_json("quantiles", {"values": vals}), True
        return io.write_quantiles_csv(vals), True
    # same tensor grid as sample_symbol, left unsorted
    x = np.arange(1, a.nx + 1) / a.nx
    th = -math.pi + 2.0 * math.pi * np.arange(1, a.ntheta + 1) / a.ntheta
    X, TH = np.meshgrid(x, th, indexing="ij")
    if a.part == "real":
        vals = eval_re_kappa(params, phi, X, TH)
    else:
        vals = np.abs(eval_kappa(params, phi, X, TH))
    if a.format == "json":
        return io.dump_json("symbol", {"x": X.ravel(), "theta": TH.ravel(), "value": vals.ravel()}), True
    return io.write_symbol_csv(X, TH, vals), True


def _cmd_dist(a):
    phi = _phi(a.phi, a.T)
    params = _params(a)
    recs = []
    ok = True
    for kind, fn in (("eig", eigen_distribution_test), ("svd", singular_distribution_test)):
        if a.kind not in (kind, "both"):
            continue
        for rep in fn(phi, params, a.n, a.slack, a.oversample):
            ok &= rep.passed
            recs.append({"kind": kind, "n": rep.n, "l1": rep.l1, "sup": rep.sup,
                         "lambda_min": rep.lambda_min, "lambda_max": rep.lambda_max,
                         "passed": rep.passed})
    fields = ("kind", "n", "l1", "sup", "lambda_min", "lambda_max", "passed")
    return _records(a, "dist-test", recs, fields, {"phi": phi.name, "decreasing": ok}), ok


def _cmd_psd(a):
    params = _params(a)
    recs = []
    for n in a.n:
        r = _ratios(a, n)
        S = symmetrize(build_L(r, params))
        if a.solver == "jacobi":
            ev = jacobi_eigenvalues(S, a.tol).values
        else:
            ev = np.linalg.eigvalsh(S)
        recs.append({"n": n, "r_2": r[0], "lambda_min": float(ev[0]), "lambda_max": float(ev[-1]),
                     "pd": bool(ev[0] > 0)})
    first_neg = next((rec["n"] for rec in recs if not rec["pd"]), None)
    extra = {"first_indefinite": first_neg}
    spec = _map_spec(a.map) if a.map else {}
    p = a.p if a.p is not None else spec.get("p")
    if (a.grid or spec.get("kind")) == "power" and p is not None and float(p).is_integer():
        extra["r_2_exact"] = str(power_ratio_exact(int(p), 2))
    ok = True
    if a.expect == "pd":
        ok = first_neg is None
    elif a.expect == "indefinite":
        ok = first_neg is not None
    fields = ("n", "r_2", "lambda_min", "lambda_max", "pd")
    return _records(a, "psd-scan", recs, fields, extra), ok


def _cmd_extremes(a):
    study = extreme_convergence_study(_params(a), a.n)
    recs = [{"n": n, "lambda_min": lo, "lambda_max": hi, "err_min": lo - study.m, "err_max": study.M - hi}
            for n, lo, hi in zip(study.ns, study.lambda_min, study.lambda_max)]
    inside = all(rec["err_min"] > 0 and rec["err_max"] > 0 for rec in recs)
    ok = (inside and abs(study.order_min - a.order) <= a.order_tol
          and abs(study.order_max - a.order) <= a.order_tol)
    extra = {"m": study.m, "M": study.M, "order_min": study.order_min,
             "order_max": study.order_max, "strictly_inside": inside}
    fields = ("n", "lambda_min", "lambda_max", "err_min", "err_max")
    return _records(a, "extremes", recs, fields, extra), ok


def _cmd_count(a):
    recs, mu = negative_count_law(a.r, _params(a), a.n)
    rows = [rec.to_dict() for rec in recs]
    gaps = [rec.gap for rec in recs]
    ok = max(gaps) <= max(5.0, 2.0 * gaps[0])
    fields = ("n", "count", "predicted", "gap", "lambda_min", "lambda_max")
    return _records(a, "count", rows, fields, {"r": a.r, "mu": mu, "bounded": ok}), ok


def _cmd_momentary(a):
    spec = _map_spec(a.map)
    gmap = GridMap.from_name(a.map)
    params = _params(a)
    recs = []
    for n in a.n:
        r = ratios_of(GridSpec(kind=spec["kind"], n=n, T=a.T, p=spec.get("p")).build(n))
        S = symmetrize(build_L(r, params))
        g1 = residual_spectral_gap(S, stationary_toeplitz(params, n - 1), a.tol)
        g2 = residual_spectral_gap(S, build_momentary_matrix(gmap, n, params), a.tol)
        recs.append({"n": n, "gap_toeplitz": g1, "gap_momentary": g2})
    ns = [rec["n"] for rec in recs]
    if len(ns) < 3:
        raise UsageError("momentary needs at least three sizes")
    s1 = -fit_convergence_order(ns, [rec["gap_toeplitz"] for rec in recs])
    s2 = -fit_convergence_order(ns, [rec["gap_momentary"] for rec in recs])
    ok = abs(s1 - a.slope1) <= a.slope1_tol and s2 <= a.slope2_max
    fields = ("n", "gap_toeplitz", "gap_momentary")
    return _records(a, "momentary", recs, fields,
                    {"map": a.map, "slope_toeplitz": s1, "slope_momentary": s2}), ok


def _cmd_decompose(a):
    n = _single_n(a)
    r = _ratios(a, n)
    params = _params(a)
    cert = amgm_certificate(r, params)
    doc = {"n": r.size + 1, "strategy": a.strategy,
           "certificate": {"feasible_possible": cert.feasible_possible, "lower_bound": cert.lower_bound,
                           "budget": cert.budget, "interior_rate": cert.interior_rate}}
    if a.strategy == "exhaustive":
        hits = search_constant_splits(r, params, a.step)
        doc["constant_splits_found"] = len(hits)
        found = bool(hits)
        doc["found"] = found
        if hits:
            doc["alphas"] = hits
    else:
        res = solve_feasibility(r, params, a.strategy, a.max_iter, a.tol)
        found = res.found
        doc.update(found=found, iterations=res.iterations, message=res.message)
        if res.report is not None:
            doc["verification"] = res.report.to_dict()
        if found:
            doc["decomposition"] = res.decomposition.to_dict()
            lam = jacobi_eigenvalues(2.0 * symmetrize(build_L(r, params)), a.tol).values[0]
            doc["lambda_min_2S"] = float(lam)
    ok = True
    if a.expect == "feasible":
        ok = found
    elif a.expect == "infeasible":
        ok = not found
    if a.format == "json":
        return io.dump_json("decompose", doc), ok
    if found and "decomposition" in doc:
        return _decomposition_csv(BlockDecomposition.from_dict(doc["decomposition"])), ok
    flat = [{"quantity": k, "value": v} for k, v in doc["certificate"].items()]
    flat.append({"quantity": "found", "value": found})
    return io.write_records_csv("decompose", flat, ("quantity", "value")), ok


def _decomposition_csv(dec: BlockDecomposition) -> str:
    size = dec.a.size
    col = lambda v, i: v[i] if i < v.size else None  # noqa: E731
    rows = [{"i": i, "a": col(dec.a, i), "b": col(dec.b, i), "c": col(dec.c, i), "d": col(dec.d, i)}
            for i in range(size)]
    return io.write_records_csv("decomposition", rows, ("i", "a", "b", "c", "d"))


_COMMANDS = {
    "build": _cmd_build,
    "eigs": lambda a: _spectrum(a, "eigs"),
    "svd": lambda a: _spectrum(a, "svd"),
    "symbol": _cmd_symbol,
    "dist-test": _cmd_dist,
    "psd-scan": _cmd_psd,
    "extremes": _cmd_extremes,
    "count": _cmd_count,
    "momentary": _cmd_momentary,
    "decompose": _cmd_decompose,
}


# ----------------------------------------------------------------- config

def _split_config(argv: list[str]) -> tuple[list[str], str | None]:
    out, path = [], None
    it = iter(range(len(argv)))
    for i in it:
        tok = argv[i]
        if tok == "--config":
            if i + 1 >= len(argv):
                raise UsageError("--config needs a file")
            path = argv[i + 1]
            next(it)
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
        else:
            out.append(tok)
    return out, path


def _config_tokens(parser: _Parser, argv: list[str], path: str) -> list[str]:
    try:
        cfg = io.parse_config(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"config {path!r}: {exc}") from None
    command = cfg.pop("command", None)
    if not argv or argv[0] not in _COMMANDS:
        if command is None:
            raise UsageError("no subcommand given")
        argv = [command, *argv]
    elif command is not None and command != argv[0]:
        raise UsageError(f"config is for {command!r}, not {argv[0]!r}")
    sub = parser._subparsers._group_actions[0].choices[argv[0]]
    tokens = []
    for key, value in cfg.items():
        flag = "--" + key.replace("_", "-")
        action = sub._option_string_actions.get(flag)
        if action is None or flag in ("--help", "--config"):
            raise UsageError(f"unknown config key {key!r} for {argv[0]}")
        if action.nargs == 0:
            if value.lower() in ("1", "true", "yes", "on"):
                tokens.append(flag)
            elif value.lower() not in ("0", "false", "no", "off"):
                raise UsageError(f"config key {key!r} expects a boolean")
        else:
            tokens += [flag, value]
    return [argv[0], *tokens, *argv[1:]]


# ----------------------------------------------------------------- entry

def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        argv, cfg_path = _split_config(argv)
        if cfg_path is not None:
            argv = _config_tokens(parser, argv, cfg_path)
        try:
            with contextlib.redirect_stdout(stdout):
                a = parser.parse_args(argv)
        except SystemExit as exc:  # --help
            return EXIT_OK if not exc.code else EXIT_USAGE
        if a.command is None:
            raise UsageError(parser.format_usage() + "vartoeplitz: error: a subcommand is required")
        text, ok = _COMMANDS[a.command](a)
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        stderr.write(f"vartoeplitz: error: {exc}\n")
        return EXIT_USAGE
    if a.out:
        Path(a.out).write_text(text)
    else:
        stdout.write(text)
    if not ok:
        stderr.write(f"vartoeplitz {a.command}: claim check failed\n")
        return EXIT_CLAIM
    return EXIT_OK


def main(argv=None) -> int:
    return run(argv)
