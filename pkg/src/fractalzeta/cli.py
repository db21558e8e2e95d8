"""Command-line interface.

Every computing subcommand is described by a parameter schema that drives
both its argparse flags and the validation of JSON run configs, so the two
entry points accept exactly the same keys::

    fractalzeta zeta --s 2
    fractalzeta scan --c 0.5 --T 30 --out scan.csv
    fractalzeta run --config run.json
    fractalzeta report scan_a.json scan_b.json --out report.json

Exit status is 0 on success, 1 on usage errors and 2 when the mathematics
refuses the request (any :class:`~fractalzeta.exceptions.ZetaToolkitError`).
If ``--out`` is omitted and ``FRACTALZETA_OUT_DIR`` is set, artifacts are
written there under default names.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .complex_dimensions import counting_table, lattice_poles, tube_table
from .exceptions import SchemaMismatch, ZetaToolkitError
from .fractal_string import (
    SelfSimilarString,
    cantor_string,
    geometric_zeta,
    measurability_check,
    minkowski_dimension,
    string_from_dict,
    total_length,
)
from .io import read_csv, read_json, write_csv, write_json
from .rh_probe import asymmetry_summary, rh_scan, truncated_spectrum
from .spectral_operator import (
    DEFAULT_SEED,
    WeightedGrid,
    apply_continued,
    apply_dirichlet,
    apply_euler_product,
    apply_moebius_inverse,
    apply_multiplier_oracle,
    grid_function_from_csv,
    grid_function_to_csv,
    random_bumps,
    weighted_norm,
)
from .zeta_core import primes_up_to, xi, zeta, zeta_via_integral

__all__ = ["main", "RunConfig", "UsageError", "SCHEMAS", "run", "build_report"]

OUT_DIR_ENV = "FRACTALZETA_OUT_DIR"


class UsageError(Exception):
    """Bad command line or config; mapped to exit status 1."""


# --------------------------------------------------------------------------
# parameter schemas
# --------------------------------------------------------------------------


def _complex(text):
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return complex(text)
    if isinstance(text, (list, tuple)) and len(text) == 2:
        return complex(float(text[0]), float(text[1]))
    try:
        return complex(str(text).replace(" ", "").replace("i", "j"))
    except ValueError:
        raise UsageError(f"cannot read {text!r} as a complex number") from None


def _scalar(conv, label):
    def parse(value):
        if isinstance(value, bool):
            raise UsageError(f"expected {label}, got {value!r}")
        try:
            return conv(value)
        except (TypeError, ValueError):
            raise UsageError(f"expected {label}, got {value!r}") from None

    return parse


def _int(value):
    if isinstance(value, float) and not value.is_integer():
        raise ValueError
    return int(value)


_PARSERS = {
    "float": _scalar(float, "a real number"),
    "int": _scalar(_int, "an integer"),
    "str": _scalar(str, "a string"),
    "complex": _complex,
}


@dataclass(frozen=True)
class Param:
    name: str
    kind: str
    help: str
    default: object = None
    required: bool = False
    many: bool = False
    choices: tuple = ()

    @property
    def flag(self):
        return "--" + self.name.replace("_", "-")

    def coerce(self, value):
        parse = _PARSERS[self.kind]
        if self.many:
            if not isinstance(value, (list, tuple)):
                value = [value]
            out = [parse(v) for v in value]
            if not out:
                raise UsageError(f"{self.name} needs at least one value")
        else:
            if isinstance(value, (list, tuple)) and self.kind != "complex":
                raise UsageError(f"{self.name} takes a single value")
            out = parse(value)
        for v in out if self.many else [out]:
            if self.choices and v not in self.choices:
                raise UsageError(f"{self.name} must be one of {list(self.choices)}, got {v!r}")
        return out

    def describe(self):
        kind = f"list[{self.kind}]" if self.many else self.kind
        extra = " (required)" if self.required else f" (default {self.default!r})"
        if self.choices:
            extra += f" one of {list(self.choices)}"
        return f"{self.name}: {kind}{extra}"


_STRING_HELP = "fractal string: 'cantor' or a JSON spec file"

SCHEMAS = {
    "zeta": (
        Param("s", "complex", "point(s) s, e.g. 2 or 0.5+14.1j", required=True, many=True),
        Param("method", "str", "evaluation path", "euler_maclaurin",
              choices=("euler_maclaurin", "integral")),
        Param("function", "str", "zeta or the completed xi", "zeta", choices=("zeta", "xi")),
    ),
    "string": (
        Param("string", "str", _STRING_HELP, "cantor"),
        Param("J", "int", "lengths used by the measurability check", 100000),
    ),
    "dims": (
        Param("string", "str", _STRING_HELP, "cantor"),
        Param("nmax", "int", "poles with |n| <= nmax", 10),
    ),
    "tube": (
        Param("string", "str", _STRING_HELP, "cantor"),
        Param("eps", "float", "tube radius (repeatable)", required=True, many=True),
        Param("nmax", "int", "truncation of the pole sum", 200),
    ),
    "count": (
        Param("kind", "str", "counting function", "geometric",
              choices=("geometric", "spectral")),
        Param("x", "float", "evaluation point(s)", required=True, many=True),
        Param("nmax", "int", "truncation of the pole sum", 400),
        Param("string", "str", _STRING_HELP, "cantor"),
    ),
    "operator": (
        Param("kind", "str", "operator", "dirichlet",
              choices=("dirichlet", "moebius", "euler", "continued", "oracle")),
        Param("c", "float", "weight parameter", 2.0),
        Param("t_min", "float", "left end of the window", -1.0),
        Param("t_max", "float", "right end of the window", 5.0),
        Param("n_points", "int", "grid size (power of two)", 1024),
        Param("input", "str", "input CSV (t,re,im); a seeded bump if omitted", None),
        Param("index", "int", "which bump of the seeded family", 0),
        Param("func", "str", "oracle multiplier", "zeta",
              choices=("zeta", "xi", "xi_reflected")),
        Param("prime_bound", "int", "Euler product over primes <= prime_bound", 50),
        Param("m_max", "int", "Euler product exponent cap", 40),
    ),
    "scan": (
        Param("c", "float", "abscissa of the vertical line", None),
        Param("grid", "float", "several abscissae in (0, 1) (rh_scan table)", None, many=True),
        Param("T", "float", "height", required=True),
        Param("step", "float", "sampling step", 0.05),
        Param("exclude_pole", "int", "1 to drop |t| < 1e-3 when c = 1", 0, choices=(0, 1)),
    ),
}

SUBCOMMANDS = tuple(SCHEMAS)


def schema_text(subcommand):
    lines = [f"{subcommand} parameters:"]
    lines += ["  " + p.describe() for p in SCHEMAS[subcommand]]
    return "\n".join(lines)


def _validate_params(subcommand, params):
    if not isinstance(params, dict):
        raise UsageError("parameters must be an object\n" + schema_text(subcommand))
    known = {p.name: p for p in SCHEMAS[subcommand]}
    for key in params:
        if key not in known:
            raise UsageError(f"unknown parameter {key!r}\n" + schema_text(subcommand))
    out = {}
    for p in SCHEMAS[subcommand]:
        if params.get(p.name) is None:
            if p.required:
                raise UsageError(f"missing parameter {p.name!r}\n" + schema_text(subcommand))
            out[p.name] = p.default
        else:
            try:
                out[p.name] = p.coerce(params[p.name])
            except UsageError as exc:
                raise UsageError(f"{exc}\n" + schema_text(subcommand)) from None
    return out


_CONFIG_KEYS = ("subcommand", "parameters", "output_path", "seed")
_CONFIG_SCHEMA = (
    "run config keys:\n  subcommand: one of " + ", ".join(SUBCOMMANDS)
    + "\n  parameters: object (see the subcommand)\n  output_path: path or null"
    + f"\n  seed: integer (default {DEFAULT_SEED})"
)


@dataclass(frozen=True)
class RunConfig:
    """A validated request: subcommand, its parameters, output path and seed."""

    subcommand: str
    parameters: dict = field(default_factory=dict)
    output_path: str | None = None
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.subcommand not in SCHEMAS:
            raise UsageError(f"unknown subcommand {self.subcommand!r}\n" + _CONFIG_SCHEMA)
        seed = self.seed
        if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
            raise UsageError(f"seed must be an integer in [0, 2**64), got {seed!r}")
        object.__setattr__(self, "parameters", _validate_params(self.subcommand, self.parameters))

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise UsageError("run config must be a JSON object\n" + _CONFIG_SCHEMA)
        for key in data:
            if key not in _CONFIG_KEYS:
                raise UsageError(f"unknown config key {key!r}\n" + _CONFIG_SCHEMA)
        if "subcommand" not in data:
            raise UsageError("missing config key 'subcommand'\n" + _CONFIG_SCHEMA)
        return cls(
            subcommand=data["subcommand"],
            parameters=data.get("parameters") or {},
            output_path=data.get("output_path"),
            seed=data.get("seed", DEFAULT_SEED),
        )


# --------------------------------------------------------------------------
# handlers
# --------------------------------------------------------------------------


def _load_string(spec):
    if spec == "cantor":
        return cantor_string()
    try:
        with open(spec, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read string spec {spec!r}: {exc.strerror}") from None
    except json.JSONDecodeError:
        raise SchemaMismatch(f"{spec}: not valid JSON") from None
    return string_from_dict(data)


def _fmt(v, digits=10):
    v = complex(v)
    if abs(v.imag) <= 1e-12 * max(1.0, abs(v.real)):
        return f"{v.real:.{digits}f}"
    return f"{v.real:.{digits}f}{v.imag:+.{digits}f}i"


def _out_path(out, default_name):
    if out is not None:
        return Path(out)
    env = os.environ.get(OUT_DIR_ENV)
    return Path(env) / default_name if env else None


def _sidecar(path):
    return path.with_suffix(".json")


def _run_zeta(p, out, seed):
    values = []
    for s in p["s"]:
        if p["function"] == "xi":
            values.append(xi(s))
        elif p["method"] == "integral":
            values.append(zeta_via_integral(s))
        else:
            values.append(zeta(s))
    path = _out_path(out, "zeta.json")
    if path:
        write_json(path, {
            "function": p["function"],
            "method": p["method"],
            "points": [[s.real, s.imag] for s in p["s"]],
            "values": [[v.real, v.imag] for v in values],
        })
    return [_fmt(v) for v in values], [path] if path else []


def _run_string(p, out, seed):
    S = _load_string(p["string"])
    D = minkowski_dimension(S)
    info = {"kind": S.kind, "dimension": D, "total_length": total_length(S),
            "zeta_at_0": None}
    try:
        info["zeta_at_0"] = geometric_zeta(S, 0).real
    except ZetaToolkitError:
        pass
    if not S.is_finite:
        m = measurability_check(S, D, J=p["J"])
        info.update(measurable=m.verdict.value, lower_content=m.L_est, upper_content=m.M_est)
    path = _out_path(out, "string.json")
    if path:
        write_json(path, info)
    line = f"{S.kind}: D={D:.12g} total_length={info['total_length']:.12g}"
    if "measurable" in info:
        line += f" {info['measurable']}"
    return [line], [path] if path else []


def _self_similar(spec):
    S = _load_string(spec)
    if not isinstance(S, SelfSimilarString):
        raise UsageError(f"string {spec!r} is not self-similar")
    return S


def _run_dims(p, out, seed):
    dims = lattice_poles(_self_similar(p["string"]), p["nmax"])
    path = _out_path(out, "dims.csv")
    if path:
        rows = [(int(n), w.real, w.imag, r.real, r.imag)
                for n, w, r in zip(dims.n_range, dims.poles, dims.residues)]
        write_csv(path, ("n", "re_omega", "im_omega", "re_residue", "im_residue"), rows)
    line = f"D={dims.D:.12g} p={dims.p:.12g} residue={_fmt(dims.residue)} poles={dims.poles.size}"
    return [line], [path] if path else []


def _run_tube(p, out, seed):
    rows = tube_table(_self_similar(p["string"]), p["eps"], p["nmax"])
    path = _out_path(out, "tube.csv")
    if path:
        write_csv(path, ("eps", "direct", "formula", "error"),
                  [(r["eps"], r["direct"], r["formula"], r["error"]) for r in rows])
    lines = [f"eps={r['eps']:.10g} direct={r['direct']:.10f} formula={r['formula']:.10f}"
             for r in rows]
    return lines, [path] if path else []


def _run_count(p, out, seed):
    rows = counting_table(p["kind"], p["x"], p["nmax"], _self_similar(p["string"]))
    path = _out_path(out, f"count_{p['kind']}.csv")
    if path:
        write_csv(path, ("x", "direct", "formula"),
                  [(r["x"], r["direct"], r["formula"]) for r in rows])
    lines = [f"x={r['x']:.10g} direct={r['direct']} formula={r['formula']:.6f}" for r in rows]
    return lines, [path] if path else []


def _run_operator(p, out, seed):
    if p["input"]:
        f = grid_function_from_csv(p["input"], p["c"])
    else:
        grid = WeightedGrid(p["c"], p["t_min"], p["t_max"], p["n_points"])
        f = random_bumps(grid, p["index"] + 1, seed=seed)[p["index"]]
    kind = p["kind"]
    if kind == "dirichlet":
        g = apply_dirichlet(f)
    elif kind == "moebius":
        g = apply_moebius_inverse(f)
    elif kind == "euler":
        g = apply_euler_product(f, primes_up_to(p["prime_bound"]).tolist(), p["m_max"])
    elif kind == "continued":
        g = apply_continued(f)
    else:
        g = apply_multiplier_oracle(f, p["func"])
    nf, ng = weighted_norm(f), weighted_norm(g)
    path = _out_path(out, f"operator_{kind}.csv")
    artifacts = []
    if path:
        artifacts.append(grid_function_to_csv(g, path))
        artifacts.append(write_json(_sidecar(path), {
            "kind": kind, "c": f.grid.c, "input_norm": nf, "output_norm": ng,
            "overflow": g.overflow, "lost_tail_bound": g.lost_tail_bound, "seed": seed,
        }))
    line = f"{kind} c={f.grid.c:g}: |f|_c={nf:.10g} |Af|_c={ng:.10g} overflow={g.overflow}"
    return [line], artifacts


SCAN_HEADER = ("c", "T", "t", "re_zeta", "im_zeta", "abs_zeta")
GRID_HEADER = ("c", "T", "min_modulus", "argmin_t", "zero_count")


def _run_scan(p, out, seed):
    if (p["c"] is None) == (p["grid"] is None):
        raise UsageError("scan needs exactly one of c or grid\n" + schema_text("scan"))
    T, step = p["T"], p["step"]
    if p["grid"] is not None:
        res = rh_scan(p["grid"], T, step)
        path = _out_path(out, f"rh_scan_T{T:g}.csv")
        artifacts = []
        if path:
            rows = [(r["c"], T, r["min_modulus"], r["argmin_t"], r["zero_count"])
                    for r in res.rows]
            artifacts.append(write_csv(path, GRID_HEADER, rows))
            artifacts.append(write_json(_sidecar(path), res.to_dict()))
        lines = [f"c={r['c']:g} T={T:g}: min|zeta|={r['min_modulus']:.6g} "
                 f"zeros={r['zero_count']} {r['verdict']}" for r in res.rows]
        return lines, artifacts
    scan = truncated_spectrum(p["c"], T, step, exclude_pole=bool(p["exclude_pole"]))
    path = _out_path(out, f"scan_c{p['c']:g}_T{T:g}.csv")
    artifacts = []
    if path:
        rows = [(scan.c, T, t, v.real, v.imag, abs(v)) for t, v in zip(scan.t, scan.values)]
        artifacts.append(write_csv(path, SCAN_HEADER, rows))
        artifacts.append(write_json(_sidecar(path), scan.summary()))
    zs = ", ".join(f"{z:.6f}" for z in scan.zeros)
    line = (f"c={scan.c:g} T={T:g}: {len(scan.zeros)} zeros [{zs}] "
            f"min|zeta|={scan.min_modulus:.6g} {scan.summary()['verdict']}")
    return [line], artifacts


_HANDLERS = {
    "zeta": _run_zeta,
    "string": _run_string,
    "dims": _run_dims,
    "tube": _run_tube,
    "count": _run_count,
    "operator": _run_operator,
    "scan": _run_scan,
}


def run(config):
    """Execute a :class:`RunConfig`; returns ``(lines, artifact_paths)``."""
    return _HANDLERS[config.subcommand](config.parameters, config.output_path, config.seed)


# --------------------------------------------------------------------------
# report
# --------------------------------------------------------------------------

_TABLE_HEADERS = {
    SCAN_HEADER: "scan_samples",
    GRID_HEADER: "rh_scan_table",
    ("eps", "direct", "formula", "error"): "tube",
    ("x", "direct", "formula"): "count",
    ("n", "re_omega", "im_omega", "re_residue", "im_residue"): "dims",
    ("t", "re", "im"): "grid_function",
}


def _read_header(path):
    with open(path, encoding="utf-8") as fh:
        return tuple(fh.readline().strip().split(","))


def _scan_summary_from(data):
    return {"c": float(data["c"]), "T": float(data["T"]),
            "min_modulus": float(data["min_modulus"]), "zero_count": len(data["zeros"]),
            "zeros": [float(z) for z in data["zeros"]], "verdict": data["verdict"]}


def build_report(paths):
    """Merge run artifacts into one JSON-ready dictionary."""
    if not paths:
        return {}
    scans, tables, summaries = [], [], []
    for path in paths:
        path = str(path)
        if path.endswith(".json"):
            data = read_json(path)
            if isinstance(data, dict) and {"c", "T", "min_modulus", "zeros", "verdict"} <= set(data):
                scans.append(_scan_summary_from(data))
            elif isinstance(data, dict) and {"T", "rows", "asymmetry"} <= set(data):
                for r in data["rows"]:
                    scans.append(_scan_summary_from({**r, "T": data["T"]}))
            elif isinstance(data, dict) and data:
                summaries.append({"path": path, "content": data})
            else:
                raise SchemaMismatch(f"{path}: not an artifact written by this toolkit")
            continue
        try:
            header = _read_header(path)
        except (OSError, UnicodeDecodeError) as exc:
            raise SchemaMismatch(f"{path}: unreadable ({exc})") from None
        kind = _TABLE_HEADERS.get(header)
        if kind is None:
            raise SchemaMismatch(f"{path}: unknown column set {list(header)}")
        rows = np.array(read_csv(path, header), dtype=float).reshape(-1, len(header))
        entry = {"path": path, "kind": kind, "rows": int(rows.shape[0])}
        if kind == "scan_samples" and rows.size:
            k = int(np.argmin(rows[:, 5]))
            entry.update(c=rows[0, 0], T=rows[0, 1], min_sample_modulus=rows[k, 5],
                         argmin_t=rows[k, 2])
        elif kind in ("tube", "count") and rows.size:
            entry["max_abs_error"] = float(np.max(np.abs(rows[:, 2] - rows[:, 1])))
        tables.append(entry)
    scans.sort(key=lambda s: (s["c"], s["T"]))
    report = {"scans": scans, "tables": tables, "summaries": summaries}
    if scans:
        report["asymmetry"] = asymmetry_summary(scans)
    return report


# --------------------------------------------------------------------------
# argparse front end
# --------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage().strip()}")


def _add_schema_args(sub, subcommand):
    for p in SCHEMAS[subcommand]:
        kwargs = {"dest": p.name, "help": p.help, "default": None}
        if p.many:
            kwargs["nargs"] = "+"
        sub.add_argument(p.flag, **kwargs)


def build_parser():
    parser = _Parser(prog="fractalzeta", description="Zeta functions, fractal strings "
                     "and the spectral operator from the command line.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in SUBCOMMANDS:
        sub = subs.add_parser(name, help=f"{name} (see --help)",
                              epilog=schema_text(name),
                              formatter_class=argparse.RawDescriptionHelpFormatter)
        _add_schema_args(sub, name)
        sub.add_argument("--out", default=None, help="artifact path")
        sub.add_argument("--seed", type=int, default=DEFAULT_SEED,
                         help="seed for generated test functions")
    run_p = subs.add_parser("run", help="execute a JSON run config")
    run_p.add_argument("--config", required=True, help="path to the run config")
    rep = subs.add_parser("report", help="merge artifacts into one JSON report")
    rep.add_argument("paths", nargs="*", help="artifacts written by earlier runs")
    rep.add_argument("--out", default=None, help="report path (stdout if omitted)")
    return parser


def _dispatch(args):
    if args.command is None:
        raise UsageError("a subcommand is required: " + ", ".join(SUBCOMMANDS + ("run", "report")))
    if args.command == "report":
        report = build_report(args.paths)
        path = _out_path(args.out, "report.json")
        if path:
            write_json(path, report)
            print(f"report: {len(report.get('scans', []))} scans, "
                  f"{len(report.get('tables', []))} tables -> {path}")
        else:
            print(json.dumps(report, indent=2, sort_keys=True))
        return 0
    if args.command == "run":
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read config {args.config!r}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {args.config!r} is not valid JSON: {exc.msg}") from None
        config = RunConfig.from_dict(data)
    else:
        params = {p.name: getattr(args, p.name) for p in SCHEMAS[args.command]}
        params = {k: v for k, v in params.items() if v is not None}
        config = RunConfig(args.command, params, args.out, args.seed)
    lines, artifacts = run(config)
    for line in lines:
        print(line)
    for path in artifacts:
        print(f"wrote {path}")
    return 0


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _dispatch(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ZetaToolkitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
