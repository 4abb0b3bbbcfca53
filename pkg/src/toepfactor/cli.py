"""Command-line harness: ``generate``, ``factor``, ``solve`` and ``bench``.

Exit codes: 0 success, 2 usage error, 3 breakdown / not positive definite,
4 I/O error.  Diagnostics go to stderr; data goes to stdout unless ``-o`` is
given.
"""

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .bareiss import bareiss_factor
from .core import EPS, ToeplitzSpd
from .downdate import GeneratorPair
from .errors import Breakdown, DomainError, ToeplitzError
from .factor import factor, factor_scaled
from .genmat import (
    REFERENCE_INSTANCES,
    RNG_NAME,
    Instance,
    generators_from_dense,
    toeplitz_generators,
)
from .solvers import cholesky_dense, levinson_solve, solve_with_factor, TriangularFactor
from .stability import (
    ALGORITHMS,
    STANDARD_ALGORITHMS,
    RHS_MODES,
    decomposition_error,
    make_rhs,
    run_experiment,
    scaled_residual,
    solution_error,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BREAKDOWN = 3
EXIT_IO = 4

WORKERS_ENV = "TOEPFACTOR_WORKERS"

CSV_COLUMNS = (
    "algorithm",
    "n",
    "instance",
    "cond",
    "decomp_error",
    "soln_error",
    "scaled_residual",
    "warnings",
    "error",
)

FACTOR_METHODS = ("hyperbolic", "mixed", "mixed_alt", "scaled_hyperbolic", "scaled_mixed", "bareiss", "cholesky")
SOLVE_METHODS = FACTOR_METHODS + ("levinson",)


class UsageError(Exception):
    pass


# -- file formats -----------------------------------------------------------


def header_lines(**meta):
    lines = [f"# toepfactor {__version__}", f"# eps = {EPS.hex()}"]
    lines += [f"# {key} = {value}" for key, value in meta.items() if value is not None]
    return lines


def _data_lines(text):
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            yield line


def _parse_float(token):
    if "x" in token.lower():
        return float.fromhex(token)
    return float(token)


def format_vector(values, **meta):
    """Header comments, then ``n``, then one hexadecimal float per line."""
    values = np.asarray(values, dtype=np.float64)
    lines = header_lines(**meta) + [str(values.size)] + [float(v).hex() for v in values]
    return "\n".join(lines) + "\n"


def parse_vector(text):
    lines = list(_data_lines(text))
    if not lines:
        raise ValueError("empty vector file")
    n = int(lines[0])
    if len(lines) - 1 != n:
        raise ValueError(f"expected {n} entries, found {len(lines) - 1}")
    return np.array([_parse_float(tok) for tok in lines[1:]])


def parse_dense(text):
    lines = list(_data_lines(text))
    if not lines:
        raise ValueError("empty matrix file")
    n = int(lines[0])
    rows = [[_parse_float(tok) for tok in line.split()] for line in lines[1:]]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"expected {n} rows of {n} entries")
    return np.array(rows)


def format_factor(blocks, **meta):
    """``n``, then named blocks (``U``/``W`` as rows, ``D`` as one entry per line)."""
    lines = header_lines(**meta)
    n = None
    for name, arr in blocks:
        arr = np.asarray(arr, dtype=np.float64)
        if n is None:
            n = arr.shape[0]
            lines.append(str(n))
        lines.append(name)
        if arr.ndim == 2:
            lines += [" ".join(float(v).hex() for v in row) for row in arr]
        else:
            lines += [float(v).hex() for v in arr]
    return "\n".join(lines) + "\n"


def parse_factor(text):
    lines = list(_data_lines(text))
    n = int(lines[0])
    out = {}
    pos = 1
    while pos < len(lines):
        name = lines[pos]
        body = lines[pos + 1 : pos + 1 + n]
        vals = [[_parse_float(tok) for tok in line.split()] for line in body]
        out[name] = np.array(vals) if len(vals[0]) > 1 or name in ("U", "W") else np.array([v[0] for v in vals])
        pos += 1 + n
    return out


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from exc


def _emit(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w") as fh:
        fh.write(text)


def _info(msg):
    print(msg, file=sys.stderr)


# -- generate ---------------------------------------------------------------


def instance_from_args(args, n=None):
    n = args.n if n is None else n
    kind = args.kind
    if kind == "prolate":
        return Instance("prolate", {"n": n, "omega": args.omega})
    if kind == "refl":
        if args.rhos_file is not None or args.pattern == "file":
            if args.rhos_file is None:
                raise UsageError("--pattern file needs --rhos-file")
            rhos = parse_vector(_read(args.rhos_file))
            return Instance("reflection", {"rhos": rhos.tolist(), "t0": args.t0})
        if args.pattern == "alternating":
            if args.magnitude is None:
                raise UsageError("--pattern alternating needs --magnitude")
            return Instance(
                "reflection",
                {
                    "pattern": "alternating",
                    "n": n,
                    "magnitude": args.magnitude,
                    "magnitude_of": args.magnitude_of,
                    "t0": args.t0,
                },
            )
        raise UsageError(f"unknown pattern {args.pattern!r}")
    if kind == "random":
        return Instance("random", {"n": n, "rho_max": args.rho_max, "seed": args.seed, "t0": args.t0})
    raise UsageError(f"unknown instance kind {kind!r}")


def _add_instance_args(p, kind_positional):
    if kind_positional:
        p.add_argument("kind", nargs="?", choices=("prolate", "refl", "random"))
    p.add_argument("--omega", type=float, default=0.25, help="Prolate bandwidth (0, 1/2]")
    p.add_argument("--t0", type=float, default=1.0, help="diagonal value for refl/random")
    p.add_argument("--pattern", choices=("alternating", "file"), default="alternating")
    p.add_argument("--magnitude", type=float, help="magnitude for --pattern alternating")
    p.add_argument(
        "--magnitude-of",
        choices=("reflection", "cosine"),
        default="reflection",
        help="read --magnitude as |rho| (default) or as |cos theta|",
    )
    p.add_argument("--rhos-file", help="vector file of reflection coefficients (refl)")
    p.add_argument("--rho-max", type=float, default=0.9)
    p.add_argument("--seed", type=int, default=0)


def cmd_generate(args):
    if args.preset:
        inst = REFERENCE_INSTANCES[args.preset]
    else:
        if args.kind is None:
            raise UsageError("generate needs a kind or --preset")
        if args.n is None and not (args.kind == "refl" and args.rhos_file):
            raise UsageError("--n is required")
        inst = instance_from_args(args)
    T = inst.build()
    seed = args.seed if inst.kind == "random" else None
    rng = RNG_NAME if inst.kind == "random" else None
    _emit(format_vector(T.first_column, instance=inst.describe(), seed=seed, rng=rng), args.output)
    return EXIT_OK


# -- factor / solve ---------------------------------------------------------


def _load_matrix(path, dense):
    text = _read(path)
    try:
        if dense:
            return parse_dense(text)
        t = parse_vector(text)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from exc
    try:
        return ToeplitzSpd(t)
    except DomainError as exc:
        if not np.all(np.isfinite(t)):
            raise
        raise Breakdown(f"{path}: not positive definite ({exc})", step=_breakdown_step(t)) from exc


def _breakdown_step(t):
    """Step at which the generator recursion fails on a raw first column."""
    if not t[0] > 0:
        return 1
    u = t / np.sqrt(t[0])
    v = u.copy()
    v[0] = 0.0
    try:
        factor(GeneratorPair(u, v), "mixed")
    except Breakdown as exc:
        return exc.step
    return None


def _factorize(M, method):
    """Return ``(U, blocks, warnings)`` for a ``ToeplitzSpd`` or a dense array."""
    dense = not isinstance(M, ToeplitzSpd)
    if method == "cholesky":
        U = cholesky_dense(M if dense else M.to_dense()).U
        return U, [("U", U)], []
    if method == "bareiss":
        if dense:
            raise UsageError("method 'bareiss' needs a Toeplitz matrix, not --dense input")
        U, _ = bareiss_factor(M)
        return U, [("U", U)], []
    g0 = generators_from_dense(M) if dense else toeplitz_generators(M)
    if method.startswith("scaled_"):
        res = factor_scaled(g0, method)
        return res.U, [("W", res.W), ("D", res.D)], list(res.warnings)
    res = factor(g0, method)
    return res.U, [("U", res.U)], list(res.warnings)


def cmd_factor(args):
    M = _load_matrix(args.matrix, args.dense)
    U, blocks, warnings = _factorize(M, args.method)
    err = decomposition_error(M, U)
    n = U.shape[0]
    _emit(format_factor(blocks, method=args.method), args.output)
    summary = f"method={args.method} n={n} decomp_error={err:.6g} near_breakdown_steps={warnings}"
    print(summary, file=sys.stdout if args.output else sys.stderr)
    return EXIT_OK


def cmd_solve(args):
    M = _load_matrix(args.matrix, args.dense)
    if args.rhs is not None:
        b = parse_vector(_read(args.rhs))
        x_true = None
    else:
        if args.dense:
            raise UsageError("--dense input needs an explicit --rhs file")
        b, x_true = make_rhs(M, args.rhs_mode, args.seed)
    if args.method == "levinson":
        if args.dense:
            raise UsageError("method 'levinson' needs a Toeplitz matrix")
        x, _ = levinson_solve(M, b)
    else:
        U, _, _ = _factorize(M, args.method)
        x = solve_with_factor(TriangularFactor(U), b)
    res = scaled_residual(M, x, b)
    _emit(format_vector(x, method=args.method), args.output)
    summary = f"method={args.method} n={x.size} scaled_residual={res:.6g}"
    if x_true is not None:
        summary += f" soln_error={solution_error(x, x_true):.6g}"
    print(summary, file=sys.stdout if args.output else sys.stderr)
    return EXIT_OK


# -- bench ------------------------------------------------------------------


def parse_sizes(spec):
    """``"21"``, ``"10,20,40"`` or an inclusive range ``"10:100:10"``."""
    sizes = []
    for part in str(spec).split(","):
        part = part.strip()
        if ":" in part:
            fields = [int(f) for f in part.split(":")]
            if len(fields) == 2:
                fields.append(1)
            lo, hi, step = fields
            if step <= 0:
                raise UsageError(f"bad size range {part!r}")
            sizes += list(range(lo, hi + 1, step))
        elif part:
            sizes.append(int(part))
    if not sizes or any(n < 1 for n in sizes):
        raise UsageError(f"bad size list {spec!r}")
    return sizes


def _apply_config(args):
    if not args.config:
        return
    try:
        cfg = json.loads(_read(args.config))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.config}: {exc}") from exc
    for key, value in cfg.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise UsageError(f"unknown config key {key!r}")
        if attr == "algorithms" and isinstance(value, list):
            value = ",".join(value)
        setattr(args, attr, value)


def _bench_instances(args):
    if args.preset:
        inst = REFERENCE_INSTANCES[args.preset]
        return [inst]
    if args.kind is None:
        raise UsageError("bench needs --preset or --kind")
    if args.n is None:
        raise UsageError("--n is required")
    return [instance_from_args(args, n) for n in parse_sizes(args.n)]


def report_rows(reports):
    rows = []
    for rep in reports:
        rows.append(
            {
                "algorithm": rep.algorithm,
                "n": rep.n,
                "instance": rep.instance_descriptor,
                "cond": rep.cond_estimate,
                "decomp_error": rep.decomp_error,
                "soln_error": rep.soln_error,
                "scaled_residual": rep.scaled_residual,
                "warnings": ";".join(rep.warnings),
                "error": rep.error,
            }
        )
    return rows


def format_rows(rows, fmt, meta):
    if fmt == "json":
        return json.dumps({"meta": meta, "columns": list(CSV_COLUMNS), "rows": rows}, indent=2) + "\n"
    buf = io.StringIO()
    for line in header_lines(**meta):
        buf.write(line + "\n")
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ("" if row[k] is None else row[k]) for k in CSV_COLUMNS})
    return buf.getvalue()


def cmd_bench(args):
    _apply_config(args)
    algorithms = [a.strip() for a in (args.algorithms or "").split(",") if a.strip()]
    if not algorithms:
        raise UsageError("empty algorithm list")
    unknown = [a for a in algorithms if a not in ALGORITHMS]
    if unknown:
        raise UsageError(f"unknown algorithms {unknown}; choose from {sorted(ALGORITHMS)}")
    if args.rhs_mode not in RHS_MODES:
        raise UsageError(f"unknown rhs mode {args.rhs_mode!r}")
    instances = _bench_instances(args)
    workers = max(1, int(os.environ.get(WORKERS_ENV, "1") or 1))

    def run(inst):
        try:
            return report_rows(run_experiment(inst, algorithms, args.rhs_mode, args.seed))
        except ToeplitzError as exc:
            # the instance itself could not be built
            return [
                {
                    **dict.fromkeys(CSV_COLUMNS),
                    "algorithm": a,
                    "n": inst.params.get("n"),
                    "instance": inst.describe(),
                    "warnings": "",
                    "error": f"{type(exc).__name__}: {exc}",
                }
                for a in sorted(set(algorithms))
            ]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(run, instances))
    else:
        batches = [run(inst) for inst in instances]
    rows = [row for batch in batches for row in batch]
    meta = {"seed": args.seed, "rng": RNG_NAME, "rhs_mode": args.rhs_mode}
    _emit(format_rows(rows, args.format, meta), args.output)
    return EXIT_OK


# -- entry point ------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="toepfactor", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"toepfactor {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write the first column of a test matrix")
    _add_instance_args(p, kind_positional=True)
    p.add_argument("--preset", choices=sorted(REFERENCE_INSTANCES))
    p.add_argument("--n", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("factor", help="Cholesky-factor a matrix file")
    p.add_argument("matrix")
    p.add_argument("--method", choices=FACTOR_METHODS, default="mixed")
    p.add_argument("--dense", action="store_true", help="matrix file holds a dense n x n matrix")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("solve", help="solve T x = b for a matrix file")
    p.add_argument("matrix")
    p.add_argument("--method", choices=SOLVE_METHODS, default="mixed")
    p.add_argument("--dense", action="store_true")
    p.add_argument("--rhs", help="vector file holding b")
    p.add_argument("--rhs-mode", choices=RHS_MODES, default="unit_solution")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="run a stability experiment and emit CSV/JSON rows")
    p.add_argument("--preset", choices=sorted(REFERENCE_INSTANCES))
    p.add_argument("--kind", choices=("prolate", "refl", "random"))
    _add_instance_args(p, kind_positional=False)
    p.add_argument("--n", help="size, list (10,20) or inclusive range (10:100:10)")
    p.add_argument("--algorithms", default=",".join(STANDARD_ALGORITHMS))
    p.add_argument("--rhs-mode", default="unit_solution")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--config", help="JSON file whose keys override the flags")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        _info(f"usage error: {exc}")
        return EXIT_USAGE
    except Breakdown as exc:
        step = f" at step {exc.step}" if exc.step is not None else ""
        _info(f"breakdown{step}: {exc}")
        return EXIT_BREAKDOWN
    except ToeplitzError as exc:
        _info(f"usage error: {type(exc).__name__}: {exc}")
        return EXIT_USAGE
    except OSError as exc:
        _info(f"I/O error: {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
