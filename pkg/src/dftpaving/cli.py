"""Command-line interface: ``build``, ``verify``, ``search``, ``witness``, ``table``.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage error,
3 I/O or format error, 4 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .construction import (FrameParams, block_factors, build_block, build_projection, build_stack,
                           delta_exact)
from .fileio import (FormatError, MatrixFile, certificate_dict, check_certificate, parse_certificate,
                     parse_matrix, serialize_certificate, serialize_matrix)
from .partition import (DEFAULT_BUDGET, BudgetExceeded, Partition, SearchResult, exhaustive_search,
                        local_search, random_search)
from .witness import find_witness, verify_witness

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO, EXIT_BUDGET = 0, 1, 2, 3, 4

ROW_TOL = 1e-9
COL_TOL = 1e-9
ORTH_TOL = 1e-9
IDEMPOTENT_TOL = 1e-8
DIAG_TOL = 1e-9
TRACE_TOL = 1e-6
HERMITIAN_TOL = 1e-10


class UsageError(Exception):
    pass


def _params(args) -> FrameParams:
    try:
        return FrameParams(args.r, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


# --- table ------------------------------------------------------------------

def delta_table(r: int, n_max: int) -> tuple[list[list[Fraction]], list[str]]:
    """Exact deltas for ``n = 1..n_max`` and a list of failed checks."""
    rows = [[delta_exact(r, n, k) for k in range(1, r + 1)] for n in range(1, n_max + 1)]
    failures = []
    for n, row in enumerate(rows, 1):
        if sum(row) != r:
            failures.append(f"n={n}: sum of deltas is {_rat(sum(row))}, not {r}")
    for k in range(1, r):
        for n in range(1, n_max):
            if not rows[n][k - 1] < rows[n - 1][k - 1]:
                failures.append(f"delta_{k} does not decrease from n={n} ({_rat(rows[n - 1][k - 1])}) "
                                f"to n={n + 1} ({_rat(rows[n][k - 1])})")
    return rows, failures


def cmd_table(args) -> int:
    if args.r < 2 or args.n_max < 1:
        raise UsageError("table needs --r >= 2 and --n-max >= 1")
    r = args.r
    rows, failures = delta_table(r, args.n_max)
    buf = io.StringIO()
    if args.format == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n"] + [c for k in range(1, r + 1) for c in (f"delta_{k}", f"delta_{k}_float")] + ["sum"])
        for n, row in enumerate(rows, 1):
            w.writerow([n] + [c for q in row for c in (_rat(q), repr(float(q)))] + [_rat(sum(row))])
    elif args.format == "json-lines":
        for n, row in enumerate(rows, 1):
            buf.write(json.dumps({"r": r, "n": n, "deltas": [_rat(q) for q in row],
                                  "deltas_float": [float(q) for q in row], "sum": _rat(sum(row))}) + "\n")
    else:
        buf.write(f"# delta table r={r} n=1..{args.n_max} (version {__version__})\n")
        for n, row in enumerate(rows, 1):
            cells = "  ".join(f"delta_{k}={_rat(q)} ({float(q):.12g})" for k, q in enumerate(row, 1))
            buf.write(f"n={n}  {cells}  sum={_rat(sum(row))}\n")
        for f in failures:
            buf.write(f"FAIL {f}\n")
        buf.write("all checks PASS\n" if not failures else f"{len(failures)} check(s) FAIL\n")
    _emit(buf.getvalue(), args.out)
    return EXIT_FAIL if failures else EXIT_OK


# --- build ------------------------------------------------------------------

def cmd_build(args) -> int:
    params = _params(args)
    meta = {"r": str(params.r), "n": str(params.n), "construction": args.what}
    if args.what == "stack":
        M = build_stack(params).B
    elif args.what == "projection":
        M = build_projection(params)
    else:
        if args.k is None or not 1 <= args.k <= params.r:
            raise UsageError(f"--what block needs --k in 1..{params.r}")
        M = build_block(params, args.k)
        meta["k"] = str(args.k)
    text = serialize_matrix(MatrixFile(M, meta, "hex" if args.exact else "decimal"))
    table = "".join(f"delta_{k} = {_rat(delta_exact(params.r, params.n, k))}\n"
                    for k in range(1, params.r + 1))
    if args.out is None:
        sys.stdout.write(text)
        sys.stderr.write(table)
    else:
        _emit(text, args.out)
        sys.stdout.write(f"wrote {M.shape[0]}x{M.shape[1]} {args.what} matrix to {args.out}\n" + table)
    return EXIT_OK


# --- verify -----------------------------------------------------------------

def _check(results: list, name: str, residual: float, tol: float) -> None:
    results.append((name, residual, tol, bool(residual <= tol)))


def _projection_checks(results: list, G: np.ndarray, params: FrameParams) -> None:
    _check(results, "projection hermitian", float(np.max(np.abs(G - G.conj().T))), HERMITIAN_TOL)
    _check(results, "projection idempotent (frobenius)", float(np.linalg.norm(G @ G - G)), IDEMPOTENT_TOL)
    _check(results, "projection diagonal 1/r", float(np.max(np.abs(np.diag(G) - 1 / params.r))), DIAG_TOL)
    _check(results, "projection trace rn", float(abs(np.trace(G) - params.dim)), TRACE_TOL)


def _frame_checks(results: list, B: np.ndarray, params: FrameParams, col_targets: np.ndarray) -> None:
    rows = np.sum(np.abs(B) ** 2, axis=1)
    cols = np.sum(np.abs(B) ** 2, axis=0)
    _check(results, "row square-sums = 1", float(np.max(np.abs(rows - 1))), ROW_TOL)
    _check(results, "column square-sums", float(np.max(np.abs(cols - col_targets))), COL_TOL)
    cross = B.conj().T @ B
    np.fill_diagonal(cross, 0)
    _check(results, "columns orthogonal", float(np.max(np.abs(cross))) if cross.size else 0.0, ORTH_TOL)


def verify_matrix(mf: MatrixFile) -> list:
    try:
        params = FrameParams(int(mf.meta["r"]), int(mf.meta["n"]))
    except (KeyError, ValueError) as exc:
        raise FormatError("matrix file lacks valid r/n metadata") from exc
    what = mf.meta.get("construction", "stack")
    M = mf.matrix
    results: list = []
    delta_sum = sum(delta_exact(params.r, params.n, k) for k in range(1, params.r + 1))
    results.append(("sum of deltas = r (exact)", float(abs(delta_sum - params.r)), 0.0, delta_sum == params.r))
    expected = {"stack": (params.size, params.dim), "projection": (params.size, params.size),
                "block": (params.dim, params.dim)}.get(what)
    if expected is None:
        raise FormatError(f"unknown construction {what!r}")
    if M.shape != expected:
        results.append((f"shape {expected}", float("inf"), 0.0, False))
        return results
    if what == "stack":
        _frame_checks(results, M, params, np.full(params.dim, float(params.r)))
        _projection_checks(results, (M @ M.conj().T) / params.r, params)
    elif what == "projection":
        _projection_checks(results, M, params)
    else:
        k = int(mf.meta.get("k", "0"))
        if not 1 <= k <= params.r:
            raise FormatError("block matrix file lacks a valid k")
        _frame_checks(results, M, params, block_factors(params, k) ** 2)
    return results


def cmd_verify(args) -> int:
    if args.path is None:
        params = _params(args)
        B = build_stack(params).B
        mf = MatrixFile(B, {"r": str(params.r), "n": str(params.n), "construction": "stack"})
        source = f"in-memory stack r={params.r} n={params.n}"
    else:
        try:
            with open(args.path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            print(f"error: cannot read {args.path}: {exc}", file=sys.stderr)
            return EXIT_IO
        source = args.path
        if text.lstrip().startswith("{"):
            cert = parse_certificate(text)
            ok, info = check_certificate(cert)
            print(f"# verify certificate {source}")
            for name, passed in info.get("checks", {}).items():
                print(f"{'PASS' if passed else 'FAIL'} {name}")
            if "error" in info:
                print(f"FAIL {info['error']}")
            else:
                print(f"achieved={info['recomputed']!r} bound={cert['bound_exact']} ({cert['bound']!r})")
            print(f"verdict={'true' if ok else 'false'}")
            return EXIT_OK if ok else EXIT_FAIL
        mf = parse_matrix(text)
    results = verify_matrix(mf)
    print(f"# verify {source}")
    for name, residual, tol, passed in results:
        print(f"{'PASS' if passed else 'FAIL'} {name}: residual={residual:.3e} tol={tol:g}")
    ok = all(r[3] for r in results)
    print("all checks PASS" if ok else "some checks FAIL")
    return EXIT_OK if ok else EXIT_FAIL


# --- search -----------------------------------------------------------------

def search_record(res: SearchResult, args) -> dict:
    r, n = res.params
    deltas = [delta_exact(r, n, k) for k in range(1, r)]
    return {
        "version": __version__,
        "r": r,
        "n": n,
        "method": res.method,
        "settings": {k: (str(v) if isinstance(v, Fraction) else v) for k, v in res.settings.items()},
        "best_value": res.best_value,
        "best_partition": [a + 1 for a in res.best_partition.assignment],
        "partitions_evaluated": res.partitions_evaluated,
        "per_k_violations": list(res.per_k_violations),
        "deltas": [_rat(q) for q in deltas],
        "dominance_failures": res.dominance_failures,
        "best_value_le_delta_1": not res.beats_delta1,
        "pass": res.dominated and not res.beats_delta1,
    }


def cmd_search(args) -> int:
    params = _params(args)
    frame = build_stack(params)
    try:
        if args.method == "exhaustive":
            res = exhaustive_search(frame, budget=args.budget, canonical=args.canonical)
        elif args.method == "random":
            res = random_search(frame, samples=args.samples, seed=args.seed)
        else:
            res = local_search(frame, restarts=args.restarts, iters=args.iters, seed=args.seed,
                               swaps=args.swaps)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    rec = search_record(res, args)
    buf = io.StringIO()
    if args.format == "json-lines":
        buf.write(json.dumps(rec, sort_keys=True) + "\n")
    elif args.format == "csv":
        w = csv.writer(buf, lineterminator="\n")
        keys = ["version", "r", "n", "method", "best_value", "partitions_evaluated",
                "dominance_failures", "pass"]
        w.writerow(keys + ["per_k_violations", "best_partition"])
        w.writerow([rec[k] for k in keys] + [" ".join(map(repr, rec["per_k_violations"])),
                                              " ".join(map(str, rec["best_partition"]))])
    else:
        settings = " ".join(f"{k}={v}" for k, v in rec["settings"].items())
        buf.write(f"# search version={__version__} r={params.r} n={params.n} method={res.method} {settings}\n")
        buf.write(f"best_value = {res.best_value!r}\n")
        buf.write(f"best_partition = {' '.join(map(str, rec['best_partition']))}\n")
        buf.write(f"partitions_evaluated = {res.partitions_evaluated}\n")
        for k, (v, q) in enumerate(zip(res.per_k_violations, rec["deltas"]), 1):
            flag = "PASS" if v <= float(Fraction(q)) + 1e-8 else "FAIL"
            buf.write(f"k={k}: max over partitions of pigeonhole-block bound = {v!r} <= delta_{k} = {q}? {flag}\n")
        buf.write(f"dominance failures = {res.dominance_failures}\n")
        buf.write(f"best_value <= delta_1 = {rec['deltas'][0]}? {'PASS' if not res.beats_delta1 else 'FAIL'}\n")
    _emit(buf.getvalue(), args.out)
    return EXIT_OK if rec["pass"] else EXIT_FAIL


# --- witness ----------------------------------------------------------------

def _read_partition(path: str, r: int) -> Partition:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    labels = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        labels.extend(int(tok) for tok in line.replace(",", " ").split())
    try:
        return Partition(r, [a - 1 for a in labels])
    except ValueError as exc:
        raise FormatError(f"{path}: labels must lie in 1..{r}") from exc


def cmd_witness(args) -> int:
    params = _params(args)
    if not 1 <= args.k <= params.r - 1:
        raise UsageError(f"--k must lie in 1..r-1 = {params.r - 1}")
    frame = build_stack(params)
    if args.partition is not None:
        p = _read_partition(args.partition, params.r)
        if p.size != frame.size:
            raise FormatError(f"partition has {p.size} labels, frame has {frame.size} rows")
        source = {"partition_file": args.partition}
    else:
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(args.seed)))
        p = Partition(params.r, rng.integers(0, params.r, size=frame.size))
        source = {"seed": args.seed}
    w = find_witness(frame, p, args.k)
    ok, _ = verify_witness(frame, w)
    cert = certificate_dict(params.r, params.n, p, w, ok, generator=__version__, **source)
    text = serialize_certificate(cert)
    if args.out is not None:
        _emit(text, args.out)
    else:
        sys.stdout.write(text)
    msg = (f"k={w.k} j={w.j + 1} |support|={len(w.support)} achieved={w.achieved!r} "
           f"bound=delta_{w.k}={_rat(w.bound_exact)} ({w.bound!r}) verdict={'true' if ok else 'false'}\n")
    (sys.stdout if args.out is not None else sys.stderr).write(msg)
    return EXIT_OK if ok else EXIT_FAIL


# --- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dftpaving", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def rn(p, required=True):
        p.add_argument("--r", type=int, required=required)
        p.add_argument("--n", type=int, required=required)

    b = sub.add_parser("build", help="write B, a block B_k, or the projection")
    rn(b)
    b.add_argument("--what", choices=["stack", "projection", "block"], default="stack")
    b.add_argument("--k", type=int)
    b.add_argument("--exact", action="store_true", help="hex-float entries")
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="check a matrix/certificate file, or an in-memory (r, n)")
    v.add_argument("path", nargs="?")
    rn(v, required=False)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="search partitions for a large max-min Riesz bound")
    rn(s)
    s.add_argument("--method", choices=["exhaustive", "random", "local"], default="exhaustive")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--samples", type=int, default=10_000)
    s.add_argument("--restarts", type=int, default=20)
    s.add_argument("--iters", type=int, default=500)
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--canonical", action="store_true", help="enumerate up to block relabeling")
    s.add_argument("--swaps", action="store_true", help="local search also proposes label swaps")
    s.add_argument("--format", choices=["text", "csv", "json-lines"], default="text")
    s.add_argument("--out")
    s.set_defaults(func=cmd_search)

    w = sub.add_parser("witness", help="write a certificate for one partition and k")
    rn(w)
    w.add_argument("--k", type=int, default=1)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--partition", help="file of 1-based block labels, one per row")
    w.add_argument("--out")
    w.set_defaults(func=cmd_witness)

    t = sub.add_parser("table", help="exact delta_k table for n = 1..n_max")
    t.add_argument("--r", type=int, required=True)
    t.add_argument("--n-max", type=int, default=10)
    t.add_argument("--format", choices=["text", "csv", "json-lines"], default="text")
    t.add_argument("--out")
    t.set_defaults(func=cmd_table)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and args.path is None and (args.r is None or args.n is None):
        parser.error("verify needs a file path or both --r and --n")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
