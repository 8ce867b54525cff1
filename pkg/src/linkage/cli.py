"""Command-line driver and the plain-text code file format.

Exit codes: 0 success or certified, 1 falsified or constraint violated,
2 usage or parse error, 3 budget exceeded.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from pathlib import Path

import click
import numpy as np

from .bounds import (
    BoundsEngine,
    SeedError,
    SeedSet,
    compare_constructions,
    compute_table,
    table_to_csv,
    table_to_json,
)
from .codes import CDCCode, Part, RankCode
from .construct import ConstraintError, ConstructionPlan, NotConstructible, construct_from_plan
from .field import MAX_Q, batch_rref, get_field
from .metrics import verify_cdc, verify_rmc
from .rankcodes import BudgetExceeded, lambda_bounds, lambda_exact_clique

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
DEFAULT_MAX_WORDS = 1_000_000


class CodeFileError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


# ---------------------------------------------------------------------------
# code files
# ---------------------------------------------------------------------------


def _rows_text(mat: np.ndarray) -> list[str]:
    return ["".join(map(str, row)) for row in mat.tolist()]


def emit_code(code: CDCCode | RankCode) -> str:
    """Serialize a code; codewords appear sorted by their text."""
    if isinstance(code, CDCCode):
        header = f"CDC {code.q} {code.v} {code.k} {len(code)} {code.d}"
        mats = code.array
    else:
        u = "-" if code.u is None else str(code.u)
        header = f"RMC {code.q} {code.a} {code.b} {len(code)} {code.d} {u}"
        mats = code.words
    blocks = sorted("\n".join(_rows_text(m)) for m in mats)
    return header + "\n" + "".join(b + "\n\n" for b in blocks)


def _int(tok: str, line: int, name: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise CodeFileError(line, f"{name} must be an integer, got {tok!r}") from None


def parse_code(text: str) -> CDCCode | RankCode:
    """Inverse of :func:`emit_code`; rejects malformed words and duplicates."""
    lines = text.split("\n")
    if not lines or not lines[0].strip():
        raise CodeFileError(1, "missing header")
    head = lines[0].split()
    kind = head[0]
    if kind == "CDC":
        if len(head) != 6:
            raise CodeFileError(1, "CDC header is 'CDC q v k N d'")
        q, cols, rows, n, d = (_int(t, 1, f) for t, f in zip(head[1:], ("q", "v", "k", "N", "d")))
        u = None
    elif kind == "RMC":
        if len(head) != 7:
            raise CodeFileError(1, "RMC header is 'RMC q a b N d u'")
        q, rows, cols, n, d = (_int(t, 1, f) for t, f in zip(head[1:6], ("q", "a", "b", "N", "d")))
        u = None if head[6] == "-" else _int(head[6], 1, "u")
    else:
        raise CodeFileError(1, f"unknown code type {kind!r}")
    if not 2 <= q <= MAX_Q:
        raise CodeFileError(1, f"q must be in 2..{MAX_Q}")
    try:
        field = get_field(q)
    except ValueError as exc:
        raise CodeFileError(1, str(exc)) from None
    words = np.zeros((n, rows, cols), dtype=np.uint8)
    starts = np.zeros(n, dtype=np.int64)
    i, w = 1, 0
    while w < n:
        while i < len(lines) and not lines[i].strip():
            i += 1
        if i >= len(lines):
            raise CodeFileError(len(lines), f"expected {n} codewords, found {w}")
        starts[w] = i + 1
        for r in range(rows):
            if i >= len(lines) or not lines[i].strip():
                raise CodeFileError(i + 1, f"codeword {w + 1} has fewer than {rows} rows")
            row = lines[i].strip()
            if len(row) != cols or any(c not in "0123456789" for c in row):
                raise CodeFileError(i + 1, f"expected {cols} digits")
            vals = [int(c) for c in row]
            if max(vals) >= q:
                raise CodeFileError(i + 1, f"entry outside 0..{q - 1}")
            words[w, r] = vals
            i += 1
        if i < len(lines) and lines[i].strip():
            raise CodeFileError(i + 1, f"codeword {w + 1} has more than {rows} rows")
        w += 1
    while i < len(lines):
        if lines[i].strip():
            raise CodeFileError(i + 1, f"trailing content after {n} codewords")
        i += 1
    if kind == "CDC" and n:
        red, ranks = batch_rref(field, words)
        bad = np.nonzero(ranks != rows)[0]
        if len(bad):
            raise CodeFileError(int(starts[bad[0]]), f"codeword {bad[0] + 1} does not have rank {rows}")
        bad = np.nonzero(np.any(red != words, axis=(1, 2)))[0]
        if len(bad):
            raise CodeFileError(int(starts[bad[0]]), f"codeword {bad[0] + 1} is not in reduced row echelon form")
    flat = words.reshape(n, -1)
    if n:
        _, first, counts = np.unique(flat, axis=0, return_index=True, return_counts=True)
        if (counts > 1).any():
            dup = flat[first[np.argmax(counts > 1)]]
            later = [j for j in range(n) if np.array_equal(flat[j], dup)][1]
            what = "canonical basis" if kind == "CDC" else "matrix"
            raise CodeFileError(int(starts[later]), f"duplicate {what} (codeword {later + 1})")
    if kind == "CDC":
        return CDCCode(field, cols, rows, d, [Part([words], canonical=True)], "file")
    return RankCode(field, rows, cols, d, words, u, "file")


def read_code(path: str | Path) -> CDCCode | RankCode:
    return parse_code(Path(path).read_text())


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


@dataclass
class _Fail(Exception):
    code: int
    message: str


def _fail(code: int, message: str):
    raise _Fail(code, message)


def _check_cdc_params(q: int, v: int, d: int, k: int) -> None:
    if not 2 <= q <= MAX_Q:
        _fail(EXIT_USAGE, f"q must be a prime power in 2..{MAX_Q}")
    try:
        get_field(q)
    except ValueError as exc:
        _fail(EXIT_USAGE, str(exc))
    if not 0 <= k <= v:
        _fail(EXIT_FAIL, "constraint violated: 0 <= k <= v")
    if d // 2 > k:
        _fail(EXIT_FAIL, "constraint violated: d/2 <= k")
    if d % 2:
        _fail(EXIT_FAIL, "constraint violated: d even")
    if d < 2:
        _fail(EXIT_FAIL, "constraint violated: d >= 2")


def _load_seeds(q: int, path: str | None, external: bool) -> SeedSet:
    seeds = SeedSet.default(q)
    try:
        if external:
            seeds = seeds.merged(SeedSet.external())
        if path:
            seeds = seeds.merged(SeedSet.load(path))
    except SeedError as exc:
        _fail(EXIT_FAIL, f"seed file rejected: {exc}")
    except (OSError, json.JSONDecodeError) as exc:
        _fail(EXIT_USAGE, f"cannot read seed file: {exc}")
    return seeds


def _run(fn):
    def wrapper(*args, **kwargs):
        try:
            fn(*args, **kwargs)
        except _Fail as f:
            click.echo(f"error: {f.message}", err=True)
            sys.exit(f.code)
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@click.group()
def main():
    """Constant-dimension subspace codes from linkage constructions."""


@main.command("construct")
@click.option("--q", type=int, required=True)
@click.option("--v", type=int, required=True)
@click.option("--d", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--plan", "plan_path", type=click.Path(exists=True, dir_okay=False), help="Replay a saved plan.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), help="Code file to write (plan goes next to it).")
@click.option("--max-words", type=int, default=DEFAULT_MAX_WORDS, show_default=True)
@_run
def cmd_construct(q, v, d, k, plan_path, out_path, max_words):
    """Build the largest explicitly constructible code for (v, d; k)_q."""
    _check_cdc_params(q, v, d, k)
    if plan_path:
        try:
            plan = ConstructionPlan.from_json(Path(plan_path).read_text())
        except (ValueError, KeyError) as exc:
            _fail(EXIT_USAGE, f"bad plan file: {exc}")
        if (plan.q, plan.v, plan.d, plan.k) != (q, v, d, k):
            _fail(EXIT_USAGE, "plan parameters differ from --q/--v/--d/--k")
    else:
        plan = BoundsEngine(q, constructible_only=True).plan(v, d, k)
    if plan.predicted > max_words:
        _fail(EXIT_BUDGET, f"code would have {plan.predicted} words, above --max-words {max_words}")
    try:
        code = construct_from_plan(plan)
    except ConstraintError as exc:
        _fail(EXIT_FAIL, str(exc))
    except NotConstructible as exc:
        _fail(EXIT_FAIL, str(exc))
    except BudgetExceeded as exc:
        _fail(EXIT_BUDGET, str(exc))
    if out_path:
        Path(out_path).write_text(emit_code(code))
        Path(out_path + ".plan.json").write_text(plan.to_json() + "\n")
    click.echo(f"N={len(code)}")
    click.echo(plan.describe())


@main.command("verify")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--sample", type=int, default=None, help="Check this many random pairs instead of all pairs.")
@click.option("--seed", type=int, default=0, show_default=True)
@_run
def cmd_verify(path, sample, seed):
    """Check the minimum distance claimed in a code file."""
    try:
        code = read_code(path)
    except CodeFileError as exc:
        _fail(EXIT_USAGE, f"{path}: {exc}")
    mode = "exhaustive" if sample is None else "sampled"
    kw = {} if sample is None else {"n_pairs": sample, "seed": seed}
    report = verify_cdc(code, mode, **kw) if isinstance(code, CDCCode) else verify_rmc(code, mode, **kw)
    click.echo(report.to_json())
    if not report.ok:
        sys.exit(EXIT_FAIL)


@main.command("lambda")
@click.option("--q", type=int, required=True)
@click.option("--a", type=int, required=True)
@click.option("--b", type=int, required=True)
@click.option("--d", type=int, required=True)
@click.option("--u", type=int, required=True)
@click.option("--exact", is_flag=True, help="Run the exact clique search.")
@click.option("--cert", "cert_path", type=click.Path(dir_okay=False), default=None,
              help="Certificate file for --exact (default lambda_q_a_b_d_u.json).")
@click.option("--time-limit", type=float, default=None)
@_run
def cmd_lambda(q, a, b, d, u, exact, cert_path, time_limit):
    """Bounds on the largest a x b code of rank distance >= d with all ranks <= u."""
    try:
        get_field(q)
    except ValueError as exc:
        _fail(EXIT_USAGE, str(exc))
    if min(a, b) < 1 or d < 1 or u < 0:
        _fail(EXIT_USAGE, "need a, b, d >= 1 and u >= 0")
    bounds = lambda_bounds(q, a, b, d, u)
    out = bounds.to_dict()
    if exact:
        try:
            res = lambda_exact_clique(q, a, b, d, u, time_limit=time_limit)
        except BudgetExceeded as exc:
            click.echo(json.dumps(out, indent=2))
            _fail(EXIT_BUDGET, str(exc))
        cert_path = cert_path or f"lambda_{q}_{a}_{b}_{d}_{u}.json"
        Path(cert_path).write_text(json.dumps(res.certificate(), indent=2) + "\n")
        out["clique_size"] = len(res.clique)
        out["clique_exact"] = res.exact
        if res.exact:
            out["exact"] = res.value
            out["lower"] = out["upper"] = res.value
        else:
            out["lower"] = max(out["lower"], len(res.clique))
        click.echo(json.dumps(out, indent=2))
        click.echo(f"certificate: {cert_path}")
        if not res.exact:
            sys.exit(EXIT_BUDGET)
    else:
        click.echo(json.dumps(out, indent=2))


@main.command("table")
@click.option("--q", type=int, required=True)
@click.option("--d", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--v-max", type=int, required=True)
@click.option("--seeds", "seed_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--external-seeds", is_flag=True, help="Add the bundled external A_2(8,4;4) seed.")
@click.option("--constructible-only", is_flag=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="csv", show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
@_run
def cmd_table(q, d, k, v_max, seed_path, external_seeds, constructible_only, fmt, out_path):
    """Lower and upper bounds on A_q(v, d; k) for v up to --v-max."""
    _check_cdc_params(q, max(v_max, k), d, k)
    seeds = _load_seeds(q, seed_path, external_seeds)
    entries = compute_table(q, d, k, v_max, seeds, constructible_only)
    text = table_to_json(entries) + "\n" if fmt == "json" else table_to_csv(entries)
    if out_path:
        Path(out_path).write_text(text)
    else:
        click.echo(text, nl=False)


@main.command("compare")
@click.option("--q", type=int, required=True)
@click.option("--v", type=int, required=True)
@click.option("--d", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--seeds", "seed_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--external-seeds", is_flag=True)
@_run
def cmd_compare(q, v, d, k, seed_path, external_seeds):
    """Every construction's value for one parameter set, split by split."""
    _check_cdc_params(q, v, d, k)
    if 2 * (d // 2) > 2 * min(k, v - k):
        _fail(EXIT_FAIL, "constraint violated: d/2 <= min(k, v-k)")
    seeds = _load_seeds(q, seed_path, external_seeds)
    click.echo(json.dumps(compare_constructions(q, v, d, k, seeds), indent=2))


if __name__ == "__main__":
    main()
