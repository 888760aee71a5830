"""Command-line front end.

Subcommands: gaps, exact, bound, compare, check.  Matrices are read from a
JSON file {"n": int, "data": [[[re, im], ...], ...]} (row-major).  Grids of
times exclude 0: a range straddling 0 is laid out as two symmetric-log
half-grids (per-side magnitudes log-spaced over two decades).

Exit codes: 0 ok, 1 parse/usage error, 2 ill-posed spectrum, 3 invalid gap
override, 4 domination violation (check).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import bounds as bnd
from .errors import NotTriangular, SpectrumOnAxis
from .green import GreenKernel, SpectralSplit, spectral_gaps
from .matcore import induced_norm, norm_kind, split_triangular
from .schur import schur_decompose

INF = float("inf")

COLUMNS = (
    "t", "exact_norm", "bound_triangular", "bound_entrywise_norm",
    "bound_vanloan", "bound_qtds18", "ratio_triangular",
)


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are parse errors (exit 1)
        raise CliError(1, message)


def load_matrix(path: str) -> np.ndarray:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        n = obj["n"]
        data = obj["data"]
        if not isinstance(n, int) or n < 1:
            raise ValueError("n must be a positive integer")
        if len(data) != n or any(len(row) != n for row in data):
            raise ValueError("data must be an n x n array")
        a = np.array(
            [[complex(entry[0], entry[1]) for entry in row] for row in data]
        )
    except CliError:
        raise
    except Exception as exc:
        raise CliError(1, f"cannot parse matrix file {path}: {exc}") from exc
    if not np.all(np.isfinite(a)):
        raise CliError(1, "matrix has non-finite entries")
    return a


def make_grid(t_min: float, t_max: float, steps: int) -> np.ndarray:
    if steps < 1:
        raise CliError(1, "steps must be >= 1")
    if t_min > t_max:
        raise CliError(1, "t-min must not exceed t-max")
    if t_min < 0.0 < t_max:
        neg = steps // 2
        pos = steps - neg
        parts = []
        if neg:
            parts.append(-np.geomspace(-t_min / 100.0, -t_min, neg))
        if pos:
            parts.append(np.geomspace(t_max / 100.0, t_max, pos))
        return np.sort(np.concatenate(parts))
    if t_min == 0.0:
        t_min = t_max / 1000.0 if steps > 1 else t_max
    if t_max == 0.0:
        t_max = t_min / 1000.0 if steps > 1 else t_min
    grid = np.linspace(t_min, t_max, steps)
    if np.any(grid == 0.0):
        raise CliError(1, "grid may not contain t = 0")
    return grid


def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


class Problem:
    """Matrix plus derived data shared by the tabulating subcommands."""

    def __init__(self, a: np.ndarray, p, gm_override=None, gp_override=None):
        self.original = a
        try:
            d, n_mat = split_triangular(a)
            self.tri = d + n_mat
            self.was_triangular = True
        except NotTriangular:
            form = schur_decompose(a)
            self.tri = form.t
            self.was_triangular = False
            if norm_kind(p) != 2:
                print(
                    "note: input is not triangular; Schur form applied and "
                    "the two-norm forced",
                    file=sys.stderr,
                )
            p = 2
        self.p = norm_kind(p)
        try:
            self.max_split = spectral_gaps(self.tri)
        except SpectrumOnAxis as exc:
            raise CliError(2, str(exc)) from exc
        self.split = self._apply_overrides(gm_override, gp_override)
        self.kernel = GreenKernel(self.tri, split=self.max_split)
        _, n_mat = split_triangular(self.tri)
        self.norm_n = induced_norm(n_mat, self.p)
        self.n_mat = n_mat
        self.d_mat = self.tri - n_mat
        self.n = self.tri.shape[0]
        self.norm_a = induced_norm(self.tri, self.p)
        self.min_re = float(np.diag(self.tri).real.min())

    def _apply_overrides(self, gm, gp) -> SpectralSplit:
        ms = self.max_split
        if gm is None and gp is None:
            return ms
        gm = ms.gamma_minus if gm is None else gm
        gp = ms.gamma_plus if gp is None else gp
        if gm <= 0 or gp <= 0 or gm > ms.gamma_minus or gp > ms.gamma_plus:
            raise CliError(
                3,
                "gap override places an eigenvalue inside the strip "
                f"(maximal gamma_minus={ms.gamma_minus:g}, "
                f"gamma_plus={ms.gamma_plus:g})",
            )
        return SpectralSplit(gm, gp, ms.alpha, ms.m, ms.l)

    def row(self, t: float) -> dict:
        s = self.split
        exact = induced_norm(self.kernel.at(t), self.p)
        params = bnd.BoundParams(self.n, self.norm_n, s.gamma_minus,
                                 s.gamma_plus, self.p)
        tri = bnd.triangular_bound(params, t)
        entry = None
        if self.was_triangular and self.p in (1, INF):
            mat = bnd.entrywise_bound(self.d_mat, self.n_mat,
                                      s.gamma_minus, s.gamma_plus, t)
            entry = induced_norm(mat, self.p)
        vl = None
        if s.l == 0 and t > 0:
            vl = bnd.van_loan_bound(s.alpha, self.norm_n, self.n, t)
        elif s.m == 0 and t < 0:
            vl = bnd.van_loan_bound(-self.min_re, self.norm_n, self.n, -t)
        qt = None
        if s.m >= 1 and s.l >= 1:
            qp = bnd.QtdsParams(self.norm_a, s.m, s.l,
                                s.gamma_minus, s.gamma_plus)
            qt = bnd.qtds18_bound(qp, t)
        ratio = tri / exact if exact > 0 else None
        return {
            "t": t, "exact_norm": exact, "bound_triangular": tri,
            "bound_entrywise_norm": entry, "bound_vanloan": vl,
            "bound_qtds18": qt, "ratio_triangular": ratio,
        }


def _write_rows(rows, columns, output):
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) if c != "t" else repr(float(row[c]))
                              for c in columns))
    text = "\n".join(lines) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_grid_args(p: argparse.ArgumentParser):
    p.add_argument("--t-min", type=float, default=0.1)
    p.add_argument("--t-max", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=40)
    p.add_argument("--norm", default="2", choices=["1", "2", "inf"])
    p.add_argument("--gamma-minus", type=float, default=None)
    p.add_argument("--gamma-plus", type=float, default=None)
    p.add_argument("--output", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="greenbound", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_gaps = sub.add_parser("gaps", help="report spectral gaps and counts")
    p_gaps.add_argument("matrix")

    for name in ("exact", "bound", "compare", "check"):
        p = sub.add_parser(name)
        p.add_argument("matrix")
        _add_grid_args(p)
        if name == "bound":
            p.add_argument(
                "--bound", default="all",
                choices=["triangular", "entrywise", "vanloan", "qtds18", "all"],
            )
        if name == "check":
            p.add_argument("--bound-scale", type=float, default=1.0,
                           help=argparse.SUPPRESS)
    return parser


def cmd_gaps(args) -> int:
    a = load_matrix(args.matrix)
    try:
        d, n_mat = split_triangular(a)
        tri = d + n_mat
    except NotTriangular:
        tri = schur_decompose(a).t
    try:
        s = spectral_gaps(tri)
    except SpectrumOnAxis as exc:
        raise CliError(2, str(exc)) from exc
    eigs = np.diag(tri)
    print("eigenvalues:", " ".join(repr(complex(e)) for e in eigs))
    print(
        f"gamma_minus={s.gamma_minus:g} gamma_plus={s.gamma_plus:g} "
        f"gamma={s.gamma:g} alpha={s.alpha:g} m={s.m} l={s.l}"
    )
    return 0


def _grid_problem(args):
    a = load_matrix(args.matrix)
    problem = Problem(a, args.norm, args.gamma_minus, args.gamma_plus)
    grid = make_grid(args.t_min, args.t_max, args.steps)
    return problem, grid


def cmd_exact(args) -> int:
    problem, grid = _grid_problem(args)
    rows = [problem.row(t) for t in grid]
    _write_rows(rows, ("t", "exact_norm"), args.output)
    return 0


def cmd_bound(args) -> int:
    problem, grid = _grid_problem(args)
    rows = [problem.row(t) for t in grid]
    if args.bound == "all":
        cols = ("t", "bound_triangular", "bound_entrywise_norm",
                "bound_vanloan", "bound_qtds18")
    else:
        cols = ("t", {
            "triangular": "bound_triangular",
            "entrywise": "bound_entrywise_norm",
            "vanloan": "bound_vanloan",
            "qtds18": "bound_qtds18",
        }[args.bound])
    _write_rows(rows, cols, args.output)
    return 0


def cmd_compare(args) -> int:
    problem, grid = _grid_problem(args)
    rows = [problem.row(t) for t in grid]
    _write_rows(rows, COLUMNS, args.output)
    return 0


def cmd_check(args) -> int:
    problem, grid = _grid_problem(args)
    scale = args.bound_scale
    s = problem.split
    for t in grid:
        row = problem.row(t)
        exact = row["exact_norm"]
        for col in ("bound_triangular", "bound_entrywise_norm",
                    "bound_vanloan", "bound_qtds18"):
            bound = row[col]
            if bound is None:
                continue
            if exact > bound * scale * (1.0 + 1e-9):
                print(
                    f"violation: t={float(t)!r} exact={exact!r} "
                    f"{col}={float(bound * scale)!r}"
                )
                return 4
        if problem.was_triangular:
            # the entrywise inequality holds entry by entry; checking it
            # directly makes corrupted bounds detectable on every matrix
            abs_g = np.abs(problem.kernel.at(t))
            ew = bnd.entrywise_bound(problem.d_mat, problem.n_mat,
                                     s.gamma_minus, s.gamma_plus, t)
            bad = abs_g > ew * scale + 1e-10
            if np.any(bad):
                i, j = np.argwhere(bad)[0]
                print(
                    f"violation: t={float(t)!r} entry=({i},{j}) "
                    f"exact={float(abs_g[i, j])!r} "
                    f"bound_entrywise={float(ew[i, j] * scale)!r}"
                )
                return 4
    print("ok")
    return 0


_COMMANDS = {
    "gaps": cmd_gaps,
    "exact": cmd_exact,
    "bound": cmd_bound,
    "compare": cmd_compare,
    "check": cmd_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except SpectrumOnAxis as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
