"""Command-line front end.

    kratzer-info measures --molecule O2 --state 0,0,0
    kratzer-info tables --out results/
    kratzer-info figure --vary m
    kratzer-info verify
    kratzer-info dump-momentum --molecule NO+ --state 5,2,0

Exit status: 0 ok, 1 bound violation, 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import IO, Sequence

from . import __version__
from .infomeasures import (
    DEFAULT_B_VALUES,
    BOUND_EPS,
    MeasureSet,
    check_bounds,
    entropic_bound,
    fisher_bound,
    measure_set,
)
from .kratzer import QuantumState, state_for
from .molparams import (
    MoleculeFileError,
    MoleculeSpec,
    PotentialForm,
    bundled_molecules,
    constants_digest,
    default_molecule_file,
    to_atomic_units,
)
from .pspace import momentum_density_grid, write_density_csv

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2

DEFAULT_TOL = 1e-9

# (varied index, fixed (n, l, m) with None at the varied slot)
TABLE_BLOCKS = (
    ("n", (None, 0, 0)),
    ("l", (5, None, 0)),
    ("m", (5, 5, None)),
)
BLOCK_RANGE = range(6)


class InputError(ValueError):
    pass


@dataclasses.dataclass(frozen=True)
class RunConfig:
    molecules: tuple[MoleculeSpec, ...]
    form: PotentialForm
    b_values: tuple[float, ...]
    tol: float
    jobs: int


def table_states() -> list[tuple[str, QuantumState]]:
    """The (block, state) pairs of the tabulated sets, in table order."""
    out = []
    for block, fixed in TABLE_BLOCKS:
        slot = "nlm".index(block)
        for k in BLOCK_RANGE:
            idx = list(fixed)
            idx[slot] = k
            out.append((block, QuantumState(*idx)))
    return out


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.9g}"
    return str(v)


def _b_label(b: float) -> str:
    frac = Fraction(b).limit_denominator(12)
    return str(frac) if abs(float(frac) - b) < 1e-12 else f"{b:g}"


def _write_csv(fh: IO[str], header: list[str], rows, meta: dict) -> None:
    fh.write(f"# kratzer-info {__version__}\n")
    for k, v in meta.items():
        fh.write(f"# {k}: {v}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])


def _meta(cfg: RunConfig) -> dict:
    return {
        "constants": constants_digest(),
        "form": cfg.form.value,
        "momentum_tol": f"{cfg.tol:g}",
        "bound_eps": f"{BOUND_EPS:g}",
        "b": " ".join(_b_label(b) for b in cfg.b_values),
    }


def _open_out(path: str | None):
    if path is None or path == "-":
        return _NoClose(sys.stdout)
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    return p.open("w", encoding="utf-8", newline="")


class _NoClose:
    def __init__(self, fh):
        self.fh = fh

    def __enter__(self):
        return self.fh

    def __exit__(self, *exc):
        self.fh.flush()
        return False


# computation


def _group_worker(args) -> list[MeasureSet]:
    mol, form, n, l, ms, b_values, tol = args
    base = state_for(mol, n, l, 0, form)
    md = momentum_density_grid(base, tol=tol)
    return [measure_set(state_for(mol, n, l, m, form), md, b_values) for m in ms]


def compute(cfg: RunConfig, tasks: Sequence[tuple[MoleculeSpec, QuantumState]]) -> dict:
    """MeasureSets keyed by (molecule name, n, l, m).

    States sharing (molecule, n, l) reuse one momentum density.  Results do
    not depend on ``cfg.jobs``.
    """
    groups: dict[tuple, list[int]] = {}
    mols = {}
    for mol, qn in tasks:
        mols[mol.name] = mol
        ms = groups.setdefault((mol.name, qn.n, qn.l), [])
        if qn.m not in ms:
            ms.append(qn.m)
    jobs = [(mols[name], cfg.form, n, l, tuple(ms), cfg.b_values, cfg.tol)
            for (name, n, l), ms in groups.items()]
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_group_worker, jobs))
    else:
        results = [_group_worker(j) for j in jobs]
    out = {}
    for batch in results:
        for ms in batch:
            out[(ms.name, ms.n, ms.l, ms.m)] = ms
    return out


# argument handling


def _parse_state(text: str) -> QuantumState:
    try:
        n, l, m = (int(v) for v in text.split(","))
    except ValueError:
        raise InputError(f"state must be 'n,l,m' integers, got {text!r}") from None
    try:
        return QuantumState(n, l, m)
    except ValueError as exc:
        raise InputError(f"invalid state {text}: {exc}") from None


def _select_molecules(names: list[str] | None) -> tuple[MoleculeSpec, ...]:
    try:
        records = bundled_molecules()
    except (OSError, MoleculeFileError) as exc:
        raise InputError(f"cannot read molecule file {default_molecule_file()}: {exc}") from None
    table = {r.name: to_atomic_units(r) for r in records}
    if not names:
        return tuple(table.values())
    unknown = [n for n in names if n not in table]
    if unknown:
        raise InputError(f"unknown molecule(s) {', '.join(unknown)}; known: {', '.join(table)}")
    return tuple(table[n] for n in names)


def _config(args) -> RunConfig:
    if not args.tol > 0:
        raise InputError("--tol must be positive")
    b_values = tuple(args.b) if args.b else DEFAULT_B_VALUES
    return RunConfig(
        molecules=_select_molecules(args.molecule),
        form=PotentialForm(args.form),
        b_values=b_values,
        tol=args.tol,
        jobs=max(1, args.jobs),
    )


def _parse_b(text: str) -> float:
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid b value {text!r}") from None


# commands


def cmd_measures(args) -> int:
    cfg = _config(args)
    states = [_parse_state(s) for s in (args.state or ["0,0,0"])]
    res = compute(cfg, [(mol, qn) for mol in cfg.molecules for qn in states])
    cols = ["molecule", "n", "l", "m", "I_r", "I_p", "I_t", "S_r", "S_p", "S_t"]
    for space in ("r", "p"):
        cols += [f"C_{space}(b={_b_label(b)})" for b in cfg.b_values]
    cols += ["margin_fisher", "margin_entropic", "margin_heisenberg", "I_p_method"]
    rows = []
    status = EXIT_OK
    for mol in cfg.molecules:
        for qn in states:
            ms = res[(mol.name, qn.n, qn.l, qn.m)]
            checks = check_bounds(ms)
            if not all(c.passed for c in checks):
                status = EXIT_VIOLATION
            row = [ms.name, ms.n, ms.l, ms.m, ms.I_r, ms.I_p, ms.I_t, ms.S_r, ms.S_p, ms.S_t]
            for space in ("r", "p"):
                row += [ms.complexities[(space, b)] for b in cfg.b_values]
            row += [c.margin for c in checks] + [ms.methods["I_p"]]
            rows.append(row)
    with _open_out(args.out) as fh:
        _write_csv(fh, cols, rows, _meta(cfg))
    return status


def _table_results(cfg: RunConfig) -> dict:
    tasks = [(mol, qn) for mol in cfg.molecules for _, qn in table_states()]
    return compute(cfg, tasks)


def cmd_tables(args) -> int:
    cfg = _config(args)
    res = _table_results(cfg)
    fisher_rows, shannon_rows = [], []
    for mol in cfg.molecules:
        for block, qn in table_states():
            ms = res[(mol.name, qn.n, qn.l, qn.m)]
            fisher_rows.append([mol.name, block, qn.n, qn.l, qn.m, ms.I_r, ms.I_p, ms.I_t,
                                fisher_bound(qn.l, qn.m), ms.methods["I_p"]])
            shannon_rows.append([mol.name, block, qn.n, qn.l, qn.m, ms.S_r, ms.S_p, ms.S_t,
                                 entropic_bound()])
    outdir = Path(args.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    meta = _meta(cfg)
    with (outdir / "table_fisher.csv").open("w", encoding="utf-8", newline="") as fh:
        _write_csv(fh, ["molecule", "block", "n", "l", "m", "I_r", "I_p", "I_t",
                        "fisher_bound", "I_p_method"], fisher_rows, meta)
    with (outdir / "table_shannon.csv").open("w", encoding="utf-8", newline="") as fh:
        _write_csv(fh, ["molecule", "block", "n", "l", "m", "S_r", "S_p", "S_t",
                        "entropic_bound"], shannon_rows, meta)
    print(f"wrote {outdir / 'table_fisher.csv'} and {outdir / 'table_shannon.csv'}")
    return EXIT_OK


FIGURE_DEFAULTS = {"n": (None, 0, 0), "l": (5, None, 0), "m": (5, 5, None)}


def cmd_figure(args) -> int:
    cfg = _config(args)
    fixed = list(FIGURE_DEFAULTS[args.vary])
    for i, name in enumerate("nlm"):
        override = getattr(args, f"fix_{name}")
        if override is not None and name != args.vary:
            fixed[i] = override
    slot = "nlm".index(args.vary)
    states = []
    for k in range(args.max + 1):
        idx = list(fixed)
        idx[slot] = k
        try:
            states.append(QuantumState(*idx))
        except ValueError as exc:
            raise InputError(f"invalid state {tuple(idx)}: {exc}") from None
    res = compute(cfg, [(mol, qn) for mol in cfg.molecules for qn in states])
    cols = ["molecule", args.vary]
    for b in cfg.b_values:
        cols += [f"C_r(b={_b_label(b)})", f"C_p(b={_b_label(b)})"]
    rows = []
    for mol in cfg.molecules:
        for qn in states:
            ms = res[(mol.name, qn.n, qn.l, qn.m)]
            row = [mol.name, getattr(qn, args.vary)]
            for b in cfg.b_values:
                row += [ms.complexities[("r", b)], ms.complexities[("p", b)]]
            rows.append(row)
    with _open_out(args.out) as fh:
        _write_csv(fh, cols, rows, _meta(cfg))
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config(args)
    res = _table_results(cfg)
    failures = 0
    seen = set()
    for mol in cfg.molecules:
        for _, qn in table_states():
            key = (mol.name, qn.n, qn.l, qn.m)
            if key in seen:
                continue
            seen.add(key)
            ms = res[key]
            if args.inject_ip_scale != 1.0:
                ms = dataclasses.replace(ms, I_p=ms.I_p * args.inject_ip_scale)
            for c in check_bounds(ms):
                if not c.passed:
                    failures += 1
                    print(f"FAIL {mol.name} {qn} {c.name}: {c.value:.9g} < {c.bound:.9g} "
                          f"(margin {c.margin:.3g})")
    print(f"checked {len(seen)} states x 3 bounds; entropic bound {entropic_bound():.8f}; "
          f"tolerance {BOUND_EPS:g}")
    if failures:
        print(f"{failures} bound violation(s)")
        return EXIT_VIOLATION
    print("all bounds satisfied")
    return EXIT_OK


def cmd_dump_momentum(args) -> int:
    cfg = _config(args)
    if len(cfg.molecules) != 1:
        raise InputError("dump-momentum needs exactly one --molecule")
    qn = _parse_state(args.state or "0,0,0")
    state = state_for(cfg.molecules[0], qn.n, qn.l, qn.m, cfg.form)
    md = momentum_density_grid(state, tol=cfg.tol)
    with _open_out(args.out) as fh:
        fh.write(f"# kratzer-info {__version__}\n")
        for k, v in _meta(cfg).items():
            fh.write(f"# {k}: {v}\n")
        fh.write(f"# state: {state.name} {qn}\n")
        write_density_csv(md, fh)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--molecule", action="append",
                        help="molecule name from the data file (repeatable; default: all)")
    common.add_argument("--form", choices=[f.value for f in PotentialForm],
                        default=PotentialForm.MIE.value, help="potential parameterization")
    common.add_argument("--b", action="append", type=_parse_b,
                        help="complexity exponent, e.g. 2/3 (repeatable; default: 2/3 and 1)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL,
                        help="relative convergence tolerance of the momentum grid")
    common.add_argument("--out", help="output file (tables: output directory)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")

    parser = argparse.ArgumentParser(prog="kratzer-info", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measures", parents=[common], help="all measures for chosen states")
    p.add_argument("--state", action="append", help="n,l,m (repeatable; default 0,0,0)")
    p.set_defaults(func=cmd_measures)

    p = sub.add_parser("tables", parents=[common], help="Fisher and Shannon tables as CSV")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("figure", parents=[common], help="complexity curves as CSV")
    p.add_argument("--vary", choices=["n", "l", "m"], required=True)
    p.add_argument("--max", type=int, default=5, help="largest value of the varied index")
    for name in "nlm":
        p.add_argument(f"--{name}", dest=f"fix_{name}", type=int,
                       help=f"override the fixed value of {name}")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("verify", parents=[common], help="check uncertainty bounds on the table states")
    p.add_argument("--inject-ip-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dump-momentum", parents=[common], help="momentum density of one state")
    p.add_argument("--state", help="n,l,m (default 0,0,0)")
    p.set_defaults(func=cmd_dump_momentum)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"kratzer-info: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
