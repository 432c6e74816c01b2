"""Command-line front end: ``qgspec <command> [options]``.

Commands: ``spectrum``, ``bounds``, ``verify``, ``sweep-alpha``, ``selftest``.
All tabular output is CSV, preceded by one ``#`` comment line recording the
command, its settings and the seed.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from . import bounds as B
from .graph import graph_invariants
from .io import GraphFileError, fmt, parse_graph_file, write_csv
from .potential import PotentialError, _parse_p
from .solver import solve_spectrum
from .trial import verify_variational_chain

log = logging.getLogger("qgspec")

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_NOT_CONVERGED = 3


@dataclass
class RunConfig:
    command: str
    graph: str | None = None
    k: int = 5
    p: tuple = (1.0, 2.0, math.inf)
    tol: float = 1e-6
    sweep: tuple = (1e-2, 1e4, 25)
    out: str | None = None
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("--k must be >= 1")
        if not self.tol > 0:
            raise ValueError("--tol must be positive")
        lo, hi, n = self.sweep
        if not (lo > 0 and hi > 0):
            raise ValueError("sweep endpoints must be positive")
        if n < 1:
            raise ValueError("sweep needs at least one point")

    def header(self) -> str:
        parts = [f"qgspec {self.command}"]
        if self.graph is not None:
            parts.append(f"graph={self.graph}")
        parts += [f"k={self.k}", f"p={','.join(fmt(x) for x in self.p)}",
                  f"tol={fmt(self.tol)}", f"seed={self.seed}"]
        if self.command == "sweep-alpha":
            parts.append("sweep={}:{}:{}".format(*(fmt(x) for x in self.sweep)))
        return " ".join(parts)


def parse_p_list(text: str) -> tuple:
    try:
        return tuple(_parse_p(s) for s in text.split(",") if s.strip())
    except (PotentialError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_sweep(text: str) -> tuple:
    try:
        lo, hi, n = text.split(":")
        return float(lo), float(hi), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:n, got {text!r}") from None


def sweep_scales(lo, hi, n) -> np.ndarray:
    return np.geomspace(lo, hi, n) if n > 1 else np.array([lo])


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _load(cfg: RunConfig):
    if cfg.graph is None:
        raise GraphFileError("--graph", "this command needs a graph file")
    return parse_graph_file(cfg.graph)


# -- commands ---------------------------------------------------------------

def cmd_spectrum(cfg: RunConfig) -> int:
    G, q = _load(cfg)
    res = solve_spectrum(G, q, cfg.k, tol=cfg.tol)
    rows = [(j + 1, lam, err, res.mesh_size, res.converged)
            for j, (lam, err) in enumerate(zip(res.eigenvalues, res.error_estimates))]
    with _output(cfg.out) as fh:
        write_csv(fh, ["k", "eigenvalue", "error_estimate", "mesh_size", "converged"], rows,
                  cfg.header())
    return EXIT_OK if res.converged else EXIT_NOT_CONVERGED


BOUND_HEADER = ["bound_id", "k", "p", "value", "applicable", "reason", "citation"]


def report_rows(report: B.BoundReport):
    return [(e.bound_id, e.k, e.p, e.value if e.applicable else None, e.applicable,
             e.reason, e.citation) for e in report]


def cmd_bounds(cfg: RunConfig) -> int:
    G, q = _load(cfg)
    rep = B.evaluate_all(G, q, cfg.p, cfg.k)
    with _output(cfg.out) as fh:
        write_csv(fh, BOUND_HEADER, report_rows(rep), cfg.header())
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    """Soundness of every applicable bound plus the variational chain per exponent."""
    G, q = _load(cfg)
    res = solve_spectrum(G, q, cfg.k, tol=cfg.tol)
    rep = B.evaluate_all(G, q, cfg.p, cfg.k)
    rows = []
    bad = {id(e) for e, _ in B.check_soundness(rep, res.eigenvalues)}
    for e in rep.applicable():
        lam = res.eigenvalues[e.k - 1]
        rows.append(("soundness", e.bound_id, e.k, e.p, lam, e.value, id(e) not in bad, ""))
    for e in rep:
        if not e.applicable:
            rows.append(("gated", e.bound_id, e.k, e.p, None, None, True, e.reason))
    chain_k = min(cfg.k, 3)
    notes = []
    for p in cfg.p:
        chain = verify_variational_chain(G, q, p=p, k=chain_k, tol=cfg.tol)
        for s in chain.steps:
            rows.append((f"chain_{s.kind}_lower", "", s.k, p, s.eigenvalue, s.trial_max,
                         s.lower_ok, s.note))
            rows.append((f"chain_{s.kind}_upper", "", s.k, p, s.trial_max, s.bound,
                         s.upper_ok, s.note))
        for name, ok in chain.checks.items():
            rows.append(("chain_check", name, "", p, None, None, ok, ""))
        notes += [n for n in chain.notes if n not in notes]
    inv = graph_invariants(G)
    if inv.is_cycle:
        notes.append("cycle: topology-dependent bounds are not applicable")
    if not inv.connected:
        notes.append("disconnected: topology-dependent bounds are not applicable")
    for n in notes:
        rows.append(("note", "", "", None, None, None, True, n))
    if not res.converged:
        rows.append(("note", "", "", None, None, None, False, "solver did not converge"))
    with _output(cfg.out) as fh:
        write_csv(fh, ["check", "bound_id", "k", "p", "lhs", "rhs", "ok", "note"], rows,
                  cfg.header())
    if not all(r[6] for r in rows):
        log.error("verify: %d violated checks", sum(not r[6] for r in rows))
        return EXIT_VIOLATION
    return EXIT_OK


def _sweep_point(args):
    G, q, scale, k, ps, tol = args
    Gs = G.scaled_couplings(scale)
    res = solve_spectrum(Gs, q, k, tol=tol)
    return Gs.alpha_total, res, B.evaluate_all(Gs, q, ps, k)


def bound_column(bound_id, p) -> str:
    return bound_id if p is None else f"{bound_id}[p={fmt(p)}]"


def sweep_table(G, q, cfg: RunConfig):
    """Header and rows of the coupling sweep; rows ordered by scale then k."""
    scales = sweep_scales(*cfg.sweep)
    tasks = [(G, q, float(s), cfg.k, cfg.p, cfg.tol) for s in scales]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as ex:
            results = list(ex.map(_sweep_point, tasks))
    else:
        results = [_sweep_point(t) for t in tasks]
    columns = []
    for e in results[0][2]:
        c = bound_column(e.bound_id, e.p)
        if c not in columns:
            columns.append(c)
    header = ["scale", "alpha_total", "k", "eigenvalue", "error_estimate"] + columns
    rows = []
    converged = True
    for s, (a, res, rep) in zip(scales, results):
        converged &= res.converged
        for k in range(1, cfg.k + 1):
            vals = dict.fromkeys(columns)
            for e in rep:
                if e.k == k and e.applicable:
                    vals[bound_column(e.bound_id, e.p)] = e.value
            rows.append([s, a, k, res.eigenvalues[k - 1], res.error_estimates[k - 1]]
                        + [vals[c] for c in columns])
    return header, rows, converged


def cmd_sweep_alpha(cfg: RunConfig) -> int:
    G, q = _load(cfg)
    header, rows, converged = sweep_table(G, q, cfg)
    with _output(cfg.out) as fh:
        write_csv(fh, header, rows, cfg.header())
    return EXIT_OK if converged else EXIT_NOT_CONVERGED


def cmd_selftest(cfg: RunConfig) -> int:
    from .acceptance import run_all

    results = run_all(cfg.seed, echo=lambda line: print(line, file=sys.stderr))
    # timings go to stderr only, so the CSV body is reproducible
    rows = [(r.number, r.name, r.passed, len(r.failures)) for r in results]
    with _output(cfg.out) as fh:
        write_csv(fh, ["criterion", "name", "passed", "failures"], rows, cfg.header())
    return EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION


COMMANDS = {
    "spectrum": cmd_spectrum,
    "bounds": cmd_bounds,
    "verify": cmd_verify,
    "sweep-alpha": cmd_sweep_alpha,
    "selftest": cmd_selftest,
}


def run(cfg: RunConfig) -> int:
    return COMMANDS[cfg.command](cfg)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="graph description file (JSON)")
    common.add_argument("--k", type=int, default=5, help="number of eigenvalues (default 5)")
    common.add_argument("--p", type=parse_p_list, default=(1.0, 2.0, math.inf),
                        help="comma-separated exponents, 'inf' allowed (default 1,2,inf)")
    common.add_argument("--tol", type=float, default=1e-6, help="solver tolerance")
    common.add_argument("--sweep", type=parse_sweep, default=(1e-2, 1e4, 25),
                        help="coupling scale grid lo:hi:n, log-spaced (default 1e-2:1e4:25)")
    common.add_argument("--out", help="output CSV path (default stdout)")
    common.add_argument("--seed", type=int, default=0, help="seed for random suites")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    common.add_argument("-v", "--verbose", action="store_true")
    parser = argparse.ArgumentParser(prog="qgspec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "spectrum": "eigenvalues and error estimates",
        "bounds": "every closed-form bound with applicability",
        "verify": "check bounds and trial-function chain against the solver",
        "sweep-alpha": "spectrum and bounds with all couplings scaled over a grid",
        "selftest": "run the acceptance suite",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig(args.command, args.graph, args.k, args.p, args.tol, args.sweep,
                        args.out, args.seed, args.jobs)
        return run(cfg)
    except (GraphFileError, ValueError, OSError) as exc:
        print(f"qgspec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
