"""Command-line entry point ``rpchain``.

Every subcommand writes a JSON report (stdout or ``-o``).  Exit status is 0
when every checked statement holds, 1 when one fails and 2 on bad input.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .chain import ChainFrame, QuantumState
from .config import ClaimViolation, RpChainError, Tolerances
from .fermions import a_matrix, covariance_from_ground_state, covariance_formula
from .io import dumps_report, read_array, read_operator, write_array, write_complex_csv
from .models import (
    GibbsDecomposition,
    check_gibbs_hypothesis,
    cluster_purification_demo,
    gibbs_state,
    tfim_decomposition,
    tfim_ground_state,
)
from .purify import canonical_purification, uniqueness_oracle
from .rotation import angular_momentum, perron_frobenius_check, random_strict_rp_density
from .rp import check_rp
from .symmetry import ReflectionFrame, RotationFrame

EXIT_OK, EXIT_CLAIM, EXIT_INPUT = 0, 1, 2
MAX_QUBITS = 24

COMMANDS = (
    "check-rp",
    "purify",
    "cluster-demo",
    "tfim-demo",
    "gibbs-rp",
    "angular-momentum",
    "perron-frobenius",
    "uniqueness-oracle",
)


class InputError(RpChainError, ValueError):
    """Invalid command-line input."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    n_half: int = 2
    local_dim: int = 2
    beta: float = 1.0
    seed: int = 0
    trials: int = 20
    grid: int = 4
    tol: Tolerances = field(default_factory=Tolerances)
    inputs: tuple = ()
    output: Optional[str] = None

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.n_half < 1 or self.local_dim < 2:
            raise InputError("need --n >= 1 and --d >= 2")
        if self.seed < 0 or self.trials < 1 or self.grid < 1:
            raise InputError("seed must be unsigned; trials and grid must be positive")
        check_dense_size(2 * self.n_half, self.local_dim)

    @property
    def frame(self) -> ChainFrame:
        return ChainFrame(self.n_half, self.local_dim)


def check_dense_size(n_sites: int, local_dim: int) -> None:
    if n_sites * math.log2(local_dim) > MAX_QUBITS + 1e-9:
        raise InputError(f"{n_sites} sites of dimension {local_dim} exceed the dense-size guard")


def _frame_for(dim: int, cfg: RunConfig, *, half: bool = False) -> ChainFrame:
    frame = ChainFrame.from_dim(dim, cfg.local_dim, half=half)
    check_dense_size(frame.n_sites, frame.local_dim)
    return frame


def _load_state(path: str, cfg: RunConfig) -> QuantumState:
    arr = read_array(path)
    frame = _frame_for(arr.shape[0], cfg)
    if arr.ndim == 1:
        return QuantumState.from_vector(arr, frame)
    return QuantumState.from_density(arr, frame)


# ---------------------------------------------------------------- commands


def cmd_check_rp(cfg: RunConfig) -> tuple[dict, bool]:
    state = _load_state(cfg.inputs[0], cfg)
    cert = check_rp(state, ReflectionFrame(state.frame), cfg.tol)
    return {"command": "check-rp", "n_half": state.frame.n_half, **cert.to_dict()}, cert.passes


def cmd_purify(cfg: RunConfig) -> tuple[dict, bool]:
    arr = read_array(cfg.inputs[0])
    if arr.ndim != 2:
        raise InputError("purify needs a density matrix file")
    frame = _frame_for(arr.shape[0], cfg, half=True)
    rf = ReflectionFrame(frame)
    rho = QuantumState.from_density(arr, frame, "left")
    psi = canonical_purification(rho, rf)
    cert = check_rp(psi, rf, cfg.tol)
    if len(cfg.inputs) > 1:
        write_array(cfg.inputs[1], psi.data)
    report = {
        "command": "purify",
        "n_half": frame.n_half,
        "vector": psi.data,
        "certificate": cert.to_dict(),
    }
    return report, cert.passes


def cmd_cluster_demo(cfg: RunConfig) -> tuple[dict, bool]:
    rep = cluster_purification_demo(cfg.n_half)
    return {"command": "cluster-demo", **rep.to_dict()}, rep.ok


def cmd_tfim_demo(cfg: RunConfig, b_csv: Optional[str], a_csv: Optional[str]) -> tuple[dict, bool]:
    if cfg.local_dim != 2:
        raise InputError("tfim-demo is defined for qubit chains")
    if cfg.n_half > 5:
        raise InputError("tfim-demo covariance check supports 2N <= 10")
    ground = tfim_ground_state(cfg.n_half)
    rf = ReflectionFrame(ground.state.frame)
    cert = check_rp(ground.state, rf, cfg.tol)
    cov = covariance_from_ground_state(cfg.n_half)
    a = a_matrix(cfg.n_half)
    if b_csv:
        write_complex_csv(b_csv, covariance_formula(cfg.n_half).b)
    if a_csv:
        write_complex_csv(a_csv, a.a)
    report = {
        "command": "tfim-demo",
        "n_half": cfg.n_half,
        "energy": ground.energy,
        "gap": ground.gap,
        "certificate": cert.to_dict(),
        "strict_rp": cert.verdict == "strictly_rp",
        "covariance_max_dev": cov.max_dev,
        "covariance_sector": cov.sector,
        "a_min_eig": a.min_eig,
    }
    ok = report["strict_rp"] and cov.max_dev < 1e-9 and a.min_eig > 0
    return report, ok


def cmd_gibbs_rp(cfg: RunConfig, hl: Optional[str], h0: Optional[str]) -> tuple[dict, bool]:
    if (hl is None) != (h0 is None):
        raise InputError("--hl and --h0 must be given together")
    if hl is None:
        dec = tfim_decomposition(cfg.n_half, cfg.beta)
    else:
        frame = cfg.frame
        dec = GibbsDecomposition(read_operator(hl, frame, "left"), read_operator(h0, frame), cfg.beta)
    rf = ReflectionFrame(dec.frame)
    hyp = check_gibbs_hypothesis(dec, rf, cfg.tol)
    cert = check_rp(gibbs_state(dec), rf, cfg.tol)
    report = {
        "command": "gibbs-rp",
        "n_half": dec.frame.n_half,
        "beta": dec.beta,
        "hypothesis": {"status": hyp.status, "min_eig": hyp.min_eig},
        **cert.to_dict(),
    }
    return report, cert.passes


def cmd_angular_momentum(cfg: RunConfig) -> tuple[dict, bool]:
    state = _load_state(cfg.inputs[0], cfg)
    if state.kind != "vector":
        raise InputError("angular-momentum needs a vector file")
    rep = angular_momentum(state, RotationFrame(state.frame), ReflectionFrame(state.frame), cfg.tol)
    return {"command": "angular-momentum", "n_half": state.frame.n_half, **rep.to_dict()}, rep.consistent


def cmd_perron_frobenius(cfg: RunConfig) -> tuple[dict, bool]:
    frame = cfg.frame
    rf = ReflectionFrame(frame)
    rng = np.random.default_rng(cfg.seed)
    trials = []
    for _ in range(cfg.trials):
        rho = random_strict_rp_density(rng, frame)
        trials.append(perron_frobenius_check(rho, rf, cfg.tol).to_dict())
    ok = all(t["ok"] for t in trials)
    report = {
        "command": "perron-frobenius",
        "n_half": frame.n_half,
        "local_dim": frame.local_dim,
        "seed": cfg.seed,
        "trials": trials,
        "all_ok": ok,
    }
    return report, ok


def cmd_uniqueness(cfg: RunConfig) -> tuple[dict, bool]:
    arr = read_array(cfg.inputs[0])
    if arr.ndim != 2:
        raise InputError("uniqueness-oracle needs a density matrix file")
    frame = _frame_for(arr.shape[0], cfg, half=True)
    rho = QuantumState.from_density(arr, frame, "left")
    rep = uniqueness_oracle(rho, ReflectionFrame(frame), cfg.grid, cfg.tol)
    report = {
        "command": "uniqueness-oracle",
        "grid": cfg.grid,
        "phases_tested": rep.phases_tested,
        "passing_phases": [list(p) for p in rep.passing],
        "verdict_counts": rep.verdicts,
        "unique": rep.unique,
    }
    return report, rep.unique


# ---------------------------------------------------------------- argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write the JSON report here instead of stdout")
    common.add_argument("--d", type=int, default=2, help="local dimension (default 2)")
    common.add_argument("--tol-psd", type=float, default=None, help="PSD slack per dimension")
    common.add_argument("--tol-j", type=float, default=None, help="J-invariance tolerance")
    common.add_argument("--tol-rank", type=float, default=None, help="rank threshold")

    parser = argparse.ArgumentParser(prog="rpchain", description="Reflection positivity checks on spin chains.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-rp", parents=[common], help="certify a vector or density file")
    p.add_argument("file")

    p = sub.add_parser("purify", parents=[common], help="canonical purification of a left density")
    p.add_argument("file")
    p.add_argument("--vector-out", help="also write the purified vector file")

    p = sub.add_parser("cluster-demo", parents=[common], help="cluster state purification demo")
    p.add_argument("--n", type=int, default=2, help="half-chain length N")

    p = sub.add_parser("tfim-demo", parents=[common], help="Ising ground state checks")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--b-csv", help="write the closed-form Majorana covariance as CSV")
    p.add_argument("--a-csv", help="write the A matrix as CSV")

    p = sub.add_parser("gibbs-rp", parents=[common], help="reflection positivity of a Gibbs state")
    p.add_argument("--hl", help="left Hamiltonian operator file")
    p.add_argument("--h0", help="coupling operator file")
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--n", type=int, default=2)

    p = sub.add_parser("angular-momentum", parents=[common], help="rotation eigenvalue of a vector file")
    p.add_argument("file")

    p = sub.add_parser("perron-frobenius", parents=[common], help="random strictly RP density suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--n", type=int, default=1)

    p = sub.add_parser("uniqueness-oracle", parents=[common], help="phase-grid purification search")
    p.add_argument("file")
    p.add_argument("--grid", type=int, default=4)
    return parser


def _tolerances(args) -> Tolerances:
    overrides = {}
    if args.tol_psd is not None:
        overrides["psd"] = args.tol_psd
    if args.tol_j is not None:
        overrides["j_invariance"] = args.tol_j
    if args.tol_rank is not None:
        overrides["rank"] = args.tol_rank
    try:
        return Tolerances(**overrides)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _config(args) -> RunConfig:
    inputs = tuple(x for x in (getattr(args, "file", None), getattr(args, "vector_out", None)) if x)
    return RunConfig(
        command=args.command,
        n_half=getattr(args, "n", 1),
        local_dim=args.d,
        beta=getattr(args, "beta", 1.0),
        seed=getattr(args, "seed", 0),
        trials=getattr(args, "trials", 1),
        grid=getattr(args, "grid", 4),
        tol=_tolerances(args),
        inputs=inputs,
        output=args.output,
    )


def run(argv: Optional[Sequence[str]] = None) -> tuple[int, Optional[str]]:
    """Execute one command; returns the exit code and the JSON text (if any)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_OK if exc.code == 0 else EXIT_INPUT), None
    try:
        cfg = _config(args)
        if cfg.command == "check-rp":
            report, ok = cmd_check_rp(cfg)
        elif cfg.command == "purify":
            report, ok = cmd_purify(cfg)
        elif cfg.command == "cluster-demo":
            report, ok = cmd_cluster_demo(cfg)
        elif cfg.command == "tfim-demo":
            report, ok = cmd_tfim_demo(cfg, args.b_csv, args.a_csv)
        elif cfg.command == "gibbs-rp":
            report, ok = cmd_gibbs_rp(cfg, args.hl, args.h0)
        elif cfg.command == "angular-momentum":
            report, ok = cmd_angular_momentum(cfg)
        elif cfg.command == "perron-frobenius":
            report, ok = cmd_perron_frobenius(cfg)
        else:
            report, ok = cmd_uniqueness(cfg)
    except ClaimViolation as exc:
        print(f"rpchain: claim violation: {exc}", file=sys.stderr)
        return EXIT_CLAIM, None
    except (RpChainError, ValueError, OSError) as exc:
        print(f"rpchain: error: {exc}", file=sys.stderr)
        return EXIT_INPUT, None

    report["passed"] = bool(ok)
    text = dumps_report(report)
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return (EXIT_OK if ok else EXIT_CLAIM), text


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(argv)[0]


if __name__ == "__main__":
    sys.exit(main())
