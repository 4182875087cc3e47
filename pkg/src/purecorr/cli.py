"""Command-line entry point: parse a state or input file, dispatch the
computation, and write result files with full provenance.

Subcommands: ep, dc, audit, sweep, validate. Exit codes: 0 success (all
verdicts hold), 1 some audit verdict violated, 2 contract violation or
malformed input, 3 dimension cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .dense_coding import (dc_advantage, dc_monogamy_audit, dc_superadditivity_audit,
                           dc_vanishing_audit)
from .ep_solver import EpConfig, ep_optimize, ep_subadditivity_certified
from .errors import ContractViolation, DimensionCapExceededError
from .inequality_lab import (FIG1_DEFAULT_GRID, FIG2_DEFAULT_GRID, REGISTERED_CLAIMS,
                             SweepGrid, fig_sweep, monogamy_score, prop3_audit,
                             prop4_audit, thm1_polygamy_pure_audit, weak_monogamy_audit,
                             w_closed_form_check)
from .info_measures import Partition, entropy
from .records import AuditRecord, INCONCLUSIVE, VIOLATED
from .serialization import (audit_records_to_csv, load_density_matrix, result_envelope,
                            sweep_rows_to_csv, to_json_text, write_text_atomic)
from .state_zoo import (StateDescriptor, bell_state, fig1_family, fig2_family,
                        flagged_block_state, ghz_generalized, ghz_mixture,
                        ghz_sign_mixture, w_state, werner_2qubit)
from .tensor_core import DensityMatrix, Dims, PureState, random_density_matrix

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_CONTRACT = 2
EXIT_DIM_CAP = 3

PURE_FAMILIES = ("bell", "ghz", "w")
FAMILIES = PURE_FAMILIES + ("fig1", "fig2", "ghz-mixture", "ghz-sign-mixture",
                            "werner", "random")


def make_state(family: str, params: Sequence[float], n: Optional[int] = None,
               dims: Optional[Sequence[int]] = None, rank: Optional[int] = None,
               seed: int = 0) -> Tuple[StateDescriptor, DensityMatrix]:
    """Build (descriptor, density matrix) for a named family."""
    params = tuple(float(p) for p in params)
    if family == "bell":
        psi = bell_state("phi+")
        return StateDescriptor("bell", (), 2, (2, 2)), psi.to_density_matrix()
    if family == "ghz":
        n = n or 3
        a = params[0] if params else 0.5
        sign = int(params[1]) if len(params) > 1 else +1
        psi = ghz_generalized(n, a, sign)
        return StateDescriptor("ghz", (a, sign), n, (2,) * n), psi.to_density_matrix()
    if family == "w":
        n = n or 3
        psi = w_state(n)
        return StateDescriptor("w", (), n, (2,) * n), psi.to_density_matrix()
    if family == "fig1":
        if len(params) != 2:
            raise ContractViolation("fig1 needs --params p,a")
        return StateDescriptor("fig1", params, 3, (2, 2, 2)), fig1_family(*params)
    if family == "fig2":
        if len(params) != 1:
            raise ContractViolation("fig2 needs --params p")
        return StateDescriptor("fig2", params, 3, (2, 2, 2)), fig2_family(*params)
    if family == "ghz-mixture":
        if len(params) < 3:
            raise ContractViolation("ghz-mixture needs --params p,a,b[,sign]")
        p, a, b = params[:3]
        sign = int(params[3]) if len(params) > 3 else +1
        n = n or 3
        rho = ghz_mixture(p, a, b, sign, n)
        return StateDescriptor("ghz-mixture", (p, a, b, sign), n, (2,) * n), rho
    if family == "ghz-sign-mixture":
        if len(params) != 2:
            raise ContractViolation("ghz-sign-mixture needs --params p,a")
        n = n or 3
        rho = ghz_sign_mixture(params[0], params[1], n)
        return StateDescriptor("ghz-sign-mixture", params, n, (2,) * n), rho
    if family == "werner":
        if len(params) != 1:
            raise ContractViolation("werner needs --params p")
        return StateDescriptor("werner", params, 2, (2, 2)), werner_2qubit(params[0])
    if family == "random":
        d = tuple(int(x) for x in (dims or (2, 2)))
        r = rank or int(np.prod(d))
        rho = random_density_matrix(Dims(d), r, seed)
        return StateDescriptor("random", (float(r), float(seed)), len(d), d), rho
    raise ContractViolation(f"unknown family {family!r}; choose from {FAMILIES}")


def parse_cut(text: str, n_parties: int) -> Partition:
    """Parse 'A:BC'-style cuts; letters A.. map to party indices 0.. in order."""
    groups = []
    for part in text.split(":"):
        part = part.strip()
        if not part:
            raise ContractViolation(f"empty group in cut {text!r}")
        idx = []
        for ch in part:
            i = ord(ch.upper()) - ord("A")
            if not 0 <= i < n_parties:
                raise ContractViolation(
                    f"cut letter {ch!r} is out of range for {n_parties} parties")
            idx.append(i)
        groups.append(tuple(idx))
    if len(groups) != 2:
        raise ContractViolation(f"cut {text!r} must have exactly two groups")
    return Partition(tuple(groups))


def parse_grid(text: str, names: Tuple[str, ...]) -> SweepGrid:
    steps = tuple(int(x) for x in text.lower().split("x"))
    if len(steps) != len(names):
        raise ContractViolation(
            f"grid {text!r} has {len(steps)} axes but the family needs {len(names)}")
    return SweepGrid(names, ((0.0, 1.0),) * len(names), steps)


def _config_from_args(args) -> EpConfig:
    kwargs = dict(seed=args.seed)
    if args.restarts is not None:
        kwargs["restarts"] = args.restarts
    if args.max_iter is not None:
        kwargs["max_iterations"] = args.max_iter
    if args.tol is not None:
        kwargs["objective_tolerance"] = args.tol
    if getattr(args, "ancilla", None):
        text = args.ancilla
        if text == "rank":
            kwargs["ancilla_mode"] = "rank-default"
        elif text == "terhal":
            kwargs["ancilla_mode"] = "terhal-full"
        else:
            parts = text.split(",")
            if len(parts) != 2:
                raise ContractViolation(
                    f"--ancilla must be 'rank', 'terhal' or 'dA,dB', got {text!r}")
            kwargs["ancilla_mode"] = "explicit"
            kwargs["ancilla_dims"] = (int(parts[0]), int(parts[1]))
    return EpConfig(**kwargs)


def _resolve_state(args) -> Tuple[Optional[StateDescriptor], DensityMatrix]:
    if getattr(args, "input", None):
        rho = load_density_matrix(args.input)
        return None, rho
    if not getattr(args, "family", None):
        raise ContractViolation("provide --family or --input")
    params = [float(x) for x in args.params.split(",")] if args.params else []
    dims = [int(x) for x in args.dims.split(",")] if getattr(args, "dims", None) else None
    return make_state(args.family, params, n=args.n, dims=dims,
                      rank=getattr(args, "rank", None), seed=args.seed)


def _emit(args, envelope: dict, csv_text: Optional[str] = None) -> None:
    fmt = getattr(args, "format", "json") or "json"
    if fmt == "csv" and csv_text is not None:
        text = csv_text
    else:
        text = to_json_text(envelope)
    if args.out:
        write_text_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _pure_state_for(descriptor: StateDescriptor, rho: DensityMatrix) -> PureState:
    if abs(rho.purity() - 1.0) > 1e-9:
        raise ContractViolation("this audit needs a pure state family (bell/ghz/w)")
    vals, vecs = np.linalg.eigh(rho.entries)
    return PureState(vecs[:, -1], rho.dims)


def _exit_code_for(records: List[AuditRecord]) -> int:
    if any(r.verdict == VIOLATED for r in records):
        return EXIT_VIOLATED
    return EXIT_OK


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def cmd_ep(args) -> int:
    descriptor, rho = _resolve_state(args)
    cfg = _config_from_args(args)
    cut = parse_cut(args.cut, rho.dims.n_parties)
    result = ep_optimize(rho, cut, cfg)
    envelope = result_envelope("ep-result", result.to_json_dict(), seed=cfg.seed,
                               state=descriptor, config=cfg.to_json_dict())
    _emit(args, envelope)
    return EXIT_OK


def cmd_dc(args) -> int:
    descriptor, rho = _resolve_state(args)
    cfg = _config_from_args(args)
    text = args.cut.replace(">", ":")
    cut = parse_cut(text, rho.dims.n_parties)
    result = dc_advantage(rho, cut, cfg, d_env=args.d_env)
    envelope = result_envelope("dc-result", result.to_json_dict(), seed=cfg.seed,
                               state=descriptor, config=cfg.to_json_dict())
    _emit(args, envelope)
    return EXIT_OK


def cmd_sweep(args) -> int:
    family = args.family
    if family not in ("fig1", "fig2"):
        raise ContractViolation("sweep supports --family fig1 or fig2")
    names = FIG1_DEFAULT_GRID.names if family == "fig1" else FIG2_DEFAULT_GRID.names
    grid = parse_grid(args.grid, names) if args.grid else None
    sweep = fig_sweep(family, grid)
    payload = {
        "family": family,
        "grid": {"names": list(sweep.grid.names), "steps": list(sweep.grid.steps)},
        "min_value": sweep.min_value,
        "argmin": list(sweep.argmin),
        "rows": [list(params) + [value] for params, value in sweep.rows],
    }
    envelope = result_envelope("sweep-result", payload, seed=None)
    _emit(args, envelope, csv_text=sweep_rows_to_csv(sweep.grid.names, sweep.rows))
    return EXIT_OK


def _run_audit(args) -> List[AuditRecord]:
    claim = args.claim
    cfg = _config_from_args(args)
    if claim in ("fig1-gap", "fig2-gap"):
        family = "fig1" if claim == "fig1-gap" else "fig2"
        names = FIG1_DEFAULT_GRID.names if family == "fig1" else FIG2_DEFAULT_GRID.names
        grid = parse_grid(args.grid, names) if args.grid else None
        sweep = fig_sweep(family, grid)
        return sweep.to_audit_records(claim, tol=1e-12)
    if claim == "w-closed-form":
        return [w_closed_form_check(args.n or 3)]
    if claim in ("thm2-subadditivity", "dc-superadditivity"):
        d1, rho = _resolve_state(args)
        args2 = argparse.Namespace(**vars(args))
        args2.family = args.family2 or args.family
        args2.params = args.params2 if args.params2 is not None else args.params
        args2.input = args.input2 or None
        d2, sigma = _resolve_state(args2)
        fn = ep_subadditivity_certified if claim == "thm2-subadditivity" else dc_superadditivity_audit
        record = fn(rho, sigma, cfg)
        record.state = d1
        return [record]
    if claim == "dc-vanishing":
        rho = _default_vanishing_state() if not (args.family or args.input) \
            else _resolve_state(args)[1]
        return [dc_vanishing_audit(rho, cfg)]
    descriptor, rho = _resolve_state(args)
    if claim.startswith("monogamy-"):
        record = monogamy_score(claim.removeprefix("monogamy-"), rho, cfg)
    elif claim == "thm1-polygamy-pure":
        record = thm1_polygamy_pure_audit(_pure_state_for(descriptor, rho), cfg)
    elif claim == "prop3-polygamy":
        record = prop3_audit(rho, args.node)
    elif claim == "prop4-polygamy":
        n = rho.dims.n_parties
        omit = args.omit if args.omit is not None else n - 1
        subset = tuple(i for i in range(n) if i != omit)
        record = prop4_audit(_pure_state_for(descriptor, rho), args.node, subset)
    elif claim == "weak-monogamy":
        record = weak_monogamy_audit(rho, cfg)
    elif claim == "dc-monogamy":
        record = dc_monogamy_audit(rho, cfg)
    else:
        raise ContractViolation(
            f"unknown claim {claim!r}; registered claims: {', '.join(REGISTERED_CLAIMS)}")
    record.state = record.state or descriptor
    return [record]


def _default_vanishing_state() -> DensityMatrix:
    """Two flagged blocks of seeded pure products; satisfies the vanishing premise."""
    rng = np.random.default_rng(2024)

    def rand_pure(d1, d2):
        v = rng.normal(size=d1 * d2) + 1j * rng.normal(size=d1 * d2)
        return PureState(v / np.linalg.norm(v), Dims((d1, d2)))

    left = [rand_pure(2, 2), rand_pure(2, 2)]
    right = [rand_pure(2, 2), rand_pure(2, 2)]
    return flagged_block_state([0.5, 0.5], left, right)


def cmd_audit(args) -> int:
    if args.claim not in REGISTERED_CLAIMS:
        sys.stderr.write(
            f"unknown claim {args.claim!r}; registered claims:\n  "
            + "\n  ".join(REGISTERED_CLAIMS) + "\n")
        return EXIT_CONTRACT
    records = _run_audit(args)
    payload = {
        "records": [r.to_json_dict() for r in records],
        "n_records": len(records),
        "min_margin": min(r.margin for r in records),
        "all_hold": all(r.verdict != VIOLATED for r in records),
        "any_inconclusive": any(r.verdict == INCONCLUSIVE for r in records),
    }
    envelope = result_envelope("audit-result", payload, seed=args.seed)
    _emit(args, envelope, csv_text=audit_records_to_csv(records))
    return _exit_code_for(records)


def cmd_validate(args) -> int:
    rho = load_density_matrix(args.input)
    payload = {
        "valid": True,
        "dims": list(rho.dims.factors),
        "trace": float(np.trace(rho.entries).real),
        "purity": rho.purity(),
        "entropy_bits": entropy(rho),
        "rank": rho.rank(),
    }
    envelope = result_envelope("validate-result", payload, seed=None)
    _emit(args, envelope)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_state_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=FAMILIES, help="named state family")
    p.add_argument("--params", help="comma-separated family parameters")
    p.add_argument("--n", type=int, help="party count for ghz/w families")
    p.add_argument("--dims", help="comma-separated dims for --family random")
    p.add_argument("--rank", type=int, help="rank for --family random")
    p.add_argument("--input", help="density matrix JSON file")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--max-iter", type=int, default=None)
    p.add_argument("--tol", type=float, default=None, help="objective tolerance")
    p.add_argument("--ancilla", default=None, help="rank | terhal | dA,dB")


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output path (atomic write); default stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="purecorr",
        description="Total-correlation numerics: purification-based measure, "
                    "bounds, dense-coding advantage, and inequality audits.")
    parser.add_argument("--version", action="version", version=f"purecorr {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ep = sub.add_parser("ep", help="estimate the total-correlation measure across a cut")
    _add_state_flags(p_ep)
    _add_solver_flags(p_ep)
    _add_output_flags(p_ep)
    p_ep.add_argument("--cut", default="A:B", help="e.g. A:B or A:BC")
    p_ep.set_defaults(handler=cmd_ep)

    p_dc = sub.add_parser("dc", help="estimate the dense-coding advantage sender>receiver")
    _add_state_flags(p_dc)
    _add_solver_flags(p_dc)
    _add_output_flags(p_dc)
    p_dc.add_argument("--cut", default="A>B", help="e.g. A>B (sender>receiver)")
    p_dc.add_argument("--d-env", type=int, default=None, help="environment dimension")
    p_dc.set_defaults(handler=cmd_dc)

    p_audit = sub.add_parser("audit", help="run a registered inequality audit")
    p_audit.add_argument("claim", help="claim id; see --help for the registry")
    _add_state_flags(p_audit)
    _add_solver_flags(p_audit)
    _add_output_flags(p_audit)
    p_audit.add_argument("--grid", help="grid steps like 51x51 (fig sweeps)")
    p_audit.add_argument("--node", type=int, default=0, help="node party index")
    p_audit.add_argument("--omit", type=int, default=None,
                         help="party omitted from the prop4 reduction")
    p_audit.add_argument("--family2", choices=FAMILIES, help="second state family")
    p_audit.add_argument("--params2", help="second state parameters")
    p_audit.add_argument("--input2", help="second density matrix file")
    p_audit.set_defaults(handler=cmd_audit)

    p_sweep = sub.add_parser("sweep", help="lower-bound-gap sweep over a family grid")
    p_sweep.add_argument("--family", required=True, choices=("fig1", "fig2"))
    p_sweep.add_argument("--grid", help="grid steps like 51x51 or 101")
    p_sweep.add_argument("--seed", type=int, default=0)
    _add_output_flags(p_sweep)
    p_sweep.set_defaults(handler=cmd_sweep)

    p_val = sub.add_parser("validate", help="validate a density matrix file")
    p_val.add_argument("--input", required=True)
    _add_output_flags(p_val)
    p_val.set_defaults(handler=cmd_validate)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except DimensionCapExceededError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DIM_CAP
    except (ContractViolation, FileNotFoundError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
