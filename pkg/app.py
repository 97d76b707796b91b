"""
Bell-diagonal separability lab - command-line front end

Every subcommand prints one JSON report on stdout (CSV for geometry point
clouds); diagnostics go to stderr and the log file.
"""

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import (
    CLI_CONFIG, DEFAULT_SEED, EXIT_CODES, ORACLE_CONFIG, PATHS, SUCCESS_MESSAGES, TOOL_NAME, TOOL_VERSION,
)
from logger import log_error, log_info
from core.bell_utils import IDENTITY_FRAME, BDState, CanonicalFrame, canonicalize, to_density_matrix
from core.decomposition_utils import (
    LSDecomposition, bsa_bd, canonical_view, closed_form_rho_s, ensemble_sum, face_heights, reconstruct,
    segment_ratio,
)
from core.exceptions import BsaLabError, InvalidProbVec, NotDensityMatrix, Unphysical
from core.lqcc_utils import (
    Filtration, LocalOperation, LqccPair, apply_lqcc, guarantee_applies, member_weight_gaps, pair_is_symmetric,
    parse_axis, predict_concurrence, scaled_inverse_check, trace_weights, transform_decomposition,
    verify_transformed_optimality,
)
from core.matrix_utils import frobenius, projector, to_pairs
from core.measure_utils import (
    closest_separable_bd, relative_entropy, relative_entropy_bd, to_bits, wootters_concurrence,
)
from core.optimality_utils import gamma_cross_check, perturb_decomposition, verify_bsa
from core.oracle_utils import BsaSearchConfig, bsa_numeric, rel_entropy_min_numeric
from core.report_utils import batch_summary, build_report, dumps, geometry_table
from core.sampling_utils import make_rng, random_entangled_bd, random_lqcc_pair
from core.validation_utils import matrix_from_pairs, validate_state_spec

BATCH_THRESHOLDS = {
    "lambda_concurrence_identity": 1e-10,
    "reconstruction": 1e-12,
    "face_plane": 1e-10,
    "ensemble_sum": 1e-12,
    "closed_form_rho_s": 1e-12,
    "closest_separable_match": 1e-12,
    "optimality": 1e-8,
    "lqcc_concurrence_law": 1e-10,
    "oracle_lambda": 1e-4,
    "oracle_psi_infidelity": 1e-4,
    "entropy_argmin_t": 1e-4,
    "entropy_value": 1e-6,
}


def _floats(text: str) -> List[float]:
    return [float(x) for x in text.replace(" ", "").split(",") if x]


def load_state(args: argparse.Namespace) -> Tuple[Dict, np.ndarray, Optional[BDState]]:
    """
    Build the state named by --p, --t or --matrix-file

    Returns:
        Tuple of (state spec, density matrix, BDState or None when not Bell-diagonal)
    """
    if args.p is not None:
        spec = {"p": _floats(args.p)}
    elif args.t is not None:
        spec = {"t": _floats(args.t)}
    elif args.matrix_file is not None:
        data = json.loads(Path(args.matrix_file).read_text(encoding="utf-8"))
        spec = data if isinstance(data, dict) else {"matrix": data}
    else:
        raise BsaLabError("one of --p, --t or --matrix-file is required")

    is_valid, error_msg = validate_state_spec(spec)
    if not is_valid:
        kind = next((key for key in ("p", "t") if key in spec), "matrix")
        raise {"p": InvalidProbVec, "t": Unphysical}.get(kind, NotDensityMatrix)(error_msg)

    if "matrix" in spec:
        rho = matrix_from_pairs(spec["matrix"])
        try:
            state = BDState.from_density_matrix(rho)
        except BsaLabError:
            state = None
        return spec, rho, state
    state = BDState.from_json(spec)
    return spec, to_density_matrix(state), state


def bd_state(rho: np.ndarray, state: Optional[BDState]) -> BDState:
    """The Bell-diagonal view of the input; raises NonBellDiagonal for other matrices"""
    return state if state is not None else BDState.from_density_matrix(rho)


def output_path(out: str) -> Path:
    """Relative report paths land under PATHS["reports_dir"]"""
    path = Path(out)
    if not path.is_absolute():
        path = Path(PATHS["reports_dir"]) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def emit(report: Dict, out: Optional[str]) -> None:
    text = dumps(report)
    if out:
        output_path(out).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


def _started(args: argparse.Namespace) -> Optional[float]:
    return time.perf_counter() if args.timing else None


def cmd_decompose(args: argparse.Namespace) -> int:
    """Closed-form decomposition with its concurrence identity residual"""
    started = _started(args)
    spec, rho, state = load_state(args)
    s = bd_state(rho, state)
    d = bsa_bd(s)
    shown = canonical_view(d) if args.frame == "canonical" else d
    conc = wootters_concurrence(rho).value
    outputs = {
        "separable": s.separable,
        "region": s.label or "separable",
        "frame": args.frame,
        "decomposition": shown.to_json(),
        "concurrence": conc,
    }
    residuals = {
        "lambda_concurrence_identity": abs(d.lam - (1.0 - conc)),
        "reconstruction": frobenius(reconstruct(d) - rho),
        "ensemble_sum": frobenius(ensemble_sum(d) - d.lam * d.rho_s_matrix()),
    }
    if not s.separable and d.note is None:
        canonical_t = canonicalize(s)[0].t
        view = canonical_view(d)
        outputs["face_heights"] = face_heights(view.rho_s.t).tolist()
        outputs["segment_ratio"] = segment_ratio(canonical_t, view.rho_s.t)
        residuals["closed_form_rho_s"] = float(np.max(np.abs(closed_form_rho_s(canonical_t) - view.rho_s_matrix())))
    log_info(f"{SUCCESS_MESSAGES['decomposition_complete']}: lambda = {d.lam:.12g}")
    emit(build_report("decompose", spec, outputs, residuals, args.seed, started), args.out)
    return EXIT_CODES["ok"]


def cmd_verify(args: argparse.Namespace) -> int:
    """Maximality checks on the closed-form decomposition; exit 1 when they fail"""
    started = _started(args)
    spec, rho, state = load_state(args)
    d = bsa_bd(bd_state(rho, state))
    perturbed = args.perturb is not None and args.perturb > 0.0
    if perturbed:
        d = perturb_decomposition(d, args.alpha, args.perturb)
    report = verify_bsa(rho, d, strict=args.strict, allow_mismatch=perturbed)
    outputs = {
        "passed": report.passed,
        "perturbation": {"alpha": args.alpha, "eps": args.perturb} if perturbed else None,
        "report": report.to_json(),
        "gamma_cross_check": gamma_cross_check(d) if not perturbed else [],
    }
    if report.passed:
        log_info(SUCCESS_MESSAGES["verification_passed"])
    emit(build_report("verify", spec, outputs, {"worst": report.worst_residual}, args.seed, started), args.out)
    return EXIT_CODES["ok"] if report.passed else EXIT_CODES["verification_failed"]


def load_pair(args: argparse.Namespace, frame: CanonicalFrame = IDENTITY_FRAME) -> LqccPair:
    """--same-ab builds A = B as seen from the singlet frame of the input state"""
    if args.pair_file:
        return LqccPair.from_json(json.loads(Path(args.pair_file).read_text(encoding="utf-8")))
    op_a = LocalOperation(filtration=Filtration(mu=args.mu, a=args.a, m=parse_axis(args.axis)))
    if args.same_ab:
        return LqccPair.symmetric(op_a, frame)
    op_b = LocalOperation(filtration=Filtration(mu=args.nu, a=args.b, m=parse_axis(args.b_axis)))
    return LqccPair(op_a=op_a, op_b=op_b)


def cmd_lqcc(args: argparse.Namespace) -> int:
    """Apply a local pair to the state and to its decomposition"""
    started = _started(args)
    spec, rho, state = load_state(args)
    d = bsa_bd(bd_state(rho, state))
    pair = load_pair(args, d.frame)
    rho_out, norm = apply_lqcc(rho, pair)
    transformed = transform_decomposition(d, pair)
    predicted = predict_concurrence(rho, pair)
    measured = wootters_concurrence(rho_out).value
    pure_c = wootters_concurrence(projector(transformed.pure_part)).value
    symmetric = guarantee_applies(pair, d.frame)

    outputs = {
        "pair": pair.to_json(),
        "symmetric": symmetric,
        "literal_a_equals_b": pair_is_symmetric(pair),
        "member_weight_gaps": member_weight_gaps(d, pair),
        "rho_prime": to_pairs(rho_out),
        "norm": norm,
        "lambda_prime": transformed.lam,
        "concurrence": {"predicted": predicted, "measured": measured},
        "transformed": transformed.to_json(),
        "trace_weights": trace_weights(d, pair),
        "scaled_inverse_check": scaled_inverse_check(d, pair),
    }
    residuals = {
        "concurrence_law": abs(predicted - measured),
        "average_concurrence": abs((1.0 - transformed.lam) * pure_c - measured),
        "reconstruction": frobenius(reconstruct(transformed) - rho_out),
    }
    exit_code = EXIT_CODES["ok"]
    if args.check or symmetric:
        report = verify_transformed_optimality(transformed, strict=args.strict)
        outputs["optimality"] = report.to_json()
        if symmetric and not report.passed:
            exit_code = EXIT_CODES["verification_failed"]
    emit(build_report("lqcc", spec, outputs, residuals, args.seed, started), args.out)
    return exit_code


def cmd_entropy(args: argparse.Namespace) -> int:
    """Relative entropy of entanglement at the closed-form minimizer"""
    started = _started(args)
    spec, rho, state = load_state(args)
    s = bd_state(rho, state)
    closest = closest_separable_bd(s)
    fast = relative_entropy_bd(s.p, closest.p)
    general = relative_entropy(rho, to_density_matrix(closest), fast_path=False)
    value = to_bits(fast.value) if args.bits else fast.value
    outputs = {
        "unit": "bits" if args.bits else "nats",
        "value": value,
        "closest_separable": closest.to_json(),
        "general_path": general.to_json(bits=args.bits),
    }
    residuals = {"fast_vs_general": abs(fast.value - general.value) if general.support_ok else None}
    if args.numeric:
        argmin, numeric_value = rel_entropy_min_numeric(s, args.grid)
        outputs["numeric"] = {"argmin": argmin.to_json(), "value": to_bits(numeric_value) if args.bits else numeric_value}
        residuals["argmin_t"] = float(np.max(np.abs(argmin.t - closest.t)))
        residuals["value"] = abs(numeric_value - fast.value)
    emit(build_report("entropy", spec, outputs, residuals, args.seed, started), args.out)
    return EXIT_CODES["ok"]


def cmd_oracle(args: argparse.Namespace) -> int:
    """Numerical λ maximization, compared with the closed form when available"""
    started = _started(args)
    spec, rho, state = load_state(args)
    cfg = BsaSearchConfig(
        restarts=args.restarts,
        max_iters=args.max_iters,
        seed=args.seed,
        workers=args.workers,
        seed_top_eigvec=not args.random_starts,
    )
    result = bsa_numeric(rho, cfg)
    outputs = {"config": cfg.to_json(), "result": result.to_json()}
    residuals = {"reconstruction": frobenius(result.reconstruct() - rho)}
    if state is not None:
        d = bsa_bd(state)
        outputs["lambda_closed"] = d.lam
        residuals["lambda"] = abs(result.lambda_star - d.lam)
        residuals["psi_infidelity"] = 1.0 - float(abs(np.vdot(d.pure_part, result.psi_star)) ** 2)
        if args.entropy and not state.separable:
            argmin, value = rel_entropy_min_numeric(state, args.grid)
            closest = closest_separable_bd(state)
            outputs["entropy"] = {"argmin": argmin.to_json(), "value": value}
            residuals["entropy_argmin_t"] = float(np.max(np.abs(argmin.t - closest.t)))
    emit(build_report("oracle", spec, outputs, residuals, args.seed, started), args.out)
    return EXIT_CODES["ok"]


def cmd_geometry(args: argparse.Namespace) -> int:
    """Vertex, face and sampled region data for external plotting"""
    table = geometry_table(args.resolution)
    if args.format == "csv":
        text = table.to_csv(index=False, float_format=f"%.{CLI_CONFIG['float_digits']}g")
        if args.out:
            output_path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return EXIT_CODES["ok"]
    outputs = {"rows": table.to_dict(orient="records")}
    emit(build_report("geometry", {"resolution": args.resolution}, outputs, None, None, None), args.out)
    return EXIT_CODES["ok"]


def _oracle_records(s: BDState, d: LSDecomposition, seed: int) -> List[Dict]:
    cfg = BsaSearchConfig(restarts=ORACLE_CONFIG["sweep_restarts"], seed=seed, seed_top_eigvec=False)
    result = bsa_numeric(to_density_matrix(s), cfg)
    argmin, value = rel_entropy_min_numeric(s)
    closest = closest_separable_bd(s)
    return [
        {"property": "oracle_lambda", "residual": abs(result.lambda_star - d.lam)},
        {"property": "oracle_psi_infidelity",
         "residual": 1.0 - float(abs(np.vdot(d.pure_part, result.psi_star)) ** 2)},
        {"property": "entropy_argmin_t", "residual": float(np.max(np.abs(argmin.t - closest.t)))},
        {"property": "entropy_value",
         "residual": abs(value - relative_entropy_bd(s.p, closest.p).value)},
    ]


def _batch_records(n: int, verify_n: int, lqcc_n: int, seed: int, oracle_n: int = 0) -> List[Dict]:
    rng = make_rng(seed)
    records = []
    for k in range(n):
        s = random_entangled_bd(rng, k % 4)
        rho = to_density_matrix(s)
        d = bsa_bd(s)
        canonical_t = canonicalize(s)[0].t
        view = canonical_view(d)
        records.extend([
            {"property": "lambda_concurrence_identity",
             "residual": abs(d.lam - (1.0 - wootters_concurrence(rho).value))},
            {"property": "reconstruction", "residual": frobenius(reconstruct(d) - rho)},
            {"property": "face_plane", "residual": abs(1.0 + float(np.sum(view.rho_s.t)))},
            {"property": "ensemble_sum", "residual": frobenius(ensemble_sum(d) - d.lam * d.rho_s_matrix())},
            {"property": "closed_form_rho_s",
             "residual": float(np.max(np.abs(closed_form_rho_s(canonical_t) - view.rho_s_matrix())))},
            {"property": "closest_separable_match",
             "residual": float(np.max(np.abs(closest_separable_bd(s).p - d.rho_s.p)))},
        ])
        if k < verify_n:
            records.append({"property": "optimality", "residual": verify_bsa(rho, d, with_rank=False).worst_residual})
        if k < lqcc_n:
            pair = random_lqcc_pair(rng)
            rho_out, _ = apply_lqcc(rho, pair)
            records.append({"property": "lqcc_concurrence_law",
                            "residual": abs(predict_concurrence(rho, pair) - wootters_concurrence(rho_out).value)})
        if k < oracle_n:
            records.extend(_oracle_records(s, d, seed + k))
    return records


def cmd_batch(args: argparse.Namespace) -> int:
    """Property sweep over seeded random entangled states"""
    started = _started(args)
    records = _batch_records(args.samples, args.verify_samples, args.lqcc_samples, args.seed, args.oracle)
    summary = batch_summary(records)
    summary["threshold"] = summary["property"].map(BATCH_THRESHOLDS)
    summary["passed"] = summary["worst"] <= summary["threshold"]
    passed = bool(summary["passed"].all())
    inputs = {
        "samples": args.samples,
        "verify_samples": args.verify_samples,
        "lqcc_samples": args.lqcc_samples,
        "oracle_samples": args.oracle,
    }
    outputs = {"passed": passed, "summary": summary.to_dict(orient="records")}
    emit(build_report("batch", inputs, outputs, None, args.seed, started), args.out)
    return EXIT_CODES["ok"] if passed else EXIT_CODES["verification_failed"]


def _add_state_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--p", help="Bell weights p1,p2,p3,p4")
    group.add_argument("--t", help="correlation vector t1,t2,t3")
    group.add_argument("--matrix-file", help="JSON file with a 4x4 matrix of [re, im] pairs")


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed (default from BSA_LAB_SEED)")
    parser.add_argument("--out", help="write the report to this file instead of stdout")
    parser.add_argument("--timing", action="store_true", help="record wall time in the report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=TOOL_NAME, description=__doc__)
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {TOOL_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="closed-form Lewenstein-Sanpera decomposition")
    _add_state_arguments(p)
    _add_common_arguments(p)
    p.add_argument("--frame", choices=CLI_CONFIG["frames"], default=CLI_CONFIG["default_frame"])
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="maximality checks of the decomposition")
    _add_state_arguments(p)
    _add_common_arguments(p)
    p.add_argument("--strict", action="store_true", help="tighten tolerances tenfold")
    p.add_argument("--perturb", type=float, help="move this much weight from the pure part onto one member")
    p.add_argument("--alpha", type=int, default=0, help="ensemble member receiving the perturbation")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lqcc", help="apply a local filtering pair")
    _add_state_arguments(p)
    _add_common_arguments(p)
    p.add_argument("--pair-file", help="JSON pair {A: {unitary, filtration}, B: {...}}")
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--axis", default="z")
    p.add_argument("--nu", type=float, default=1.0)
    p.add_argument("--b", type=float, default=0.0)
    p.add_argument("--b-axis", default="z")
    p.add_argument("--same-ab", action="store_true", help="use A for both qubits in the singlet frame of the state")
    p.add_argument("--check", action="store_true", help="verify optimality even when A != B")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_lqcc)

    p = sub.add_parser("entropy", help="relative entropy of entanglement")
    _add_state_arguments(p)
    _add_common_arguments(p)
    p.add_argument("--bits", action="store_true", help="report in bits instead of nats")
    p.add_argument("--numeric", action="store_true", help="also run the numerical minimizer")
    p.add_argument("--grid", type=int, default=ORACLE_CONFIG["grid_n"])
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("oracle", help="numerical best separable approximation")
    _add_state_arguments(p)
    _add_common_arguments(p)
    p.add_argument("--restarts", type=int, default=ORACLE_CONFIG["restarts"])
    p.add_argument("--max-iters", type=int, default=ORACLE_CONFIG["max_iters"])
    p.add_argument("--workers", type=int, default=ORACLE_CONFIG["workers"])
    p.add_argument("--random-starts", action="store_true", help="do not start restart 0 at the top eigenvector")
    p.add_argument("--entropy", action="store_true", help="also run the relative-entropy oracle")
    p.add_argument("--grid", type=int, default=ORACLE_CONFIG["grid_n"])
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("geometry", help="tetrahedron and octahedron data")
    p.add_argument("resolution", type=int, nargs="?", default=0)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("batch", help="property sweep over random entangled states")
    _add_common_arguments(p)
    p.add_argument("--samples", type=int, default=CLI_CONFIG["batch_samples"])
    p.add_argument("--verify-samples", type=int, default=100)
    p.add_argument("--lqcc-samples", type=int, default=1000)
    p.add_argument("--oracle", type=int, default=0, metavar="N", help="also run both oracles on the first N states")
    p.set_defaults(func=cmd_batch)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run the command, map errors to exit codes"""
    parser = build_parser()
    args = parser.parse_args(argv)
    log_info(f"Command {args.command} started")
    try:
        return int(args.func(args))
    except BsaLabError as e:
        log_error(f"Command {args.command} failed", e)
        sys.stderr.write(f"{TOOL_NAME}: {e}\n")
        return e.exit_code
    except (OSError, ValueError) as e:
        log_error(f"Command {args.command} failed", e)
        sys.stderr.write(f"{TOOL_NAME}: {e}\n")
        return EXIT_CODES["invalid_input"]


if __name__ == "__main__":
    sys.exit(main())
