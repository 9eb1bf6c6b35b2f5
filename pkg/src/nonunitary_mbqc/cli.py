"""Command-line front end.

Exit codes: 0 success, 1 verification false, 2 usage or parse error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, estimators, gates, linalg, mbqc, protocols, zx
from .angles import AngleError, parse_angle
from .patterns import PatternParseError, fixture_names, fixture_text, loads_pattern
from .zxio import ZxParseError, loads_zx, reference_matrix

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

SINGLE_KETS = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([1, 1], dtype=complex) / np.sqrt(2),
    "-": np.array([1, -1], dtype=complex) / np.sqrt(2),
}


class UsageError(ValueError):
    pass


# ------------------------------------------------------------------ parsing helpers


def _read_source(name: str) -> str:
    """File contents, falling back to a bundled fixture of the same name."""
    path = Path(name)
    if path.exists():
        return path.read_text()
    if name in fixture_names():
        return fixture_text(name)
    raise UsageError(f"no such file or bundled fixture: {name}")


def parse_input_state(spec: str, n_qubits: int) -> np.ndarray:
    """``spec`` is a string over ``0 1 + -``, character ``k`` for input qubit
    ``k``, or comma-separated complex amplitudes such as ``1,1j``."""
    spec = spec.strip()
    if "," in spec:
        try:
            amps = np.array([complex(x.replace(" ", "")) for x in spec.split(",")])
        except ValueError as exc:
            raise UsageError(f"bad amplitude list {spec!r}") from exc
        if amps.size != 2**n_qubits:
            raise UsageError(f"need {2**n_qubits} amplitudes, got {amps.size}")
        if np.linalg.norm(amps) == 0:
            raise UsageError("input amplitudes are all zero")
        return amps / np.linalg.norm(amps)
    if len(spec) != n_qubits or set(spec) - set(SINGLE_KETS):
        raise UsageError(f"input {spec!r} must be {n_qubits} characters from '01+-'")
    state = np.ones(1, dtype=complex)
    for ch in spec:
        state = np.kron(SINGLE_KETS[ch], state)
    return state


def parse_bits(text: str, m: int) -> tuple[int, ...]:
    text = text.strip()
    if len(text) != m or set(text) - {"0", "1"}:
        raise UsageError(f"outcome string {text!r} must have {m} bits")
    return tuple(int(c) for c in text)


def parse_grid(text: str) -> list[float]:
    """``start:stop:count`` (inclusive, ``count`` points) or a comma list."""
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise UsageError(f"grid {text!r} must be start:stop:count")
            lo, hi = parse_angle(parts[0]), parse_angle(parts[1])
            count = int(parts[2])
            if count < 1:
                raise UsageError("grid needs at least one point")
            if count == 1:
                return [lo]
            return [float(x) for x in np.linspace(lo, hi, count)]
        return [parse_angle(p) for p in text.split(",")]
    except (AngleError, ValueError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(str(exc)) from exc


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _complex_list(a: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(a).reshape(-1)]


# ------------------------------------------------------------------ output


def manifest(command: str, args: argparse.Namespace) -> dict:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out", "format") and v is not None}
    return {
        "command": command,
        "params": params,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def render_table(man: dict, columns: list[str], rows: list[list], fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"manifest": man, "columns": columns, "rows": [[_jsonable(v) for v in r] for r in rows]}, indent=2) + "\n"
    buf = io.StringIO()
    for key in ("command", "version", "seed", "timestamp"):
        buf.write(f"# {key}: {man[key]}\n")
    buf.write(f"# params: {json.dumps(man['params'], sort_keys=True, default=str)}\n")
    if fmt == "dat":
        buf.write("# " + " ".join(columns) + "\n")
        for r in rows:
            buf.write(" ".join(_fmt(v) for v in r) + "\n")
        return buf.getvalue()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------ commands


def _load_pattern_arg(args) -> mbqc.MeasurementPattern:
    return loads_pattern(_read_source(args.pattern), epsilon=args.epsilon)


def cmd_pattern_run(args) -> int:
    pattern = _load_pattern_arg(args)
    psi = parse_input_state(args.input, pattern.n_inputs) if pattern.n_inputs else np.ones(1, dtype=complex)
    if args.postselect is not None:
        policy = mbqc.OutcomePolicy.postselect(parse_bits(args.postselect, len(pattern.order)))
    else:
        policy = mbqc.OutcomePolicy.sample(args.seed)
    rec = mbqc.run_pattern(pattern, psi, policy)
    result = {
        "outcomes": "".join(map(str, rec.outcomes)),
        "order": list(pattern.order),
        "joint_probability": rec.joint_probability,
        "output_nodes": list(pattern.outputs),
        "amplitudes": _complex_list(rec.output_state),
    }
    if args.format == "json":
        text = json.dumps({"manifest": manifest("pattern run", args), "result": result}, indent=2) + "\n"
    else:
        rows = [[k, float(z.real), float(z.imag)] for k, z in enumerate(rec.output_state)]
        man = manifest("pattern run", args)
        man["params"]["outcomes"] = result["outcomes"]
        man["params"]["joint_probability"] = rec.joint_probability
        text = render_table(man, ["index", "re", "im"], rows, args.format)
    _emit(text, args.out)
    return EXIT_OK


def cmd_extract_op(args) -> int:
    pattern = _load_pattern_arg(args)
    bits = parse_bits(args.outcomes, len(pattern.order))
    k = mbqc.extract_kraus(pattern, bits)
    if np.linalg.norm(k) < 1e-12:
        raise ZeroDivisionError("outcome string has zero probability for every input")
    choi, data = mbqc.operator_from_choi(pattern, bits)
    agree = linalg.equal_up_to_scalar(k, choi, 1e-9)
    mu = linalg.singular_spectrum(k)
    result = {
        "outcomes": "".join(map(str, bits)),
        "shape": list(k.shape),
        "matrix": [_complex_list(row) for row in k],
        "s_op_vn": linalg.vn_entropy(mu),
        "s_op_renyi2": linalg.renyi2_entropy(mu),
        "schmidt": [float(x) for x in data.coefficients],
        "agreement": bool(agree),
    }
    if args.format == "json":
        text = json.dumps({"manifest": manifest("extract-op", args), "result": result}, indent=2) + "\n"
    else:
        man = manifest("extract-op", args)
        man["params"].update(s_op_vn=result["s_op_vn"], s_op_renyi2=result["s_op_renyi2"], agreement=agree)
        rows = [[i, j, float(k[i, j].real), float(k[i, j].imag)] for i in range(k.shape[0]) for j in range(k.shape[1])]
        text = render_table(man, ["row", "col", "re", "im"], rows, args.format)
    _emit(text, args.out)
    return EXIT_OK if agree else EXIT_FALSE


def _sweep_sop(args):
    grid = parse_grid(args.epsilon or "0:pi/2:20")
    rows = []
    for eps in grid:
        n = gates.ite_step(eps)
        mu = linalg.singular_spectrum(n)
        rows.append([eps, gates.a_of_epsilon(eps) if eps < np.pi / 2 else math.inf,
                     linalg.vn_entropy(mu), linalg.renyi2_entropy(mu), math.log(2) - eps**2 / 2])
    return ["epsilon", "a", "s_op_vn", "s_op_renyi2", "small_eps_approx"], rows


def _sweep_ite(args):
    grid = parse_grid(args.epsilon or "0.25")
    steps = 8 if args.steps is None else args.steps
    if steps < 0:
        raise UsageError("--steps must be non-negative")
    rows = []
    for eps in grid:
        a = gates.a_of_epsilon(eps)
        for n in range(steps + 1):
            p_mat, tau = protocols.ite_chain(eps, n, "matrices")
            p_mb, _ = protocols.ite_chain(eps, n, "mbqc", x_policy="correct", seed=args.seed)
            rows.append([eps, n, tau, p_mat, p_mb, a ** (2 * n) / (1 + a ** (2 * n))])
    return ["epsilon", "n", "tau", "p0_matrices", "p0_mbqc", "p0_closed_form"], rows


def _sweep_feedback(args):
    grid = parse_grid(args.epsilon or "0.05:1.5:30")
    steps = 8 if args.steps is None else args.steps
    if steps < 1:
        raise UsageError("--steps must be at least 1")
    beta = parse_angle(args.beta) if args.beta is not None else np.pi / 2
    psi = gates.BlochState(beta)
    rows = []
    seeds = np.random.SeedSequence(args.seed).spawn(len(grid))
    for eps, ss in zip(grid, seeds):
        a = gates.a_of_epsilon(eps)
        try:
            protocols.feedback_schedule(a, 1)
        except ValueError as exc:
            raise UsageError(f"epsilon {eps!r}: {exc}") from exc
        pmax = protocols.p_success(a, psi, math.inf)
        mc = None
        if args.shots:
            sub = int(ss.generate_state(1)[0])
            mc = protocols.simulate_feedback(a, psi, steps, args.shots, sub).p_success_empirical
        for n in range(1, steps + 1):
            row = [eps, a, beta, n, protocols.p_attempt(a, psi, n), protocols.p_success(a, psi, n), pmax]
            row.append(float(mc[n - 1]) if mc is not None else "")
            rows.append(row)
    return ["epsilon", "a", "beta", "n", "p_attempt", "p_success", "p_max", "p_success_mc"], rows


def _sweep_estimator(args):
    grid = parse_grid(args.epsilon or "0,0.3,0.6,0.9,1.2,1.5")
    m = args.unitaries or 40
    k = args.shots or 500
    repeats = args.repeats or 10
    swap_shots = args.swap_shots
    rows = []
    for i, eps in enumerate(grid):
        n = gates.ite_step(eps)
        seed = args.seed + i
        cfg = estimators.ShadowConfig(m, k, args.ensemble, seed)
        rows.append([eps, "exact", estimators.exact_renyi2_op(n), 0.0, 1, m, k, seed])
        for rep in (
            estimators.swap_test_renyi2(n, swap_shots, seed),
            estimators.hamming_renyi2(n, cfg, repeats=repeats),
            estimators.shadow_renyi2_repeated(n, cfg, repeats=repeats),
        ):
            rows.append([eps, rep.method, rep.value, rep.std_error, rep.repeats, m, k, seed])
    return ["epsilon", "method", "mean", "std_error", "repeats", "M", "K", "seed"], rows


SWEEPS = {"sop": _sweep_sop, "ite": _sweep_ite, "feedback": _sweep_feedback, "estimator": _sweep_estimator}


def cmd_sweep(args) -> int:
    columns, rows = SWEEPS[args.kind](args)
    _emit(render_table(manifest(f"sweep {args.kind}", args), columns, rows, args.format), args.out)
    return EXIT_OK


_BUILTIN_ZX = {"teleport": "teleport.zx", "fig7": "fig7.zx"}


def _load_zx_arg(name: str, epsilon: float | None):
    source = _BUILTIN_ZX.get(name, name)
    return loads_zx(_read_source(source), epsilon=epsilon)


def cmd_zx_check(args) -> int:
    eps = 0.0 if args.epsilon is None else parse_angle(args.epsilon)
    first = _load_zx_arg(args.diagram, eps)
    if args.other is not None:
        target_name = args.other
        target = _load_zx_arg(args.other, eps).diagram.to_matrix()
    else:
        target_name = args.expect or first.expect
        if target_name is None:
            raise UsageError("nothing to compare against: give a second diagram or --expect")
        target = reference_matrix(target_name, epsilon=eps)
    mine = first.diagram.to_matrix()
    if mine.shape != target.shape:
        raise UsageError(f"signature mismatch: {mine.shape} vs {target.shape}")
    simplified = zx.simplify(first.diagram)
    equivalent = zx.verify_equiv(mine, target)
    result = {
        "diagram": args.diagram,
        "against": target_name,
        "equivalent": bool(equivalent),
        "spiders_before": len(first.diagram.spiders),
        "spiders_after_simplify": len(simplified.spiders),
    }
    if equivalent:
        r = linalg.scalar_ratio(mine, target)
        result["scalar_ratio"] = [float(r.real), float(r.imag)]
    if args.format == "json":
        text = json.dumps({"manifest": manifest("zx check", args), "result": result}, indent=2) + "\n"
    else:
        text = "".join(f"{k}: {v}\n" for k, v in result.items())
    _emit(text, args.out)
    return EXIT_OK if equivalent else EXIT_FALSE


# ------------------------------------------------------------------ argparse


def _epsilon_value(text: str) -> float:
    try:
        return parse_angle(text)
    except AngleError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nonunitary-mbqc", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *, fmt_choices=("csv", "json", "dat")):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=fmt_choices, default="csv")
        sp.add_argument("--out", default=None, help="write output here instead of stdout")

    pat = sub.add_parser("pattern", help="pattern operations")
    pat_sub = pat.add_subparsers(dest="pattern_command", required=True)
    run = pat_sub.add_parser("run", help="run a pattern on an input state")
    run.add_argument("pattern", help="pattern file or bundled fixture name")
    run.add_argument("--input", default="+", help="'01+-' string or amplitude list")
    run.add_argument("--postselect", default=None, help="outcome bits in measurement order")
    run.add_argument("--epsilon", type=_epsilon_value, default=None)
    common(run)
    run.set_defaults(func=cmd_pattern_run)

    ext = sub.add_parser("extract-op", help="Kraus operator and operator entanglement")
    ext.add_argument("pattern")
    ext.add_argument("outcomes", help="outcome bits in measurement order")
    ext.add_argument("--epsilon", type=_epsilon_value, default=None)
    common(ext)
    ext.set_defaults(func=cmd_extract_op)

    sw = sub.add_parser("sweep", help="parameter sweeps as tables")
    sw.add_argument("kind", choices=sorted(SWEEPS))
    sw.add_argument("--epsilon", default=None, help="grid start:stop:count or comma list")
    sw.add_argument("--steps", type=int, default=None)
    sw.add_argument("--beta", default=None)
    sw.add_argument("--shots", type=int, default=None)
    sw.add_argument("--unitaries", type=int, default=None)
    sw.add_argument("--repeats", type=int, default=None)
    sw.add_argument("--swap-shots", type=int, default=20000)
    sw.add_argument("--ensemble", choices=estimators.ENSEMBLES, default="haar")
    common(sw)
    sw.set_defaults(func=cmd_sweep)

    zxp = sub.add_parser("zx", help="ZX diagram operations")
    zx_sub = zxp.add_subparsers(dest="zx_command", required=True)
    chk = zx_sub.add_parser("check", help="verify a diagram up to scalar")
    chk.add_argument("diagram", help="diagram file, fixture, or builtin (teleport, fig7)")
    chk.add_argument("other", nargs="?", default=None, help="second diagram to compare against")
    chk.add_argument("--expect", default=None, help="named reference matrix")
    chk.add_argument("--epsilon", default=None)
    common(chk, fmt_choices=("text", "json"))
    chk.set_defaults(func=cmd_zx_check, format="text")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, PatternParseError, ZxParseError, AngleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (estimators.EstimationFailure, ZeroDivisionError, OverflowError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
