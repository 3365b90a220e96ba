"""Command-line front end: ``decoq <subcommand> [options]``.

Every subcommand writes a CSV with a header row to ``--out`` (stdout when
omitted). Floats are printed with 17 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import analytics
from .circuits import (
    Circuit,
    Op,
    build_grover,
    build_qft,
    build_shor_code,
    build_three_qubit_phase_code,
    optimal_iterations,
)
from .cj_engine import MAX_CHOI_QUBITS, choi_fidelity, choi_of_circuit, effective_choi, max_entangled
from .dm_engine import RankConfig, rank_error_scan, run_channels
from .noisegates import NoiseParams, RelaxationParams, hadamard, standard_gates
from .qcore import basis_state, fidelity_overlap
from .sv_engine import RunConfig, run_ideal, run_monte_carlo, sample_states

__all__ = ["CircuitFormatError", "parse_circuit_text", "parse_circuit_file", "main"]


class CircuitFormatError(ValueError):
    """Malformed ``.qc`` circuit text; the message carries the line number."""


# gate id -> (internal gate, number of integer targets, takes angle)
_QC_GATES = {
    "h": ("h", 1, False),
    "x": ("x", 1, False),
    "y": ("y", 1, False),
    "z": ("z", 1, False),
    "cnot": ("cnot", 2, False),
    "swap": ("swap", 2, False),
    "ccnot": ("toffoli", 3, False),
    "cphase": ("cphase", 2, True),
}


def parse_circuit_text(text: str, source: str = "<string>") -> Circuit:
    """Parse the line-oriented ``.qc`` format.

    The first statement must be ``qubits N``; then one op per line, e.g.
    ``h 0``, ``cnot 0 1``, ``ccnot 0 1 2``, ``cphase THETA 0 1`` (radians).
    ``#`` starts a comment.
    """
    n = None
    ops: list[Op] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        where = f"{source}:{lineno}"
        if n is None:
            if words[0] != "qubits" or len(words) != 2:
                raise CircuitFormatError(f"{where}: expected 'qubits N' header, got {line!r}")
            try:
                n = int(words[1])
            except ValueError:
                raise CircuitFormatError(f"{where}: bad qubit count {words[1]!r}") from None
            if n < 1:
                raise CircuitFormatError(f"{where}: qubit count must be positive")
            continue
        if words[0] not in _QC_GATES:
            raise CircuitFormatError(f"{where}: unknown gate {words[0]!r}")
        gate, arity, angled = _QC_GATES[words[0]]
        args = words[1:]
        if len(args) != arity + angled:
            raise CircuitFormatError(f"{where}: {words[0]} takes {arity + angled} arguments")
        params: tuple[float, ...] = ()
        try:
            if angled:
                params = (float(args[0]),)
                args = args[1:]
            targets = tuple(int(a) for a in args)
        except ValueError:
            raise CircuitFormatError(f"{where}: malformed arguments in {line!r}") from None
        for t in targets:
            if not 0 <= t < n:
                raise CircuitFormatError(f"{where}: qubit index {t} out of range for {n} qubits")
        if len(set(targets)) != len(targets):
            raise CircuitFormatError(f"{where}: duplicate qubit indices")
        ops.append(Op(gate, targets, params, tag=f"line{lineno}"))
    if n is None:
        raise CircuitFormatError(f"{source}: missing 'qubits N' header")
    return Circuit(n, tuple(ops))


def parse_circuit_file(path: str | Path) -> Circuit:
    path = Path(path)
    return parse_circuit_text(path.read_text(encoding="utf-8"), str(path))


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def _write_csv(args, header: Sequence[str], rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    if args.out:
        Path(args.out).write_text(buf.getvalue(), encoding="utf-8")
    else:
        sys.stdout.write(buf.getvalue())


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _noise(args) -> NoiseParams:
    return NoiseParams(args.error_rate or 0.0)


def _circuit_arg(args) -> Circuit:
    if args.circuit:
        return parse_circuit_file(args.circuit)
    if args.qubits is None:
        raise ValueError("give --circuit or --qubits")
    n = int(args.qubits)
    iterations = "optimal" if args.iterations is None else args.iterations
    return build_grover(n, args.marked or 0, iterations)


def _cmd_mc(args) -> None:
    circuit = _circuit_arg(args)
    initial = basis_state(circuit.n_qubits)
    target = run_ideal(circuit, initial)
    config = RunConfig(seed=args.seed or 0, runs=args.runs or 1, noise=_noise(args))
    samples = run_monte_carlo(circuit, initial, target, config)
    _write_csv(args, ["run_index", "fidelity", "error"], ((s.run_index, s.fidelity, s.error) for s in samples))


def _cmd_grover(args) -> None:
    n = int(args.qubits)
    marked = args.marked or 0
    jmax = optimal_iterations(n) if args.iterations is None else args.iterations
    e = args.error_rate or 0.0
    success = basis_state(n, marked)
    rows = []
    if args.backend == "sv":
        for j in range(jmax + 1):
            states = sample_states(build_grover(n, marked, j), basis_state(n), NoiseParams(e), args.seed or 0, args.runs or 1)
            p_sim = float(np.mean(np.abs(states[:, marked]) ** 2))
            rows.append((j, analytics.grover_ideal_prob(n, j), p_sim, analytics.grover_success_estimate(n, j, e)))
    else:
        config = RankConfig(args.rank, bool(args.normalize))
        _, traj = run_channels(build_grover(n, marked, jmax), basis_state(n), NoiseParams(e), config, success)
        for j in range(jmax + 1):
            rec = traj.last_with_tag("prep" if j == 0 else f"iter{j}")
            rows.append((j, analytics.grover_ideal_prob(n, j), rec.fidelity, analytics.grover_success_estimate(n, j, e)))
    _write_csv(args, ["j", "p_ideal", "p_sim", "p_estimate_eq10"], rows)


def _cmd_rankscan(args) -> None:
    circuit = _circuit_arg(args)
    ranks = _ints(args.sweep) if args.sweep else [1, 2, 4, 8, 16]
    table = rank_error_scan(circuit, _noise(args), ranks)
    _write_csv(args, ["rank", "abs_error"], table)


def _cmd_qft(args) -> None:
    sizes = _ints(str(args.qubits)) if args.qubits is not None else [5]
    rates = _floats(args.sweep) if args.sweep else [args.error_rate or 0.0]
    rows = []
    for n in sizes:
        circuit = build_qft(n)
        psi0 = basis_state(n, args.input)
        target = run_ideal(circuit, psi0)
        for e in rates:
            rho, _ = run_channels(circuit, psi0, NoiseParams(e), RankConfig(args.rank, bool(args.normalize)), target)
            rows.append((n, e, fidelity_overlap(rho, target), analytics.qft_fidelity_bound(n, e), analytics.qft_fidelity_bound_improved(n, e)))
    _write_csv(args, ["n", "e", "F_sim", "bound_eq11", "bound_eq15"], rows)


_CODES = {"three-phase": build_three_qubit_phase_code, "shor": build_shor_code}


def _cmd_ecc(args) -> None:
    probs = _floats(args.sweep) if args.sweep else [args.p]
    t = args.time if args.time is not None else 1.0
    t1 = args.t1 if args.t1 is not None else math.inf
    circuit = _CODES[args.code]()
    phi = max_entangled(2)
    ideal = np.outer(phi, phi.conj())
    rows = []
    for p in probs:
        relax = RelaxationParams(t1, analytics.t2_from_p(p, t), t)
        f_sim = choi_fidelity(ideal, effective_choi(circuit, relaxation=relax, noise=_noise(args)))
        rows.append((p, f_sim, analytics.three_qubit_code_fmin(p)))
    _write_csv(args, ["p", "F_sim", "F_min_eq18"], rows)


def _payload(name: str):
    if name == "i":
        return None
    if name == "h":
        return hadamard()
    return standard_gates()[name]


def _cmd_choi(args) -> None:
    relax = None
    if args.time is not None:
        relax = RelaxationParams(args.t1 or math.inf, args.t2 or math.inf, args.time)
    noise = _noise(args)
    if args.circuit or args.code == "qft":
        circuit = parse_circuit_file(args.circuit) if args.circuit else build_qft(int(args.qubits or 3))
        if circuit.n_qubits > MAX_CHOI_QUBITS:
            raise ValueError(f"{circuit.n_qubits} qubits exceeds the Choi-state cap of {MAX_CHOI_QUBITS}")
        ideal = choi_of_circuit(circuit)
        noisy = choi_of_circuit(circuit, noise, relax, args.where)
    else:
        payload = _payload(args.payload)
        if args.code == "none":
            ops = [] if payload is None else [Op("unitary", (0,), noisy=False, matrix=payload.matrix)]
            circuit = Circuit(1, tuple(ops) + (Op("slot", (0,)),))
        else:
            circuit = _CODES[args.code](payload)
        bare = Circuit(1, () if payload is None else (Op("unitary", (0,), noisy=False, matrix=payload.matrix),))
        ideal = effective_choi(bare)
        noisy = effective_choi(circuit, noise=noise, relaxation=relax, where=args.where)
    fid = choi_fidelity(ideal, noisy)
    rows = [(r, c, noisy[r, c].real, noisy[r, c].imag) for r, c in zip(*np.nonzero(np.abs(noisy) > 1e-15))]
    _write_csv(args, ["row", "col", "re", "im"], rows)
    # keep stdout pure CSV when the matrix itself goes there
    print(f"fidelity,{_fmt(fid)}", file=sys.stdout if args.out else sys.stderr)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", choices=("sv", "dm", "cj"))
    common.add_argument("--qubits")
    common.add_argument("--marked", type=int)
    common.add_argument("--iterations", type=int)
    common.add_argument("--error-rate", type=float)
    common.add_argument("--rank", type=int)
    common.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=None)
    common.add_argument("--runs", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--t1", type=float)
    common.add_argument("--t2", type=float)
    common.add_argument("--time", type=float)
    common.add_argument("--circuit")
    common.add_argument("--out")
    common.add_argument("--sweep", help="comma-separated list of sweep values")

    parser = argparse.ArgumentParser(prog="decoq", description="Noisy quantum circuit simulation experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("mc", parents=[common], help="Monte Carlo fidelity samples")
    sub.add_parser("grover", parents=[common], help="Grover success probability per iteration")
    sub.add_parser("rankscan", parents=[common], help="fidelity error versus truncation rank")
    qft = sub.add_parser("qft", parents=[common], help="QFT fidelity and analytical bounds")
    qft.add_argument("--input", type=int, default=0, help="basis index of the input state")
    ecc = sub.add_parser("ecc", parents=[common], help="error-correction code fidelity versus phase-flip probability")
    ecc.add_argument("--code", choices=sorted(_CODES), default="three-phase")
    ecc.add_argument("--p", type=float, default=0.1)
    choi = sub.add_parser("choi", parents=[common], help="Choi matrix dump and fidelity")
    choi.add_argument("--code", choices=["none", "qft"] + sorted(_CODES), default="none")
    choi.add_argument("--payload", choices=("i", "x", "y", "z", "h"), default="i")
    choi.add_argument("--where", choices=("auto", "slot", "layer", "gate"), default="auto")
    return parser


# backends each subcommand accepts; the first is the default
_BACKENDS = {
    "mc": ("sv",),
    "grover": ("dm", "sv"),
    "rankscan": ("dm",),
    "qft": ("dm",),
    "ecc": ("cj",),
    "choi": ("cj",),
}


def _validate(args) -> None:
    allowed = _BACKENDS[args.command]
    if args.backend is None:
        args.backend = allowed[0]
    if args.backend not in allowed:
        raise ValueError(f"{args.command} does not support --backend {args.backend}")
    if args.backend != "dm" and (args.rank is not None or args.normalize is not None):
        raise ValueError("--rank and --normalize require the dm backend")
    if args.backend != "sv" and (args.runs is not None or args.seed is not None):
        raise ValueError("--runs and --seed require the sv backend")
    if args.command == "grover" and args.qubits is None:
        raise ValueError("grover needs --qubits")
    if args.command == "grover" and args.circuit:
        raise ValueError("grover builds its own circuit; --circuit is not accepted")
    if args.command == "choi" and args.code == "qft" and args.payload != "i":
        raise ValueError("--payload applies to the error-correction codes only")
    if args.command == "choi" and args.circuit and args.code != "none":
        raise ValueError("--circuit and --code are mutually exclusive")
    if args.command == "choi" and args.time is None and (args.t1 is not None or args.t2 is not None):
        raise ValueError("--t1/--t2 need --time")
    if args.rank is not None and args.rank < 1:
        raise ValueError("--rank must be >= 1")


_COMMANDS = {
    "mc": _cmd_mc,
    "grover": _cmd_grover,
    "rankscan": _cmd_rankscan,
    "qft": _cmd_qft,
    "ecc": _cmd_ecc,
    "choi": _cmd_choi,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"decoq {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
