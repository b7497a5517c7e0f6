"""Command-line front end.

Exit codes: 0 success, 2 validation error, 3 runtime or capacity error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import entropy, grover, io, knuth_yao, stateprep
from .state import CapacityError, qubit_cap

EXIT_VALIDATION = 2
EXIT_RUNTIME = 3


class ValidationError(ValueError):
    pass


def _fmt6(x: float) -> float:
    return float(f"{x:.6f}")


def _render(doc: dict, fmt: str) -> str:
    if fmt == "structured":
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    lines = []
    for key in sorted(doc):
        val = doc[key]
        if isinstance(val, float):
            val = f"{val:.6f}" if key in _SIX_DIGITS else repr(val)
        elif isinstance(val, (list, dict)):
            val = json.dumps(val)
        lines.append(f"{key}: {val}")
    return "\n".join(lines) + "\n"


_SIX_DIGITS = {"entropy", "smoothed_entropy_lb", "expected_flips", "gap", "mean_flips"}


def _write(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _require(cond: bool, msg: str):
    if not cond:
        raise ValidationError(msg)


def cmd_prep(args) -> str:
    _require(0 < args.eps < 1, "eps must lie in (0, 1)")
    state = io.load_state(args.state)
    target = stateprep.TargetState.from_state(state)
    circuit, report = stateprep.synthesize(target, args.eps, cap=qubit_cap())
    if args.dump_state:
        from .state import run_circuit

        io.dump_state(run_circuit(circuit), args.dump_state, sparse=args.sparse)
    return _render(report.as_dict(), args.format)


def cmd_entropy(args) -> str:
    _require((args.state is None) != (args.dist is None), "give exactly one of --state or --dist")
    if args.state:
        probs = np.abs(io.load_state(args.state).amplitudes) ** 2
    else:
        probs = io.load_distribution(args.dist)
    doc = {"entropy": _fmt6(entropy.shannon_entropy(probs)), "outcomes": int(probs.size)}
    if args.eps is not None:
        _require(0 <= args.eps < 2, "eps must lie in [0, 2)")
        doc["eps"] = args.eps
        doc["smoothed_entropy_lb"] = _fmt6(entropy.smoothed_entropy_lb(probs, args.eps))
    return _render(doc, args.format)


def cmd_ky(args, rng) -> str:
    _require(args.precision >= 1, "precision must be >= 1")
    probs = io.load_distribution(args.dist)
    tree = knuth_yao.build_ddg(probs, args.precision)
    h = entropy.shannon_entropy(probs)
    flips = knuth_yao.expected_flips(tree)
    doc = {
        "entropy": _fmt6(h),
        "expected_flips": _fmt6(flips),
        "gap": _fmt6(flips - h),
        "precision_bits": args.precision,
        "depth": tree.depth,
    }
    if args.samples:
        _require(args.samples > 0, "samples must be positive")
        out, used = knuth_yao.sample_many(tree, rng, args.samples)
        doc["samples"] = args.samples
        doc["mean_flips"] = _fmt6(float(used.mean()))
        doc["frequencies"] = [
            _fmt6(v) for v in np.bincount(out, minlength=len(probs)) / args.samples
        ]
    text = _render(doc, args.format)
    if args.dump_tree:
        text += tree.dump() + "\n"
    return text


def cmd_grover(args) -> str:
    _require(args.n >= 1, "n must be >= 1")
    _require(0 <= args.marked < args.n, "marked must lie in [0, n)")
    if args.mode == "standard":
        if grover._log2_ceil(args.n) + 1 > qubit_cap():
            raise CapacityError(f"n={args.n} needs more than {qubit_cap()} qubits")
        report = grover.grover_standard(args.n, args.marked)
    elif args.mode == "classical":
        report = grover.classical_scan(args.n)
    else:
        _require(args.T is not None, "--T is required for hybrid mode")
        _require(args.T * args.T >= args.n and args.T <= args.n, "T must lie in [sqrt(n), n]")
        report = grover.hybrid_block(args.n, args.T, args.marked)
    return _render(report.as_dict(), args.format)


def _parse_targets(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ValidationError(f"bad target list {text!r}") from None


def cmd_sweep(args) -> str:
    _require(args.n >= 1, "n must be >= 1")
    targets = _parse_targets(args.targets) if args.targets else grover.valid_targets(args.n)
    for t in targets:
        _require(t * t >= args.n and t <= args.n, f"T={t} outside [sqrt(n), n]")
    reports = grover.tradeoff_sweep(args.n, targets)
    text = grover.sweep_csv(reports)
    if args.csv:
        Path(args.csv).write_text(text)
    if args.format == "structured" and not args.csv:
        return _render({"reports": [r.as_dict() for r in reports]}, "structured")
    return text


def cmd_adversary(args) -> str:
    _require(args.n >= 1, "n must be >= 1")
    _require(args.T * args.T >= args.n and args.T <= args.n, "T must lie in [sqrt(n), n]")
    trace = grover.progress_trace(args.n, args.T)
    doc = trace.as_dict()
    doc["max_violation"] = float(np.max(trace.changes() - trace.bounds))
    return _render(doc, args.format)


def cmd_bound(args) -> str:
    _require(args.n >= 1, "n must be >= 1")
    if args.relation == "grover":
        rel = grover.grover_relation(args.n)
    else:
        _require(args.n <= 12, "hamming relation limited to n <= 12")
        rel = grover.hamming_relation(args.n)
    params = grover.relation_params(rel)
    if args.format == "plain":
        return f"{params.bound}\n"
    doc = dict(params._asdict())
    doc["relation"] = args.relation
    doc["n"] = args.n
    if args.k is not None:
        _require(0 <= args.k <= args.n, "k must lie in [0, n]")
        a, b = grover.alpha_beta(rel, args.k)
        doc.update(k=args.k, alpha=a, beta=b)
    return _render(doc, args.format)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qtradeoff", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for all randomness (default 0)")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=["structured", "csv", "plain"], default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prep", parents=[common], help="synthesize a state-generation circuit")
    p.add_argument("--state", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--dump-state", help="write the generated state in the state file format")
    p.add_argument("--sparse", action="store_true", help="dump in the sparse layout")

    p = sub.add_parser("entropy", parents=[common], help="Shannon and smoothed entropy")
    p.add_argument("--state")
    p.add_argument("--dist")
    p.add_argument("--eps", type=float)

    p = sub.add_parser("ky", parents=[common], help="Knuth-Yao tree statistics")
    p.add_argument("--dist", required=True)
    p.add_argument("--precision", type=int, default=32)
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--dump-tree", action="store_true")

    p = sub.add_parser("grover", parents=[common], help="run one search algorithm")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["standard", "hybrid", "classical"], default="standard")
    p.add_argument("--T", type=int)
    p.add_argument("--marked", type=int, default=0)

    p = sub.add_parser("sweep", parents=[common], help="query/layer tradeoff sweep")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--targets", help="comma-separated T targets (default: all valid)")
    p.add_argument("--csv", help="write the sweep csv here")

    p = sub.add_parser("adversary", parents=[common], help="progress-indicator trace")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--T", type=int, required=True)

    p = sub.add_parser("bound", parents=[common], help="adversary relation parameters")
    p.add_argument("--relation", choices=["grover", "hamming"], default="grover")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    return parser


_DEFAULT_FORMAT = {"sweep": "csv", "bound": "plain"}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = _DEFAULT_FORMAT.get(args.command, "structured")
    rng = np.random.default_rng(args.seed)
    try:
        handler = globals()[f"cmd_{args.command}"]
        text = handler(args, rng) if args.command == "ky" else handler(args)
    except (ValidationError, io.FormatError, OSError) as exc:
        print(f"qtradeoff {args.command}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (CapacityError, ValueError, RuntimeError) as exc:
        print(f"qtradeoff {args.command}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    _write(text, args.out)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
