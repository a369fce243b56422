"""Command-line front end.

Structured output goes to stdout as JSON, diagnostics to stderr.

Exit codes: 0 ok, 1 verification failure, 2 parse error, 3 runtime error,
4 resource limit, 5 unsupported rewrite.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import figlib, formats, verify
from .circuit import enumerate_branches, run, sample_distribution
from .errors import (CertificationError, CircuitFormatError, QMeasureError, ResourceLimitError,
                     RewriteUnsupportedError)
from .measurement import RandomSource
from .rewrite import PASSES, apply_pass, certify
from .statevec import basis_state, to_json as state_json

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_PARSE = 2
EXIT_RUNTIME = 3
EXIT_RESOURCE = 4
EXIT_UNSUPPORTED = 5


def _out(obj) -> None:
    sys.stdout.write(formats.dumps(obj))


def _initial(circuit, bits):
    return basis_state(circuit.n_qubits, bits) if bits else None


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t]


def _label_map(text: str) -> dict[str, str]:
    out = {}
    for item in filter(None, text.split(",")):
        a, _, b = item.partition("=")
        out[a] = b or a
    return out


def cmd_run(args) -> int:
    circuit = formats.load_circuit(args.file)
    records, state = run(circuit, _initial(circuit, args.initial), RandomSource(args.seed))
    for rec in records:
        sys.stdout.write(json.dumps(rec.as_dict(), sort_keys=True) + "\n")
    sys.stdout.write(json.dumps({"final_state": state_json(state)}, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_dist(args) -> int:
    circuit = formats.load_circuit(args.file)
    initial = _initial(circuit, args.initial)
    if args.shots is None:
        _out(formats.distribution_to_json(enumerate_branches(circuit, initial)))
        return EXIT_OK
    if args.seed is None:
        print("error: --shots requires --seed", file=sys.stderr)
        return EXIT_PARSE
    counts = sample_distribution(circuit, initial, args.shots, RandomSource(args.seed))
    _out({"labels": list(circuit.labels), "shots": args.shots, "seed": args.seed,
          "counts": counts})
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.files:
        a, b = (formats.load_circuit(p) for p in args.files)
        result = verify.verify_circuits(
            a, b, _label_map(args.map) if args.map is not None else None,
            _int_list(args.subset_a) if args.subset_a else None,
            _int_list(args.subset_b) if args.subset_b else None,
            tol=args.tol, n_inputs=args.inputs, seed=args.seed)
    elif args.pair:
        result = verify.verify_pair(args.pair, args.tol, args.inputs, args.seed)
    else:
        print("error: give a named pair or --files A B", file=sys.stderr)
        return EXIT_PARSE
    _out(result.as_dict())
    if not result.equivalent:
        print(f"not equivalent: {result.counterexample}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_rewrite(args) -> int:
    circuit = formats.load_circuit(args.file)
    labels = args.labels.split(",") if args.labels else None
    new = apply_pass(circuit, args.pass_name, certify=False, labels=labels,
                     site=args.site, control=args.control)
    cert = certify(circuit, new, args.pass_name)
    if not cert.passed:
        _out({"certificate": cert.as_dict()})
        print(f"{args.pass_name}: rewritten circuit failed certification", file=sys.stderr)
        return EXIT_VERIFY
    formats.save_circuit(new, args.out)
    _out({"certificate": cert.as_dict(), "ops_before": len(circuit), "ops_after": len(new),
          "out": args.out})
    return EXIT_OK


def cmd_demo(args) -> int:
    circuit = figlib.demo_circuit(args.name, args.error, args.variant, args.depth)
    if args.emit:
        formats.save_circuit(circuit, args.emit)
    dist = enumerate_branches(circuit, _initial(circuit, args.initial))
    _out({"demo": args.name, "circuit": formats.circuit_to_json(circuit),
          "distribution": formats.distribution_to_json(dist)})
    return EXIT_OK


def cmd_emit(args) -> int:
    formats.save_circuit(figlib.NAMED_CIRCUITS[args.name](), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qmeasure", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="sample one execution and print its trace")
    r.add_argument("file")
    r.add_argument("--seed", type=int, required=True)
    r.add_argument("--initial", help="initial basis state as a bit string (default all 0)")
    r.set_defaults(func=cmd_run)

    d = sub.add_parser("dist", help="exact outcome distribution, or sampled counts")
    d.add_argument("file")
    d.add_argument("--initial")
    d.add_argument("--shots", type=int)
    d.add_argument("--seed", type=int)
    d.set_defaults(func=cmd_dist)

    v = sub.add_parser("verify", help="check a named equivalence or two circuit files")
    v.add_argument("pair", nargs="?", choices=sorted(verify.PAIRS))
    v.add_argument("--files", nargs=2, metavar=("A", "B"))
    v.add_argument("--map", help="label correspondence a=b,... (default: shared labels)")
    v.add_argument("--subset-a", help="qubits of A to compare, e.g. 0,1")
    v.add_argument("--subset-b", help="qubits of B to compare")
    v.add_argument("--tol", type=float, default=verify.DEFAULT_TOL)
    v.add_argument("--inputs", type=int, default=verify.DEFAULT_INPUTS)
    v.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    v.set_defaults(func=cmd_verify)

    w = sub.add_parser("rewrite", help="apply a rewrite pass and certify it")
    w.add_argument("file")
    w.add_argument("--pass", dest="pass_name", required=True, choices=PASSES)
    w.add_argument("--out", required=True)
    w.add_argument("--labels", help="drop-terminal: labels to drop (default: all terminal)")
    w.add_argument("--site", type=int, help="hxch: op index of the controlled NOT")
    w.add_argument("--control", type=int, help="hxch: which control to exchange")
    w.set_defaults(func=cmd_rewrite)

    m = sub.add_parser("demo", help="build a named circuit and print its distribution")
    m.add_argument("name", choices=figlib.DEMOS)
    m.add_argument("--error", default="none", choices=[e.value for e in figlib.ErrorLocation])
    m.add_argument("--variant", default="measured",
                   choices=[c.value for c in figlib.CodeVariant])
    m.add_argument("--depth", type=int, default=1)
    m.add_argument("--initial")
    m.add_argument("--emit", metavar="PATH", help="also write the circuit as JSON")
    m.set_defaults(func=cmd_demo)

    e = sub.add_parser("emit", help="write a named circuit as JSON")
    e.add_argument("name", choices=sorted(figlib.NAMED_CIRCUITS))
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_emit)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CircuitFormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except RewriteUnsupportedError as exc:
        print(f"rewrite unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except CertificationError as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (QMeasureError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
