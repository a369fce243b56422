"""JSON forms of circuits, states, traces and distributions.

Circuit files look like::

    {"qubits": 3,
     "ops": [{"gate": "H", "targets": [0]},
             {"gate": "CNOT", "targets": [0, 1]},
             {"gate": "M", "targets": [2], "label": "x"},
             {"gate": "X", "targets": [0], "cond": [["x", 1]]}]}

CNOT targets are ``[control, target]``, TOFFOLI ``[c1, c2, target]``.  CU
carries ``controls``, ``targets`` and ``matrix``; CUSTOM ``targets`` and
``matrix``.  Matrices are row-major lists of ``[re, im]`` pairs, either flat
or nested by row.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .circuit import BranchDistribution, Circuit, GateOp, Measure
from .errors import CircuitFormatError, InputError
from .gates import GateKind, UnitaryGate
from .statevec import to_json as state_to_json

__all__ = [
    "circuit_to_json", "circuit_from_json", "load_circuit", "save_circuit",
    "distribution_to_json", "state_to_json", "dumps",
]


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _matrix_to_json(m: np.ndarray) -> list:
    return [[float(v.real), float(v.imag)] for v in np.asarray(m).reshape(-1)]


def _matrix_from_json(raw) -> np.ndarray:
    arr = np.asarray(raw, dtype=float)
    if arr.shape[-1] != 2:
        raise CircuitFormatError("matrix entries must be [re, im] pairs")
    flat = (arr[..., 0] + 1j * arr[..., 1]).reshape(-1)
    dim = int(round(np.sqrt(flat.size)))
    if dim * dim != flat.size:
        raise CircuitFormatError(f"matrix with {flat.size} entries is not square")
    return flat.reshape(dim, dim)


def op_to_json(op) -> dict:
    if isinstance(op, Measure):
        return {"gate": "M", "targets": [op.qubit], "label": op.label}
    g = op.gate
    out: dict = {"gate": g.kind.value, "targets": list(g.targets)}
    if g.kind is GateKind.CU:
        out["controls"] = list(g.controls)
    if g.kind in (GateKind.CU, GateKind.CUSTOM):
        out["matrix"] = _matrix_to_json(g.base_matrix)
    if op.cond:
        out["cond"] = [[lab, bit] for lab, bit in op.cond]
    return out


def circuit_to_json(circuit: Circuit) -> dict:
    return {"qubits": circuit.n_qubits, "ops": [op_to_json(op) for op in circuit.ops]}


def op_from_json(raw: dict):
    if not isinstance(raw, dict):
        raise CircuitFormatError(f"op must be an object, got {raw!r}")
    name = raw.get("gate")
    targets = raw.get("targets")
    if not isinstance(targets, list) or not all(isinstance(t, int) for t in targets):
        raise CircuitFormatError(f"op {raw!r} needs an integer 'targets' list")
    if name == "M":
        if len(targets) != 1 or not isinstance(raw.get("label"), str):
            raise CircuitFormatError(f"measurement {raw!r} needs one target and a string label")
        return Measure(targets[0], raw["label"])
    try:
        kind = GateKind(name)
    except ValueError:
        raise CircuitFormatError(f"unknown gate {name!r}") from None
    matrix = _matrix_from_json(raw["matrix"]) if "matrix" in raw else None
    cond = raw.get("cond", [])
    if not isinstance(cond, list) or not all(
            isinstance(c, list) and len(c) == 2 and isinstance(c[0], str) for c in cond):
        raise CircuitFormatError(f"bad condition {cond!r}; expected [[label, bit], ...]")
    gate = UnitaryGate(kind, tuple(targets), tuple(raw.get("controls", ())), matrix)
    return GateOp(gate, tuple((lab, bit) for lab, bit in cond))


def circuit_from_json(obj: dict) -> Circuit:
    if not isinstance(obj, dict) or "qubits" not in obj or "ops" not in obj:
        raise CircuitFormatError("circuit must be an object with 'qubits' and 'ops'")
    if not isinstance(obj["qubits"], int) or not isinstance(obj["ops"], list):
        raise CircuitFormatError("'qubits' must be an integer and 'ops' a list")
    try:
        return Circuit(obj["qubits"], tuple(op_from_json(op) for op in obj["ops"]))
    except CircuitFormatError:
        raise
    except (InputError, KeyError, TypeError, ValueError) as exc:
        raise CircuitFormatError(str(exc)) from exc


def load_circuit(path: str | Path) -> Circuit:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CircuitFormatError(f"cannot read {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitFormatError(f"{path}: invalid JSON ({exc})") from exc
    return circuit_from_json(obj)


def save_circuit(circuit: Circuit, path: str | Path) -> None:
    Path(path).write_text(dumps(circuit_to_json(circuit)))


def distribution_to_json(dist: BranchDistribution, states: bool = True) -> dict:
    out: dict = {
        "labels": list(dist.labels),
        "probabilities": {k: b.probability for k, b in dist.items()},
    }
    if states:
        out["states"] = {k: state_to_json(b.state) for k, b in dist.items()}
    return out
