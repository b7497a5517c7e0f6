"""Text formats for states and distributions.

State documents are JSON, in one of two layouts::

    [[0.6, 0.0], [0.0, 0.8]]                             # dense [re, im] pairs
    [{"bitstring": "01", "re": 0.6, "im": 0.0}, ...]      # sparse records

A sparse document may also be wrapped as ``{"num_qubits": n, "entries": [...]}``
to fix the register width. Unlisted sparse entries are zero. Distribution
documents are a JSON array of probabilities (whitespace-separated numbers
are accepted too).
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .state import Statevector

NORM_TOL = 1e-6


class FormatError(ValueError):
    """Malformed state or distribution document."""


def _normalize(amps: np.ndarray) -> Statevector:
    norm = float(np.linalg.norm(amps))
    if abs(norm * norm - 1.0) > NORM_TOL:
        raise FormatError(f"amplitudes have squared norm {norm * norm:.9g}, expected 1")
    return Statevector.from_amplitudes(amps / norm)


def parse_state(doc) -> Statevector:
    n = None
    if isinstance(doc, dict):
        if "entries" in doc:
            n = doc.get("num_qubits")
            doc = doc["entries"]
        elif "amplitudes" in doc:
            doc = doc["amplitudes"]
        else:
            raise FormatError("state object needs 'entries' or 'amplitudes'")
    if not isinstance(doc, list) or not doc:
        raise FormatError("state document must be a non-empty list")
    if all(isinstance(e, dict) for e in doc):
        return _parse_sparse(doc, n)
    try:
        pairs = np.asarray(doc, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"dense state must be [re, im] pairs: {exc}") from None
    if pairs.ndim != 2 or pairs.shape[1] != 2:
        raise FormatError("dense state must be a list of [re, im] pairs")
    length = pairs.shape[0]
    if length & (length - 1):
        raise FormatError(f"dense state length {length} is not a power of two")
    return _normalize(pairs[:, 0] + 1j * pairs[:, 1])


def _parse_sparse(records: list[dict], n: int | None) -> Statevector:
    widths = set()
    for r in records:
        bs = r.get("bitstring")
        if not isinstance(bs, str) or (bs and set(bs) - {"0", "1"}):
            raise FormatError(f"bad bitstring in record {r!r}")
        widths.add(len(bs))
    if n is None:
        if len(widths) != 1:
            raise FormatError(f"inconsistent bitstring widths {sorted(widths)}")
        n = widths.pop()
    elif max(widths) > n:
        raise FormatError(f"bitstring wider than num_qubits={n}")
    amps = np.zeros(1 << n, dtype=np.complex128)
    for r in records:
        i = int(r["bitstring"], 2) if r["bitstring"] else 0
        try:
            amps[i] += float(r.get("re", 0.0)) + 1j * float(r.get("im", 0.0))
        except (TypeError, ValueError) as exc:
            raise FormatError(f"bad amplitude in record {r!r}: {exc}") from None
    return _normalize(amps)


def load_state(path: str | Path) -> Statevector:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from None
    return parse_state(doc)


def format_state(state: Statevector, sparse: bool = False, tol: float = 0.0):
    """Document for ``state`` in the dense or sparse layout."""
    amps = state.amplitudes
    if not sparse:
        return [[float(a.real), float(a.imag)] for a in amps]
    n = state.num_qubits
    return {
        "num_qubits": n,
        "entries": [
            {"bitstring": format(i, f"0{n}b") if n else "", "re": float(a.real), "im": float(a.imag)}
            for i, a in enumerate(amps)
            if abs(a) > tol
        ],
    }


def dump_state(state: Statevector, path: str | Path, sparse: bool = False):
    Path(path).write_text(json.dumps(format_state(state, sparse=sparse)) + "\n")


def parse_distribution(text: str) -> np.ndarray:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        doc = text.split()
    if isinstance(doc, dict):
        doc = doc.get("probs")
    try:
        probs = np.asarray(doc, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"distribution must be an array of numbers: {exc}") from None
    if probs.ndim != 1 or probs.size == 0 or not np.all(np.isfinite(probs)):
        raise FormatError("distribution must be a non-empty flat array of finite numbers")
    return probs


def load_distribution(path: str | Path) -> np.ndarray:
    return parse_distribution(Path(path).read_text())


def num_qubits_for(size: int) -> int:
    return max(0, math.ceil(math.log2(size))) if size > 1 else 0
