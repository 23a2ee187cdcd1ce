"""JSON input documents and deterministic report output.

Complex numbers are written as ``[re, im]`` pairs. Floats use Python's
shortest round-trip repr (at most 17 significant digits); infinities are
written as the strings ``"inf"``/``"-inf"`` so the output stays valid JSON.
"""

from __future__ import annotations

import dataclasses
import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .constructions import GeneratingFunction
from .sequences import DiscreteSequence, SequenceError, lattice

FAMILIES = ("lattice", "perturbed_lattice", "custom")


class SpecError(ValueError):
    """An input document is malformed."""


def _complex(obj, what="point") -> complex:
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        re, im = obj
    elif isinstance(obj, dict) and set(obj) == {"re", "im"}:
        re, im = obj["re"], obj["im"]
    elif isinstance(obj, (int, float)) and not isinstance(obj, bool):
        re, im = obj, 0.0
    else:
        raise SpecError(f"{what} {obj!r} is not a [re, im] pair")
    try:
        return complex(_real(re), _real(im))
    except (TypeError, ValueError):
        raise SpecError(f"{what} {obj!r} is not numeric") from None


def _real(x) -> float:
    if isinstance(x, str) and x in ("inf", "-inf"):
        return float(x)
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise SpecError(f"{x!r} is not a number")
    return float(x)


def read_document(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise SpecError(f"{path}: top level must be an object")
    return doc


def sequence_from_spec(doc: dict) -> DiscreteSequence:
    """Expand a sequence document into a validated :class:`DiscreteSequence`.

    Either ``{"points": [[re, im], ...], "truncation_radius": R}`` or a family
    descriptor ``{"family": "lattice" | "perturbed_lattice", "imag_offset": ..,
    "spacing": .., "half_width": .., "perturbations": [[k, [dre, dim]], ...]}``.
    """
    family = doc.get("family", "custom" if "points" in doc else None)
    if family not in FAMILIES:
        raise SpecError(f"field 'family': unknown family {family!r}")
    try:
        if family == "custom":
            raw = doc.get("points")
            if not isinstance(raw, list) or not raw:
                raise SpecError("field 'points': need a nonempty list of [re, im] pairs")
            pts = [_complex(p) for p in raw]
            radius = _real(doc.get("truncation_radius", "inf"))
            return DiscreteSequence.from_points(
                pts, "custom", radius, line_shift=_real(doc.get("line_shift", 0.0))
            )
        hw = doc.get("half_width")
        if isinstance(hw, bool) or not isinstance(hw, int) or hw < 1:
            raise SpecError("field 'half_width': must be a positive integer")
        spacing = _real(doc.get("spacing", 1.0))
        if not spacing > 0:
            raise SpecError("field 'spacing': must be positive")
        base = lattice(_real(doc.get("imag_offset", 1.0)), spacing, hw,
                       _real(doc.get("real_offset", 0.0)))
        if family == "lattice":
            if doc.get("perturbations"):
                raise SpecError("field 'perturbations': use family 'perturbed_lattice'")
            return base
        pts = base.points.copy()
        for entry in doc.get("perturbations", []):
            if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[0], int)):
                raise SpecError(f"field 'perturbations': bad entry {entry!r}")
            k, off = entry
            k_min, k_max = base.metadata["k_min"], base.metadata["k_max"]
            if not k_min <= k <= k_max:
                raise SpecError(
                    f"field 'perturbations': index {k} outside {k_min}..{k_max}"
                )
            pts[k - k_min] += _complex(off, "offset")
        return DiscreteSequence(pts, "perturbed_lattice", base.truncation_radius)
    except SequenceError as exc:
        raise SpecError(str(exc)) from None


def sequence_to_spec(seq: DiscreteSequence) -> dict:
    return {
        "points": [[float(p.real), float(p.imag)] for p in seq.points],
        "truncation_radius": seq.truncation_radius,
    }


def values_from_doc(doc: dict) -> tuple[np.ndarray, float]:
    raw = doc.get("values")
    if not isinstance(raw, list):
        raise SpecError("field 'values': need a list of [re, im] pairs")
    vals = np.array([_complex(v, "value") for v in raw], dtype=complex)
    return vals, _real(doc.get("value_exponent", 0.0))


def generator_from_doc(doc: dict) -> GeneratingFunction:
    try:
        return GeneratingFunction(
            kind=doc["kind"],
            shift=_complex(doc.get("shift", [0.0, 0.0]), "shift"),
            spacing=_real(doc.get("spacing", 1.0)),
            perturbed_indices=tuple((int(k), _real(e)) for k, e in doc.get("perturbed_indices", [])),
            finite_zeros=tuple(_complex(w, "zero") for w in doc.get("finite_zeros", [])),
            delta=None if doc.get("delta") is None else _real(doc["delta"]),
        )
    except KeyError:
        raise SpecError("generator document needs a 'kind'") from None
    except (TypeError, ValueError) as exc:
        raise SpecError(f"bad generator: {exc}") from None


def generator_to_doc(F: GeneratingFunction) -> dict:
    doc = {
        "kind": F.kind,
        "shift": F.shift,
        "spacing": F.spacing,
        "perturbed_indices": [[k, e] for k, e in F.perturbed_indices],
        "finite_zeros": list(F.finite_zeros),
        "delta": F.delta,
        "in_bernstein_algebra": F.in_bernstein_algebra,
    }
    if F.certificate is not None:
        doc["certificate"] = F.certificate
    return doc


def jsonable(obj: Any) -> Any:
    """Convert reports to plain JSON types, preserving field order."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if hasattr(obj, "_asdict"):
        return {k: jsonable(v) for k, v in obj._asdict().items()}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [jsonable(float(obj.real)), jsonable(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), indent=2, allow_nan=False) + "\n"


def write_csv(path, header: tuple[str, ...], rows) -> None:
    """Comma-separated rows under a header line, LF line endings."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(str(jsonable(float(v))) for v in row) + "\n")
