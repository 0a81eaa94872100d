"""Problem-file codec: JSON in, canonical JSON out.

Complex scalars travel as two-element arrays [re, im]; matrices are row-major
nested lists; elements of a block algebra are lists of square matrices, one
per block.  Writing always normalizes (sorted keys, two-space indent, newline
at EOF) so equal inputs produce byte-equal artifacts.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import Algebra, Element


class SpecError(ValueError):
    """Malformed problem file: parse or schema failure."""


def _complex_in(obj) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if (isinstance(obj, (list, tuple)) and len(obj) == 2
            and all(isinstance(p, (int, float)) for p in obj)):
        return complex(obj[0], obj[1])
    raise SpecError(f"expected a number or [re, im] pair, got {obj!r}")


def matrix_in(obj, shape: tuple[int, int] | None = None) -> np.ndarray:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise SpecError("matrix must be a nonempty list of rows")
    width = len(obj[0])
    if any(len(r) != width for r in obj):
        raise SpecError("matrix rows have unequal lengths")
    out = np.array([[_complex_in(v) for v in row] for row in obj], dtype=complex)
    if shape is not None and out.shape != shape:
        raise SpecError(f"matrix has shape {out.shape}, expected {shape}")
    return out


def _complex_out(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def matrix_out(m: np.ndarray) -> list:
    return [[_complex_out(v) for v in row] for row in np.atleast_2d(m)]


def element_in(algebra: Algebra, obj) -> Element:
    if not isinstance(obj, list) or len(obj) != len(algebra.blocks):
        raise SpecError(f"element must list {len(algebra.blocks)} block matrices")
    mats = [matrix_in(b, (d, d)) for b, d in zip(obj, algebra.blocks)]
    coords = np.concatenate([m.reshape(-1) for m in mats])
    return algebra.from_coords(coords)


def element_out(a: Element) -> list:
    return [matrix_out(b) for b in a.mats]


def _sanitize(obj):
    """Make a structure JSON-safe and canonical: numpy scalars to python,
    complex to [re, im], non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, (np.complexfloating, complex)):
        return _complex_out(complex(obj))
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _sanitize(obj.tolist())
    return obj


def canonical_json(obj) -> str:
    return json.dumps(_sanitize(obj), sort_keys=True, indent=2,
                      ensure_ascii=False, allow_nan=False) + "\n"


MODES = ("plain", "endo_transfer", "partial_isometry")


@dataclass
class ProblemSpec:
    blocks: tuple[int, ...]
    mode: str = "plain"
    v: np.ndarray | None = None
    h: np.ndarray | None = None
    alpha: np.ndarray | None = None
    transfer: np.ndarray | None = None
    ambient_blocks: tuple[int, ...] | None = None
    a_embed: list[Element] | None = None
    s: Element | None = None
    tolerance: float | None = None
    samples: int | None = None
    seed: int | None = None
    source: str = "<memory>"

    @property
    def algebra(self) -> Algebra:
        return Algebra(self.blocks)

    @property
    def ambient(self) -> Algebra | None:
        return Algebra(self.ambient_blocks) if self.ambient_blocks else None


def _blocks_in(obj, key: str) -> tuple[int, ...]:
    if (not isinstance(obj, list) or not obj
            or not all(isinstance(b, int) and b > 0 for b in obj)):
        raise SpecError(f"'{key}' must be a nonempty list of positive integers")
    return tuple(obj)


def load_spec(path: str) -> ProblemSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as err:
        raise SpecError(f"cannot read {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise SpecError(f"invalid JSON in {path}: {err}") from err
    if not isinstance(raw, dict):
        raise SpecError("top level must be an object")
    known = {"blocks", "mode", "V", "H", "alpha", "transfer",
             "ambient_blocks", "a_basis", "S", "tolerance", "samples", "seed"}
    unknown = set(raw) - known
    if unknown:
        raise SpecError(f"unknown keys: {sorted(unknown)}")
    if "blocks" not in raw:
        raise SpecError("missing 'blocks'")
    blocks = _blocks_in(raw["blocks"], "blocks")
    dim = sum(b * b for b in blocks)
    mode = raw.get("mode", "plain")
    if mode not in MODES:
        raise SpecError(f"mode must be one of {MODES}")
    spec = ProblemSpec(blocks=blocks, mode=mode, source=path)

    def maybe_matrix(key: str) -> np.ndarray | None:
        return matrix_in(raw[key], (dim, dim)) if key in raw else None

    spec.v, spec.h = maybe_matrix("V"), maybe_matrix("H")
    spec.alpha, spec.transfer = maybe_matrix("alpha"), maybe_matrix("transfer")

    if mode == "plain" and (spec.v is None or spec.h is None):
        raise SpecError("plain mode requires 'V' and 'H'")
    if mode == "endo_transfer":
        if spec.alpha is None or spec.transfer is None:
            raise SpecError("endo_transfer mode requires 'alpha' and 'transfer'")
        spec.v = spec.v if spec.v is not None else spec.alpha
        spec.h = spec.h if spec.h is not None else spec.transfer
    if mode == "partial_isometry":
        if "ambient_blocks" not in raw or "a_basis" not in raw or "S" not in raw:
            raise SpecError("partial_isometry mode requires 'ambient_blocks', "
                            "'a_basis', and 'S'")
        spec.ambient_blocks = _blocks_in(raw["ambient_blocks"], "ambient_blocks")
        ambient = Algebra(spec.ambient_blocks)
        basis = raw["a_basis"]
        if not isinstance(basis, list) or len(basis) != dim:
            raise SpecError(f"'a_basis' must list {dim} ambient elements")
        spec.a_embed = [element_in(ambient, e) for e in basis]
        spec.s = element_in(ambient, raw["S"])

    if "tolerance" in raw:
        tol = raw["tolerance"]
        if not isinstance(tol, (int, float)) or not tol > 0:
            raise SpecError("'tolerance' must be a positive number")
        spec.tolerance = float(tol)
    for key in ("samples", "seed"):
        if key in raw:
            val = raw[key]
            if not isinstance(val, int) or val < 0:
                raise SpecError(f"'{key}' must be a nonnegative integer")
            setattr(spec, key, val)
    return spec


def dump_spec(spec: ProblemSpec) -> str:
    out: dict = {"blocks": list(spec.blocks), "mode": spec.mode}
    if spec.v is not None:
        out["V"] = matrix_out(spec.v)
    if spec.h is not None:
        out["H"] = matrix_out(spec.h)
    if spec.alpha is not None:
        out["alpha"] = matrix_out(spec.alpha)
    if spec.transfer is not None:
        out["transfer"] = matrix_out(spec.transfer)
    if spec.ambient_blocks:
        out["ambient_blocks"] = list(spec.ambient_blocks)
    if spec.a_embed is not None:
        out["a_basis"] = [element_out(e) for e in spec.a_embed]
    if spec.s is not None:
        out["S"] = element_out(spec.s)
    for key in ("tolerance", "samples", "seed"):
        val = getattr(spec, key)
        if val is not None:
            out[key] = val
    return canonical_json(out)
