"""JSON ingestion and emission for all file kinds the CLI understands.

Scalars travel as decimal integers or "p/q" strings; floats are rejected.
Every writer is the exact inverse of its loader, so emitted artifacts
re-ingest to equal in-memory values.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .errors import ParseError, ShapeMismatch
from .family import AnsatzParams, FamilyParams
from .liealg import LieAlgebra, make_lie_algebra
from .scalar import format_rational, rat
from .structure import AcbStructure, canonical_structure, make_structure, require_valid
from .tensor import Tensor, tensor


def load_json(path: str) -> dict:
    path = os.fspath(path)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top level must be a JSON object")
    return data


def _require(data: dict, field: str, where: str):
    if field not in data:
        raise ParseError(f"{where}: missing field {field!r}")
    return data[field]


def decode_tensor(data, shape: tuple, where: str) -> Tensor:
    """Nested JSON arrays to an exact tensor of the given shape.

    Shape problems in a file are parse failures, not validation ones:
    the file never produced a usable value in the first place.
    """
    try:
        return tensor(data, shape)
    except (ShapeMismatch, ParseError) as exc:
        raise ParseError(f"{where}: {exc}") from exc


def encode_tensor(t: Tensor):
    """Exact tensor to nested lists of ints and "p/q" strings."""
    if np.ndim(t) == 0:
        return format_rational(t)
    return [encode_tensor(row) for row in t]


def _decode_n(data: dict, where: str) -> int:
    n = _require(data, "n", where)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"{where}: n must be a positive integer, got {n!r}")
    return n


def structure_from_dict(data: dict, where: str = "structure") -> AcbStructure:
    n = _decode_n(data, where)
    d = 2 * n + 1
    phi = decode_tensor(_require(data, "phi", where), (d, d), where + ".phi")
    xi = decode_tensor(_require(data, "xi", where), (d,), where + ".xi")
    eta = decode_tensor(_require(data, "eta", where), (d,), where + ".eta")
    g = decode_tensor(_require(data, "g", where), (d, d), where + ".g")
    return make_structure(n, phi, xi, eta, g)


def structure_to_dict(s: AcbStructure) -> dict:
    return {
        "n": s.n,
        "phi": encode_tensor(s.phi),
        "xi": encode_tensor(s.xi),
        "eta": encode_tensor(s.eta),
        "g": encode_tensor(s.g),
    }


def load_structure(path: str, validate: bool = True) -> AcbStructure:
    path = os.fspath(path)
    s = structure_from_dict(load_json(path), where=path)
    if validate:
        require_valid(s)
    return s


def resolve_structure(data: dict, base_path: str, where: str,
                      validate: bool = True) -> AcbStructure | None:
    """Optional "structure" field: inline object or {"file": relpath}.

    Relative references resolve against the referencing file's directory.
    Returns None when the field is absent.
    """
    if "structure" not in data:
        return None
    ref = data["structure"]
    if isinstance(ref, dict) and set(ref) == {"file"}:
        rel = ref["file"]
        if not isinstance(rel, str):
            raise ParseError(f"{where}: structure file reference must be a string")
        path = rel if os.path.isabs(rel) else os.path.join(os.path.dirname(base_path) or ".", rel)
        return load_structure(path, validate=validate)
    if isinstance(ref, dict):
        s = structure_from_dict(ref, where + ".structure")
        if validate:
            require_valid(s)
        return s
    raise ParseError(f"{where}: structure must be an object or a file reference")


def load_f_file(path: str, validate: bool = True) -> tuple[Tensor, AcbStructure]:
    """F-file: n, F (nested 3-array), optional structure (default canonical)."""
    path = os.fspath(path)
    data = load_json(path)
    n = _decode_n(data, path)
    d = 2 * n + 1
    f = decode_tensor(_require(data, "F", path), (d, d, d), path + ".F")
    s = resolve_structure(data, path, path, validate=validate)
    if s is None:
        s = canonical_structure(n)
    elif s.n != n:
        raise ParseError(f"{path}: structure has n={s.n}, file has n={n}")
    return f, s


def f_to_dict(f: Tensor, s: AcbStructure | None = None, inline_structure: bool = False) -> dict:
    n = (np.shape(f)[0] - 1) // 2
    out = {"n": n, "F": encode_tensor(f)}
    if inline_structure and s is not None:
        out["structure"] = structure_to_dict(s)
    return out


def load_torsion_file(path: str, validate: bool = True) -> tuple[Tensor, AcbStructure]:
    """Torsion file: n, T (nested 3-array, index order x,y,z), optional structure."""
    path = os.fspath(path)
    data = load_json(path)
    n = _decode_n(data, path)
    d = 2 * n + 1
    t = decode_tensor(_require(data, "T", path), (d, d, d), path + ".T")
    s = resolve_structure(data, path, path, validate=validate)
    if s is None:
        s = canonical_structure(n)
    elif s.n != n:
        raise ParseError(f"{path}: structure has n={s.n}, file has n={n}")
    return t, s


def torsion_to_dict(t: Tensor, s: AcbStructure | None = None,
                    inline_structure: bool = False) -> dict:
    n = (np.shape(t)[0] - 1) // 2
    out = {"n": n, "T": encode_tensor(t)}
    if inline_structure and s is not None:
        out["structure"] = structure_to_dict(s)
    return out


def load_params_file(path: str):
    """Params file: {"alpha": [4 scalars]} or {"lambda": [18 scalars]}."""
    path = os.fspath(path)
    data = load_json(path)
    has_a, has_l = "alpha" in data, "lambda" in data
    if has_a == has_l:
        raise ParseError(f"{path}: exactly one of 'alpha' or 'lambda' required")
    key, size = ("alpha", 4) if has_a else ("lambda", 18)
    vals = data[key]
    if not isinstance(vals, list) or len(vals) != size:
        raise ParseError(f"{path}: {key} must be a list of {size} scalars")
    coeffs = tuple(rat(v) for v in vals)
    return FamilyParams(coeffs) if has_a else AnsatzParams(coeffs)


def params_to_dict(p) -> dict:
    if isinstance(p, FamilyParams):
        return {"alpha": [format_rational(a) for a in p.alpha]}
    if isinstance(p, AnsatzParams):
        return {"lambda": [format_rational(x) for x in p.lam]}
    raise ParseError(f"cannot serialize params of type {type(p).__name__}")


def load_lie_file(path: str, validate: bool = True) -> tuple[LieAlgebra, AcbStructure]:
    """Lie file: dim, c (nested 3-array), optional structure (default canonical)."""
    path = os.fspath(path)
    data = load_json(path)
    dim = _require(data, "dim", path)
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 3 or dim % 2 == 0:
        raise ParseError(f"{path}: dim must be an odd integer >= 3, got {dim!r}")
    c = decode_tensor(_require(data, "c", path), (dim, dim, dim), path + ".c")
    lie = make_lie_algebra(dim, c)
    s = resolve_structure(data, path, path, validate=validate)
    if s is None:
        s = canonical_structure((dim - 1) // 2)
    elif s.dim != dim:
        raise ParseError(f"{path}: structure dim {s.dim} != algebra dim {dim}")
    return lie, s


def lie_to_dict(lie: LieAlgebra, s: AcbStructure | None = None,
                inline_structure: bool = False) -> dict:
    out = {"dim": lie.dim, "c": encode_tensor(lie.c)}
    if inline_structure and s is not None:
        out["structure"] = structure_to_dict(s)
    return out


def dumps_report(obj) -> str:
    """Deterministic JSON rendering: sorted keys, two-space indent."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_json(obj, path: str | None) -> str:
    text = dumps_report(obj)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
