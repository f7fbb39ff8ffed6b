"""JSON instance files.

Layout::

    {"space": {"neg": int, "pos": int},
     "F": {"re": [[...]], "im": [[...]]}, "G": {...},
     "extension": {"F": {...}, "G": {...}},        (optional)
     "meta": {"seed": int, "kind": str, ...}}

Numbers are written with Python's shortest round-trip float repr, which needs
at most 17 significant digits, so parse(serialize(x)) reproduces every double
exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import InvalidInput
from ..krein import KreinSpace
from ..relation import Relation, make_relation

__all__ = ["InstanceFile", "dumps", "loads", "save", "load", "from_instance"]


class InstanceFile:
    """Raw graph matrices of a relation T, an optional extension and metadata.

    The matrices are kept as given so that files round-trip exactly; the
    relations are built on access.
    """

    def __init__(self, space: KreinSpace, F, G, ext_F=None, ext_G=None, meta: dict | None = None):
        self.space = space
        self.F = np.asarray(F, dtype=complex)
        self.G = np.asarray(G, dtype=complex)
        self.ext_F = None if ext_F is None else np.asarray(ext_F, dtype=complex)
        self.ext_G = None if ext_G is None else np.asarray(ext_G, dtype=complex)
        self.meta = dict(meta or {})

    @classmethod
    def of(cls, T: Relation, extension: Relation | None = None, meta: dict | None = None):
        e = extension
        return cls(T.space, T.F, T.G, None if e is None else e.F, None if e is None else e.G, meta)

    @property
    def T(self) -> Relation:
        return make_relation(self.space, self.F, self.G)

    @property
    def extension(self) -> Relation | None:
        if self.ext_F is None:
            return None
        return make_relation(self.space, self.ext_F, self.ext_G)

    def __eq__(self, other):
        if not isinstance(other, InstanceFile):
            return NotImplemented
        same = lambda a, b: (a is None and b is None) or (
            a is not None and b is not None and a.shape == b.shape and np.array_equal(a, b))
        return (self.space == other.space and same(self.F, other.F) and same(self.G, other.G)
                and same(self.ext_F, other.ext_F) and same(self.ext_G, other.ext_G)
                and self.meta == other.meta)


def _enc(M) -> dict:
    M = np.asarray(M, dtype=complex)
    return {"re": M.real.tolist(), "im": M.imag.tolist()}


def _dec(obj, rows, name) -> np.ndarray:
    try:
        re = np.array(obj["re"], dtype=float)
        im = np.array(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"{name}: expected re/im arrays") from exc
    if re.shape != im.shape:
        raise InvalidInput(f"{name}: re and im shapes differ")
    if re.size == 0:
        re = re.reshape(rows, 0)
        im = im.reshape(rows, 0)
    if re.ndim != 2 or re.shape[0] != rows:
        raise InvalidInput(f"{name}: expected {rows} rows")
    out = np.empty(re.shape, dtype=complex)
    out.real, out.imag = re, im  # re + 1j * im would turn -0.0 into 0.0
    return out


def _meta(meta: dict) -> dict:
    out = {}
    for k, v in meta.items():
        if isinstance(v, (np.integer,)):
            v = int(v)
        elif isinstance(v, (np.bool_,)):
            v = bool(v)
        out[k] = v
    return out


def dumps(inst: InstanceFile) -> str:
    sp = inst.space
    doc = {"space": {"neg": sp.kappa_minus, "pos": sp.kappa_plus},
           "F": _enc(inst.F), "G": _enc(inst.G)}
    if inst.ext_F is not None:
        doc["extension"] = {"F": _enc(inst.ext_F), "G": _enc(inst.ext_G)}
    doc["meta"] = _meta(inst.meta)
    return json.dumps(doc, indent=1)


def loads(text: str) -> InstanceFile:
    try:
        doc = json.loads(text)
        sp = KreinSpace(int(doc["space"]["neg"]), int(doc["space"]["pos"]))
        F, G = doc["F"], doc["G"]
    except (ValueError, KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed instance file: {exc}") from exc
    ext_F = ext_G = None
    if doc.get("extension") is not None:
        e = doc["extension"]
        try:
            ext_F, ext_G = _dec(e["F"], sp.n, "extension.F"), _dec(e["G"], sp.n, "extension.G")
        except (KeyError, TypeError) as exc:
            raise InvalidInput("malformed extension") from exc
    return InstanceFile(sp, _dec(F, sp.n, "F"), _dec(G, sp.n, "G"), ext_F, ext_G, doc.get("meta", {}))


def save(inst: InstanceFile, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(inst))
    return path


def load(path) -> InstanceFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc
    return loads(text)


def from_instance(inst) -> InstanceFile:
    """A generated instance carried to the frame of its decomposition."""
    from ..relation import in_frame
    T = in_frame(inst.T, inst.D)
    T0 = in_frame(inst.T0, inst.D) if inst.T0 is not None else None
    return InstanceFile.of(T, T0, inst.meta)
