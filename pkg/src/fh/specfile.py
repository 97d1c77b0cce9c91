"""Filtration spec files: JSON ingestion and canonical serialization.

A spec file declares the presentation mode, the objects with their atoms
and exact rational measures, and the arrows with their maps.  The map of
an arrow i: s -> t sends atoms of the space at t to atoms of the space at
s: contravariance is explicit in the format.  All rationals are "p/q"
text (a bare integer string is accepted); serialization is canonical:
keys sorted, rationals reduced.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .category import ArrowDecl, FinCategory, Generator, Quiver
from .exactlinalg import ONE, ZERO, rat, rat_str
from .filtration import Filtration
from .finprob import FiniteProbSpace, ProbMap


class SpecFileError(ValueError):
    """Malformed spec file; the message carries field-level diagnostics."""


@dataclass(frozen=True)
class ObjectDecl:
    name: str
    atoms: tuple
    measure: tuple  # weights aligned with atoms


@dataclass(frozen=True)
class ArrowSpec:
    name: str
    src: str
    dst: str
    mapping: tuple  # pairs (atom of dst space, atom of src space)


@dataclass(frozen=True)
class SpecDocument:
    mode: str
    objects: tuple
    arrows: tuple
    compositions: tuple


_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


def _parse_rational(text, where: str):
    if not isinstance(text, str):
        raise SpecFileError(f"{where}: rational must be a string, got {text!r}")
    if not _RATIONAL_RE.match(text):
        raise SpecFileError(f"{where}: malformed rational {text!r}")
    return rat(text)


def _require(mapping, key, kind, where: str):
    if key not in mapping:
        raise SpecFileError(f"{where}: missing field {key!r}")
    value = mapping[key]
    if not isinstance(value, kind):
        raise SpecFileError(f"{where}: field {key!r} has the wrong type")
    return value


def parse_document(text: str) -> SpecDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise SpecFileError("top level must be an object")
    mode = _require(data, "mode", str, "top level")
    if mode not in ("free", "table"):
        raise SpecFileError(f"mode must be 'free' or 'table', got {mode!r}")

    objects = []
    seen = set()
    for idx, od in enumerate(_require(data, "objects", list, "top level")):
        where = f"objects[{idx}]"
        if not isinstance(od, dict):
            raise SpecFileError(f"{where}: must be an object")
        name = _require(od, "name", str, where)
        if name in seen:
            raise SpecFileError(f"{where}: duplicate object name {name!r}")
        seen.add(name)
        atoms = _require(od, "atoms", list, where)
        if not atoms or any(not isinstance(a, str) for a in atoms):
            raise SpecFileError(f"{where}: atoms must be a nonempty string list")
        if len(atoms) != len(set(atoms)):
            raise SpecFileError(f"{where}: duplicate atoms")
        measure = _require(od, "measure", dict, where)
        extra = sorted(set(measure) - set(atoms))
        if extra:
            raise SpecFileError(f"{where}: measure on unknown atoms {extra}")
        missing = [a for a in atoms if a not in measure]
        if missing:
            raise SpecFileError(f"{where}: measure missing atoms {missing}")
        weights = tuple(
            _parse_rational(measure[a], f"{where}.measure[{a!r}]") for a in atoms
        )
        if any(w < 0 for w in weights):
            raise SpecFileError(f"{where}: negative mass")
        if sum(weights, ZERO) != ONE:
            raise SpecFileError(f"{where}: mass != 1")
        objects.append(ObjectDecl(name, tuple(atoms), weights))
    by_name = {o.name: o for o in objects}

    arrows = []
    arrow_names = set()
    for idx, ad in enumerate(_require(data, "arrows", list, "top level")):
        where = f"arrows[{idx}]"
        if not isinstance(ad, dict):
            raise SpecFileError(f"{where}: must be an object")
        name = _require(ad, "name", str, where)
        if name in arrow_names:
            raise SpecFileError(f"{where}: duplicate arrow name {name!r}")
        arrow_names.add(name)
        src = _require(ad, "src", str, where)
        dst = _require(ad, "dst", str, where)
        for o in (src, dst):
            if o not in by_name:
                raise SpecFileError(f"{where}: unknown object {o!r}")
        mapping = _require(ad, "map", dict, where)
        dst_atoms = by_name[dst].atoms
        src_atoms = set(by_name[src].atoms)
        missing = [a for a in dst_atoms if a not in mapping]
        if missing:
            raise SpecFileError(f"{where}: map missing atoms {missing}")
        extra = sorted(set(mapping) - set(dst_atoms))
        if extra:
            raise SpecFileError(f"{where}: map on unknown atoms {extra}")
        for a, img in mapping.items():
            if img not in src_atoms:
                raise SpecFileError(
                    f"{where}: map sends {a!r} to unknown atom {img!r}"
                )
        arrows.append(ArrowSpec(name, src, dst,
                                tuple((a, mapping[a]) for a in dst_atoms)))

    compositions = []
    if mode == "table":
        for idx, cd in enumerate(data.get("compositions", [])):
            where = f"compositions[{idx}]"
            if not isinstance(cd, dict):
                raise SpecFileError(f"{where}: must be an object")
            inner = _require(cd, "inner", str, where)
            outer = _require(cd, "outer", str, where)
            result = _require(cd, "result", str, where)
            for n in (inner, outer, result):
                if n not in arrow_names:
                    raise SpecFileError(f"{where}: unknown arrow {n!r}")
            compositions.append((inner, outer, result))
    elif "compositions" in data:
        raise SpecFileError("compositions are only valid in table mode")

    return SpecDocument(mode, tuple(objects), tuple(arrows), tuple(compositions))


def build_filtration(doc: SpecDocument) -> Filtration:
    spaces = {o.name: FiniteProbSpace(o.atoms, o.measure) for o in doc.objects}
    if doc.mode == "free":
        pres = Quiver(
            tuple(o.name for o in doc.objects),
            tuple(Generator(a.name, a.src, a.dst) for a in doc.arrows),
        )
    else:
        try:
            pres = FinCategory(
                tuple(o.name for o in doc.objects),
                tuple(ArrowDecl(a.name, a.src, a.dst) for a in doc.arrows),
                doc.compositions,
            )
        except ValueError as exc:
            raise SpecFileError(str(exc)) from None
    maps = {}
    for a in doc.arrows:
        source = spaces[a.dst]
        target = spaces[a.src]
        maps[a.name] = ProbMap.from_dict(source, target, dict(a.mapping))
    return Filtration(pres, spaces, maps)


def load(path: str):
    """Parse a spec file; returns (document, filtration)."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    doc = parse_document(text)
    return doc, build_filtration(doc)


def document_to_jsonable(doc: SpecDocument) -> dict:
    out = {
        "mode": doc.mode,
        "objects": [
            {
                "name": o.name,
                "atoms": list(o.atoms),
                "measure": {a: rat_str(w) for a, w in zip(o.atoms, o.measure)},
            }
            for o in doc.objects
        ],
        "arrows": [
            {
                "name": a.name,
                "src": a.src,
                "dst": a.dst,
                "map": {x: y for x, y in a.mapping},
            }
            for a in doc.arrows
        ],
    }
    if doc.mode == "table":
        out["compositions"] = [
            {"inner": i, "outer": o, "result": r}
            for i, o, r in doc.compositions
        ]
    return out


def canonical_dumps(doc: SpecDocument) -> str:
    """Canonical text form: sorted keys, two-space indent, reduced
    rationals, trailing newline."""
    return json.dumps(document_to_jsonable(doc), sort_keys=True, indent=2) + "\n"
