"""Scene files: named multivectors as blade-coefficient JSON.

A scene is a JSON object with optional "tolerance" ({"rel": float}),
"objects", and "versors" sections; the latter two map names to
{blade: coefficient} tables. Blade keys use the text form ("1", "e12",
"e1+", "e123+-"); readers additionally accept the null-direction keys
"e0" and "einf", which expand into the internal +/- basis. Writing is
canonical: sections in a fixed order, names sorted, blades ordered by
grade then bitset, zero coefficients dropped, two-space indention, and
a trailing newline, so a written file round-trips byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import Multivector
from .conformal import ALG, e0, einf
from .errors import DomainError

_GEN_FOR_CHAR = {"1": 0, "2": 1, "3": 2, "4": 3, "+": 3, "5": 4, "-": 4}


@dataclass
class Scene:
    objects: dict[str, Multivector] = field(default_factory=dict)
    versors: dict[str, Multivector] = field(default_factory=dict)
    tolerance_rel: float | None = None


def _bits_for_key(key: str) -> int:
    if key == "1":
        return 0
    if not key.startswith("e") or len(key) == 1:
        raise DomainError(f"bad blade key {key!r}")
    bits = 0
    prev = -1
    for ch in key[1:]:
        gen = _GEN_FOR_CHAR.get(ch)
        if gen is None or gen <= prev:
            raise DomainError(f"bad blade key {key!r}")
        prev = gen
        bits |= 1 << gen
    return bits


def _mv_from_entries(name: str, entries) -> Multivector:
    if not isinstance(entries, dict):
        raise DomainError(f"entry {name!r} must map blade names to numbers")
    mv = ALG.zero()
    for key, value in entries.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise DomainError(f"coefficient for {name}.{key} must be a number")
        if key == "e0":
            mv = mv + float(value) * e0
        elif key == "einf":
            mv = mv + float(value) * einf
        else:
            mv = mv + float(value) * ALG.blade(_bits_for_key(key))
    return mv


def mv_entries(mv: Multivector) -> dict:
    order = sorted(range(ALG.dim), key=lambda bits: (ALG.grades[bits], bits))
    out = {}
    for bits in order:
        c = float(mv.coeffs[bits])
        if c != 0.0:
            out[ALG.blade_names[bits]] = c
    return out


def scene_from_dict(data) -> Scene:
    if not isinstance(data, dict):
        raise DomainError("scene must be a JSON object")
    unknown = set(data) - {"tolerance", "objects", "versors"}
    if unknown:
        raise DomainError(f"unknown scene sections: {sorted(unknown)}")
    rel = None
    tol = data.get("tolerance")
    if tol is not None:
        if not isinstance(tol, dict) or set(tol) - {"rel"}:
            raise DomainError('tolerance must be an object like {"rel": 1e-9}')
        if "rel" in tol:
            if isinstance(tol["rel"], bool) or not isinstance(tol["rel"], (int, float)):
                raise DomainError("tolerance rel must be a number")
            rel = float(tol["rel"])
    scene = Scene(tolerance_rel=rel)
    for section, table in (("objects", scene.objects), ("versors", scene.versors)):
        for name, entries in (data.get(section) or {}).items():
            table[name] = _mv_from_entries(name, entries)
    return scene


def read_scene(path) -> Scene:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"scene is not valid JSON: {exc}") from exc
    return scene_from_dict(data)


def scene_to_json(scene: Scene) -> str:
    payload: dict = {}
    if scene.tolerance_rel is not None:
        payload["tolerance"] = {"rel": scene.tolerance_rel}
    payload["objects"] = {name: mv_entries(scene.objects[name]) for name in sorted(scene.objects)}
    payload["versors"] = {name: mv_entries(scene.versors[name]) for name in sorted(scene.versors)}
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def write_scene(scene: Scene, path) -> None:
    Path(path).write_text(scene_to_json(scene))
