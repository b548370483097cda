"""Normalized finite measure spaces and simple functions on them.

A space is a finite list of atoms (id, weight) plus a diffuse (atomless)
part of total mass ``diffuse_mass``; weights and masses are exact
rationals summing to 1. A simple function assigns one rational value per
atom and carries an ordered list of (value, mass) pieces partitioning the
diffuse part. Everything is immutable after construction and safe to
share across threads.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import (
    DuplicateAtomError,
    MassMismatchError,
    NormalizationError,
    SchemaError,
    UnknownAtomError,
)
from .rationals import format_ratstr, parse_ratstr

ONE = Fraction(1)
ZERO = Fraction(0)


@dataclass(frozen=True)
class MeasureSpace:
    atoms: tuple[tuple[str, Fraction], ...]
    diffuse_mass: Fraction

    def __post_init__(self):
        ids = [atom_id for atom_id, _ in self.atoms]
        if len(set(ids)) != len(ids):
            raise DuplicateAtomError(f"duplicate atom ids in {ids}")
        for atom_id, weight in self.atoms:
            if weight <= 0:
                raise SchemaError(f"atom {atom_id!r} has non-positive weight")
        if self.diffuse_mass < 0:
            raise SchemaError("diffuse_mass must be >= 0")
        total = sum((w for _, w in self.atoms), self.diffuse_mass)
        if total != 1:
            raise NormalizationError(f"total mass is {total}, expected 1")

    @property
    def atom_ids(self) -> tuple[str, ...]:
        return tuple(atom_id for atom_id, _ in self.atoms)

    def weight(self, atom_id: str) -> Fraction:
        for aid, w in self.atoms:
            if aid == atom_id:
                return w
        raise UnknownAtomError(f"no atom {atom_id!r}")

    @property
    def purely_atomic(self) -> bool:
        return self.diffuse_mass == 0


@dataclass(frozen=True)
class SimpleFunction:
    space: MeasureSpace
    atom_values: Mapping[str, Fraction]
    diffuse_pieces: tuple[tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self,
            "atom_values",
            {aid: Fraction(v) for aid, v in self.atom_values.items()},
        )
        object.__setattr__(
            self,
            "diffuse_pieces",
            tuple((Fraction(v), Fraction(m)) for v, m in self.diffuse_pieces),
        )
        missing = set(self.space.atom_ids) - set(self.atom_values)
        extra = set(self.atom_values) - set(self.space.atom_ids)
        if extra:
            raise UnknownAtomError(f"values given for unknown atoms {sorted(extra)}")
        if missing:
            raise SchemaError(f"missing values for atoms {sorted(missing)}")
        for _, mass in self.diffuse_pieces:
            if mass <= 0:
                raise SchemaError("piece masses must be > 0")
        total = sum((m for _, m in self.diffuse_pieces), ZERO)
        if total != self.space.diffuse_mass:
            raise MassMismatchError(
                f"piece masses sum to {total}, diffuse_mass is {self.space.diffuse_mass}"
            )

    def weighted_values(self) -> list[tuple[Fraction, Fraction]]:
        """All (value, mass) carriers: atoms in space order, then pieces."""
        pairs = [(self.atom_values[aid], w) for aid, w in self.space.atoms]
        pairs.extend(self.diffuse_pieces)
        return pairs

    def integral(self) -> Fraction:
        return sum((v * m for v, m in self.weighted_values()), ZERO)

    def map_values(self, fn) -> "SimpleFunction":
        return SimpleFunction(
            self.space,
            {aid: fn(v) for aid, v in self.atom_values.items()},
            tuple((fn(v), m) for v, m in self.diffuse_pieces),
        )


@dataclass(frozen=True)
class Refinement:
    """Split instructions for diffuse pieces: piece index -> sub-masses."""

    source: SimpleFunction
    splits: Mapping[int, tuple[Fraction, ...]]

    def __post_init__(self):
        object.__setattr__(self, "splits", dict(self.splits))
        pieces = self.source.diffuse_pieces
        for index, parts in self.splits.items():
            if not 0 <= index < len(pieces):
                raise SchemaError(f"no diffuse piece with index {index}")
            if any(p <= 0 for p in parts):
                raise SchemaError("sub-masses must be > 0")
            if sum(parts, ZERO) != pieces[index][1]:
                raise MassMismatchError(
                    f"sub-masses of piece {index} do not sum to its mass"
                )

    def apply(self) -> SimpleFunction:
        pieces = []
        for index, (value, mass) in enumerate(self.source.diffuse_pieces):
            if index in self.splits:
                pieces.extend((value, part) for part in self.splits[index])
            else:
                pieces.append((value, mass))
        return SimpleFunction(self.source.space, self.source.atom_values, tuple(pieces))


def refine_diffuse(f: SimpleFunction, k: int) -> SimpleFunction:
    """Split every diffuse piece into k equal-mass pieces of the same value.

    The result equals f almost everywhere; its rearrangement is unchanged.
    """
    if k < 1:
        raise SchemaError(f"k must be >= 1, got {k}")
    if k == 1:
        return f
    splits = {
        i: tuple([mass / k] * k) for i, (_, mass) in enumerate(f.diffuse_pieces)
    }
    return Refinement(f, splits).apply()


# ---------------------------------------------------------------------------
# parsing / serialization (external JSON interface)
# ---------------------------------------------------------------------------

def _as_document(document):
    if isinstance(document, str):
        try:
            return json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
    return document


def parse_space(document) -> MeasureSpace:
    doc = _as_document(document)
    if not isinstance(doc, dict) or "atoms" not in doc or "diffuse_mass" not in doc:
        raise SchemaError("space document needs 'atoms' and 'diffuse_mass'")
    atoms = []
    if not isinstance(doc["atoms"], list):
        raise SchemaError("'atoms' must be a list")
    for entry in doc["atoms"]:
        if not isinstance(entry, dict) or "id" not in entry or "weight" not in entry:
            raise SchemaError(f"bad atom entry: {entry!r}")
        if not isinstance(entry["id"], str):
            raise SchemaError("atom ids must be strings")
        atoms.append((entry["id"], parse_ratstr(entry["weight"])))
    return MeasureSpace(tuple(atoms), parse_ratstr(doc["diffuse_mass"]))


def parse_function(document, space: MeasureSpace | None = None) -> SimpleFunction:
    doc = _as_document(document)
    if not isinstance(doc, dict):
        raise SchemaError("function document must be a JSON object")
    if space is None:
        if "space" not in doc:
            raise SchemaError("function document needs an embedded 'space'")
        space = parse_space(doc["space"])
    atom_doc = doc.get("atoms", {})
    if not isinstance(atom_doc, dict):
        raise SchemaError("'atoms' must be an object of id -> ratstr")
    values = {aid: parse_ratstr(v) for aid, v in atom_doc.items()}
    pieces = []
    for entry in doc.get("diffuse", []):
        if not isinstance(entry, dict) or "value" not in entry or "mass" not in entry:
            raise SchemaError(f"bad diffuse piece: {entry!r}")
        pieces.append((parse_ratstr(entry["value"]), parse_ratstr(entry["mass"])))
    return SimpleFunction(space, values, tuple(pieces))


def serialize_space(space: MeasureSpace) -> dict:
    return {
        "atoms": [
            {"id": aid, "weight": format_ratstr(w)} for aid, w in space.atoms
        ],
        "diffuse_mass": format_ratstr(space.diffuse_mass),
    }


def serialize_function(f: SimpleFunction) -> dict:
    return {
        "space": serialize_space(f.space),
        "atoms": {aid: format_ratstr(f.atom_values[aid]) for aid in f.space.atom_ids},
        "diffuse": [
            {"value": format_ratstr(v), "mass": format_ratstr(m)}
            for v, m in f.diffuse_pieces
        ],
    }


def parse_function_normalized(document) -> SimpleFunction:
    """Parse a function whose embedded space may not be normalized; masses
    (weights, diffuse_mass, piece masses) are rescaled by the same factor."""
    doc = _as_document(document)
    if not isinstance(doc, dict) or "space" not in doc:
        raise SchemaError("function document needs an embedded 'space'")
    space_doc = doc["space"]
    atoms = tuple(
        (entry["id"], parse_ratstr(entry["weight"])) for entry in space_doc["atoms"]
    )
    diffuse = parse_ratstr(space_doc["diffuse_mass"])
    total = sum((w for _, w in atoms), diffuse)
    if total <= 0:
        raise NormalizationError("total mass must be positive to normalize")
    space = MeasureSpace(tuple((a, w / total) for a, w in atoms), diffuse / total)
    values = {aid: parse_ratstr(v) for aid, v in doc.get("atoms", {}).items()}
    pieces = tuple(
        (parse_ratstr(p["value"]), parse_ratstr(p["mass"]) / total)
        for p in doc.get("diffuse", [])
    )
    return SimpleFunction(space, values, pieces)


# ---------------------------------------------------------------------------
# pointwise arithmetic (piece lists are aligned on the union of boundaries)
# ---------------------------------------------------------------------------

def _aligned_pieces(f: SimpleFunction, g: SimpleFunction):
    """Yield (value_f, value_g, mass) over the common refinement of the
    two piece lists, which partition the same diffuse part."""
    out = []
    f_list = list(f.diffuse_pieces)
    g_list = list(g.diffuse_pieces)
    i = j = 0
    rem_f = f_list[0][1] if f_list else ZERO
    rem_g = g_list[0][1] if g_list else ZERO
    while i < len(f_list) and j < len(g_list):
        step = min(rem_f, rem_g)
        out.append((f_list[i][0], g_list[j][0], step))
        rem_f -= step
        rem_g -= step
        if rem_f == 0:
            i += 1
            rem_f = f_list[i][1] if i < len(f_list) else ZERO
        if rem_g == 0:
            j += 1
            rem_g = g_list[j][1] if j < len(g_list) else ZERO
    if i < len(f_list) or j < len(g_list):
        raise MassMismatchError("piece lists cover different diffuse masses")
    return out


def _require_same_space(f: SimpleFunction, g: SimpleFunction):
    if f.space.atoms != g.space.atoms or f.space.diffuse_mass != g.space.diffuse_mass:
        raise SchemaError("functions live on different spaces")


def add_functions(f: SimpleFunction, g: SimpleFunction) -> SimpleFunction:
    _require_same_space(f, g)
    values = {aid: f.atom_values[aid] + g.atom_values[aid] for aid in f.space.atom_ids}
    pieces = tuple((a + b, m) for a, b, m in _aligned_pieces(f, g))
    return SimpleFunction(f.space, values, pieces)


def scale_function(f: SimpleFunction, c: Fraction) -> SimpleFunction:
    c = Fraction(c)
    return f.map_values(lambda v: v * c)


def negate_function(f: SimpleFunction) -> SimpleFunction:
    return scale_function(f, -1)


def abs_function(f: SimpleFunction) -> SimpleFunction:
    return f.map_values(abs)


def shift_function(f: SimpleFunction, c: Fraction) -> SimpleFunction:
    c = Fraction(c)
    return f.map_values(lambda v: v + c)


def equal_ae(f: SimpleFunction, g: SimpleFunction) -> bool:
    """Equality almost everywhere: atom values equal and piece profiles equal
    on the common refinement (piece boundaries themselves do not matter)."""
    _require_same_space(f, g)
    if any(f.atom_values[a] != g.atom_values[a] for a in f.space.atom_ids):
        return False
    return all(a == b for a, b, _ in _aligned_pieces(f, g))
