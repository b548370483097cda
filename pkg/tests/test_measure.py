from fractions import Fraction

import pytest
from hypothesis import given

from majorbit.errors import (
    DuplicateAtomError,
    MassMismatchError,
    NormalizationError,
    SchemaError,
    UnknownAtomError,
)
from majorbit.measure import (
    Refinement,
    add_functions,
    equal_ae,
    parse_function,
    parse_function_normalized,
    parse_space,
    refine_diffuse,
    scale_function,
    serialize_function,
    serialize_space,
    shift_function,
)
from majorbit.rationals import format_ratstr, parse_ratstr
from majorbit.scales import rearrange

from conftest import mkatomic, mkdiffuse, simple_functions


def test_parse_ratstr_strict():
    assert parse_ratstr("3/4") == Fraction(3, 4)
    assert parse_ratstr("-7") == Fraction(-7)
    assert parse_ratstr("6/4") == Fraction(3, 2)
    for bad in ("0.5", "1/0", " 1", "1/2 ", "1e3", "--2", "1/-2", 5):
        with pytest.raises(SchemaError):
            parse_ratstr(bad)


def test_format_ratstr_roundtrip():
    for text in ("0", "-3", "3/4", "-11/7"):
        assert format_ratstr(parse_ratstr(text)) == text


def test_parse_space_examples():
    space = parse_space({"atoms": [{"id": "e", "weight": "1/2"}], "diffuse_mass": "1/2"})
    assert space.atoms == (("e", Fraction(1, 2)),)
    assert space.diffuse_mass == Fraction(1, 2)

    atomless = parse_space({"atoms": [], "diffuse_mass": "1"})
    assert atomless.purely_atomic is False
    assert atomless.diffuse_mass == 1

    with pytest.raises(NormalizationError):
        parse_space({"atoms": [{"id": "e", "weight": "1/2"}], "diffuse_mass": "1/4"})


def test_parse_space_duplicate_atom():
    with pytest.raises(DuplicateAtomError):
        parse_space(
            {
                "atoms": [
                    {"id": "e", "weight": "1/2"},
                    {"id": "e", "weight": "1/2"},
                ],
                "diffuse_mass": "0",
            }
        )


def test_parse_function_examples():
    space = parse_space({"atoms": [{"id": "e", "weight": "1/2"}], "diffuse_mass": "1/2"})
    f = parse_function(
        {
            "atoms": {"e": "3"},
            "diffuse": [
                {"value": "4", "mass": "1/4"},
                {"value": "2", "mass": "1/4"},
            ],
        },
        space,
    )
    assert f.atom_values["e"] == 3
    assert f.diffuse_pieces == ((Fraction(4), Fraction(1, 4)), (Fraction(2), Fraction(1, 4)))

    with pytest.raises(MassMismatchError):
        parse_function(
            {"atoms": {"e": "3"}, "diffuse": [{"value": "4", "mass": "1/3"}]}, space
        )

    with pytest.raises(UnknownAtomError):
        parse_function(
            {
                "atoms": {"z": "3"},
                "diffuse": [{"value": "0", "mass": "1/2"}],
            },
            space,
        )


def test_refine_diffuse_examples():
    f = mkdiffuse([(4, "1/2"), (2, "1/2")])
    split = refine_diffuse(f, 2)
    assert split.diffuse_pieces[:2] == (
        (Fraction(4), Fraction(1, 4)),
        (Fraction(4), Fraction(1, 4)),
    )
    assert refine_diffuse(f, 1) is f
    assert len(refine_diffuse(f, 3).diffuse_pieces) == 6
    assert rearrange(refine_diffuse(f, 3)) == rearrange(f)


def test_refinement_validation():
    f = mkdiffuse([(4, "1/2"), (2, "1/2")])
    with pytest.raises(MassMismatchError):
        Refinement(f, {0: (Fraction(1, 4),)})
    with pytest.raises(SchemaError):
        Refinement(f, {5: (Fraction(1, 2),)})
    with pytest.raises(SchemaError):
        Refinement(f, {0: (Fraction(1, 2), Fraction(0))})


@given(simple_functions())
def test_roundtrip(f):
    assert parse_function(serialize_function(f)) == f
    assert parse_space(serialize_space(f.space)) == f.space


@given(simple_functions())
def test_refine_preserves_rearrangement(f):
    base = rearrange(f)
    for k in range(2, 9):
        assert rearrange(refine_diffuse(f, k)) == base


@given(simple_functions())
def test_total_mass_is_one(f):
    total = sum((w for _, w in f.space.atoms), f.space.diffuse_mass)
    assert total == 1


def test_function_arithmetic():
    f = mkatomic([1, 3])
    g = mkatomic([2, -1])
    assert dict(add_functions(f, g).atom_values) == {
        "a0": Fraction(3),
        "a1": Fraction(2),
    }
    assert scale_function(f, Fraction(1, 2)).atom_values["a1"] == Fraction(3, 2)
    assert shift_function(f, 4).atom_values["a0"] == 5
    assert f.integral() == 2


def test_equal_ae_across_refinements():
    f = mkdiffuse([(4, "1/2"), (2, "1/2")])
    g = refine_diffuse(f, 4)
    assert equal_ae(f, g)
    h = mkdiffuse([(4, "1/4"), (4, "1/4"), (2, "1/2")])
    assert equal_ae(f, h)
    assert not equal_ae(f, mkdiffuse([(2, "1/2"), (4, "1/2")]))


def test_piece_alignment_addition():
    f = mkdiffuse([(1, "1/2"), (3, "1/2")])
    g = mkdiffuse([(2, "1/4"), (0, "3/4")])
    total = add_functions(f, g)
    assert total.diffuse_pieces == (
        (Fraction(3), Fraction(1, 4)),
        (Fraction(1), Fraction(1, 4)),
        (Fraction(3), Fraction(1, 2)),
    )


def test_normalized_parsing():
    doc = {
        "space": {"atoms": [{"id": "e", "weight": "1"}], "diffuse_mass": "1"},
        "atoms": {"e": "3"},
        "diffuse": [{"value": "1", "mass": "1"}],
    }
    with pytest.raises(NormalizationError):
        parse_function(doc)
    f = parse_function_normalized(doc)
    assert f.space.atoms[0][1] == Fraction(1, 2)
    assert f.diffuse_pieces == ((Fraction(1), Fraction(1, 2)),)
