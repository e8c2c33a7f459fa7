#!/usr/bin/env python3
"""Tests for chord diagrams: validation, face tracing, classification and equality"""

import copy
import random

import pytest

from app.diagram import (
    CATALOG,
    ChordDiagram,
    ChordLeaf,
    Mode,
    arc_count,
    canonical,
    canonical_form,
    classify,
    dimension,
    equals,
    from_dict,
    generator,
    identity,
    permutation_diagram,
    random_diagram,
    slide_normalize,
    slide_variants,
    to_dict,
    trace_boundaries,
    validate,
)
from app.errors import InputError


def _relabel_chords(d, mapping):
    def fix(p):
        if isinstance(p, ChordLeaf):
            return ChordLeaf(mapping[p.chord], p.index, p.twist)
        return p

    arities = [0] * len(d.arities)
    for old, new in mapping.items():
        arities[new] = d.arities[old]
    circles = tuple(tuple(tuple(fix(p) for p in cl) for cl in circle) for circle in d.circles)
    return ChordDiagram(d.mode, circles, tuple(arities), d.outputs)


def test_catalog_is_valid():
    for name in CATALOG:
        report = validate(generator(name))
        assert report["valid"], (name, report["errors"])
    print(f"   ✓ {len(CATALOG)} catalog diagrams valid")


def test_classification_of_generators():
    expected = {"cup": (2, 1, 0), "star": (2, 1, 1), "delta": (1, 1, 1), "vee0": (1, 2, 0), "vee": (1, 2, 1)}
    for name, (n, m, dim) in expected.items():
        d = generator(name)
        c = classify(d)
        assert (c.n, c.m) == (n, m), name
        assert c.genus == 0 and c.orientable, name
        assert dimension(d) == dim, name
    assert arc_count(generator("star")) == 3


def test_cup_boundary_walks():
    walks = trace_boundaries(generator("cup"))
    assert [w.label for w in walks] == ["1", "2", "1'"]
    arcs = [(v.circle, v.position, v.against) for v in walks[2].arcs()]
    # the output reads the first input's arc, then the second one's
    assert arcs == [(0, 0, False), (1, 0, False)]


def test_reverse_rejected_in_cyclic_mode():
    rev = generator("reverse")
    assert rev.mode == Mode.SULLIVAN
    assert validate(rev)["valid"]
    forced = ChordDiagram(Mode.CYCLIC, rev.circles, rev.arities, rev.outputs)
    report = validate(forced)
    assert not report["valid"]
    assert any(not c["passed"] for c in report["checks"] if c["name"] == "mode")


def test_shared_boundary_is_invalid():
    data = to_dict(identity(1))
    data["outputs"] = 2
    points = data["inputs"][0]["clusters"][0]["points"]
    points.insert(1, {"kind": "out", "id": 2, "dir": "opp"})
    report = validate(from_dict(data))
    assert not report["valid"]
    assert any("share a boundary" in e for e in report["errors"])


def test_missing_output_and_marks():
    data = to_dict(generator("cup"))
    data["outputs"] = 2
    report = validate(from_dict(data))
    assert "missing output id 2'" in report["errors"]
    data = to_dict(generator("cup"))
    data["inputs"][1]["clusters"][0]["points"].pop()
    report = validate(from_dict(data))
    assert any("0 input marks" in e for e in report["errors"])


def test_parse_errors_name_paths():
    data = to_dict(generator("cup"))
    data["inputs"][0]["clusters"][0]["points"][1]["chord"] = 3
    with pytest.raises(InputError) as info:
        from_dict(data)
    assert info.value.path == "inputs[0].clusters[0].points[1].chord"
    bad = copy.deepcopy(to_dict(generator("cup")))
    del bad["outputs"]
    with pytest.raises(InputError) as info:
        from_dict(bad)
    assert info.value.path == "outputs"


def test_equality_ignores_storage_rotation():
    star = generator("star")
    circle = star.circles[0]
    rotated = ChordDiagram(star.mode, (circle[1:] + circle[:1],) + star.circles[1:], star.arities, star.outputs)
    assert equals(star, rotated)
    assert canonical_form(rotated) == canonical_form(star)
    assert canonical(rotated) == canonical(star)
    assert canonical(star) != canonical(generator("cup"))


def test_equality_ignores_chord_numbering():
    from app.prop import tensor_diagrams
    d = tensor_diagrams(generator("cup"), generator("cup"))
    assert equals(d, _relabel_chords(d, {0: 1, 1: 0}))


def test_equality_respects_labels():
    cup = generator("cup")
    swapped = ChordDiagram(cup.mode, cup.circles[::-1], cup.arities, cup.outputs)
    assert validate(swapped)["valid"]
    assert not equals(cup, swapped)
    assert not equals(permutation_diagram([2, 1]), identity(2))


def test_generator_names():
    assert equals(generator("tau"), permutation_diagram([2, 1]))
    assert equals(generator("id(3)"), identity(3))
    assert equals(generator("perm:3,1,2"), permutation_diagram([3, 1, 2]))
    with pytest.raises(InputError):
        generator("pentagon")
    with pytest.raises(InputError):
        generator("perm(1,1)")


def test_slides_of_cup():
    cup = generator("cup")
    variants = slide_variants(cup)
    assert len(variants) == 2
    assert all(validate(v)["valid"] for v in variants)
    assert slide_normalize(variants[0]) == slide_normalize(variants[1])
    assert len(slide_variants(generator("star"))) == 1


def test_random_diagrams_are_valid():
    rng = random.Random(7)
    for _ in range(25):
        d = random_diagram(rng)
        report = validate(d)
        assert report["valid"], report["errors"]
        assert dimension(d) <= 3
        assert equals(from_dict(to_dict(d)), d)


def main():
    print("\nChord diagram tests\n")
    test_catalog_is_valid()
    test_classification_of_generators()
    test_cup_boundary_walks()
    test_reverse_rejected_in_cyclic_mode()
    test_shared_boundary_is_invalid()
    test_missing_output_and_marks()
    test_parse_errors_name_paths()
    test_equality_ignores_storage_rotation()
    test_equality_ignores_chord_numbering()
    test_equality_respects_labels()
    test_generator_names()
    test_slides_of_cup()
    test_random_diagrams_are_valid()
    print("\n✓ diagram tests completed")


if __name__ == "__main__":
    main()
