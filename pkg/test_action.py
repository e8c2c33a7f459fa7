#!/usr/bin/env python3
"""Tests for the action of diagram sums on Hochschild cochains"""

import random

import pytest

from app.action import (
    CochainTensor,
    act,
    act_on_cohomology,
    bracket,
    check_chain_map,
    check_composition,
    degree_law_holds,
    placement_sign,
)
from app.diagram import generator, slide_variants
from app.errors import ShapeError
from app.frobenius import builtin
from app.hochschild import cup_product, random_cochain, reversal
from app.placement import placements, readings
from app.prop import DiagramSum, compose, identity, tensor
from app.verify import EXAMPLE_DEGREES, EXAMPLE_SIGN, EXAMPLE_SLOTS


def _cochains(alg, degrees, seed):
    rng = random.Random(seed)
    return [random_cochain(alg, n, rng, max_degree=n + 3) for n in degrees]


def test_cup_is_the_graded_product():
    for name in ("dual_numbers", "mat2"):
        alg = builtin(name)
        for p, q in ((1, 1), (1, 2), (2, 2)):
            signs = set()
            for seed in (10 * p + q, 10 * p + q + 100):
                f, g = _cochains(alg, (p, q), seed=seed)
                expected = cup_product(f, g)
                result = act("cup", [f, g]).single()
                assert result in (expected, -expected), (name, p, q)
                if not expected.is_zero():
                    signs.add(result == expected)
            assert len(signs) <= 1, (name, p, q)
    print("   ✓ cup acts as the cup product, operands in order")


def test_reverse_is_orientation_reversal():
    alg = builtin("mat2")
    for n in range(4):
        (f,) = _cochains(alg, (n,), seed=n)
        assert act("reverse", [f]).single() == reversal(f)


def test_generators_are_chain_maps():
    alg = builtin("dual_numbers")
    cases = {"cup": (1, 2), "star": (2, 1), "delta": (2,)}
    for name, degrees in cases.items():
        ok, defect = check_chain_map(name, _cochains(alg, degrees, seed=3))
        assert ok, (name, defect)


def test_degree_law():
    alg = builtin("trunc_poly:3")
    for name, degrees in {"cup": (1, 1), "star": (2, 2), "delta": (3,), "vee0": (2,)}.items():
        assert degree_law_holds(name, _cochains(alg, degrees, seed=5)), name


def test_composition_is_compatible():
    alg = builtin("dual_numbers")
    f, g, h = _cochains(alg, (1, 2, 1), seed=7)
    ok, _ = check_composition("cup", tensor("cup", identity(1)), [f, g, h])
    assert ok
    ok, _ = check_composition("delta", "cup", [f, g])
    assert ok


def test_slides_do_not_change_the_action():
    alg = builtin("dual_numbers")
    x = CochainTensor.of(_cochains(alg, (2, 1), seed=9))
    results = [act(DiagramSum.of(v, normalize=False), x) for v in slide_variants(generator("cup"))]
    assert len(results) == 2
    assert results[0] == results[1]


def test_worked_example_signs():
    d = generator("worked_example")
    assert d.shape == (5, 4)
    assert placement_sign(d, EXAMPLE_DEGREES, EXAMPLE_SLOTS) == EXAMPLE_SIGN == -1
    read = readings(d, EXAMPLE_DEGREES, EXAMPLE_SLOTS)
    assert [(i + 1, s) for i, s, _ in read[1]] == [(5, 1), (5, 2), (3, 9), (2, 6), (5, 6)]
    assert read[2] == read[3] == []
    assert len(read[4]) == 19
    found = {p.slots: p.sign for p in placements(d, EXAMPLE_DEGREES)}
    assert found[EXAMPLE_SLOTS] == -1


def test_shape_mismatch():
    alg = builtin("dual_numbers")
    with pytest.raises(ShapeError):
        act("cup", _cochains(alg, (1,), seed=1))


def test_bracket_antisymmetry():
    alg = builtin("mat2")
    for p, q in ((1, 1), (1, 2), (2, 2)):
        f, g = _cochains(alg, (p, q), seed=p + 5 * q)
        swapped = bracket(g, f)
        if ((p - 1) * (q - 1)) % 2 == 0:
            swapped = -swapped
        assert bracket(f, g) == swapped


def test_cup_on_the_center():
    alg = builtin("dual_numbers")
    induced = act_on_cohomology("cup", alg, (0, 0), max_degree=3)
    assert induced.source_dimension == 4
    block = induced.block((0,))
    assert block is not None
    assert (block.rows, block.cols) == (2, 4)
    assert not induced.is_zero()


def test_composites_with_clusters_are_compatible():
    alg = builtin("dual_numbers")
    f, g = _cochains(alg, (3, 2), seed=17)
    ok, _ = check_composition("delta", "star", [f, g])
    assert ok
    ok, _ = check_composition("vee0", "cup", [f, g])
    assert ok
    ok, defect = check_chain_map(compose("delta", "star"), [f, g])
    assert ok, defect


def test_koszul_tensor_acts_factorwise():
    alg = builtin("dual_numbers")
    for p, q in ((1, 2), (2, 2), (2, 3)):
        f, g = _cochains(alg, (p, q), seed=p * q)
        x = CochainTensor.of([f, g])
        split = act(tensor(identity(1), "delta", koszul=True), x)
        expected = CochainTensor.of([f, act("delta", [g]).single()])
        assert split == (-expected if p % 2 else expected), (p, q)
        split = act(tensor("delta", identity(1), koszul=True), x)
        assert split == CochainTensor.of([act("delta", [f]).single(), g]), (p, q)


def main():
    print("\nAction tests\n")
    test_cup_is_the_graded_product()
    test_reverse_is_orientation_reversal()
    test_generators_are_chain_maps()
    test_degree_law()
    test_composition_is_compatible()
    test_slides_do_not_change_the_action()
    test_worked_example_signs()
    test_shape_mismatch()
    test_bracket_antisymmetry()
    test_cup_on_the_center()
    test_composites_with_clusters_are_compatible()
    test_koszul_tensor_acts_factorwise()
    print("\n✓ action tests completed")


if __name__ == "__main__":
    main()
