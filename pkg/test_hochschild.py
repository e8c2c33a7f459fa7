#!/usr/bin/env python3
"""Tests for Hochschild cochains, differentials and cohomology tables"""

import random

import pytest
from sympy import QQ

from app.errors import DegreeError, InputError, ShapeError
from app.frobenius import builtin
from app.hochschild import (
    Cochain,
    Variant,
    basis,
    beta_sharp,
    beta_sharp_inverse,
    center_dimension,
    cohomology,
    cup_product,
    delta,
    dual_delta,
    from_dict,
    random_cochain,
    reversal,
    reversal_defect,
    reversal_eigenspaces,
)

TABLES = {
    "dual_numbers": [2, 1, 1, 1],
    "trunc_poly:3": [3, 2, 2, 2],
    "mat2": [1, 0, 0, 0],
    "group_c2": [2, 0, 0, 0],
}


def test_cohomology_tables():
    for name, expected in TABLES.items():
        alg = builtin(name)
        dims = [cohomology(alg, n, 4).dimension for n in range(4)]
        assert dims == expected, (name, dims)
        print(f"   ✓ HH*({name}) = {dims}")


def test_normalized_matches_full():
    alg = builtin("dual_numbers")
    for n in range(4):
        assert cohomology(alg, n, 4, Variant.FULL).dimension == cohomology(alg, n, 4).dimension


def test_center():
    assert center_dimension(builtin("mat2")) == 1
    assert center_dimension(builtin("dual_numbers")) == 2


def test_representatives_are_cocycles():
    alg = builtin("trunc_poly:3")
    for n in range(3):
        for f in cohomology(alg, n, 4).cochains():
            assert delta(f).is_zero()


def test_truncation_enforced():
    alg = builtin("dual_numbers")
    with pytest.raises(DegreeError):
        cohomology(alg, 4, 4)
    f = random_cochain(alg, 3, random.Random(1), max_degree=3)
    with pytest.raises(DegreeError):
        delta(f)


def test_cached_groups_follow_the_truncation():
    alg = builtin("dual_numbers")
    low = cohomology(alg, 1, 3)
    high = cohomology(alg, 1, 5)
    assert (low.max_degree, high.max_degree) == (3, 5)
    assert cohomology(alg, 1, 3) is low
    assert low.dimension == high.dimension == 1


def test_differential_squares_to_zero():
    rng = random.Random(2)
    for name in ("dual_numbers", "mat2"):
        alg = builtin(name)
        for n in range(3):
            f = random_cochain(alg, n, rng, max_degree=5)
            assert delta(delta(f)).is_zero()
            assert delta(f).is_normalized()
            full = random_cochain(alg, n, rng, max_degree=5, variant=Variant.FULL)
            assert delta(delta(full, Variant.FULL), Variant.FULL).is_zero()


def test_dual_differential_is_transported():
    rng = random.Random(4)
    alg = builtin("mat2")
    for n in range(3):
        f = random_cochain(alg, n, rng, max_degree=5)
        dual = beta_sharp(f)
        assert dual_delta(dual) == beta_sharp(delta(f))
        assert dual_delta(dual_delta(dual)).is_zero()
        assert beta_sharp_inverse(dual) == f
    with pytest.raises(ShapeError):
        delta(beta_sharp(f))


def test_cup_leibniz():
    rng = random.Random(6)
    alg = builtin("mat2")
    for p, q in ((0, 1), (1, 1), (1, 2)):
        f = random_cochain(alg, p, rng, max_degree=6)
        g = random_cochain(alg, q, rng, max_degree=6)
        lhs = delta(cup_product(f, g))
        second = cup_product(f, delta(g))
        rhs = cup_product(delta(f), g) + (second.scaled(-1) if p % 2 else second)
        assert lhs == rhs


def test_reversal():
    rng = random.Random(8)
    mat2 = builtin("mat2")
    dual_numbers = builtin("dual_numbers")
    for n in range(3):
        f = random_cochain(mat2, n, rng, max_degree=5)
        assert reversal(reversal(f)) == f
        assert reversal_defect(f) == delta(reversal(f)) - reversal(delta(f))
        g = random_cochain(dual_numbers, n, rng, max_degree=5)
        assert reversal_defect(g).is_zero()
        assert delta(reversal(g)) == reversal(delta(g))


def test_reversal_eigenspaces_split_the_basis():
    alg = builtin("dual_numbers")
    for n in range(4):
        spaces = reversal_eigenspaces(alg, n)
        assert len(spaces[1]) + len(spaces[-1]) == len(basis(alg, n))


def test_cochain_files():
    alg = builtin("dual_numbers")
    f = from_dict({"algebra": "dual_numbers", "components": {"1": [[1, 0, "1/2"], [1, 1, 3]]}})
    assert f.degree == 1
    assert f == Cochain(alg, {1: {(1, 0): QQ(1, 2), (1, 1): QQ(3)}})
    assert from_dict(f.to_dict(), alg) == f
    with pytest.raises(InputError) as info:
        from_dict({"algebra": "dual_numbers", "components": {"1": [[2, 0, 1]]}})
    assert info.value.path == "components.1[0][0]"
    with pytest.raises(InputError):
        from_dict({"algebra": "dual_numbers", "components": {"one": []}})


def main():
    print("\nHochschild complex tests\n")
    test_cohomology_tables()
    test_normalized_matches_full()
    test_center()
    test_representatives_are_cocycles()
    test_truncation_enforced()
    test_cached_groups_follow_the_truncation()
    test_differential_squares_to_zero()
    test_dual_differential_is_transported()
    test_cup_leibniz()
    test_reversal()
    test_reversal_eigenspaces_split_the_basis()
    test_cochain_files()
    print("\n✓ hochschild tests completed")


if __name__ == "__main__":
    main()
