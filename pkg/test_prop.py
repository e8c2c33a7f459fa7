#!/usr/bin/env python3
"""Tests for diagram sums: boundary, composition, tensor and permutations"""

import itertools
import random

import pytest
from sympy import QQ

from app.diagram import generator, random_diagram, to_dict
from app.errors import InputError, ShapeError
from app.prop import (
    as_sum,
    boundary,
    chain,
    compose,
    identity,
    permutation,
    sum_from_dict,
    tensor,
    tensor_all,
)
from app.verify import composite_pool, generator_identities, random_composable


def test_sum_arithmetic():
    cup = as_sum("cup")
    assert cup + cup == cup.scaled(2)
    assert (cup - cup).is_zero()
    assert len(cup.scaled(0)) == 0
    assert cup.dimension == 0
    assert (cup - cup).dimension is None
    with pytest.raises(ShapeError):
        cup + as_sum("delta")
    with pytest.raises(ShapeError):
        cup + as_sum("star")


def test_sum_from_dict():
    data = to_dict(generator("cup"))
    s = sum_from_dict({"terms": [["1/2", data], ["-1", data]]})
    assert s.coefficient(generator("cup")) == QQ(-1, 2)
    assert sum_from_dict(data) == as_sum("cup")
    with pytest.raises(InputError):
        sum_from_dict({"terms": []})


def test_boundary_of_star():
    cup = as_sum("cup")
    assert boundary(as_sum("star")) == cup - compose(cup, permutation([2, 1]))
    print("   ✓ boundary(star) = cup - cup o tau")


def test_boundary_of_vee():
    vee0 = as_sum("vee0")
    assert boundary(as_sum("vee")) == vee0 - compose(permutation([2, 1]), vee0)


def test_cycles():
    for name in ("cup", "vee0", "delta"):
        assert boundary(as_sum(name)).is_zero(), name


def test_boundary_squared_on_random_diagrams():
    rng = random.Random(5)
    for _ in range(30):
        s = as_sum(random_diagram(rng, max_dimension=3))
        assert boundary(boundary(s)).is_zero()


def test_delta_squared():
    delta = as_sum("delta")
    assert compose(delta, delta).is_zero()


def test_cup_associative():
    cup, one = as_sum("cup"), identity(1)
    assert compose(cup, tensor(cup, one)) == compose(cup, tensor(one, cup))


def test_identity_laws():
    for name in ("cup", "star", "delta", "vee0", "vee"):
        s = as_sum(name)
        n, m = s.shape
        assert compose(identity(m), s) == s, name
        assert compose(s, identity(n)) == s, name


def test_permutations_compose():
    perms = list(itertools.permutations([1, 2, 3]))
    for sigma in perms:
        for rho in perms:
            product = [sigma[rho[i] - 1] for i in range(3)]
            assert compose(permutation(sigma), permutation(rho)) == permutation(product)
    tau = permutation([2, 1])
    assert compose(tau, tau) == identity(2)


def test_tensor_and_chain_shapes():
    t = tensor(as_sum("cup"), as_sum("delta"))
    assert t.shape == (3, 2)
    assert t.dimension == 1
    c = chain("delta", "cup", tensor("cup", identity(1)))
    assert c.shape == (3, 1)
    with pytest.raises(ShapeError):
        compose("cup", "cup")


def test_sullivan_promotion():
    rev = as_sum("reverse")
    mixed = compose(rev, as_sum("delta"))
    assert mixed.mode.value == "sullivan"
    assert compose(rev, rev) == identity(1)


def test_frobenius_and_coassociativity():
    identities = generator_identities()
    for name in ("frobenius-left", "frobenius-right", "vee0-coassociative", "cup-associative"):
        lhs, rhs = identities[name]
        assert lhs == rhs, name
        assert not lhs.is_zero(), name
    print("   ✓ frobenius equalities and coassociativity hold")


def test_boundary_is_a_derivation():
    def law(s, t):
        tail = compose(s, boundary(t))
        if (s.dimension or 0) % 2:
            tail = tail.scaled(-1)
        return boundary(compose(s, t)) == compose(boundary(s), t) + tail

    delta, star, vee, one = as_sum("delta"), as_sum("star"), as_sum("vee"), identity(1)
    assert law(delta, star)
    assert law(vee, as_sum("cup"))
    assert law(star, tensor(star, one))
    assert law(tensor(delta, one), vee)
    rng = random.Random(11)
    pool = composite_pool()
    for _ in range(12):
        s, t = random_composable(rng, pool, 2)
        assert law(s, t), (s.to_dict(), t.to_dict())


def test_composition_is_associative():
    rng = random.Random(13)
    pool = composite_pool()
    for _ in range(6):
        s, t, u = random_composable(rng, pool, 3)
        assert compose(compose(s, t), u) == compose(s, compose(t, u))


def test_delta_after_star_terms():
    composite = compose(as_sum("delta"), as_sum("star"))
    assert composite.shape == (2, 1)
    assert composite.dimension == 2
    assert len(composite) == 3
    assert sorted(c for _, c in composite.items()) == [-1, -1, 1]


def test_koszul_tensor_signs():
    one, delta, star = identity(1), as_sum("delta"), as_sum("star")
    assert tensor(delta, one, koszul=True) == tensor(delta, one)
    assert tensor(one, delta, koszul=True) == -tensor(one, delta)
    assert tensor(star, delta, koszul=True) == -tensor(star, delta)
    assert tensor_all([one, one, delta], koszul=True) == tensor_all([one, one, delta])


def main():
    print("\nDiagram PROP tests\n")
    test_sum_arithmetic()
    test_sum_from_dict()
    test_boundary_of_star()
    test_boundary_of_vee()
    test_cycles()
    test_boundary_squared_on_random_diagrams()
    test_delta_squared()
    test_cup_associative()
    test_identity_laws()
    test_permutations_compose()
    test_tensor_and_chain_shapes()
    test_sullivan_promotion()
    test_frobenius_and_coassociativity()
    test_boundary_is_a_derivation()
    test_composition_is_associative()
    test_delta_after_star_terms()
    test_koszul_tensor_signs()
    print("\n✓ prop tests completed")


if __name__ == "__main__":
    main()
