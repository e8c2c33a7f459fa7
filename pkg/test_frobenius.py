#!/usr/bin/env python3
"""Tests for Frobenius algebras: builtins, validation and the dual coproduct"""

import itertools
import random

import pytest
from sympy import QQ

from app.errors import InputError
from app.frobenius import (
    beta,
    builtin,
    comultiply,
    cyclic_bracket,
    from_dict,
    gamma,
    validate,
)


def test_builtins_validate():
    for name in ("dual_numbers", "trunc_poly:3", "trunc_poly(4)", "mat2", "group_c2"):
        report = validate(builtin(name))
        assert report["valid"], (name, report["errors"])
        print(f"   ✓ {name} is a symmetric Frobenius algebra")
    assert not builtin("mat2").commutative
    assert validate(builtin("mat2"))["commutative"] is False
    assert builtin("dual_numbers").commutative


def test_unknown_builtin():
    with pytest.raises(InputError):
        builtin("octonions")


def test_degenerate_form_reported():
    data = builtin("dual_numbers").to_dict()
    data["form"] = []
    report = validate(from_dict(data))
    assert not report["valid"]
    failed = [c["name"] for c in report["checks"] if not c["passed"]]
    assert failed == ["non-degeneracy"]


def test_bad_index_names_path():
    data = builtin("dual_numbers").to_dict()
    data["multiplication"].append([0, 0, 5, "1"])
    with pytest.raises(InputError) as info:
        from_dict(data)
    assert info.value.path == "multiplication[3][2]"


def test_undeclared_commutativity_warns():
    data = builtin("group_c2").to_dict()
    data["commutative"] = False
    report = validate(from_dict(data))
    assert report["valid"]
    assert report["warnings"]


def test_beta_gamma_inverse():
    alg = builtin("mat2")
    rng = random.Random(3)
    for _ in range(5):
        a = [QQ(rng.randint(-3, 3)) for _ in range(alg.dimension)]
        assert gamma(alg, beta(alg, a)) == a


def test_dual_numbers_coproduct():
    alg = builtin("dual_numbers")
    # e^x(e_b e_c) is one exactly when {b, c} = {1, x}
    assert comultiply(alg, [QQ(0), QQ(1)], 2) == {(0, 1): QQ(1), (1, 0): QQ(1)}
    assert comultiply(alg, [QQ(1), QQ(0)], 2) == {(0, 0): QQ(1)}


def test_cyclic_bracket_values():
    alg = builtin("dual_numbers")
    e0, e1 = [QQ(1), QQ(0)], [QQ(0), QQ(1)]
    assert cyclic_bracket(alg, [e0, e1]) == QQ(1)
    assert cyclic_bracket(alg, [e1, e1]) == QQ(0)
    assert cyclic_bracket(alg, [e0]) == QQ(1)
    assert cyclic_bracket(alg, [e1]) == QQ(0)


def test_cyclic_bracket_rotation_invariance():
    alg = builtin("mat2")
    rng = random.Random(11)
    for _ in range(10):
        cs = [[QQ(rng.randint(-3, 3)) for _ in range(alg.dimension)] for _ in range(3)]
        value = cyclic_bracket(alg, cs)
        for k in range(1, 3):
            assert cyclic_bracket(alg, cs[k:] + cs[:k]) == value


def test_expansion_matches_products():
    alg = builtin("trunc_poly:3")
    for target in range(alg.dimension):
        for indices, coeff in alg.expansion(target, 3):
            vec = alg.basis_vector(indices[0])
            for b in indices[1:]:
                vec = alg.product(vec, alg.basis_vector(b))
            assert vec[target] == coeff
    counted = sum(1 for idx in itertools.product(range(3), repeat=3) if sum(idx) == 2)
    assert len(alg.expansion(2, 3)) == counted


def main():
    print("\nFrobenius algebra tests\n")
    test_builtins_validate()
    test_unknown_builtin()
    test_degenerate_form_reported()
    test_bad_index_names_path()
    test_undeclared_commutativity_warns()
    test_beta_gamma_inverse()
    test_dual_numbers_coproduct()
    test_cyclic_bracket_values()
    test_cyclic_bracket_rotation_invariance()
    test_expansion_matches_products()
    print("\n✓ frobenius tests completed")


if __name__ == "__main__":
    main()
