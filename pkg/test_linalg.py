#!/usr/bin/env python3
"""Tests for exact linear algebra helpers"""

import pytest
from sympy import GF, QQ

from app.errors import InputError, NotContainedError
from app.linalg import (
    ClassProjector,
    RationalMatrix,
    field_from_spec,
    format_scalar,
    in_span,
    kernel_basis,
    parse_scalar,
    quotient_dimension,
    rank,
)


def test_scalars():
    assert parse_scalar("3/6") == QQ(1, 2)
    assert parse_scalar(-4) == QQ(-4)
    assert format_scalar(QQ(6, 4)) == "3/2"
    assert format_scalar(QQ(-5)) == "-5"
    with pytest.raises(InputError):
        parse_scalar("one half", QQ, "form[0][2]")
    with pytest.raises(InputError):
        parse_scalar(True)


def test_field_specs():
    assert field_from_spec("q") == QQ
    assert field_from_spec("p:7") == GF(7)
    with pytest.raises(InputError):
        field_from_spec("p:8")
    with pytest.raises(InputError):
        field_from_spec("r")
    gf = GF(5)
    assert format_scalar(parse_scalar("1/2", gf), gf) == "3"


def test_rank_and_kernel():
    m = RationalMatrix.from_rows([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert rank(m) == 2
    kernel = kernel_basis(m)
    assert len(kernel) == 1
    assert not any(m.apply(kernel[0]))
    assert rank(RationalMatrix.zeros(3, 0)) == 0


def test_span_membership():
    vectors = [[1, 0, 1], [0, 1, 1]]
    assert in_span(vectors, [2, 3, 5])
    assert not in_span(vectors, [0, 0, 1])
    assert in_span([], [0, 0, 0])


def test_quotient_dimension():
    # d0: k -> k^2 hits the diagonal, d1: k^2 -> k kills it
    b_in = RationalMatrix.from_rows([[1], [1]])
    b_out = RationalMatrix.from_rows([[1, -1]])
    dim, reps = quotient_dimension(b_in, b_out)
    assert dim == 0
    assert reps == []
    dim, reps = quotient_dimension(RationalMatrix.zeros(2, 0), b_out)
    assert dim == 1 and len(reps) == 1
    with pytest.raises(NotContainedError):
        quotient_dimension(RationalMatrix.from_rows([[1], [0]]), b_out)


def test_class_projector():
    image = [[1, 1, 0]]
    reps = [[0, 0, 1]]
    projector = ClassProjector(image, reps, 3)
    assert projector.coordinates([2, 2, 0]) == [QQ(0)]
    assert projector.coordinates([1, 1, 3]) == [QQ(3)]


def main():
    print("\nLinear algebra tests\n")
    test_scalars()
    test_field_specs()
    test_rank_and_kernel()
    test_span_membership()
    test_quotient_dimension()
    test_class_projector()
    print("✓ linalg tests completed")


if __name__ == "__main__":
    main()
