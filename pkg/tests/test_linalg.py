from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from tropical_rubber.linalg import (
    IntMatrix,
    NotSaturated,
    NotSurjective,
    determinant,
    hermite_normal_form,
    is_saturated_image,
    kernel_basis,
    lattice_basis,
    primitive,
    quotient_by,
    rank,
    right_inverse,
    saturation,
    smith_normal_form,
    solve_integral,
    solve_rational,
)


def matrices(max_rows=4, max_cols=4, bound=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(-bound, bound), min_size=c, max_size=c),
                min_size=r, max_size=r,
            ).map(lambda rows: IntMatrix(rows, ncols=c))
        )
    )


def fraction_rank(M: IntMatrix) -> int:
    """Rank by plain Gaussian elimination over the rationals."""
    A = [[Fraction(x) for x in row] for row in M.rows]
    r = 0
    for j in range(M.ncols):
        piv = next((i for i in range(r, len(A)) if A[i][j]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(len(A)):
            if i != r and A[i][j]:
                f = A[i][j] / A[r][j]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        r += 1
    return r


def fraction_det(M: IntMatrix) -> Fraction:
    A = [[Fraction(x) for x in row] for row in M.rows]
    n, det = len(A), Fraction(1)
    for j in range(n):
        piv = next((i for i in range(j, n) if A[i][j]), None)
        if piv is None:
            return Fraction(0)
        if piv != j:
            A[j], A[piv] = A[piv], A[j]
            det = -det
        det *= A[j][j]
        for i in range(j + 1, n):
            f = A[i][j] / A[j][j]
            A[i] = [a - f * b for a, b in zip(A[i], A[j])]
    return det


# -- oracles -------------------------------------------------------------------


def test_kernel_matches_brute_force_enumeration():
    M = IntMatrix([[1, 2, -1], [2, 4, -2]])
    K = kernel_basis(M)
    box = [v for v in product(range(-3, 4), repeat=3) if not any(M.apply(v))]
    for v in box:
        assert solve_integral(K, v) is not None
    for c in K.columns:
        assert not any(M.apply(c))


@given(matrices(3, 3, 3))
def test_kernel_contains_every_small_solution(M):
    K = kernel_basis(M)
    assert K.ncols == M.ncols - fraction_rank(M)
    for v in product(range(-2, 3), repeat=M.ncols):
        if not any(M.apply(v)):
            assert solve_integral(K, v) is not None


@given(matrices())
def test_rank_agrees_with_rational_elimination(M):
    assert rank(M) == fraction_rank(M)


@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_determinant_agrees_with_rational_elimination(rows):
    M = IntMatrix(rows)
    assert determinant(M) == fraction_det(M)


# -- normal forms ----------------------------------------------------------------


@given(matrices())
def test_hnf_is_unimodular_column_operation(M):
    H, U = hermite_normal_form(M)
    assert M @ U == H
    assert abs(determinant(U)) == 1


@given(matrices())
def test_hnf_spans_the_same_lattice(M):
    B = lattice_basis(M)
    assert B.ncols == rank(M)
    for c in M.columns:
        assert solve_integral(B, c) is not None
    for c in B.columns:
        assert solve_integral(M, c) is not None


@given(matrices())
def test_lattice_basis_is_canonical_under_column_shuffles(M):
    shuffled = IntMatrix.from_columns(list(reversed(M.columns)) + [M.col(0)], M.nrows)
    assert lattice_basis(shuffled) == lattice_basis(M)


@given(matrices())
def test_smith_form_identity_and_divisibility(M):
    snf = smith_normal_form(M)
    assert snf.U @ M @ snf.V == snf.S
    assert abs(determinant(snf.U)) == 1 and abs(determinant(snf.V)) == 1
    nonzero = [d for d in snf.divisors if d]
    assert all(d > 0 for d in nonzero)
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    for i in range(snf.S.nrows):
        for j in range(snf.S.ncols):
            if i != j:
                assert snf.S[i, j] == 0


# -- lattices ---------------------------------------------------------------------


@given(matrices())
def test_saturation_contains_rational_span_points(M):
    S = saturation(M)
    assert S.ncols == rank(M)
    assert is_saturated_image(S)
    for c in M.columns:
        assert solve_integral(S, c) is not None


def test_index_two_image_is_not_saturated():
    assert not is_saturated_image(IntMatrix([[2, 0], [0, 1]]))
    assert is_saturated_image(IntMatrix([[1, 1], [0, 1]]))


@given(matrices(3, 4, 3))
def test_right_inverse_of_surjection(M):
    if rank(M) < M.nrows or not is_saturated_image(M):
        with pytest.raises(NotSurjective):
            right_inverse(M)
        return
    assert M @ right_inverse(M) == IntMatrix.identity(M.nrows)


@given(matrices(4, 3, 3))
def test_solve_integral_returns_exact_solutions(M):
    b = M.apply([1, -2, 3][: M.ncols])
    x = solve_integral(M, b)
    assert x is not None and tuple(M.apply(x)) == tuple(b)
    y = solve_rational(M, b)
    assert y is not None and tuple(M.apply(y)) == tuple(b)


def test_solve_integral_rejects_points_off_the_lattice():
    assert solve_integral(IntMatrix([[2]]), [1]) is None
    assert solve_rational(IntMatrix([[2]]), [1]) == (Fraction(1, 2),)
    assert solve_rational(IntMatrix([[1], [1]]), [1, 0]) is None


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), max_size=3))))
def test_quotient_by_saturated_sublattice(data):
    n, vecs = data
    K = saturation(IntMatrix.from_columns(vecs, n)) if vecs else IntMatrix.zeros(n, 0)
    q = quotient_by(K, n)
    assert q.quotient_rank == n - K.ncols
    assert (q.projection @ K).is_zero()
    assert is_saturated_image(q.projection) or q.quotient_rank == 0
    if q.quotient_rank:
        assert rank(q.projection) == q.quotient_rank


def test_quotient_by_rejects_non_saturated_kernel():
    with pytest.raises(NotSaturated):
        quotient_by(IntMatrix([[2], [0]]), 2)


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=4).filter(any))
def test_primitive_vector(v):
    p = primitive(v)
    from math import gcd
    g = 0
    for x in p:
        g = gcd(g, x)
    assert g == 1
    k = next(a // b for a, b in zip(v, p) if b)
    assert k > 0 and tuple(k * x for x in p) == tuple(v)


def test_empty_shapes():
    Z = IntMatrix.zeros(3, 0)
    assert kernel_basis(IntMatrix.zeros(0, 2)) == IntMatrix.identity(2)
    assert rank(Z) == 0
    assert (IntMatrix.zeros(2, 3) @ Z).shape == (2, 0)
