from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from quivermod.errors import DimensionMismatch, QuivermodError
from quivermod.linalg import (
    GF, QQ, BinaryForm, Matrix, Subspace, binary_form_gcd, char_poly, count_subspaces, enumerate_subspaces,
    field_from_name, gaussian_binomial, image_basis, kernel_basis, preimage, random_invertible, rank,
    rational_eigenvalues, rational_roots, subspace_intersect, subspace_sum,
)

from conftest import prime_matrices, rational_matrices, to_sympy


def M(rows, field=QQ):
    r = len(rows)
    c = len(rows[0]) if rows else 0
    return Matrix(field, rows, r, c)


# ---------------------------------------------------------------- fields


def test_field_names_and_scalars():
    assert field_from_name("Q") is QQ
    assert field_from_name("F7") == GF(7) == field_from_name("GF(7)") == field_from_name(7)
    assert QQ.format(Fraction(3, 7)) == "3/7"
    assert QQ.format(5) == "5"
    assert GF(7).format(4) == "4 mod 7"
    assert GF(7).parse("4 mod 7") == 4
    assert GF(5).parse("1/2") == 3
    with pytest.raises(QuivermodError):
        GF(7).parse("4 mod 5")
    with pytest.raises(QuivermodError):
        field_from_name("F8")


@given(st.integers(-50, 50), st.integers(1, 20))
def test_scalar_round_trip(num, den):
    x = Fraction(num, den)
    assert QQ.parse(QQ.format(x)) == x
    f = GF(11)
    if den % 11:
        y = f(x)
        assert f.parse(f.format(y)) == y


# ---------------------------------------------------------------- rank, kernel, image


def test_rank_examples():
    assert rank(Matrix.zeros(QQ, 3, 3)) == 0
    assert rank(Matrix.identity(QQ, 3)) == 3
    assert rank(M([[1, 2], [2, 4]])) == 1


@given(rational_matrices(max_rows=5, max_cols=5))
def test_rank_matches_sympy(m):
    assert m.rank() == to_sympy(m).rank()


@given(rational_matrices(max_rows=5, max_cols=5))
def test_rank_transpose_and_rank_nullity(m):
    assert m.rank() == m.T.rank()
    assert kernel_basis(m).dim + m.rank() == m.cols
    for v in kernel_basis(m).basis:
        assert not any(m.apply(v))


def _brute_rank(m: Matrix) -> int:
    p = m.field.p
    image = {m.apply(v) for v in itertools.product(range(p), repeat=m.cols)}
    k = 0
    while p ** k < len(image):
        k += 1
    return k


@given(prime_matrices(p=3, max_rows=3, max_cols=4))
def test_prime_field_rank_matches_image_count(m):
    assert m.rank() == _brute_rank(m)
    assert image_basis(m).dim == m.rank()


def test_kernel_and_image_examples():
    assert kernel_basis(Matrix.identity(QQ, 3)).is_zero()
    assert kernel_basis(M([[1, 1]])) == Subspace.span(QQ, 2, [(1, -1)])
    assert image_basis(M([[0, 0], [1, 0]])) == Subspace.span(QQ, 2, [(0, 1)])


@given(rational_matrices(min_rows=1, max_rows=4, square=True))
def test_det_and_inverse_match_sympy(m):
    s = to_sympy(m)
    d = m.det()
    assert d == Fraction(int(sympy.fraction(s.det())[0]), int(sympy.fraction(s.det())[1]))
    if d != 0:
        inv = m.inverse()
        assert m @ inv == Matrix.identity(QQ, m.rows)
    else:
        with pytest.raises(ZeroDivisionError):
            m.inverse()


@given(rational_matrices(max_rows=4, max_cols=4), st.integers(0, 4))
def test_product_matches_sympy(a, k):
    b = Matrix(QQ, [[Fraction(i - j, 1 + i) for j in range(k)] for i in range(a.cols)], a.cols, k)
    assert to_sympy(a @ b) == to_sympy(a) * to_sympy(b)


def test_shape_errors():
    with pytest.raises(DimensionMismatch):
        M([[1, 2]]) @ M([[1, 2]])
    with pytest.raises(DimensionMismatch):
        M([[1, 2]]).det()


# ---------------------------------------------------------------- characteristic polynomials


def test_char_poly_examples():
    c = Fraction(5, 3)
    assert char_poly(Matrix.zeros(QQ, 2, 2)) == (0, 0)
    assert char_poly(M([[c, 1], [0, c]])) == (c * c, -2 * c)
    assert char_poly(Matrix.identity(QQ, 2)) == (1, -2)


@given(rational_matrices(min_rows=1, max_rows=5, square=True))
def test_char_poly_matches_sympy(m):
    t = sympy.Symbol("t")
    coeffs = sympy.Poly(to_sympy(m).charpoly(t).as_expr(), t).all_coeffs()[::-1]
    assert tuple(Fraction(str(c)) for c in coeffs[:-1]) == char_poly(m)


@given(rational_matrices(min_rows=1, max_rows=4, square=True), st.integers(0, 10**6))
def test_char_poly_conjugation_invariant(m, seed):
    g = random_invertible(QQ, m.rows, random.Random(seed))
    assert char_poly(g @ m @ g.inverse()) == char_poly(m)


@given(prime_matrices(p=7, max_rows=4, max_cols=4))
def test_char_poly_over_prime_field(m):
    if not m.is_square() or m.rows == 0:
        return
    # Cayley-Hamilton as the oracle: p(M) = 0
    coeffs = list(char_poly(m)) + [1]
    acc = Matrix.zeros(m.field, m.rows, m.rows)
    power = Matrix.identity(m.field, m.rows)
    for c in coeffs:
        acc = acc + power * c
        power = power @ m
    assert acc.is_zero()


def test_rational_eigenvalues_examples():
    assert rational_eigenvalues(M([[0, 1], [0, 0]])) == ([0, 0], True)
    roots, complete = rational_eigenvalues(Matrix.diag(QQ, [1, 2]))
    assert sorted(roots) == [1, 2] and complete
    assert rational_eigenvalues(M([[0, -1], [1, 0]])) == ([], False)


@given(st.lists(st.builds(Fraction, st.integers(-6, 6), st.integers(1, 3)), min_size=1, max_size=4))
def test_rational_roots_recover_multiset(roots):
    t = sympy.Symbol("t")
    poly = sympy.Poly(sympy.prod([t - sympy.Rational(r.numerator, r.denominator) for r in roots]), t)
    coeffs = [Fraction(str(c)) for c in poly.all_coeffs()[::-1]]
    assert sorted(rational_roots(coeffs)) == sorted(roots)


# ---------------------------------------------------------------- binary forms


L0 = BinaryForm(1, (1, 0))
L1 = BinaryForm(1, (0, 1))


def test_binary_form_gcd_examples():
    assert binary_form_gcd([L0, L1]).degree == 0
    g = binary_form_gcd([BinaryForm(2, (1, 0, 0)), BinaryForm(2, (0, 1, 0))])
    assert g.degree == 1 and g.coefficients[1] == 0
    s = BinaryForm(1, (1, 1))
    g = binary_form_gcd([s])
    assert g.degree == 1 and g.divides(s) and s.divides(g)


forms = st.builds(lambda d, cs: BinaryForm(d, tuple(cs[:d + 1])), st.integers(0, 4),
                  st.lists(st.integers(-3, 3), min_size=5, max_size=5))


@given(st.lists(forms, min_size=1, max_size=4))
def test_binary_form_gcd_divides_inputs_and_matches_sympy(fs):
    fs = [f for f in fs if not f.is_zero()]
    if not fs:
        return
    g = binary_form_gcd(fs)
    assert all(g.divides(f) for f in fs)
    x, y = sympy.symbols("x y")
    expr = [sum(c * x ** (f.degree - k) * y ** k for k, c in enumerate(f.coefficients)) for f in fs]
    oracle = sympy.Poly(sympy.gcd_list(expr), x, y)
    assert g.degree == oracle.total_degree()


def test_binary_form_gcd_rejects_all_zero():
    with pytest.raises(QuivermodError, match="all minors vanish"):
        binary_form_gcd([BinaryForm(2, (0, 0, 0))])


# ---------------------------------------------------------------- subspaces


def test_subspace_examples():
    e1 = Subspace.span(QQ, 2, [(1, 0)])
    e2 = Subspace.span(QQ, 2, [(0, 1)])
    assert subspace_intersect(e1, e2).is_zero()
    assert subspace_sum(e1, e2).is_full()
    s = Subspace.span(QQ, 3, [(1, 2, 3)])
    assert preimage(Matrix.identity(QQ, 3), s) == s
    assert preimage(M([[0, 1], [0, 0]]), e1).dim == 2


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), max_size=4), st.integers(0, 10**6))
def test_subspace_canonical_form(vectors, seed):
    s = Subspace.span(QQ, 3, vectors)
    g = random_invertible(QQ, len(vectors), random.Random(seed)) if vectors else None
    if g is not None:
        mixed = [tuple(sum(g.entries[i][k] * vectors[k][j] for k in range(len(vectors))) for j in range(3))
                 for i in range(len(vectors))]
        assert Subspace.span(QQ, 3, mixed) == s
    assert all(s.contains(v) for v in vectors)


@given(st.lists(st.lists(st.integers(-2, 2), min_size=3, max_size=3), max_size=3),
       st.lists(st.lists(st.integers(-2, 2), min_size=3, max_size=3), max_size=3))
def test_dimension_formula(a, b):
    sa, sb = Subspace.span(QQ, 3, a), Subspace.span(QQ, 3, b)
    assert subspace_sum(sa, sb).dim + subspace_intersect(sa, sb).dim == sa.dim + sb.dim
    inter = subspace_intersect(sa, sb)
    assert inter.issubspace(sa) and inter.issubspace(sb)


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2), (2, 4)])
def test_enumerate_subspaces_brute_force(p, n):
    f = GF(p)
    listed = enumerate_subspaces(f, n)
    oracle = {Subspace.span(f, n, vs) for k in range(n + 1)
              for vs in itertools.combinations(itertools.product(range(p), repeat=n), k)}
    assert len(listed) == len(set(listed)) == len(oracle) == count_subspaces(p, n)
    assert set(listed) == oracle
    dims = [s.dim for s in listed]
    assert dims == sorted(dims)


def test_gaussian_binomial_values():
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(3, 1, 3) == 13
    assert gaussian_binomial(5, 0, 7) == 1
