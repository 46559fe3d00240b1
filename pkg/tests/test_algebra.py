import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from pisotsub.algebra import (
    count_roots_outside_unit_disk,
    char_poly,
    factor_over_integers,
    field_arith,
    field_for_polynomial,
    in_Z_one_over_a0,
    kernel_basis,
    minimal_polynomial_of_dilatation,
    p_prime_at_lambda,
    pisot_check,
    poly_from_coeffs,
    solve_kernel_over_field,
)
from pisotsub.core import abelianization
from pisotsub.errors import PrecisionError

GOLDEN = poly_from_coeffs(-1, -1, 1)          # x^2 - x - 1
QUADRATIC = poly_from_coeffs(-9, -12, 1)      # x^2 - 12x - 9


class TestCharPoly:
    def test_fibonacci_matrix(self):
        assert char_poly(((1, 1), (1, 0))) == GOLDEN

    def test_rank_one_matrix(self):
        assert char_poly(((6, 3), (6, 3))) == poly_from_coeffs(0, -9, 1)

    def test_quadratic_matrix(self):
        assert char_poly(((9, 6), (6, 3))) == QUADRATIC


class TestFactorization:
    def test_rational_roots(self):
        f = factor_over_integers(poly_from_coeffs(0, -9, 1))
        assert f.content == 1
        assert f.factors == (
            (poly_from_coeffs(-9, 1), 1),
            (poly_from_coeffs(0, 1), 1),
        )

    def test_irreducible_quadratic(self):
        f = factor_over_integers(GOLDEN)
        assert f.factors == ((GOLDEN, 1),)

    def test_degree_six_split(self):
        # x^6 - 9x^5 - x + 9 = (x - 9)(x - 1)(x^4 + x^3 + x^2 + x + 1)
        p = poly_from_coeffs(9, -1, 0, 0, 0, -9, 1)
        f = factor_over_integers(p)
        assert {g for g, _ in f.factors} == {
            poly_from_coeffs(-9, 1),
            poly_from_coeffs(-1, 1),
            poly_from_coeffs(1, 1, 1, 1, 1),
        }
        assert f.reconstruct() == p

    def test_multiplicities(self):
        p = poly_from_coeffs(-1, 1) * poly_from_coeffs(-1, 1) * GOLDEN
        p = p * poly_from_coeffs(0, 1) * poly_from_coeffs(0, 1) * poly_from_coeffs(0, 1)
        f = factor_over_integers(p)
        assert dict(f.factors) == {
            poly_from_coeffs(0, 1): 3,
            poly_from_coeffs(-1, 1): 2,
            GOLDEN: 1,
        }

    def test_seeded_products_reconstruct(self):
        rng = random.Random(20240601)
        atoms = [
            poly_from_coeffs(-1, 1), poly_from_coeffs(2, 1), GOLDEN,
            poly_from_coeffs(1, 1, 1), poly_from_coeffs(-1, -1, 0, 1),
        ]
        for _ in range(10):
            p = poly_from_coeffs(rng.choice([1, 2, 3]))
            for _ in range(rng.randint(1, 3)):
                p = p * rng.choice(atoms)
            f = factor_over_integers(p)
            assert f.reconstruct() == p


class TestMinimalPolynomial:
    def test_fibonacci(self, fib):
        rep = minimal_polynomial_of_dilatation(fib)
        assert rep.degree == 2
        assert rep.min_poly == GOLDEN
        assert rep.a0 == -1 and rep.norm == -1
        assert rep.is_pisot

    def test_ninefold_base(self, ninefold_base):
        rep = minimal_polynomial_of_dilatation(ninefold_base)
        assert rep.degree == 1
        assert rep.min_poly == poly_from_coeffs(-9, 1)
        assert rep.a0 == -9 and rep.norm == 9
        assert rep.is_pisot

    def test_quadratic_base(self, quadratic_base):
        rep = minimal_polynomial_of_dilatation(quadratic_base)
        assert rep.min_poly == QUADRATIC
        lo, hi = rep.field.interval(Fraction(1, 10**6))
        # dilatation is 6 + 3*sqrt(5) = 12.7082...
        assert lo < Fraction(127083, 10000) and hi > Fraction(127082, 10000)

    def test_min_poly_divides_char_poly_everywhere(self, all_corpus_names):
        from conftest import load_corpus

        for name in all_corpus_names:
            s = load_corpus(name)
            rep = minimal_polynomial_of_dilatation(s)
            assert rep.min_poly.divides(char_poly(abelianization(s)))
            assert rep.norm == (-1) ** rep.degree * rep.a0


class TestPisotCheck:
    def test_golden(self):
        flag, bound = pisot_check(GOLDEN)
        assert flag
        assert Fraction(62, 100) <= bound < 1

    def test_not_pisot_quadratic(self):
        # roots (1 +- sqrt(13)) / 2; the conjugate is -1.30...
        assert pisot_check(poly_from_coeffs(-3, -1, 1)) == (False, None)

    def test_degree_one(self):
        assert pisot_check(poly_from_coeffs(-9, 1)) == (True, Fraction(0))

    def test_salem_quartic_rejected(self):
        # x^4 - x^3 - x^2 - x + 1 has two conjugates exactly on the unit circle
        assert pisot_check(poly_from_coeffs(1, -1, -1, -1, 1))[0] is False

    def test_palindromic_pisot(self):
        flag, bound = pisot_check(poly_from_coeffs(1, -3, 1))
        assert flag and 0 < bound < 1

    def test_outside_count(self):
        assert count_roots_outside_unit_disk(GOLDEN) == 1
        assert count_roots_outside_unit_disk(poly_from_coeffs(-3, -1, 1)) == 2
        # roots exactly on the unit circle can never be certified either way
        with pytest.raises(PrecisionError):
            count_roots_outside_unit_disk(poly_from_coeffs(1, 1, 1))


def numeric_pisot_oracle(p, dps=200):
    """200-digit root finder: real root > 1 and all other moduli < 1."""
    with mpmath.workdps(dps):
        roots = mpmath.polyroots([mpmath.mpf(c) for c in reversed(p.coeffs)],
                                 maxsteps=400, extraprec=200)
        margin = mpmath.mpf(10) ** (-50)
        real_big = [r for r in roots
                    if abs(mpmath.im(r)) < margin and mpmath.re(r) > 1 + margin]
        if not real_big:
            return None
        dominant = max(real_big, key=mpmath.re)
        others = [r for r in roots if r is not dominant]
        return all(abs(r) < 1 - margin for r in others)


def random_pisot_candidates(count=50, seed=20240601):
    """Seeded random monic integer polynomials of degree <= 6, reduced to
    irreducible factors with a real root > 1 (where the exact test applies)."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        deg = rng.randint(2, 6)
        coeffs = [rng.randint(-4, 4) for _ in range(deg)] + [1]
        p = poly_from_coeffs(*coeffs)
        if p.degree < 1:
            continue
        for f, _ in factor_over_integers(p).factors:
            if f.degree >= 1 and f.is_monic():
                oracle = numeric_pisot_oracle(f)
                if oracle is None:
                    continue
                out.append((f, oracle))
                if len(out) == count:
                    break
    return out


class TestPisotOracleAgreement:
    def test_fifty_seeded_polynomials(self):
        for f, oracle in random_pisot_candidates():
            flag, bound = pisot_check(f)
            assert flag == oracle, f"disagreement on {f!r}"
            if flag and f.degree > 1:
                assert 0 < bound < 1


class TestFieldArithmetic:
    def test_lambda_squared(self):
        k = field_for_polynomial(GOLDEN)
        lam = k.generator()
        assert lam * lam == k.element([1, 1])

    def test_inverse_example(self):
        k = field_for_polynomial(GOLDEN)
        lam = k.generator()
        inv = (lam + 2).inverse()
        assert inv == k.element([Fraction(3, 5), Fraction(-1, 5)])

    def test_inverse_law_random(self):
        k = field_for_polynomial(GOLDEN)
        rng = random.Random(7)
        for _ in range(100):
            x = k.element([Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(2)])
            if not x:
                continue
            assert x * x.inverse() == k.one()

    def test_named_ops(self):
        k = field_for_polynomial(GOLDEN)
        a, b = k.element([1, 2]), k.element([3, -1])
        assert field_arith(a, b, "add") == k.element([4, 1])
        assert field_arith(a, b, "sub") == k.element([-2, 3])
        assert field_arith(field_arith(a, b, "div"), b, "mul") == a

    def test_division_by_zero(self):
        k = field_for_polynomial(GOLDEN)
        with pytest.raises(ZeroDivisionError):
            k.one() / k.zero()


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=12)


class TestFieldLaws:
    @given(st.lists(rationals, min_size=3, max_size=3).map(tuple),
           st.lists(rationals, min_size=3, max_size=3).map(tuple),
           st.lists(rationals, min_size=3, max_size=3).map(tuple))
    @settings(max_examples=25, deadline=None)
    def test_ring_laws_cubic(self, a, b, c):
        k = field_for_polynomial(poly_from_coeffs(-1, -1, -1, 1))
        x, y, z = k.element(a), k.element(b), k.element(c)
        assert x * (y + z) == x * y + x * z
        assert (x * y) * z == x * (y * z)
        assert x + y == y + x and x * y == y * x
        assert len((x * y).coords) == 3


class TestPPrime:
    def test_golden(self):
        k = field_for_polynomial(GOLDEN)
        assert p_prime_at_lambda(k) == k.element([-1, 2])

    def test_degree_one(self):
        k = field_for_polynomial(poly_from_coeffs(-2, 1))
        assert p_prime_at_lambda(k) == k.one()

    def test_quadratic(self):
        k = field_for_polynomial(QUADRATIC)
        assert p_prime_at_lambda(k) == k.element([-12, 2])


class TestKernels:
    def test_fibonacci_eigenvector(self, fib):
        rep = minimal_polynomial_of_dilatation(fib)
        k, lam = rep.field, rep.field.generator()
        a = abelianization(fib)
        rows = [
            [k.rational(a[i][j]) - (lam if i == j else k.zero()) for j in range(2)]
            for i in range(2)
        ]
        basis = solve_kernel_over_field(rows)
        assert len(basis) == 1
        v = basis[0]
        for i in range(2):
            total = k.zero()
            for j in range(2):
                total = total + k.rational(a[i][j]) * v[j]
            assert total == lam * v[i]
        # spanned by (lam, 1)
        ratio = v[0] / v[1]
        assert ratio == lam

    def test_identity_kernel_empty(self):
        rows = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
        assert kernel_basis(rows, Fraction(0), Fraction(1)) == []

    def test_zero_matrix_kernel_full(self):
        rows = [[Fraction(0), Fraction(0)], [Fraction(0), Fraction(0)]]
        basis = kernel_basis(rows, Fraction(0), Fraction(1))
        assert len(basis) == 2

    def test_kernel_vectors_exact(self):
        rows = [[Fraction(2), Fraction(4), Fraction(-2)],
                [Fraction(1), Fraction(2), Fraction(-1)]]
        for v in kernel_basis(rows, Fraction(0), Fraction(1)):
            for row in rows:
                assert sum(x * y for x, y in zip(row, v)) == 0


class TestZOneOverA0:
    def test_examples(self):
        assert in_Z_one_over_a0(Fraction(5, 27), -9)
        assert not in_Z_one_over_a0(Fraction(1, 2), -9)
        assert in_Z_one_over_a0(Fraction(7), 3)
        assert in_Z_one_over_a0(Fraction(-4), -1)
        assert not in_Z_one_over_a0(Fraction(1, 3), 1)
