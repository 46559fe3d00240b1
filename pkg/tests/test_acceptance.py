"""Acceptance suite: one test per criterion, every value exact, one printed
pass/fail line per criterion.  Run with -s to see the lines on success."""

from fractions import Fraction

from conftest import CORPUS_DIR, load_corpus

from pisotsub.algebra import (
    field_for_polynomial,
    in_Z_one_over_a0,
    minimal_polynomial_of_dilatation,
    pisot_check,
    poly_from_coeffs,
    solve_exact,
)
from pisotsub.cli import main
from pisotsub.cohomology import (
    build_transition_complex,
    cech_h1_dimension,
    edge_dynamics,
    eventual_range,
)
from pisotsub.coincidence import (
    check_cr_divides_norm,
    coincidence_rank,
    measure_fraction_witness,
    to_constant_length,
)
from pisotsub.core import abelianization, iterate, language
from pisotsub.cover import CoverSpec, build_triple_cover, standard_assignment, validate_cover
from pisotsub.measure import (
    companion_limit_vector,
    companion_matrix,
    cylinder_measure,
)
from pisotsub.regularity import fit_erp_functional, verify_erp

PRINTED_NINEFOLD_COVER_MATRIX = (
    (3, 2, 1, 3, 1, 2),
    (1, 2, 3, 0, 4, 2),
    (2, 2, 2, 3, 1, 2),
    (1, 1, 1, 1, 1, 1),
    (1, 1, 1, 0, 2, 1),
    (1, 1, 1, 2, 0, 1),
)
PRINTED_QUADRATIC_COVER_MATRIX = (
    (4, 3, 2, 3, 1, 2),
    (2, 3, 4, 0, 4, 2),
    (3, 3, 3, 3, 1, 2),
    (2, 2, 2, 1, 1, 1),
    (2, 2, 2, 0, 2, 1),
    (2, 2, 2, 2, 0, 1),
)


def report(number, description, body):
    try:
        body()
    except BaseException:
        print(f"[acceptance {number}] FAIL: {description}")
        raise
    print(f"[acceptance {number}] PASS: {description}")


def test_criterion_1_ninefold_cover_end_to_end(ninefold_cover):
    def body():
        s = ninefold_cover
        assert abelianization(s) == PRINTED_NINEFOLD_COVER_MATRIX
        pisot = minimal_polynomial_of_dilatation(s)
        fact = pisot.char_factorization
        assert dict(fact.factors) == {
            poly_from_coeffs(0, 1): 3,
            poly_from_coeffs(-1, 1): 2,
            poly_from_coeffs(-9, 1): 1,
        }  # eigenvalue multiset {9, 1, 1, 0, 0, 0}
        er = eventual_range(build_transition_complex(s), edge_dynamics(s))
        assert er.components == 3 and er.independent_cycles == 0
        coh = cech_h1_dimension(s)
        assert coh.dim_h1 == 1 == pisot.degree
        assert coincidence_rank(s).cr == 3
        assert check_cr_divides_norm(s).status == "PASS"

    report(1, "ninefold cover: matrix, eigenvalues, 3 contractible components, "
              "dim H^1 = 1, cr = 3, divisibility PASS", body)


def test_criterion_2_quadratic_cover(quadratic_base, quadratic_cover):
    def body():
        s = quadratic_cover
        assert abelianization(s) == PRINTED_QUADRATIC_COVER_MATRIX
        fact = minimal_polynomial_of_dilatation(s).char_factorization
        assert dict(fact.factors) == {
            poly_from_coeffs(0, 1): 2,
            poly_from_coeffs(-1, 1): 2,
            poly_from_coeffs(-9, -12, 1): 1,
        }  # x^2 (x-1)^2 (x^2 - 12x - 9)
        coh = cech_h1_dimension(s)
        assert coh.dim_h1 == 2 == coh.degree
        result = validate_cover(
            build_triple_cover(CoverSpec(quadratic_base, standard_assignment(quadratic_base)))
        )
        v = result.validation
        assert result.cover == s
        assert v.prefix_suffix_ok and v.disjoint_ok and v.cohomology_ok
        assert v.cr_mode == "lower_bound" and "cr >= 3" in v.cr_note

    report(2, "quadratic cover: matrix, exact eigenvalue factorization, "
              "dim H^1 = 2, checks 1-3 pass, cr >= 3 certified", body)


def test_criterion_3_cubic_base(cubic_base):
    def body():
        # independent oracle: minimal polynomial of 3*theta^4 over Q(theta)
        theta_field = field_for_polynomial(poly_from_coeffs(-1, -1, -1, 1))
        theta = theta_field.generator()
        beta = theta ** 4 * 3
        powers = [beta ** i for i in range(4)]
        rows = [[powers[j].coords[i] for j in range(3)] for i in range(3)]
        rhs = [-powers[3].coords[i] for i in range(3)]
        sol, rank, consistent = solve_exact(rows, rhs, Fraction(0))
        assert consistent and rank == 3  # no lower-degree dependency
        oracle_min_poly = poly_from_coeffs(
            int(sol[0]), int(sol[1]), int(sol[2]), 1
        )
        check = theta_field.zero()
        for c in reversed(oracle_min_poly.coeffs):
            check = check * beta + theta_field.rational(c)
        assert not check  # beta is a root, exactly

        pisot = minimal_polynomial_of_dilatation(cubic_base)
        assert pisot.min_poly == oracle_min_poly
        assert pisot.is_pisot
        assert pisot.norm == 27 and pisot.norm % 3 == 0
        assert cech_h1_dimension(cubic_base).dim_h1 == 3

    report(3, "cubic base: minimal polynomial equals that of 3*theta^4 "
              "(exact linear-algebra oracle), dim H^1 = 3, Pisot, norm 27", body)


def test_criterion_4_fibonacci_baselines(fib):
    def body():
        coh = cech_h1_dimension(fib)
        assert coh.is_homological_pisot and coh.dim_h1 == 2 == coh.degree
        expected = {
            "a": (0, 1), "b": (1, 0), "ab": (1, 0), "aa": (-1, 1),
        }
        for patch, alphas in expected.items():
            p = tuple(fib.index_of(ch) for ch in patch)
            fit = fit_erp_functional(fib, p, sample_len=10**4)
            assert fit.residual_zero
            assert fit.sample_count >= 20
            assert fit.sample_len == 10**4
            assert fit.alphas == tuple(Fraction(a) for a in alphas)
        k = minimal_polynomial_of_dilatation(fib).field
        lam = k.generator()
        from pisotsub.algebra import p_prime_at_lambda

        pprime = p_prime_at_lambda(k)
        m_a = cylinder_measure(fib, (0,), assert_lattices_equal=True)
        m_b = cylinder_measure(fib, (1,), assert_lattices_equal=True)
        assert m_a.value == lam / pprime
        assert m_b.value == (lam - 1) / pprime
        assert m_a.value + m_b.value == k.one()
        assert m_a.k == 0 and m_a.q == poly_from_coeffs(0, 1)
        assert m_b.k == 0 and m_b.q == poly_from_coeffs(-1, 1)

    report(4, "Fibonacci: homological Pisot (d = 2), exact ERP functionals for "
              "a, b, ab, aa over >= 20 samples, measures lam/p' and (lam-1)/p' "
              "summing to 1 with k = 0", body)


def test_criterion_5_thue_morse_negative_control(tm):
    def body():
        unit = to_constant_length(tm)
        assert coincidence_rank(unit).cr == 2
        coh = cech_h1_dimension(tm)
        pisot = minimal_polynomial_of_dilatation(tm)
        assert coh.dim_h1 == 2 > 1 == pisot.degree
        assert not coh.is_homological_pisot
        verdict = check_cr_divides_norm(tm)
        assert verdict.status == "not_applicable"
        assert any("vacuous" in note for note in verdict.notes)
        from pisotsub.measure import letter_measures, rationality_divisibility_check

        for m in letter_measures(tm):
            assert m.rational == Fraction(1, 2)
            rep = rationality_divisibility_check(m, pisot)
            assert rep.applicable and rep.prime_gcd_pass

    report(5, "Thue-Morse: cr = 2, dim H^1 = 2 > d = 1, not homological Pisot, "
              "cr != 2 check vacuous, letter measures exactly 1/2 with "
              "divisibility PASS", body)


def test_criterion_6_equal_measure_partition(ninefold_cover):
    def body():
        pisot = minimal_polynomial_of_dilatation(ninefold_cover)
        witness = measure_fraction_witness(ninefold_cover)
        assert witness.cr == 3
        assert len(witness.sets) == 3
        assert all(m == Fraction(1, 3) for m in witness.measures)
        assert not witness.out_of_hypothesis
        # denominator 3 divides d * a0^k = 1 * 9^k
        for m in witness.measures:
            den = m.denominator
            assert in_Z_one_over_a0(Fraction(1, den), pisot.a0 * pisot.degree)

    report(6, "ninefold cover: 3 letter sets of exact total measure 1/3 each, "
              "denominator divides d * a0^k", body)


def _homological_pisot_members():
    out = []
    for path in sorted(CORPUS_DIR.glob("*.json")):
        s = load_corpus(path.stem)
        if cech_h1_dimension(s).is_homological_pisot:
            out.append((path.stem, s))
    return out


def test_criterion_7a_erp_property_suite():
    def body():
        members = _homological_pisot_members()
        assert len(members) == 8
        for name, s in members:
            patch_count = s.size + sum(
                1 for w in language(s, 3) if len(w) in (2, 3)
            )
            rep = verify_erp(s, num_patches=patch_count, sample_len=10**4)
            assert len(rep.fits) == patch_count
            assert not rep.flag, f"exact-regularity flag on {name}"
            assert rep.verified, f"exact-regularity not verified on {name}"
            a0 = minimal_polynomial_of_dilatation(s).a0
            for fit in rep.fits:
                assert fit.residual_zero
                assert all(in_Z_one_over_a0(a, a0) for a in fit.alphas)

    report("7a", "ERP exact with coefficients in Z[1/a0] for every homological "
                 "Pisot corpus member over all allowed patches of length <= 3", body)


def test_criterion_7b_semigroup_vs_brute_force():
    def body():
        names = ["thue_morse", "period_doubling", "ninefold_base", "ninefold_cover"]
        for name in names:
            s = load_corpus(name)
            assert s.is_constant_length()
            semigroup_cr = coincidence_rank(s).cr
            brute = s.size
            for n in range(1, 5):
                images = [iterate(s, a, n, cap=10**7) for a in range(s.size)]
                for k in range(len(images[0])):
                    brute = min(brute, len({img[k] for img in images}))
            assert semigroup_cr == brute, name

    report("7b", "column-semigroup cr equals brute force over powers <= 4 on "
                 "all constant-length corpus members", body)


def test_criterion_7c_pisot_oracle():
    def body():
        from test_algebra import random_pisot_candidates

        candidates = random_pisot_candidates(count=50, seed=20240601)
        assert len(candidates) == 50
        for f, oracle in candidates:
            flag, bound = pisot_check(f)
            assert flag == oracle, f"disagreement on {f!r}"
            if flag and f.degree > 1:
                assert Fraction(0) < bound < 1

    report("7c", "exact Pisot verdicts agree with a 200-digit numeric oracle on "
                 "50 seeded random integer polynomials of degree <= 6", body)


def test_criterion_7d_dimension_lower_bound():
    def body():
        for path in sorted(CORPUS_DIR.glob("*.json")):
            s = load_corpus(path.stem)
            pisot = minimal_polynomial_of_dilatation(s)
            if pisot.is_pisot:
                assert cech_h1_dimension(s).dim_h1 >= pisot.degree, path.stem

    report("7d", "dim H^1 >= d for every primitive Pisot corpus member", body)


def test_criterion_7e_three_conditions_characterization():
    def body():
        for path in sorted(CORPUS_DIR.glob("*.json")):
            s = load_corpus(path.stem)
            r = cech_h1_dimension(s)
            assert (r.dim_h1 == r.degree) == all(r.three_conditions), path.stem

    report("7e", "dimension formula agrees with the three-condition "
                 "characterization on every corpus member", body)


def test_criterion_7f_companion_postconditions():
    def body():
        seen = set()
        for path in sorted(CORPUS_DIR.glob("*.json")):
            field = minimal_polynomial_of_dilatation(load_corpus(path.stem)).field
            if field.min_poly in seen:
                continue
            seen.add(field.min_poly)
            r = companion_limit_vector(field)  # postconditions asserted inside
            c = companion_matrix(field)
            lam = field.generator()
            total = field.zero()
            for i in range(field.degree):
                lhs = field.zero()
                for j in range(field.degree):
                    if c[i][j]:
                        lhs = lhs + r[j] * c[i][j]
                assert lhs == lam * r[i]
                total = total + lam ** i * r[i]
            assert total == field.one()
        assert len(seen) >= 6

    report("7f", "companion limit vector is a lambda eigenvector with unit "
                 "normalization, exactly, for every corpus field", body)


def test_criterion_8_determinism(tmp_path, capsys):
    def body():
        out_a, out_b = tmp_path / "runA", tmp_path / "runB"
        assert main(["corpus", "--out", str(out_a)]) == 0
        assert main(["corpus", "--out", str(out_b)]) == 0
        capsys.readouterr()
        files_a = sorted(p.name for p in out_a.iterdir())
        files_b = sorted(p.name for p in out_b.iterdir())
        assert files_a == files_b and len(files_a) == 12  # 11 reports + summary.csv
        for name in files_a:
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes(), name

    report(8, "repeated corpus runs produce byte-identical JSON reports and "
              "summary", body)
