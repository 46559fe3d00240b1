import json
import random

import pytest

from pisotsub.algebra import char_poly, factor_over_integers, rank_rational
from pisotsub.core import abelianization, language
from pisotsub.cover import (
    CoverSpec,
    PermutationAssignment,
    build_triple_cover,
    cover_from_matrix,
    lift_word,
    make_padding,
    parse_cover_spec,
    serialize_cover_result,
    standard_assignment,
    validate_cover,
)
from pisotsub.errors import PreconditionError, ValidationError

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


@pytest.fixture(scope="module")
def ninefold_spec(ninefold_base):
    return CoverSpec(ninefold_base, standard_assignment(ninefold_base))


class TestLiftWord:
    def test_ab_from_one(self, ninefold_base, ninefold_spec):
        lifted = lift_word(ninefold_base, (0, 1), 1, ninefold_spec.assignment)
        assert lifted == ((0, 1), (1, 2))  # a1 b2

    def test_aa_from_two(self, ninefold_base, ninefold_spec):
        lifted = lift_word(ninefold_base, (0, 0), 2, ninefold_spec.assignment)
        assert lifted == ((0, 2), (0, 2))  # a2 a2

    def test_single_letter(self, ninefold_base, ninefold_spec):
        assert lift_word(ninefold_base, (1,), 3, ninefold_spec.assignment) == ((1, 3),)

    def test_missing_assignment(self, ninefold_base):
        partial = PermutationAssignment((((0, 0), (3, 2, 1)),))
        with pytest.raises(PreconditionError):
            lift_word(ninefold_base, (0, 1), 1, partial)


class TestBuildCover:
    def test_reproduces_printed_rules(self, ninefold_spec, ninefold_cover):
        result = build_triple_cover(ninefold_spec)
        assert result.cover == ninefold_cover
        assert abelianization(result.cover) == PRINTED_NINEFOLD_COVER_MATRIX

    def test_quadratic_cover_matrix(self, quadratic_base, quadratic_cover):
        spec = CoverSpec(quadratic_base, standard_assignment(quadratic_base))
        result = build_triple_cover(spec)
        assert result.cover == quadratic_cover
        assert abelianization(result.cover) == PRINTED_QUADRATIC_COVER_MATRIX

    def test_cubic_cover_builds(self, cubic_base, cubic_cover):
        spec = CoverSpec(cubic_base, standard_assignment(cubic_base))
        result = build_triple_cover(spec)
        assert result.cover == cubic_cover
        assert result.cover.size == 9

    def test_corrupted_assignment_raises_in_strict_mode(self, ninefold_base):
        sigma = dict(standard_assignment(ninefold_base).sigma)
        sigma[(0, 1)] = (1, 2, 3)  # identity instead of the 1<->2 swap into B
        spec = CoverSpec(ninefold_base, PermutationAssignment(tuple(sorted(sigma.items()))))
        with pytest.raises(PreconditionError):
            build_triple_cover(spec)

    def test_corrupted_assignment_recorded_non_strict(self, ninefold_base):
        sigma = dict(standard_assignment(ninefold_base).sigma)
        sigma[(0, 1)] = (1, 2, 3)
        spec = CoverSpec(ninefold_base, PermutationAssignment(tuple(sorted(sigma.items()))))
        result = validate_cover(build_triple_cover(spec, strict=False))
        v = result.validation
        assert not v.prefix_suffix_ok
        assert v.failing_rule is not None
        assert not v.all_passed

    def test_non_bijection_rejected(self):
        with pytest.raises(ValidationError):
            PermutationAssignment((((0, 0), (1, 1, 3)),))


class TestValidation:
    def test_ninefold_all_checks(self, ninefold_spec):
        result = validate_cover(build_triple_cover(ninefold_spec))
        v = result.validation
        assert v.prefix_suffix_ok and v.disjoint_ok
        assert v.cohomology_ok and v.er_components == 3
        assert v.cr_mode == "exact" and v.cr_value == 3
        assert v.all_passed

    def test_quadratic_checks(self, quadratic_base):
        spec = CoverSpec(quadratic_base, standard_assignment(quadratic_base))
        result = validate_cover(build_triple_cover(spec))
        v = result.validation
        assert v.prefix_suffix_ok and v.disjoint_ok and v.cohomology_ok
        assert v.dim_base == v.dim_cover == 2
        assert v.cr_mode == "lower_bound"
        assert "cr >= 3" in v.cr_note
        assert v.all_passed

    def test_lift_cocycle(self, ninefold_base, ninefold_spec):
        # substituting a lifted word is the lift of the substituted word
        result = build_triple_cover(ninefold_spec)
        cover = result.cover
        rng = random.Random(20240601)
        allowed = sorted(w for w in language(ninefold_base, 8) if len(w) <= 8)
        for w in rng.sample(allowed, min(12, len(allowed))):
            for start in (1, 2, 3):
                lifted = lift_word(ninefold_base, w, start, ninefold_spec.assignment)
                as_cover = tuple(3 * x + (i - 1) for x, i in lifted)
                image_of_lift = cover.apply(as_cover)
                base_image = ninefold_base.apply(w)
                lifted_image = lift_word(
                    ninefold_base, base_image, start, ninefold_spec.assignment
                )
                assert image_of_lift == tuple(3 * x + (i - 1) for x, i in lifted_image)


class TestPadding:
    def test_block_with_spectator(self, cubic_base):
        word = make_padding(cubic_base, (2,), (2,), (2,), 1, 3)
        names = [cubic_base.alphabet[x] for x in word]
        assert "".join(names) == "CBCAAAC" * 3

    def test_bare_block(self, cubic_base):
        word = make_padding(cubic_base, (), (), (), 1, 3)
        assert "".join(cubic_base.alphabet[x] for x in word) == "BAAA" * 3

    def test_even_counts_rejected(self, cubic_base):
        with pytest.raises(PreconditionError):
            make_padding(cubic_base, (), (), (), 2, 3)

    def test_designated_letters_forbidden_in_vwy(self, cubic_base):
        with pytest.raises(PreconditionError):
            make_padding(cubic_base, (0,), (), (), 1, 1)


class TestCoverFromMatrix:
    def test_degenerate_single_letter(self):
        base, result = cover_from_matrix([[1]], 1)
        assert base.rules == ((0, 0, 0),)
        assert result.cover.size == 3

    def test_fibonacci_seed_reproduces_quadratic_base(self, quadratic_base):
        base, result = cover_from_matrix([[1, 1], [1, 0]], 3)
        assert base == quadratic_base
        assert abelianization(result.cover) == PRINTED_QUADRATIC_COVER_MATRIX

    def test_auto_power_search(self):
        base, _ = cover_from_matrix([[1, 1], [1, 0]])
        assert abelianization(base) == ((9, 6), (6, 3))  # k = 3 is minimal

    def test_tribonacci_seed(self, cubic_base):
        base, result = cover_from_matrix([[1, 1, 1], [1, 0, 0], [0, 1, 0]], 4)
        assert abelianization(base) == abelianization(cubic_base)
        v = result.validation
        assert v.prefix_suffix_ok and v.disjoint_ok and v.cohomology_ok
        assert v.dim_cover == 3

    def test_eigenvalue_containment_and_rank_bound(self):
        base, result = cover_from_matrix([[1, 1], [1, 0]], 3)
        m1 = abelianization(base)
        m2 = abelianization(result.cover)
        d = len(m1)
        assert rank_rational(m2) <= d + 2
        cp2 = char_poly(m2)
        for f, _ in factor_over_integers(char_poly(m1)).factors:
            assert f.divides(cp2)

    def test_even_determinant_rejected(self):
        with pytest.raises(PreconditionError):
            cover_from_matrix([[2, 2], [1, 2]], 1)  # determinant 2

    def test_invalid_power_rejected(self):
        with pytest.raises(PreconditionError):
            cover_from_matrix([[1, 1], [1, 0]], 1)  # M0^1 is not I mod 2


class TestSpecDocuments:
    def test_round_trip(self, ninefold_base, ninefold_spec):
        result = validate_cover(build_triple_cover(ninefold_spec))
        doc = serialize_cover_result(result)
        reparsed = parse_cover_spec({"base": doc["base"], "permutations": doc["permutations"]})
        assert reparsed.base == ninefold_base
        rebuilt = build_triple_cover(reparsed)
        assert rebuilt.cover == result.cover

    def test_missing_transition_rejected(self, ninefold_base):
        doc = {
            "base": {"alphabet": ["A", "B"], "rules": {"A": "ABABAAABA", "B": "BAAABAABA"}},
            "permutations": {"AA": [3, 2, 1], "AB": [2, 1, 3]},  # BA missing
        }
        with pytest.raises(ValidationError):
            parse_cover_spec(json.dumps(doc))
