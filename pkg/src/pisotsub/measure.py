"""Exact patch frequencies and cylinder-set measures in Q(lambda).

A patch's cylinder set (tilings whose origin lies inside an occurrence) is
decomposed over collared words: windows of length 2|p|+1 whose center tile is
covered by an occurrence of the patch.  Frequencies come from the exact right
Perron eigenvector of the collared occurrence matrix, so every measure is an
exact field element, put into the canonical shape
q(lambda) / (a0^k * p'(lambda)) with integer q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .algebra import (
    FieldElement,
    IntPolynomial,
    NumberField,
    in_Z_one_over_a0,
    kernel_basis,
    minimal_polynomial_of_dilatation,
    p_prime_at_lambda,
)
from .coincidence import pure_core
from .core import Substitution, is_primitive, language
from .errors import ContradictionFlag, LatticeHypothesisError, PreconditionError
from .regularity import TileGeometry, tile_geometry

CANONICAL_K_CAP = 64


# ---------------------------------------------------------------------------
# companion limit vector
# ---------------------------------------------------------------------------

def companion_matrix(field: NumberField):
    """d x d integer companion matrix acting on power-basis coordinate columns."""
    d = field.degree
    a = field.min_poly.coeffs
    m = [[0] * d for _ in range(d)]
    for i in range(1, d):
        m[i][i - 1] = 1
    for i in range(d):
        m[i][d - 1] = -a[i]
    return tuple(tuple(row) for row in m)


def companion_limit_vector(field: NumberField) -> tuple:
    """Normalized limit direction of coordinate vectors of growing powers.

    Entry i is (a_{i+1} + a_{i+2} lambda + ... + a_d lambda^{d-1-i}) / p'(lambda)
    with a_d = 1.  Both postconditions are asserted exactly: it is a lambda
    eigenvector of the companion matrix and (1, lambda, ...) . r = 1.
    """
    d = field.degree
    a = list(field.min_poly.coeffs)  # a[0..d], a[d] = 1
    pprime = p_prime_at_lambda(field)
    lam = field.generator()
    entries = []
    for i in range(d):
        e = field.zero()
        for j in range(i + 1, d + 1):
            e = e + field.rational(a[j]) * lam ** (j - i - 1)
        entries.append(e / pprime)
    c = companion_matrix(field)
    for i in range(d):
        lhs = field.zero()
        for j in range(d):
            if c[i][j]:
                lhs = lhs + entries[j] * c[i][j]
        if lhs != lam * entries[i]:
            raise ContradictionFlag("companion limit vector is not a lambda eigenvector")
    total = field.zero()
    for i in range(d):
        total = total + lam ** i * entries[i]
    if total != field.one():
        raise ContradictionFlag("companion limit vector normalization failed")
    return tuple(entries)


# ---------------------------------------------------------------------------
# collaring
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CollaredSubstitution:
    base: Substitution
    ell: int
    letters: tuple    # allowed ell-words, sorted
    rules: tuple      # rules[i] = tuple of collared letter indices
    matrix: tuple     # occurrence counts, matrix[v][w] = count of v in rule of w


@lru_cache(maxsize=None)
def collar(s: Substitution, ell: int) -> CollaredSubstitution:
    """Substitution induced on allowed ell-words.

    The image of the window w reads off the |rule(w_1)| consecutive ell-windows
    of the image of w anchored inside the image of its first letter.
    """
    if ell < 1:
        raise PreconditionError("collaring width must be >= 1")
    flag, _ = is_primitive(s)
    if not flag:
        raise PreconditionError("collaring requires a primitive substitution")
    letters = tuple(sorted(w for w in language(s, ell) if len(w) == ell))
    index = {w: i for i, w in enumerate(letters)}
    rules = []
    for w in letters:
        image = s.apply(w)
        span = len(s.rules[w[0]])
        windows = []
        for t in range(span):
            window = image[t:t + ell]
            if len(window) != ell:
                raise ContradictionFlag("collared window fell off the image")
            if window not in index:
                raise ContradictionFlag(f"collared window {window!r} is not an allowed word")
            windows.append(index[window])
        rules.append(tuple(windows))
    n = len(letters)
    matrix = [[0] * n for _ in range(n)]
    for j, rule in enumerate(rules):
        for v in rule:
            matrix[v][j] += 1
    return CollaredSubstitution(
        base=s, ell=ell, letters=letters, rules=tuple(rules),
        matrix=tuple(tuple(row) for row in matrix),
    )


@dataclass(frozen=True)
class FrequencyVector:
    """Occurrences per unit length of each collared word, exact."""

    collared: CollaredSubstitution
    freq: tuple  # FieldElement per collared letter

    def of_word(self, w) -> FieldElement:
        return self.freq[self.collared.letters.index(tuple(w))]


@lru_cache(maxsize=None)
def frequencies(c: CollaredSubstitution, geometry: TileGeometry) -> FrequencyVector:
    """Exact right lambda-eigenvector of the collared matrix, normalized so
    sum over words of freq(w) * length(first letter of w) = 1."""
    field = geometry.field
    lam = field.generator()
    n = len(c.letters)
    rows = [
        [field.rational(c.matrix[i][j]) - (lam if i == j else field.zero()) for j in range(n)]
        for i in range(n)
    ]
    basis = kernel_basis(rows, field.zero(), field.one())
    if len(basis) != 1:
        raise PreconditionError(
            f"lambda eigenspace of the collared matrix has dimension {len(basis)}, not 1"
        )
    vec = basis[0]
    signs = [v.sign() for v in vec]
    if all(x < 0 for x in signs):
        vec = [-v for v in vec]
    elif not all(x > 0 for x in signs):
        raise ContradictionFlag("collared frequency vector must be strictly positive")
    total = field.zero()
    for w, v in zip(c.letters, vec):
        total = total + v * geometry.lengths[w[0]]
    vec = [v / total for v in vec]
    return FrequencyVector(collared=c, freq=tuple(vec))


# ---------------------------------------------------------------------------
# cylinder measures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CylinderMeasure:
    patch: tuple
    value: FieldElement
    q: IntPolynomial | None   # integer numerator polynomial, None when unavailable
    k: int | None             # minimal a0 exponent
    rational: object          # Fraction when the value is rational, else None
    canonical_note: str = ""

    @property
    def has_canonical_form(self) -> bool:
        return self.q is not None

    def canonical_ok(self, field: NumberField, a0: int) -> bool:
        if self.q is None:
            return False
        lhs = field.from_poly(self.q)
        rhs = self.value * p_prime_at_lambda(field) * (Fraction(a0) ** self.k)
        return lhs == rhs


def lattice_hypothesis_holds(s: Substitution) -> bool:
    """Tile lattice equals return lattice: automatic for constant-length
    substitutions of height one (pure cores)."""
    if not s.is_constant_length():
        return False
    return pure_core(s).height == 1


def _canonical_form(value: FieldElement, field: NumberField, a0: int):
    u = value * p_prime_at_lambda(field)
    k = 0
    for coord in u.coords:
        den = coord.denominator
        if den == 1:
            continue
        if not in_Z_one_over_a0(Fraction(1, den), a0):
            raise ContradictionFlag(
                "measure denominator has a prime not dividing a0; "
                "this contradicts the canonical-form statement"
            )
        kk = 0
        acc = 1
        while acc % den != 0:  # smallest kk with den | a0^kk
            acc *= abs(a0)
            kk += 1
            if kk > CANONICAL_K_CAP:
                raise ContradictionFlag("canonical exponent exceeded the cap")
        k = max(k, kk)
    scaled = u * (Fraction(a0) ** k)
    coeffs = []
    for coord in scaled.coords:
        if coord.denominator != 1:
            raise ContradictionFlag("canonical numerator failed to be integral")
        coeffs.append(int(coord))
    return IntPolynomial(tuple(coeffs)), k


@lru_cache(maxsize=None)
def cylinder_measure(s: Substitution, patch: tuple,
                     assert_lattices_equal: bool = False) -> CylinderMeasure:
    """Exact measure of the cylinder set of a patch.

    Decomposition: mu(S_P) = sum over allowed (2|p|+1)-windows Q whose center
    tile lies inside an occurrence of P of freq(Q) * length(center of Q).
    Requires the tile lattice to equal the return lattice; that holds
    automatically for constant-length height-one inputs and must be asserted
    explicitly otherwise.
    """
    patch = tuple(patch)
    pisot = minimal_polynomial_of_dilatation(s)
    if not pisot.is_pisot:
        raise PreconditionError("cylinder measures require a Pisot dilatation")
    if patch not in language(s, len(patch)):
        raise PreconditionError(f"patch {patch!r} is not an allowed word")
    if not assert_lattices_equal and not lattice_hypothesis_holds(s):
        raise LatticeHypothesisError(
            "tile lattice = return lattice not established; pass assert_lattices_equal=True "
            "to assert it for this input"
        )
    el = len(patch)
    c = collar(s, 2 * el + 1)
    geometry = tile_geometry(s)
    fv = frequencies(c, geometry)
    field = geometry.field
    value = field.zero()
    for w, f in zip(c.letters, fv.freq):
        if any(w[st:st + el] == patch for st in range(1, el + 1)):
            value = value + f * geometry.lengths[w[el]]
    if value.sign() <= 0 or (field.one() - value).sign() <= 0:
        raise ContradictionFlag("cylinder measure of a proper patch must lie strictly in (0, 1)")
    note = ""
    try:
        q, k = _canonical_form(value, field, pisot.a0)
    except ContradictionFlag:
        # the canonical shape is guaranteed only for homological Pisot inputs;
        # elsewhere its failure is a finding, not a contradiction
        from .cohomology import is_homological_pisot

        hom, _, _ = is_homological_pisot(s)
        if hom:
            raise
        q, k = None, None
        note = "canonical form unavailable (input is not homological Pisot)"
    measure = CylinderMeasure(
        patch=patch, value=value, q=q, k=k, rational=value.as_fraction(),
        canonical_note=note,
    )
    if measure.has_canonical_form and not measure.canonical_ok(field, pisot.a0):
        raise ContradictionFlag("canonical form failed exact reconstruction")
    return measure


def letter_measures(s: Substitution, assert_lattices_equal: bool = False) -> tuple:
    return tuple(
        cylinder_measure(s, (a,), assert_lattices_equal) for a in range(s.size)
    )


# ---------------------------------------------------------------------------
# divisibility verdicts for rational measures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DivisibilityReport:
    applicable: bool
    denominator: int | None
    prime_gcd_pass: bool | None     # m | a0^k * gcd(p' coefficients)
    degree_form_pass: bool | None   # m | d * a0^k
    notes: tuple


def rationality_divisibility_check(m: CylinderMeasure, pisot) -> DivisibilityReport:
    """For rational measures n/m: m must divide a0^k gcd(p'(lambda)) and d a0^k."""
    if m.rational is None:
        return DivisibilityReport(
            applicable=False, denominator=None, prime_gcd_pass=None,
            degree_form_pass=None, notes=("measure is irrational; not applicable",),
        )
    den = m.rational.denominator
    pprime = pisot.min_poly.derivative()
    g = pprime.content()
    first = in_Z_one_over_a0(Fraction(1, den // gcd(den, g)), pisot.a0)
    second = in_Z_one_over_a0(Fraction(1, den // gcd(den, pisot.degree)), pisot.a0)
    notes = (
        f"denominator {den}; gcd of derivative coefficients {g}; degree {pisot.degree}; "
        f"a0 {pisot.a0}",
    )
    return DivisibilityReport(
        applicable=True,
        denominator=den,
        prime_gcd_pass=first,
        degree_form_pass=second,
        notes=notes,
    )
