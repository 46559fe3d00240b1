"""Exact arithmetic: integer polynomials, factorization, Pisot certification,
and linear algebra over the real number field generated by the dilatation.

Every decision made here is exact.  Floating point (mpmath) appears only to
*propose* candidates (root clusters, modulus bounds); every proposal is then
verified with integer or rational arithmetic before it is believed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .core import Substitution, abelianization, is_primitive
from .errors import PreconditionError, PrecisionError

#: Graeffe iterations tried before declaring a root-location question indeterminate.
GRAEFFE_CAP = 24

#: Bit-size guard on Graeffe iterates (coefficients grow doubly exponentially).
GRAEFFE_BIT_CAP = 4_000_000


# ---------------------------------------------------------------------------
# integer polynomials
# ---------------------------------------------------------------------------

def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients lowest degree first, no trailing zeros."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # zero polynomial gets degree -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return self.leading() == 1

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return IntPolynomial(tuple(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
        ))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial(tuple(c * other for c in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPolynomial(())
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def evaluate(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i >= 1))

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, abs(c))
        return g

    def primitive(self) -> "IntPolynomial":
        """Content removed, leading coefficient made positive."""
        g = self.content()
        if g == 0:
            return self
        sign = 1 if self.leading() > 0 else -1
        return IntPolynomial(tuple(sign * c // g for c in self.coeffs))

    def reversed(self) -> "IntPolynomial":
        return IntPolynomial(tuple(reversed(self.coeffs)))

    def shift_up(self, k: int) -> "IntPolynomial":
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return IntPolynomial((0,) * k + self.coeffs)

    def divides(self, other: "IntPolynomial") -> bool:
        if self.is_zero():
            return other.is_zero()
        q, r = _poly_divmod_q(_to_q(other), _to_q(self))
        return not r and all(c.denominator == 1 for c in q)

    def exact_div(self, other: "IntPolynomial") -> "IntPolynomial":
        q, r = _poly_divmod_q(_to_q(self), _to_q(other))
        if r or any(c.denominator != 1 for c in q):
            raise PreconditionError("polynomial division is not exact")
        return IntPolynomial(tuple(int(c) for c in q))

    def __repr__(self):
        if self.is_zero():
            return "IntPolynomial(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                var = "x" if i == 1 else f"x^{i}"
                if c == 1:
                    terms.append(var)
                elif c == -1:
                    terms.append(f"-{var}")
                else:
                    terms.append(f"{c}*{var}")
        return "IntPolynomial(" + " + ".join(reversed(terms)).replace("+ -", "- ") + ")"


def poly_from_coeffs(*coeffs) -> IntPolynomial:
    return IntPolynomial(tuple(coeffs))


X = IntPolynomial((0, 1))
ONE_POLY = IntPolynomial((1,))


# rational coefficient vectors (lowest first) used internally

def _to_q(p: IntPolynomial):
    return [Fraction(c) for c in p.coeffs]


def _q_strip(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod_q(num, den):
    """Polynomial division over the rationals on coefficient lists."""
    num = [Fraction(c) for c in num]
    den = _q_strip([Fraction(c) for c in den])
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(num) - len(den) + 1)
    r = _q_strip(num)
    dlead = den[-1]
    while len(r) >= len(den):
        shift = len(r) - len(den)
        factor = r[-1] / dlead
        q[shift] = factor
        for i, dc in enumerate(den):
            r[shift + i] -= factor * dc
        r = _q_strip(r)
    return q, r


def _poly_mul_q(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def _poly_sub_q(a, b):
    n = max(len(a), len(b))
    return _q_strip([
        (a[i] if i < len(a) else Fraction(0)) - (b[i] if i < len(b) else Fraction(0))
        for i in range(n)
    ])


def _poly_gcd_q(a, b):
    """Monic gcd over the rationals on coefficient lists."""
    a = _q_strip([Fraction(c) for c in a])
    b = _q_strip([Fraction(c) for c in b])
    while b:
        _, r = _poly_divmod_q(a, b)
        a, b = b, r
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _q_to_primitive_int(coeffs) -> IntPolynomial:
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    return IntPolynomial(tuple(int(c * den) for c in coeffs)).primitive()


def poly_gcd(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    """Primitive integer gcd (positive leading coefficient)."""
    g = _poly_gcd_q(_to_q(p), _to_q(q))
    if not g:
        return IntPolynomial(())
    return _q_to_primitive_int(g)


def _derivative_q(a):
    return [i * c for i, c in enumerate(a)][1:]


# ---------------------------------------------------------------------------
# characteristic polynomial (Faddeev-LeVerrier)
# ---------------------------------------------------------------------------

def _mat_mul_frac(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def mat_mul_int(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def mat_pow_int(a, e: int):
    n = len(a)
    result = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    base = tuple(tuple(row) for row in a)
    while e:
        if e & 1:
            result = mat_mul_int(result, base)
        base = mat_mul_int(base, base)
        e >>= 1
    return result


def char_poly(matrix) -> IntPolynomial:
    """Exact characteristic polynomial det(xI - A) of a square integer matrix."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise PreconditionError("characteristic polynomial requires a square matrix")
    a = [[Fraction(x) for x in row] for row in matrix]
    m = [[Fraction(0)] * n for _ in range(n)]
    coeffs = [Fraction(1)]  # coefficient of x^n
    for k in range(1, n + 1):
        for i in range(n):
            m[i][i] += coeffs[-1]
        m = _mat_mul_frac(a, m)
        trace = sum(m[i][i] for i in range(n))
        coeffs.append(-trace / k)
    ints = []
    for c in coeffs:
        if c.denominator != 1:
            raise PrecisionError("characteristic polynomial of an integer matrix must be integral")
        ints.append(int(c))
    return IntPolynomial(tuple(reversed(ints)))


def rank_rational(matrix) -> int:
    """Rank over the rationals, fraction-exact Gaussian elimination."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [x / pv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# factorization over the integers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    """content * prod(factor^multiplicity) reconstructs the input exactly."""

    content: int
    factors: tuple  # tuple[(IntPolynomial, int), ...] sorted by (degree, coeffs)

    def reconstruct(self) -> IntPolynomial:
        out = IntPolynomial((self.content,))
        for f, m in self.factors:
            for _ in range(m):
                out = out * f
        return out

    def multiplicity(self, f: IntPolynomial) -> int:
        for g, m in self.factors:
            if g == f:
                return m
        return 0

    def rational_roots(self):
        """Rational roots with multiplicity, sorted."""
        roots = []
        for f, m in self.factors:
            if f.degree == 1:
                c0, c1 = f.coeffs
                roots.extend([Fraction(-c0, c1)] * m)
        return sorted(roots)


def _squarefree_decomposition_q(a):
    """Yun's algorithm on a rational coefficient list; yields (factor, multiplicity)."""
    da = _derivative_q(a)
    g = _poly_gcd_q(a, da)
    if len(g) <= 1:
        yield a, 1
        return
    c, _ = _poly_divmod_q(a, g)
    d = _poly_sub_q(_poly_divmod_q(da, g)[0], _derivative_q(c))
    i = 1
    while len(_q_strip(list(c))) > 1:
        p = _poly_gcd_q(c, d)
        if len(p) > 1:
            yield p, i
        c, _ = _poly_divmod_q(c, p)
        d = _poly_sub_q(_poly_divmod_q(d, p)[0], _derivative_q(c))
        i += 1


def _mp_roots(coeffs, dps):
    import mpmath

    with mpmath.workdps(dps):
        return mpmath.polyroots(
            [mpmath.mpf(int(c)) for c in reversed(coeffs)], maxsteps=400, extraprec=120
        )


def _round_candidate(zs, dps):
    """Monic integer polynomial with the given numeric roots, or None when the
    product is not close to integral."""
    import mpmath

    with mpmath.workdps(dps):
        coeffs = [mpmath.mpc(1)]  # highest degree first while building
        for z in zs:
            nxt = [mpmath.mpc(0)] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                nxt[i] += c
                nxt[i + 1] -= c * z
            coeffs = nxt
        out = []
        for c in reversed(coeffs):  # lowest degree first
            re = mpmath.re(c)
            n = int(mpmath.nint(re))
            if abs(re - n) > mpmath.mpf("0.3") or abs(mpmath.im(c)) > mpmath.mpf("0.3"):
                return None
            out.append(n)
    return IntPolynomial(tuple(out))


def _degree_subsets(items, total):
    """Subsets of (degree, roots) items with degree sum == total, deterministic order."""
    n = len(items)
    for r in range(1, min(n, total) + 1):
        for combo in itertools.combinations(range(n), r):
            if sum(items[i][0] for i in combo) == total:
                yield list(combo)


def _factor_squarefree_monic(p: IntPolynomial) -> list:
    """Irreducible factors of a squarefree monic integer polynomial.

    Numeric roots are clustered into real roots and conjugate pairs; subsets
    of increasing degree are rounded to integer candidates and kept only when
    exact division succeeds, so an inaccurate root can never introduce a wrong
    factor, only hide a split (which more precision prevents: precision scales
    with degree and coefficient size).
    """
    import mpmath

    d = p.degree
    if d <= 1:
        return [p]
    digits = max(len(str(abs(c))) for c in p.coeffs)
    dps = 40 + 6 * d + 2 * digits
    roots = None
    for attempt in range(3):
        try:
            roots = _mp_roots(p.coeffs, dps)
            break
        except Exception:
            dps *= 2
    if roots is None:
        raise PrecisionError(f"numeric root finding failed for {p!r}")
    with mpmath.workdps(dps):
        tol = mpmath.mpf(10) ** (-dps // 3)
        reals = [r for r in roots if abs(mpmath.im(r)) < tol]
        complexes = [r for r in roots if mpmath.im(r) > tol]
        items = [(1, [mpmath.mpc(r)]) for r in reals]
        items += [(2, [r, mpmath.conj(r)]) for r in complexes]

    factors = []
    remaining = p
    while remaining.degree > 0:
        found = None
        for total in range(1, remaining.degree // 2 + 1):
            for combo in _degree_subsets(items, total):
                cand = _round_candidate([z for i in combo for z in items[i][1]], dps)
                if cand is not None and cand.divides(remaining):
                    found = (cand, combo)
                    break
            if found:
                break
        if found is None:
            factors.append(remaining)
            break
        cand, combo = found
        factors.append(cand)
        remaining = remaining.exact_div(cand)
        items = [item for i, item in enumerate(items) if i not in combo]
    return factors


def _factor_squarefree_part(part: IntPolynomial) -> list:
    """Irreducible factors of a primitive squarefree polynomial of degree >= 1."""
    if part.degree == 1:
        return [part]
    lc = part.leading()
    if lc == 1:
        return _factor_squarefree_monic(part)
    # monicize: substitute x -> x/lc and rescale, factor, map back
    d = part.degree
    monic = IntPolynomial(tuple(c * lc ** (d - 1 - i) for i, c in enumerate(part.coeffs)))
    out = []
    for f in _factor_squarefree_monic(monic):
        mapped = IntPolynomial(tuple(c * lc ** i for i, c in enumerate(f.coeffs)))
        out.append(mapped.primitive())
    return out


@lru_cache(maxsize=None)
def factor_over_integers(p: IntPolynomial) -> Factorization:
    """Complete factorization into irreducible integer polynomials.

    Pipeline: content and x^k split, Yun squarefree decomposition, then
    root-clustering with exact trial division on each squarefree part.
    The result is verified by exact reconstruction before being returned.
    """
    if p.is_zero():
        raise PreconditionError("cannot factor the zero polynomial")
    content = p.content() * (1 if p.leading() > 0 else -1)
    prim = p.primitive()
    factors = {}
    k = 0
    while prim.coeffs and prim.coeffs[0] == 0:
        prim = IntPolynomial(prim.coeffs[1:])
        k += 1
    if k:
        factors[X] = k
    if prim.degree > 0:
        for part_q, mult in _squarefree_decomposition_q(_to_q(prim)):
            part = _q_to_primitive_int(part_q)
            for irr in _factor_squarefree_part(part):
                factors[irr] = factors.get(irr, 0) + mult
    result = Factorization(
        content,
        tuple(sorted(factors.items(), key=lambda fm: (fm[0].degree, fm[0].coeffs))),
    )
    if result.reconstruct() != p:
        raise PrecisionError("factorization failed exact reconstruction")
    return result


# ---------------------------------------------------------------------------
# real root counting (Sturm) and Perron root isolation
# ---------------------------------------------------------------------------

def _sturm_chain(p: IntPolynomial):
    chain = [_to_q(p), _to_q(p.derivative())]
    while _q_strip(list(chain[-1])):
        _, r = _poly_divmod_q(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return [c for c in chain if _q_strip(list(c))]


def _eval_q(coeffs, x: Fraction):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _sign_variations(chain, x: Fraction):
    signs = []
    for coeffs in chain:
        v = _eval_q(coeffs, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: IntPolynomial, lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots of squarefree p in the half-open interval (lo, hi].

    Degree-one inputs are decided by direct comparison; for degree >= 2 the
    endpoints must not be roots (automatic for irreducible polynomials, which
    have no rational roots in degree >= 2).
    """
    if p.degree <= 0:
        return 0
    if p.degree == 1:
        c0, c1 = p.coeffs
        root = Fraction(-c0, c1)
        return 1 if lo < root <= hi else 0
    if p.evaluate(lo) == 0 or p.evaluate(hi) == 0:
        raise PreconditionError("Sturm endpoints must not be roots")
    chain = _sturm_chain(p)
    return _sign_variations(chain, lo) - _sign_variations(chain, hi)


def cauchy_root_bound(p: IntPolynomial) -> Fraction:
    lc = abs(p.leading())
    m = max((abs(c) for c in p.coeffs[:-1]), default=0)
    return Fraction(1) + Fraction(m, lc)


def isolate_largest_real_root(factors, upper: Fraction):
    """(factor containing it, lo, hi) for the largest real root of a product
    of distinct irreducible factors, by exact Sturm bisection.

    The returned interval contains exactly one root of the whole product.
    """
    factors = tuple(factors)
    lo, hi = Fraction(0), Fraction(upper)

    def total(a, b):
        return sum(count_real_roots(f, a, b) for f in factors)

    if total(lo, hi) == 0:
        raise PreconditionError("no real root in (0, upper]")
    for _ in range(100000):
        if total(lo, hi) == 1:
            for f in factors:
                if count_real_roots(f, lo, hi) == 1:
                    return f, lo, hi
        mid = (lo + hi) / 2
        if total(mid, hi) >= 1:
            lo = mid
        else:
            hi = mid
    raise PrecisionError("could not isolate the largest real root")


# ---------------------------------------------------------------------------
# Pisot certification
# ---------------------------------------------------------------------------

def graeffe_step(p: IntPolynomial) -> IntPolynomial:
    """Polynomial with the squares of the roots of p (up to normalization sign)."""
    e = IntPolynomial(p.coeffs[0::2])
    o = IntPolynomial(p.coeffs[1::2])
    out = e * e - (o * o).shift_up(1)
    if p.degree % 2 == 1:
        out = -out
    return out


def _dominance_outside_count(q: IntPolynomial):
    """Exact count of roots outside the closed unit disk when one coefficient
    dominates the sum of all others (Rouche on the unit circle); None otherwise."""
    d = q.degree
    total = sum(abs(c) for c in q.coeffs)
    for m in range(0, d + 1):
        c = abs(q.coeffs[d - m])
        if c > total - c:
            return m
    return None


def count_roots_outside_unit_disk(p: IntPolynomial) -> int:
    """Number of roots of modulus > 1, certified by Graeffe iteration plus
    coefficient dominance.  A successful certificate also proves that no root
    lies exactly on the unit circle; indeterminate cases raise PrecisionError."""
    q = p.primitive()
    for _ in range(GRAEFFE_CAP + 1):
        m = _dominance_outside_count(q)
        if m is not None:
            return m
        if sum(c.bit_length() for c in q.coeffs) > GRAEFFE_BIT_CAP:
            break
        q = graeffe_step(q)
    raise PrecisionError(
        "root location indeterminate: no coefficient dominance within the Graeffe cap "
        "(a root may lie on the boundary circle)"
    )


def _scaled_by_rational(p: IntPolynomial, b: Fraction) -> IntPolynomial:
    """Integer polynomial whose roots are those of p divided by b."""
    u, v = b.numerator, b.denominator
    d = p.degree
    return IntPolynomial(tuple(c * u ** i * v ** (d - i) for i, c in enumerate(p.coeffs)))


def certify_conjugate_bound(p: IntPolynomial) -> Fraction:
    """A certified rational b < 1 bounding the modulus of every non-dominant root.

    The candidate comes from numeric roots; the certificate is the exact
    outside-root count of the rescaled polynomial.
    """
    import mpmath

    if p.degree == 1:
        return Fraction(0)
    with mpmath.workdps(60):
        roots = _mp_roots(p.coeffs, 60)
        dominant = max(roots, key=lambda z: mpmath.re(z) if abs(mpmath.im(z)) < 1e-40 else mpmath.mpf(-10**9))
        mmax = max(abs(z) for z in roots if z is not dominant)
        b = Fraction(int(mpmath.floor(mmax * 256)) + 2, 256)
    for _ in range(12):
        if b >= 1:
            break
        try:
            if count_roots_outside_unit_disk(_scaled_by_rational(p, b)) == 1:
                return b
        except PrecisionError:
            pass
        b = (b + 1) / 2
    raise PrecisionError("could not certify a conjugate modulus bound below 1")


def pisot_check(p: IntPolynomial, isolating=None):
    """Exact Pisot test for a monic irreducible polynomial with a real root > 1.

    Returns (is_pisot, conjugate_modulus_bound); the bound is a certified
    rational < 1 when Pisot (0 in degree one), None otherwise.

    An irreducible polynomial with a root on the unit circle must equal plus
    or minus its own reversal, so that case is decided structurally (degree 2
    with p(1) < 0 is Pisot, larger degrees never are); all other inputs go
    through the Graeffe dominance count, which needs no circle-root caveat.
    """
    if not p.is_monic():
        raise PreconditionError("pisot_check requires a monic polynomial")
    d = p.degree
    if d < 1:
        raise PreconditionError("pisot_check requires positive degree")
    if d == 1:
        root = -p.coeffs[0]
        return (root > 1), (Fraction(0) if root > 1 else None)
    rev = p.reversed()
    if p == rev or p == -rev:
        if d == 2 and p.evaluate(1) < 0:
            lo = _refine_lower_bound_above_one(p, isolating)
            return True, Fraction(1) / lo
        return False, None
    outside = count_roots_outside_unit_disk(p)
    if outside == 1 and p.evaluate(1) < 0:
        return True, certify_conjugate_bound(p)
    return False, None


def _refine_lower_bound_above_one(p: IntPolynomial, isolating):
    """A rational lo with 1 < lo <= (largest real root of p)."""
    if isolating is None:
        _, lo, hi = isolate_largest_real_root((p,), cauchy_root_bound(p))
    else:
        lo, hi = isolating
    for _ in range(100000):
        if lo > 1:
            return lo
        mid = (lo + hi) / 2
        if count_real_roots(p, mid, hi) >= 1:
            lo = mid
        else:
            hi = mid
    raise PrecisionError("largest real root does not exceed 1")


# ---------------------------------------------------------------------------
# the number field Q(lambda)
# ---------------------------------------------------------------------------

def _iv_add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _iv_mul(a, b):
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(products), max(products))


class NumberField:
    """Q(lambda) for the largest real root lambda of a monic irreducible
    polynomial, in the power basis 1, lambda, ..., lambda^(d-1).

    Carries an exact rational isolating interval for lambda, refinable to any
    width by bisection with exact sign evaluations.
    """

    def __init__(self, min_poly: IntPolynomial, lo, hi):
        if not min_poly.is_monic():
            raise PreconditionError("number field requires a monic minimal polynomial")
        self.min_poly = min_poly
        self.degree = min_poly.degree
        self._lo = Fraction(lo)
        self._hi = Fraction(hi)
        if self.degree == 1:
            root = Fraction(-min_poly.coeffs[0])
            self._lo = self._hi = root
        self._reduction = self._build_reduction()

    def _build_reduction(self):
        """Power basis coordinates of lambda^d, ..., lambda^(2d-2)."""
        d = self.degree
        if d <= 1:
            return []
        rows = []
        current = [Fraction(-c) for c in self.min_poly.coeffs[:-1]]
        rows.append(tuple(current))
        for _ in range(d - 2):
            shifted = [Fraction(0)] + current[:-1]
            top = current[-1]
            current = [s + top * r for s, r in zip(shifted, rows[0])]
            rows.append(tuple(current))
        return rows

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.min_poly == other.min_poly

    def __hash__(self):
        return hash(self.min_poly)

    def __repr__(self):
        return f"NumberField({self.min_poly!r}, lam~{float(self._lo):.6f})"

    def interval(self, width=None):
        """Isolating interval for lambda, refined below `width` if given."""
        if width is not None and self._lo != self._hi:
            sign_lo = 1 if self.min_poly.evaluate(self._lo) > 0 else -1
            while self._hi - self._lo > width:
                mid = (self._lo + self._hi) / 2
                v = self.min_poly.evaluate(mid)
                if v == 0:
                    self._lo = self._hi = mid
                    break
                if (1 if v > 0 else -1) == sign_lo:
                    self._lo = mid
                else:
                    self._hi = mid
        return self._lo, self._hi

    # element constructors -------------------------------------------------
    def element(self, coords) -> "FieldElement":
        coords = list(coords)
        if len(coords) > self.degree:
            raise PreconditionError("too many coordinates for this field")
        coords += [0] * (self.degree - len(coords))
        return FieldElement(self, tuple(Fraction(c) for c in coords))

    def zero(self) -> "FieldElement":
        return self.element([])

    def one(self) -> "FieldElement":
        return self.element([1])

    def rational(self, q) -> "FieldElement":
        return self.element([Fraction(q)])

    def generator(self) -> "FieldElement":
        if self.degree == 1:
            return self.rational(-self.min_poly.coeffs[0])
        return self.element([0, 1])

    def from_poly(self, p: IntPolynomial) -> "FieldElement":
        """p(lambda) as a field element (Horner)."""
        acc = self.zero()
        gen = self.generator()
        for c in reversed(p.coeffs):
            acc = acc * gen + self.rational(c)
        return acc


def field_for_polynomial(p: IntPolynomial) -> NumberField:
    """NumberField for the largest real root of a monic irreducible p."""
    if p.degree == 1:
        return NumberField(p, Fraction(-p.coeffs[0]), Fraction(-p.coeffs[0]))
    _, lo, hi = isolate_largest_real_root((p,), cauchy_root_bound(p))
    return NumberField(p, lo, hi)


class FieldElement:
    """Element of a NumberField in power basis coordinates (exact rationals)."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: tuple):
        self.field = field
        self.coords = coords

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        if isinstance(other, FieldElement):
            if self.field != other.field:
                raise PreconditionError("field elements live in different fields")
            return other
        return None

    def __bool__(self):
        return any(c != 0 for c in self.coords)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.rational(other)
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coords == other.coords
        return NotImplemented

    def __hash__(self):
        return hash((self.field.min_poly, self.coords))

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(a * other for a in self.coords))
        if not isinstance(other, FieldElement):
            return NotImplemented
        if self.field != other.field:
            raise PreconditionError("field elements live in different fields")
        d = self.field.degree
        prod = [Fraction(0)] * (2 * d - 1) if d > 1 else [Fraction(0)]
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        prod[i + j] += a * b
        out = list(prod[:d])
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                red = self.field._reduction[k - d]
                for i in range(d):
                    out[i] += c * red[i]
        return FieldElement(self.field, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        """Multiplicative inverse via extended Euclid in Q[x] mod the minimal polynomial."""
        if not self:
            raise ZeroDivisionError("field element is zero")
        p = _to_q(self.field.min_poly)
        r0, r1 = p, _q_strip([Fraction(c) for c in self.coords])
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = _poly_divmod_q(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub_q(s0, _poly_mul_q(q, s1))
        const = r0[0] if len(r0) == 1 else None
        if const is None:
            raise PreconditionError("minimal polynomial is not irreducible")
        inv = [c / const for c in s0]
        _, rem = _poly_divmod_q(inv, p)
        return self.field.element(rem)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError
            return FieldElement(self.field, tuple(a / other for a in self.coords))
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.field.rational(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def as_fraction(self):
        """The element as a Fraction when rational, else None."""
        if all(c == 0 for c in self.coords[1:]):
            return self.coords[0]
        return None

    def interval(self, width=Fraction(1, 10**25)):
        """Enclosing rational interval via interval Horner at the root interval."""
        lam = self.field.interval(width)
        acc = (Fraction(0), Fraction(0))
        for c in reversed(self.coords):
            acc = _iv_add(_iv_mul(acc, lam), (c, c))
        return acc

    def sign(self) -> int:
        """Certified sign; zero only for the exact zero element."""
        if not self:
            return 0
        width = Fraction(1, 10**10)
        for _ in range(40):
            lo, hi = self.interval(width)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            width /= 10**5
        raise PrecisionError("could not certify the sign of a field element")

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                base = "lam" if i == 1 else f"lam^{i}"
                terms.append(f"{c}*{base}")
        return "<" + (" + ".join(terms) if terms else "0") + ">"


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Named arithmetic entry point: op in {add, sub, mul, div}."""
    ops = {
        "add": lambda: a + b,
        "sub": lambda: a - b,
        "mul": lambda: a * b,
        "div": lambda: a / b,
    }
    if op not in ops:
        raise PreconditionError(f"unknown op {op!r}")
    return ops[op]()


def p_prime_at_lambda(field: NumberField) -> FieldElement:
    """Derivative of the minimal polynomial evaluated at the root."""
    return field.from_poly(field.min_poly.derivative())


# ---------------------------------------------------------------------------
# generic exact linear algebra (Fraction or FieldElement entries)
# ---------------------------------------------------------------------------

def kernel_basis(rows, zero, one):
    """Right-kernel basis, deterministic pivoting (first nonzero in column order).

    Entries need +, -, *, / and truthiness; works for Fractions and for
    FieldElements alike.
    """
    rows = [list(r) for r in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if rows[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][col]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [zero] * ncols
        vec[fc] = one
        for i, pc in enumerate(pivots):
            vec[pc] = -rows[i][fc]
        basis.append(vec)
    return basis


def solve_exact(rows, rhs, zero):
    """Solve A x = b exactly; returns (solution or None, rank, consistent).

    Free variables are set to zero; consistent is False when no solution exists.
    """
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    nrows = len(aug)
    ncols = (len(aug[0]) - 1) if nrows else 0
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if aug[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        pv = aug[r][col]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(nrows):
            if i != r and aug[i][col]:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    for i in range(r, nrows):
        if aug[i][ncols]:
            return None, len(pivots), False
    sol = [zero] * ncols
    for i, pc in enumerate(pivots):
        sol[pc] = aug[i][ncols]
    return sol, len(pivots), True


def solve_kernel_over_field(rows) -> list:
    """Kernel basis for a matrix of FieldElements or Fractions."""
    if not rows or not rows[0]:
        return []
    sample = rows[0][0]
    if isinstance(sample, FieldElement):
        zero, one = sample.field.zero(), sample.field.one()
    else:
        zero, one = Fraction(0), Fraction(1)
    return kernel_basis(rows, zero, one)


# ---------------------------------------------------------------------------
# dilatation analysis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PisotReport:
    degree: int
    min_poly: IntPolynomial
    a0: int
    norm: int
    is_pisot: bool
    conjugate_modulus_bound: object  # Fraction when Pisot, else None
    field: NumberField
    char_factorization: Factorization

    @property
    def dilatation(self) -> FieldElement:
        return self.field.generator()


@lru_cache(maxsize=None)
def minimal_polynomial_of_dilatation(s: Substitution) -> PisotReport:
    """Minimal polynomial and Pisot status of the Perron eigenvalue of the
    abelianization.  The Perron root is isolated among the irreducible factors
    of the characteristic polynomial by exact Sturm bisection."""
    flag, _ = is_primitive(s)
    if not flag:
        raise PreconditionError("dilatation analysis requires a primitive substitution")
    cp = char_poly(abelianization(s))
    fact = factor_over_integers(cp)
    distinct = tuple(f for f, _ in fact.factors)
    min_poly, lo, hi = isolate_largest_real_root(distinct, cauchy_root_bound(cp))
    if not min_poly.is_monic():
        raise PrecisionError("minimal polynomial of an algebraic integer must be monic")
    field = NumberField(min_poly, lo, hi)
    d = min_poly.degree
    a0 = min_poly.coeffs[0]
    norm = (-1) ** d * a0
    is_pis, bound = pisot_check(min_poly, isolating=field.interval())
    return PisotReport(
        degree=d,
        min_poly=min_poly,
        a0=a0,
        norm=norm,
        is_pisot=is_pis,
        conjugate_modulus_bound=bound,
        field=field,
        char_factorization=fact,
    )


def in_Z_one_over_a0(q, a0: int) -> bool:
    """Whether q lies in Z[1/a0]: every prime of the reduced denominator divides a0."""
    if a0 == 0:
        raise PreconditionError("a0 must be nonzero")
    den = Fraction(q).denominator
    a = abs(a0)
    while den > 1:
        g = gcd(den, a)
        if g == 1:
            return False
        while den % g == 0:
            den //= g
    return True
