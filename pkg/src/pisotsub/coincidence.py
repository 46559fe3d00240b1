"""Constant-length machinery: reduction to constant length, pure core,
column semigroups, coincidence rank, strong coincidence, and the divisibility
check relating the coincidence rank to the norm of the dilatation.

Columns of powers of a constant-length substitution are exactly the
compositions of the columns of the substitution itself, so the coincidence
rank is the minimum image size over the finite semigroup those columns
generate.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .algebra import kernel_basis, minimal_polynomial_of_dilatation
from .core import (
    Substitution,
    abelianization,
    fixed_point_prefix,
    is_primitive,
)
from .errors import ContradictionFlag, PreconditionError

#: ColumnFunction: tuple of letter indices, tuple[a] = image of letter a.


@dataclass(frozen=True)
class ColumnSemigroup:
    """Closure of the N generator columns under composition.

    `words` holds, per element, the shortest digit word (most significant
    digit first) realizing it as a column of a power: a word d_1 ... d_n is
    the column at position sum(d_i N^(n-i)) of the n-th power.
    """

    generators: tuple
    elements: tuple          # deterministic BFS discovery order
    words: tuple             # words[i] = digit word for elements[i]

    @property
    def size(self) -> int:
        return len(self.elements)

    def word_of(self, func) -> tuple:
        return self.words[self.elements.index(func)]


@dataclass(frozen=True)
class CoincidenceReport:
    cr: int
    minimal_image_witness: tuple       # ColumnFunction of minimal image size
    witness_word: tuple                # digit word of the witness
    eventually_coincident_pairs: frozenset
    strong_classes: tuple              # partition of the alphabet, sorted
    stable_tuple: tuple                # letter set of size cr
    semigroup_size: int


@dataclass(frozen=True)
class PureCore:
    unit_substitution: Substitution
    height: int
    core_substitution: Substitution
    letter_provenance: tuple   # ((unit letter index, (base letter index, offset)), ...)
    evidence: str


def _require_constant_length(s: Substitution) -> int:
    if not s.is_constant_length():
        raise PreconditionError("operation requires a constant-length substitution")
    return len(s.rules[0])


def integer_tile_lengths(s: Substitution) -> tuple:
    """Left Perron eigenvector scaled to positive integers with gcd 1.

    Only meaningful when the dilatation is an integer (degree one).
    """
    pisot = minimal_polynomial_of_dilatation(s)
    if pisot.degree != 1:
        raise PreconditionError("integer tile lengths require an integer dilatation")
    n_val = -pisot.min_poly.coeffs[0]
    a = abelianization(s)
    n = s.size
    rows = [
        [Fraction(a[j][i]) - (n_val if i == j else 0) for j in range(n)]
        for i in range(n)
    ]
    basis = kernel_basis(rows, Fraction(0), Fraction(1))
    if len(basis) != 1:
        raise ContradictionFlag("Perron eigenspace is not one-dimensional for a primitive matrix")
    vec = basis[0]
    denom = 1
    for c in vec:
        denom = denom * c.denominator // gcd(denom, c.denominator)
    ints = [int(c * denom) for c in vec]
    g = 0
    for c in ints:
        g = gcd(g, abs(c))
    ints = [c // g for c in ints]
    if any(c == 0 for c in ints):
        raise ContradictionFlag("Perron eigenvector must be strictly positive")
    if ints[0] < 0:
        ints = [-c for c in ints]
    return tuple(ints)


def _unit_name(base: str, offset: int, length: int) -> str:
    return base if length == 1 else f"{base}.{offset}"


@lru_cache(maxsize=None)
def to_constant_length_with_provenance(s: Substitution):
    """(unit substitution of constant length N, provenance) for a degree-one input.

    Each tile of integer length w splits into w unit tiles; the rule of unit
    (a, i) is the slice [i*N, (i+1)*N) of the unit expansion of the rule of a.
    Provenance maps each unit letter index to (base letter index, offset).
    """
    flag, _ = is_primitive(s)
    if not flag:
        raise PreconditionError("constant-length reduction requires a primitive substitution")
    pisot = minimal_polynomial_of_dilatation(s)
    if pisot.degree != 1:
        raise PreconditionError("constant-length reduction requires degree one")
    n_val = -pisot.min_poly.coeffs[0]
    lengths = integer_tile_lengths(s)
    if all(w == 1 for w in lengths):
        provenance = tuple((i, (i, 0)) for i in range(s.size))
        return s, provenance
    unit_index = {}
    names = []
    provenance = []
    for a in range(s.size):
        for off in range(lengths[a]):
            unit_index[(a, off)] = len(names)
            names.append(_unit_name(s.alphabet[a], off, lengths[a]))
            provenance.append((len(names) - 1, (a, off)))

    def expand(word):
        out = []
        for letter in word:
            out.extend(unit_index[(letter, off)] for off in range(lengths[letter]))
        return out

    rules = []
    for a in range(s.size):
        image = expand(s.rules[a])
        if len(image) != n_val * lengths[a]:
            raise ContradictionFlag("unit expansion length mismatch against the dilatation")
        for off in range(lengths[a]):
            rules.append(tuple(image[off * n_val:(off + 1) * n_val]))
    unit = Substitution(tuple(names), tuple(rules))
    return unit, tuple(provenance)


def to_constant_length(s: Substitution) -> Substitution:
    return to_constant_length_with_provenance(s)[0]


def _border_period(word) -> int:
    """Smallest period of the word, from the KMP border array."""
    n = len(word)
    border = [0] * n
    k = 0
    for i in range(1, n):
        while k and word[i] != word[k]:
            k = border[k - 1]
        if word[i] == word[k]:
            k += 1
        border[i] = k
    return n - border[-1] if n else 0


@lru_cache(maxsize=None)
def aperiodicity_check(s: Substitution):
    """(verdict, evidence).  Exact for degree >= 2 (a periodic primitive
    substitution forces an integer dilatation); a labeled bounded heuristic
    for degree one."""
    flag, _ = is_primitive(s)
    if not flag:
        raise PreconditionError("aperiodicity check requires a primitive substitution")
    pisot = minimal_polynomial_of_dilatation(s)
    if pisot.degree >= 2:
        return "aperiodic", "dilatation is irrational (degree >= 2); exact"
    n_val = -pisot.min_poly.coeffs[0]
    if n_val == 1:
        return "periodic", "dilatation 1: the substitution permutes single letters"
    prefix_len = max(10**4, (n_val * s.size) ** 3)
    prefix_len = min(prefix_len, 10**6)
    word, power, letter = fixed_point_prefix(s, None, prefix_len)
    bound = s.size * n_val * n_val
    period = _border_period(word)
    method = (
        f"prefix of length {len(word)} of the fixed word of power {power} at letter "
        f"{s.alphabet[letter]!r}, period bound {bound}"
    )
    if period <= bound:
        return "periodic", f"prefix is periodic with period {period} ({method}; heuristic)"
    return "aperiodic", f"no period <= {bound} found ({method}; heuristic)"


@lru_cache(maxsize=None)
def pure_core(s: Substitution) -> PureCore:
    """Height of a constant-length substitution and the regrouped core.

    The height is the largest factor coprime to the length N of the gcd of
    the return positions of the first letter of the fixed word (sampled on a
    finite prefix; the prefix length is part of the evidence).  For height h
    the core rewrites h-blocks at positions divisible by h.
    """
    n_val = _require_constant_length(s)
    flag, _ = is_primitive(s)
    if not flag:
        raise PreconditionError("pure core requires a primitive substitution")
    verdict, evidence = aperiodicity_check(s)
    if verdict == "periodic":
        raise PreconditionError(f"pure core requires an aperiodic substitution ({evidence})")
    prefix_len = min(max(10**4, n_val**4), 10**6)
    word, power, letter = fixed_point_prefix(s, None, prefix_len)
    g = 0
    first = word[0]
    for k in range(1, len(word)):
        if word[k] == first:
            g = gcd(g, k)
            if g == 1:
                break
    if g == 0:
        raise PreconditionError("first letter never returns in the sampled prefix")
    h = g
    while True:
        c = gcd(h, n_val)
        if c == 1:
            break
        h //= c
    evidence = (
        f"returns of {s.alphabet[first]!r} in a {len(word)}-letter prefix have gcd {g}; "
        f"height = coprime-to-{n_val} part = {h}"
    )
    identity = tuple((i, (i, 0)) for i in range(s.size))
    if h == 1:
        return PureCore(s, 1, s, identity, evidence)

    blocks = []
    block_index = {}

    def intern(block):
        if block not in block_index:
            block_index[block] = len(blocks)
            blocks.append(block)
        return block_index[block]

    for j in range(0, len(word) - h + 1, h):
        intern(word[j:j + h])
    # closure: images of seen blocks are blocks at positions divisible by h
    queue = deque(range(len(blocks)))
    rules_by_block = {}
    while queue:
        bi = queue.popleft()
        if bi in rules_by_block:
            continue
        image = s.apply(blocks[bi])
        segs = [image[t * h:(t + 1) * h] for t in range(n_val)]
        rules_by_block[bi] = segs
        for seg in segs:
            si = intern(seg)
            if si not in rules_by_block:
                queue.append(si)

    order = sorted(range(len(blocks)), key=lambda i: blocks[i])
    rank = {bi: r for r, bi in enumerate(order)}
    sep = "" if all(len(nm) == 1 for nm in s.alphabet) else "-"
    names = tuple(sep.join(s.alphabet[x] for x in blocks[bi]) for bi in order)
    rules = tuple(
        tuple(rank[block_index[seg]] for seg in rules_by_block[bi]) for bi in order
    )
    core = Substitution(names, rules)
    return PureCore(s, h, core, identity, evidence)


@lru_cache(maxsize=None)
def column_semigroup(s: Substitution) -> ColumnSemigroup:
    """Closure of the N column functions under composition (BFS, deterministic)."""
    n_val = _require_constant_length(s)
    size = s.size
    gens = tuple(tuple(s.rules[a][k] for a in range(size)) for k in range(n_val))
    seen = {}
    order = []
    queue = deque()
    for k, g in enumerate(gens):
        if g not in seen:
            seen[g] = (k,)
            order.append(g)
            queue.append(g)
    while queue:
        f = queue.popleft()
        wf = seen[f]
        for k, g in enumerate(gens):
            # appending a least-significant digit applies the new column last
            comp = tuple(g[f[a]] for a in range(size))
            if comp not in seen:
                seen[comp] = wf + (k,)
                order.append(comp)
                queue.append(comp)
    elements = tuple(order)
    words = tuple(seen[f] for f in elements)
    return ColumnSemigroup(generators=gens, elements=elements, words=words)


def eventually_coincident_pairs(s: Substitution) -> frozenset:
    """Unordered letter pairs merged by some element of the column semigroup."""
    sem = column_semigroup(s)
    pairs = set()
    for f in sem.elements:
        buckets = {}
        for a, img in enumerate(f):
            buckets.setdefault(img, []).append(a)
        for group in buckets.values():
            for i in range(len(group)):
                for j in range(i + 1, len(group)):
                    pairs.add((group[i], group[j]))
    return frozenset(pairs)


def _pair_closure(s: Substitution, a: int, b: int):
    """Closure of {(a, b)} under simultaneous application of the columns."""
    n_val = len(s.rules[0])
    start = (min(a, b), max(a, b))
    seen = {start}
    queue = deque([start])
    while queue:
        x, y = queue.popleft()
        for k in range(n_val):
            nx, ny = s.rules[x][k], s.rules[y][k]
            if nx == ny:
                continue
            p = (min(nx, ny), max(nx, ny))
            if p not in seen:
                seen.add(p)
                queue.append(p)
    return seen


@lru_cache(maxsize=None)
def strongly_coincident_classes(s: Substitution) -> tuple:
    """Partition of the alphabet into strong-coincidence classes.

    Two letters are strongly coincident when every pair in the simultaneous
    column closure of their pair is eventually coincident.  The relation is
    verified to be an equivalence on the given input; it is not assumed.
    """
    _require_constant_length(s)
    flag, _ = is_primitive(s)
    if not flag:
        raise PreconditionError("strong coincidence requires a primitive substitution")
    ec = eventually_coincident_pairs(s)
    n = s.size
    strong = set()
    for a in range(n):
        for b in range(a + 1, n):
            closure = _pair_closure(s, a, b)
            if all(p in ec for p in closure):
                strong.add((a, b))
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                ab, bc, ac = (a, b) in strong, (b, c) in strong, (a, c) in strong
                if (ab and bc and not ac) or (ab and ac and not bc) or (ac and bc and not ab):
                    raise PreconditionError(
                        "strong coincidence is not transitive on this input; "
                        "classes are not well defined"
                    )
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in strong:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    classes = {}
    for a in range(n):
        classes.setdefault(find(a), []).append(a)
    return tuple(tuple(v) for _, v in sorted(classes.items()))


@lru_cache(maxsize=None)
def coincidence_rank(s: Substitution) -> CoincidenceReport:
    """Minimum image cardinality over the column semigroup, with witnesses.

    The image of a minimal element is a stable tuple: composing with any
    further column keeps its cardinality at the minimum.
    """
    _require_constant_length(s)
    flag, _ = is_primitive(s)
    if not flag:
        raise PreconditionError("coincidence rank requires a primitive substitution")
    sem = column_semigroup(s)
    best = None
    for f, w in zip(sem.elements, sem.words):
        size = len(set(f))
        key = (size, len(w), w)
        if best is None or key < best[0]:
            best = (key, f, w)
    _, witness, word = best
    cr = len(set(witness))
    stable = tuple(sorted(set(witness)))
    ec = eventually_coincident_pairs(s)
    for i in range(len(stable)):
        for j in range(i + 1, len(stable)):
            if (stable[i], stable[j]) in ec:
                raise ContradictionFlag("members of a minimal image are eventually coincident")
    return CoincidenceReport(
        cr=cr,
        minimal_image_witness=witness,
        witness_word=word,
        eventually_coincident_pairs=ec,
        strong_classes=strongly_coincident_classes(s),
        stable_tuple=stable,
        semigroup_size=sem.size,
    )


def quotient_substitution(s: Substitution) -> Substitution:
    """Substitution induced on strong-coincidence classes.

    Returns the input object itself when all classes are singletons.  Raises
    when the classes are incompatible with the rules (never expected: the pair
    closure of a strong pair consists of strong pairs).
    """
    classes = strongly_coincident_classes(s)
    if all(len(c) == 1 for c in classes):
        return s
    class_of = {}
    for ci, members in enumerate(classes):
        for a in members:
            class_of[a] = ci
    reps = [members[0] for members in classes]
    names = tuple(s.alphabet[r] for r in reps)
    rules = []
    for ci, members in enumerate(classes):
        images = {tuple(class_of[x] for x in s.rules[a]) for a in members}
        if len(images) != 1:
            raise PreconditionError(
                f"strong classes are incompatible with the rules at class {names[ci]!r}"
            )
        rules.append(images.pop())
    return Substitution(names, tuple(rules))


@dataclass(frozen=True)
class DivisibilityVerdict:
    status: str          # PASS | FLAG | not_applicable
    cr: int | None
    norm: int | None
    notes: tuple


def check_cr_divides_norm(s: Substitution) -> DivisibilityVerdict:
    """Whether the coincidence rank divides a power of the dilatation norm.

    Decidable exactly only for homological Pisot inputs of degree one (where
    the rank is computed by the column semigroup after constant-length
    reduction).  cr = 2 for such an input is impossible and is reported as a
    FLAG, as is a divisibility failure: both would contradict proved facts.
    """
    from .algebra import in_Z_one_over_a0
    from .cohomology import is_homological_pisot

    pisot = minimal_polynomial_of_dilatation(s)
    if pisot.degree != 1:
        return DivisibilityVerdict(
            "not_applicable", None, pisot.norm,
            ("coincidence rank is certified exactly only in degree one",),
        )
    hom, _, _ = is_homological_pisot(s)
    unit = to_constant_length(s)
    report = coincidence_rank(unit)
    cr = report.cr
    if not hom:
        notes = ["input is not homological Pisot; divisibility is not asserted"]
        if cr == 1:
            notes.append("cr = 1: divisibility would hold vacuously")
        if cr == 2:
            notes.append("cr = 2 and the cr != 2 statement is vacuous here")
        return DivisibilityVerdict("not_applicable", cr, pisot.norm, tuple(notes))
    notes = []
    if cr == 2:
        return DivisibilityVerdict(
            "FLAG", cr, pisot.norm,
            ("cr = 2 for a degree-one homological Pisot substitution contradicts a proved fact",),
        )
    divides = in_Z_one_over_a0(Fraction(1, cr), pisot.norm)
    if divides:
        notes.append(f"every prime factor of cr = {cr} divides the norm {pisot.norm}")
        return DivisibilityVerdict("PASS", cr, pisot.norm, tuple(notes))
    return DivisibilityVerdict(
        "FLAG", cr, pisot.norm,
        (f"cr = {cr} does not divide a power of the norm {pisot.norm}; "
         "this contradicts the proved degree-one case",),
    )


def _word_position(word, n_val: int) -> int:
    position = 0
    for d in word:
        position = position * n_val + d
    return position


def is_homological_pisot_safe(s: Substitution):
    from .cohomology import is_homological_pisot

    return is_homological_pisot(s)


@dataclass(frozen=True)
class PartitionWitness:
    sets: tuple            # tuple of letter-index tuples
    measures: tuple        # tuple of Fractions (total cylinder measure per set)
    power: int             # n with the witness column in the n-th power
    position: int          # k: column position within the n-th power
    cr: int
    out_of_hypothesis: bool
    equal_to_one_over_cr: bool


def measure_fraction_witness(s: Substitution) -> PartitionWitness:
    """Partition of the alphabet into cr letter sets of equal cylinder measure.

    Uses a semigroup element of minimal image size as the witness column; the
    measures come from the exact cylinder-measure machinery.  Inputs that are
    not homological Pisot are still processed but marked out of hypothesis.
    """
    from .cohomology import is_homological_pisot
    from .measure import cylinder_measure

    n_val = _require_constant_length(s)
    classes = strongly_coincident_classes(s)
    if any(len(c) > 1 for c in classes):
        raise PreconditionError(
            "strongly coincident letters present; apply quotient_substitution first"
        )
    report = coincidence_rank(s)
    if report.cr == 1:
        # the single set is the whole alphabet, whose cylinder union is everything
        try:
            hom, _, _ = is_homological_pisot_safe(s)
        except PreconditionError:
            hom = False
        return PartitionWitness(
            sets=(tuple(range(s.size)),),
            measures=(Fraction(1),),
            power=len(report.witness_word),
            position=_word_position(report.witness_word, n_val),
            cr=1,
            out_of_hypothesis=not hom,
            equal_to_one_over_cr=True,
        )
    witness, word = report.minimal_image_witness, report.witness_word
    power = len(word)
    position = _word_position(word, n_val)
    image = sorted(set(witness))
    sets = tuple(
        tuple(a for a in range(s.size) if witness[a] == b) for b in image
    )
    measures = []
    for group in sets:
        total = Fraction(0)
        for a in group:
            value = cylinder_measure(s, (a,)).value.as_fraction()
            if value is None:
                raise ContradictionFlag("letter measure of a constant-length input must be rational")
            total += value
        measures.append(total)
    hom, _, _ = is_homological_pisot(s)
    equal = all(m == Fraction(1, report.cr) for m in measures)
    if hom and not equal:
        raise ContradictionFlag(
            "letter partition measures differ from 1/cr for a homological Pisot input"
        )
    return PartitionWitness(
        sets=sets,
        measures=tuple(measures),
        power=power,
        position=position,
        cr=report.cr,
        out_of_hypothesis=not hom,
        equal_to_one_over_cr=equal,
    )
