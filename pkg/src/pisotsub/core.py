"""Substitutions on finite alphabets: parsing, iteration, language, abelianization.

Letters are represented internally by their index in the alphabet; display
names appear only at the I/O boundary.  Words are tuples of letter indices.
All values are immutable and all operations are pure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Union

from .errors import ParseError, PreconditionError, ResourceLimitError, ValidationError

Word = tuple  # tuple[int, ...]

#: Default cap on the length of any word produced by iteration.
DEFAULT_ITERATE_CAP = 10**7

#: Cap on prefix doublings during language generation.
LANGUAGE_ITERATION_CAP = 64

_iterate_cap = DEFAULT_ITERATE_CAP


def set_iterate_cap(cap: int) -> None:
    """Set the process-wide cap on word lengths produced by iteration."""
    global _iterate_cap
    if cap < 1:
        raise PreconditionError("iterate cap must be positive")
    _iterate_cap = cap


def current_iterate_cap() -> int:
    return _iterate_cap


@dataclass(frozen=True)
class Substitution:
    """A substitution: one nonempty rule word per alphabet letter."""

    alphabet: tuple  # tuple[str, ...], display names in input order
    rules: tuple     # tuple[tuple[int, ...], ...], rules[i] = image of letter i

    def __post_init__(self):
        n = len(self.alphabet)
        if n == 0:
            raise ValidationError("alphabet is empty")
        if len(set(self.alphabet)) != n:
            raise ValidationError("duplicate letter names in alphabet")
        if len(self.rules) != n:
            raise ValidationError("every letter needs exactly one rule")
        for i, rule in enumerate(self.rules):
            if len(rule) == 0:
                raise ValidationError(
                    f"rule for letter {self.alphabet[i]!r} is empty; rules must be nonempty words"
                )
            for j in rule:
                if not (0 <= j < n):
                    raise ValidationError(f"rule for {self.alphabet[i]!r} references unknown letter index {j}")

    @property
    def size(self) -> int:
        return len(self.alphabet)

    def rule(self, letter: int) -> Word:
        return self.rules[letter]

    def apply(self, word: Iterable) -> Word:
        """Image of a word under the substitution (concatenation of rules)."""
        out = []
        for letter in word:
            out.extend(self.rules[letter])
        return tuple(out)

    def is_constant_length(self) -> bool:
        k = len(self.rules[0])
        return all(len(r) == k for r in self.rules)

    def max_rule_length(self) -> int:
        return max(len(r) for r in self.rules)

    def index_of(self, name: str) -> int:
        try:
            return self.alphabet.index(name)
        except ValueError:
            raise ValidationError(f"unknown letter name {name!r}") from None

    def word_names(self, word: Iterable) -> list:
        return [self.alphabet[i] for i in word]

    def word_string(self, word: Iterable) -> str:
        """Word as a display string; concatenated only when unambiguous."""
        names = self.word_names(word)
        if all(len(nm) == 1 for nm in self.alphabet):
            return "".join(names)
        return " ".join(names)

    def __repr__(self):
        rules = ", ".join(
            f"{self.alphabet[i]}->{self.word_string(r)}" for i, r in enumerate(self.rules)
        )
        return f"Substitution({rules})"


def _parse_rule_word(s: Substitution | None, raw, alphabet_index: dict, letter_name: str) -> Word:
    if isinstance(raw, str):
        names = list(raw)
    elif isinstance(raw, list):
        names = raw
    else:
        raise ParseError(f"rule for {letter_name!r} must be a string or an array of letter names")
    word = []
    for nm in names:
        if nm not in alphabet_index:
            raise ValidationError(f"rule for {letter_name!r} references unknown letter {nm!r}")
        word.append(alphabet_index[nm])
    return tuple(word)


def parse_substitution(text: Union[str, dict]) -> Substitution:
    """Parse a substitution spec document.

    The document is JSON of shape {"alphabet": [name, ...], "rules": {name: word}}
    where a word is a string of single-character names or an array of names
    (the array form is required when any letter name is multi-character).
    """
    if isinstance(text, str):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    else:
        doc = text
    if not isinstance(doc, dict):
        raise ParseError("substitution document must be a JSON object")
    try:
        alphabet = doc["alphabet"]
        rules_doc = doc["rules"]
    except (KeyError, TypeError):
        raise ParseError('substitution document needs "alphabet" and "rules" keys') from None
    if not isinstance(alphabet, list) or not all(isinstance(a, str) for a in alphabet):
        raise ParseError('"alphabet" must be an array of strings')
    if not isinstance(rules_doc, dict):
        raise ParseError('"rules" must be an object')
    index = {name: i for i, name in enumerate(alphabet)}
    multi = any(len(nm) != 1 for nm in alphabet)
    rules = []
    for name in alphabet:
        if name not in rules_doc:
            raise ValidationError(f"no rule for letter {name!r}")
        raw = rules_doc[name]
        if multi and isinstance(raw, str):
            raise ParseError(
                f"rule for {name!r} must use the array form: the alphabet has multi-character names"
            )
        rules.append(_parse_rule_word(None, raw, index, name))
    extra = set(rules_doc) - set(alphabet)
    if extra:
        raise ValidationError(f"rules given for letters not in the alphabet: {sorted(extra)}")
    return Substitution(tuple(alphabet), tuple(rules))


def serialize_substitution(s: Substitution) -> dict:
    """Inverse of parse_substitution; key order follows the alphabet."""
    multi = any(len(nm) != 1 for nm in s.alphabet)
    rules = {}
    for i, name in enumerate(s.alphabet):
        names = s.word_names(s.rules[i])
        rules[name] = names if multi else "".join(names)
    return {"alphabet": list(s.alphabet), "rules": rules}


def abelianization(s: Substitution) -> tuple:
    """Matrix with entry (i, j) = number of occurrences of letter i in the rule of j."""
    n = s.size
    cols = []
    for j in range(n):
        col = [0] * n
        for letter in s.rules[j]:
            col[letter] += 1
        cols.append(col)
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def _bool_matmul(a, b):
    n = len(a)
    return tuple(
        tuple(any(a[i][k] and b[k][j] for k in range(n)) for j in range(n)) for i in range(n)
    )


@lru_cache(maxsize=None)
def is_primitive(s: Substitution):
    """Whether some power of the abelianization is strictly positive.

    Returns (flag, witness); witness is the least power m with A^m > 0,
    searched up to the Wielandt bound n^2 - 2n + 2.
    """
    n = s.size
    a = abelianization(s)
    pos = tuple(tuple(x > 0 for x in row) for row in a)
    bound = max(1, n * n - 2 * n + 2)
    power = pos
    for m in range(1, bound + 1):
        if all(all(row) for row in power):
            return True, m
        power = _bool_matmul(power, pos)
    return False, None


def iterate(s: Substitution, letter: int, n: int, cap: int | None = None) -> Word:
    """The n-th image of a letter; n = 0 gives the single-letter word."""
    if cap is None:
        cap = _iterate_cap
    if n < 0:
        raise PreconditionError("iteration count must be >= 0")
    word = (letter,)
    for _ in range(n):
        nxt = s.apply(word)
        if len(nxt) > cap:
            raise ResourceLimitError(
                f"iterate would produce {len(nxt)} letters, above the cap {cap}"
            )
        word = nxt
    return word


def _first_letter_cycle(s: Substitution, start: int):
    """Cycle of the first-letter map reached from `start`: (cycle letter, length, on_cycle)."""
    first = [s.rules[i][0] for i in range(s.size)]
    seen = {}
    x = start
    path = []
    while x not in seen:
        seen[x] = len(path)
        path.append(x)
        x = first[x]
    return x, len(path) - seen[x], seen[x] == 0 and x == start


@lru_cache(maxsize=None)
def _prefix_power(s: Substitution, letter: int | None):
    """Least power k with s^k(a) starting with a and growing, for a = `letter`
    or an automatically chosen one.

    Bounded by alphabet size times max rule length; beyond that the
    substitution has no expanding prefix-fixed letter (e.g. a permutation).
    """
    if letter is None:
        a, cycle, _ = _first_letter_cycle(s, 0)
    else:
        a, cycle, on_cycle = _first_letter_cycle(s, letter)
        if not on_cycle:
            raise PreconditionError(
                f"letter {s.alphabet[letter]!r} is not a rule prefix of itself under any power"
            )
        a = letter
    bound = s.size * s.max_rule_length()
    k = cycle
    while k <= bound:
        if len(iterate(s, a, k, cap=10**6)) >= 2:
            return k, a
        k += cycle
    raise PreconditionError("no prefix-fixed letter with a growing rule found within the power bound")


def fixed_point_prefix(s: Substitution, letter: int | None, length: int,
                       cap: int | None = None):
    """Length-`length` prefix of a one-sided fixed word of a power of s.

    When `letter` is None, a prefix-fixed letter is chosen automatically;
    otherwise the given letter must be prefix-fixed under some power.
    Returns (word, power_used, letter_used).
    """
    if cap is None:
        cap = _iterate_cap
    if length < 1:
        raise PreconditionError("prefix length must be >= 1")
    if length > cap:
        raise ResourceLimitError(f"requested prefix length {length} exceeds the cap {cap}")
    power, a = _prefix_power(s, letter)
    word = (a,)
    while len(word) < length:
        grown = []
        for x in word:
            grown.extend(iterate(s, x, power, cap=cap))
            if len(grown) >= length:
                break
        if len(grown) <= len(word):
            raise PreconditionError(
                f"fixed word of letter {s.alphabet[a]!r} does not grow; cannot reach length {length}"
            )
        word = tuple(grown[:length])
    return word[:length], power, a


def _factors_upto(word: Word, maxlen: int) -> set:
    out = set()
    n = len(word)
    for length in range(1, maxlen + 1):
        for i in range(n - length + 1):
            out.add(word[i:i + length])
    return out


@lru_cache(maxsize=None)
def language(s: Substitution, maxlen: int) -> frozenset:
    """All allowed words of length <= maxlen.

    Collects factors of growing prefixes of a fixed word (every allowed word
    occurs there, by minimality) until the factor set is stable across a
    doubling and closed under taking factors of rule images.  Loud resource
    error past the iteration cap.
    """
    if maxlen < 1:
        raise PreconditionError("maxlen must be >= 1")
    flag, _ = is_primitive(s)
    if not flag:
        raise PreconditionError("language generation requires a primitive substitution")
    target = max(1000, 64 * maxlen)
    factors = None
    for _ in range(LANGUAGE_ITERATION_CAP):
        prefix, _, _ = fixed_point_prefix(s, None, target)
        new = _factors_upto(prefix, maxlen)
        if factors is not None and new == factors and len(prefix) >= target:
            closed = all(
                _factors_upto(s.apply(w), maxlen) <= factors for w in factors
            )
            if closed:
                return frozenset(factors)
        factors = new
        target *= 2
        if target > _iterate_cap:
            raise ResourceLimitError("language generation did not stabilize within the prefix cap")
    raise ResourceLimitError("language generation did not stabilize within the iteration cap")


def transitions(s: Substitution) -> frozenset:
    """Allowed two-letter words, as ordered pairs of letter indices."""
    return frozenset(w for w in language(s, 2) if len(w) == 2)


def count_letters(word: Word, n: int) -> tuple:
    counts = [0] * n
    for x in word:
        counts[x] += 1
    return tuple(counts)
