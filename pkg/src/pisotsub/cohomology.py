"""First Cech cohomology of the tiling space via the transition complex.

The complex has one tile edge per letter and one transition edge per allowed
two-letter word; substitution acts on transition edges through the last letter
of the first rule and the first letter of the second.  The dimension of the
first rational Cech cohomology comes out of the exact sequence relating the
eventual range of the transition subgraph to the direct limit of the
transposed abelianization.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import lcm

from .algebra import (
    IntPolynomial,
    X,
    mat_pow_int,
    minimal_polynomial_of_dilatation,
    rank_rational,
)
from .core import Substitution, abelianization, is_primitive, transitions
from .errors import ContradictionFlag, PreconditionError

ONE_MINUS_X = IntPolynomial((-1, 1))  # x - 1


@dataclass(frozen=True)
class TransitionComplex:
    """Tile edges (one per letter) and transition edges (one per allowed pair).

    A transition edge (i, j) joins the out-node of letter i to the in-node of
    letter j; only the combinatorics matter for cohomology dimension.
    """

    tile_edges: tuple          # letter indices
    transition_edges: tuple    # sorted tuple of (i, j) pairs

    def nodes_of(self, edges):
        nodes = set()
        for i, j in edges:
            nodes.add(("out", i))
            nodes.add(("in", j))
        return nodes


@dataclass(frozen=True)
class EdgeMap:
    """Action of the substitution on transition edges."""

    mapping: tuple  # sorted tuple of ((i, j), (k, l)) pairs

    def as_dict(self):
        return dict(self.mapping)


@dataclass(frozen=True)
class ERData:
    """Eventual range of the transition subgraph under the edge map."""

    er_edges: frozenset
    fixing_power: int
    components: int
    independent_cycles: int


@dataclass(frozen=True)
class CohomologyReport:
    dim_h1: int
    eventual_rank: int
    components: int
    independent_cycles: int
    fixing_power: int
    eigenvalue_factorization: object  # Factorization of the characteristic polynomial
    three_conditions: tuple           # (only 0/1/lam eigenvalues with lam simple,
                                      #  mult(1) == components - 1, no loops)
    is_homological_pisot: bool
    degree: int

    def eigenvalue_summary(self) -> dict:
        """Factored eigenvalue data: rational roots with multiplicity plus the
        irreducible factors of degree >= 2."""
        fact = self.eigenvalue_factorization
        return {
            "rational_roots": [str(r) for r in fact.rational_roots()],
            "irreducible_factors": [
                {"coeffs": list(f.coeffs), "multiplicity": m}
                for f, m in fact.factors
            ],
        }


def build_transition_complex(s: Substitution) -> TransitionComplex:
    """Transition complex of a primitive substitution."""
    flag, _ = is_primitive(s)
    if not flag:
        raise PreconditionError("the transition complex requires a primitive substitution")
    edges = tuple(sorted(transitions(s)))
    return TransitionComplex(tile_edges=tuple(range(s.size)), transition_edges=edges)


def edge_dynamics(s: Substitution) -> EdgeMap:
    """Edge (i, j) maps to (last letter of rule(i), first letter of rule(j))."""
    complex_ = build_transition_complex(s)
    mapping = []
    for (i, j) in complex_.transition_edges:
        image = (s.rules[i][-1], s.rules[j][0])
        mapping.append(((i, j), image))
    mapped = dict(mapping)
    for edge, image in mapped.items():
        if image not in mapped:
            raise ContradictionFlag(
                f"edge image {image} is not an allowed transition; language generation is inconsistent"
            )
    return EdgeMap(tuple(sorted(mapping)))


def eventual_range(complex_: TransitionComplex, edge_map: EdgeMap) -> ERData:
    """Edges on cycles of the edge map, with the power fixing them and the
    component/cycle counts of the subgraph they span."""
    m = edge_map.as_dict()
    if set(m) != set(complex_.transition_edges):
        raise PreconditionError("edge map must be total on the transition edges")
    # image of m^t for t = number of edges lands on the cycles
    current = set(complex_.transition_edges)
    for _ in range(len(complex_.transition_edges)):
        current = {m[e] for e in current}
    er_edges = frozenset(current)
    if {m[e] for e in er_edges} != er_edges:
        raise ContradictionFlag("eventual range is not invariant under the edge map")

    # cycle lengths: each eventual edge returns to itself
    fixing_power = 1
    for e in er_edges:
        steps = 1
        x = m[e]
        while x != e:
            x = m[x]
            steps += 1
        fixing_power = lcm(fixing_power, steps)

    nodes = sorted(complex_.nodes_of(er_edges))
    index = {v: i for i, v in enumerate(nodes)}
    parent = list(range(len(nodes)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (i, j) in er_edges:
        a, b = find(index[("out", i)]), find(index[("in", j)])
        if a != b:
            parent[a] = b
    components = len({find(i) for i in range(len(nodes))})
    cycles = len(er_edges) - len(nodes) + components
    return ERData(
        er_edges=er_edges,
        fixing_power=fixing_power,
        components=components,
        independent_cycles=cycles,
    )


@lru_cache(maxsize=None)
def _eventual_rank(s: Substitution) -> int:
    a = abelianization(s)
    n = s.size
    power = mat_pow_int(a, n)
    rank = rank_rational(power)
    if rank != rank_rational(mat_pow_int(a, n + 1)):
        raise ContradictionFlag("rank of A^n did not stabilize at n = alphabet size")
    return rank


def _check_aperiodicity(s: Substitution):
    from .coincidence import aperiodicity_check  # deferred: coincidence imports this module

    verdict, evidence = aperiodicity_check(s)
    if verdict == "periodic":
        raise PreconditionError(f"substitution is periodic ({evidence})")


@lru_cache(maxsize=None)
def cech_h1_dimension(s: Substitution, assume_aperiodic: bool = False) -> CohomologyReport:
    """Dimension of the first rational Cech cohomology of the tiling space.

    dim = eventual rank of the abelianization - (components - 1) + independent
    cycles of the eventual range.  The three side conditions reported are:
    (1) the nonzero eigenvalues are only 1 and the dilatation with its
    conjugates, the latter simple, (2) the multiplicity of eigenvalue 1 is
    one less than the number of components, (3) the eventual range has no
    loops.  All three hold exactly when the dimension equals the algebraic
    degree of the dilatation.
    """
    if not assume_aperiodic:
        _check_aperiodicity(s)
    pisot = minimal_polynomial_of_dilatation(s)
    complex_ = build_transition_complex(s)
    er = eventual_range(complex_, edge_dynamics(s))
    rank = _eventual_rank(s)
    fact = pisot.char_factorization

    mult_one = fact.multiplicity(ONE_MINUS_X)
    mult_lam = fact.multiplicity(pisot.min_poly)
    others = [
        (f, m) for f, m in fact.factors
        if f not in (X, ONE_MINUS_X, pisot.min_poly)
    ]
    if mult_one < er.components - 1:
        raise ContradictionFlag(
            "multiplicity of eigenvalue 1 is below components - 1; exact sequence violated"
        )
    dim = rank - (er.components - 1) + er.independent_cycles
    cond1 = (not others) and mult_lam == 1
    cond2 = mult_one == er.components - 1
    cond3 = er.independent_cycles == 0
    report = CohomologyReport(
        dim_h1=dim,
        eventual_rank=rank,
        components=er.components,
        independent_cycles=er.independent_cycles,
        fixing_power=er.fixing_power,
        eigenvalue_factorization=fact,
        three_conditions=(cond1, cond2, cond3),
        is_homological_pisot=pisot.is_pisot and dim == pisot.degree,
        degree=pisot.degree,
    )
    if (dim == pisot.degree) != all(report.three_conditions):
        raise ContradictionFlag(
            "three-condition characterization disagrees with the dimension formula"
        )
    return report


def is_homological_pisot(s: Substitution, assume_aperiodic: bool = False):
    """(flag, cohomology report, pisot report); flag means Pisot dilatation of
    degree d together with dim H^1 = d."""
    report = cech_h1_dimension(s, assume_aperiodic=assume_aperiodic)
    pisot = minimal_polynomial_of_dilatation(s)
    return report.is_homological_pisot, report, pisot
