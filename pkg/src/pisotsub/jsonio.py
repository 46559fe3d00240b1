"""Deterministic JSON serialization for reports.

Rationals are {"num": str, "den": str} (arbitrary precision safe); field
elements are power-basis coordinate arrays; polynomials are integer
coefficient arrays, lowest degree first.  Key order is construction order,
so two runs on the same input produce byte-identical documents.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .algebra import FieldElement, IntPolynomial


def rat(x) -> dict:
    f = Fraction(x)
    return {"num": str(f.numerator), "den": str(f.denominator)}


def field_element(x: FieldElement) -> list:
    return [rat(c) for c in x.coords]


def poly(p: IntPolynomial) -> list:
    return list(p.coeffs)


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def lookup_path(doc, path: str):
    """Dotted-path lookup into nested dicts/lists ('a.b.0.c')."""
    cur = doc
    for part in path.split("."):
        if isinstance(cur, list):
            cur = cur[int(part)]
        elif isinstance(cur, dict):
            if part not in cur:
                raise KeyError(path)
            cur = cur[part]
        else:
            raise KeyError(path)
    return cur
