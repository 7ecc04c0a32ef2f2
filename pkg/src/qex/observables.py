"""Pauli-sum observables and their JSON wire format.

The wire format is a JSON array of ``{"coeff": <number>, "pauli": "<tokens>"}``
objects, where the pauli string holds whitespace-separated tokens such as
``"Z0 Z1"``. An empty string (or all-I tokens) is the identity term.
Coefficients are real; Hermiticity holds by construction.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Any, Sequence

from .errors import ObservableParseError, PauliIndexError

_TOKEN_RE = re.compile(r"([IXYZ])(\d+)\Z")

AXES = ("X", "Y", "Z")


@dataclass(frozen=True)
class PauliTerm:
    """One real-weighted Pauli string; empty factors means identity."""

    coeff: float
    factors: dict[int, str] = field(default_factory=dict)

    @property
    def is_identity(self) -> bool:
        return not self.factors

    def pauli_string(self) -> str:
        return " ".join(f"{self.factors[q]}{q}" for q in sorted(self.factors))


@dataclass
class Observable:
    """Ordered sum of Pauli terms; duplicates are deliberately not merged."""

    terms: list[PauliTerm] = field(default_factory=list)
    n_qubits_hint: int | None = None

    @property
    def max_index(self) -> int:
        """Largest qubit index referenced, or -1 for identity-only sums."""
        indices = [q for term in self.terms for q in term.factors]
        return max(indices) if indices else -1


def _parse_term(entry: Any, position: int) -> PauliTerm:
    if not isinstance(entry, dict):
        raise ObservableParseError(f"term {position}: expected an object")
    if "coeff" not in entry or "pauli" not in entry:
        raise ObservableParseError(f"term {position}: needs 'coeff' and 'pauli' fields")
    coeff = entry["coeff"]
    if isinstance(coeff, bool) or not isinstance(coeff, (int, float)):
        raise ObservableParseError(f"term {position}: coeff must be a real number")
    coeff = float(coeff)
    if not math.isfinite(coeff):
        raise ObservableParseError(f"term {position}: coeff must be finite")
    pauli = entry["pauli"]
    if not isinstance(pauli, str):
        raise ObservableParseError(f"term {position}: pauli must be a string")
    factors: dict[int, str] = {}
    seen: set[int] = set()
    for token in pauli.split():
        match = _TOKEN_RE.match(token)
        if match is None:
            raise ObservableParseError(
                f"term {position}: bad pauli token {token!r} "
                "(expected a letter in I/X/Y/Z followed by a qubit index)"
            )
        axis, index_text = match.groups()
        index = int(index_text)
        if index in seen:
            raise ObservableParseError(f"term {position}: duplicate qubit index {index}")
        seen.add(index)
        if axis != "I":
            factors[index] = axis
    return PauliTerm(coeff=coeff, factors=factors)


def parse_observable_terms(data: Any, n_qubits_hint: int | None = None) -> Observable:
    """Parse the ``observable_terms`` JSON array into an Observable."""
    if not isinstance(data, list):
        raise ObservableParseError("observable_terms must be a JSON array")
    terms = [_parse_term(entry, k) for k, entry in enumerate(data)]
    return Observable(terms=terms, n_qubits_hint=n_qubits_hint)


def render_observable_terms(observable: Observable) -> list[dict[str, Any]]:
    """Inverse of :func:`parse_observable_terms`, canonical token order."""
    return [{"coeff": term.coeff, "pauli": term.pauli_string()} for term in observable.terms]


def eigenvalue(term: PauliTerm, bitstring: Sequence[str] | str) -> int:
    """Eigenvalue (+1/-1) of a diagonalized Pauli string on a measured bitstring.

    Character ``i`` of the bitstring is the value of bit ``i``; the result is
    ``(-1) ** parity`` over the bits sitting at the term's factor indices.
    """
    parity = 0
    for index in term.factors:
        if index >= len(bitstring):
            raise PauliIndexError(
                f"pauli index {index} outside bitstring of length {len(bitstring)}"
            )
        parity ^= int(bitstring[index]) & 1
    return -1 if parity else 1
