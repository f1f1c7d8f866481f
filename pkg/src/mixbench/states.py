"""First-quantized product terms and the many-body states built from them.

A product term assigns one single-particle state to each particle slot.
Bosonic many-body states are stored directly in the product basis, one
ordered term per key.  Fermionic states are stored in the orthonormal
Slater basis: every key is the slot list sorted by (mode rank, q) and the
parity of the sorting permutation is folded into the coefficient, which
keeps term identity collision-free without expanding n! permutations.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum, IntEnum
from itertools import permutations, product
from typing import Iterable, Iterator, NamedTuple, Sequence

from .amplitudes import AmplitudeForm

__all__ = [
    "ManyBodyState",
    "Mode",
    "PauliViolationError",
    "ProductTerm",
    "SectorSpec",
    "SingleParticleState",
    "Statistics",
    "StatisticsMismatchError",
    "add_states",
    "antisymmetrize",
    "canonical_fermion_term",
    "coherent_initial_state",
    "expand_antisymmetric",
    "fock_initial_state",
    "inner_product",
    "make_state",
    "parse_term",
    "permute_slots",
    "project_sector",
    "render_term",
    "scale_state",
    "sector_of",
    "state_norm",
    "symmetrize",
]


class Mode(IntEnum):
    """Single-particle modes, ranked for canonical ordering."""

    PHI = 0
    PSI = 1
    V = 2
    U = 3

    @property
    def label(self) -> str:
        return _MODE_LABELS[self]


_MODE_LABELS = {Mode.PHI: "phi", Mode.PSI: "psi", Mode.V: "v", Mode.U: "u"}
_MODE_BY_LABEL = {label: mode for mode, label in _MODE_LABELS.items()}


class Statistics(Enum):
    BOSON = "boson"
    FERMION = "fermion"


class SingleParticleState(NamedTuple):
    mode: Mode
    q: int | None = None


ProductTerm = tuple[SingleParticleState, ...]


class SectorSpec(NamedTuple):
    """Per-mode particle counts of a final (or initial) configuration."""

    n_phi: int
    n_psi: int
    n_v: int
    n_u: int

    @property
    def total(self) -> int:
        return self.n_phi + self.n_psi + self.n_v + self.n_u


class StatisticsMismatchError(ValueError):
    """Raised when terms or states do not fit the requested statistics."""


class PauliViolationError(ValueError):
    """Raised when a fermionic term repeats a (mode, q) pair."""


def sector_of(term: ProductTerm) -> SectorSpec:
    counts = [0, 0, 0, 0]
    for slot in term:
        counts[slot.mode] += 1
    return SectorSpec(*counts)


def validate_term(term: ProductTerm, statistics: Statistics) -> None:
    if len(term) == 0:
        raise ValueError("product term needs at least one slot")
    if statistics is Statistics.BOSON:
        for slot in term:
            if slot.q is not None:
                raise StatisticsMismatchError("bosonic slots carry no q label")
        return
    seen = set()
    for slot in term:
        if not isinstance(slot.q, int) or slot.q < 1:
            raise StatisticsMismatchError("fermionic slots need a q label >= 1")
        if slot in seen:
            raise PauliViolationError(f"duplicate single-particle state {render_term((slot,))}")
        seen.add(slot)


def canonical_fermion_term(term: ProductTerm) -> tuple[ProductTerm, int]:
    """Sort slots by (mode rank, q); return the sorted term and the parity.

    The parity is the sign of the sorting permutation, +1 or -1.  A repeated
    (mode, q) pair has no canonical form and raises PauliViolationError.
    """
    n = len(term)
    order = sorted(range(n), key=lambda i: term[i])
    sorted_term = tuple(term[i] for i in order)
    for a, b in zip(sorted_term, sorted_term[1:]):
        if a == b:
            raise PauliViolationError(f"duplicate single-particle state {render_term((a,))}")
    # Parity via cycle decomposition of the sorting permutation.
    sign = 1
    seen = [False] * n
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = order[i]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sorted_term, sign


def _term_sort_key(term: ProductTerm) -> tuple:
    return tuple((slot.mode.value, slot.q if slot.q is not None else 0) for slot in term)


@dataclass(frozen=True)
class ManyBodyState:
    """Sparse map from product terms to amplitude forms.

    Treat instances as immutable; all operations return new states.  Terms
    whose coefficient is the exact zero form are never stored.
    """

    statistics: Statistics
    n: int
    terms: dict[ProductTerm, AmplitudeForm]

    def scaled(self, factor: complex) -> "ManyBodyState":
        return make_state(
            self.statistics,
            self.n,
            ((term, form.scaled(factor)) for term, form in self.terms.items()),
            validate=False,
        )


def make_state(
    statistics: Statistics,
    n: int,
    entries: Iterable[tuple[ProductTerm, AmplitudeForm]],
    *,
    validate: bool = True,
) -> ManyBodyState:
    """Merge (term, form) entries into a state, canonicalizing fermion keys."""
    merged: dict[ProductTerm, AmplitudeForm] = {}
    for term, form in entries:
        if len(term) != n:
            raise ValueError(f"term has {len(term)} slots, expected {n}")
        if validate:
            validate_term(term, statistics)
        if statistics is Statistics.FERMION:
            term, sign = canonical_fermion_term(term)
            if sign < 0:
                form = form.scaled(-1)
        if term in merged:
            merged[term] = merged[term] + form
        else:
            merged[term] = form
    pruned = {term: form for term, form in merged.items() if not form.is_zero()}
    ordered = dict(sorted(pruned.items(), key=lambda item: _term_sort_key(item[0])))
    return ManyBodyState(statistics, n, ordered)


def scale_state(state: ManyBodyState, factor: complex) -> ManyBodyState:
    return state.scaled(factor)


def add_states(left: ManyBodyState, right: ManyBodyState) -> ManyBodyState:
    _check_compatible(left, right)
    entries = list(left.terms.items()) + list(right.terms.items())
    return make_state(left.statistics, left.n, entries, validate=False)


def _check_compatible(left: ManyBodyState, right: ManyBodyState) -> None:
    if left.statistics is not right.statistics:
        raise StatisticsMismatchError("states carry different statistics")
    if left.n != right.n:
        raise ValueError(f"states have different particle numbers {left.n} and {right.n}")


def symmetrize(term: ProductTerm) -> ManyBodyState:
    """Equal-weight sum over the distinct orderings of a bosonic term.

    Each distinct ordering receives coefficient 1/sqrt(#orderings), so the
    result has unit norm regardless of repeated modes.
    """
    validate_term(term, Statistics.BOSON)
    distinct = sorted(set(permutations(term)), key=_term_sort_key)
    coeff = 1.0 / math.sqrt(len(distinct))
    return make_state(
        Statistics.BOSON,
        len(term),
        ((p, AmplitudeForm.constant(coeff)) for p in distinct),
        validate=False,
    )


def antisymmetrize(term: ProductTerm) -> ManyBodyState:
    """Normalized antisymmetric combination of a fermionic term.

    Mathematically this is (1/sqrt(n!)) sum over permutations with signs;
    in storage it collapses to the single sorted key with the sorting
    parity folded in (see expand_antisymmetric for the full expansion).
    """
    validate_term(term, Statistics.FERMION)
    return make_state(
        Statistics.FERMION,
        len(term),
        [(term, AmplitudeForm.constant(1.0))],
        validate=False,
    )


def expand_antisymmetric(term: ProductTerm) -> Iterator[tuple[ProductTerm, float]]:
    """Yield all n! signed product terms of the antisymmetrized state.

    Intended for cross-checks and debugging at small n; the states module
    itself never materializes this expansion.
    """
    validate_term(term, Statistics.FERMION)
    n = len(term)
    weight = 1.0 / math.sqrt(math.factorial(n))
    for perm in permutations(range(n)):
        sign = 1
        seen = [False] * n
        for start in range(n):
            if seen[start]:
                continue
            length = 0
            i = start
            while not seen[i]:
                seen[i] = True
                i = perm[i]
                length += 1
            if length % 2 == 0:
                sign = -sign
        yield tuple(term[i] for i in perm), sign * weight


def fock_initial_state(n1: int, n2: int, n3: int, statistics: Statistics) -> ManyBodyState:
    """Input with n1 phi, n2 psi and n3 seed v particles, properly (anti)symmetrized.

    Fermions carry q labels from a shared space: phi particles get q=1..n1,
    psi particles q=1..n2 and v particles q=1..n3.  Scattering conserves q,
    so a phi particle with q <= n3 is Pauli blocked from entering v.
    """
    if n1 < 1 or n2 < 1:
        raise ValueError("both input modes need at least one particle")
    if n3 < 0:
        raise ValueError("seed occupation cannot be negative")
    if statistics is Statistics.BOSON:
        base = (
            (SingleParticleState(Mode.PHI),) * n1
            + (SingleParticleState(Mode.PSI),) * n2
            + (SingleParticleState(Mode.V),) * n3
        )
        return symmetrize(base)
    slots = tuple(
        [SingleParticleState(Mode.PHI, q) for q in range(1, n1 + 1)]
        + [SingleParticleState(Mode.PSI, q) for q in range(1, n2 + 1)]
        + [SingleParticleState(Mode.V, q) for q in range(1, n3 + 1)]
    )
    return antisymmetrize(slots)


def coherent_initial_state(n: int, epsilon: float, statistics: Statistics) -> ManyBodyState:
    """n particles, each in the same phi/psi/v superposition.

    Per slot the weights are sqrt((1-epsilon)/2) on phi and on psi and
    sqrt(epsilon) on v.  The expansion has one term per mode assignment
    (3^n at most); with epsilon = 0 the v-carrying terms vanish exactly.
    For fermions particle i carries q = i, which makes every assignment a
    valid Slater key and renders the statistics irrelevant to scattering.
    """
    if n < 2:
        raise ValueError("need at least two particles to scatter a pair")
    if not 0.0 <= epsilon < 1.0:
        raise ValueError("epsilon must lie in [0, 1)")
    w_in = math.sqrt((1.0 - epsilon) / 2.0)
    w_seed = math.sqrt(epsilon)
    entries = []
    for assignment in product((Mode.PHI, Mode.PSI, Mode.V), repeat=n):
        m = sum(1 for mode in assignment if mode is Mode.PHI)
        k = sum(1 for mode in assignment if mode is Mode.PSI)
        # Power form keyed on counts so every term of one (m, k) group gets
        # a bit-identical coefficient.
        coeff = w_in ** (m + k) * w_seed ** (n - m - k)
        if coeff == 0.0:
            continue
        if statistics is Statistics.BOSON:
            term = tuple(SingleParticleState(mode) for mode in assignment)
        else:
            term = tuple(
                SingleParticleState(mode, i + 1) for i, mode in enumerate(assignment)
            )
        entries.append((term, AmplitudeForm.constant(coeff)))
    return make_state(statistics, n, entries, validate=False)


def inner_product(
    bra: ManyBodyState, ket: ManyBodyState, sa: complex, sb: complex
) -> complex:
    """Hermitian inner product after evaluating both coefficient forms.

    Distinct stored terms are orthonormal for both statistics (ordered
    product terms for bosons, Slater keys for fermions).
    """
    _check_compatible(bra, ket)
    if len(bra.terms) <= len(ket.terms):
        shared = (term for term in bra.terms if term in ket.terms)
    else:
        shared = (term for term in ket.terms if term in bra.terms)
    total = 0j
    for term in shared:
        total += (
            bra.terms[term].evaluate(sa, sb).conjugate()
            * ket.terms[term].evaluate(sa, sb)
        )
    return total


def state_norm(state: ManyBodyState, sa: complex = 0j, sb: complex = 0j) -> float:
    total = 0.0
    for form in state.terms.values():
        total += abs(form.evaluate(sa, sb)) ** 2
    return math.sqrt(total)


def project_sector(state: ManyBodyState, sector: SectorSpec) -> ManyBodyState:
    """Keep exactly the terms whose per-mode counts match the sector."""
    if sector.total != state.n:
        raise ValueError(f"sector totals {sector.total} particles, state has {state.n}")
    kept = {term: form for term, form in state.terms.items() if sector_of(term) == sector}
    return ManyBodyState(state.statistics, state.n, kept)


def permute_slots(state: ManyBodyState, perm: Sequence[int]) -> ManyBodyState:
    """Relabel particle slots: new term[i] = old term[perm[i]].

    Bosonic states built by symmetrize are invariant; fermionic states pick
    up the permutation parity as a global sign.
    """
    if sorted(perm) != list(range(state.n)):
        raise ValueError("perm must be a permutation of range(n)")
    entries = [
        (tuple(term[p] for p in perm), form) for term, form in state.terms.items()
    ]
    return make_state(state.statistics, state.n, entries, validate=False)


def render_term(term: ProductTerm) -> str:
    """Text form of a term, e.g. ``phi psi v`` or ``phi(1) psi(2) v(1)``."""
    parts = []
    for slot in term:
        if slot.q is None:
            parts.append(slot.mode.label)
        else:
            parts.append(f"{slot.mode.label}({slot.q})")
    return " ".join(parts)


_TOKEN_RE = re.compile(r"^(phi|psi|v|u)(?:\((\d+)\))?$")


def parse_term(text: str) -> ProductTerm:
    """Parse the render_term text form back into a product term."""
    tokens = text.split()
    if not tokens:
        raise ValueError("empty term")
    slots = []
    for token in tokens:
        match = _TOKEN_RE.match(token)
        if match is None:
            raise ValueError(f"invalid slot token {token!r}")
        label, q_text = match.groups()
        q = int(q_text) if q_text else None
        if q == 0:
            raise ValueError(f"q labels start at 1, got {token!r}")
        slots.append(SingleParticleState(_MODE_BY_LABEL[label], q))
    return tuple(slots)
