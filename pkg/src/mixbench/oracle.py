"""Occupation-number oracle: an independent route to the scattered norm.

States live in the occupation basis instead of the product basis.  Bosonic
keys are per-mode counts (n_phi, n_psi, n_v, n_u); fermionic keys are the
sorted tuples of occupied (mode, q) states.  The scattering event is
applied with explicit ladder-operator algebra, sqrt factors for bosons and
anticommutation sign strings for fermions, which shares no code with the
first-quantized path enumeration.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from itertools import product
from typing import Union

from .amplitudes import AmplitudeForm
from .states import (
    ManyBodyState,
    Mode,
    SingleParticleState,
    Statistics,
    StatisticsMismatchError,
    canonical_fermion_term,
    sector_of,
)

__all__ = [
    "OccupationState",
    "apply_fwm_operator",
    "coherent_occupation_state",
    "fock_occupation_state",
    "from_first_quantized",
    "oracle_scattered_norm",
    "render_occupation",
]

BosonOccupation = tuple[int, int, int, int]
FermionOccupation = tuple[SingleParticleState, ...]
OccupationKey = Union[BosonOccupation, FermionOccupation]


@dataclass(frozen=True)
class OccupationState:
    """Sparse map from occupation keys to amplitude forms."""

    statistics: Statistics
    n: int
    terms: dict[OccupationKey, AmplitudeForm]


def render_occupation(key: OccupationKey, statistics: Statistics) -> str:
    if statistics is Statistics.BOSON:
        labels = ("phi", "psi", "v", "u")
        inner = ", ".join(f"{label}:{count}" for label, count in zip(labels, key))
        return "{" + inner + "}"
    inner = ", ".join(f"{slot.mode.label}({slot.q})" for slot in key)
    return "{" + inner + "}"


def from_first_quantized(state: ManyBodyState) -> OccupationState:
    """Map a first-quantized state to the occupation basis, norm preserved.

    Bosons: every distinct occupation vector receives the shared term
    coefficient times sqrt(multinomial weight), which requires the input to
    be permutation symmetric.  Fermions: the stored Slater keys already are
    occupation keys and the coefficients carry over unchanged.
    """
    if state.statistics is Statistics.FERMION:
        terms: dict[OccupationKey, AmplitudeForm] = {}
        for term, form in state.terms.items():
            canonical, sign = canonical_fermion_term(term)
            if canonical != term or sign != 1:
                raise ValueError("fermionic state keys must be canonical")
            terms[canonical] = form
        return OccupationState(Statistics.FERMION, state.n, terms)

    groups: dict[BosonOccupation, list[AmplitudeForm]] = {}
    for term, form in state.terms.items():
        occ = tuple(sector_of(term))
        groups.setdefault(occ, []).append(form)
    terms = {}
    n_fact = math.factorial(state.n)
    for occ, forms in sorted(groups.items()):
        representative = forms[0]
        for form in forms[1:]:
            delta = form - representative
            scale = max(1.0, abs(representative.c0), abs(representative.ca), abs(representative.cb))
            if max(abs(delta.c0), abs(delta.ca), abs(delta.cb)) > 1e-12 * scale:
                raise StatisticsMismatchError(
                    "state is not permutation symmetric; occupation map undefined"
                )
        multiplicity = n_fact
        for count in occ:
            multiplicity //= math.factorial(count)
        if len(forms) != multiplicity:
            raise StatisticsMismatchError(
                "state is not permutation symmetric; occupation map undefined"
            )
        terms[occ] = representative.scaled(math.sqrt(multiplicity))
    return OccupationState(Statistics.BOSON, state.n, terms)


def fock_occupation_state(
    n1: int, n2: int, n3: int, statistics: Statistics
) -> OccupationState:
    """Occupation-basis input with n1 phi, n2 psi, n3 seed v particles."""
    if n1 < 1 or n2 < 1:
        raise ValueError("both input modes need at least one particle")
    if n3 < 0:
        raise ValueError("seed occupation cannot be negative")
    n = n1 + n2 + n3
    one = AmplitudeForm.constant(1.0)
    if statistics is Statistics.BOSON:
        return OccupationState(statistics, n, {(n1, n2, n3, 0): one})
    slots = tuple(
        [SingleParticleState(Mode.PHI, q) for q in range(1, n1 + 1)]
        + [SingleParticleState(Mode.PSI, q) for q in range(1, n2 + 1)]
        + [SingleParticleState(Mode.V, q) for q in range(1, n3 + 1)]
    )
    return OccupationState(statistics, n, {slots: one})


def coherent_occupation_state(
    n: int, epsilon: float, statistics: Statistics
) -> OccupationState:
    """Occupation-basis image of n particles in one phi/psi/v superposition."""
    if n < 2:
        raise ValueError("need at least two particles to scatter a pair")
    if not 0.0 <= epsilon < 1.0:
        raise ValueError("epsilon must lie in [0, 1)")
    w_in = math.sqrt((1.0 - epsilon) / 2.0)
    w_seed = math.sqrt(epsilon)
    terms: dict[OccupationKey, AmplitudeForm] = {}
    if statistics is Statistics.BOSON:
        for m in range(n + 1):
            for k in range(n - m + 1):
                j = n - m - k
                coeff = w_in ** (m + k) * w_seed ** j
                if coeff == 0.0:
                    continue
                count = math.comb(n, m) * math.comb(n - m, k)
                terms[(m, k, j, 0)] = AmplitudeForm.constant(coeff * math.sqrt(count))
        return OccupationState(statistics, n, terms)
    for assignment in product((Mode.PHI, Mode.PSI, Mode.V), repeat=n):
        m = sum(1 for mode in assignment if mode is Mode.PHI)
        k = sum(1 for mode in assignment if mode is Mode.PSI)
        coeff = w_in ** (m + k) * w_seed ** (n - m - k)
        if coeff == 0.0:
            continue
        slots = tuple(SingleParticleState(mode, i + 1) for i, mode in enumerate(assignment))
        canonical, sign = canonical_fermion_term(slots)
        terms[canonical] = AmplitudeForm.constant(sign * coeff)
    return OccupationState(statistics, n, dict(sorted(terms.items())))


def _annihilate(occ: FermionOccupation, key: SingleParticleState):
    idx = bisect_left(occ, key)
    if idx == len(occ) or occ[idx] != key:
        return None
    sign = -1 if idx % 2 else 1
    return sign, occ[:idx] + occ[idx + 1 :]


def _create(occ: FermionOccupation, key: SingleParticleState):
    idx = bisect_left(occ, key)
    if idx < len(occ) and occ[idx] == key:
        return None
    sign = -1 if idx % 2 else 1
    return sign, occ[:idx] + (key,) + occ[idx:]


def apply_fwm_operator(
    state: OccupationState, sa: complex, sb: complex
) -> OccupationState:
    """Apply the scattering event with explicit ladder-operator algebra.

    Bosons: one merged vertex (sa+sb) * create(v) create(u) annihilate(psi)
    annihilate(phi) with the usual sqrt occupancy factors.  Fermions: the
    sum over q labels of sa * create(v,q) create(u,q') + sb * create(u,q)
    create(v,q') acting after annihilate(psi,q') annihilate(phi,q), with
    anticommutation signs counted against the fixed (mode rank, q) order.
    """
    merged: dict[OccupationKey, AmplitudeForm] = {}

    def accumulate(key: OccupationKey, form: AmplitudeForm) -> None:
        if key in merged:
            merged[key] = merged[key] + form
        else:
            merged[key] = form

    if state.statistics is Statistics.BOSON:
        vertex = complex(sa) + complex(sb)
        for occ, form in state.terms.items():
            n_phi, n_psi, n_v, n_u = occ
            if n_phi < 1 or n_psi < 1:
                continue
            factor = vertex * math.sqrt(n_phi * n_psi * (n_v + 1) * (n_u + 1))
            accumulate((n_phi - 1, n_psi - 1, n_v + 1, n_u + 1), form.scaled(factor))
    else:
        for occ, form in state.terms.items():
            phi_qs = [slot.q for slot in occ if slot.mode is Mode.PHI]
            psi_qs = [slot.q for slot in occ if slot.mode is Mode.PSI]
            for q in phi_qs:
                for qp in psi_qs:
                    for amplitude, creations in (
                        (complex(sa), (SingleParticleState(Mode.U, qp), SingleParticleState(Mode.V, q))),
                        (complex(sb), (SingleParticleState(Mode.V, qp), SingleParticleState(Mode.U, q))),
                    ):
                        sign = 1
                        current = occ
                        step = _annihilate(current, SingleParticleState(Mode.PHI, q))
                        sign, current = step[0] * sign, step[1]
                        step = _annihilate(current, SingleParticleState(Mode.PSI, qp))
                        sign, current = step[0] * sign, step[1]
                        blocked = False
                        for key in creations:
                            step = _create(current, key)
                            if step is None:
                                blocked = True
                                break
                            sign, current = step[0] * sign, step[1]
                        if blocked:
                            continue
                        accumulate(current, form.scaled(sign * amplitude))
    pruned = {key: form for key, form in merged.items() if not form.is_zero()}
    ordered = dict(sorted(pruned.items()))
    return OccupationState(state.statistics, state.n, ordered)


def oracle_scattered_norm(state: OccupationState) -> float:
    """Plain l2 norm of an already scattered occupation state."""
    total = 0.0
    for form in state.terms.values():
        total += abs(form.constant_value()) ** 2
    return math.sqrt(total)
