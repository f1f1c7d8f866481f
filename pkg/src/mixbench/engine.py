"""First-order pair-scattering engine with full path provenance.

One scattering event takes a phi particle and a psi particle to the output
modes.  Process A sends the phi particle to v and the psi particle to u;
process B exchanges the outputs.  The engine applies the event once to
every stored term, records one path per (term, phi slot, psi slot,
process), and groups the contributions by destination term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .amplitudes import AmplitudeForm, format_complex, format_form
from .states import (
    ManyBodyState,
    Mode,
    ProductTerm,
    SectorSpec,
    SingleParticleState,
    Statistics,
    canonical_fermion_term,
    inner_product,
    make_state,
    project_sector,
    render_term,
)

__all__ = [
    "PROCESS_A",
    "PROCESS_B",
    "PathRecord",
    "ScatterResult",
    "apply_first_order",
    "path_report",
    "path_to_dict",
    "render_path_table",
    "scattered_norm",
    "sector_amplitude",
]

PROCESS_A = "A"
PROCESS_B = "B"


@dataclass(frozen=True)
class PathRecord:
    """Provenance of a single scattering path.

    Slot indices are 0-based positions in the stored source term.  The sign
    is +1 for bosons; for fermions it is the parity picked up when the
    destination term is brought back to canonical slot order.  The
    contribution equals sign * (source coefficient) folded into the ca or
    cb component, depending on the process.
    """

    source_term: ProductTerm
    process: str
    phi_slot: int
    psi_slot: int
    sign: int
    contribution: AmplitudeForm
    destination_term: ProductTerm


@dataclass(frozen=True)
class ScatterResult:
    final_state: ManyBodyState
    paths: tuple[PathRecord, ...]


def apply_first_order(state: ManyBodyState) -> ScatterResult:
    """Apply one pair-scattering event to every term of the state.

    For every stored term and every ordered pair of a phi slot and a psi
    slot, both processes are attempted.  A fermionic path is blocked (emits
    nothing) when the destination single-particle state is already occupied
    in the source term.  Bosonic paths are never blocked.
    """
    fermionic = state.statistics is Statistics.FERMION
    paths: list[PathRecord] = []
    for term, form in state.terms.items():
        if form.ca != 0 or form.cb != 0:
            raise ValueError("state was already scattered; the event applies only once")
        phi_slots = [i for i, slot in enumerate(term) if slot.mode is Mode.PHI]
        psi_slots = [j for j, slot in enumerate(term) if slot.mode is Mode.PSI]
        for i in phi_slots:
            for j in psi_slots:
                for process in (PROCESS_A, PROCESS_B):
                    if process == PROCESS_A:
                        new_i = SingleParticleState(Mode.V, term[i].q)
                        new_j = SingleParticleState(Mode.U, term[j].q)
                    else:
                        new_i = SingleParticleState(Mode.U, term[i].q)
                        new_j = SingleParticleState(Mode.V, term[j].q)
                    if fermionic and _blocked(term, i, j, new_i, new_j):
                        continue
                    destination = list(term)
                    destination[i] = new_i
                    destination[j] = new_j
                    dest_term = tuple(destination)
                    sign = 1
                    if fermionic:
                        dest_term, sign = canonical_fermion_term(dest_term)
                    value = sign * form.c0
                    if process == PROCESS_A:
                        contribution = AmplitudeForm.process_a(value)
                    else:
                        contribution = AmplitudeForm.process_b(value)
                    paths.append(
                        PathRecord(term, process, i, j, sign, contribution, dest_term)
                    )
    final = make_state(
        state.statistics,
        state.n,
        ((p.destination_term, p.contribution) for p in paths),
        validate=False,
    )
    return ScatterResult(final, tuple(paths))


def _blocked(
    term: ProductTerm,
    i: int,
    j: int,
    new_i: SingleParticleState,
    new_j: SingleParticleState,
) -> bool:
    # Pauli check against the slots that keep their state.  The two fresh
    # states occupy different modes, so they never collide with each other.
    for k, slot in enumerate(term):
        if k == i or k == j:
            continue
        if slot == new_i or slot == new_j:
            return True
    return False


def scattered_norm(state: ManyBodyState, sa: complex, sb: complex) -> float:
    """Norm of the scattered component at concrete process amplitudes."""
    final = apply_first_order(state).final_state
    value = inner_product(final, final, sa, sb)
    return math.sqrt(max(value.real, 0.0))


def sector_amplitude(
    state: ManyBodyState, sector: SectorSpec, sa: complex, sb: complex
) -> float:
    """Norm of the scattered component restricted to one output sector."""
    final = apply_first_order(state).final_state
    projected = project_sector(final, sector)
    value = inner_product(projected, projected, sa, sb)
    return math.sqrt(max(value.real, 0.0))


def path_report(state: ManyBodyState, destination: ProductTerm) -> list[PathRecord]:
    """All scattering paths of the state that land on one destination term.

    The destination is canonicalized for fermionic states, so any slot
    ordering of the same Slater key selects the same report.  Records are
    ordered by (source term rendering, process, slots).
    """
    if state.statistics is Statistics.FERMION:
        destination, _ = canonical_fermion_term(destination)
    result = apply_first_order(state)
    matches = [p for p in result.paths if p.destination_term == destination]
    matches.sort(key=lambda p: (render_term(p.source_term), p.process, p.phi_slot, p.psi_slot))
    return matches


def path_to_dict(path: PathRecord) -> dict:
    return {
        "source": render_term(path.source_term),
        "process": path.process,
        "phi_slot": path.phi_slot,
        "psi_slot": path.psi_slot,
        "sign": path.sign,
        "contribution": {
            "c0": format_complex(path.contribution.c0),
            "ca": format_complex(path.contribution.ca),
            "cb": format_complex(path.contribution.cb),
        },
        "destination": render_term(path.destination_term),
    }


def render_path_table(paths: list[PathRecord]) -> str:
    """Fixed-width text table of path records."""
    headers = ("source", "process", "slots", "sign", "contribution", "destination")
    rows = [
        (
            render_term(p.source_term),
            p.process,
            f"{p.phi_slot},{p.psi_slot}",
            f"{p.sign:+d}",
            format_form(p.contribution),
            render_term(p.destination_term),
        )
        for p in paths
    ]
    widths = [
        max(len(headers[c]), max((len(r[c]) for r in rows), default=0))
        for c in range(len(headers))
    ]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(lines)
