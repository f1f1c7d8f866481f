import math
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mixbench.amplitudes import AmplitudeForm
from mixbench.states import (
    ManyBodyState,
    Mode,
    PauliViolationError,
    SectorSpec,
    SingleParticleState,
    Statistics,
    StatisticsMismatchError,
    add_states,
    antisymmetrize,
    canonical_fermion_term,
    coherent_initial_state,
    expand_antisymmetric,
    fock_initial_state,
    inner_product,
    make_state,
    parse_term,
    permute_slots,
    project_sector,
    render_term,
    sector_of,
    state_norm,
    symmetrize,
    validate_term,
)

PHI, PSI, V, U = Mode.PHI, Mode.PSI, Mode.V, Mode.U


def b(*modes):
    """Bosonic term from bare modes."""
    return tuple(SingleParticleState(m) for m in modes)


def f(*pairs):
    """Fermionic term from (mode, q) pairs."""
    return tuple(SingleParticleState(m, q) for m, q in pairs)


def test_mode_ordering_underlies_canonical_sort():
    assert PHI < PSI < V < U


def test_sector_of_counts_modes():
    assert sector_of(b(PHI, V, PHI, U)) == SectorSpec(2, 0, 1, 1)


def test_validate_boson_rejects_q_labels():
    with pytest.raises(StatisticsMismatchError):
        validate_term(f((PHI, 1)), Statistics.BOSON)


def test_validate_fermion_requires_q_labels():
    with pytest.raises(StatisticsMismatchError):
        validate_term(b(PHI), Statistics.FERMION)


def test_validate_fermion_rejects_duplicates():
    with pytest.raises(PauliViolationError):
        validate_term(f((PHI, 1), (PSI, 1), (PHI, 1)), Statistics.FERMION)


@pytest.mark.parametrize(
    "term,sign",
    [
        (f((PHI, 1), (PSI, 1)), +1),
        (f((PSI, 1), (PHI, 1)), -1),
        (f((V, 1), (PHI, 1), (PSI, 1)), +1),  # 3-cycle, even
        (f((PHI, 2), (PHI, 1)), -1),
        (f((U, 2), (U, 1), (V, 1)), -1),  # reversal of 3 slots is one transposition
    ],
)
def test_canonical_fermion_term_parity(term, sign):
    sorted_term, got = canonical_fermion_term(term)
    assert list(sorted_term) == sorted(sorted_term)
    assert got == sign


def test_canonical_fermion_term_rejects_pauli_violation():
    with pytest.raises(PauliViolationError):
        canonical_fermion_term(f((V, 1), (V, 1)))


def test_make_state_merges_and_prunes():
    term = b(PHI, PSI)
    state = make_state(
        Statistics.BOSON,
        2,
        [(term, AmplitudeForm.constant(1.0)), (term, AmplitudeForm.constant(-1.0))],
    )
    assert state.terms == {}


def test_make_state_folds_fermion_sign():
    swapped = f((PSI, 1), (PHI, 1))
    state = make_state(Statistics.FERMION, 2, [(swapped, AmplitudeForm.constant(1.0))])
    key = f((PHI, 1), (PSI, 1))
    assert set(state.terms) == {key}
    assert state.terms[key].c0 == -1.0


def test_symmetrize_counts_distinct_orderings():
    state = symmetrize(b(PHI, PSI, V))
    assert len(state.terms) == 6
    assert state_norm(state) == pytest.approx(1.0, abs=1e-12)

    repeated = symmetrize(b(V, V, U))
    assert len(repeated.terms) == 3
    assert state_norm(repeated) == pytest.approx(1.0, abs=1e-12)


def test_antisymmetrize_stores_a_single_sorted_key():
    state = antisymmetrize(f((PSI, 1), (PHI, 1), (V, 1)))
    assert len(state.terms) == 1
    key = f((PHI, 1), (PSI, 1), (V, 1))
    assert key in state.terms
    assert state.terms[key].c0 == -1.0
    assert state_norm(state) == pytest.approx(1.0, abs=1e-12)


def test_expand_antisymmetric_matches_signed_permutations():
    term = f((PHI, 1), (PSI, 1), (V, 1))
    expansion = dict(expand_antisymmetric(term))
    assert len(expansion) == 6
    weight = 1.0 / math.sqrt(6)
    assert expansion[term] == pytest.approx(weight)
    swapped = f((PSI, 1), (PHI, 1), (V, 1))
    assert expansion[swapped] == pytest.approx(-weight)
    assert sum(c * c for c in expansion.values()) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n1,n2,n3", [(1, 1, 0), (1, 1, 1), (2, 1, 0), (2, 3, 1)])
def test_fock_boson_state_is_normalized_with_multinomial_terms(n1, n2, n3):
    state = fock_initial_state(n1, n2, n3, Statistics.BOSON)
    n = n1 + n2 + n3
    expected_terms = math.factorial(n) // (
        math.factorial(n1) * math.factorial(n2) * math.factorial(n3)
    )
    assert len(state.terms) == expected_terms
    assert state_norm(state) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n1,n2,n3", [(1, 1, 0), (1, 1, 1), (3, 2, 1)])
def test_fock_fermion_state_is_one_slater_key(n1, n2, n3):
    state = fock_initial_state(n1, n2, n3, Statistics.FERMION)
    assert len(state.terms) == 1
    (key,) = state.terms
    # q labels run 1..n_i within each mode, sharing one label space
    assert key == f(
        *[(PHI, q) for q in range(1, n1 + 1)],
        *[(PSI, q) for q in range(1, n2 + 1)],
        *[(V, q) for q in range(1, n3 + 1)],
    )
    assert state.terms[key].c0 == 1.0


def test_fock_initial_state_validates_counts():
    with pytest.raises(ValueError):
        fock_initial_state(0, 1, 0, Statistics.BOSON)
    with pytest.raises(ValueError):
        fock_initial_state(1, 1, -1, Statistics.BOSON)


@pytest.mark.parametrize("statistics", [Statistics.BOSON, Statistics.FERMION])
@pytest.mark.parametrize("n,epsilon", [(2, 0.0), (3, 1 / 3), (4, 0.2), (5, 0.5)])
def test_coherent_state_is_normalized(statistics, n, epsilon):
    state = coherent_initial_state(n, epsilon, statistics)
    assert state_norm(state) == pytest.approx(1.0, abs=1e-12)
    # with no seed amplitude the v mode never appears
    if epsilon == 0.0:
        assert len(state.terms) == 2**n
        assert all(slot.mode is not V for term in state.terms for slot in term)
    else:
        assert len(state.terms) == 3**n


def test_coherent_state_validates_arguments():
    with pytest.raises(ValueError):
        coherent_initial_state(1, 0.2, Statistics.BOSON)
    with pytest.raises(ValueError):
        coherent_initial_state(3, 1.0, Statistics.BOSON)
    with pytest.raises(ValueError):
        coherent_initial_state(3, -0.1, Statistics.BOSON)


def test_inner_product_uses_orthonormal_terms():
    left = make_state(
        Statistics.BOSON,
        2,
        [(b(PHI, PSI), AmplitudeForm.constant(1 + 1j)), (b(PSI, PHI), AmplitudeForm.constant(2))],
    )
    right = make_state(
        Statistics.BOSON,
        2,
        [(b(PHI, PSI), AmplitudeForm.constant(0.5j)), (b(V, U), AmplitudeForm.constant(7))],
    )
    # only the shared key contributes: conj(1+1i) * 0.5i
    assert inner_product(left, right, 0, 0) == (1 - 1j) * 0.5j


def test_inner_product_checks_compatibility():
    boson = fock_initial_state(1, 1, 0, Statistics.BOSON)
    fermion = fock_initial_state(1, 1, 0, Statistics.FERMION)
    with pytest.raises(StatisticsMismatchError):
        inner_product(boson, fermion, 0, 0)


def test_add_states_merges():
    one = fock_initial_state(1, 1, 0, Statistics.BOSON)
    total = add_states(one, one.scaled(-1))
    assert total.terms == {}


def test_permute_slots_boson_symmetry():
    state = fock_initial_state(2, 1, 1, Statistics.BOSON)
    permuted = permute_slots(state, (3, 2, 1, 0))
    assert permuted.terms.keys() == state.terms.keys()
    for term, form in state.terms.items():
        assert permuted.terms[term].c0 == pytest.approx(form.c0)


def test_permute_slots_fermion_antisymmetry():
    state = fock_initial_state(2, 1, 0, Statistics.FERMION)
    swapped = permute_slots(state, (1, 0, 2))  # odd permutation
    (key,) = state.terms
    assert swapped.terms[key].c0 == -state.terms[key].c0
    cycled = permute_slots(state, (1, 2, 0))  # even permutation
    assert cycled.terms[key].c0 == state.terms[key].c0


def test_project_sector_selects_terms():
    state = fock_initial_state(1, 1, 1, Statistics.BOSON)
    projected = project_sector(state, SectorSpec(1, 1, 1, 0))
    assert projected.terms.keys() == state.terms.keys()
    empty = project_sector(state, SectorSpec(0, 0, 2, 1))
    assert empty.terms == {}
    with pytest.raises(ValueError):
        project_sector(state, SectorSpec(1, 1, 1, 1))


@pytest.mark.parametrize(
    "text,term",
    [
        ("phi psi v", b(PHI, PSI, V)),
        ("v v u", b(V, V, U)),
        ("phi(1) psi(2) v(1)", f((PHI, 1), (PSI, 2), (V, 1))),
    ],
)
def test_parse_and_render_term_round_trip(text, term):
    assert parse_term(text) == term
    assert render_term(term) == text


@pytest.mark.parametrize("text", ["", "w", "phi()", "phi(0)", "phi(1) 2"])
def test_parse_term_rejects(text):
    with pytest.raises(ValueError):
        parse_term(text)


# -- randomized structure checks ------------------------------------------

fermion_slots = st.lists(
    st.tuples(st.sampled_from([PHI, PSI, V, U]), st.integers(min_value=1, max_value=4)),
    min_size=1,
    max_size=6,
    unique=True,
)


@given(fermion_slots)
def test_canonicalization_is_idempotent(pairs):
    term = f(*pairs)
    sorted_term, sign = canonical_fermion_term(term)
    again, sign2 = canonical_fermion_term(sorted_term)
    assert again == sorted_term
    assert sign2 == 1
    assert sign in (-1, 1)


@given(fermion_slots, st.data())
def test_transposition_flips_parity(pairs, data):
    term = f(*pairs)
    if len(term) < 2:
        _, sign = canonical_fermion_term(term)
        assert sign == 1
        return
    i = data.draw(st.integers(min_value=0, max_value=len(term) - 2))
    swapped = list(term)
    swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
    _, sign = canonical_fermion_term(term)
    _, sign_swapped = canonical_fermion_term(tuple(swapped))
    assert sign_swapped == -sign


@given(st.permutations(list(range(4))))
def test_full_antisymmetry_under_any_permutation(perm):
    state = fock_initial_state(2, 1, 1, Statistics.FERMION)
    permuted = permute_slots(state, perm)
    sign = 1
    seen = [False] * 4
    for start in range(4):
        if seen[start]:
            continue
        length, i = 0, start
        while not seen[i]:
            seen[i] = True
            i = perm[i]
            length += 1
        if length % 2 == 0:
            sign = -sign
    (key,) = state.terms
    assert permuted.terms[key].c0 == sign * state.terms[key].c0
