import numpy as np
import pytest
from hypothesis import given, strategies as st

from gradedvna import linalg
from gradedvna.errors import InputError
from gradedvna.linalg import (
    MatSubspace,
    commutant_solve,
    contains,
    full_space,
    get_tolerances,
    hs_inner,
    intersect,
    jacobi_eigh,
    orthonormalize,
    range_projection,
    set_tolerances,
    span,
    spectral_projections,
    subspace_equal,
    subspace_residual,
    tolerances,
    zero_space,
)

import oracles

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def rand_c(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def rand_herm(rng, n):
    a = rand_c(rng, n, n)
    return (a + a.conj().T) / 2


# -- tolerances ---------------------------------------------------------------


def test_default_tolerances():
    tol = get_tolerances()
    assert (tol.eq, tol.rank, tol.cluster) == (1e-8, 1e-9, 1e-6)


def test_tolerance_override_is_scoped():
    with tolerances(eq=1e-4):
        assert get_tolerances().eq == 1e-4
    assert get_tolerances().eq == 1e-8
    prev = set_tolerances(rank=1e-7)
    try:
        assert get_tolerances().rank == 1e-7
    finally:
        set_tolerances(rank=prev.rank)


# -- spans ----------------------------------------------------------------------


def test_orthonormalize_drops_dependent_inputs(rng):
    a, b = rand_c(rng, 3, 3), rand_c(rng, 3, 3)
    s = orthonormalize([a, b, 2 * a - 1j * b, np.zeros((3, 3))])
    assert s.dim == 2
    gram = np.einsum("aij,bij->ab", s.basis.conj(), s.basis)
    np.testing.assert_allclose(gram, np.eye(2), atol=1e-12)


def test_orthonormalize_empty_and_zero():
    assert orthonormalize([], d=3).dim == 0
    assert orthonormalize([np.zeros((2, 2))]).dim == 0


def test_orthonormalize_rejects_nonsquare():
    with pytest.raises(InputError):
        orthonormalize([np.zeros((2, 3))])


def test_scale_one_treats_noise_as_zero():
    noise = np.full((2, 2), 1e-17)
    assert orthonormalize([noise]).dim == 1  # relative to its own size it is a direction
    assert orthonormalize([noise], scale=1.0).dim == 0


def test_matsubspace_is_immutable():
    s = full_space(2)
    with pytest.raises(AttributeError):
        s.basis = None
    with pytest.raises(ValueError):
        s.basis[0, 0, 0] = 5


@given(seeds, st.integers(1, 4), st.integers(0, 8))
def test_span_matches_svd_rank(seed, d, k):
    rng = np.random.default_rng(seed)
    r = min(k, d * d, 3)
    core = rand_c(rng, r, d, d)
    mats = [sum(c * m for c, m in zip(rand_c(rng, r), core)) for _ in range(k)]
    s = span(mats, d=d)
    assert s.dim == oracles.span_rows(mats, d).shape[0]
    for m in mats:
        assert contains(s, m)


@given(seeds)
def test_projection_is_idempotent(seed):
    rng = np.random.default_rng(seed)
    s = span(rand_c(rng, 3, 3, 3))
    x = rand_c(rng, 3, 3)
    p = s.project(x)
    np.testing.assert_allclose(s.project(p), p, atol=1e-12)
    # the residual is orthogonal to the space
    for b in s.basis:
        assert abs(hs_inner(x - p, b)) < 1e-12


def test_subspace_equality_ignores_basis_choice(rng):
    mats = rand_c(rng, 3, 2, 2)
    s = span(mats)
    t = span([mats[0] + mats[1], mats[1] - 2j * mats[2], mats[2]])
    assert subspace_equal(s, t)
    assert subspace_residual(s, span(mats[:2])) == float("inf")


def test_intersection_of_diagonals_and_symmetric(rng):
    d = 3
    diag = span([np.diag(e) for e in np.eye(d)])
    sym = span([m + m.T for m in rand_c(rng, 20, d, d)])
    assert sym.dim == 6
    inter = intersect(diag, sym)
    assert subspace_equal(inter, diag)
    assert intersect(diag, zero_space(d)).dim == 0


@given(seeds)
def test_intersection_dimension_formula(seed):
    rng = np.random.default_rng(seed)
    d = 3
    shared = rand_c(rng, 2, d, d)
    s = span(list(shared) + list(rand_c(rng, 2, d, d)))
    t = span(list(shared) + list(rand_c(rng, 3, d, d)))
    inter = intersect(s, t)
    both = span(list(s.basis) + list(t.basis))
    assert inter.dim == s.dim + t.dim - both.dim
    for m in inter.basis:
        assert contains(s, m) and contains(t, m)


# -- spectra ----------------------------------------------------------------------


@given(seeds, st.integers(1, 12))
def test_jacobi_matches_numpy(seed, n):
    rng = np.random.default_rng(seed)
    a = rand_herm(rng, n)
    w, v = jacobi_eigh(a)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(a), atol=1e-10)
    np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, a, atol=1e-10)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(n), atol=1e-10)


def test_spectral_projections_merge_clusters():
    a = np.diag([1.0, 1.0 + 1e-9, 3.0])
    parts = spectral_projections(a)
    assert [round(lam, 6) for lam, _ in parts] == [1.0, 3.0]
    assert [int(round(np.trace(p).real)) for _, p in parts] == [2, 1]


@given(seeds, st.integers(1, 6))
def test_spectral_projections_resolve_identity(seed, n):
    rng = np.random.default_rng(seed)
    a = rand_herm(rng, n)
    parts = spectral_projections(a)
    np.testing.assert_allclose(sum(p for _, p in parts), np.eye(n), atol=1e-9)
    np.testing.assert_allclose(sum(lam * p for lam, p in parts), a, atol=1e-9)


def test_spectral_projections_reject_non_hermitian():
    with pytest.raises(InputError):
        spectral_projections(np.array([[0, 1], [0, 0]]))


def test_range_projection(rng):
    a = rand_c(rng, 4, 2) @ rand_c(rng, 2, 4)
    p = range_projection(a)
    np.testing.assert_allclose(p @ p, p, atol=1e-12)
    np.testing.assert_allclose(p @ a, a, atol=1e-10)
    assert round(np.trace(p).real) == 2


# -- commutants ----------------------------------------------------------------------


def test_commutant_of_nothing_is_everything():
    assert commutant_solve([], 3).dim == 9


def test_commutant_of_a_single_hermitian(rng):
    h = np.diag([1.0, 1.0, 2.0])
    assert commutant_solve([h], 3).dim == 5


@given(seeds, st.sampled_from([((1, 1), (1, 1)), ((2, 1),), ((1, 2),), ((2, 1), (1, 2)), ((1, 3), (2, 1))]))
def test_commutant_matches_kronecker_oracle(seed, profile):
    rng = np.random.default_rng(seed)
    gens, d, _ = oracles.block_diagonal_algebra(profile, rng)
    got = commutant_solve(gens, d)
    want = oracles.commutant(gens, d)
    assert oracles.same_span(got.vectors, want)
    # ⊕ M_n ⊗ I_m has commutant ⊕ I_n ⊗ M_m
    assert got.dim == sum(m * m for _, m in profile)


def test_restricted_nullspace_intertwiner():
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    basis = list(full_space(2).basis)
    images = [sx @ b @ sx for b in basis]
    sol = linalg.restricted_nullspace(full_space(2), basis, 1e-9, images=images)
    assert sol.dim == 1
    u = sol.basis[0] / sol.basis[0][0, 1]
    np.testing.assert_allclose(u, sx, atol=1e-12)
