import numpy as np
import pytest
from hypothesis import given, strategies as st

from gradedvna import (
    InputError,
    center,
    commutant,
    factor_decomposition,
    generate,
    is_abelian_projection,
    minimal_projections,
)
from gradedvna.graded import (
    GradedAlgebra,
    balance_certificate,
    center_grading_split,
    even_algebra,
    find_odd_symmetry,
    graded_center,
    homogeneous_parts,
    implementing_symmetry,
    is_balanced,
    is_central,
    minimal_even_projections,
    odd_center_line,
    split,
    twist,
    v_conjugate,
    v_unitary,
)
from gradedvna.linalg import contains, full_space, intersect, subspace_equal
from gradedvna.presets import build_preset, conjugated, random_unitary, trivial

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0, -1.0]).astype(complex)

seeds = st.integers(min_value=0, max_value=2**32 - 1)
presets = st.sampled_from(
    ["sp:1", "sp:2", "mf:1,1", "mf:2,1", "mf:2,2", "diag:4,(1 2)", "diag:3,(1 3)", "clifford:3"]
)


def m2_graded(gamma):
    return GradedAlgebra(generate([SX, SZ], 2), gamma)


def rotated(name, seed):
    g = build_preset(name)
    return conjugated(g, random_unitary(g.hilbert_dim, np.random.default_rng(seed)))


# -- split and homogeneous parts --------------------------------------------------


def test_trivial_grading_has_no_odd_part():
    s = split(m2_graded(np.eye(2)))
    assert (s.even.dim, s.odd.dim) == (4, 0)


def test_diagonal_grading_of_m2():
    s = split(m2_graded(SZ))
    assert (s.even.dim, s.odd.dim) == (2, 2)
    assert contains(s.even, SZ) and contains(s.odd, SX) and contains(s.odd, SY)


def test_split_of_sp1():
    s = split(build_preset("sp:1"))
    assert (s.even.dim, s.odd.dim) == (1, 1)
    assert contains(s.even, np.eye(2)) and contains(s.odd, SZ)


@given(presets, seeds)
def test_split_invariants(name, seed):
    g = rotated(name, seed)
    s = split(g)
    assert s.even.dim + s.odd.dim == g.alg.dim
    gam = g.gamma
    for b in s.even.basis:
        np.testing.assert_allclose(gam @ b @ gam, b, atol=1e-8)
    for b in s.odd.basis:
        np.testing.assert_allclose(gam @ b @ gam, -b, atol=1e-8)
    assert subspace_equal(full_space(1), full_space(1))
    both = np.concatenate([s.even.basis, s.odd.basis])
    for b in g.alg.space.basis:
        coeffs = np.einsum("kij,ij->k", both.conj(), b)
        np.testing.assert_allclose(np.einsum("k,kij->ij", coeffs, both), b, atol=1e-8)


def test_homogeneous_parts_examples():
    g = build_preset("sp:1")
    x0, x1 = homogeneous_parts(g, np.eye(2) + 3 * SZ)
    np.testing.assert_allclose(x0, np.eye(2))
    np.testing.assert_allclose(x1, 3 * SZ)
    x0, x1 = homogeneous_parts(g, SZ)
    assert np.abs(x0).max() == 0


def test_homogeneous_parts_rejects_outsiders():
    with pytest.raises(InputError, match="does not belong"):
        homogeneous_parts(build_preset("sp:1"), SX)


@given(presets, seeds)
def test_homogeneous_parts_reconstruct(name, seed):
    g = build_preset(name)
    rng = np.random.default_rng(seed)
    b = g.alg.space.basis
    x = np.einsum("k,kij->ij", rng.standard_normal(len(b)) + 1j * rng.standard_normal(len(b)), b)
    x0, x1 = homogeneous_parts(g, x)
    # equal up to the rounding of one subtraction
    assert np.abs(x0 + x1 - x).max() <= 4 * np.finfo(float).eps * np.abs(x).max()


# -- grading validation --------------------------------------------------------------


def test_invalid_gradings():
    alg = generate([SX, SZ], 2)
    with pytest.raises(InputError, match="not involutive"):
        GradedAlgebra(alg, 2 * np.eye(2))
    with pytest.raises(InputError, match="not self-adjoint"):
        GradedAlgebra(alg, np.array([[0, 1], [0, 0]]))
    diag = generate([np.diag([1.0, 2.0])], 2)
    h = (SX + SZ) / np.sqrt(2)
    with pytest.raises(InputError, match="does not normalize"):
        GradedAlgebra(diag, h)


# -- centers ------------------------------------------------------------------------


def test_graded_center_examples():
    gc = graded_center(build_preset("mf:2,1"))
    assert gc.alg.dim == 1
    gc = graded_center(build_preset("sp:3"))
    assert gc.alg.dim == 2
    assert split(gc).odd.dim == 1


def test_is_central_examples():
    assert is_central(build_preset("mf:2,1"))
    assert is_central(build_preset("sp:2"))
    m2m2 = trivial(generate([np.kron(np.eye(2), SX), np.kron(np.eye(2), SZ), np.kron(SZ, np.eye(2))], 4))
    assert not is_central(m2m2)


def test_odd_center_line_examples():
    assert odd_center_line(build_preset("mf:2,1")) is None
    np.testing.assert_allclose(odd_center_line(build_preset("sp:1")), SZ, atol=1e-12)
    np.testing.assert_allclose(
        odd_center_line(build_preset("sp:3")), np.diag([1.0] * 3 + [-1.0] * 3), atol=1e-12
    )


def test_odd_center_line_requires_central():
    with pytest.raises(InputError):
        odd_center_line(build_preset("diag:3,(1 2)"))


@given(presets, seeds)
def test_graded_center_is_graded(name, seed):
    g = rotated(name, seed)
    gc = graded_center(g)  # raises if Ad_Γ fails to preserve the center
    assert subspace_equal(gc.alg.space, center(g.alg).space)


@given(st.sampled_from(["mf:1,1", "mf:2,1", "mf:3,1", "mf:2,2"]), seeds)
def test_center_inside_even_center_when_odd_center_vanishes(name, seed):
    g = rotated(name, seed)
    assert odd_center_line(g) is None
    even = split(g).even.basis
    for z in center(g.alg).space.basis:
        assert np.abs(z[None] @ even - even @ z[None]).max() < 1e-8


@given(st.sampled_from(["sp:1", "sp:2", "sp:3", "clifford:3"]), seeds)
def test_even_center_inside_center_when_odd_line_exists(name, seed):
    g = rotated(name, seed)
    assert odd_center_line(g) is not None
    ev = even_algebra(g)
    for z in center(ev).space.basis:
        assert contains(center(g.alg).space, z)


@given(st.sampled_from(["sp:1", "sp:2", "sp:3", "clifford:3"]), seeds)
def test_even_abelian_projections_stay_abelian(name, seed):
    g = rotated(name, seed)
    ev = even_algebra(g)
    for p in minimal_projections(ev, seed=seed % 1000):
        assert is_abelian_projection(ev, p.matrix)
        assert is_abelian_projection(g.alg, p.matrix)


@pytest.mark.parametrize("name,n", [("sp:1", 1), ("sp:2", 2), ("sp:3", 3), ("clifford:3", 2)])
def test_even_part_of_central_nonfactor_is_factor(name, n):
    g = build_preset(name)
    rep = factor_decomposition(g.alg)
    assert is_central(g) and not rep.is_factor and rep.block_sizes == (n, n)
    even = factor_decomposition(even_algebra(g))
    assert even.is_factor and even.block_sizes == (n,)


# -- implementing symmetries and balance --------------------------------------------


def test_implementing_symmetry_identity():
    alg = generate([SX, SZ], 2)
    u = implementing_symmetry(alg, list(alg.space.basis))
    np.testing.assert_allclose(u, np.eye(2), atol=1e-12)


@pytest.mark.parametrize("s", [SZ, SX])
def test_implementing_symmetry_recovers_pauli(s):
    alg = generate([SX, SZ], 2)
    images = [s @ b @ s for b in alg.space.basis]
    u = implementing_symmetry(alg, images)
    assert min(np.abs(u - s).max(), np.abs(u + s).max()) < 1e-12
    np.testing.assert_allclose(u, u.conj().T, atol=1e-12)


def test_implementing_symmetry_rejects_non_factor():
    alg = generate([np.diag([1.0, 2.0])], 2)
    with pytest.raises(InputError, match="not a factor"):
        implementing_symmetry(alg, list(alg.space.basis))


@pytest.mark.parametrize(
    "name,balanced",
    [("sp:1", True), ("sp:3", True), ("mf:1,1", True), ("mf:2,1", False), ("mf:2,2", True),
     ("mf:3,1", False), ("diag:4,(1 2)", False), ("diag:4,(1 2)(3 4)", True), ("clifford:2", True)],
)
def test_balance_decisions(name, balanced):
    assert is_balanced(build_preset(name)) is balanced


def test_trivially_graded_m2_is_not_balanced():
    cert = balance_certificate(trivial(generate([SX, SZ], 2)))
    assert not cert.balanced
    assert cert.signatures == ((0, 2, 0),)
    assert "signature (2, 0)" in cert.obstruction


def test_mf21_certificate():
    cert = balance_certificate(build_preset("mf:2,1"))
    assert cert.signatures == ((0, 2, 1),) and cert.swapped == ()


@given(presets, seeds)
def test_odd_symmetry_checks(name, seed):
    g = rotated(name, seed)
    cert = balance_certificate(g)
    u = find_odd_symmetry(g)
    if u is None:
        assert any(p != q for _, p, q in cert.signatures)
        return
    d = g.hilbert_dim
    assert u in g.alg
    np.testing.assert_allclose(g.gamma @ u @ g.gamma, -u, atol=1e-8)
    np.testing.assert_allclose(u, u.conj().T, atol=1e-8)
    np.testing.assert_allclose(u @ u, np.eye(d), atol=1e-8)


@given(presets, seeds)
def test_balance_is_conjugation_invariant(name, seed):
    assert is_balanced(rotated(name, seed)) == is_balanced(build_preset(name))


# -- twist and V --------------------------------------------------------------------


def test_twist_of_trivial_grading_is_identity():
    g = trivial(generate([SX, SZ], 2))
    assert subspace_equal(twist(g).alg.space, g.alg.space)


def test_twist_of_sp1():
    t = twist(build_preset("sp:1"))
    assert t.alg.dim == 2
    assert contains(t.alg.space, 1j * SY) and contains(t.alg.space, np.eye(2))


@given(presets, seeds)
def test_twist_is_graded_involution(name, seed):
    g = rotated(name, seed)
    t = twist(g)
    s, st_ = split(g), split(t)
    assert subspace_equal(st_.even, s.even)
    for b in s.odd.basis:
        assert contains(st_.odd, b @ g.gamma)
    assert subspace_equal(twist(t).alg.space, g.alg.space)


def test_v_of_trivial_grading():
    g = trivial(generate([SX, SZ], 2))
    v, img = v_conjugate(g)
    np.testing.assert_allclose(v, np.eye(2))
    assert subspace_equal(img.space, g.alg.space)


def test_v_on_sp1_odd_element():
    v = v_unitary(SX)
    out = v.conj().T @ SZ @ v
    np.testing.assert_allclose(out, 1j * SZ @ SX, atol=1e-12)
    np.testing.assert_allclose(out, np.array([[0, 1j], [-1j, 0]]), atol=1e-12)


@given(presets, seeds)
def test_v_image_is_twist(name, seed):
    g = rotated(name, seed)
    v, img = v_conjugate(g)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(g.hilbert_dim), atol=1e-10)
    assert subspace_equal(img.space, twist(g).alg.space)
    for x in split(g).even.basis:
        np.testing.assert_allclose(v.conj().T @ x @ v, x, atol=1e-8)


# -- center splitting ---------------------------------------------------------------


def test_center_split_trivial_grading():
    p, q = center_grading_split(trivial(generate([SX, SZ], 2)))
    np.testing.assert_allclose(p, np.eye(2))
    assert np.abs(q).max() == 0


def test_center_split_sp1():
    p, q = center_grading_split(build_preset("sp:1"))
    assert np.abs(p).max() == 0
    np.testing.assert_allclose(q, np.diag([1.0, 0.0]), atol=1e-12)


def test_center_split_diag4():
    p, q = center_grading_split(build_preset("diag:4,(1 2)"))
    np.testing.assert_allclose(p, np.diag([0.0, 0, 1, 1]), atol=1e-12)
    np.testing.assert_allclose(q, np.diag([1.0, 0, 0, 0]), atol=1e-12)


@given(presets, seeds)
def test_center_split_relation(name, seed):
    g = rotated(name, seed)
    p, q = center_grading_split(g)
    d = g.hilbert_dim
    gam = g.gamma
    np.testing.assert_allclose(gam @ q @ gam, np.eye(d) - p - q, atol=1e-8)
    np.testing.assert_allclose(gam @ p @ gam, p, atol=1e-8)
    assert contains(center(g.alg).space, p) and contains(center(g.alg).space, q)


# -- minimal even projections -------------------------------------------------------


def test_minimal_even_projections_identity():
    ps = minimal_even_projections(2, np.eye(2))
    assert sorted(tuple(np.diag(p).real.round(12)) for p in ps) == [(0.0, 1.0), (1.0, 0.0)]


def test_minimal_even_projections_sigma_x():
    ps = minimal_even_projections(2, SX)
    np.testing.assert_allclose(ps[0], np.full((2, 2), 0.5), atol=1e-12)
    np.testing.assert_allclose(ps[1], np.array([[0.5, -0.5], [-0.5, 0.5]]), atol=1e-12)


def test_minimal_even_projections_diagonal():
    ps = minimal_even_projections(3, np.diag([1.0, -1.0, 1.0]))
    diags = sorted(tuple(np.diag(p).real.round(12)) for p in ps)
    assert diags == sorted(tuple(r) for r in np.eye(3))


def test_minimal_even_projections_rejects_bad_gamma():
    with pytest.raises(InputError):
        minimal_even_projections(2, np.diag([1.0, 2.0]))


@given(seeds, st.integers(1, 6), st.integers(0, 6))
def test_minimal_even_projections_properties(seed, d, plus):
    plus = min(plus, d)
    rng = np.random.default_rng(seed)
    u = random_unitary(d, rng)
    gamma = u @ np.diag([1.0] * plus + [-1.0] * (d - plus)) @ u.conj().T
    ps = minimal_even_projections(d, gamma)
    assert len(ps) == d
    np.testing.assert_allclose(sum(ps), np.eye(d), atol=1e-9)
    for i, p in enumerate(ps):
        assert abs(np.trace(p) - 1) < 1e-9
        np.testing.assert_allclose(gamma @ p @ gamma, p, atol=1e-9)
        for r in ps[i + 1:]:
            assert np.abs(p @ r).max() < 1e-9
    # +1 eigenvectors come first
    for p in ps[:plus]:
        np.testing.assert_allclose(gamma @ p, p, atol=1e-9)


def test_unused_helpers_are_consistent():
    # the commutant of a graded algebra is graded by the same Γ
    g = build_preset("mf:2,1")
    GradedAlgebra(commutant(g.alg), g.gamma)
    assert intersect(split(g).even, split(g).odd).dim == 0
