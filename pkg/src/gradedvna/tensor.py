"""Graded tensor products of spatially graded algebras.

The graded tensor product of ``(R1, Γ1)`` and ``(R2, Γ2)`` is realized on
``C^{d1} ⊗ C^{d2}`` through

    π(A ⊗̂ B) = A Γ1^{∂B} ⊗ B,

graded by ``Γ1 ⊗ Γ2``. Kronecker products use the row-major index convention
``(i1, i2) -> i1 * d2 + i2`` throughout, and :func:`swap_unitary` is the
permutation matrix of that convention.

Besides the constructions, this module holds one checker per structural
identity of the product. Checkers return small report objects carrying the
largest residual they saw instead of raising on a failed identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    DEFAULT_SEED,
    ProjectionHandle,
    TypeReport,
    VNAlgebra,
    central_support,
    center,
    commutant,
    factor_decomposition,
    from_space,
    generate,
    is_abelian_projection,
    minimal_projections,
    proj_equivalent,
    projection,
)
from .errors import InputError, PreconditionError
from .graded import (
    GradedAlgebra,
    _even_center,
    even_algebra,
    find_odd_symmetry,
    graded_center,
    graded_generators,
    is_central,
    odd_center_line,
    split,
    twist,
    v_unitary,
)
from .linalg import (
    MatSubspace,
    _tol,
    as_cmatrix,
    contains,
    hs_norm,
    orthonormalize,
    range_projection,
    subspace_residual,
)

__all__ = [
    "HomogeneousTensor",
    "GradedTensorProduct",
    "pi_embed",
    "degree",
    "random_homogeneous",
    "verify_sign_rules",
    "graded_tensor",
    "ordinary_tensor",
    "commutant_formula",
    "check_commutant_formula",
    "tensor_center_formula",
    "swap_unitary",
    "swap_isomorphism",
    "even_part_identity",
    "abelian_grid",
    "twisted_product",
    "psi_z",
    "conditional_expectation",
    "check_conditional_expectation",
    "central_support_compare",
    "factor_case_identity",
]


# ---------------------------------------------------------------------------
# homogeneous tensors and π


@dataclass(frozen=True)
class HomogeneousTensor:
    """``a ⊗̂ b`` with ``a`` of degree ``da`` and ``b`` of degree ``db``."""

    a: np.ndarray = field(repr=False)
    da: int
    b: np.ndarray = field(repr=False)
    db: int

    def __mul__(self, other: "HomogeneousTensor") -> "HomogeneousTensor":
        # the formal product, without the sign (the sign is what gets checked)
        return HomogeneousTensor(
            self.a @ other.a, (self.da + other.da) % 2, self.b @ other.b, (self.db + other.db) % 2
        )

    def adjoint(self) -> "HomogeneousTensor":
        return HomogeneousTensor(self.a.conj().T, self.da, self.b.conj().T, self.db)


def degree(gamma: np.ndarray, x: np.ndarray, tol_eq: float | None = None) -> int | None:
    """0 if ``x`` is even, 1 if odd, ``None`` if neither (zero counts as even)."""
    tol = _tol(tol_eq, "eq") * max(1.0, hs_norm(x))
    flipped = gamma @ x @ gamma
    if hs_norm(flipped - x) <= tol:
        return 0
    if hs_norm(flipped + x) <= tol:
        return 1
    return None


def _check_homogeneous(g: GradedAlgebra, x: np.ndarray, deg: int, which: str) -> None:
    if deg not in (0, 1):
        raise InputError(f"degree of {which} must be 0 or 1, got {deg!r}")
    got = degree(g.gamma, x)
    if got is None or (got != deg and hs_norm(x) > 0):
        raise InputError(f"{which} is not homogeneous of degree {deg}")
    if not contains(g.alg.space, x):
        raise InputError(f"{which} does not belong to its algebra")


def pi_embed(g1: GradedAlgebra, g2: GradedAlgebra, t: HomogeneousTensor, *, check: bool = True) -> np.ndarray:
    """``π(a ⊗̂ b) = a Γ1^{∂b} ⊗ b``.

    Raises:
        InputError: if ``a`` or ``b`` is not homogeneous of its stated degree.
    """
    a = as_cmatrix(t.a, g1.hilbert_dim)
    b = as_cmatrix(t.b, g2.hilbert_dim)
    if check:
        _check_homogeneous(g1, a, t.da, "left factor")
        _check_homogeneous(g2, b, t.db, "right factor")
    left = a @ g1.gamma if t.db else a
    return np.kron(left, b)


def random_homogeneous(
    g: GradedAlgebra, deg: int, rng: np.random.Generator
) -> np.ndarray:
    """A random HS-normalized element of the even (0) or odd (1) part; zero if that part is."""
    s = split(g)
    space = s.odd if deg else s.even
    if space.dim == 0:
        return np.zeros((g.hilbert_dim, g.hilbert_dim), dtype=complex)
    c = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
    return space.combine(c / np.linalg.norm(c))


def _random_tensor(g1, g2, rng) -> HomogeneousTensor:
    da, db = (int(x) for x in rng.integers(0, 2, size=2))
    return HomogeneousTensor(random_homogeneous(g1, da, rng), da, random_homogeneous(g2, db, rng), db)


@dataclass(frozen=True)
class SignRuleReport:
    samples: int
    product_residual: float
    adjoint_residual: float
    degree_residual: float
    tol: float

    @property
    def max_residual(self) -> float:
        return max(self.product_residual, self.adjoint_residual, self.degree_residual)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol


def verify_sign_rules(
    g1: GradedAlgebra,
    g2: GradedAlgebra,
    samples: int = 200,
    seed: int = DEFAULT_SEED,
    tol_eq: float | None = None,
) -> SignRuleReport:
    """Check the Koszul signs of π on random homogeneous pairs.

    For each pair ``t1, t2``:

    * ``π(t1) π(t2) = (-1)^{∂b1 ∂a2} π(a1 a2 ⊗̂ b1 b2)``
    * ``π(t1)* = (-1)^{∂a1 ∂b1} π(a1* ⊗̂ b1*)``
    * ``Γ π(t1) Γ = (-1)^{∂a1 + ∂b1} π(t1)`` with ``Γ = Γ1 ⊗ Γ2``.
    """
    rng = np.random.default_rng(seed)
    gam = np.kron(g1.gamma, g2.gamma)
    prod_res = adj_res = deg_res = 0.0
    for _ in range(samples):
        t1 = _random_tensor(g1, g2, rng)
        t2 = _random_tensor(g1, g2, rng)
        p1 = pi_embed(g1, g2, t1, check=False)
        p2 = pi_embed(g1, g2, t2, check=False)
        sign = (-1) ** (t1.db * t2.da)
        prod_res = max(prod_res, hs_norm(p1 @ p2 - sign * pi_embed(g1, g2, t1 * t2, check=False)))
        sign = (-1) ** (t1.da * t1.db)
        adj_res = max(adj_res, hs_norm(p1.conj().T - sign * pi_embed(g1, g2, t1.adjoint(), check=False)))
        sign = (-1) ** (t1.da + t1.db)
        deg_res = max(deg_res, hs_norm(gam @ p1 @ gam - sign * p1))
    return SignRuleReport(samples, prod_res, adj_res, deg_res, _tol(tol_eq, "eq"))


# ---------------------------------------------------------------------------
# the products


@dataclass(frozen=True)
class GradedTensorProduct:
    factors: tuple[GradedAlgebra, GradedAlgebra]
    result: GradedAlgebra


def _memo(g1: GradedAlgebra, key: str, g2, compute):
    # keyed on identity; holding g2 in the list keeps its id from being reused
    entries = g1.cached(key, list)
    for other, value in entries:
        if other is g2:
            return value
    value = compute()
    entries.append((g2, value))
    return value


def graded_tensor(g1: GradedAlgebra, g2: GradedAlgebra) -> GradedTensorProduct:
    """The graded tensor product, graded by ``Γ1 ⊗ Γ2``.

    It is generated by ``π(a ⊗̂ I) = a ⊗ I`` and ``π(I ⊗̂ b) = Γ1^{∂b} ⊗ b``
    over the homogeneous parts of the generators. These suffice because
    ``π(a ⊗̂ b) = π(a ⊗̂ I) π(I ⊗̂ b)``.
    """

    def compute():
        d1, d2 = g1.hilbert_dim, g2.hilbert_dim
        i1, i2 = np.eye(d1), np.eye(d2)
        gens = [np.kron(a, i2) for a in g1.alg.generators]
        gens += [np.kron(g1.gamma if deg else i1, b) for b, deg in graded_generators(g2)]
        alg = generate(gens, d1 * d2)
        return GradedTensorProduct((g1, g2), GradedAlgebra(alg, np.kron(g1.gamma, g2.gamma)))

    return _memo(g1, "gtensor", g2, compute)


def _as_alg(g) -> VNAlgebra:
    return g.alg if isinstance(g, GradedAlgebra) else g


def ordinary_tensor(g1: GradedAlgebra | VNAlgebra, g2: GradedAlgebra | VNAlgebra) -> VNAlgebra:
    """The ordinary tensor product, generated by ``a ⊗ I`` and ``I ⊗ b``."""
    a1, a2 = _as_alg(g1), _as_alg(g2)

    def compute():
        d1, d2 = a1.hilbert_dim, a2.hilbert_dim
        gens = [np.kron(a, np.eye(d2)) for a in a1.generators]
        gens += [np.kron(np.eye(d1), b) for b in a2.generators]
        return generate(gens, d1 * d2)

    if isinstance(g1, GradedAlgebra):
        return _memo(g1, "otensor", a2, compute)
    return a1.cached(("otensor", id(a2)), lambda: (a2, compute()))[1]


def _kron_space(s: MatSubspace, t: MatSubspace) -> MatSubspace:
    """Span of ``x ⊗ y`` over the two bases (already orthonormal)."""
    d = s.ambient_dim * t.ambient_dim
    basis = np.einsum("aij,bkl->abikjl", s.basis, t.basis).reshape(s.dim * t.dim, d, d)
    return MatSubspace(d, basis)


# ---------------------------------------------------------------------------
# commutant and center


def commutant_formula(g1: GradedAlgebra, g2: GradedAlgebra) -> VNAlgebra:
    """The algebra generated by ``X0 ⊗ Y`` and ``X1 ⊗ Y Γ2``.

    ``X0``/``X1`` range over the even/odd part of the commutant of ``R1``
    (graded by ``Γ1``) and ``Y`` over the commutant of ``R2``. The equivalent
    generating set ``{X0 ⊗ I, X1 ⊗ Γ2, I ⊗ Y}`` is used: ``Γ2`` normalizes the
    commutant of ``R2``, so ``X1 ⊗ Y Γ2 = (X1 ⊗ Γ2)(I ⊗ Γ2 Y Γ2)``.
    """
    c1 = GradedAlgebra(commutant(g1.alg), g1.gamma)
    c2 = commutant(g2.alg)
    d1, d2 = g1.hilbert_dim, g2.hilbert_dim
    s = split(c1)
    gens = [np.kron(x, np.eye(d2)) for x in s.even.basis]
    gens += [np.kron(x, g2.gamma) for x in s.odd.basis]
    gens += [np.kron(np.eye(d1), y) for y in c2.space.basis]
    return generate(gens, d1 * d2)


@dataclass(frozen=True)
class FormulaReport:
    lhs: VNAlgebra
    rhs: VNAlgebra
    residual: float
    tol: float

    @property
    def equal(self) -> bool:
        return self.residual <= self.tol


def check_commutant_formula(g1: GradedAlgebra, g2: GradedAlgebra, tol_eq: float | None = None) -> FormulaReport:
    lhs = commutant(graded_tensor(g1, g2).result.alg)
    rhs = commutant_formula(g1, g2)
    return FormulaReport(lhs, rhs, subspace_residual(lhs.space, rhs.space), _tol(tol_eq, "eq"))


def _center_balanced(g: GradedAlgebra, seed: int) -> bool:
    return find_odd_symmetry(graded_center(g), seed) is not None


def tensor_center_formula(
    g1: GradedAlgebra, g2: GradedAlgebra, seed: int = DEFAULT_SEED, tol_eq: float | None = None
) -> FormulaReport:
    """Center of the graded product against the ordinary product of the even centers.

    Raises:
        PreconditionError: unless both graded centers have an odd
            self-adjoint unitary.
    """
    for name, g in (("first", g1), ("second", g2)):
        if not _center_balanced(g, seed):
            raise PreconditionError(f"graded center of the {name} factor is not balanced")
    lhs = center(graded_tensor(g1, g2).result.alg)
    rhs = from_space(_kron_space(_even_center(g1), _even_center(g2)))
    return FormulaReport(lhs, rhs, subspace_residual(lhs.space, rhs.space), _tol(tol_eq, "eq"))


# ---------------------------------------------------------------------------
# swapping the legs


def swap_unitary(d1: int, d2: int) -> np.ndarray:
    """``U (x ⊗ y) = y ⊗ x`` for ``x`` in ``C^{d1}``, ``y`` in ``C^{d2}``."""
    u = np.zeros((d1 * d2, d1 * d2))
    i1, i2 = np.meshgrid(np.arange(d1), np.arange(d2), indexing="ij")
    u[(i2 * d1 + i1).ravel(), (i1 * d2 + i2).ravel()] = 1.0
    return u


@dataclass(frozen=True)
class SwapReport:
    w: np.ndarray = field(repr=False)
    residual: float
    identity_residuals: dict
    samples: int
    tol: float

    @property
    def equal(self) -> bool:
        return self.residual <= self.tol

    @property
    def identities_hold(self) -> bool:
        return max(self.identity_residuals.values()) <= self.tol

    @property
    def passed(self) -> bool:
        return self.equal and self.identities_hold


def swap_isomorphism(
    g1: GradedAlgebra,
    g2: GradedAlgebra,
    samples: int = 50,
    seed: int = DEFAULT_SEED,
    tol_eq: float | None = None,
) -> SwapReport:
    """Conjugation by ``W = U (Γ1⊗Γ2) V (V1⊗V2)`` carries ``R1 ⊗̂ R2`` onto ``R2 ⊗̂ R1``.

    ``V_j = (1-i)/2 I + (1+i)/2 Γ_j`` and ``V`` is the same expression in
    ``Γ1 ⊗ Γ2``. Besides the subspace equality, the four images of homogeneous
    product tensors are checked on random samples:

    * ``A0 ⊗ B0 -> B0 ⊗ A0``
    * ``A0 Γ1 ⊗ B1 -> B1 ⊗ A0``
    * ``A1 ⊗ B0 -> B0 Γ2 ⊗ A1``
    * ``A1 Γ1 ⊗ B1 -> -B1 Γ2 ⊗ A1``
    """
    d1, d2 = g1.hilbert_dim, g2.hilbert_dim
    gam1, gam2 = g1.gamma, g2.gamma
    gam = np.kron(gam1, gam2)
    w = swap_unitary(d1, d2) @ gam @ v_unitary(gam) @ np.kron(v_unitary(gam1), v_unitary(gam2))
    wh = w.conj().T

    src = graded_tensor(g1, g2).result.alg.space
    img = MatSubspace(d1 * d2, orthonormalize(w[None] @ src.basis @ wh[None], d=d1 * d2, scale=1.0).basis)
    target = graded_tensor(g2, g1).result.alg.space
    residual = subspace_residual(img, target)

    rng = np.random.default_rng(seed)
    res = {"A0⊗B0": 0.0, "A0Γ1⊗B1": 0.0, "A1⊗B0": 0.0, "A1Γ1⊗B1": 0.0}
    for _ in range(samples):
        a0, a1 = random_homogeneous(g1, 0, rng), random_homogeneous(g1, 1, rng)
        b0, b1 = random_homogeneous(g2, 0, rng), random_homogeneous(g2, 1, rng)
        cases = {
            "A0⊗B0": (np.kron(a0, b0), np.kron(b0, a0)),
            "A0Γ1⊗B1": (np.kron(a0 @ gam1, b1), np.kron(b1, a0)),
            "A1⊗B0": (np.kron(a1, b0), np.kron(b0 @ gam2, a1)),
            "A1Γ1⊗B1": (np.kron(a1 @ gam1, b1), -np.kron(b1 @ gam2, a1)),
        }
        for key, (x, expected) in cases.items():
            res[key] = max(res[key], hs_norm(w @ x @ wh - expected))
    return SwapReport(w, residual, res, samples, _tol(tol_eq, "eq"))


# ---------------------------------------------------------------------------
# even parts


@dataclass(frozen=True)
class EvenPartReport:
    """Two descriptions of even parts of the graded product.

    Attributes:
        partial_residual: distance between the ``Ad(I⊗Γ2)``-even part and
            ``R1 ⊗ R2^(0)``.
        full_even: type of the ``Ad(Γ1⊗Γ2)``-even part, or ``None`` when the
            graded center of the second factor is not balanced.
        ordinary_even: type of ``R1 ⊗ R2^(0)``.
    """

    partial_residual: float
    full_even: TypeReport | None
    ordinary_even: TypeReport
    tol: float

    @property
    def partial_equal(self) -> bool:
        return self.partial_residual <= self.tol

    @property
    def full_isomorphic(self) -> bool | None:
        if self.full_even is None:
            return None
        return (
            self.full_even.block_sizes == self.ordinary_even.block_sizes
            and self.full_even.algebra_dim == self.ordinary_even.algebra_dim
        )

    @property
    def passed(self) -> bool:
        return self.partial_equal and self.full_isomorphic is not False


def even_part_identity(
    g1: GradedAlgebra, g2: GradedAlgebra, seed: int = DEFAULT_SEED, tol_eq: float | None = None
) -> EvenPartReport:
    """Compare even parts of ``R1 ⊗̂ R2`` with ``R1 ⊗ R2^(0)``.

    Under ``Ad(I⊗Γ2)`` the even part equals ``R1 ⊗ R2^(0)`` as a subspace.
    Under ``Ad(Γ1⊗Γ2)`` it is only isomorphic, provided the graded center of
    ``R2`` is balanced. Isomorphism is certified by equal block sizes and
    equal dimension.
    """
    prod = graded_tensor(g1, g2).result
    d1, d2 = g1.hilbert_dim, g2.hilbert_dim
    partial = GradedAlgebra(prod.alg, np.kron(np.eye(d1), g2.gamma))
    rhs = ordinary_tensor(g1.alg, even_algebra(g2))
    residual = subspace_residual(split(partial).even, rhs.space)
    full = None
    if _center_balanced(g2, seed):
        full = factor_decomposition(even_algebra(prod), seed)
    return EvenPartReport(residual, full, factor_decomposition(rhs, seed), _tol(tol_eq, "eq"))


# ---------------------------------------------------------------------------
# abelian projections of the product


@dataclass(frozen=True)
class AbelianGrid:
    projections: tuple[ProjectionHandle, ...]
    expected_count: int
    checks: dict

    @property
    def passed(self) -> bool:
        return len(self.projections) == self.expected_count and all(self.checks.values())


def _require_central_nonfactor(g: GradedAlgebra, name: str, seed: int) -> None:
    if not is_central(g):
        raise PreconditionError(f"{name} factor is not central")
    if factor_decomposition(g.alg, seed).is_factor:
        raise PreconditionError(f"{name} factor is a factor; a central non-factor is required")


def abelian_grid(g1: GradedAlgebra, g2: GradedAlgebra, seed: int = DEFAULT_SEED) -> AbelianGrid:
    """The ``2mn`` projections ``((I ± U1)/2 E_a) ⊗ F_b`` of the graded product.

    ``U1`` is the odd central symmetry of ``R1``; ``E_a`` and ``F_b`` are minimal
    projections of the even parts of ``R1`` and ``R2`` summing to the identity.

    Raises:
        PreconditionError: unless both factors are central non-factors.
    """
    _require_central_nonfactor(g1, "first", seed)
    _require_central_nonfactor(g2, "second", seed)
    u1 = odd_center_line(g1)
    if u1 is None:
        raise PreconditionError("first factor has no odd central symmetry")
    d1 = g1.hilbert_dim
    es = [e.matrix for e in minimal_projections(even_algebra(g1), seed)]
    fs = [f.matrix for f in minimal_projections(even_algebra(g2), seed)]
    m = len(es)
    n = len(fs)
    prod = graded_tensor(g1, g2).result.alg
    mats = []
    for sign in (1, -1):
        half = (np.eye(d1) + sign * u1) / 2
        for e in es:
            for f in fs:
                mats.append(np.kron(half @ e, f))
    handles = tuple(projection(prod, p) for p in mats)
    d = prod.hilbert_dim
    tol = _tol(None, "eq")
    checks = {
        "abelian": all(is_abelian_projection(prod, h) for h in handles),
        "equivalent": all(proj_equivalent(prod, handles[0], h, seed) for h in handles[1:]),
        "sum_is_identity": hs_norm(sum(mats) - np.eye(d)) <= tol * d,
        "central_support_is_identity": all(
            hs_norm(central_support(prod, h, seed) - np.eye(d)) <= tol * d for h in handles
        ),
    }
    return AbelianGrid(handles, 2 * m * n, checks)


# ---------------------------------------------------------------------------
# conditional expectation onto I ⊗ (R2^(0) + R2^(1) Γ2)


def _unit_vector(z, d1: int) -> np.ndarray:
    z = np.asarray(z, dtype=np.complex128).reshape(-1)
    if z.shape != (d1,):
        raise InputError(f"z must have length {d1}, got {z.shape[0]}")
    if abs(np.linalg.norm(z) - 1.0) > _tol(None, "eq"):
        raise InputError("z must be a unit vector")
    return z


def psi_z(g1: GradedAlgebra, g2: GradedAlgebra, z, t) -> np.ndarray:
    """The ``d2 x d2`` operator ``Ψ`` with ``<Ψx, y> = <E(T)(z⊗x), z⊗y>``.

    ``E(T) = (T + (Γ1⊗I) T (Γ1⊗I)) / 2``, so ``Ψ = (z* ⊗ I) E(T) (z ⊗ I)``.

    Raises:
        InputError: if ``z`` is not a unit vector.
    """
    d1, d2 = g1.hilbert_dim, g2.hilbert_dim
    z = _unit_vector(z, d1)
    t = as_cmatrix(t, d1 * d2)
    g = np.kron(g1.gamma, np.eye(d2))
    e = (t + g @ t @ g) / 2
    zi = np.kron(z.reshape(d1, 1), np.eye(d2))
    return zi.conj().T @ e @ zi


def conditional_expectation(g1: GradedAlgebra, g2: GradedAlgebra, z, t) -> np.ndarray:
    """``Φ_z(T) = I ⊗ Ψ_z(T)``."""
    return np.kron(np.eye(g1.hilbert_dim), psi_z(g1, g2, z, t))


@dataclass(frozen=True)
class ExpectationReport:
    formula_residual: float
    unital_residual: float
    module_residual: float
    range_residual: float
    positivity_min_eig: float
    faithful_hits: int
    faithful_trials: int
    tol_formula: float
    tol: float

    @property
    def passed(self) -> bool:
        return (
            self.formula_residual <= self.tol_formula
            and self.unital_residual <= self.tol
            and self.module_residual <= self.tol
            and self.range_residual <= self.tol
            and self.positivity_min_eig >= -self.tol
            and self.faithful_hits == self.faithful_trials
        )


def twisted_product(g1: GradedAlgebra, g2: GradedAlgebra) -> GradedAlgebra:
    """Even part of the product plus its odd part times ``Γ1 ⊗ Γ2``."""
    return twist(graded_tensor(g1, g2).result)


def _random_unit(d: int, rng) -> np.ndarray:
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return z / np.linalg.norm(z)


def _random_element(space: MatSubspace, rng) -> np.ndarray:
    c = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
    return space.combine(c / np.linalg.norm(c))


def check_conditional_expectation(
    g1: GradedAlgebra,
    g2: GradedAlgebra,
    samples: int = 50,
    positives: int = 20,
    draws: int = 32,
    seed: int = DEFAULT_SEED,
    tol_formula: float = 1e-10,
    tol_eq: float | None = None,
) -> ExpectationReport:
    """Sample the defining properties of ``Φ_z``.

    * ``Ψ_z(A⊗(B+B'Γ2) + CΓ1⊗DΓ2 + EΓ1⊗F) = <Az,z>(B+B'Γ2)`` with ``A`` even,
      ``C, E`` odd in ``R1`` and ``B, D`` even, ``B', F`` odd in ``R2``;
    * ``Φ_z(I) = I``;
    * ``Φ_z((I⊗X) T (I⊗Y)) = (I⊗X) Φ_z(T) (I⊗Y)`` for ``X, Y`` in
      ``R2^(0) + R2^(1)Γ2`` and ``T`` in the twisted product;
    * ``Ψ_z(T)`` lies in ``R2^(0) + R2^(1)Γ2`` and is positive for ``T >= 0``;
    * for nonzero positive ``T`` some ``z`` in the standard basis plus
      ``draws`` random unit vectors gives ``Φ_z(T) != 0``.
    """
    rng = np.random.default_rng(seed)
    d1, d2 = g1.hilbert_dim, g2.hilbert_dim
    gam1, gam2 = g1.gamma, g2.gamma
    tol = _tol(tol_eq, "eq")
    r = twisted_product(g1, g2)
    m = twist(g2).alg.space
    formula = unital = module = rng_res = 0.0
    min_eig = np.inf

    for _ in range(samples):
        z = _random_unit(d1, rng)
        a = random_homogeneous(g1, 0, rng)
        c, e = random_homogeneous(g1, 1, rng), random_homogeneous(g1, 1, rng)
        b, dd = random_homogeneous(g2, 0, rng), random_homogeneous(g2, 0, rng)
        bp, f = random_homogeneous(g2, 1, rng), random_homogeneous(g2, 1, rng)
        t = np.kron(a, b + bp @ gam2) + np.kron(c @ gam1, dd @ gam2) + np.kron(e @ gam1, f)
        expected = (z.conj() @ a @ z) * (b + bp @ gam2)
        formula = max(formula, hs_norm(psi_z(g1, g2, z, t) - expected))

        unital = max(unital, hs_norm(conditional_expectation(g1, g2, z, np.eye(d1 * d2)) - np.eye(d1 * d2)))

        t = _random_element(r.alg.space, rng)
        x, y = _random_element(m, rng), _random_element(m, rng)
        ix, iy = np.kron(np.eye(d1), x), np.kron(np.eye(d1), y)
        lhs = conditional_expectation(g1, g2, z, ix @ t @ iy)
        rhs = ix @ conditional_expectation(g1, g2, z, t) @ iy
        module = max(module, hs_norm(lhs - rhs))
        p = psi_z(g1, g2, z, t)
        rng_res = max(rng_res, hs_norm(p - m.project(p)))

        pos = t.conj().T @ t
        p = psi_z(g1, g2, z, pos)
        min_eig = min(min_eig, float(np.linalg.eigvalsh((p + p.conj().T) / 2).min()) / max(1.0, hs_norm(pos)))

    hits = 0
    grid = [np.eye(d1)[k] for k in range(d1)] + [_random_unit(d1, rng) for _ in range(draws)]
    for _ in range(positives):
        s = _random_element(r.alg.space, rng)
        t = s.conj().T @ s
        scale = hs_norm(t)
        if any(hs_norm(psi_z(g1, g2, z, t)) > tol * scale for z in grid):
            hits += 1
    return ExpectationReport(
        formula, unital, module, rng_res, min_eig, hits, positives, tol_formula, tol
    )


# ---------------------------------------------------------------------------
# central supports and the factor case


@dataclass(frozen=True)
class SupportReport:
    c: np.ndarray = field(repr=False)
    d: np.ndarray = field(repr=False)
    residual: float
    tol: float

    @property
    def equal(self) -> bool:
        return self.residual <= self.tol


def central_support_compare(
    g1: GradedAlgebra,
    g2: GradedAlgebra,
    a,
    b,
    seed: int = DEFAULT_SEED,
    tol_eq: float | None = None,
) -> SupportReport:
    """Central support of the range of ``A ⊗ B`` in the graded and the ordinary product.

    Raises:
        InputError: if ``A`` or ``B`` is not an even element of its algebra.
    """
    a = as_cmatrix(a, g1.hilbert_dim)
    b = as_cmatrix(b, g2.hilbert_dim)
    _check_homogeneous(g1, a, 0, "left element")
    _check_homogeneous(g2, b, 0, "right element")
    p = range_projection(np.kron(a, b))
    c = central_support(graded_tensor(g1, g2).result.alg, p, seed)
    d = central_support(ordinary_tensor(g1, g2), p, seed)
    return SupportReport(c, d, hs_norm(c - d), _tol(tol_eq, "eq"))


@dataclass(frozen=True)
class FactorCaseReport:
    residual: float
    graded_type: TypeReport
    ordinary_type: TypeReport
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol and self.graded_type.profile == self.ordinary_type.profile


def factor_case_identity(
    g1: GradedAlgebra, g2: GradedAlgebra, seed: int = DEFAULT_SEED, tol_eq: float | None = None
) -> FactorCaseReport:
    """For ``R1`` all of ``B(C^{d1})`` and ``R2`` balanced, the graded and ordinary products coincide.

    Raises:
        PreconditionError: if ``R1`` is not the full matrix algebra or ``R2``
            has no odd self-adjoint unitary.
    """
    t1 = factor_decomposition(g1.alg, seed)
    if t1.profile != ((g1.hilbert_dim, 1),):
        raise PreconditionError("first factor must be the full matrix algebra on its space")
    if find_odd_symmetry(g2, seed) is None:
        raise PreconditionError("second factor is not balanced")
    graded = graded_tensor(g1, g2).result.alg
    ordinary = ordinary_tensor(g1, g2)
    return FactorCaseReport(
        subspace_residual(graded.space, ordinary.space),
        factor_decomposition(graded, seed),
        factor_decomposition(ordinary, seed),
        _tol(tol_eq, "eq"),
    )
