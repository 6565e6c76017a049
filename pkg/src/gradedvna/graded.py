"""Spatially graded algebras ``(R, Γ)`` with ``Γ`` a self-adjoint unitary and ``ΓRΓ = R``.

Every element splits as ``x = x0 + x1`` with ``Γx0Γ = x0`` (even) and
``Γx1Γ = -x1`` (odd). The decision procedures here are structural: whether an
odd self-adjoint unitary exists is read off from how ``Ad_Γ`` acts on the
central summands, never searched for numerically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import (
    DEFAULT_SEED,
    VNAlgebra,
    center,
    factor_decomposition,
    from_space,
    minimal_central_projections,
    projection_rank,
)
from .errors import InputError, InvariantViolationError
from .linalg import (
    MatSubspace,
    _eig_clusters,
    _tol,
    as_cmatrix,
    contains,
    hs_inner,
    hs_norm,
    intersect,
    is_self_adjoint_unitary,
    orthonormalize,
    restricted_nullspace,
)

__all__ = [
    "GradedAlgebra",
    "GradedSplit",
    "BalanceCertificate",
    "split",
    "homogeneous_parts",
    "even_algebra",
    "graded_center",
    "is_central",
    "odd_center_line",
    "implementing_symmetry",
    "balance_certificate",
    "find_odd_symmetry",
    "is_balanced",
    "twist",
    "v_unitary",
    "v_conjugate",
    "center_grading_split",
    "minimal_even_projections",
    "grading_permutation",
]


class GradedAlgebra:
    """A von Neumann algebra together with a grading operator.

    Args:
        alg: the underlying algebra.
        gamma: self-adjoint unitary with ``Γ alg Γ = alg``.
        validate: check both conditions (raises :class:`InputError`).
    """

    __slots__ = ("alg", "gamma", "_cache")

    def __init__(self, alg: VNAlgebra, gamma, *, validate: bool = True, tol_eq: float | None = None):
        self.alg = alg
        self.gamma = as_cmatrix(gamma, alg.hilbert_dim)
        self._cache: dict = {}
        if validate:
            problems = grading_problems(alg, self.gamma, tol_eq)
            if problems:
                raise InputError(problems[0])

    @property
    def hilbert_dim(self) -> int:
        return self.alg.hilbert_dim

    def cached(self, key, compute):
        if key not in self._cache:
            self._cache[key] = compute()
        return self._cache[key]

    def __repr__(self) -> str:
        return f"<GradedAlgebra dim={self.alg.dim} on C^{self.hilbert_dim}>"


def grading_problems(alg: VNAlgebra, gamma: np.ndarray, tol_eq: float | None = None) -> list[str]:
    """Reasons ``gamma`` fails to grade ``alg``; empty when it does."""
    tol = _tol(tol_eq, "eq")
    d = alg.hilbert_dim
    out = []
    if hs_norm(gamma - gamma.conj().T) > tol:
        out.append("grading operator is not self-adjoint")
    if hs_norm(gamma @ gamma - np.eye(d)) > tol:
        out.append("grading not involutive")
    if out:
        return out
    for b in alg.space.basis:
        if not contains(alg.space, gamma @ b @ gamma, tol):
            out.append("grading does not normalize algebra")
            break
    return out


@dataclass(frozen=True)
class GradedSplit:
    even: MatSubspace
    odd: MatSubspace


def _parity_parts(basis: np.ndarray, gamma: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    flipped = gamma[None] @ basis @ gamma[None]
    return (basis + flipped) / 2, (basis - flipped) / 2


def split(g: GradedAlgebra) -> GradedSplit:
    """Even and odd subspaces of the algebra."""

    def compute():
        d = g.hilbert_dim
        ev, od = _parity_parts(g.alg.space.basis, g.gamma)
        return GradedSplit(orthonormalize(ev, d=d, scale=1.0), orthonormalize(od, d=d, scale=1.0))

    return g.cached("split", compute)


def homogeneous_parts(g: GradedAlgebra, x) -> tuple[np.ndarray, np.ndarray]:
    """``(x0, x1)`` with ``x0`` even, ``x1`` odd and ``x0 + x1 = x``.

    Raises:
        InputError: if ``x`` is not in the algebra.
    """
    x = as_cmatrix(x, g.hilbert_dim)
    if not contains(g.alg.space, x):
        raise InputError("element does not belong to the algebra")
    x1 = (x - g.gamma @ x @ g.gamma) / 2
    return x - x1, x1


def graded_generators(g: GradedAlgebra) -> list[tuple[np.ndarray, int]]:
    """Nonzero homogeneous parts of the generators, tagged with their degree."""
    tol = _tol(None, "eq")
    out = []
    for x in g.alg.generators:
        x1 = (x - g.gamma @ x @ g.gamma) / 2
        x0 = x - x1
        for part, deg in ((x0, 0), (x1, 1)):
            if hs_norm(part) > tol * max(1.0, hs_norm(x)):
                out.append((part, deg))
    return out


def even_algebra(g: GradedAlgebra) -> VNAlgebra:
    """The even part as an algebra in its own right."""
    return g.cached("even_alg", lambda: from_space(split(g).even))


def graded_center(g: GradedAlgebra) -> GradedAlgebra:
    """The center with the same grading operator.

    Raises:
        InputError: if ``Ad_Γ`` fails to preserve the center, which would
            contradict the fact that any automorphism fixes the center setwise.
    """
    return g.cached("gcenter", lambda: GradedAlgebra(center(g.alg), g.gamma))


def _even_center(g: GradedAlgebra) -> MatSubspace:
    return g.cached("zeven", lambda: intersect(center(g.alg).space, split(g).even))


def _odd_center(g: GradedAlgebra) -> MatSubspace:
    return g.cached("zodd", lambda: intersect(center(g.alg).space, split(g).odd))


def is_central(g: GradedAlgebra) -> bool:
    """Whether the even part of the center is just the scalars."""
    return _even_center(g).dim == 1


def _phase_fix(x: np.ndarray) -> np.ndarray:
    """Fix the overall sign of a self-adjoint matrix deterministically.

    The first entry (row-major) of significant size is made to have positive
    real part, or positive imaginary part if it is purely imaginary.
    """
    flat = x.reshape(-1)
    big = np.abs(flat)
    k = int(np.argmax(big > 1e-6 * big.max()))
    v = flat[k]
    if abs(v.real) > 1e-6 * abs(v):
        return x if v.real > 0 else -x
    return x if v.imag > 0 else -x


def _self_adjoint_phase(x: np.ndarray) -> np.ndarray:
    """Rescale ``x`` by a phase so that it is self-adjoint, given ``x* ∝ x``."""
    lam = hs_inner(x, x.conj().T) / hs_inner(x, x)
    return x * np.exp(0.5j * np.angle(lam))


def odd_center_line(g: GradedAlgebra) -> np.ndarray | None:
    """Normalized generator ``b`` of the odd part of the center, if any.

    ``b`` is a self-adjoint unitary, with its sign fixed by :func:`_phase_fix`.

    Raises:
        InputError: if the algebra is not central.
        InvariantViolationError: if the odd center is more than a line.
    """
    if not is_central(g):
        raise InputError("odd center line requires a central graded algebra")

    def compute():
        z1 = _odd_center(g)
        if z1.dim == 0:
            return None
        if z1.dim > 1:
            raise InvariantViolationError(
                f"odd center of a central graded algebra has dimension {z1.dim}, expected at most 1"
            )
        b = _self_adjoint_phase(z1.basis[0])
        b = b / np.sqrt(np.real(np.trace(b @ b)) / g.hilbert_dim)
        b = _phase_fix((b + b.conj().T) / 2)
        if not is_self_adjoint_unitary(b):
            raise InvariantViolationError("odd central element does not normalize to a unitary")
        return b

    return g.cached("oddline", compute)


def implementing_symmetry(
    space: MatSubspace | VNAlgebra,
    images: Sequence[np.ndarray],
    *,
    elements: Sequence[np.ndarray] | None = None,
    unit: np.ndarray | None = None,
    tol_rank: float | None = None,
) -> np.ndarray:
    """Self-adjoint unitary ``u`` in ``space`` with ``u x u = θ(x)``.

    ``θ`` is described by its values ``images`` on ``elements`` (by default the
    basis of ``space``), which should generate the summand. The intertwining
    equations ``θ(x) u = u x`` have a one-dimensional solution space exactly when
    the summand is a factor; the solution is rescaled to a unitary and then
    rephased so that it squares to ``unit``.

    Args:
        space: the summand ``zAz`` (or a whole factor).
        images: ``θ`` applied to each element.
        elements: the elements ``x``; defaults to ``space`` basis.
        unit: identity of the summand; defaults to ``I``.

    Raises:
        InputError: if the solution space is not one-dimensional.
    """
    if isinstance(space, VNAlgebra):
        space = space.space
    d = space.ambient_dim
    elems = list(space.basis) if elements is None else [as_cmatrix(x, d) for x in elements]
    imgs = [as_cmatrix(x, d) for x in images]
    unit = np.eye(d, dtype=complex) if unit is None else as_cmatrix(unit, d)
    scale = max((hs_norm(x) for x in elems), default=1.0) or 1.0
    sol = restricted_nullspace(space, elems, _tol(tol_rank, "rank") * scale, images=imgs)
    if sol.dim != 1:
        raise InputError(
            f"intertwining equations have a {sol.dim}-dimensional solution space; "
            "the summand is not a factor"
        )
    u = sol.basis[0]
    r = projection_rank(unit)
    u = u / np.sqrt(np.real(np.trace(u @ u.conj().T)) / r)
    phase = np.trace(u @ u) / r
    u = u * np.exp(-0.5j * np.angle(phase))
    u = _phase_fix((u + u.conj().T) / 2)
    tol = _tol(None, "eq")
    if hs_norm(u @ u - unit) > tol * max(1.0, r):
        raise InvariantViolationError("implementing unitary does not square to the unit")
    return u


def grading_permutation(g: GradedAlgebra, seed: int = DEFAULT_SEED) -> list[int]:
    """Index ``j`` with ``Γ z_i Γ = z_j`` for each minimal central projection ``z_i``."""

    def compute():
        zs = [z.matrix for z in minimal_central_projections(g.alg, seed)]
        tol = _tol(None, "eq")
        perm = []
        for z in zs:
            img = g.gamma @ z @ g.gamma
            hits = [j for j, w in enumerate(zs) if hs_norm(img - w) <= tol * max(1.0, hs_norm(z))]
            if len(hits) != 1:
                raise InvariantViolationError(
                    "grading does not permute the minimal central projections"
                )
            perm.append(hits[0])
        if any(perm[perm[i]] != i for i in range(len(perm))):
            raise InvariantViolationError("grading permutation is not an involution")
        return perm

    return g.cached(("perm", seed), compute)


@dataclass(frozen=True)
class BalanceCertificate:
    """Outcome of the structural balance test.

    Attributes:
        symmetry: an odd self-adjoint unitary, or ``None``.
        swapped: index pairs of central summands exchanged by the grading.
        signatures: ``(index, p, q)`` for each fixed summand, where ``p`` and
            ``q`` count the ``+1`` and ``-1`` eigenvalues of the implementing
            symmetry on the ``n x n`` block.
    """

    symmetry: np.ndarray | None = field(repr=False)
    swapped: tuple[tuple[int, int], ...]
    signatures: tuple[tuple[int, int, int], ...]

    @property
    def balanced(self) -> bool:
        return self.symmetry is not None

    @property
    def obstruction(self) -> str | None:
        for i, p, q in self.signatures:
            if p != q:
                return f"summand {i} is fixed by the grading with signature ({p}, {q})"
        return None


def _summand_space(alg: VNAlgebra, z: np.ndarray) -> MatSubspace:
    return orthonormalize(z[None] @ alg.space.basis @ z[None], d=alg.hilbert_dim, scale=1.0)


def _fixed_summand_symmetry(g: GradedAlgebra, z: np.ndarray) -> np.ndarray:
    comp = _summand_space(g.alg, z)
    elems = [z @ x @ z for x in g.alg.generators] + [z]
    elems = [x for x in elems if hs_norm(x) > 0]
    imgs = [g.gamma @ x @ g.gamma for x in elems]
    try:
        return implementing_symmetry(comp, imgs, elements=elems, unit=z)
    except InputError:
        # the generators compress to too little; fall back to the full basis
        imgs = [g.gamma @ x @ g.gamma for x in comp.basis]
        return implementing_symmetry(comp, imgs, unit=z)


def _partial_isometry(x: np.ndarray, tol: float) -> np.ndarray:
    """Polar part of ``x``: ``x (x*x)^{-1/2}`` on the support of ``x``."""
    u, s, vh = np.linalg.svd(x)
    keep = s > tol * max(1.0, s[0])
    return u[:, keep] @ vh[keep]


def balance_certificate(g: GradedAlgebra, seed: int = DEFAULT_SEED) -> BalanceCertificate:
    """Decide whether an odd self-adjoint unitary exists, and build one if so."""

    def compute():
        alg = g.alg
        d = g.hilbert_dim
        report = factor_decomposition(alg, seed)
        zs = [s.central_projection for s in report.summands]
        perm = grading_permutation(g, seed)
        rng = np.random.default_rng(seed + 2)
        tol = _tol(None, "eq")
        total = np.zeros((d, d), dtype=complex)
        swapped, sigs = [], []
        ok = True
        for i, j in enumerate(perm):
            z = zs[i]
            if j != i:
                if i < j:
                    swapped.append((i, j))
                    total += z - zs[j]
                continue
            summand = report.summands[i]
            u = _fixed_summand_symmetry(g, z)
            plus = (z + u) / 2
            minus = (z - u) / 2
            m = summand.multiplicity
            p, q = projection_rank(plus) // m, projection_rank(minus) // m
            sigs.append((i, p, q))
            if p != q:
                ok = False
                continue
            block = orthonormalize(minus[None] @ alg.space.basis @ plus[None], d=d, scale=1.0)
            c = rng.standard_normal(block.dim) + 1j * rng.standard_normal(block.dim)
            v = _partial_isometry(block.combine(c), tol)
            total += v + v.conj().T
        sym = None
        if ok:
            sym = total
            problems = []
            if not contains(alg.space, sym):
                problems.append("not in the algebra")
            if hs_norm(g.gamma @ sym @ g.gamma + sym) > tol * max(1.0, hs_norm(sym)):
                problems.append("not odd")
            if not is_self_adjoint_unitary(sym):
                problems.append("not a self-adjoint unitary")
            if problems:
                raise InvariantViolationError(
                    "constructed odd symmetry failed checks: " + ", ".join(problems)
                )
        return BalanceCertificate(sym, tuple(swapped), tuple(sigs))

    return g.cached(("balance", seed), compute)


def find_odd_symmetry(g: GradedAlgebra, seed: int = DEFAULT_SEED) -> np.ndarray | None:
    """An odd self-adjoint unitary in the algebra, or ``None`` if there is none."""
    return balance_certificate(g, seed).symmetry


def is_balanced(g: GradedAlgebra, seed: int = DEFAULT_SEED) -> bool:
    return balance_certificate(g, seed).balanced


def twist(g: GradedAlgebra) -> GradedAlgebra:
    """The algebra ``R0 + R1 Γ``, graded by the same ``Γ``."""

    def compute():
        s = split(g)
        d = g.hilbert_dim
        space = orthonormalize(
            np.concatenate([s.even.basis, s.odd.basis @ g.gamma[None]]), d=d, scale=1.0
        )
        gens = []
        for x, deg in graded_generators(g):
            gens.append(x @ g.gamma if deg else x)
        return GradedAlgebra(from_space(space, gens), g.gamma)

    return g.cached("twist", compute)


def v_unitary(gamma: np.ndarray) -> np.ndarray:
    """``V = (1-i)/2 I + (1+i)/2 Γ``."""
    d = gamma.shape[0]
    return (1 - 1j) / 2 * np.eye(d) + (1 + 1j) / 2 * gamma


def v_conjugate(g: GradedAlgebra) -> tuple[np.ndarray, VNAlgebra]:
    """The unitary ``V`` and the algebra ``V* R V``, which equals the twist.

    Raises:
        InvariantViolationError: if ``V`` is not unitary or the image of some
            basis element differs from ``x0 + i x1 Γ``.
    """

    def compute():
        v = v_unitary(g.gamma)
        d = g.hilbert_dim
        tol = _tol(None, "eq")
        if hs_norm(v.conj().T @ v - np.eye(d)) > tol:
            raise InvariantViolationError("V is not unitary")
        basis = g.alg.space.basis
        img = v.conj().T[None] @ basis @ v[None]
        x0, x1 = _parity_parts(basis, g.gamma)
        expected = x0 + 1j * x1 @ g.gamma[None]
        if np.abs(img - expected).max(initial=0.0) > tol:
            raise InvariantViolationError("V* x V differs from x0 + i x1 Γ")
        gens = [v.conj().T @ x @ v for x in g.alg.generators]
        return v, from_space(orthonormalize(img, d=d, scale=1.0), gens)

    return g.cached("vconj", compute)


def center_grading_split(g: GradedAlgebra, seed: int = DEFAULT_SEED) -> tuple[np.ndarray, np.ndarray]:
    """Central projections ``P`` (grading-fixed part) and ``Q`` (half of the rest).

    ``P`` sums the minimal central projections fixed by ``Ad_Γ``; ``Q`` takes the
    lower-indexed member of each swapped pair, so ``ΓQΓ = (I - P) - Q``.
    """
    zs = [z.matrix for z in minimal_central_projections(g.alg, seed)]
    perm = grading_permutation(g, seed)
    d = g.hilbert_dim
    p = np.zeros((d, d), dtype=complex)
    q = np.zeros((d, d), dtype=complex)
    for i, j in enumerate(perm):
        if i == j:
            p += zs[i]
        elif i < j:
            q += zs[i]
    tol = _tol(None, "eq")
    for i, j in enumerate(perm):
        if i == j and hs_norm(g.gamma @ zs[i] @ g.gamma - zs[i]) > tol:
            raise InvariantViolationError("fixed central projection is not even")
    if hs_norm(g.gamma @ q @ g.gamma - (np.eye(d) - p - q)) > tol * max(1.0, d):
        raise InvariantViolationError("ΓQΓ differs from (I - P) - Q")
    return p, q


def minimal_even_projections(d: int, gamma) -> list[np.ndarray]:
    """Rank-one projections onto an eigenbasis of ``Γ``, the ``+1`` eigenvectors first.

    Raises:
        InputError: if ``Γ`` is not a self-adjoint unitary.
    """
    gamma = as_cmatrix(gamma, d)
    if not is_self_adjoint_unitary(gamma):
        raise InputError("grading operator must be a self-adjoint unitary")
    _, blocks = _eig_clusters(gamma, _tol(None, "cluster"))
    out = []
    for vecs in reversed(blocks):
        for k in range(vecs.shape[1]):
            w = vecs[:, k]
            out.append(np.outer(w, w.conj()))
    return out
