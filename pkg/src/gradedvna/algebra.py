"""Finite-dimensional von Neumann algebras acting on C^d.

At finite dimension a von Neumann algebra is a unital *-subalgebra of the
d x d matrices, and it is always of the form ``⊕_k M_{n_k} ⊗ I_{m_k}`` up to a
unitary change of basis. :func:`factor_decomposition` recovers the pairs
``(n_k, m_k)`` from nothing but a basis of the algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateSpectrumError,
    InputError,
    InternalLimitError,
    InvariantViolationError,
    NumericalInconsistencyError,
)
from .linalg import (
    MatSubspace,
    _tol,
    as_cmatrix,
    commutant_solve,
    contains,
    full_space,
    hs_norm,
    orthonormalize,
    restricted_nullspace,
    spectral_projections,
    subspace_equal,
    _self_adjoint_generators,
)

__all__ = [
    "DEFAULT_SEED",
    "VNAlgebra",
    "Summand",
    "TypeReport",
    "ProjectionHandle",
    "generate",
    "from_space",
    "commutant",
    "center",
    "minimal_central_projections",
    "factor_decomposition",
    "minimal_projections",
    "projection",
    "projection_rank",
    "proj_equivalent",
    "central_support",
    "is_abelian_projection",
    "check_algebra",
]

DEFAULT_SEED = 0xC1F0
MAX_CLOSURE_ROUNDS = 64
MAX_SPECTRAL_ATTEMPTS = 8


class VNAlgebra:
    """A unital *-algebra of d x d matrices.

    Attributes:
        hilbert_dim: d.
        space: orthonormal linear basis of the algebra.
        generators: matrices the algebra was generated from.
    """

    __slots__ = ("hilbert_dim", "space", "generators", "_cache")

    def __init__(self, hilbert_dim: int, space: MatSubspace, generators: Sequence[np.ndarray]):
        self.hilbert_dim = int(hilbert_dim)
        self.space = space
        self.generators = tuple(np.asarray(g, dtype=np.complex128) for g in generators)
        self._cache: dict = {}

    @property
    def dim(self) -> int:
        return self.space.dim

    def __repr__(self) -> str:
        return f"<VNAlgebra dim={self.dim} on C^{self.hilbert_dim}>"

    def __contains__(self, a) -> bool:
        return contains(self.space, a)

    def cached(self, key, compute):
        if key not in self._cache:
            self._cache[key] = compute()
        return self._cache[key]


@dataclass(frozen=True)
class ProjectionHandle:
    matrix: np.ndarray = field(repr=False)
    parent: VNAlgebra

    @property
    def rank(self) -> int:
        return projection_rank(self.matrix)


@dataclass(frozen=True)
class Summand:
    block_size: int
    multiplicity: int
    central_projection: np.ndarray = field(repr=False, compare=False)


@dataclass(frozen=True)
class TypeReport:
    """Type of a finite-dimensional von Neumann algebra.

    One summand ``M_n ⊗ I_m`` per minimal central projection.
    """

    summands: tuple[Summand, ...]
    hilbert_dim: int
    algebra_dim: int

    @property
    def is_factor(self) -> bool:
        return len(self.summands) == 1

    @property
    def type_label(self) -> str:
        return " ⊕ ".join(f"I_{s.block_size}" for s in self.summands)

    @property
    def profile(self) -> tuple[tuple[int, int], ...]:
        """Sorted ``(n_k, m_k)`` pairs; equal profiles mean *-isomorphic algebras."""
        return tuple(sorted((s.block_size, s.multiplicity) for s in self.summands))

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(sorted(s.block_size for s in self.summands))

    def to_dict(self) -> dict:
        return {
            "type": self.type_label,
            "factor": self.is_factor,
            "summands": [[n, m] for n, m in self.profile],
            "hilbert_dim": self.hilbert_dim,
            "algebra_dim": self.algebra_dim,
        }


# ---------------------------------------------------------------------------
# construction


def _gens(gens, d: int) -> list[np.ndarray]:
    return [as_cmatrix(g, d) for g in gens]


def generate(
    gens: Sequence[np.ndarray], d: int, *, check: bool = False, tol_rank: float | None = None
) -> VNAlgebra:
    """Smallest unital *-algebra containing ``gens``.

    The span of ``{I} ∪ gens ∪ gens*`` is saturated by multiplying each newly
    found basis element on the left by the generators until nothing new
    appears. With ``check=True`` the result is also compared with its double
    commutant.

    Raises:
        InputError: for generators that are not d x d.
        InternalLimitError: if saturation needs more than 64 rounds.
        InvariantViolationError: if ``check`` fails.
    """
    gens = _gens(gens, d)
    eye = np.eye(d, dtype=np.complex128)
    gspace = orthonormalize(gens + [g.conj().T for g in gens], tol_rank, d=d)
    g = gspace.basis
    space = orthonormalize([eye], tol_rank, d=d)
    space = orthonormalize(g, tol_rank, d=d, start=space)
    new = space.basis
    rounds = 0
    while new.shape[0] and g.shape[0]:
        rounds += 1
        if rounds > MAX_CLOSURE_ROUNDS:
            raise InternalLimitError("algebra closure did not stabilize in 64 rounds")
        before = space.dim
        step = max(1, 4096 // max(1, g.shape[0]))
        for i in range(0, new.shape[0], step):
            prods = (g[None, :, :, :] @ new[i : i + step, None, :, :]).reshape(-1, d, d)
            space = orthonormalize(prods, tol_rank, d=d, start=space)
        new = space.basis[before:]
    alg = VNAlgebra(d, space, gens)
    if check:
        double = commutant_solve(commutant_solve(gens, d).basis, d)
        if not subspace_equal(double, space):
            raise InvariantViolationError("algebra differs from its double commutant")
    return alg


def from_space(space: MatSubspace, generators: Sequence[np.ndarray] | None = None) -> VNAlgebra:
    """Wrap a subspace already known to be a unital *-algebra."""
    gens = list(space.basis) if generators is None else generators
    return VNAlgebra(space.ambient_dim, space, gens)


def check_algebra(alg: VNAlgebra, tol_eq: float | None = None) -> list[str]:
    """Names of violated VNAlgebra invariants (empty when valid)."""
    problems = []
    s = alg.space
    if not contains(s, np.eye(alg.hilbert_dim), tol_eq):
        problems.append("identity not in algebra")
    b = s.basis
    adj = np.conj(np.swapaxes(b, 1, 2))
    if not all(contains(s, x, tol_eq) for x in adj):
        problems.append("not closed under adjoint")
    if b.shape[0]:
        prods = (b[:, None] @ b[None, :]).reshape(-1, alg.hilbert_dim, alg.hilbert_dim)
        v = prods.reshape(prods.shape[0], -1)
        resid = v - (v @ s.vectors.conj().T) @ s.vectors
        scale = np.maximum(1.0, np.linalg.norm(v, axis=1))
        if np.max(np.linalg.norm(resid, axis=1) / scale) > _tol(tol_eq, "eq"):
            problems.append("not closed under products")
    return problems


def _hermitian_generators(alg: VNAlgebra) -> list[np.ndarray]:
    return _self_adjoint_generators(list(alg.generators), alg.hilbert_dim)


def _gen_scale(alg: VNAlgebra) -> float:
    return max((hs_norm(g) for g in alg.generators), default=1.0) or 1.0


def commutant(alg: VNAlgebra) -> VNAlgebra:
    """``{X : X A = A X for all A in alg}``."""

    def compute():
        s = commutant_solve(alg.generators, alg.hilbert_dim)
        return from_space(s)

    return alg.cached("commutant", compute)


def center(alg: VNAlgebra) -> VNAlgebra:
    """``Z(A) = A ∩ A'``, solved as the elements of ``A`` commuting with its generators."""

    def compute():
        thresh = _tol(None, "rank") * _gen_scale(alg)
        z = restricted_nullspace(alg.space, _hermitian_generators(alg), thresh)
        return from_space(z)

    return alg.cached("center", compute)


# ---------------------------------------------------------------------------
# projections


def projection_rank(p: np.ndarray) -> int:
    """``round(trace(P))``; the trace of an idempotent is an integer."""
    tr = float(np.real(np.trace(p)))
    r = round(tr)
    if abs(tr - r) > 1e-6:
        raise NumericalInconsistencyError(f"projection trace {tr!r} is not an integer")
    return int(r)


def _is_projection(p: np.ndarray, tol: float) -> bool:
    scale = max(1.0, hs_norm(p))
    return hs_norm(p - p.conj().T) <= tol * scale and hs_norm(p @ p - p) <= tol * scale


def projection(alg: VNAlgebra, p: np.ndarray, tol_eq: float | None = None) -> ProjectionHandle:
    """Validate ``p`` as a projection of ``alg`` and wrap it.

    Raises:
        InputError: if ``p`` is not a self-adjoint idempotent in ``alg``.
    """
    if isinstance(p, ProjectionHandle):
        p = p.matrix
    p = as_cmatrix(p, alg.hilbert_dim)
    tol = _tol(tol_eq, "eq")
    if not _is_projection(p, tol):
        raise InputError("matrix is not a projection")
    if not contains(alg.space, p, tol):
        raise InputError("projection does not belong to the algebra")
    return ProjectionHandle(p, alg)


def _compression_dim(p: np.ndarray, space: MatSubspace) -> int:
    comp = p[None] @ space.basis @ p[None]
    return orthonormalize(comp, d=space.ambient_dim, scale=1.0).dim


def _sort_key(p: np.ndarray) -> tuple:
    return tuple(-np.round(np.real(np.diag(p)), 6))


def _random_self_adjoint(space: MatSubspace, rng: np.random.Generator) -> np.ndarray:
    c = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
    x = space.combine(c)
    return (x + x.conj().T) / 2


def minimal_central_projections(
    alg: VNAlgebra, seed: int = DEFAULT_SEED
) -> list[ProjectionHandle]:
    """Minimal projections of the center, i.e. the central summands.

    Spectral projections of a random self-adjoint central element are kept
    when each one compresses the center to a line (``z Z z = C z``).

    Raises:
        DegenerateSpectrumError: if eight random elements all fail.
    """

    def compute():
        z = center(alg)
        rng = np.random.default_rng(seed)
        for _ in range(MAX_SPECTRAL_ATTEMPTS):
            h = _random_self_adjoint(z.space, rng)
            projs = [p for _, p in spectral_projections(h)]
            if all(_compression_dim(p, z.space) == 1 for p in projs):
                projs.sort(key=_sort_key)
                return [ProjectionHandle(p, alg) for p in projs]
        raise DegenerateSpectrumError(
            f"could not isolate minimal central projections (seed={seed:#x})"
        )

    return alg.cached(("zproj", seed), compute)


def _integer_root(x: int) -> int | None:
    r = int(round(np.sqrt(x)))
    return r if r * r == x else None


def factor_decomposition(alg: VNAlgebra, seed: int = DEFAULT_SEED) -> TypeReport:
    """Block sizes and multiplicities of every central summand.

    Raises:
        NumericalInconsistencyError: if a summand dimension is not a perfect
            square or a rank is not divisible by the block size.
    """

    def compute():
        summands = []
        for zh in minimal_central_projections(alg, seed):
            z = zh.matrix
            k = _compression_dim(z, alg.space)
            n = _integer_root(k)
            if not n:
                raise NumericalInconsistencyError(
                    f"central summand has dimension {k}, not a positive perfect square"
                )
            rank = projection_rank(z)
            if rank % n:
                raise NumericalInconsistencyError(
                    f"summand rank {rank} is not a multiple of block size {n}"
                )
            summands.append(Summand(n, rank // n, z))
        return TypeReport(tuple(summands), alg.hilbert_dim, alg.dim)

    return alg.cached(("type", seed), compute)


def minimal_projections(alg: VNAlgebra, seed: int = DEFAULT_SEED) -> list[ProjectionHandle]:
    """Orthogonal minimal projections of ``alg`` summing to the identity.

    Within each central summand ``zA ≅ M_n ⊗ I_m`` a random self-adjoint
    element of ``zAz`` is diagonalized; its ``n`` spectral projections are
    minimal, hence abelian.
    """

    def compute():
        rng = np.random.default_rng(seed + 1)
        out = []
        for zh in minimal_central_projections(alg, seed):
            z = zh.matrix
            comp = orthonormalize(z[None] @ alg.space.basis @ z[None], d=alg.hilbert_dim, scale=1.0)
            for _ in range(MAX_SPECTRAL_ATTEMPTS):
                h = _random_self_adjoint(comp, rng)
                parts = [p @ z for _, p in spectral_projections(h)]
                parts = [(p + p.conj().T) / 2 for p in parts if hs_norm(p) > 0.5]
                if all(_compression_dim(p, alg.space) == 1 for p in parts):
                    break
            else:
                raise DegenerateSpectrumError(
                    f"could not split a central summand into minimal projections (seed={seed:#x})"
                )
            out.extend(ProjectionHandle(p, alg) for p in sorted(parts, key=_sort_key))
        return out

    return alg.cached(("minproj", seed), compute)


def _central_ranks(alg: VNAlgebra, e: np.ndarray, seed: int) -> list[int]:
    return [projection_rank(z.matrix @ e) for z in minimal_central_projections(alg, seed)]


def proj_equivalent(
    alg: VNAlgebra, e, f, seed: int = DEFAULT_SEED
) -> bool:
    """Murray-von Neumann equivalence: equal rank in every central summand."""
    e = projection(alg, e).matrix
    f = projection(alg, f).matrix
    return _central_ranks(alg, e, seed) == _central_ranks(alg, f, seed)


def central_support(alg: VNAlgebra, e, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Sum of the minimal central projections not orthogonal to ``e``."""
    e = projection(alg, e).matrix
    out = np.zeros_like(e)
    for z in minimal_central_projections(alg, seed):
        if projection_rank(z.matrix @ e) > 0:
            out = out + z.matrix
    return out


def is_abelian_projection(alg: VNAlgebra, e, tol_eq: float | None = None) -> bool:
    """Whether the compressed algebra ``E A E`` is commutative."""
    e = projection(alg, e).matrix
    comp = orthonormalize(e[None] @ alg.space.basis @ e[None], d=alg.hilbert_dim, scale=1.0).basis
    tol = _tol(tol_eq, "eq")
    for i in range(1, comp.shape[0]):
        comm = comp[i] @ comp[:i] - comp[:i] @ comp[i]
        if float(np.abs(comm).max()) > tol:
            return False
    return True
