"""Dense complex linear algebra on spaces of d x d matrices.

Every linear space of operators in the package (algebras, commutants,
centers, even/odd parts) is stored as a :class:`MatSubspace`: an orthonormal
basis under the Hilbert-Schmidt inner product ``<A, B> = trace(A^* B)``.

Matrices are flattened in row-major order, so ``vec(A X B) = (A kron B^T) vec(X)``.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InputError

__all__ = [
    "Tolerances",
    "get_tolerances",
    "set_tolerances",
    "tolerances",
    "as_cmatrix",
    "hs_inner",
    "hs_norm",
    "is_self_adjoint_unitary",
    "MatSubspace",
    "orthonormalize",
    "span",
    "zero_space",
    "full_space",
    "contains",
    "subspace_equal",
    "intersect",
    "commutant_solve",
    "jacobi_eigh",
    "spectral_projections",
    "range_projection",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds, all relative to the largest HS norm in play.

    Attributes:
        eq: residual allowed when testing membership or equality.
        rank: residual below which a vector counts as linearly dependent.
        cluster: eigenvalue gap below which eigenvalues are merged.
    """

    eq: float = 1e-8
    rank: float = 1e-9
    cluster: float = 1e-6


_TOL = Tolerances()


def get_tolerances() -> Tolerances:
    return _TOL


def set_tolerances(**overrides: float) -> Tolerances:
    """Replace the process-wide tolerances; returns the previous values."""
    global _TOL
    previous = _TOL
    _TOL = replace(_TOL, **overrides)
    return previous


@contextlib.contextmanager
def tolerances(**overrides: float) -> Iterator[Tolerances]:
    previous = set_tolerances(**overrides)
    try:
        yield _TOL
    finally:
        set_tolerances(**vars(previous))


def _tol(value: float | None, field: str) -> float:
    return getattr(_TOL, field) if value is None else float(value)


# ---------------------------------------------------------------------------
# matrices


def as_cmatrix(a, d: int | None = None) -> np.ndarray:
    """Coerce ``a`` to a square complex128 array, optionally of size ``d``."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"expected a square matrix, got shape {m.shape}")
    if d is not None and m.shape[0] != d:
        raise InputError(f"expected a {d}x{d} matrix, got {m.shape[0]}x{m.shape[1]}")
    return m


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    return complex(np.vdot(a, b))


def hs_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def is_self_adjoint_unitary(g: np.ndarray, tol_eq: float | None = None) -> bool:
    tol = _tol(tol_eq, "eq")
    g = np.asarray(g)
    eye = np.eye(g.shape[0])
    return hs_norm(g - g.conj().T) <= tol and hs_norm(g @ g - eye) <= tol


# ---------------------------------------------------------------------------
# subspaces


class MatSubspace:
    """A linear space of ``d x d`` matrices with an HS-orthonormal basis.

    Instances are immutable. ``basis`` has shape ``(dim, d, d)``.
    """

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis: np.ndarray):
        basis = np.asarray(basis, dtype=np.complex128).reshape(-1, ambient_dim, ambient_dim)
        basis.setflags(write=False)
        object.__setattr__(self, "ambient_dim", int(ambient_dim))
        object.__setattr__(self, "basis", basis)

    def __setattr__(self, name, value):
        raise AttributeError("MatSubspace is immutable")

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def vectors(self) -> np.ndarray:
        """Basis as rows of a ``(dim, d*d)`` array."""
        return self.basis.reshape(self.dim, self.ambient_dim**2)

    def __len__(self) -> int:
        return self.dim

    def __iter__(self):
        return iter(self.basis)

    def __repr__(self) -> str:
        return f"<MatSubspace dim={self.dim} on C^{self.ambient_dim}>"

    def coords(self, a: np.ndarray) -> np.ndarray:
        return self.vectors.conj() @ np.asarray(a).reshape(-1)

    def project(self, a: np.ndarray) -> np.ndarray:
        d = self.ambient_dim
        if self.dim == 0:
            return np.zeros((d, d), dtype=np.complex128)
        return (self.coords(a) @ self.vectors).reshape(d, d)

    def combine(self, coefficients: np.ndarray) -> np.ndarray:
        """The element ``sum_i c_i B_i``."""
        d = self.ambient_dim
        return (np.asarray(coefficients) @ self.vectors).reshape(d, d)


def _stack(mats, d: int | None) -> tuple[np.ndarray, int]:
    if isinstance(mats, MatSubspace):
        return mats.vectors, mats.ambient_dim
    if isinstance(mats, np.ndarray) and mats.ndim == 3:
        arr = mats.astype(np.complex128, copy=False)
    else:
        mats = list(mats)
        if not mats:
            if d is None:
                raise InputError("cannot infer the matrix size of an empty list")
            return np.zeros((0, d * d), dtype=np.complex128), d
        shapes = {np.shape(m) for m in mats}
        if len(shapes) != 1:
            raise InputError(f"matrices of differing shapes: {sorted(shapes)}")
        arr = np.asarray(mats, dtype=np.complex128)
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise InputError(f"expected square matrices, got array of shape {arr.shape}")
    if d is not None and arr.shape[1] != d:
        raise InputError(f"expected {d}x{d} matrices, got {arr.shape[1]}x{arr.shape[2]}")
    return arr.reshape(arr.shape[0], arr.shape[1] * arr.shape[2]), arr.shape[1]


def _extend_orthonormal(
    q: np.ndarray, k: int, cands: np.ndarray, thresh: float, chunk: int = 512
) -> int:
    """Grow the orthonormal rows ``q[:k]`` by the span of ``cands`` in place.

    Pivoted Gram-Schmidt: each chunk is projected against the current basis
    twice, then the largest residual is promoted, reorthogonalized, and
    removed from the rest of the chunk. Returns the new row count.
    """
    for start in range(0, cands.shape[0], chunk):
        r = np.array(cands[start : start + chunk], dtype=np.complex128)
        for _ in range(2):
            if k:
                r -= (r @ q[:k].conj().T) @ q[:k]
        norms = np.linalg.norm(r, axis=1)
        while k < q.shape[0]:
            j = int(np.argmax(norms))
            if norms[j] <= thresh:
                break
            v = r[j] / norms[j]
            if k:
                v = v - (q[:k].conj() @ v) @ q[:k]
                v /= np.linalg.norm(v)
            q[k] = v
            k += 1
            r -= np.outer(r @ v.conj(), v)
            r[j] = 0.0
            norms = np.linalg.norm(r, axis=1)
    return k


def orthonormalize(
    mats: Iterable[np.ndarray] | np.ndarray,
    tol_rank: float | None = None,
    *,
    d: int | None = None,
    start: MatSubspace | None = None,
    scale: float | None = None,
) -> MatSubspace:
    """HS-orthonormal basis of ``span(mats)`` (joined with ``start`` if given).

    A candidate is discarded when its residual after projection onto the
    basis built so far is at most ``tol_rank * scale``. ``scale`` defaults to
    the largest input HS norm (1 if every input is zero). Pass ``scale=1``
    when the inputs are images of an orthonormal basis, so that a set made
    entirely of rounding noise is recognized as zero.

    Raises:
        InputError: on non-square or mismatched matrices.
    """
    tol = _tol(tol_rank, "rank")
    if start is not None:
        d = start.ambient_dim if d is None else d
        if d != start.ambient_dim:
            raise InputError("start space has a different ambient dimension")
    cands, d = _stack(mats, d)
    norms = np.linalg.norm(cands, axis=1)
    if scale is None:
        scale = float(norms.max()) if norms.size and norms.max() > 0 else 1.0
    q = np.zeros((d * d, d * d), dtype=np.complex128)
    k = 0
    if start is not None and start.dim:
        q[: start.dim] = start.vectors
        k = start.dim
    k = _extend_orthonormal(q, k, cands, tol * scale)
    return MatSubspace(d, q[:k].copy())


def span(mats, tol_rank: float | None = None, *, d: int | None = None) -> MatSubspace:
    return orthonormalize(mats, tol_rank, d=d)


def zero_space(d: int) -> MatSubspace:
    return MatSubspace(d, np.zeros((0, d, d), dtype=np.complex128))


def full_space(d: int) -> MatSubspace:
    return MatSubspace(d, np.eye(d * d, dtype=np.complex128))


def _check_same(s: MatSubspace, t: MatSubspace) -> None:
    if s.ambient_dim != t.ambient_dim:
        raise InputError(
            f"ambient dimensions differ: {s.ambient_dim} vs {t.ambient_dim}"
        )


def membership_residual(s: MatSubspace, a: np.ndarray) -> float:
    """``||A - proj_S(A)||_HS / max(1, ||A||_HS)``."""
    a = np.asarray(a, dtype=np.complex128)
    if a.shape != (s.ambient_dim, s.ambient_dim):
        raise InputError(
            f"matrix of shape {a.shape} does not live on C^{s.ambient_dim}"
        )
    return hs_norm(a - s.project(a)) / max(1.0, hs_norm(a))


def contains(s: MatSubspace, a: np.ndarray, tol_eq: float | None = None) -> bool:
    return membership_residual(s, a) <= _tol(tol_eq, "eq")


def subspace_residual(s: MatSubspace, t: MatSubspace) -> float:
    """Largest membership residual of either basis inside the other space.

    Infinite when the dimensions differ.
    """
    _check_same(s, t)
    if s.dim != t.dim:
        return float("inf")
    if s.dim == 0:
        return 0.0
    r1 = s.vectors - (s.vectors @ t.vectors.conj().T) @ t.vectors
    r2 = t.vectors - (t.vectors @ s.vectors.conj().T) @ s.vectors
    return float(max(np.linalg.norm(r1, axis=1).max(), np.linalg.norm(r2, axis=1).max()))


def subspace_equal(s: MatSubspace, t: MatSubspace, tol_eq: float | None = None) -> bool:
    return subspace_residual(s, t) <= _tol(tol_eq, "eq")


def _nullspace_rows(k: np.ndarray, thresh: float) -> np.ndarray:
    """Orthonormal rows c with ``k @ c = 0`` (right nullspace of ``k``)."""
    n = k.shape[1]
    if n == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    if k.shape[0] == 0:
        return np.eye(n, dtype=np.complex128)
    _, s, vh = np.linalg.svd(k, full_matrices=k.shape[0] < n)
    sv = np.zeros(n)
    sv[: s.size] = s
    return vh[sv <= thresh].conj()


def intersect(s: MatSubspace, t: MatSubspace, tol_eq: float | None = None) -> MatSubspace:
    """Orthonormal basis of ``S ∩ T``.

    Solves ``(I - P_T) sum_i c_i S_i = 0`` for the coefficients ``c``; the
    singular values involved are sines of principal angles, so ``tol_eq`` is
    an absolute threshold on them.
    """
    _check_same(s, t)
    d = s.ambient_dim
    if s.dim == 0 or t.dim == 0:
        return zero_space(d)
    sv, tv = s.vectors, t.vectors
    resid = sv - (sv @ tv.conj().T) @ tv
    null = _nullspace_rows(resid.T, _tol(tol_eq, "eq"))
    return MatSubspace(d, (null @ sv).reshape(-1, d, d))


def random_combination(mats: Sequence[np.ndarray], seed: int = 0xC1F0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return sum(c * x for c, x in zip(rng.standard_normal(len(mats)), mats))


def restricted_nullspace(
    space: MatSubspace,
    gens: Sequence[np.ndarray],
    thresh: float,
    images: Sequence[np.ndarray] | None = None,
) -> MatSubspace:
    """Elements ``X`` of ``space`` with ``images[i] X = X gens[i]`` for all ``i``.

    Without ``images`` this is the set of elements commuting with ``gens``.
    A random combination of the constraints is imposed first; it usually cuts
    the space down to nearly its final size in one step.
    """
    d = space.ambient_dim
    basis = space.basis
    gens = list(gens)
    images = gens if images is None else list(images)
    if len(gens) != len(images):
        raise InputError("need exactly one image per generator")
    if len(gens) > 1:
        rng = np.random.default_rng(0xC1F0)
        c = rng.standard_normal(len(gens))
        gens = [sum(ci * g for ci, g in zip(c, gens))] + gens
        images = [sum(ci * g for ci, g in zip(c, images))] + images
    for g, img in zip(gens, images):
        if basis.shape[0] == 0:
            break
        comm = (img @ basis - basis @ g).reshape(basis.shape[0], -1)
        null = _nullspace_rows(comm.T, thresh)
        basis = (null @ basis.reshape(basis.shape[0], -1)).reshape(-1, d, d)
    return MatSubspace(d, basis)


def _self_adjoint_generators(gens: Sequence[np.ndarray], d: int) -> list[np.ndarray]:
    out = []
    for g in gens:
        h1 = (g + g.conj().T) / 2
        h2 = (g - g.conj().T) / 2j
        out.extend(h for h in (h1, h2) if hs_norm(h) > 0)
    return out


def commutant_solve(
    gens: Sequence[np.ndarray],
    d: int,
    tol_rank: float | None = None,
    *,
    seed: int = 0xC1F0,
) -> MatSubspace:
    """Orthonormal basis of ``{X : X A = A X}`` for all generators and adjoints.

    The search starts inside the commutant of one random self-adjoint
    combination ``h`` of the generators, which is read off exactly from the
    eigenvectors of ``h``. The remaining commutation constraints are imposed
    one generator at a time as nullspace computations on that smaller space.
    """
    tol = _tol(tol_rank, "rank")
    gens = [as_cmatrix(g, d) for g in gens]
    if not gens:
        return full_space(d)
    herm = _self_adjoint_generators(gens, d)
    if not herm:
        return full_space(d)
    scale = max(hs_norm(g) for g in gens) or 1.0
    h = random_combination(herm, seed)
    _, clusters = _eig_clusters(h, None)
    blocks = []
    for w in clusters:
        m = w.shape[1]
        blocks.append(np.einsum("ia,jb->abij", w, w.conj()).reshape(m * m, d, d))
    start = MatSubspace(d, np.concatenate(blocks))
    return restricted_nullspace(start, herm, tol * scale)


# ---------------------------------------------------------------------------
# Hermitian eigenproblems


def jacobi_eigh(
    a: np.ndarray, off_tol: float = 1e-12, max_sweeps: int = 60
) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    Each rotation first removes the phase of the pivot entry, then applies the
    real symmetric Jacobi rotation. Sweeps stop once the off-diagonal HS norm
    is at most ``off_tol * max(1, ||A||_HS)``.

    Returns:
        (eigenvalues ascending, unitary whose columns are eigenvectors)
    """
    a = np.array(a, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    target = off_tol * max(1.0, hs_norm(a))
    for _ in range(max_sweeps):
        off = hs_norm(a - np.diag(np.diag(a)))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300 or mag < 1e-18 * target:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # J = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                j = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ j
                a[idx, :] = j.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ j
    w = np.real(np.diag(a))
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def _check_self_adjoint(a: np.ndarray, tol_eq: float | None) -> np.ndarray:
    a = as_cmatrix(a)
    if hs_norm(a - a.conj().T) > _tol(tol_eq, "eq") * max(1.0, hs_norm(a)):
        raise InputError("matrix is not self-adjoint")
    return (a + a.conj().T) / 2


def _eig_clusters(
    a: np.ndarray, tol_cluster: float | None
) -> tuple[list[float], list[np.ndarray]]:
    tol = _tol(tol_cluster, "cluster") * (hs_norm(a) or 1.0)
    w, v = jacobi_eigh(a)
    values, vecs = [], []
    start = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[i - 1] > tol:
            values.append(float(np.mean(w[start:i])))
            vecs.append(v[:, start:i])
            start = i
    return values, vecs


def spectral_projections(
    a: np.ndarray, tol_cluster: float | None = None, tol_eq: float | None = None
) -> list[tuple[float, np.ndarray]]:
    """Spectral decomposition ``A = sum_k lambda_k P_k`` of a self-adjoint matrix.

    Eigenvalues closer than ``tol_cluster * ||A||_HS`` are merged into a
    single spectral projection. Pairs are returned by increasing eigenvalue.

    Raises:
        InputError: if ``A`` is not self-adjoint within ``tol_eq``.
    """
    a = _check_self_adjoint(a, tol_eq)
    values, vecs = _eig_clusters(a, tol_cluster)
    return [(lam, w @ w.conj().T) for lam, w in zip(values, vecs)]


def range_projection(a: np.ndarray, tol_rank: float | None = None) -> np.ndarray:
    """Orthogonal projection onto the column space of ``a``."""
    a = np.asarray(a, dtype=np.complex128)
    u, s, _ = np.linalg.svd(a)
    if s.size == 0 or s[0] == 0:
        return np.zeros((a.shape[0], a.shape[0]), dtype=np.complex128)
    keep = s > _tol(tol_rank, "rank") * s[0]
    w = u[:, : int(keep.sum())]
    return w @ w.conj().T
