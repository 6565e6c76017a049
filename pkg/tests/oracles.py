"""Slow, independent reference computations used to cross-check the library.

Nothing here imports the library's solvers: spans are built with plain SVDs,
algebras are closed under all pairwise basis products and commutants come
from the full Kronecker-form linear system.
"""

import numpy as np


def _rank_basis(vecs, tol=1e-9):
    """Orthonormal rows spanning ``vecs`` (rows), via SVD."""
    vecs = np.asarray(vecs, dtype=complex)
    if vecs.size == 0:
        return np.zeros((0, vecs.shape[-1] if vecs.ndim == 2 else 0), dtype=complex)
    _, s, vh = np.linalg.svd(vecs, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return vh[:0]
    return vh[s > tol * max(1.0, s[0])]


def span_rows(mats, d):
    mats = [np.asarray(m, dtype=complex).reshape(d * d) for m in mats]
    if not mats:
        return np.zeros((0, d * d), dtype=complex)
    return _rank_basis(np.array(mats))


def closure(gens, d):
    """Span of all products of generators (and adjoints), by brute force."""
    mats = [np.eye(d)] + [np.asarray(g, dtype=complex) for g in gens]
    mats += [m.conj().T for m in mats]
    rows = span_rows(mats, d)
    while True:
        basis = rows.reshape(-1, d, d)
        prods = (basis[:, None] @ basis[None, :]).reshape(-1, d * d)
        new = _rank_basis(np.vstack([rows, prods]))
        if new.shape[0] == rows.shape[0]:
            return new
        rows = new


def commutant(gens, d):
    """``{X : XA = AX}`` from the ``d^2 x d^2`` Kronecker system."""
    eye = np.eye(d)
    blocks = []
    for a in gens:
        a = np.asarray(a, dtype=complex)
        for b in (a, a.conj().T):
            # row-major vec: vec(XB - BX) = (I ⊗ B^T - B ⊗ I) vec(X)
            blocks.append(np.kron(eye, b.T) - np.kron(b, eye))
    if not blocks:
        return np.eye(d * d, dtype=complex)
    k = np.vstack(blocks)
    _, s, vh = np.linalg.svd(k)
    s = np.concatenate([s, np.zeros(vh.shape[0] - s.size)])
    return vh[s <= 1e-9 * max(1.0, s[0])].conj()


def same_span(a_rows, b_rows, tol=1e-8):
    if a_rows.shape[0] != b_rows.shape[0]:
        return False
    stacked = _rank_basis(np.vstack([a_rows, b_rows]), tol)
    return stacked.shape[0] == a_rows.shape[0]


def center_dim(rows, d):
    basis = rows.reshape(-1, d, d)
    c = commutant(list(basis), d)
    both = np.vstack([rows, c])
    # dim(A ∩ A') = dim A + dim A' - dim(A + A')
    return rows.shape[0] + c.shape[0] - _rank_basis(both).shape[0]


def block_diagonal_algebra(profile, rng=None):
    """Generators and ambient dimension of ``⊕ M_n ⊗ I_m``, optionally unitarily rotated.

    Returns ``(gens, d, u)``.
    """
    d = sum(n * m for n, m in profile)
    gens = []
    offset = 0
    for n, m in profile:
        for i in range(n):
            for j in range(n):
                e = np.zeros((n, n))
                e[i, j] = 1
                big = np.zeros((d, d), dtype=complex)
                big[offset:offset + n * m, offset:offset + n * m] = np.kron(e, np.eye(m))
                gens.append(big)
        offset += n * m
    u = np.eye(d, dtype=complex)
    if rng is not None:
        z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        u, _ = np.linalg.qr(z)
    return [u @ g @ u.conj().T for g in gens], d, u
