"""Standard graded algebras and a JSON document format for user-supplied ones.

Preset strings have the form ``kind:params``:

======================  =====================================================
``mf:p,q``              all of ``M_{p+q}`` graded by ``diag(I_p, -I_q)``
``sp:n``                ``M_n ⊕ M_n`` on ``C^{2n}``, grading swaps the blocks
``clifford:k``          ``k``-fold graded tensor power of ``sp:1``
``diag:d``              diagonal matrices on ``C^d``, trivial grading
``diag:d,(1 2)..``      diagonal matrices, grading permutes coordinates by
                        the given involution (1-based cycle notation)
``trivial:<preset>``    the algebra of another preset with ``Γ = I``
======================  =====================================================
"""

from __future__ import annotations

import functools
import json
import math
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import VNAlgebra, from_space, generate
from .errors import DocumentError, InputError
from .graded import GradedAlgebra
from .linalg import MatSubspace, as_cmatrix, orthonormalize

__all__ = [
    "PresetSpec",
    "parse_preset",
    "build_preset",
    "preset",
    "mf",
    "sp",
    "clifford",
    "diag",
    "trivial",
    "conjugated",
    "random_unitary",
    "parse_algebra",
    "serialize_algebra",
    "load_algebra",
    "PRESET_HELP",
]

PRESET_HELP = __doc__.split("\n\n", 1)[1].strip()

_KINDS = ("mf", "sp", "clifford", "diag", "trivial")


@dataclass(frozen=True)
class PresetSpec:
    """A parsed preset string.

    Attributes:
        kind: one of ``mf``, ``sp``, ``clifford``, ``diag``, ``trivial``.
        params: integer parameters; for ``diag`` the dimension followed by the
            0-based image of each coordinate; for ``trivial`` empty.
        inner: the wrapped preset for ``trivial``.
    """

    kind: str
    params: tuple[int, ...] = ()
    inner: "PresetSpec | None" = None

    def __post_init__(self):
        _validate(self)

    def __str__(self) -> str:
        if self.kind == "trivial":
            return f"trivial:{self.inner}"
        if self.kind == "diag":
            d, perm = self.params[0], self.params[1:]
            cycles = _cycles(perm)
            return f"diag:{d}" + ("," + "".join(cycles) if cycles else "")
        return f"{self.kind}:" + ",".join(str(p) for p in self.params)


def _cycles(perm: Sequence[int]) -> list[str]:
    out = []
    for i, j in enumerate(perm):
        if i < j:
            out.append(f"({i + 1} {j + 1})")
    return out


def _validate(s: PresetSpec) -> None:
    if s.kind not in _KINDS:
        raise InputError(f"unknown preset kind {s.kind!r}; expected one of {', '.join(_KINDS)}")
    if s.kind == "trivial":
        if s.inner is None or s.params:
            raise InputError("trivial preset wraps exactly one other preset")
        return
    if s.inner is not None:
        raise InputError(f"{s.kind} preset takes no inner preset")
    arity = {"mf": 2, "sp": 1, "clifford": 1}
    if s.kind in arity and len(s.params) != arity[s.kind]:
        raise InputError(f"{s.kind} preset takes {arity[s.kind]} parameter(s), got {len(s.params)}")
    if any(p < 1 for p in s.params[: arity.get(s.kind, 1)]):
        raise InputError(f"{s.kind} parameters must be at least 1")
    if s.kind == "diag":
        d, perm = s.params[0], s.params[1:]
        if len(perm) != d or sorted(perm) != list(range(d)):
            raise InputError("diag grading must be a permutation of the coordinates")
        if any(perm[j] != i for i, j in enumerate(perm)):
            raise InputError("diag grading permutation must be an involution")


_CYCLE = re.compile(r"\(([^()]*)\)")


def _parse_cycles(text: str, d: int) -> tuple[int, ...]:
    perm = list(range(d))
    rest = _CYCLE.sub("", text).strip()
    if rest:
        raise InputError(f"cannot parse permutation {text!r}; use cycle notation like (1 2)(3 4)")
    for body in _CYCLE.findall(text):
        items = body.replace(",", " ").split()
        if len(items) == 1 and len(items[0]) > 1 and d < 10:
            items = list(items[0])
        try:
            pts = [int(x) - 1 for x in items]
        except ValueError:
            raise InputError(f"bad cycle ({body})") from None
        if any(not 0 <= p < d for p in pts):
            raise InputError(f"cycle ({body}) mentions a point outside 1..{d}")
        if len(pts) > 2:
            raise InputError(f"cycle ({body}) is longer than 2; the grading must be an involution")
        if len(pts) == 2:
            a, b = pts
            if perm[a] != a or perm[b] != b:
                raise InputError("cycles must be disjoint")
            perm[a], perm[b] = b, a
    return tuple(perm)


def parse_preset(text: str) -> PresetSpec:
    """Parse ``kind:params``.

    Raises:
        InputError: on unknown kinds or invalid parameters.
    """
    text = text.strip()
    kind, sep, rest = text.partition(":")
    kind = kind.strip().lower()
    if not sep:
        raise InputError(f"preset {text!r} must look like kind:params (e.g. sp:2)")
    if kind == "trivial":
        return PresetSpec("trivial", (), parse_preset(rest))
    if kind == "diag":
        head, _, tail = rest.partition(",")
        try:
            d = int(head)
        except ValueError:
            raise InputError(f"diag dimension must be an integer, got {head!r}") from None
        if d < 1:
            raise InputError("diag dimension must be at least 1")
        return PresetSpec("diag", (d,) + _parse_cycles(tail, d))
    try:
        params = tuple(int(p) for p in rest.split(","))
    except ValueError:
        raise InputError(f"preset parameters must be integers, got {rest!r}") from None
    return PresetSpec(kind, params)


# ---------------------------------------------------------------------------
# constructions


def _unit(d: int, i: int, j: int) -> np.ndarray:
    e = np.zeros((d, d), dtype=complex)
    e[i, j] = 1.0
    return e


def _chain(n: int) -> list[np.ndarray]:
    """``E_{i,i+1}``; together with their adjoints they generate ``M_n``."""
    return [_unit(n, i, i + 1) for i in range(n - 1)]


def mf(p: int, q: int) -> GradedAlgebra:
    """``M_{p+q}`` graded by ``diag(I_p, -I_q)``; balanced iff ``p = q``."""
    PresetSpec("mf", (p, q))
    d = p + q
    gamma = np.diag([1.0] * p + [-1.0] * q).astype(complex)
    return GradedAlgebra(generate(_chain(d), d), gamma)


def sp(n: int) -> GradedAlgebra:
    """``M_n ⊕ M_n`` on ``C^{2n}`` with the block swap as grading."""
    PresetSpec("sp", (n,))
    i2 = np.eye(2)
    gens = [np.kron(i2, e) for e in _chain(n)]
    gens.append(np.kron(np.diag([1.0, -1.0]), np.eye(n)))
    gamma = np.kron(np.array([[0.0, 1.0], [1.0, 0.0]]), np.eye(n)).astype(complex)
    return GradedAlgebra(generate(gens, 2 * n), gamma)


def clifford(k: int) -> GradedAlgebra:
    """The ``k``-fold graded tensor power of ``sp(1)``, folded from the left."""
    from .tensor import graded_tensor

    PresetSpec("clifford", (k,))
    base = build_preset("sp:1")
    g = base
    for _ in range(k - 1):
        g = graded_tensor(g, base).result
    return g


def diag(d: int, perm: Sequence[int] | None = None) -> GradedAlgebra:
    """Diagonal matrices on ``C^d``, graded by the permutation ``perm`` (0-based)."""
    perm = tuple(range(d)) if perm is None else tuple(perm)
    PresetSpec("diag", (d,) + perm)
    gamma = np.zeros((d, d), dtype=complex)
    gamma[list(perm), list(range(d))] = 1.0
    return GradedAlgebra(generate([_unit(d, i, i) for i in range(d)], d), gamma)


def trivial(gens: Sequence[np.ndarray] | VNAlgebra, d: int | None = None) -> GradedAlgebra:
    """The algebra generated by ``gens`` with the trivial grading ``Γ = I``."""
    alg = gens if isinstance(gens, VNAlgebra) else generate(gens, d)
    return GradedAlgebra(alg, np.eye(alg.hilbert_dim, dtype=complex))


@functools.lru_cache(maxsize=None)
def _build(canonical: str) -> GradedAlgebra:
    s = parse_preset(canonical)
    if s.kind == "mf":
        return mf(*s.params)
    if s.kind == "sp":
        return sp(s.params[0])
    if s.kind == "clifford":
        return clifford(s.params[0])
    if s.kind == "diag":
        return diag(s.params[0], s.params[1:])
    return trivial(_build(str(s.inner)).alg)


def build_preset(spec: PresetSpec | str) -> GradedAlgebra:
    """Build (and memoize) the graded algebra named by ``spec``.

    Identical specs return the same object, so derived data such as centers and
    tensor products is computed once per process.
    """
    if isinstance(spec, str):
        spec = parse_preset(spec)
    return _build(str(spec))


preset = build_preset


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with the phase correction."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def conjugated(g: GradedAlgebra, u: np.ndarray) -> GradedAlgebra:
    """``(U R U*, U Γ U*)``; a spatially equivalent copy of ``g``."""
    uh = u.conj().T
    d = g.hilbert_dim
    space = orthonormalize(u[None] @ g.alg.space.basis @ uh[None], d=d, scale=1.0)
    gens = [u @ x @ uh for x in g.alg.generators]
    return GradedAlgebra(from_space(space, gens), u @ g.gamma @ uh)


# ---------------------------------------------------------------------------
# documents


def _num(x: float) -> str:
    x = float(x)
    if x == 0.0:
        x = 0.0  # drop the sign of negative zero
    return format(x, ".17g")


def _matrix_text(m: np.ndarray) -> str:
    rows = []
    for row in m:
        rows.append("[" + ", ".join(f"[{_num(v.real)}, {_num(v.imag)}]" for v in row) + "]")
    return "[" + ", ".join(rows) + "]"


def serialize_algebra(g: GradedAlgebra, name: str = "algebra") -> str:
    """Canonical JSON text: sorted keys, one generator per line, 17 significant digits."""
    gens = g.alg.generators
    if gens:
        gen_text = "[\n    " + ",\n    ".join(_matrix_text(x) for x in gens) + "\n  ]"
    else:
        gen_text = "[]"
    return (
        "{\n"
        f'  "generators": {gen_text},\n'
        f'  "grading": {_matrix_text(g.gamma)},\n'
        f'  "hilbert_dim": {g.hilbert_dim},\n'
        f'  "name": {json.dumps(name, ensure_ascii=False)}\n'
        "}\n"
    )


def _decode_matrix(obj, d: int, where: str) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != d:
        raise DocumentError(f"{where} must be a list of {d} rows")
    out = np.zeros((d, d), dtype=complex)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != d:
            raise DocumentError(f"{where} row {i} must have {d} entries")
        for j, entry in enumerate(row):
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)
            ):
                raise DocumentError(f"{where} entry ({i}, {j}) must be a [re, im] pair of numbers")
            if not all(math.isfinite(v) for v in entry):
                raise DocumentError(f"{where} entry ({i}, {j}) is not finite")
            out[i, j] = complex(entry[0], entry[1])
    return out


def parse_algebra(text: str) -> GradedAlgebra:
    """Parse a document produced by :func:`serialize_algebra` (or written by hand).

    Raises:
        DocumentError: if the text is not a well-formed document.
        InputError: if the grading is not a self-adjoint involution or does not
            normalize the generated algebra; the message names the failure.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    missing = [k for k in ("name", "hilbert_dim", "generators", "grading") if k not in doc]
    if missing:
        raise DocumentError("document is missing field(s): " + ", ".join(missing))
    extra = sorted(set(doc) - {"name", "hilbert_dim", "generators", "grading"})
    if extra:
        raise DocumentError("document has unknown field(s): " + ", ".join(extra))
    if not isinstance(doc["name"], str):
        raise DocumentError("name must be a string")
    d = doc["hilbert_dim"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise DocumentError("hilbert_dim must be a positive integer")
    if not isinstance(doc["generators"], list):
        raise DocumentError("generators must be a list of matrices")
    gens = [_decode_matrix(m, d, f"generator {k}") for k, m in enumerate(doc["generators"])]
    gamma = _decode_matrix(doc["grading"], d, "grading")
    return GradedAlgebra(generate(gens, d), gamma)


def load_algebra(path: str) -> GradedAlgebra:
    """Read and parse a document from disk."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_algebra(text)
