"""The structural identity suite behind ``gradedvna verify``.

Every case exercises one identity of graded algebras or their graded tensor
products on a fixed collection of presets, reports how many individual checks
it made, how many failed and the largest numerical residual it saw. Cases are
independent and deterministic for a given seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable

import numpy as np

from .algebra import (
    DEFAULT_SEED,
    center,
    factor_decomposition,
    is_abelian_projection,
    minimal_projections,
)
from .errors import InputError, InvariantViolationError, PreconditionError
from .graded import (
    GradedAlgebra,
    balance_certificate,
    center_grading_split,
    even_algebra,
    grading_problems,
    is_central,
    odd_center_line,
    split,
    twist,
    v_conjugate,
)
from .linalg import contains, hs_norm, subspace_residual
from .presets import build_preset, conjugated, random_unitary
from .tensor import (
    abelian_grid,
    central_support_compare,
    check_commutant_formula,
    check_conditional_expectation,
    even_part_identity,
    factor_case_identity,
    graded_tensor,
    ordinary_tensor,
    swap_isomorphism,
    tensor_center_formula,
    verify_sign_rules,
)

__all__ = ["CaseResult", "SuiteReport", "CASES", "run_suite", "PRESET_MATRIX"]

PRESET_MATRIX = ("sp:1", "sp:2", "mf:1,1", "mf:2,1", "diag:4,(1 2)")
SP_PAIRS = ((1, 1), (2, 1), (2, 2), (2, 3))
RANDOM_POOL = (
    "sp:1", "sp:2", "sp:3", "sp:4", "mf:1,1", "mf:2,1", "mf:2,2", "mf:3,1",
    "clifford:1", "clifford:2", "clifford:3", "diag:4,(1 2)", "diag:4,(1 2)(3 4)",
    "trivial:sp:2", "diag:3",
)
TIGHT = 1e-10


@dataclass
class CaseResult:
    case_id: str
    anchor: str
    checks: int = 0
    failures: list[str] = field(default_factory=list)
    max_residual: float = 0.0
    skipped: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures and self.checks > 0

    def expect(self, ok: bool, label: str) -> None:
        self.checks += 1
        if not ok:
            self.failures.append(label)

    def residual(self, value: float, tol: float, label: str) -> None:
        if np.isfinite(value):
            self.max_residual = max(self.max_residual, float(value))
        else:
            self.max_residual = float("inf")
        self.expect(value <= tol, f"{label}: residual {value:.2e} > {tol:.0e}")

    def to_dict(self) -> dict:
        return {
            "id": self.case_id,
            "anchor": self.anchor,
            "checks": self.checks,
            "failed": len(self.failures),
            "failures": self.failures[:5],
            "max_residual": f"{self.max_residual:.1e}",
            "skipped": self.skipped,
            "passed": self.passed,
        }


@dataclass
class SuiteReport:
    seed: int
    cases: list[CaseResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "passed": self.passed,
            "cases": [c.to_dict() for c in sorted(self.cases, key=lambda c: c.case_id)],
        }


def _p(name: str) -> GradedAlgebra:
    return build_preset(name)


def _pairs(names=PRESET_MATRIX):
    return list(product(names, names))


# ---------------------------------------------------------------------------
# cases


def case_sign_rules(r: CaseResult, seed: int) -> None:
    for a, b in _pairs():
        rep = verify_sign_rules(_p(a), _p(b), samples=200, seed=seed)
        r.residual(rep.max_residual, TIGHT, f"{a} ⊗̂ {b}")


def case_doubling(r: CaseResult, seed: int) -> None:
    for m, n in SP_PAIRS:
        rep = factor_decomposition(graded_tensor(_p(f"sp:{m}"), _p(f"sp:{n}")).result.alg, seed)
        r.expect(rep.profile == ((2 * m * n, 2),), f"sp:{m} ⊗̂ sp:{n} has type {rep.profile}")


def case_ordinary_baseline(r: CaseResult, seed: int) -> None:
    for m, n in SP_PAIRS:
        rep = factor_decomposition(ordinary_tensor(_p(f"sp:{m}"), _p(f"sp:{n}")), seed)
        r.expect(
            set(rep.block_sizes) == {m * n} and not rep.is_factor and len(rep.summands) == 4,
            f"sp:{m} ⊗ sp:{n} has type {rep.profile}",
        )


def case_factor_case(r: CaseResult, seed: int) -> None:
    pairs = [(a, b) for a in ("mf:1,1", "mf:2,2") for b in ("sp:1", "sp:2")]
    pairs.append(("mf:1,1", "mf:1,1"))
    for a, b in pairs:
        rep = factor_case_identity(_p(a), _p(b), seed)
        r.residual(rep.residual, rep.tol, f"{a} ⊗̂ {b} vs ⊗")
        r.expect(rep.graded_type.profile == rep.ordinary_type.profile, f"{a}, {b}: types differ")


def case_commutant(r: CaseResult, seed: int) -> None:
    for a, b in _pairs():
        rep = check_commutant_formula(_p(a), _p(b))
        r.residual(rep.residual, rep.tol, f"{a} ⊗̂ {b}")


def case_center(r: CaseResult, seed: int) -> None:
    for a, b in _pairs():
        try:
            rep = tensor_center_formula(_p(a), _p(b), seed)
        except PreconditionError:
            r.skipped += 1
            continue
        r.residual(rep.residual, rep.tol, f"{a} ⊗̂ {b}")
        if a.startswith("sp") and b.startswith("sp"):
            r.expect(rep.lhs.dim == 1, f"{a} ⊗̂ {b} is not a factor")


def case_swap(r: CaseResult, seed: int) -> None:
    for a, b in _pairs():
        rep = swap_isomorphism(_p(a), _p(b), samples=50, seed=seed)
        r.residual(rep.residual, rep.tol, f"{a} ⊗̂ {b} image")
        for key, val in sorted(rep.identity_residuals.items()):
            r.residual(val, rep.tol, f"{a} ⊗̂ {b} {key}")
        ta = factor_decomposition(graded_tensor(_p(a), _p(b)).result.alg, seed).profile
        tb = factor_decomposition(graded_tensor(_p(b), _p(a)).result.alg, seed).profile
        r.expect(ta == tb, f"{a}, {b}: swapped products have different types")


def case_twist(r: CaseResult, seed: int) -> None:
    for name in PRESET_MATRIX + ("clifford:2", "clifford:3"):
        g = _p(name)
        t = twist(g)
        try:
            _, img = v_conjugate(g)
        except InvariantViolationError as exc:
            r.expect(False, f"{name}: {exc}")
            continue
        r.residual(subspace_residual(img.space, t.alg.space), 1e-8, f"{name}: V*RV vs twist")
        r.residual(subspace_residual(twist(t).alg.space, g.alg.space), 1e-8, f"{name}: twist twice")
        s, st = split(g), split(t)
        r.residual(subspace_residual(s.even, st.even), 1e-8, f"{name}: even part kept")
        r.expect(not grading_problems(t.alg, t.gamma), f"{name}: twist is not graded by Γ")


def case_abelian_grid(r: CaseResult, seed: int) -> None:
    for m, n in ((1, 1), (2, 1), (2, 3)):
        grid = abelian_grid(_p(f"sp:{m}"), _p(f"sp:{n}"), seed)
        r.expect(len(grid.projections) == 2 * m * n, f"sp:{m}, sp:{n}: {len(grid.projections)} projections")
        for key, ok in sorted(grid.checks.items()):
            r.expect(ok, f"sp:{m}, sp:{n}: {key}")


def case_expectation(r: CaseResult, seed: int) -> None:
    for a, b in (("sp:1", "sp:1"), ("sp:2", "mf:1,1"), ("mf:2,1", "sp:2"), ("mf:1,1", "diag:4,(1 2)")):
        rep = check_conditional_expectation(_p(a), _p(b), seed=seed)
        r.residual(rep.formula_residual, rep.tol_formula, f"{a}, {b}: Ψ_z formula")
        r.residual(rep.unital_residual, rep.tol, f"{a}, {b}: Φ_z(I) = I")
        r.residual(rep.module_residual, rep.tol, f"{a}, {b}: module property")
        r.residual(rep.range_residual, rep.tol, f"{a}, {b}: range")
        r.expect(rep.positivity_min_eig >= -rep.tol, f"{a}, {b}: positivity")
        r.expect(rep.faithful_hits == rep.faithful_trials, f"{a}, {b}: faithfulness sweep")


def _commute_residual(xs: np.ndarray, ys: np.ndarray) -> float:
    if xs.shape[0] == 0 or ys.shape[0] == 0:
        return 0.0
    worst = 0.0
    for x in xs:
        worst = max(worst, float(np.abs(x[None] @ ys - ys @ x[None]).max()))
    return worst


def _random_even_projection(g: GradedAlgebra, rng: np.random.Generator) -> np.ndarray:
    projs = [p.matrix for p in minimal_projections(even_algebra(g), int(rng.integers(1 << 30)))]
    pick = rng.random(len(projs)) < 0.5
    if not pick.any():
        pick[int(rng.integers(len(projs)))] = True
    return sum(p for p, k in zip(projs, pick) if k)


def graded_center_case(r: CaseResult, g: GradedAlgebra, other: GradedAlgebra, rng, label: str) -> None:
    """All center-related identities for one randomized graded algebra."""
    d = g.hilbert_dim
    z = center(g.alg)
    r.expect(not grading_problems(z, g.gamma), f"{label}: Γ does not preserve the center")
    try:
        p, q = center_grading_split(g)
        r.residual(hs_norm(g.gamma @ q @ g.gamma - (np.eye(d) - p - q)), 1e-8, f"{label}: ΓQΓ")
    except InvariantViolationError as exc:
        r.expect(False, f"{label}: {exc}")
    if is_central(g):
        try:
            b = odd_center_line(g)
        except InvariantViolationError as exc:
            r.expect(False, f"{label}: {exc}")
            b = None
        even = split(g).even.basis
        if b is None:
            r.residual(_commute_residual(z.space.basis, even), 1e-8, f"{label}: Z(R) ⊆ Z(R0)")
        else:
            r.residual(hs_norm(b @ b - np.eye(d)), 1e-8, f"{label}: b² = I")
            ze = center(even_algebra(g))
            worst = max(
                (1.0 - float(contains(g.alg.space, x)) for x in ze.space.basis), default=0.0
            )
            r.expect(worst == 0.0, f"{label}: Z(R0) ⊄ R")
            r.residual(_commute_residual(ze.space.basis, g.alg.space.basis), 1e-8, f"{label}: Z(R0) ⊆ Z(R)")
            # minimal projections of R0 are its abelian projections, up to sums across summands
            for h in minimal_projections(even_algebra(g), int(rng.integers(1 << 30))):
                r.expect(is_abelian_projection(g.alg, h), f"{label}: abelian in R0 but not in R")
    a = _random_even_projection(g, rng)
    bb = _random_even_projection(other, rng)
    rep = central_support_compare(g, other, a, bb)
    r.residual(rep.residual, rep.tol, f"{label}: central supports")


def case_graded_center(r: CaseResult, seed: int, count: int = 100) -> None:
    rng = np.random.default_rng(seed)
    partners = ("sp:1", "mf:1,1", "diag:2,(1 2)")
    for k in range(count):
        name = RANDOM_POOL[k % len(RANDOM_POOL)]
        base = _p(name)
        g = conjugated(base, random_unitary(base.hilbert_dim, rng))
        partner = _p(partners[k % len(partners)])
        other = conjugated(partner, random_unitary(partner.hilbert_dim, rng))
        graded_center_case(r, g, other, rng, f"#{k} {name}")


def case_clifford(r: CaseResult, seed: int) -> None:
    for k in range(1, 6):
        rep = factor_decomposition(_p(f"clifford:{k}").alg, seed)
        n = 2 ** (k // 2)
        expected = (n,) if k % 2 == 0 else (n, n)
        r.expect(rep.block_sizes == expected, f"clifford:{k} has type {rep.type_label}")


def case_even_parts(r: CaseResult, seed: int) -> None:
    for a, b in _pairs():
        rep = even_part_identity(_p(a), _p(b), seed)
        r.residual(rep.partial_residual, rep.tol, f"{a} ⊗̂ {b}: Ad(I⊗Γ2)-even part")
        if rep.full_isomorphic is None:
            r.skipped += 1
        else:
            r.expect(rep.full_isomorphic, f"{a} ⊗̂ {b}: even part type")


def case_balance(r: CaseResult, seed: int) -> None:
    expected = {
        "sp:1": True, "sp:2": True, "sp:3": True,
        "mf:1,1": True, "mf:2,1": False, "mf:2,2": True, "mf:1,3": False,
        "clifford:2": True, "clifford:3": True,
        "trivial:sp:2": False, "diag:4,(1 2)": False, "diag:4,(1 2)(3 4)": True,
    }
    for name, want in sorted(expected.items()):
        g = _p(name)
        cert = balance_certificate(g, seed)
        r.expect(cert.balanced == want, f"{name}: balanced={cert.balanced}")
        if cert.balanced:
            u = cert.symmetry
            r.residual(hs_norm(g.gamma @ u @ g.gamma + u), 1e-8, f"{name}: symmetry odd")
            r.residual(hs_norm(u @ u - np.eye(g.hilbert_dim)), 1e-8, f"{name}: symmetry unitary")
            r.expect(contains(g.alg.space, u), f"{name}: symmetry outside algebra")
        else:
            r.expect(cert.obstruction is not None, f"{name}: no obstruction recorded")


@dataclass(frozen=True)
class CaseSpec:
    case_id: str
    anchor: str
    run: Callable[[CaseResult, int], None]


CASES: tuple[CaseSpec, ...] = (
    CaseSpec("01-sign-rules", "(A1⊗̂B1)(A2⊗̂B2) = (-1)^{∂B1∂A2} A1A2⊗̂B1B2; (A⊗̂B)* = (-1)^{∂A∂B} A*⊗̂B*", case_sign_rules),
    CaseSpec("02-type-doubling", "sp(m) ⊗̂ sp(n) is of type I_{2mn}", case_doubling),
    CaseSpec("03-ordinary-baseline", "sp(m) ⊗ sp(n) is of type I_{mn}, not a factor", case_ordinary_baseline),
    CaseSpec("04-factor-case", "B(H1) ⊗̂ R2 = B(H1) ⊗ R2 for balanced R2", case_factor_case),
    CaseSpec("05-commutant", "(R1 ⊗̂ R2)' generated by (R1')^(0) ⊙ R2', (R1')^(1) ⊙ R2'Γ2", case_commutant),
    CaseSpec("06-center", "Z(R1 ⊗̂ R2) = Z(R1)^(0) ⊗ Z(R2)^(0)", case_center),
    CaseSpec("07-swap", "φ = Ad_U Ad_{Γ1⊗Γ2} Ad_V Ad_{V1⊗V2}", case_swap),
    CaseSpec("08-twist", "L = R^(0) + R^(1)Γ = V*RV, V = (1-i)/2 I + (1+i)/2 Γ", case_twist),
    CaseSpec("09-abelian-grid", "G_{a,b} = (I±U1)/2 E_a ⊗ F_b", case_abelian_grid),
    CaseSpec("10-conditional-expectation", "Ψ_z(A⊗(B+B'Γ2)) = <Az,z>(B+B'Γ2)", case_expectation),
    CaseSpec("11-graded-center", "Ad_Γ Z(R) = Z(R); ΓQΓ = (I-P)-Q; Z(R)∩R^(1) = Cb; C = D", case_graded_center),
    CaseSpec("12-clifford", "Cl(k) is of type I_{2^⌊k/2⌋}, a factor iff k is even", case_clifford),
    CaseSpec("13-even-parts", "(R1⊗̂R2)^<0> = R1 ⊗ R2^(0); (R1⊗̂R2)^(0) ≅ R1 ⊗ R2^(0)", case_even_parts),
    CaseSpec("14-balance", "odd self-adjoint unitary exists iff every fixed summand has p = q", case_balance),
)


def run_suite(seed: int = DEFAULT_SEED, only: list[str] | None = None) -> SuiteReport:
    """Run every case (or those whose id starts with one of ``only``)."""
    results = []
    for case in CASES:
        if only and not any(case.case_id.startswith(o) for o in only):
            continue
        r = CaseResult(case.case_id, case.anchor)
        try:
            case.run(r, seed)
        except (InvariantViolationError, PreconditionError, InputError) as exc:
            r.expect(False, f"raised {type(exc).__name__}: {exc}")
        results.append(r)
    return SuiteReport(seed, results)
