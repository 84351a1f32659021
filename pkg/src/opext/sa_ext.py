"""Bound-preserving self-adjoint extensions of symmetric partial operators.

A symmetric partial operator S_0 on C^n is prescribed by a domain basis D
and values V with D* V Hermitian.  Relative to a positive weight A, the
operator is A-bounded with constant alpha when

    |<S_0 x, y>|^2 <= alpha^2 <A x, x> <A y, y>

for all x in the domain and all y; the smallest such alpha is the bound
computed by :func:`a_bound`.  Every A-bounded symmetric partial operator
admits self-adjoint extensions with the same bound, and they form an
operator interval: there are extremal extensions S_min and S_max such
that the bound-preserving self-adjoint extensions are exactly the
Hermitian S with S_min <= S <= S_max in the Loewner order.

The construction works in the range coordinates supplied by
:func:`~opext.kvn.hilbert_lift`.  There the partial operator becomes an
ordinary bounded symmetric operator S0_hat with norm alpha, the shifted
operators alpha +/- S0_hat are positive, and their minimal positive
extensions (via the closed form in :mod:`opext.kvn`) produce the interval
endpoints:

    S_min = minimal_ext(alpha + S0_hat) - alpha,
    S_max = alpha - minimal_ext(alpha - S0_hat),

mapped back to C^n through the lift.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, HypothesisViolated, NotABounded, NumericalFailure, RestrictionConditionFailed
from .kvn import HilbertLift, _extend_from_span, hilbert_lift
from .numkit import (
    ComplexMatrix,
    HermitianMatrix,
    PsdMatrix,
    Tolerances,
    _tol,
    hermitize,
    loewner_leq,
    numerical_rank,
    pinv,
)

__all__ = [
    "SymmetricPartialOperator",
    "LiftedSymmetric",
    "ExtensionInterval",
    "ExtensionProblem",
    "a_bound",
    "lift_symmetric",
    "extend_symmetric",
    "alpha_of_total",
    "in_interval",
    "check_commutation",
]


def _smax(a: np.ndarray) -> float:
    if a.size == 0:
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False)[0])


class SymmetricPartialOperator:
    """Symmetric operator data prescribed on a subspace of C^n.

    domain_basis: n-by-k matrix with independent columns.
    values: n-by-k matrix, column j the image of domain column j.
    Symmetry of the data is the Hermitian-ness of D* V, validated here.
    """

    __slots__ = ("domain_basis", "values")

    def __init__(self, domain_basis, values, tol: Tolerances | None = None):
        d = ComplexMatrix.coerce(domain_basis)
        v = ComplexMatrix.coerce(values)
        if d.rows != v.rows or d.cols != v.cols:
            raise DimensionMismatch(
                f"domain basis is {d.rows}x{d.cols} but values are {v.rows}x{v.cols}"
            )
        t = _tol(tol)
        if numerical_rank(d, t) != d.cols:
            raise ValueError("domain basis columns are dependent; supply an independent set")
        hermitize(d.a.conj().T @ v.a, t)  # raises NotHermitian on asymmetric data
        self.domain_basis = d
        self.values = v

    @property
    def ambient_dim(self) -> int:
        return self.domain_basis.rows

    @property
    def domain_dim(self) -> int:
        return self.domain_basis.cols

    def __repr__(self):
        return f"SymmetricPartialOperator(n={self.ambient_dim}, k={self.domain_dim})"


@dataclass(frozen=True)
class LiftedSymmetric:
    """A symmetric partial operator rewritten in range coordinates.

    domain (U) and values (W) are r-by-k: column j of U is the class of
    domain column j in the weighted space, column j of W the class
    representing the corresponding value functional.  alpha is the
    operator's weighted bound, realized as the largest singular value of
    W U^+ (the lifted operator's matrix on its domain).
    """

    lift: HilbertLift
    domain: ComplexMatrix
    values: ComplexMatrix
    alpha: float


@dataclass(frozen=True)
class ExtensionInterval:
    """Extremal bound-preserving self-adjoint extensions.

    Every Hermitian matrix between s_min and s_max in the Loewner order
    is a self-adjoint extension with the same weighted bound alpha, and
    conversely.
    """

    alpha: float
    s_min: HermitianMatrix
    s_max: HermitianMatrix


@dataclass(frozen=True)
class ExtensionProblem:
    """A symmetric partial operator paired with its positive weight."""

    operator: SymmetricPartialOperator
    weight: PsdMatrix


def lift_symmetric(
    op: SymmetricPartialOperator, weight, tol: Tolerances | None = None
) -> LiftedSymmetric:
    """Rewrite a symmetric partial operator in the weight's range coordinates.

    Raises :class:`NotABounded` when no finite weighted bound exists:
    either some value sticks out of ran A, or the domain degenerates in
    the weighted seminorm where the values do not.
    """
    t = _tol(tol)
    lift = hilbert_lift(weight, t)
    d = op.domain_basis.a
    v = op.values.a
    if d.shape[0] != lift.weight.rows:
        raise DimensionMismatch(
            f"operator lives on C^{d.shape[0]} but weight is {lift.weight.rows}x{lift.weight.rows}"
        )
    q = lift.range_basis.a
    # values must lie in ran A
    out_of_range = np.linalg.norm(v - q @ (q.conj().T @ v))
    if out_of_range > t.eq * (1.0 + np.linalg.norm(v)):
        raise NotABounded(
            f"values escape the range of the weight (residual {out_of_range:.3e}); "
            "no finite weighted bound exists"
        )
    u = q.conj().T @ (lift.sqrt.a @ d)
    w = q.conj().T @ (lift.sqrt_pinv.a @ v)
    up = pinv(u, t).a
    # kernel condition: where the domain collapses, the values must too
    collapse = np.linalg.norm(w - (w @ up) @ u)
    if collapse > t.eq * (1.0 + np.linalg.norm(w)):
        raise NotABounded(
            f"domain directions collapse in the weighted seminorm while their values do not "
            f"(residual {collapse:.3e}); no finite weighted bound exists"
        )
    alpha = _smax(w @ up)
    return LiftedSymmetric(lift=lift, domain=ComplexMatrix(u), values=ComplexMatrix(w), alpha=alpha)


def a_bound(op: SymmetricPartialOperator, weight, tol: Tolerances | None = None) -> float:
    """Smallest weighted bound of the partial operator (see module docs)."""
    return lift_symmetric(op, weight, tol).alpha


def extend_symmetric(
    op: SymmetricPartialOperator, weight, tol: Tolerances | None = None
) -> ExtensionInterval:
    """Extremal bound-preserving self-adjoint extensions of S_0.

    Lifts to range coordinates, forms the positive partial operators
    alpha +/- S0_hat, takes their minimal positive extensions, and shifts
    back.  Both endpoints are Hermitian extensions of S_0 with weighted
    bound exactly alpha, and they bracket every other bound-preserving
    self-adjoint extension.
    """
    t = _tol(tol)
    ls = lift_symmetric(op, weight, t)
    u = ls.domain.a
    w = ls.values.a
    r = ls.lift.rank
    eye = np.eye(r, dtype=np.complex128)
    try:
        low = _extend_from_span(u, ls.alpha * u + w, t)
        high = _extend_from_span(u, ls.alpha * u - w, t)
    except RestrictionConditionFailed as exc:
        # the shifted operators are positive with finite bound by
        # construction, so a rejection here is numerical, not structural
        raise NumericalFailure(f"positive lift rejected unexpectedly: {exc}") from exc
    s_min_hat = low - ls.alpha * eye
    s_max_hat = ls.alpha * eye - high
    j = ls.lift.embedding()
    s_min = j @ s_min_hat @ j.conj().T
    s_max = j @ s_max_hat @ j.conj().T
    return ExtensionInterval(
        alpha=ls.alpha,
        s_min=hermitize(s_min, t),
        s_max=hermitize(s_max, t),
    )


def alpha_of_total(total, weight, tol: Tolerances | None = None) -> float:
    """Weighted bound of an everywhere-defined Hermitian matrix.

    Requires ran S inside ran A (equivalently ker A inside ker S); then
    the bound is the largest singular value of (A^{1/2})^+ S (A^{1/2})^+.

    Raises :class:`NotABounded` when the range condition fails.
    """
    t = _tol(tol)
    s = HermitianMatrix.coerce(total, t)
    lift = hilbert_lift(weight, t)
    if s.rows != lift.weight.rows:
        raise DimensionMismatch(f"operator is {s.rows}x{s.rows} but weight is {lift.weight.rows}x{lift.weight.rows}")
    q = lift.range_basis.a
    resid = np.linalg.norm(s.a - q @ (q.conj().T @ s.a))
    if resid > t.eq * (1.0 + np.linalg.norm(s.a)):
        raise NotABounded(f"operator range escapes the range of the weight (residual {resid:.3e})")
    p = lift.sqrt_pinv.a
    return _smax(p @ s.a @ p)


def in_interval(candidate, interval: ExtensionInterval, tol: Tolerances | None = None) -> bool:
    """Whether a Hermitian matrix lies between the interval endpoints."""
    t = _tol(tol)
    s = HermitianMatrix.coerce(candidate, t)
    if s.rows != interval.s_min.rows:
        raise DimensionMismatch(f"candidate is {s.rows}x{s.rows}, interval lives on {interval.s_min.rows}")
    return loewner_leq(interval.s_min, s, t) and loewner_leq(s, interval.s_max, t)


def check_commutation(
    b, op: SymmetricPartialOperator, weight, tol: Tolerances | None = None
) -> bool:
    """Extremal extensions inherit commutation in the unweighted case.

    For weight = identity: if a Hermitian B maps the domain into itself
    and intertwines with the prescribed values (S_0 B x = B S_0 x on the
    domain), then both extremal extensions commute with B.  Returns True
    when that conclusion holds numerically.

    Raises
    ------
    HypothesisViolated
        If the weight is not the identity, if B does not leave the domain
        invariant, or if B fails to intertwine with the data.
    """
    t = _tol(tol)
    bm = HermitianMatrix.coerce(b, t)
    a = PsdMatrix.coerce(weight, t)
    n = bm.rows
    if a.rows != n or op.ambient_dim != n:
        raise DimensionMismatch("operator, weight, and commutant candidate must share a dimension")
    if np.linalg.norm(a.a - np.eye(n)) > t.eq * (1.0 + np.linalg.norm(a.a)):
        raise HypothesisViolated("commutation transport requires the identity weight")
    d = op.domain_basis.a
    v = op.values.a
    # invariance: B maps the domain into itself
    coeff = pinv(d, t).a @ (bm.a @ d)
    inv_resid = np.linalg.norm(bm.a @ d - d @ coeff)
    if inv_resid > t.eq * (1.0 + np.linalg.norm(bm.a @ d)):
        raise HypothesisViolated(
            f"candidate does not leave the domain invariant (residual {inv_resid:.3e})"
        )
    # intertwining on the domain: S_0 (B d_j) = B (S_0 d_j)
    twist_resid = np.linalg.norm(v @ coeff - bm.a @ v)
    if twist_resid > t.eq * (1.0 + np.linalg.norm(bm.a @ v)):
        raise HypothesisViolated(
            f"candidate does not intertwine with the prescribed values (residual {twist_resid:.3e})"
        )
    interval = extend_symmetric(op, a, t)
    ok = True
    for s in (interval.s_min.a, interval.s_max.a):
        resid = np.linalg.norm(s @ bm.a - bm.a @ s)
        ok = ok and resid <= t.eq * (1.0 + _smax(bm.a) * _smax(s))
    return bool(ok)
