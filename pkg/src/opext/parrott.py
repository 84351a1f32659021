"""Two-corner operator completions in weighted and unweighted settings.

The generic problem: two partially defined operators point at each other,

    T1 defined on a subspace of C^{n1}, taking values in C^{n2},
    T2 defined on a subspace of C^{n2}, taking values in C^{n1},

subject to the compatibility identity <T1 x1, x2> = conj(<T2 x2, x1>) and
to cross-weighted bounds

    |<T1 x1, y2>|^2 <= alpha1 <A1 x1, x1> <A2 y2, y2>,
    |<T2 x2, y1>|^2 <= alpha2 <A2 x2, x2> <A1 y1, y1>.

Then a single matrix T exists extending T1, with adjoint extending T2,
and with cross-weighted bound at most max(alpha1, alpha2).  The
construction stacks the two partial operators into one symmetric partial
operator on C^{n1+n2} with block-diagonal weight and reads the completion
off a corner of its minimal bound-preserving self-adjoint extension.

Specializations: :func:`strong_parrott` completes an intertwining pair of
factorizations (X S1 = S2, T2 X = T1, ||X|| <= 1), and
:func:`classical_parrott` extends a contraction prescribed on a subspace
whose compression to another subspace is also prescribed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    HypothesisViolated,
    IncompatibleInstance,
    NotABounded,
)
from .kvn import hilbert_lift
from .numkit import (
    ComplexMatrix,
    PsdMatrix,
    Tolerances,
    _tol,
    hermitize,
    independent_columns,
    loewner_leq,
    pinv,
)
from .sa_ext import SymmetricPartialOperator, extend_symmetric

__all__ = [
    "ParrottInstance",
    "StrongParrottInstance",
    "check_compatibility",
    "assemble_symmetric",
    "parrott_complete",
    "strong_parrott",
    "classical_parrott",
]


def _smax(a: np.ndarray) -> float:
    if a.size == 0:
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False)[0])


class ParrottInstance:
    """Data of the generic two-corner completion problem.

    domain1 (n1 x k1) and values1 (n2 x k1) prescribe T1; domain2
    (n2 x k2) and values2 (n1 x k2) prescribe T2.  weight1/weight2 are the
    positive weights on the two spaces, alpha1/alpha2 the declared bound
    constants (entering unsquared, as in the displayed inequalities of the
    module docstring).
    """

    __slots__ = ("domain1", "values1", "domain2", "values2", "weight1", "weight2", "alpha1", "alpha2")

    def __init__(self, domain1, values1, domain2, values2, weight1, weight2,
                 alpha1: float, alpha2: float, tol: Tolerances | None = None):
        t = _tol(tol)
        d1 = ComplexMatrix.coerce(domain1)
        v1 = ComplexMatrix.coerce(values1)
        d2 = ComplexMatrix.coerce(domain2)
        v2 = ComplexMatrix.coerce(values2)
        a1 = PsdMatrix.coerce(weight1, t)
        a2 = PsdMatrix.coerce(weight2, t)
        n1, n2 = a1.rows, a2.rows
        if d1.rows != n1 or v1.rows != n2 or d1.cols != v1.cols:
            raise DimensionMismatch("first partial operator has inconsistent shapes")
        if d2.rows != n2 or v2.rows != n1 or d2.cols != v2.cols:
            raise DimensionMismatch("second partial operator has inconsistent shapes")
        if not (alpha1 >= 0 and alpha2 >= 0 and np.isfinite(alpha1) and np.isfinite(alpha2)):
            raise ValueError("declared bound constants must be finite and nonnegative")
        self.domain1, self.values1 = d1, v1
        self.domain2, self.values2 = d2, v2
        self.weight1, self.weight2 = a1, a2
        self.alpha1, self.alpha2 = float(alpha1), float(alpha2)

    @property
    def dim1(self) -> int:
        return self.weight1.rows

    @property
    def dim2(self) -> int:
        return self.weight2.rows

    def __repr__(self):
        return f"ParrottInstance(n1={self.dim1}, n2={self.dim2}, k1={self.domain1.cols}, k2={self.domain2.cols})"


def _cross_bound(d, v, lift_dom, lift_ran, tol: Tolerances) -> float:
    """Smallest beta with |<Tx, y>|^2 <= beta^2 <A_dom x,x> <A_ran y,y>.

    Same recipe as the symmetric lift but with distinct weights on the two
    sides.  Raises NotABounded when no finite beta exists.
    """
    qd = lift_dom.range_basis.a
    qr = lift_ran.range_basis.a
    out = np.linalg.norm(v - qr @ (qr.conj().T @ v))
    if out > tol.eq * (1.0 + np.linalg.norm(v)):
        raise NotABounded(f"values escape the range of the target weight (residual {out:.3e})")
    u = qd.conj().T @ (lift_dom.sqrt.a @ d)
    w = qr.conj().T @ (lift_ran.sqrt_pinv.a @ v)
    up = pinv(u, tol).a
    collapse = np.linalg.norm(w - (w @ up) @ u)
    if collapse > tol.eq * (1.0 + np.linalg.norm(w)):
        raise NotABounded(f"domain collapses in the weighted seminorm while values do not (residual {collapse:.3e})")
    return _smax(w @ up)


def check_compatibility(inst: ParrottInstance, tol: Tolerances | None = None) -> bool:
    """Whether the instance satisfies compatibility and its declared bounds.

    Checks the pairing identity D2* V1 = V2* D1 and that each partial
    operator's cross-weighted bound (computed spectrally) stays within the
    declared constant.
    """
    t = _tol(tol)
    d1, v1 = inst.domain1.a, inst.values1.a
    d2, v2 = inst.domain2.a, inst.values2.a
    left = d2.conj().T @ v1
    right = v2.conj().T @ d1
    scale = 1.0 + max(np.linalg.norm(left), np.linalg.norm(right))
    if np.linalg.norm(left - right) > t.eq * scale:
        return False
    lift1 = hilbert_lift(inst.weight1, t)
    lift2 = hilbert_lift(inst.weight2, t)
    try:
        beta1 = _cross_bound(d1, v1, lift1, lift2, t)
        beta2 = _cross_bound(d2, v2, lift2, lift1, t)
    except NotABounded:
        return False
    ok1 = beta1 * beta1 <= inst.alpha1 + t.eq * (1.0 + inst.alpha1)
    ok2 = beta2 * beta2 <= inst.alpha2 + t.eq * (1.0 + inst.alpha2)
    return bool(ok1 and ok2)


def assemble_symmetric(
    inst: ParrottInstance, tol: Tolerances | None = None
) -> tuple[SymmetricPartialOperator, PsdMatrix]:
    """Stack the two corners into one symmetric partial operator.

    On C^{n1+n2} with block-diagonal weight diag(A1, A2), the operator
    S_0 (x1, x2) = (T2 x2, T1 x1) is symmetric exactly when the instance
    is compatible.  Its bound-preserving self-adjoint extensions carry the
    completions in their off-diagonal corner.

    Raises :class:`IncompatibleInstance` when compatibility fails.
    """
    t = _tol(tol)
    if not check_compatibility(inst, t):
        raise IncompatibleInstance(
            "instance fails compatibility or exceeds its declared bound constants"
        )
    n1, n2 = inst.dim1, inst.dim2
    k1, k2 = inst.domain1.cols, inst.domain2.cols
    domain = np.zeros((n1 + n2, k1 + k2), dtype=np.complex128)
    domain[:n1, :k1] = inst.domain1.a
    domain[n1:, k1:] = inst.domain2.a
    values = np.zeros((n1 + n2, k1 + k2), dtype=np.complex128)
    values[n1:, :k1] = inst.values1.a
    values[:n1, k1:] = inst.values2.a
    weight = np.zeros((n1 + n2, n1 + n2), dtype=np.complex128)
    weight[:n1, :n1] = inst.weight1.a
    weight[n1:, n1:] = inst.weight2.a
    return SymmetricPartialOperator(domain, values, t), PsdMatrix(weight, t)


def parrott_complete(
    inst: ParrottInstance, tol: Tolerances | None = None, endpoint: str = "min"
) -> ComplexMatrix:
    """Complete the two corners to a single bounded operator.

    Returns an n2-by-n1 matrix T with T extending T1, T* extending T2,
    and cross-weighted bound squared at most max(alpha1, alpha2).  The
    ``endpoint`` selects which extension of the stacked operator supplies
    the corner: "min" (default, the canonical choice), "max", or "mid"
    (their average, also a valid completion by convexity).
    """
    t = _tol(tol)
    if endpoint not in ("min", "max", "mid"):
        raise ValueError(f"endpoint must be 'min', 'max', or 'mid', got {endpoint!r}")
    op, weight = assemble_symmetric(inst, t)
    interval = extend_symmetric(op, weight, t)
    if endpoint == "min":
        s = interval.s_min.a
    elif endpoint == "max":
        s = interval.s_max.a
    else:
        s = (interval.s_min.a + interval.s_max.a) / 2.0
    n1 = inst.dim1
    return ComplexMatrix(s[n1:, :n1])


class StrongParrottInstance:
    """Intertwined factorization data: find X with X S1 = S2, T2 X = T1.

    s1 : dimH x p, s2 : dimK x p  (same column space pairing),
    t1 : q x dimH, t2 : q x dimK  (same row space pairing).
    A contractive solution X : C^{dimH} -> C^{dimK} exists when
    T1 S1 = T2 S2, S2* S2 <= S1* S1, and T1 T1* <= T2 T2*.
    """

    __slots__ = ("s1", "s2", "t1", "t2")

    def __init__(self, s1, s2, t1, t2):
        self.s1 = ComplexMatrix.coerce(s1)
        self.s2 = ComplexMatrix.coerce(s2)
        self.t1 = ComplexMatrix.coerce(t1)
        self.t2 = ComplexMatrix.coerce(t2)
        if self.s1.cols != self.s2.cols:
            raise DimensionMismatch("s1 and s2 must share their column count")
        if self.t1.rows != self.t2.rows:
            raise DimensionMismatch("t1 and t2 must share their row count")
        if self.t1.cols != self.s1.rows:
            raise DimensionMismatch("t1 acts on the space s1 maps into")
        if self.t2.cols != self.s2.rows:
            raise DimensionMismatch("t2 acts on the space s2 maps into")

    @property
    def dim_h(self) -> int:
        return self.s1.rows

    @property
    def dim_k(self) -> int:
        return self.s2.rows

    def __repr__(self):
        return f"StrongParrottInstance(dimH={self.dim_h}, dimK={self.dim_k}, p={self.s1.cols}, q={self.t1.rows})"


def _restrict_with_consistency(full_domain, full_values, tol, what):
    """Independent domain columns plus matching values, re-verified.

    Selects a maximal independent column subset of ``full_domain`` and the
    matching columns of ``full_values``, then confirms the dropped columns
    are linear consequences of the kept ones on the value side too.
    """
    idx = independent_columns(full_domain, tol)
    d = full_domain[:, idx]
    v = full_values[:, idx]
    coeff = pinv(d, tol).a @ full_domain
    resid = np.linalg.norm(full_values - v @ coeff)
    if resid > tol.eq * (1.0 + np.linalg.norm(full_values)):
        raise HypothesisViolated(
            f"{what}: dependent domain columns carry inconsistent values (residual {resid:.3e})"
        )
    return d, v


def strong_parrott(inst: StrongParrottInstance, tol: Tolerances | None = None) -> ComplexMatrix:
    """Contractive solution of X S1 = S2, T2 X = T1.

    Verifies the three hypotheses (intertwining equality and the two
    Loewner comparisons), reduces to a :class:`ParrottInstance` with
    identity weights and unit bounds -- one corner prescribes X on ran S1,
    the other prescribes X* on ran T2* -- and completes.

    Raises :class:`HypothesisViolated` naming the failed condition(s).
    """
    t = _tol(tol)
    s1, s2 = inst.s1.a, inst.s2.a
    t1, t2 = inst.t1.a, inst.t2.a
    failures = []
    eq_resid = np.linalg.norm(t1 @ s1 - t2 @ s2)
    if eq_resid > t.eq * (1.0 + np.linalg.norm(t1 @ s1)):
        failures.append(f"T1 S1 = T2 S2 fails (residual {eq_resid:.3e})")
    if not loewner_leq(s2.conj().T @ s2, s1.conj().T @ s1, t):
        failures.append("S2* S2 <= S1* S1 fails")
    if not loewner_leq(t1 @ t1.conj().T, t2 @ t2.conj().T, t):
        failures.append("T1 T1* <= T2 T2* fails")
    if failures:
        raise HypothesisViolated("; ".join(failures))
    d1, v1 = _restrict_with_consistency(s1, s2, t, "left factorization")
    d2, v2 = _restrict_with_consistency(t2.conj().T, t1.conj().T, t, "right factorization")
    reduced = ParrottInstance(
        d1, v1, d2, v2,
        np.eye(inst.dim_h), np.eye(inst.dim_k),
        1.0, 1.0, t,
    )
    return parrott_complete(reduced, t)


def _projector_basis(p, tol: Tolerances, what: str) -> np.ndarray:
    """Canonical orthonormal basis of the range of an orthogonal projector."""
    t = tol
    pm = hermitize(p, t).a
    idem = np.linalg.norm(pm @ pm - pm)
    if idem > t.eq * (1.0 + np.linalg.norm(pm)):
        raise ValueError(f"{what} is not an orthogonal projector (idempotency residual {idem:.3e})")
    from .numkit import eigh_desc

    w, v = eigh_desc(pm)
    keep = w > 0.5
    return np.ascontiguousarray(v[:, keep])


def classical_parrott(
    p_h1, p_k1, t1_on_h1, t1_prime, tol: Tolerances | None = None
) -> ComplexMatrix:
    """Contraction extending a sub-block and matching a prescribed compression.

    Given orthogonal projectors P_H1 on C^{dimH} and P_K1 on C^{dimK}, a
    contraction T1 defined on ran P_H1 with values in C^{dimK} (matrix
    ``t1_on_h1``, columns indexed by the canonical orthonormal basis of
    ran P_H1), and a contraction T1' from C^{dimH} into ran P_K1 (matrix
    ``t1_prime`` in the canonical basis of ran P_K1), such that the
    compression of T1 to ran P_K1 agrees with T1' on ran P_H1, returns a
    contraction T on all of C^{dimH} with

        T restricted to ran P_H1 = T1   and   P_K1 T = T1'.

    The canonical bases are the phase-fixed eigenvectors of the
    projectors, so the column/row conventions are reproducible from the
    projectors alone.
    """
    t = _tol(tol)
    b_h1 = _projector_basis(p_h1, t, "first projector")
    b_k1 = _projector_basis(p_k1, t, "second projector")
    t1m = ComplexMatrix.coerce(t1_on_h1).a
    t1p = ComplexMatrix.coerce(t1_prime).a
    dim_h = b_h1.shape[0]
    dim_k = b_k1.shape[0]
    if t1m.shape != (dim_k, b_h1.shape[1]):
        raise DimensionMismatch(
            f"restricted contraction must be {dim_k}x{b_h1.shape[1]}, got {t1m.shape}"
        )
    if t1p.shape != (b_k1.shape[1], dim_h):
        raise DimensionMismatch(
            f"compressed contraction must be {b_k1.shape[1]}x{dim_h}, got {t1p.shape}"
        )
    failures = []
    if _smax(t1m) > 1.0 + t.eq:
        failures.append(f"restricted operator is not a contraction (norm {_smax(t1m):.6f})")
    if _smax(t1p) > 1.0 + t.eq:
        failures.append(f"compressed operator is not a contraction (norm {_smax(t1p):.6f})")
    match = np.linalg.norm(b_k1.conj().T @ t1m - t1p @ b_h1)
    if match > t.eq * (1.0 + np.linalg.norm(t1m)):
        failures.append(f"compression of the restriction disagrees with the prescribed compression (residual {match:.3e})")
    if failures:
        raise HypothesisViolated("; ".join(failures))
    inst = ParrottInstance(
        b_h1, t1m, b_k1, t1p.conj().T,
        np.eye(dim_h), np.eye(dim_k),
        1.0, 1.0, t,
    )
    return parrott_complete(inst, t)
