"""Minimal positive extensions of partially defined positive operators.

A partial positive operator on C^n is prescribed by a domain basis D
(columns spanning the domain) and values G (column j is the image of
column j of D).  When the data admits any positive-semidefinite extension
at all, it admits a smallest one in the Loewner order -- classically the
Krein-von Neumann extension -- and in finite dimensions that extension has
the closed form

    A_N = G (D* G)^+ G*.

Existence is equivalent to the restriction condition checked by
:func:`check_restriction`: the values must vanish wherever the induced
Gram form D* G does, otherwise no positive operator can take them.

:func:`hilbert_lift` packages the auxiliary inner-product space attached
to a positive weight A: the weighted pairing <x, y>_A = y* A x descends to
an r-dimensional Hilbert space (r = rank A), realized concretely through
A^{1/2} and an orthonormal basis of its range.  The extension modules use
these coordinates for every spectral computation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotPsd, RestrictionConditionFailed
from .numkit import (
    ComplexMatrix,
    PsdMatrix,
    Tolerances,
    _tol,
    numerical_rank,
    pinv,
    psd_eig,
)

__all__ = [
    "PartialPositiveOperator",
    "HilbertLift",
    "check_restriction",
    "kvn_extend",
    "hilbert_lift",
]


class PartialPositiveOperator:
    """Positive operator data prescribed on a subspace of C^n.

    Parameters
    ----------
    domain_basis : n-by-k matrix whose columns are linearly independent
        and span the domain.
    values : n-by-k matrix; column j is the prescribed image of domain
        column j.

    Construction validates independence of the domain columns and that the
    induced Gram matrix M = D* G is Hermitian positive semidefinite (these
    are necessary for any positive extension).  The remaining existence
    condition -- values vanishing on the kernel of M -- is checked
    separately by :func:`check_restriction` so that infeasible but
    well-formed data can still be represented and diagnosed.
    """

    __slots__ = ("domain_basis", "values", "gram")

    def __init__(self, domain_basis, values, tol: Tolerances | None = None):
        d = ComplexMatrix.coerce(domain_basis)
        g = ComplexMatrix.coerce(values)
        if d.rows != g.rows or d.cols != g.cols:
            raise DimensionMismatch(
                f"domain basis is {d.rows}x{d.cols} but values are {g.rows}x{g.cols}"
            )
        t = _tol(tol)
        if numerical_rank(d, t) != d.cols:
            raise ValueError("domain basis columns are dependent; supply an independent set")
        m = d.a.conj().T @ g.a
        try:
            gram = PsdMatrix(m, t)
        except NotHermitian as exc:
            raise NotHermitian(f"induced Gram matrix is not Hermitian: {exc}") from exc
        except NotPsd as exc:
            raise NotPsd(f"induced Gram matrix is not positive: {exc}") from exc
        self.domain_basis = d
        self.values = g
        self.gram = gram

    @property
    def ambient_dim(self) -> int:
        return self.domain_basis.rows

    @property
    def domain_dim(self) -> int:
        return self.domain_basis.cols

    def __repr__(self):
        return f"PartialPositiveOperator(n={self.ambient_dim}, k={self.domain_dim})"


def _extend_from_span(d: np.ndarray, g: np.ndarray, tol: Tolerances) -> np.ndarray:
    """Minimal positive extension from a spanning (possibly dependent) set.

    Core closed form shared with the self-adjoint extension module, which
    feeds it domain sets that span but need not be independent.  Raises
    :class:`RestrictionConditionFailed` when the values fail to vanish on
    the kernel of the induced Gram matrix.
    """
    m = d.conj().T @ g
    m = (m + m.conj().T) / 2.0
    mp = pinv(m, tol).a
    # existence: ker M inside ker G, tested as G (I - M^+ M) ~ 0
    resid = np.linalg.norm(g - g @ (mp @ m))
    if resid > tol.eq * (1.0 + np.linalg.norm(g)):
        raise RestrictionConditionFailed(
            "restriction condition violated: the prescribed values do not vanish "
            f"on the kernel of the domain Gram matrix (residual {resid:.3e})"
        )
    ext = g @ mp @ g.conj().T
    return (ext + ext.conj().T) / 2.0


def check_restriction(op: PartialPositiveOperator, tol: Tolerances | None = None) -> bool:
    """Whether the data is the restriction of some positive operator.

    Tests that the values vanish on the kernel of the induced Gram matrix
    M = D* G, via ``||G (I - M^+ M)||_F <= eq * (1 + ||G||_F)``.  For data
    obtained by restricting an actual positive matrix this always holds.
    """
    t = _tol(tol)
    g = op.values.a
    m = op.gram.a
    mp = pinv(m, t).a
    resid = np.linalg.norm(g - g @ (mp @ m))
    return bool(resid <= t.eq * (1.0 + np.linalg.norm(g)))


def kvn_extend(op: PartialPositiveOperator, tol: Tolerances | None = None) -> PsdMatrix:
    """Smallest positive extension of a partial positive operator.

    Returns the positive-semidefinite matrix ``G (D* G)^+ G*``.  It agrees
    with the prescribed values on the domain and sits below every other
    positive extension in the Loewner order.

    Raises
    ------
    RestrictionConditionFailed
        If no positive extension exists (see :func:`check_restriction`).
    """
    t = _tol(tol)
    ext = _extend_from_span(op.domain_basis.a, op.values.a, t)
    return PsdMatrix(ext, t)


@dataclass(frozen=True)
class HilbertLift:
    """Hilbert-space coordinates for the weighted pairing of a weight A.

    The sesquilinear form <x, y>_A = y* A x is an inner product on the
    quotient of C^n by ker A.  With r = rank A and Q an orthonormal basis
    of ran A, the map x -> Q* A^{1/2} x identifies that quotient with C^r
    carrying the standard inner product.  The fields collect everything a
    consumer needs to move between ambient and range coordinates.

    Attributes
    ----------
    weight : the validated weight A.
    sqrt : A^{1/2} (same kernel as A by construction).
    sqrt_pinv : pseudoinverse of A^{1/2}.
    rank : r = rank A.
    range_basis : n-by-r matrix Q with orthonormal columns spanning ran A.
    """

    weight: PsdMatrix
    sqrt: PsdMatrix
    sqrt_pinv: ComplexMatrix
    rank: int
    range_basis: ComplexMatrix

    def embedding(self) -> np.ndarray:
        """Matrix of the isometric embedding C^r -> C^n, h -> A^{1/2} Q h.

        Composing with its adjoint recovers the weight: J J* = A.
        """
        return self.sqrt.a @ self.range_basis.a

    def coembedding(self) -> np.ndarray:
        """Adjoint of :meth:`embedding`: x -> Q* A^{1/2} x, the class map."""
        return self.range_basis.a.conj().T @ self.sqrt.a

    def range_projector(self) -> np.ndarray:
        """Orthogonal projector onto ran A."""
        q = self.range_basis.a
        return q @ q.conj().T


def hilbert_lift(weight, tol: Tolerances | None = None) -> HilbertLift:
    """Build the range-coordinate realization of a positive weight.

    A single eigendecomposition produces the square root, its
    pseudoinverse, and the orthonormal range basis, so the three agree
    exactly on what the kernel is.  Eigenvalues below the relative rank
    cutoff are treated as zero; a genuinely negative eigenvalue raises
    :class:`NotPsd`.
    """
    t = _tol(tol)
    a = PsdMatrix.coerce(weight, t)
    w, q = psd_eig(a.a, t)
    roots = np.sqrt(w)
    sqrt = (q * roots) @ q.conj().T
    sqrt = (sqrt + sqrt.conj().T) / 2.0
    inv = (q * np.divide(1.0, roots, out=np.zeros_like(roots), where=roots > 0)) @ q.conj().T
    return HilbertLift(
        weight=a,
        sqrt=PsdMatrix(sqrt, t),
        sqrt_pinv=ComplexMatrix((inv + inv.conj().T) / 2.0),
        rank=int(w.size),
        range_basis=ComplexMatrix(q),
    )
