"""Dense complex matrix primitives with explicit tolerance handling.

Everything downstream (minimal positive extensions, completion problems,
functional extensions) is built on the handful of operations here:
pseudoinverse with a relative rank cutoff, positive-semidefinite square
root, Loewner-order comparison, numerical rank, and hermitization.  All
tolerances travel in a single :class:`Tolerances` value passed explicitly;
there is no mutable global configuration.

Eigendecompositions and singular value decompositions are made
reproducible: eigenvalues are returned in descending order (stable sort)
and each eigenvector's first sizable component is rotated to be real and
positive.  For a fixed input the results are bit-identical across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotPsd

__all__ = [
    "Tolerances",
    "DEFAULT_TOLERANCES",
    "ComplexMatrix",
    "HermitianMatrix",
    "PsdMatrix",
    "pinv",
    "psd_sqrt",
    "psd_eig",
    "loewner_leq",
    "numerical_rank",
    "hermitize",
    "independent_columns",
    "eigh_desc",
]

# Relative factor applied per matrix dimension when no explicit rank
# cutoff is supplied: sigma <= 1e-10 * max(rows, cols) * sigma_max is noise.
_RANK_FACTOR = 1e-10

# Magnitude below which an eigenvector component is never used as the
# phase anchor.  Eigenvectors are unit vectors, so the anchor exists.
_PHASE_FLOOR = 1e-8


@dataclass(frozen=True)
class Tolerances:
    """Bundle of the four tolerances used throughout the package.

    rank : float or None
        Relative singular-value cutoff.  ``None`` selects the default
        ``1e-10 * max(rows, cols)``, which scales with the dimension.
    psd : float
        Slack for positivity checks: an eigenvalue above
        ``-psd * (1 + lambda_max)`` counts as nonnegative.
    herm : float
        Relative asymmetry allowed by :func:`hermitize`.
    eq : float
        Relative residual allowed by equality checks between computed
        matrices.
    """

    rank: float | None = None
    psd: float = 1e-8
    herm: float = 1e-10
    eq: float = 1e-8

    def __post_init__(self):
        for name in ("rank", "psd", "herm", "eq"):
            value = getattr(self, name)
            if name == "rank" and value is None:
                continue
            if not (isinstance(value, (int, float)) and math.isfinite(value)) or value < 0:
                raise ValueError(f"tolerance {name!r} must be a finite nonnegative real, got {value!r}")

    def rank_cutoff(self, rows: int, cols: int) -> float:
        """Relative cutoff for singular values of a rows-by-cols matrix."""
        if self.rank is not None:
            return self.rank
        return _RANK_FACTOR * max(rows, cols, 1)


DEFAULT_TOLERANCES = Tolerances()


def _tol(tol: Tolerances | None) -> Tolerances:
    return DEFAULT_TOLERANCES if tol is None else tol


def _as_array(value) -> np.ndarray:
    if isinstance(value, ComplexMatrix):
        return value.a
    a = np.asarray(value, dtype=np.complex128)
    if a.ndim == 1:
        # column vector convenience
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got array of ndim {a.ndim}")
    return a


class ComplexMatrix:
    """Immutable dense complex matrix.

    Thin wrapper around a read-only complex128 ndarray.  Rows/cols may be
    zero; degenerate shapes show up naturally as empty domains and
    rank-zero weights and are fully supported.
    """

    __slots__ = ("_a",)

    def __init__(self, data):
        a = np.array(_as_array(data), dtype=np.complex128, order="C", copy=True)
        if not np.all(np.isfinite(a.view(np.float64))):
            raise ValueError("matrix entries must be finite")
        a.setflags(write=False)
        object.__setattr__(self, "_a", a)

    @property
    def a(self) -> np.ndarray:
        """The underlying read-only ndarray."""
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @classmethod
    def coerce(cls, value) -> "ComplexMatrix":
        return value if isinstance(value, cls) else cls(value)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ComplexMatrix":
        return cls(np.zeros((rows, cols), dtype=np.complex128))

    @classmethod
    def identity(cls, n: int) -> "ComplexMatrix":
        return cls(np.eye(n, dtype=np.complex128))

    def __repr__(self):
        return f"ComplexMatrix({self.rows}x{self.cols})"


class HermitianMatrix(ComplexMatrix):
    """Complex matrix validated and stored in exactly Hermitian form."""

    __slots__ = ()

    def __init__(self, data, tol: Tolerances | None = None):
        a = _as_array(data)
        if a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"Hermitian matrix must be square, got {a.shape}")
        t = _tol(tol)
        asym = np.linalg.norm(a - a.conj().T)
        if asym > t.herm * (1.0 + np.linalg.norm(a)):
            raise NotHermitian(f"asymmetry {asym:.3e} exceeds tolerance")
        super().__init__((a + a.conj().T) / 2.0)

    @property
    def size(self) -> int:
        return self.rows

    @classmethod
    def coerce(cls, value, tol: Tolerances | None = None) -> "HermitianMatrix":
        return value if isinstance(value, cls) else cls(value, tol)

    def __repr__(self):
        return f"HermitianMatrix({self.rows}x{self.rows})"


class PsdMatrix(HermitianMatrix):
    """Hermitian matrix validated positive semidefinite.

    Construction rejects matrices whose smallest eigenvalue falls below
    ``-psd * (1 + lambda_max)``; anything closer to zero is accepted and
    treated as nonnegative by downstream consumers.
    """

    __slots__ = ()

    def __init__(self, data, tol: Tolerances | None = None):
        super().__init__(data, tol)
        t = _tol(tol)
        if self.rows > 0:
            w = np.linalg.eigvalsh(self.a)
            lo, hi = float(w[0]), float(w[-1])
            if lo < -t.psd * (1.0 + hi):
                raise NotPsd(f"eigenvalue {lo:.3e} is genuinely negative (largest {hi:.3e})")

    @classmethod
    def coerce(cls, value, tol: Tolerances | None = None) -> "PsdMatrix":
        return value if isinstance(value, cls) else cls(value, tol)

    def __repr__(self):
        return f"PsdMatrix({self.rows}x{self.rows})"


def eigh_desc(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian eigendecomposition in canonical form.

    Eigenvalues are sorted descending (stable, so degenerate blocks keep
    LAPACK's order) and each eigenvector is rotated so that its first
    component of magnitude above a fixed floor is real and positive.

    Parameters
    ----------
    a : ndarray
        Square matrix; symmetrized before the call so that the input to
        LAPACK is exactly Hermitian.

    Returns
    -------
    (w, v) : eigenvalues descending, eigenvectors as columns of v.
    """
    n = a.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=np.complex128)
    h = (a + a.conj().T) / 2.0
    w, v = np.linalg.eigh(h)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = np.ascontiguousarray(v[:, order])
    for j in range(n):
        col = v[:, j]
        anchors = np.flatnonzero(np.abs(col) > _PHASE_FLOOR)
        if anchors.size:
            pivot = col[anchors[0]]
            v[:, j] = col * (pivot.conjugate() / abs(pivot))
    return w, v


def _smax(a: np.ndarray) -> float:
    if a.size == 0:
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False)[0])


def pinv(m, tol: Tolerances | None = None) -> ComplexMatrix:
    """Moore-Penrose pseudoinverse with a relative singular-value cutoff.

    Singular values at or below ``cutoff * sigma_max`` are treated as zero,
    where ``cutoff`` comes from ``tol.rank_cutoff``.  The zero matrix (and
    any empty matrix) maps to the zero matrix of transposed shape.
    """
    a = _as_array(m)
    t = _tol(tol)
    rows, cols = a.shape
    if a.size == 0:
        return ComplexMatrix(np.zeros((cols, rows), dtype=np.complex128))
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    cut = t.rank_cutoff(rows, cols) * (s[0] if s.size else 0.0)
    inv = np.where(s > cut, np.divide(1.0, s, out=np.zeros_like(s), where=s > 0), 0.0)
    return ComplexMatrix(vh.conj().T @ (inv[:, None] * u.conj().T))


def numerical_rank(m, tol: Tolerances | None = None) -> int:
    """Number of singular values above the relative cutoff."""
    a = _as_array(m)
    if a.size == 0:
        return 0
    t = _tol(tol)
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    cut = t.rank_cutoff(*a.shape) * s[0]
    return int(np.count_nonzero(s > cut))


def psd_eig(a, tol: Tolerances | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of a positive semidefinite matrix with noise removed.

    Returns ``(w, q)`` where ``w`` holds the eigenvalues above the
    relative rank cutoff (descending) and the columns of ``q`` are the
    matching orthonormal eigenvectors.  Eigenvalues below the cutoff are
    discarded outright; an eigenvalue below ``-psd * (1 + lambda_max)``
    raises :class:`NotPsd`.

    Dropping the sub-cutoff eigenvalues (instead of clamping them) keeps
    the square root, its pseudoinverse, and the range basis mutually
    consistent: they all see exactly the same kernel.
    """
    a = _as_array(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got {a.shape}")
    t = _tol(tol)
    w, v = eigh_desc(a)
    if w.size == 0:
        return w, v
    hi = float(w[0])
    lo = float(w[-1])
    if lo < -t.psd * (1.0 + max(hi, 0.0)):
        raise NotPsd(f"eigenvalue {lo:.3e} is genuinely negative (largest {hi:.3e})")
    cut = t.rank_cutoff(*a.shape) * max(hi, 0.0)
    keep = w > cut
    return w[keep], np.ascontiguousarray(v[:, keep])


def psd_sqrt(a, tol: Tolerances | None = None) -> PsdMatrix:
    """Positive semidefinite square root.

    Eigenvalues within the positivity slack of zero are treated as zero;
    a genuinely negative eigenvalue raises :class:`NotPsd`.  Satisfies
    ``R @ R == A`` up to the equality tolerance.
    """
    arr = _as_array(a)
    w, q = psd_eig(arr, tol)
    root = (q * np.sqrt(w)) @ q.conj().T
    return PsdMatrix((root + root.conj().T) / 2.0, tol)


def loewner_leq(a, b, tol: Tolerances | None = None) -> bool:
    """Loewner-order comparison ``a <= b`` up to the positivity slack.

    True iff the smallest eigenvalue of ``b - a`` is at least
    ``-psd * (1 + ||b - a||_2)``.
    """
    x = _as_array(a)
    y = _as_array(b)
    if x.shape != y.shape or x.shape[0] != x.shape[1]:
        raise DimensionMismatch(f"operands must be square and same shape, got {x.shape} vs {y.shape}")
    t = _tol(tol)
    if x.shape[0] == 0:
        return True
    d = y - x
    d = (d + d.conj().T) / 2.0
    w = np.linalg.eigvalsh(d)
    spread = float(np.max(np.abs(w)))
    return float(w[0]) >= -t.psd * (1.0 + spread)


def hermitize(m, tol: Tolerances | None = None) -> HermitianMatrix:
    """Symmetrize a nearly-Hermitian matrix, rejecting genuine asymmetry.

    Returns ``(M + M*) / 2`` when the asymmetry is within
    ``herm * (1 + ||M||_F)``, else raises :class:`NotHermitian`.
    """
    return HermitianMatrix(m, tol)


def independent_columns(m, tol: Tolerances | None = None) -> list[int]:
    """Indices of a maximal independent subset of columns.

    Pivoted modified Gram-Schmidt: at each step the column with the
    largest residual against the span of the selected set is taken, until
    every residual drops to the rank cutoff relative to the largest
    singular value.  Output indices are sorted ascending; for a fixed
    input the selection is deterministic (ties break on the lowest index).
    """
    a = np.array(_as_array(m), dtype=np.complex128, copy=True)
    t = _tol(tol)
    if a.size == 0:
        return []
    scale = _smax(a)
    if scale == 0.0:
        return []
    cut = t.rank_cutoff(*a.shape) * scale
    chosen: list[int] = []
    residual = a
    norms = np.linalg.norm(residual, axis=0)
    for _ in range(min(a.shape)):
        k = int(np.argmax(norms))
        if norms[k] <= cut:
            break
        chosen.append(k)
        q = residual[:, k] / norms[k]
        residual = residual - np.outer(q, q.conj() @ residual)
        norms = np.linalg.norm(residual, axis=0)
        norms[chosen] = 0.0
    return sorted(chosen)
