"""Hermitian extensions of symmetric functionals on left ideals of M_m(C).

Linear functionals on the full matrix algebra are represented as trace
forms g(x) = trace(Phi x); g is hermitian (g(x*) = conj g(x)) iff Phi is
Hermitian and positive (g(x*x) >= 0) iff Phi is positive semidefinite.
Left ideals are the column-kernel ideals I = { a : a = a P } of an
orthogonal projection P, and a partial functional is a functional given
only on such an ideal.

A partial functional g_0 is symmetric when g_0(b* a) = conj g_0(a* b) on
the ideal, and f-bounded relative to a positive functional f when

    |g_0(x* a)|^2 <= alpha^2 f(x* x) f(a* a)    for all x, a (a in I).

Such a g_0 extends to hermitian functionals on the whole algebra with the
same bound, and the extensions with extremal densities come from the
operator-interval machinery: run the GNS construction for f, realize g_0
as a symmetric partial operator on the GNS space, take its extremal
norm-preserving self-adjoint extensions, and read the extended
functionals off the cyclic vector.  In finite dimensions a symmetric
partial functional is always trace-bounded, so symmetry alone already
guarantees a hermitian extension; :func:`cstar_extendibility` packages
that decision together with the quantitative converse (any hermitian
extension g makes g_0 bounded relative to f = g_+ + g_- with a universal
constant).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    HypothesisViolated,
    NotFBounded,
    NotSymmetric,
)
from .kvn import HilbertLift, hilbert_lift
from .numkit import (
    ComplexMatrix,
    HermitianMatrix,
    PsdMatrix,
    Tolerances,
    _tol,
    eigh_desc,
    hermitize,
    independent_columns,
    loewner_leq,
    pinv,
)
from .sa_ext import SymmetricPartialOperator, extend_symmetric, lift_symmetric

__all__ = [
    "FunctionalMatrix",
    "LeftIdeal",
    "PartialFunctional",
    "GnsSpace",
    "RepresentabilityReport",
    "ExtendibilityDecision",
    "FunctionalInstance",
    "is_symmetric_on_ideal",
    "check_representable",
    "gns",
    "gns_realization",
    "f_bound",
    "extend_functional",
    "functional_interval_member",
    "hahn_jordan",
    "cstar_extendibility",
]


def _vec(x: np.ndarray) -> np.ndarray:
    """Row-major vectorization of an m-by-m matrix."""
    return x.reshape(-1)


class FunctionalMatrix:
    """Linear functional on M_m(C) in trace form: g(x) = trace(density @ x)."""

    __slots__ = ("density",)

    def __init__(self, density):
        d = ComplexMatrix.coerce(density)
        if d.rows != d.cols:
            raise DimensionMismatch(f"density must be square, got {d.rows}x{d.cols}")
        self.density = d

    @property
    def size(self) -> int:
        return self.density.rows

    def __call__(self, x) -> complex:
        xa = ComplexMatrix.coerce(x).a
        if xa.shape != self.density.a.shape:
            raise DimensionMismatch(f"argument must be {self.size}x{self.size}, got {xa.shape}")
        return complex(np.trace(self.density.a @ xa))

    def is_hermitian(self, tol: Tolerances | None = None) -> bool:
        t = _tol(tol)
        d = self.density.a
        return bool(np.linalg.norm(d - d.conj().T) <= t.herm * (1.0 + np.linalg.norm(d)))

    def is_positive(self, tol: Tolerances | None = None) -> bool:
        t = _tol(tol)
        if not self.is_hermitian(t):
            return False
        return loewner_leq(np.zeros_like(self.density.a), self.density.a, t)

    def __repr__(self):
        return f"FunctionalMatrix(m={self.size})"


def _as_functional(g) -> FunctionalMatrix:
    return g if isinstance(g, FunctionalMatrix) else FunctionalMatrix(g)


def _density_array(density):
    return density.density if isinstance(density, FunctionalMatrix) else density


class LeftIdeal:
    """Left ideal of M_m(C) cut out by an orthogonal projection P.

    The ideal is I = { a : a = a P }, the matrices supported on the
    columns that P keeps.  Every left ideal of the matrix algebra has
    this form for exactly one orthogonal projection.
    """

    __slots__ = ("projection",)

    def __init__(self, projection, tol: Tolerances | None = None):
        t = _tol(tol)
        p = hermitize(projection, t).a
        idem = np.linalg.norm(p @ p - p)
        if idem > t.eq * (1.0 + np.linalg.norm(p)):
            raise ValueError(f"not an orthogonal projector (idempotency residual {idem:.3e})")
        self.projection = ComplexMatrix(p)

    @property
    def size(self) -> int:
        return self.projection.rows

    def contains(self, a, tol: Tolerances | None = None) -> bool:
        t = _tol(tol)
        am = ComplexMatrix.coerce(a).a
        if am.shape != self.projection.a.shape:
            raise DimensionMismatch(f"argument must be {self.size}x{self.size}")
        return bool(np.linalg.norm(am @ self.projection.a - am) <= t.eq * (1.0 + np.linalg.norm(am)))

    def basis(self) -> list[np.ndarray]:
        """Spanning family E_ij P, i, j = 0..m-1 (row-major order).

        Spans the ideal; entries with P e_j = 0 are zero matrices, so the
        family is spanning rather than independent.
        """
        m = self.size
        p = self.projection.a
        out = []
        for i in range(m):
            for j in range(m):
                e = np.zeros((m, m), dtype=np.complex128)
                e[i, :] = p[j, :]
                out.append(e)
        return out

    def __repr__(self):
        return f"LeftIdeal(m={self.size})"


class PartialFunctional:
    """Functional prescribed on a left ideal: g_0(a) = trace(gamma @ a).

    Two densities induce the same functional on the ideal iff their
    products with P from the left agree, so the stored gamma is the
    canonical representative satisfying gamma = P gamma.
    """

    __slots__ = ("ideal", "gamma")

    def __init__(self, ideal: LeftIdeal, gamma):
        if not isinstance(ideal, LeftIdeal):
            ideal = LeftIdeal(ideal)
        g = ComplexMatrix.coerce(gamma)
        if g.rows != ideal.size or g.cols != ideal.size:
            raise DimensionMismatch(f"gamma must be {ideal.size}x{ideal.size}, got {g.rows}x{g.cols}")
        self.ideal = ideal
        self.gamma = ComplexMatrix(ideal.projection.a @ g.a)

    @property
    def size(self) -> int:
        return self.ideal.size

    def __call__(self, a) -> complex:
        am = ComplexMatrix.coerce(a).a
        if am.shape != self.gamma.a.shape:
            raise DimensionMismatch(f"argument must be {self.size}x{self.size}, got {am.shape}")
        return complex(np.trace(self.gamma.a @ am))

    def __repr__(self):
        return f"PartialFunctional(m={self.size})"


def is_symmetric_on_ideal(pf: PartialFunctional, tol: Tolerances | None = None) -> bool:
    """Whether g_0(b* a) = conj g_0(a* b) holds across the ideal.

    Tested on the spanning family E_ij P; equivalent to the matrix
    identity P Gamma P = P Gamma* P.
    """
    t = _tol(tol)
    basis = pf.ideal.basis()
    gamma = pf.gamma.a
    scale = t.eq * (1.0 + np.linalg.norm(gamma))
    for a in basis:
        for b in basis:
            lhs = np.trace(gamma @ b.conj().T @ a)
            rhs = np.conj(np.trace(gamma @ a.conj().T @ b))
            if abs(lhs - rhs) > scale:
                return False
    return True


@dataclass(frozen=True)
class RepresentabilityReport:
    """Outcome of the representability check for a positive functional.

    On a full matrix algebra every positive functional is representable
    (admits a GNS triple with cyclic vector); the witnesses record, for
    each matrix-unit generator x, a constant M_x with
    f(y* x* x y) <= M_x f(y* y), namely M_x = ||x||^2.
    """

    representable: bool
    witnesses: dict


def check_representable(density, tol: Tolerances | None = None) -> RepresentabilityReport:
    """Representability of f(x) = trace(F x) for a positive density F.

    Always representable here; returns the witness constants for the
    matrix units (each has operator norm 1).
    """
    t = _tol(tol)
    f = PsdMatrix.coerce(_density_array(density), t)
    m = f.rows
    witnesses = {(i, j): 1.0 for i in range(m) for j in range(m)}
    return RepresentabilityReport(representable=True, witnesses=witnesses)


@dataclass(frozen=True)
class GnsSpace:
    """Concrete GNS data for a positive trace-form functional on M_m(C).

    The coordinate space is C^{m^2} via row-major vectorization; the
    functional's inner product <x, y>_f = f(y* x) has Gram matrix
    kron(I_m, F^T) there, and quotienting by its kernel (through
    :func:`~opext.kvn.hilbert_lift`) yields a Hilbert space of dimension
    m * rank(F).  Left multiplication descends to a *-representation and
    the class of the identity matrix is the cyclic vector.
    """

    density: PsdMatrix
    lift: HilbertLift
    class_map: ComplexMatrix    # dim x m^2: x |-> class of x
    class_pinv: ComplexMatrix   # m^2 x dim: right inverse used by rep()
    cyclic: ComplexMatrix       # dim x 1: class of the identity

    @property
    def algebra_size(self) -> int:
        return self.density.rows

    @property
    def dim(self) -> int:
        return self.lift.rank

    def vector(self, x) -> np.ndarray:
        """Class of the algebra element x in the GNS space."""
        xa = ComplexMatrix.coerce(x).a
        m = self.algebra_size
        if xa.shape != (m, m):
            raise DimensionMismatch(f"element must be {m}x{m}, got {xa.shape}")
        return self.class_map.a @ _vec(xa)

    def rep(self, x) -> np.ndarray:
        """Matrix of the GNS representation of x (left multiplication)."""
        xa = ComplexMatrix.coerce(x).a
        m = self.algebra_size
        if xa.shape != (m, m):
            raise DimensionMismatch(f"element must be {m}x{m}, got {xa.shape}")
        left = np.kron(xa, np.eye(m, dtype=np.complex128))
        return self.class_map.a @ left @ self.class_pinv.a

    def functional_value(self, x) -> complex:
        """f(x) recovered as <rep(x) cyclic, cyclic>."""
        xi = self.cyclic.a[:, 0]
        return complex(xi.conj() @ (self.rep(x) @ xi))


def gns(density, tol: Tolerances | None = None) -> GnsSpace:
    """Run the GNS construction for f(x) = trace(F x), F positive."""
    t = _tol(tol)
    f = PsdMatrix.coerce(_density_array(density), t)
    m = f.rows
    gram = np.kron(np.eye(m, dtype=np.complex128), f.a.T)
    lift = hilbert_lift(PsdMatrix(gram, t), t)
    class_map = lift.coembedding()
    class_pinv = lift.sqrt_pinv.a @ lift.range_basis.a
    cyclic = class_map @ _vec(np.eye(m, dtype=np.complex128))
    return GnsSpace(
        density=f,
        lift=lift,
        class_map=ComplexMatrix(class_map),
        class_pinv=ComplexMatrix(class_pinv),
        cyclic=ComplexMatrix(cyclic.reshape(-1, 1)),
    )


def _gns_partial_operator(
    pf: PartialFunctional, space: GnsSpace, tol: Tolerances
) -> SymmetricPartialOperator:
    """Realize g_0 as a symmetric partial operator on the GNS space.

    The domain consists of the classes [a], a in the ideal; the value at
    [a] is the GNS vector representing x |-> g_0(x* a), which must be
    given by an element of the space (else g_0 is not f-bounded).

    Raises NotSymmetric / NotFBounded accordingly.
    """
    if pf.size != space.algebra_size:
        raise DimensionMismatch("functional and GNS space live on different algebra sizes")
    if not is_symmetric_on_ideal(pf, tol):
        raise NotSymmetric("functional is not symmetric on its ideal")
    gamma = pf.gamma.a
    q = space.lift.range_basis.a
    sqrt_pinv = space.lift.sqrt_pinv.a
    u_cols = []
    w_cols = []
    raw_norm = 0.0
    out_resid = 0.0
    for a in pf.ideal.basis():
        u_cols.append(space.vector(a))
        target = _vec(a @ gamma)
        out_resid = max(out_resid, float(np.linalg.norm(target - q @ (q.conj().T @ target))))
        raw_norm = max(raw_norm, float(np.linalg.norm(target)))
        w_cols.append(q.conj().T @ (sqrt_pinv @ target))
    if out_resid > tol.eq * (1.0 + raw_norm):
        raise NotFBounded(
            f"the functional's value vectors escape the GNS space (residual {out_resid:.3e}); "
            "not bounded relative to this positive functional"
        )
    u_all = np.column_stack(u_cols) if u_cols else np.zeros((space.dim, 0), dtype=np.complex128)
    w_all = np.column_stack(w_cols) if w_cols else np.zeros((space.dim, 0), dtype=np.complex128)
    idx = independent_columns(u_all, tol)
    u = u_all[:, idx]
    w = w_all[:, idx]
    coeff = pinv(u, tol).a @ u_all
    resid = np.linalg.norm(w_all - w @ coeff)
    if resid > tol.eq * (1.0 + np.linalg.norm(w_all)):
        raise NotFBounded(
            f"the functional does not vanish where the GNS seminorm does (residual {resid:.3e}); "
            "not bounded relative to this positive functional"
        )
    return SymmetricPartialOperator(u, w, tol)


def gns_realization(
    pf: PartialFunctional, density, tol: Tolerances | None = None
) -> tuple[GnsSpace, SymmetricPartialOperator]:
    """GNS space of f together with the partial operator realizing g_0.

    The returned operator has domain spanned by the classes of the ideal
    elements and satisfies <S [a], [x]> = g_0(x* a); its self-adjoint
    extensions on the GNS space correspond to the hermitian extensions
    of g_0.  Raises :class:`NotSymmetric` / :class:`NotFBounded` when
    the realization does not exist.
    """
    t = _tol(tol)
    space = gns(density, t)
    return space, _gns_partial_operator(pf, space, t)


def f_bound(pf: PartialFunctional, density, tol: Tolerances | None = None) -> float:
    """Smallest alpha with |g_0(x* a)|^2 <= alpha^2 f(x* x) f(a* a).

    Computed as the norm of the partial operator realizing g_0 on the
    GNS space of f.  Raises :class:`NotFBounded` when no finite alpha
    exists and :class:`NotSymmetric` when g_0 is not symmetric.
    """
    t = _tol(tol)
    space, op = gns_realization(pf, density, t)
    eye = PsdMatrix(np.eye(space.dim, dtype=np.complex128), t)
    return lift_symmetric(op, eye, t).alpha


def extend_functional(
    pf: PartialFunctional, density, tol: Tolerances | None = None
) -> tuple[FunctionalMatrix, FunctionalMatrix, float]:
    """Extremal hermitian extensions of g_0 with the same f-bound.

    Returns ``(g_min, g_max, alpha)``: two hermitian functionals on the
    whole algebra agreeing with g_0 on the ideal, each with f-bound equal
    to alpha (the bound of g_0 itself), and extremal in the sense that
    any hermitian extension with that bound has density between theirs.
    Obtained by taking the extremal self-adjoint extensions of the GNS
    realization and evaluating against the cyclic vector.
    """
    t = _tol(tol)
    space, op = gns_realization(pf, density, t)
    eye = PsdMatrix(np.eye(space.dim, dtype=np.complex128), t)
    interval = extend_symmetric(op, eye, t)
    xi = space.cyclic.a[:, 0]
    m = space.algebra_size
    densities = []
    for s in (interval.s_min.a, interval.s_max.a):
        row = (xi.conj() @ s) @ space.class_map.a  # g(E_ij) laid out in vec order
        phi = row.reshape(m, m).T
        densities.append(FunctionalMatrix(hermitize(phi, t)))
    return densities[0], densities[1], interval.alpha


def functional_interval_member(
    candidate: FunctionalMatrix,
    lower: FunctionalMatrix,
    upper: FunctionalMatrix,
    tol: Tolerances | None = None,
) -> bool:
    """Whether a hermitian functional sits between two others.

    Order of functionals is the Loewner order of their densities
    (difference positive semidefinite iff the difference functional is
    positive).
    """
    t = _tol(tol)
    c = hermitize(_as_functional(candidate).density, t).a
    lo = hermitize(_as_functional(lower).density, t).a
    hi = hermitize(_as_functional(upper).density, t).a
    if c.shape != lo.shape or c.shape != hi.shape:
        raise DimensionMismatch("functionals must share the algebra size")
    return loewner_leq(lo, c, t) and loewner_leq(c, hi, t)


def hahn_jordan(g: FunctionalMatrix, tol: Tolerances | None = None) -> tuple[FunctionalMatrix, FunctionalMatrix]:
    """Decompose a hermitian functional as a difference of positive ones.

    Returns (g_plus, g_minus) with g = g_plus - g_minus and mutually
    singular densities (their product vanishes): the spectral split of
    the density into its positive and negative parts.
    """
    t = _tol(tol)
    phi = hermitize(_as_functional(g).density, t).a
    w, v = eigh_desc(phi)
    pos = (v * np.clip(w, 0.0, None)) @ v.conj().T
    neg = (v * np.clip(-w, 0.0, None)) @ v.conj().T
    return (
        FunctionalMatrix(hermitize(pos, t)),
        FunctionalMatrix(hermitize(neg, t)),
    )


@dataclass(frozen=True)
class ExtendibilityDecision:
    """Decision record for hermitian extendibility of a partial functional.

    extendible : always True when the symmetry test passes (symmetry is
        also necessary, and the construction then produces witnesses).
    density : the positive functional used for the quantitative bound.
    alpha : f-bound of g_0 relative to that functional.
    g_min / g_max : extremal hermitian extensions witnessing extendibility.
    constant4_ok : for a supplied hermitian extension g, whether the bound
        |g_0(x* a)|^2 <= 16 f(x* x) f(a* a) with f = g_+ + g_- held on
        every sampled pair (None when no extension was supplied).
    measured_bound : largest sampled ratio |g_0(x* a)| / sqrt(f(x* x) f(a* a)),
        an empirical lower estimate of the true constant.
    violations : number of sampled pairs violating the constant-4 bound.
    """

    extendible: bool
    density: FunctionalMatrix
    alpha: float
    g_min: FunctionalMatrix
    g_max: FunctionalMatrix
    constant4_ok: bool | None = None
    measured_bound: float | None = None
    violations: int | None = None


@dataclass(frozen=True)
class FunctionalInstance:
    """A partial functional with a positive weight functional attached.

    ``source`` optionally records a hermitian functional on the whole
    algebra whose restriction produced the partial data; when present it
    doubles as a known-good extension for the quantitative converse.
    """

    ideal: LeftIdeal
    partial: PartialFunctional
    density: PsdMatrix
    source: FunctionalMatrix | None = None


def _sampled_constant(
    pf: PartialFunctional, f_density: np.ndarray, samples: int, rng, tol: Tolerances
) -> tuple[float, int]:
    """Empirical bound constant over random pairs and violation count.

    Draws complex Gaussian (x, a0), puts a = a0 P in the ideal, and
    compares |g_0(x* a)|^2 against 16 f(x* x) f(a* a).  Returns the
    largest sampled ratio |g_0(x* a)| / sqrt(f(x* x) f(a* a)) and the
    number of violations of the constant-4 inequality.
    """
    m = pf.size
    p = pf.ideal.projection.a
    gamma = pf.gamma.a
    gen = rng.generator() if hasattr(rng, "generator") else rng
    xs = (gen.standard_normal((samples, m, m)) + 1j * gen.standard_normal((samples, m, m))) / np.sqrt(2)
    a0 = (gen.standard_normal((samples, m, m)) + 1j * gen.standard_normal((samples, m, m))) / np.sqrt(2)
    aa = a0 @ p
    # g_0(x* a) = sum_{w,v} conj(x_{wv}) (a Gamma)_{wv}
    vals = np.abs(np.einsum("bwv,bwv->b", xs.conj(), aa @ gamma))
    fxx = np.einsum("ij,bkj,bki->b", f_density, xs.conj(), xs).real
    faa = np.einsum("ij,bkj,bki->b", f_density, aa.conj(), aa).real
    denom = np.sqrt(np.clip(fxx, 0.0, None) * np.clip(faa, 0.0, None))
    keep = denom > tol.eq
    ratios = vals[keep] / denom[keep]
    measured = float(ratios.max()) if ratios.size else 0.0
    violations = int(np.count_nonzero(ratios > 4.0 + tol.eq))
    return measured, violations


def cstar_extendibility(
    pf: PartialFunctional,
    tol: Tolerances | None = None,
    density=None,
    extension: FunctionalMatrix | None = None,
    samples: int = 10_000,
    rng=None,
) -> ExtendibilityDecision:
    """Decide hermitian extendibility of a partial functional, with witnesses.

    Sufficiency: if g_0 is symmetric on its ideal it is bounded relative
    to some positive functional (the plain trace always works on a matrix
    algebra), and the construction yields extremal hermitian extensions.
    ``density`` overrides the positive functional used; by default the
    trace is taken unless an ``extension`` is supplied, in which case
    f = g_+ + g_- from its decomposition is used.

    Necessity (quantitative): when a hermitian extension g of g_0 is
    supplied, the bound |g_0(x* a)|^2 <= 16 f(x* x) f(a* a) with
    f = g_+ + g_- is verified on ``samples`` random pairs, and the
    largest sampled ratio is reported.

    Raises :class:`NotSymmetric` when g_0 is not symmetric on its ideal
    (then no hermitian extension exists, since restrictions of hermitian
    functionals are symmetric).
    """
    t = _tol(tol)
    if not is_symmetric_on_ideal(pf, t):
        raise NotSymmetric(
            "functional is not symmetric on its ideal; hermitian extensions cannot exist"
        )
    m = pf.size
    constant4_ok = None
    measured = None
    violations = None
    necessity_density = None
    if extension is not None:
        ext = FunctionalMatrix(hermitize(_as_functional(extension).density, t))
        # the supplied functional must actually extend g_0
        worst = 0.0
        for a in pf.ideal.basis():
            worst = max(worst, abs(ext(a) - pf(a)))
        if worst > t.eq * (1.0 + np.linalg.norm(pf.gamma.a)):
            raise HypothesisViolated(
                f"supplied functional does not extend the partial data (residual {worst:.3e})"
            )
        g_plus, g_minus = hahn_jordan(ext, t)
        necessity_density = g_plus.density.a + g_minus.density.a
        if rng is None:
            from .oracle import Rng

            rng = Rng(0)
        measured, violations = _sampled_constant(pf, necessity_density, samples, rng, t)
        constant4_ok = violations == 0
    if density is None:
        if necessity_density is not None:
            f_mat = PsdMatrix(necessity_density, t)
        else:
            f_mat = PsdMatrix(np.eye(m, dtype=np.complex128), t)
    else:
        f_mat = PsdMatrix.coerce(_density_array(density), t)
    g_min, g_max, alpha = extend_functional(pf, f_mat, t)
    return ExtendibilityDecision(
        extendible=True,
        density=FunctionalMatrix(f_mat),
        alpha=alpha,
        g_min=g_min,
        g_max=g_max,
        constant4_ok=constant4_ok,
        measured_bound=measured,
        violations=violations,
    )
