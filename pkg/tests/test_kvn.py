"""Smallest positive extension of a partial positive operator."""

import numpy as np
import pytest

from opext.errors import NotPsd, RestrictionConditionFailed
from opext.kvn import PartialPositiveOperator, check_restriction, hilbert_lift, kvn_extend
from opext.numkit import PsdMatrix, Tolerances, loewner_leq
from opext.oracle import (
    Rng,
    complex_gaussian,
    min_completion_search,
    random_instance_with_witness,
    random_psd,
)

E1 = np.array([[1.0], [0.0]])


def psd_min_eig(m):
    return float(np.linalg.eigvalsh((m + m.conj().T) / 2).min())


class TestRestrictionCondition:
    def test_invertible_gram_passes(self):
        op = PartialPositiveOperator(E1, np.array([[1.0], [1.0]]))
        assert check_restriction(op)

    def test_kernel_value_mismatch_fails(self):
        op = PartialPositiveOperator(E1, np.array([[0.0], [1.0]]))
        assert not check_restriction(op)

    def test_zero_values_pass(self):
        op = PartialPositiveOperator(E1, np.zeros((2, 1)))
        assert check_restriction(op)


class TestKvnExtend:
    def test_oracle_confirms_fixture_minimum(self):
        # independent grid search over PSD completions [[1,1],[1,t]]
        params, value = min_completion_search(
            family=lambda p: np.array([[1.0, 1.0], [1.0, p[0]]]),
            constraint=lambda m: psd_min_eig(m) >= -1e-12,
            objective=lambda m: m[1, 1].real,
            bounds=[(-2.0, 2.0)],
            resolution=1001,
        )
        assert value == pytest.approx(1.0, abs=1e-4)

    def test_fixture_closed_form(self):
        op = PartialPositiveOperator(E1, np.array([[1.0], [1.0]]))
        ext = kvn_extend(op)
        assert np.abs(ext.a - np.ones((2, 2))).max() <= 1e-8

    def test_full_domain_returns_input(self):
        gen = Rng(21).generator()
        a = random_psd(gen, 4)
        op = PartialPositiveOperator(np.eye(4), a)
        assert np.linalg.norm(kvn_extend(op).a - a) <= 1e-10 * (1 + np.linalg.norm(a))

    def test_zero_values_give_zero_extension(self):
        op = PartialPositiveOperator(E1, np.zeros((2, 1)))
        assert np.linalg.norm(kvn_extend(op).a) == 0.0

    def test_restriction_failure_raises_named_error(self):
        op = PartialPositiveOperator(E1, np.array([[0.0], [1.0]]))
        with pytest.raises(RestrictionConditionFailed, match="restriction"):
            kvn_extend(op)

    def test_dependent_domain_columns_rejected(self):
        with pytest.raises(ValueError):
            PartialPositiveOperator(np.array([[1.0, 2.0], [0.0, 0.0]]), np.ones((2, 2)))

    def test_indefinite_gram_rejected(self):
        # prescribing A e1 = -e1 makes the domain Gram negative
        with pytest.raises(NotPsd):
            PartialPositiveOperator(E1, np.array([[-1.0], [0.0]]))

    def test_extension_minimality_and_idempotence_random(self):
        for i in range(60):
            child = Rng(22).split(i)
            gen = child.generator()
            n = int(gen.integers(1, 13))
            op, witness = random_instance_with_witness("kvn", (n,), child.split(0))
            assert check_restriction(op)
            ext = kvn_extend(op)
            d, g = op.domain_basis.a, op.values.a
            assert np.linalg.norm(ext.a @ d - g) <= 1e-8 * (1 + np.linalg.norm(g))
            assert loewner_leq(ext, witness["total"])
            again = kvn_extend(PartialPositiveOperator(np.eye(n), ext.a))
            assert np.linalg.norm(again.a - ext.a) <= 1e-8 * (1 + np.linalg.norm(ext.a))

    def test_commutation_transport_random(self):
        # a Hermitian operator that preserves the domain and intertwines
        # the values also commutes with the smallest positive extension
        tol = Tolerances()
        for i in range(40):
            gen = Rng(23).split(i).generator()
            n1, n2 = int(gen.integers(1, 5)), int(gen.integers(1, 5))
            n = n1 + n2
            blocks = (random_psd(gen, n1), random_psd(gen, n2))
            total = np.zeros((n, n), dtype=complex)
            total[:n1, :n1], total[n1:, n1:] = blocks
            d = np.zeros((n, 2), dtype=complex)
            d[:n1, 0] = complex_gaussian(gen, n1, 1)[:, 0]
            d[n1:, 1] = complex_gaussian(gen, n2, 1)[:, 0]
            b1, b2 = gen.uniform(-2, 2, 2)
            b = np.diag(np.concatenate([np.full(n1, b1), np.full(n2, b2)])).astype(complex)
            ext = kvn_extend(PartialPositiveOperator(d, total @ d))
            comm = np.linalg.norm(b @ ext.a - ext.a @ b)
            scale = np.linalg.norm(ext.a, 2) * np.linalg.norm(b, 2)
            assert comm <= tol.eq * (1 + scale)


class TestHilbertLift:
    def test_identity_weight(self):
        lift = hilbert_lift(PsdMatrix(np.eye(3)))
        assert lift.rank == 3
        assert np.allclose(lift.sqrt.a, np.eye(3))

    def test_singular_diagonal(self):
        lift = hilbert_lift(PsdMatrix(np.diag([4.0, 0.0])))
        assert lift.rank == 1
        assert np.allclose(lift.sqrt.a, np.diag([2.0, 0.0]))
        assert np.allclose(np.abs(lift.range_basis.a), E1)

    def test_embedding_factorizes_weight(self):
        for i in range(10):
            gen = Rng(24).split(i).generator()
            n = int(gen.integers(1, 9))
            a = random_psd(gen, n, rank=int(gen.integers(1, n + 1)))
            lift = hilbert_lift(PsdMatrix(a))
            j = lift.embedding()
            assert np.linalg.norm(j @ j.conj().T - a) <= 1e-8 * (1 + np.linalg.norm(a))
            q = lift.range_basis.a
            assert np.linalg.norm(q.conj().T @ q - np.eye(lift.rank)) <= 1e-10
            proj = lift.range_projector()
            assert np.linalg.norm(proj @ proj - proj) <= 1e-10

    def test_sqrt_squares_to_weight(self):
        a = np.array([[2.0, 1.0], [1.0, 2.0]])
        lift = hilbert_lift(PsdMatrix(a))
        assert lift.rank == 2
        assert np.linalg.norm(lift.sqrt.a @ lift.sqrt.a - a) <= 1e-10

    def test_zero_weight_degenerates_gracefully(self):
        lift = hilbert_lift(PsdMatrix(np.zeros((2, 2))))
        assert lift.rank == 0
        assert lift.range_basis.a.shape == (2, 0)
