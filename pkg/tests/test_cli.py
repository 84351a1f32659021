"""Command-line interface: exit codes, result files, determinism."""

import json
from pathlib import Path

import numpy as np
import pytest

import opext.cli as cli
from opext.errors import NumericalFailure
from opext.serialize import decode_matrix, dumps_canonical

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


def run(tmp_path, *argv):
    """Invoke the CLI in-process, returning (exit_code, parsed result)."""
    out = tmp_path / "result.json"
    code = cli.main([*argv, "--out", str(out)])
    document = json.loads(out.read_text()) if out.exists() else None
    return code, document


def write_instance(tmp_path, name, document):
    path = tmp_path / name
    path.write_text(dumps_canonical(document))
    return str(path)


class TestCommittedFixtures:
    def test_kvn(self, tmp_path):
        code, doc = run(tmp_path, "kvn", str(INSTANCES / "kvn.json"))
        assert code == 0
        assert doc["status"] == "ok"
        assert doc["kind"] == "kvn"
        assert doc["error"] is None
        assert set(doc) == {"status", "kind", "outputs", "diagnostics", "tolerances", "seed", "error"}
        ext = decode_matrix(doc["outputs"]["extension"])
        np.testing.assert_allclose(ext, np.ones((2, 2)), atol=1e-8)
        assert doc["diagnostics"]["restriction_ok"] is True
        assert doc["diagnostics"]["value_residual"] <= 1e-8
        assert doc["diagnostics"]["min_eigenvalue"] >= -1e-10

    def test_sa_ext(self, tmp_path):
        code, doc = run(tmp_path, "sa-ext", str(INSTANCES / "sa-ext.json"))
        assert code == 0
        assert doc["outputs"]["alpha"] == pytest.approx(1.0, abs=1e-10)
        np.testing.assert_allclose(
            decode_matrix(doc["outputs"]["s_min"]), np.diag([1.0, -1.0]), atol=1e-8
        )
        np.testing.assert_allclose(
            decode_matrix(doc["outputs"]["s_max"]), np.diag([1.0, 1.0]), atol=1e-8
        )
        assert doc["outputs"]["probe_in_interval"] is True
        assert doc["diagnostics"]["order_ok"] is True

    def test_parrott(self, tmp_path):
        code, doc = run(tmp_path, "parrott", str(INSTANCES / "parrott.json"))
        assert code == 0
        np.testing.assert_allclose(
            decode_matrix(doc["outputs"]["completion"]),
            np.array([[0.0, 1.0], [1.0, 0.0]]),
            atol=1e-8,
        )
        assert doc["diagnostics"]["bound_ok"] is True
        assert doc["diagnostics"]["compatible"] is True
        assert doc["outputs"]["weighted_norm"] <= doc["outputs"]["norm_bound"] + 1e-8

    def test_strong_parrott(self, tmp_path):
        code, doc = run(tmp_path, "strong-parrott", str(INSTANCES / "strong-parrott.json"))
        assert code == 0
        np.testing.assert_allclose(
            decode_matrix(doc["outputs"]["solution"]),
            np.array([[0.0, 1.0], [1.0, 0.0]]),
            atol=1e-8,
        )
        assert doc["outputs"]["norm"] <= 1.0 + 1e-8
        assert doc["diagnostics"]["s_residual"] <= 1e-8
        assert doc["diagnostics"]["t_residual"] <= 1e-8

    def test_functional_ext(self, tmp_path):
        code, doc = run(tmp_path, "functional-ext", str(INSTANCES / "functional-ext.json"))
        assert code == 0
        assert doc["outputs"]["alpha"] == pytest.approx(1.0, abs=1e-8)
        np.testing.assert_allclose(
            decode_matrix(doc["outputs"]["g_min"]), np.diag([1.0, -1.0]), atol=1e-8
        )
        np.testing.assert_allclose(
            decode_matrix(doc["outputs"]["g_max"]), np.diag([1.0, 1.0]), atol=1e-8
        )
        assert doc["diagnostics"]["ideal_agreement_min"] <= 1e-8

    def test_cstar_check(self, tmp_path):
        code, doc = run(tmp_path, "cstar-check", str(INSTANCES / "cstar-check.json"))
        assert code == 0
        assert doc["outputs"]["extendible"] is True
        assert doc["outputs"]["violations"] == 0
        assert doc["outputs"]["constant4_ok"] is True
        assert doc["outputs"]["measured_bound"] == pytest.approx(1.0, abs=0.05)
        assert doc["seed"] == 0


class TestDeterminism:
    def test_byte_identical_reruns(self, tmp_path):
        for kind, name in (("kvn", "kvn.json"), ("cstar-check", "cstar-check.json")):
            out1 = tmp_path / "a.json"
            out2 = tmp_path / "b.json"
            assert cli.main([kind, str(INSTANCES / name), "--out", str(out1)]) == 0
            assert cli.main([kind, str(INSTANCES / name), "--out", str(out2)]) == 0
            assert out1.read_bytes() == out2.read_bytes()

    def test_stdout_matches_out_file(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        assert cli.main(["kvn", str(INSTANCES / "kvn.json"), "--out", str(out)]) == 0
        assert cli.main(["kvn", str(INSTANCES / "kvn.json")]) == 0
        assert capsys.readouterr().out == out.read_text()

    def test_gen_deterministic(self, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        assert cli.main(["gen", "--kind", "sa-ext", "--n", "4", "--seed", "9", "--out", str(a)]) == 0
        assert cli.main(["gen", "--kind", "sa-ext", "--n", "4", "--seed", "9", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestInfeasibleExit:
    def test_kvn_restriction_violation(self, tmp_path):
        path = write_instance(tmp_path, "bad.json", {
            "kind": "kvn",
            "payload": {
                "n": 2,
                "domain_basis": [[1.0], [0.0]],
                "values": [[0.0], [1.0]],
            },
        })
        code, doc = run(tmp_path, "kvn", path)
        assert code == 1
        assert doc["status"] == "infeasible"
        assert doc["error"]["type"] == "RestrictionConditionFailed"
        assert "restriction" in doc["error"]["message"]

    def test_sa_ext_unbounded(self, tmp_path):
        path = write_instance(tmp_path, "bad.json", {
            "kind": "sa-ext",
            "payload": {
                "n": 2,
                "domain_basis": [[1.0], [0.0]],
                "values": [[0.0], [1.0]],
                "weight": [[1.0, 0.0], [0.0, 0.0]],
            },
        })
        code, doc = run(tmp_path, "sa-ext", path)
        assert code == 1
        assert doc["error"]["type"] == "NotABounded"

    def test_parrott_incompatible(self, tmp_path):
        path = write_instance(tmp_path, "bad.json", {
            "kind": "parrott",
            "payload": {
                "n1": 1, "n2": 1,
                "domain1": [[1.0]], "values1": [[1.0]],
                "domain2": [[1.0]], "values2": [[2.0]],
                "weight1": [[1.0]], "weight2": [[1.0]],
                "alpha1": 4.0, "alpha2": 4.0,
            },
        })
        code, doc = run(tmp_path, "parrott", path)
        assert code == 1
        assert doc["error"]["type"] == "IncompatibleInstance"

    def test_strong_parrott_hypothesis_violation(self, tmp_path):
        path = write_instance(tmp_path, "bad.json", {
            "kind": "strong-parrott",
            "payload": {
                "s1": [[1.0], [0.0]],
                "s2": [[0.0], [1.5]],
                "t1": [[0.0, 1.0]],
                "t2": [[1.0, 0.0]],
            },
        })
        code, doc = run(tmp_path, "strong-parrott", path)
        assert code == 1
        assert doc["error"]["type"] == "HypothesisViolated"

    def test_cstar_not_symmetric(self, tmp_path):
        path = write_instance(tmp_path, "bad.json", {
            "kind": "cstar-check",
            "payload": {
                "m": 2,
                "projection": [[1.0, 0.0], [0.0, 1.0]],
                "gamma": [[0.0, 1.0], [0.0, 0.0]],
            },
        })
        code, doc = run(tmp_path, "cstar-check", path)
        assert code == 1
        assert doc["error"]["type"] == "NotSymmetric"


class TestInvalidInputExit:
    def test_kind_mismatch(self, tmp_path):
        code, doc = run(tmp_path, "sa-ext", str(INSTANCES / "kvn.json"))
        assert code == 2
        assert doc["status"] == "invalid-input"
        assert "kind" in doc["error"]["message"]

    def test_missing_file(self, tmp_path):
        code, doc = run(tmp_path, "kvn", str(tmp_path / "missing.json"))
        assert code == 2

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        code, doc = run(tmp_path, "kvn", str(path))
        assert code == 2
        assert doc["error"]["type"] == "JSONDecodeError"

    def test_not_an_object(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[]\n")
        code, doc = run(tmp_path, "kvn", str(path))
        assert code == 2

    def test_missing_payload_key(self, tmp_path):
        path = write_instance(tmp_path, "bad.json", {
            "kind": "kvn",
            "payload": {"n": 2, "domain_basis": [[1.0], [0.0]]},
        })
        code, doc = run(tmp_path, "kvn", path)
        assert code == 2
        assert "values" in doc["error"]["message"]

    def test_shape_mismatch(self, tmp_path):
        path = write_instance(tmp_path, "bad.json", {
            "kind": "kvn",
            "payload": {
                "n": 2,
                "domain_basis": [[1.0], [0.0]],
                "values": [[1.0, 0.0], [0.0, 1.0]],
            },
        })
        code, doc = run(tmp_path, "kvn", path)
        assert code == 2

    def test_bad_tolerance_flag(self, tmp_path):
        code, doc = run(tmp_path, "kvn", str(INSTANCES / "kvn.json"), "--tol-eq", "-1")
        assert code == 2
        assert "tolerance" in doc["error"]["message"]

    def test_argparse_failures_map_to_invalid_input(self, capsys):
        assert cli.main([]) == 2
        assert cli.main(["kvn"]) == 2
        assert cli.main(["gen", "--kind", "bogus"]) == 2
        assert cli.main(["parrott", "x.json", "--endpoint", "median"]) == 2
        capsys.readouterr()

    def test_help_exits_ok(self, capsys):
        assert cli.main(["--help"]) == 0
        capsys.readouterr()


class TestNumericalFailureExit:
    def test_runner_exception_maps_to_exit_three(self, tmp_path, monkeypatch):
        def boom(data, tol, args):
            raise NumericalFailure("synthetic breakdown")

        monkeypatch.setitem(cli._RUNNERS, "kvn", boom)
        code, doc = run(tmp_path, "kvn", str(INSTANCES / "kvn.json"))
        assert code == 3
        assert doc["status"] == "numerical-failure"
        assert doc["error"]["type"] == "NumericalFailure"

    def test_linalg_error_maps_to_exit_three(self, tmp_path, monkeypatch):
        def boom(data, tol, args):
            raise np.linalg.LinAlgError("did not converge")

        monkeypatch.setitem(cli._RUNNERS, "kvn", boom)
        code, doc = run(tmp_path, "kvn", str(INSTANCES / "kvn.json"))
        assert code == 3


class TestTolerances:
    def test_file_overrides_recorded(self, tmp_path):
        path = write_instance(tmp_path, "t.json", {
            "kind": "kvn",
            "payload": {
                "n": 2,
                "domain_basis": [[1.0], [0.0]],
                "values": [[1.0], [1.0]],
            },
            "tolerances": {"eq": 0.5},
        })
        code, doc = run(tmp_path, "kvn", path)
        assert code == 0
        assert doc["tolerances"]["eq"] == 0.5
        assert doc["tolerances"]["psd"] == 1e-8

    def test_cli_flag_wins_over_file(self, tmp_path):
        path = write_instance(tmp_path, "t.json", {
            "kind": "kvn",
            "payload": {
                "n": 2,
                "domain_basis": [[1.0], [0.0]],
                "values": [[1.0], [1.0]],
            },
            "tolerances": {"eq": 0.5},
        })
        code, doc = run(tmp_path, "kvn", path, "--tol-eq", "1e-6")
        assert code == 0
        assert doc["tolerances"]["eq"] == 1e-6


class TestGen:
    @pytest.mark.parametrize("kind", cli.RUN_KINDS)
    def test_gen_then_run(self, tmp_path, kind):
        inst = tmp_path / "inst.json"
        assert cli.main(["gen", "--kind", kind, "--seed", "11", "--out", str(inst)]) == 0
        document = json.loads(inst.read_text())
        assert document["kind"] == kind
        assert document["seed"] == 11
        code, doc = run(tmp_path, kind, str(inst))
        assert code == 0
        assert doc["status"] == "ok"

    def test_gen_with_dims(self, tmp_path):
        inst = tmp_path / "inst.json"
        assert cli.main(["gen", "--kind", "parrott", "--dims", "3,2", "--seed", "1",
                         "--out", str(inst)]) == 0
        payload = json.loads(inst.read_text())["payload"]
        assert payload["n1"] == 3 and payload["n2"] == 2

    def test_gen_bad_dims(self, tmp_path, capsys):
        assert cli.main(["gen", "--kind", "kvn", "--dims", "0"]) == 2
        assert cli.main(["gen", "--kind", "kvn", "--dims", "x"]) == 2
        assert cli.main(["gen", "--kind", "kvn", "--dims", "3", "--n", "4"]) == 2
        assert cli.main(["gen", "--kind", "functional-ext", "--n", "9"]) == 2
        capsys.readouterr()


class TestParrottEndpointFlag:
    def test_all_endpoints_run(self, tmp_path):
        for endpoint in ("min", "max", "mid"):
            out = tmp_path / f"{endpoint}.json"
            code = cli.main(["parrott", str(INSTANCES / "parrott.json"),
                             "--endpoint", endpoint, "--out", str(out)])
            assert code == 0
            doc = json.loads(out.read_text())
            np.testing.assert_allclose(
                decode_matrix(doc["outputs"]["completion"]),
                np.array([[0.0, 1.0], [1.0, 0.0]]),
                atol=1e-8,
            )


class TestCstarFlags:
    def test_samples_and_seed_flags(self, tmp_path):
        out1 = tmp_path / "a.json"
        out2 = tmp_path / "b.json"
        argv = ["cstar-check", str(INSTANCES / "cstar-check.json"),
                "--samples", "500", "--seed", "3"]
        assert cli.main([*argv, "--out", str(out1)]) == 0
        assert cli.main([*argv, "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        doc = json.loads(out1.read_text())
        assert doc["seed"] == 3
        assert doc["outputs"]["violations"] == 0


class TestVerify:
    def test_verify_single_kind(self, tmp_path):
        code, doc = run(tmp_path, "verify", "--kind", "kvn", "--count", "3", "--seed", "1")
        assert code == 0
        assert doc["status"] == "ok"
        assert doc["outputs"]["kvn"] == {"count": 3, "passed": 3, "failed": 0}
        assert doc["diagnostics"]["total_failed"] == 0

    def test_verify_fixed_dims(self, tmp_path):
        code, doc = run(tmp_path, "verify", "--kind", "strong-parrott", "--count", "2",
                        "--seed", "2", "--dims", "3,2,2")
        assert code == 0

    def test_verify_all_kinds_smoke(self, tmp_path):
        code, doc = run(tmp_path, "verify", "--kind", "all", "--count", "1", "--seed", "4")
        assert code == 0
        assert set(doc["outputs"]) == set(cli.RUN_KINDS)

    def test_verify_dims_with_all_rejected(self, capsys):
        assert cli.main(["verify", "--kind", "all", "--dims", "2"]) == 2
        capsys.readouterr()

    def test_verify_bad_count(self, capsys):
        assert cli.main(["verify", "--kind", "kvn", "--count", "0"]) == 2
        capsys.readouterr()
