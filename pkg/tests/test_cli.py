import json

import numpy as np
import pytest

from stripforge import io
from stripforge.cli import default_tolerance, main


@pytest.fixture()
def helix_bundle(tmp_path, helix_strip):
    path = str(tmp_path / "helix.csv")
    io.write_strip_bundle(path, helix_strip)
    return path


@pytest.fixture()
def solution_file(tmp_path, force_free_solution):
    path = str(tmp_path / "sol.csv")
    io.write_solution(path, force_free_solution)
    return path


@pytest.fixture()
def momentum_solution_file(tmp_path, momentum_solution):
    path = str(tmp_path / "msol.csv")
    io.write_solution(path, momentum_solution)
    return path


class TestElastica:
    def test_writes_solution(self, tmp_path, capsys):
        out = str(tmp_path / "sol.csv")
        code = main([
            "elastica", "--l", "1", "--lambda0", "0.8",
            "--length", "4", "--out", out, "--json",
        ])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["A"] == pytest.approx(0.8**2 / 2 + 0.8**4 / 4)
        io.read_solution(out)

    def test_rejects_negative_step(self):
        assert main(["elastica", "--l", "1", "--lambda0", "0.5",
                     "--length", "4", "--h", "-1"]) == 2

    def test_missing_required_flag(self):
        assert main(["elastica", "--lambda0", "0.5", "--length", "4"]) == 2


class TestBuildVerify:
    def test_helix_build_then_verify(self, tmp_path, capsys):
        out = str(tmp_path / "h.csv")
        assert main(["build", "--kind", "helix", "--kappa", "1",
                     "--lambda", "1", "--length", "6", "--out", out]) == 0
        capsys.readouterr()
        assert main(["verify", "--bundle", out, "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["passed"] is True

    def test_force_free_pipeline(self, tmp_path, solution_file, capsys):
        out = str(tmp_path / "ff.csv")
        assert main(["build", "--kind", "force-free",
                     "--solution", solution_file, "--out", out]) == 0
        # jets recovered by finite differences at h = 1e-3 carry a roundoff
        # floor above the default tolerance, so pass an explicit one
        assert main(["verify", "--bundle", out, "--tol", "1e-3"]) == 0

    def test_momentum_guard_maps_to_exit_3(self, tmp_path, solution_file):
        # this solution oscillates through zero: the momentum build must stop
        out = str(tmp_path / "m.csv")
        assert main(["build", "--kind", "momentum",
                     "--solution", solution_file, "--mu", "-1",
                     "--out", out]) == 3

    def test_multiplier_guard_maps_to_exit_3(self, tmp_path,
                                             momentum_solution_file):
        out = str(tmp_path / "ff.csv")
        assert main(["build", "--kind", "force-free",
                     "--solution", momentum_solution_file, "--out", out]) == 3

    def test_perturbed_bundle_fails_verification(self, tmp_path, helix_strip,
                                                 capsys):
        from dataclasses import replace

        bad = replace(
            helix_strip,
            profile=replace(helix_strip.profile,
                            kappa=helix_strip.profile.kappa * 1.01),
        )
        path = str(tmp_path / "bad.csv")
        io.write_strip_bundle(path, bad)
        assert main(["verify", "--bundle", path, "--json"]) == 1
        assert json.loads(capsys.readouterr().out)["passed"] is False

    def test_malformed_bundle_is_usage_error(self, tmp_path):
        path = tmp_path / "junk.csv"
        path.write_text("not,a,header\n1,2,3\n")
        assert main(["verify", "--bundle", str(path), "--mu", "-1"]) == 2

    def test_tolerance_env_override(self, helix_bundle, monkeypatch):
        monkeypatch.setenv("STRIPFORGE_TOL", "1e-12")
        assert default_tolerance() == 1e-12
        # FD jets from the bundle cannot meet 1e-12, so certification fails
        assert main(["verify", "--bundle", helix_bundle]) == 1
        monkeypatch.setenv("STRIPFORGE_TOL", "-3")
        assert main(["verify", "--bundle", helix_bundle]) == 2


class TestMeshCommand:
    def test_writes_obj(self, tmp_path, helix_bundle, capsys):
        out = str(tmp_path / "strip.obj")
        assert main(["mesh", "--bundle", helix_bundle, "--width", "0.2",
                     "--out", out, "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["developability_defect"] <= 1e-6
        from stripforge.surface import parse_obj

        verts, faces = parse_obj(open(out, "rb").read())
        assert verts.shape[0] == payload["vertices"]

    def test_obj_bytes_are_deterministic(self, tmp_path, helix_bundle):
        a = str(tmp_path / "a.obj")
        b = str(tmp_path / "b.obj")
        main(["mesh", "--bundle", helix_bundle, "--width", "0.2", "--out", a])
        main(["mesh", "--bundle", helix_bundle, "--width", "0.2", "--out", b])
        assert open(a, "rb").read() == open(b, "rb").read()

    def test_width_guard_exit_3(self, tmp_path, force_free_strip, capsys):
        path = str(tmp_path / "ff.csv")
        io.write_strip_bundle(path, force_free_strip)
        out = str(tmp_path / "x.obj")
        bad = 2.0 / np.abs(force_free_strip.profile.dlam).max()
        assert main(["mesh", "--bundle", path, "--width", str(bad),
                     "--out", out]) == 3
        assert "bound" in capsys.readouterr().err


class TestAnalysisCommands:
    def test_energy(self, helix_bundle, capsys):
        assert main(["energy", "--bundle", helix_bundle, "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["S_mu"] == pytest.approx(16.0 * 6.0, rel=1e-9)

    def test_pfunc_consistency(self, helix_bundle, capsys):
        assert main(["pfunc", "--bundle", helix_bundle, "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["consistency_gap"] <= 1e-8

    def test_variation_check_passes_on_critical_strip(self, helix_bundle,
                                                      capsys):
        assert main(["variation-check", "--bundle", helix_bundle,
                     "--trials", "3", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["max_relative_error"] <= 1e-2

    def test_variation_check_fails_at_tight_tol(self, helix_bundle):
        assert main(["variation-check", "--bundle", helix_bundle,
                     "--trials", "2", "--tol", "1e-14"]) == 1

    def test_closure_search_reports_trivial_candidate(self, capsys):
        assert main(["closure-search", "--amin", "0", "--amax", "0",
                     "--count", "1", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload and payload[0]["closure_gap"] <= 1e-12
