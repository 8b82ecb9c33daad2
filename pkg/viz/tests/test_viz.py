"""Viz tests: render all four figure kinds from the bundled samples, check
the Taylor-Green vorticity sign pattern, and exercise the format guards.
"""

import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

VIZ_DIR = Path(__file__).resolve().parent.parent
SAMPLES = VIZ_DIR / "samples"
sys.path.insert(0, str(VIZ_DIR))

from nlcviz.figures import plot_energy, plot_fields, plot_separation, vorticity_fd  # noqa: E402
from nlcviz.readers import read_snapshot, read_trajectory  # noqa: E402


def assert_is_image(path):
    data = Path(path).read_bytes()
    assert data[:8] == b"\x89PNG\r\n\x1a\n"
    assert len(data) > 2000


class TestFigureKinds:
    def test_energy_decay(self, tmp_path):
        out = tmp_path / "energy.png"
        plot_energy(SAMPLES / "tg_run.csv", out, logy=True)
        assert_is_image(out)

    def test_separation(self, tmp_path):
        out = tmp_path / "separation.png"
        plot_separation(SAMPLES / "separation.csv", out)
        assert_is_image(out)

    def test_director_quiver(self, tmp_path):
        out = tmp_path / "quiver.png"
        plot_fields(SAMPLES / "mode_director_snapshot.nlc", out, panels=("quiver",))
        assert_is_image(out)

    def test_vorticity(self, tmp_path):
        out = tmp_path / "vorticity.png"
        plot_fields(SAMPLES / "tg_snapshot.nlc", out, panels=("vorticity",))
        assert_is_image(out)

    def test_side_by_side_default(self, tmp_path):
        out = tmp_path / "fields.png"
        plot_fields(SAMPLES / "tg_snapshot.nlc", out)
        assert_is_image(out)


class TestVorticityPattern:
    def test_taylor_green_four_cell_signs(self):
        # w = dvy/dx - dvx/dy of the Taylor-Green vortex is proportional to
        # sin(2 pi x) sin(2 pi y): one sign per quarter-torus cell, in a
        # checkerboard (+ - / - +) reading (x-half, y-half) quadrants
        n, t, v_x, v_y, d_x, d_y = read_snapshot(SAMPLES / "tg_snapshot.nlc")
        w = vorticity_fd(v_x, v_y)
        half = n // 2
        quadrant_means = {
            ("lo_y", "lo_x"): w[:half, :half].mean(),
            ("lo_y", "hi_x"): w[:half, half:].mean(),
            ("hi_y", "lo_x"): w[half:, :half].mean(),
            ("hi_y", "hi_x"): w[half:, half:].mean(),
        }
        assert quadrant_means[("lo_y", "lo_x")] > 0
        assert quadrant_means[("lo_y", "hi_x")] < 0
        assert quadrant_means[("hi_y", "lo_x")] < 0
        assert quadrant_means[("hi_y", "hi_x")] > 0
        # amplitude matches 4 pi a with a = 1 to finite-difference accuracy
        assert abs(np.max(np.abs(w)) - 4 * np.pi) / (4 * np.pi) < 0.05

    def test_mode_director_winds_once(self):
        n, t, v_x, v_y, d_x, d_y = read_snapshot(SAMPLES / "mode_director_snapshot.nlc")
        angles = np.unwrap(np.arctan2(d_y[0, :], d_x[0, :]))
        total_turn = angles[-1] - angles[0]
        assert abs(total_turn - 2 * np.pi * (n - 1) / n) < 1e-6
        assert np.max(np.abs(v_x)) == 0.0 and np.max(np.abs(v_y)) == 0.0


class TestFormatGuards:
    def test_missing_column_named(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("t,E_kin,E_elastic\n0,0,0\n")
        with pytest.raises(ValueError, match="E_penalty"):
            read_trajectory(bad)

    def test_bad_magic(self, tmp_path):
        bad = tmp_path / "bad.nlc"
        bad.write_bytes(b"ABCD" + b"\x00" * 32)
        with pytest.raises(ValueError, match="magic"):
            read_snapshot(bad)

    def test_wrong_size(self, tmp_path):
        bad = tmp_path / "short.nlc"
        good = (SAMPLES / "tg_snapshot.nlc").read_bytes()
        bad.write_bytes(good[:-16])
        with pytest.raises(ValueError, match="size"):
            read_snapshot(bad)

    def test_zero_run_renders_flat(self, tmp_path):
        csv = tmp_path / "zero.csv"
        header = "t,E_kin,E_elastic,E_penalty,E_total,D_visc,D_rot,A,norm_v_H1,norm_d_H2,residual"
        rows = [f"{i * 0.1},0,0,0,0,0,0,0,0,1,0" for i in range(5)]
        csv.write_text(header + "\n" + "\n".join(rows) + "\n")
        out = tmp_path / "flat.png"
        plot_energy(csv, out)
        assert_is_image(out)


class TestScripts:
    @pytest.mark.parametrize(
        "script,sample",
        [
            ("plot_energy_decay.py", "tg_run.csv"),
            ("plot_separation.py", "separation.csv"),
            ("plot_director_quiver.py", "mode_director_snapshot.nlc"),
            ("plot_vorticity.py", "tg_snapshot.nlc"),
        ],
    )
    def test_script_invocation(self, tmp_path, script, sample):
        out = tmp_path / (script + ".png")
        proc = subprocess.run(
            [sys.executable, str(VIZ_DIR / script), str(SAMPLES / sample), str(out)],
            capture_output=True,
            text=True,
            cwd=VIZ_DIR,
        )
        assert proc.returncode == 0, proc.stderr
        assert_is_image(out)
