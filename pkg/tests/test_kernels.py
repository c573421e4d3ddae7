import numpy as np
import pytest

from stripforge import _kernels_py, backend

try:
    from stripforge import _kernels
except ImportError:
    _kernels = None

needs_compiled = pytest.mark.skipif(
    _kernels is None, reason="compiled extension not built"
)


def random_frame_args(rng, n=400, h=1e-3):
    t = h / 2.0 * np.arange(2 * n - 1)
    a = 1.0 + 0.4 * np.sin(rng.uniform(0.5, 2.0) * t + rng.uniform(0, 2))
    b = 0.6 * np.cos(rng.uniform(0.5, 2.0) * t + rng.uniform(0, 2))
    w = 1.0 + 0.3 * np.sin(rng.uniform(0.5, 2.0) * t) ** 2
    return (
        a, b, w, h,
        rng.standard_normal(3),
        np.array([1.0, 0.0, 0.0]),
        np.array([0.0, 1.0, 0.0]),
        np.array([0.0, 0.0, 1.0]),
    )


class TestPythonKernels:
    def test_frame_rejects_even_sample_count(self):
        z = np.zeros(6)
        with pytest.raises(ValueError):
            _kernels_py.frame_rk4(
                z, z, z, 0.1,
                np.zeros(3), np.array([1.0, 0, 0]),
                np.array([0.0, 1, 0]), np.array([0.0, 0, 1]),
            )

    def test_duffing_linear_limit(self):
        # c = 1, tiny amplitude: y ~ eps cos(t)
        y, dy = _kernels_py.duffing_rk4(1.0, 1e-8, 0.0, 1e-3, 4000)
        t = 1e-3 * np.arange(4001)
        np.testing.assert_allclose(y, 1e-8 * np.cos(t), atol=1e-14)

    def test_frame_preserves_orthonormality(self):
        rng = np.random.default_rng(0)
        _, e1, e2, e3 = _kernels_py.frame_rk4(*random_frame_args(rng))
        np.testing.assert_allclose(np.sum(e1 * e1, axis=1), 1.0, atol=1e-13)
        np.testing.assert_allclose(np.sum(e1 * e2, axis=1), 0.0, atol=1e-13)
        np.testing.assert_allclose(np.sum(e2 * e3, axis=1), 0.0, atol=1e-13)


@needs_compiled
class TestBackendParity:
    def test_frame_rk4_matches(self):
        rng = np.random.default_rng(42)
        for _ in range(3):
            args = random_frame_args(rng)
            outs_py = _kernels_py.frame_rk4(*args)
            outs_cy = _kernels.frame_rk4(*args)
            for ap, ac in zip(outs_py, outs_cy):
                np.testing.assert_allclose(ac, ap, rtol=0, atol=1e-13)

    def test_duffing_rk4_matches(self):
        rng = np.random.default_rng(7)
        for _ in range(3):
            c = rng.uniform(-1, 1)
            y0 = rng.uniform(-1.5, 1.5)
            dy0 = rng.uniform(-0.5, 0.5)
            yp, dp = _kernels_py.duffing_rk4(c, y0, dy0, 5e-4, 6000)
            yc, dc = _kernels.duffing_rk4(c, y0, dy0, 5e-4, 6000)
            np.testing.assert_allclose(yc, yp, rtol=0, atol=1e-12)
            np.testing.assert_allclose(dc, dp, rtol=0, atol=1e-12)


class TestBackendSelection:
    def test_backend_reports_a_known_name(self):
        assert backend.BACKEND in ("cython", "python")

    def test_env_forces_python(self):
        import subprocess
        import sys

        out = subprocess.run(
            [sys.executable, "-c",
             "from stripforge import backend; print(backend.BACKEND)"],
            env={"PATH": "/usr/bin:/bin", "STRIPFORGE_BACKEND": "python"},
            capture_output=True, text=True,
        )
        assert out.stdout.strip() == "python"
