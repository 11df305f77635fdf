import numpy as np
import pytest

from alignrl import numcore as nc
from alignrl.errors import DimensionError


def t64(arr, requires_grad=False):
    return nc.Tensor(np.asarray(arr, dtype=np.float64), requires_grad=requires_grad)


class TestConv2d:
    def test_identity_kernel(self):
        x = nc.Tensor(np.array([[[0.7]]], dtype=np.float32))
        k = nc.Tensor(np.array([[[[1.0]]]], dtype=np.float32))
        out = nc.conv2d(x, k, stride=1)
        assert np.allclose(out.numpy(), [[[0.7]]])

    def test_averaging_kernel(self):
        x = nc.Tensor(np.ones((1, 3, 3), dtype=np.float32))
        k = nc.Tensor(np.full((1, 1, 3, 3), 1.0 / 9.0, dtype=np.float32))
        out = nc.conv2d(x, k, stride=1)
        assert out.shape == (1, 1, 1)
        assert out.numpy()[0, 0, 0] == pytest.approx(1.0, abs=1e-6)

    def test_output_size_arithmetic(self):
        x = nc.Tensor(np.zeros((1, 16, 16), dtype=np.float32))
        k = nc.Tensor(np.zeros((8, 1, 3, 3), dtype=np.float32))
        assert nc.conv2d(x, k, stride=2).shape == (8, 7, 7)

    def test_kernel_larger_than_input(self):
        x = nc.Tensor(np.zeros((1, 2, 2), dtype=np.float32))
        k = nc.Tensor(np.zeros((1, 1, 3, 3), dtype=np.float32))
        with pytest.raises(DimensionError):
            nc.conv2d(x, k, stride=1)

    @pytest.mark.parametrize("stride", [1, 2])
    def test_gradients_vs_finite_differences(self, stride):
        rng = np.random.default_rng(10 + stride)
        x0 = rng.standard_normal((2, 2, 5, 5))
        k0 = rng.standard_normal((3, 2, 3, 3))

        def f_x(x):
            return nc.sum(nc.conv2d(x, t64(k0), stride=stride))

        def f_k(k):
            return nc.sum(nc.mul(nc.conv2d(t64(x0), k, stride=stride), t64(x0[:, :1, : (5 - 3) // stride + 1, : (5 - 3) // stride + 1] * 0 + 1.3)))

        assert nc.finite_diff_check(f_x, t64(x0)) < 1e-4
        assert nc.finite_diff_check(f_k, t64(k0)) < 1e-4


class TestPointwiseConv1d:
    def test_parameter_count_is_68(self):
        c_in, c_out = 16, 4
        k = nc.zeros_init((c_out, c_in))
        b = nc.zeros_init((c_out,))
        assert k.size + b.size == 68

    def test_one_hot_kernel_selects_channel(self):
        rng = np.random.default_rng(3)
        x = nc.Tensor(rng.standard_normal((16, 32)).astype(np.float32))
        kd = np.zeros((1, 16), dtype=np.float32)
        kd[0, 3] = 1.0
        out = nc.pointwise_conv1d(x, nc.Tensor(kd), nc.Tensor(np.zeros(1, dtype=np.float32)))
        assert np.allclose(out.numpy()[0], x.numpy()[3], atol=1e-6)

    def test_equals_per_position_matmul(self):
        rng = np.random.default_rng(4)
        x = rng.standard_normal((16, 32)).astype(np.float32)
        k = rng.standard_normal((4, 16)).astype(np.float32)
        b = rng.standard_normal(4).astype(np.float32)
        out = nc.pointwise_conv1d(nc.Tensor(x), nc.Tensor(k), nc.Tensor(b)).numpy()
        for p in range(32):
            expected = k @ x[:, p] + b
            assert np.allclose(out[:, p], expected, atol=1e-5)

    def test_gradients_vs_finite_differences(self):
        rng = np.random.default_rng(5)
        x0 = rng.standard_normal((3, 6))
        k0 = rng.standard_normal((2, 3))
        b0 = rng.standard_normal(2)
        w = t64(rng.standard_normal((2, 6)))

        def f_x(x):
            return nc.sum(nc.mul(nc.pointwise_conv1d(x, t64(k0), t64(b0)), w))

        def f_k(k):
            return nc.sum(nc.mul(nc.pointwise_conv1d(t64(x0), k, t64(b0)), w))

        def f_b(b):
            return nc.sum(nc.mul(nc.pointwise_conv1d(t64(x0), t64(k0), b), w))

        assert nc.finite_diff_check(f_x, t64(x0)) < 1e-4
        assert nc.finite_diff_check(f_k, t64(k0)) < 1e-4
        assert nc.finite_diff_check(f_b, t64(b0)) < 1e-4

    def test_channel_mismatch(self):
        with pytest.raises(DimensionError):
            nc.pointwise_conv1d(
                nc.Tensor(np.zeros((8, 32), dtype=np.float32)),
                nc.Tensor(np.zeros((4, 16), dtype=np.float32)),
                nc.Tensor(np.zeros(4, dtype=np.float32)),
            )
