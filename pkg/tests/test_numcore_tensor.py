import numpy as np
import pytest

from alignrl import numcore as nc
from alignrl.errors import ContractError, DimensionError


def t64(arr, requires_grad=False):
    return nc.Tensor(np.asarray(arr, dtype=np.float64), requires_grad=requires_grad)


class TestMatmul:
    def test_identity(self):
        rng = np.random.default_rng(0)
        a = rng.standard_normal((2, 2))
        out = nc.matmul(nc.Tensor(np.eye(2, dtype=np.float32)), nc.Tensor(a.astype(np.float32)))
        assert np.allclose(out.numpy(), a, atol=1e-6)

    def test_hand_product(self):
        out = nc.matmul(nc.Tensor([[1.0, 2.0], [3.0, 4.0]]), nc.Tensor([[5.0], [6.0]]))
        assert np.allclose(out.numpy(), [[17.0], [39.0]])

    def test_shape_mismatch_names_both_shapes(self):
        with pytest.raises(DimensionError) as ei:
            nc.matmul(nc.Tensor(np.zeros((2, 3))), nc.Tensor(np.zeros((2, 3))))
        assert "(2, 3)" in str(ei.value)

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(1)
        b = t64(rng.standard_normal((3, 2)))

        def f(a):
            return nc.sum(nc.matmul(a, b))

        a0 = t64(rng.standard_normal((2, 3)))
        assert nc.finite_diff_check(f, a0) < 1e-4


class TestElementwise:
    def test_relu_definition(self):
        out = nc.relu(nc.Tensor([-1.0, 2.0]))
        assert np.allclose(out.numpy(), [0.0, 2.0])

    def test_square_gradient_is_2x(self):
        x = t64([1.0, -2.0, 3.0], requires_grad=True)
        nc.backward(nc.sum(nc.mul(x, x)))
        assert np.allclose(x.grad, 2.0 * x.numpy())

    def test_mean_of_constant(self):
        x = t64(np.full(5, 3.25), requires_grad=True)
        m = nc.mean(x)
        assert m.item() == pytest.approx(3.25)
        nc.backward(m)
        assert np.allclose(x.grad, np.full(5, 1.0 / 5.0))

    def test_broadcast_add_reduces_grad(self):
        x = t64(np.zeros((4, 3)), requires_grad=True)
        b = t64(np.zeros(3), requires_grad=True)
        nc.backward(nc.sum(nc.add(x, b)))
        assert np.allclose(b.grad, np.full(3, 4.0))

    @pytest.mark.parametrize("opname", ["relu", "tanh", "exp", "log"])
    def test_unary_gradients(self, opname):
        rng = np.random.default_rng(hash(opname) % 2**32)
        op = getattr(nc, opname)
        x0 = rng.uniform(0.5, 2.0, size=7) if opname == "log" else rng.standard_normal(7)
        if opname == "relu":
            x0 = x0 + np.sign(x0) * 0.2  # keep away from the kink

        def f(x):
            return nc.sum(op(x))

        assert nc.finite_diff_check(f, t64(x0)) < 1e-4


class TestBackward:
    def test_constant_loss_leaves_grads_zero(self):
        x = t64([1.0, 2.0], requires_grad=True)
        loss = nc.Tensor(np.float64(5.0))
        nc.backward(loss)
        assert x.grad is None

    def test_composite_softmax_log_mean(self):
        rng = np.random.default_rng(2)

        def f(x):
            return nc.mean(nc.log(nc.softmax(x, temperature=0.5)))

        assert nc.finite_diff_check(f, t64(rng.standard_normal(6))) < 1e-4

    def test_double_backward_doubles_grads(self):
        x = t64([1.0, 2.0, 3.0], requires_grad=True)
        nc.backward(nc.sum(nc.mul(x, x)))
        first = x.grad.copy()
        nc.backward(nc.sum(nc.mul(x, x)))
        assert np.array_equal(x.grad, 2.0 * first)

    def test_non_scalar_loss_rejected(self):
        x = t64([1.0, 2.0], requires_grad=True)
        with pytest.raises(ContractError):
            nc.backward(nc.mul(x, x))

    def test_no_grad_suppresses_graph(self):
        x = t64([1.0], requires_grad=True)
        with nc.no_grad():
            y = nc.mul(x, x)
        assert not y.requires_grad

    def test_tape_reverse_execution_order(self):
        x = t64([2.0], requires_grad=True)
        y = nc.mul(x, x)
        z = nc.add(y, x)
        loss = nc.sum(z)
        tape = nc.GradTape.trace(loss)
        seqs = [n._seq for n in tape.nodes]
        assert seqs == sorted(seqs)
        nc.backward(loss, tape)
        assert np.allclose(x.grad, [5.0])


class TestGatherClipMinimum:
    def test_gather_rows(self):
        x = t64([[1.0, 2.0], [3.0, 4.0]], requires_grad=True)
        out = nc.gather_rows(x, [1, 0])
        assert np.allclose(out.numpy(), [2.0, 3.0])
        nc.backward(nc.sum(out))
        assert np.allclose(x.grad, [[0.0, 1.0], [1.0, 0.0]])

    def test_clip_blocks_gradient_outside(self):
        x = t64([0.5, 2.0, -2.0], requires_grad=True)
        nc.backward(nc.sum(nc.clip(x, -1.0, 1.0)))
        assert np.allclose(x.grad, [1.0, 0.0, 0.0])

    def test_minimum_routes_gradient(self):
        a = t64([1.0, 5.0], requires_grad=True)
        b = t64([2.0, 3.0], requires_grad=True)
        nc.backward(nc.sum(nc.minimum(a, b)))
        assert np.allclose(a.grad, [1.0, 0.0])
        assert np.allclose(b.grad, [0.0, 1.0])
