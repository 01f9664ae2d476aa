import numpy as np
import pytest

from rpkit.boxes import (Box22, adjoint, cyclic_convolve, dft_zd, group_box,
                         identity_box, rot_pi, sft, sft_inv, star_product, theta)
from rpkit.errors import InvalidArgument


def random_box(d, rng):
    n = d * d
    return Box22(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)), d)


class TestReflections:
    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_rotation_identity_exact(self, d):
        rng = np.random.default_rng(d)
        for _ in range(10):
            T = random_box(d, rng)
            assert np.abs(rot_pi(theta(T)).data - adjoint(T).data).max() == 0.0

    def test_real_diagonal_case(self):
        d = 2
        T = Box22(np.diag([1.0, 2.0, 3.0, 4.0]), d)
        # theta swaps the index pairs; rot of theta equals the adjoint = T here
        assert np.abs(rot_pi(theta(T)).data - T.data).max() == 0.0

    @pytest.mark.parametrize("d", [2, 3])
    def test_theta_homomorphism(self, d):
        rng = np.random.default_rng(10 + d)
        for _ in range(10):
            T, S = random_box(d, rng), random_box(d, rng)
            res = theta(T @ S).data - (theta(T) @ theta(S)).data
            assert np.abs(res).max() < 1e-12

    @pytest.mark.parametrize("d", [2, 3])
    def test_adjoint_antihomomorphism(self, d):
        rng = np.random.default_rng(20 + d)
        for _ in range(10):
            T, S = random_box(d, rng), random_box(d, rng)
            res = adjoint(T @ S).data - (adjoint(S) @ adjoint(T)).data
            assert np.abs(res).max() < 1e-12

    def test_theta_antilinear(self):
        rng = np.random.default_rng(4)
        T = random_box(3, rng)
        res = theta(Box22(1j * T.data, 3)).data + 1j * theta(T).data
        assert np.abs(res).max() == 0.0

    def test_shape_mismatch(self):
        with pytest.raises(InvalidArgument):
            Box22(np.eye(3), 2)
        with pytest.raises(InvalidArgument):
            identity_box(2) @ identity_box(3)


class TestSft:
    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_fourth_power_identity_exact(self, d):
        rng = np.random.default_rng(30 + d)
        for _ in range(20):
            T = random_box(d, rng)
            X = T
            for _ in range(4):
                X = sft(X)
            assert np.abs(X.data - T.data).max() == 0.0

    def test_inverse(self):
        rng = np.random.default_rng(7)
        T = random_box(3, rng)
        assert np.abs(sft_inv(sft(T)).data - T.data).max() == 0.0

    def test_sft_of_identity_is_cup_cap(self):
        d = 3
        out = sft(identity_box(d)).data.reshape(d, d, d, d)
        # sft(I)[(a,c),(b,e)] = delta_{a,c} delta_{b,e}: rank-1 matched-index pattern
        for a in range(d):
            for c in range(d):
                for b in range(d):
                    for e in range(d):
                        want = 1.0 if (a == c and b == e) else 0.0
                        assert out[a, c, b, e] == want
        mat = sft(identity_box(d)).data
        assert np.linalg.matrix_rank(mat) == 1

    def test_trace_re_matching(self):
        # Tr(sft(T)) re-matches the diagonal as sum_{a,c} T[(c,c),(a,a)]
        rng = np.random.default_rng(9)
        d = 3
        T = random_box(d, rng)
        f = T.data.reshape(d, d, d, d)
        want = sum(f[c, c, a, a] for a in range(d) for c in range(d))
        assert abs(np.trace(sft(T).data) - want) < 1e-12

    def test_linearity(self):
        rng = np.random.default_rng(13)
        T, S = random_box(2, rng), random_box(2, rng)
        res = sft(T + S).data - (sft(T).data + sft(S).data)
        assert np.abs(res).max() == 0.0


class TestConvolution:
    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_convolution_theorem_exact(self, d):
        rng = np.random.default_rng(40 + d)
        for _ in range(20):
            T, S = random_box(d, rng), random_box(d, rng)
            res = sft(T @ S).data - star_product(sft(T), sft(S)).data
            assert np.abs(res).max() == 0.0

    def test_star_unit(self):
        d = 3
        rng = np.random.default_rng(17)
        X = random_box(d, rng)
        unit = sft(identity_box(d))
        assert np.abs(star_product(X, unit).data - X.data).max() < 1e-12
        assert np.abs(star_product(unit, X).data - X.data).max() < 1e-12

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_group_algebra_embedding(self, d):
        rng = np.random.default_rng(50 + d)
        u = rng.normal(size=d)
        v = rng.normal(size=d)
        prod = group_box(u) @ group_box(v)
        assert np.abs(prod.data - group_box(cyclic_convolve(u, v)).data).max() < 1e-12

    def test_d2_dft_pointwise_example(self):
        # (1,0) . (0,1): convolution (0,1); DFT pointwise (1,1)*(1,-1) = (1,-1)
        u, v = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        conv = cyclic_convolve(u, v)
        assert np.abs(conv - np.array([0.0, 1.0])).max() == 0.0
        lhs = dft_zd(u) * dft_zd(v)
        assert np.abs(lhs - np.array([1.0, -1.0])).max() < 1e-14
        assert np.abs(dft_zd(conv) - lhs).max() < 1e-14
        # box level: the convolution theorem holds on the embedded subalgebra
        res = sft(group_box(u) @ group_box(v)).data \
            - star_product(sft(group_box(u)), sft(group_box(v))).data
        assert np.abs(res).max() == 0.0


class TestDft:
    def test_basic_values(self):
        assert np.abs(dft_zd([1.0, 0.0]) - np.array([1.0, 1.0])).max() < 1e-14
        assert np.abs(dft_zd([1.0, 1.0]) - np.array([2.0, 0.0])).max() < 1e-14

    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_convolution_theorem(self, d):
        rng = np.random.default_rng(60 + d)
        u = rng.normal(size=d) + 1j * rng.normal(size=d)
        v = rng.normal(size=d) + 1j * rng.normal(size=d)
        lhs = dft_zd(cyclic_convolve(u, v))
        rhs = dft_zd(u) * dft_zd(v)
        assert np.abs(lhs - rhs).max() < 1e-12

    def test_d3_delta_shift(self):
        u = np.array([1.0, 0, 0])
        v = np.array([0, 1.0, 0])
        conv = cyclic_convolve(u, v)
        assert np.abs(dft_zd(conv) - dft_zd(u) * dft_zd(v)).max() < 1e-12
