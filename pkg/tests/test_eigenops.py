import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfgkit.eigenops import decompose
from mfgkit.opcore import commutator, dag, matrix_exp

from conftest import random_hermitian

SZ = np.diag([1.0, -1.0]).astype(complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)


class TestQubitExamples:
    def test_sigma_x_splits_into_raising_and_lowering(self):
        eps = 1.3
        dec = decompose((eps / 2) * SZ, SX)
        assert sorted(dec.frequencies) == pytest.approx([-eps, eps])
        for w, x_m in dec.modes:
            # [H, X_m] = w X_m picks out sigma_+/-
            assert np.allclose(commutator((eps / 2) * SZ, x_m), w * x_m, atol=1e-12)

    def test_commuting_coupling_is_single_zero_mode(self):
        dec = decompose(0.9 * SZ, SZ)
        assert dec.frequencies == (0.0,)
        assert np.allclose(dec.modes[0][1], SZ, atol=1e-13)


class TestRandomSystems:
    @settings(max_examples=50, deadline=None)
    @given(
        dim=st.integers(min_value=2, max_value=5),
        seed=st.integers(min_value=0, max_value=10**6),
    )
    def test_reconstruction_and_commutators(self, dim, seed):
        rng = np.random.default_rng(seed)
        h = random_hermitian(rng, dim)
        x = random_hermitian(rng, dim)
        dec = decompose(h, x)
        assert np.allclose(sum(m for _, m in dec.modes), x, atol=1e-13)
        for w, x_m in dec.modes:
            assert np.linalg.norm(commutator(h, x_m) - w * x_m) < 1e-11

    @settings(max_examples=25, deadline=None)
    @given(
        seed=st.integers(min_value=0, max_value=10**6),
        t=st.floats(min_value=-5.0, max_value=5.0),
    )
    def test_interaction_picture_phase(self, seed, t):
        rng = np.random.default_rng(seed)
        h = random_hermitian(rng, 4)
        x = random_hermitian(rng, 4)
        u = matrix_exp(1j * t * h)
        for w, x_m in decompose(h, x).modes:
            assert np.allclose(
                u @ x_m @ dag(u), x_m * np.exp(1j * w * t), atol=1e-10
            )

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=10**6))
    def test_hermitian_closure(self, seed):
        # decomposing X yields the adjoint mode set: X_m(w) = X_m(-w)^dag
        rng = np.random.default_rng(seed)
        h = random_hermitian(rng, 4)
        x = random_hermitian(rng, 4)
        modes = {round(w, 9): x_m for w, x_m in decompose(h, x).modes}
        for w, x_m in modes.items():
            assert -w in modes or abs(w) < 1e-9
            partner = modes.get(-w, x_m)
            assert np.allclose(dag(x_m), partner, atol=1e-10)

    def test_frequencies_sorted_ascending(self, rng):
        dec = decompose(random_hermitian(rng, 5), random_hermitian(rng, 5))
        assert list(dec.frequencies) == sorted(dec.frequencies)


class TestDegeneracyClustering:
    def test_near_degenerate_frequencies_merge(self):
        # two Bohr gaps split by 1e-12 must merge into one mode under the
        # default tolerance but separate under a tighter explicit one
        h = np.diag([0.0, 1.0, 2.0 + 1e-12]).astype(complex)
        x = np.zeros((3, 3), dtype=complex)
        x[0, 1] = x[1, 0] = 1.0
        x[1, 2] = x[2, 1] = 1.0
        merged = decompose(h, x)
        assert len(merged.modes) == 2
        split = decompose(h, x, degeneracy_tol=1e-14)
        assert len(split.modes) == 4

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            decompose(SZ, np.eye(3, dtype=complex))
