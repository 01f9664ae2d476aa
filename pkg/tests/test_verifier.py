import numpy as np
import pytest

from rpkit.algebra import AlgebraConfig, StateFunctional, theta
from rpkit.boxes import dft_zd
from rpkit.errors import PreconditionViolation, SizeLimit, WrongHalf
from rpkit.verifier import (NEGATIVE, NOT_APPLICABLE, POSITIVE, coupling_decomposition,
                            coupling_element, cross_phase,
                            draw_generic_hamiltonian, draw_theorem_hamiltonian, gram,
                            null_basis, plus_basis, sft_positivity,
                            sft_positivity_sequence)

from conftest import make_algebra, random_element


class TestPlusBasis:
    def test_single_majorana(self):
        basis = plus_basis(AlgebraConfig(2, 2))
        assert basis == [(0, 0), (0, 1)]            # 1, c2

    def test_two_majoranas_order(self):
        basis = plus_basis(AlgebraConfig(2, 4))
        assert basis == [(0, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (0, 0, 1, 1)]

    def test_d3_ladder(self):
        basis = plus_basis(AlgebraConfig(3, 2))
        assert basis == [(0, 0), (0, 1), (0, 2)]

    def test_count_uncapped(self):
        cfg = AlgebraConfig(3, 4)
        assert len(plus_basis(cfg)) == 9

    def test_grade_cap(self):
        basis = plus_basis(AlgebraConfig(2, 4), max_grade=1)
        assert basis == [(0, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]

    def test_size_limit(self):
        with pytest.raises(SizeLimit):
            plus_basis(AlgebraConfig(2, 26))


class TestGram:
    def test_trace_state_majorana_pair(self):
        # frozen by hand: M = diag(1, 0) since omega_tr kills c1 c2
        alg = make_algebra(2, 2)
        rep = gram(StateFunctional(kind="trace"), alg, plus_basis(alg.cfg))
        assert np.abs(rep.matrix - np.diag([1.0, 0.0])).max() < 1e-14
        assert rep.psd and rep.verdict == POSITIVE

    def test_unit_entry(self):
        alg = make_algebra(3, 2)
        rng = np.random.default_rng(2)
        H = random_element(alg, rng)
        H = H + H.star() + theta(random_element(alg, rng) * 0)
        om = StateFunctional(kind="gibbs", beta=0.5, hamiltonian=H + H.star())
        rep = gram(om, alg, plus_basis(alg.cfg))
        assert abs(rep.matrix[0, 0] - 1.0) < 1e-14

    def test_theorem_class_is_psd(self):
        rng = np.random.default_rng(123)
        for d, m in [(2, 4), (3, 2)]:
            alg = make_algebra(d, m)
            for _ in range(5):
                H = draw_theorem_hamiltonian(alg, rng)
                om = StateFunctional(kind="gibbs", beta=1.0, hamiltonian=H)
                rep = gram(om, alg, plus_basis(alg.cfg))
                assert rep.herm_defect < 1e-12
                assert rep.min_eig >= -1e-10
                assert rep.verdict == POSITIVE

    def test_basis_order_independence(self):
        rng = np.random.default_rng(5)
        alg = make_algebra(2, 4)
        H = draw_theorem_hamiltonian(alg, rng)
        om = StateFunctional(kind="gibbs", beta=1.0, hamiltonian=H)
        basis = plus_basis(alg.cfg)
        rep = gram(om, alg, basis)
        perm = [2, 0, 3, 1]
        rep2 = gram(om, alg, [basis[i] for i in perm])
        assert abs(rep.min_eig - rep2.min_eig) < 1e-12
        P = np.zeros((4, 4))
        for new, old in enumerate(perm):
            P[new, old] = 1.0
        assert np.abs(P @ rep.matrix @ P.T - rep2.matrix).max() < 1e-12

    def test_wrong_half_rejected(self):
        alg = make_algebra(2, 4)
        with pytest.raises(WrongHalf):
            gram(StateFunctional(kind="trace"), alg, [(1, 0, 0, 0)])

    def test_witness_certifies_min_eig(self):
        rng = np.random.default_rng(9)
        alg = make_algebra(2, 4)
        H = draw_generic_hamiltonian(alg, rng)
        om = StateFunctional(kind="gibbs", beta=1.0, hamiltonian=H)
        rep = gram(om, alg, plus_basis(alg.cfg))
        v = rep.witness
        assert abs(np.real(v.conj() @ rep.matrix @ v) - rep.min_eig) < 1e-10
        assert abs(np.linalg.norm(v) - 1) < 1e-12


class TestNullBasis:
    def test_explicit_kernel(self):
        alg = make_algebra(2, 2)
        rep = gram(StateFunctional(kind="trace"), alg, plus_basis(alg.cfg))
        nb = null_basis(rep)
        assert len(nb) == 1
        assert np.abs(np.abs(nb[0]) - np.array([0.0, 1.0])).max() < 1e-12

    def test_strictly_positive_empty(self):
        rng = np.random.default_rng(21)
        alg = make_algebra(2, 2)
        H = coupling_element(alg, (0, 1), 1.0)
        om = StateFunctional(kind="gibbs", beta=1.0, hamiltonian=H)
        rep = gram(om, alg, plus_basis(alg.cfg))
        assert rep.min_eig > 1e-3
        assert null_basis(rep) == []

    def test_rank_plus_nullity(self):
        alg = make_algebra(2, 4)
        rep = gram(StateFunctional(kind="trace"), alg, plus_basis(alg.cfg))
        nb = null_basis(rep)
        rank = int((np.linalg.eigvalsh(rep.matrix) > rep.tol).sum())
        assert rank + len(nb) == 4

    def test_requires_psd(self):
        rng = np.random.default_rng(33)
        alg = make_algebra(2, 4)
        while True:
            H = draw_generic_hamiltonian(alg, rng)
            om = StateFunctional(kind="gibbs", beta=1.0, hamiltonian=H)
            rep = gram(om, alg, plus_basis(alg.cfg))
            if not rep.psd:
                break
        with pytest.raises(PreconditionViolation):
            null_basis(rep)


class TestCouplingDecomposition:
    def test_one_sided_term(self):
        alg = make_algebra(2, 4)
        gens = alg.generators()
        H = gens[2] * gens[3]                      # c3 c4
        dec = coupling_decomposition(H)
        assert (dec.h_plus - H).norm_max() == 0.0
        assert dec.cross == []
        assert dec.residual.norm_max() == 0.0

    def test_canonical_cross(self):
        alg = make_algebra(2, 4)
        H = coupling_element(alg, (0, 0, 1, 0), 1.0)
        dec = coupling_decomposition(H)
        assert dec.residual.norm_max() < 1e-14
        assert len(dec.cross) == 1
        lam, k = dec.cross[0]
        assert k == (0, 0, 1, 0)
        gamma, _, _ = cross_phase(alg, k)
        assert abs(-lam / gamma - 1.0) < 1e-12     # J = 1 recovered

    def test_bare_cross_monomial_phase(self):
        # c2 c3 = -i * theta(c3) o c3 at d = 2 (twist phase i)
        alg = make_algebra(2, 4)
        gens = alg.generators()
        H = gens[1] * gens[2]
        dec = coupling_decomposition(H)
        assert dec.residual.norm_max() == 0.0
        (lam, k), = dec.cross
        assert k == (0, 0, 1, 0)
        assert abs(lam - (-1j)) < 1e-14

    def test_offdiagonal_cross_goes_to_residual(self):
        alg = make_algebra(2, 4)
        gens = alg.generators()
        H = gens[0] * gens[2]                      # c1 c3: minus part is not theta(c3)
        dec = coupling_decomposition(H)
        assert dec.cross == []
        assert dec.residual.norm_max() == 1.0

    def test_reassembly(self):
        rng = np.random.default_rng(55)
        for d, m in [(2, 4), (3, 2), (3, 4)]:
            alg = make_algebra(d, m)
            H = draw_generic_hamiltonian(alg, rng)
            dec = coupling_decomposition(H)
            assert (dec.reassemble() - H).norm_max() < 1e-12


class TestSftPositivity:
    def test_nonnegative_diagonal_couplings(self):
        rng = np.random.default_rng(61)
        for d, m in [(2, 4), (3, 2)]:
            alg = make_algebra(d, m)
            H = draw_theorem_hamiltonian(alg, rng)
            sv = sft_positivity(coupling_decomposition(H))
            assert sv.verdict == POSITIVE
            assert all(v.real >= -1e-12 for v in sv.couplings.values())

    def test_negative_coupling_detected(self):
        alg = make_algebra(2, 4)
        H = coupling_element(alg, (0, 0, 1, 0), -0.5)
        sv = sft_positivity(coupling_decomposition(H))
        assert sv.verdict == NEGATIVE

    def test_residual_not_applicable(self):
        alg = make_algebra(2, 4)
        gens = alg.generators()
        H = 1j * (gens[0] * gens[2])               # hermitian off-diagonal cross term
        assert (H.star() - H).norm_max() < 1e-14
        sv = sft_positivity(coupling_decomposition(H))
        assert sv.verdict == NOT_APPLICABLE

    def test_non_neutral_one_sided_negative(self):
        alg = make_algebra(2, 4)
        gens = alg.generators()
        g = gens[2] + gens[2].star()               # odd one-sided term
        H = g + theta(g)
        sv = sft_positivity(coupling_decomposition(H))
        assert sv.verdict == NEGATIVE

    def test_ladder_sequence_examples(self):
        sv = sft_positivity_sequence([1.0, 2.0], 2)
        assert sv.verdict == NEGATIVE
        assert np.abs(sv.eigenvalues - np.array([3.0, -1.0])).max() < 1e-12
        sv = sft_positivity_sequence([1.0, 1.0], 2)
        assert sv.verdict == POSITIVE
        assert np.abs(sv.eigenvalues - np.array([2.0, 0.0])).max() < 1e-12

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_bochner_bridge(self, d):
        # circulant coupling verdict == entrywise nonnegativity of dft_zd
        rng = np.random.default_rng(71 + d)
        for _ in range(25):
            J = np.zeros(d, dtype=complex)
            J[0] = rng.uniform(0, 2)
            for k in range(1, (d // 2) + 1):
                if (d - k) % d == k:
                    J[k] = rng.normal()            # self-paired entry must be real
                else:
                    z = complex(rng.normal(), rng.normal()) * 0.8
                    J[k] = z
                    J[(-k) % d] = np.conj(z)
            sv = sft_positivity_sequence(J, d)
            spec = dft_zd(J)
            assert np.abs(spec.imag).max() < 1e-10
            expect = POSITIVE if spec.real.min() >= -1e-10 else NEGATIVE
            assert sv.verdict == expect


class TestRandomSuites:
    def test_violations_among_generic_draws(self):
        rng = np.random.default_rng(81)
        alg = make_algebra(2, 4)
        hits = 0
        for _ in range(25):
            H = draw_generic_hamiltonian(alg, rng)
            sv = sft_positivity(coupling_decomposition(H))
            if sv.verdict == POSITIVE:
                continue
            for beta in (0.5, 1.0, 2.0):
                om = StateFunctional(kind="gibbs", beta=beta, hamiltonian=H)
                rep = gram(om, alg, plus_basis(alg.cfg))
                if rep.min_eig < -1e-6:
                    v = rep.witness
                    assert abs(np.real(v.conj() @ rep.matrix @ v) - rep.min_eig) < 1e-10
                    hits += 1
                    break
        assert hits >= 1

    def test_cross_element_is_invariant(self):
        for d, m in [(2, 4), (3, 2), (4, 2)]:
            alg = make_algebra(d, m)
            for k in plus_basis(alg.cfg)[1:]:
                H = coupling_element(alg, k, 0.8)
                assert (H.star() - H).norm_max() < 1e-12
                assert (theta(H) - H).norm_max() < 1e-12
