"""Basis enumeration, indexing, Jordan-Wigner signs, and cached matrices."""
from math import comb

import numpy as np
import pytest

from schwinger_ed import (
    BasisState,
    IntegratedCoulomb,
    LatticeSpec,
    QuantumLink,
    TruncatedInteger,
    enumerate_basis,
)
from schwinger_ed.basis import combined_mask, enumerate_total_basis, jw_sign
from schwinger_ed.errors import ConfigurationError


class TestEnumeration:
    def test_dimension_counts(self):
        spec = LatticeSpec(4)
        b = enumerate_basis(spec, IntegratedCoulomb(), 2)
        assert b.dim == comb(4, 2)
        bt = enumerate_basis(spec, TruncatedInteger(1), 2)
        assert bt.dim == comb(4, 2) * 3**4
        bq = enumerate_basis(spec, QuantumLink(0.5), 2)
        assert bq.dim == comb(4, 2) * 2**4

    def test_two_flavor_dimension(self):
        spec = LatticeSpec(4, flavors=2)
        b = enumerate_basis(spec, IntegratedCoulomb(), (2, 1))
        assert b.dim == comb(4, 2) * comb(4, 1)

    def test_index_bijection(self):
        spec = LatticeSpec(4)
        b = enumerate_basis(spec, QuantumLink(1.0), 2)
        for i in range(b.dim):
            assert b.index_of(b.state(i)) == i
        assert len({b.state(i) for i in range(b.dim)}) == b.dim

    def test_membership(self):
        spec = LatticeSpec(4)
        b = enumerate_basis(spec, IntegratedCoulomb(), 2)
        assert b.state(0) in b
        assert BasisState((0b0111,), ()) not in b  # three fermions

    def test_fermion_number_validation(self):
        spec = LatticeSpec(4)
        with pytest.raises(ConfigurationError):
            enumerate_basis(spec, IntegratedCoulomb(), 5)

    def test_total_number_sector(self):
        spec = LatticeSpec(2, flavors=2)
        b = enumerate_total_basis(spec, IntegratedCoulomb(), 2)
        # (2,0), (1,1), (0,2) per-flavor splits: 1 + 4 + 1 states
        assert b.dim == 6


class TestJordanWigner:
    def test_sign_counts_fermions_between(self):
        # 0b1101: modes 0, 2, 3 occupied; hop 0 -> 1 crosses nothing
        assert jw_sign(0b1101, 0, 1) == 1
        # hop 0 -> 3 crosses mode 2 (one fermion): sign -1
        assert jw_sign(0b0101, 0, 3) == -1

    def test_reverse_hop_has_same_sign(self):
        # hermiticity: <j|c^dag_b c_a|i> = <i|c^dag_a c_b|j> for real signs
        rng = np.random.default_rng(7)
        checked = 0
        while checked < 50:
            mask = int(rng.integers(0, 2**8))
            a, b = (int(v) for v in rng.choice(8, size=2, replace=False))
            if not (mask >> a) & 1 or (mask >> b) & 1:
                continue
            hopped = mask ^ (1 << a) ^ (1 << b)
            assert jw_sign(mask, a, b) == jw_sign(hopped, b, a)
            checked += 1

    def test_combined_mask_interleaves_flavors(self):
        assert combined_mask((0b01, 0b10), 2) == 0b1001


class TestCachedMatrices:
    def test_occupation_matrix(self):
        spec = LatticeSpec(4)
        b = enumerate_basis(spec, IntegratedCoulomb(), 2)
        occ = b.occupation_matrix()
        assert occ.shape == (b.dim, 4)
        assert np.all(occ.sum(axis=1) == 2)

    def test_link_e_matrix(self):
        spec = LatticeSpec(4)
        b = enumerate_basis(spec, QuantumLink(0.5), 2)
        e = b.link_e_matrix()
        assert e.shape == (b.dim, 4)
        assert set(np.unique(e)) == {-0.5, 0.5}

    def test_charge_matrix_staggered(self):
        spec = LatticeSpec(4)
        b = enumerate_basis(spec, IntegratedCoulomb(), 2)
        rho = b.charge_matrix()
        # staggered convention: rho = -(n - offset); total charge vanishes
        # at half filling
        assert np.allclose(rho.sum(axis=1), 0.0)
        occ = b.occupation_matrix()
        assert np.allclose(rho, -(occ - spec.charge_offsets()[None, :]))
