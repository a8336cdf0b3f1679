import pytest

from logflat.abgrp import FgAbGroup, GroupHom
from logflat.monoid import FineMonoid, MonoidIdeal, nat_monoid
from logflat import polyalg as pa
from logflat.polyalg import ModulePresentation, PolyRing, RingPresentation
from logflat import graded as gr
from logflat.graded import (
    ChartShape,
    GradedModule,
    GradedRing,
    KPShape,
    MonoidAlgebra,
    NotHomogeneous,
    degree_zero_part,
    extend_scalars_group_algebra,
    flat_over_kt,
    graded_flat,
    graded_flat_on_ideal_family,
    graded_modules_isomorphic,
    group_algebra,
    is_homogeneous_ideal,
    monomial_filtration,
    nodal_criteria_panel,
    nodal_ring,
    quotient_module,
    regrade,
)


def z2_graded_plane():
    ring = PolyRing(pa.QQ, ["x", "y"])
    pres = RingPresentation(ring, [])
    return GradedRing(FgAbGroup.free(2), pres, [(1, 0), (0, 1)])


class TestHomogeneous:
    def test_monomial_ideal(self):
        g = z2_graded_plane()
        assert is_homogeneous_ideal(g, [g.pres.ring.parse("x*y")])

    def test_sum_not_homogeneous(self):
        g = z2_graded_plane()
        assert not is_homogeneous_ideal(g, [g.pres.ring.parse("x+y")])

    def test_equal_degrees_homogeneous(self):
        ring = PolyRing(pa.QQ, ["x", "y"])
        pres = RingPresentation(ring, [])
        g = GradedRing(FgAbGroup.free(1), pres, [(1,), (1,)])
        assert is_homogeneous_ideal(g, [ring.parse("x+y")])

    def test_components(self):
        g = z2_graded_plane()
        comps = g.homogeneous_components(g.pres.ring.parse("x + y + x^2"))
        assert len(comps) == 3


class TestMonoidIdealBijection:
    def setup_method(self):
        self.alg = MonoidAlgebra(nat_monoid(2))

    def test_principal_roundtrip(self):
        ideal = MonoidIdeal(self.alg.monoid, [(1, 0)])
        j = self.alg.to_ring_ideal(ideal)
        assert self.alg.to_monoid_ideal(j) == ideal

    def test_maximal_roundtrip(self):
        ideal = MonoidIdeal(self.alg.monoid, [(1, 0), (0, 1)])
        j = self.alg.to_ring_ideal(ideal)
        back = self.alg.to_monoid_ideal(j)
        assert back == ideal

    def test_monomial_roundtrip_other_way(self):
        r = self.alg.pres.ring
        j = [r.parse("x^2*y")]
        ideal = self.alg.to_monoid_ideal(j)
        j2 = self.alg.to_ring_ideal(ideal)
        assert self.alg.pres.eq(j[0], j2.generators[0])

    def test_nonhomogeneous_guard(self):
        r = self.alg.pres.ring
        with pytest.raises(NotHomogeneous):
            self.alg.to_monoid_ideal([r.parse("x+y")])

    def test_semiprime_face_complement(self):
        r = self.alg.pres.ring
        assert self.alg.is_semiprime([r.parse("x")])
        assert not self.alg.is_semiprime([r.parse("x*y")])

    def test_zero_ideal_in_group_algebra_of_z2(self):
        z2 = FineMonoid(FgAbGroup(0, (2,)), [(1,)])
        alg = MonoidAlgebra(z2)
        # (0) is semiprime but not prime: C[Z/2] has zero divisors
        assert alg.is_semiprime([])
        assert not alg.is_prime([])

    def test_torsion_free_semiprime_is_prime(self):
        assert self.alg.is_prime([self.alg.pres.ring.parse("x")])


class TestKxCriterion:
    def setup_method(self):
        self.alg = MonoidAlgebra(nat_monoid(1), names=["x"])
        self.shape = KPShape(self.alg)
        self.r = self.alg.pres.ring

    def flat(self, rels):
        m = ModulePresentation(self.alg.pres, 1, rels)
        return graded_flat(m, self.shape)[0]

    def test_x_minus_one_graded_flat(self):
        assert self.flat([self.r.parse("x - 1")])

    def test_x_not_graded_flat(self):
        assert not self.flat([self.r.parse("x")])

    def test_free_graded_flat(self):
        assert self.flat([])


class TestNodalPanel:
    def setup_method(self):
        self.pres, self.grading, self.shape = nodal_ring()
        self.r = self.pres.ring

    def panel(self, rels, rank=1):
        m = ModulePresentation(self.pres, rank, rels)
        return nodal_criteria_panel(m, self.shape)

    def test_structure_module_all_true(self):
        panel = self.panel([])
        assert all(panel.values())

    def test_skyscraper_all_false(self):
        panel = self.panel([self.r.parse("x"), self.r.parse("y")])
        assert not any(panel.values())

    def test_antidiagonal_all_false(self):
        panel = self.panel([self.r.parse("x+y")])
        assert not any(panel.values())

    def test_unit_shift_all_true(self):
        panel = self.panel([self.r.parse("x-1")])
        assert all(panel.values())

    def test_x_squared_panel_agrees(self):
        panel = self.panel([self.r.parse("x^2")])
        vals = set(panel.values())
        assert len(vals) == 1 and vals == {False}

    def test_direct_sum_b_plus_k(self):
        # B (+) k: the skyscraper summand breaks flatness
        rels = [
            {((1, 0), 1): pa.QQ.one()},
            {((0, 1), 1): pa.QQ.one()},
        ]
        panel = nodal_criteria_panel(ModulePresentation(self.pres, 2, rels),
                                     self.shape)
        vals = set(panel.values())
        assert vals == {False}

    def test_agreement_with_ideal_family(self):
        r = self.r
        family = [[r.parse("x")], [r.parse("y")], [r.parse("x"), r.parse("y")]]
        for rels in ([], [r.parse("x-1")], [r.parse("x+y")], [r.parse("x")]):
            m = ModulePresentation(self.pres, 1, rels)
            panel = nodal_criteria_panel(m, self.shape)
            fam, _ = graded_flat_on_ideal_family(m, family)
            assert fam == panel["graded_flat"]


class TestGroupAlgebra:
    def test_laurent_ring_roundtrip(self):
        # homogeneous relation u*e0 - e1 with shifts (0, 1): M = k[G]
        g = FgAbGroup.free(1)
        gring, shape = group_algebra(pa.QQ, g)
        gm = GradedModule(gring, [(0,), (1,)], [
            {((1, 0), 0): pa.QQ.one(), ((0, 0), 1): pa.QQ.of_int(-1)}
        ])
        m0 = degree_zero_part(gm)
        assert m0.dim() == 1
        ok, cert = graded_flat(gm, shape)
        assert ok and cert["roundtrip_certified"]

    def test_free_module_roundtrip(self):
        g = FgAbGroup.free(1)
        gring, shape = group_algebra(pa.QQ, g)
        gm = GradedModule(gring, [(0,), (2,)], [])
        m0 = degree_zero_part(gm)
        back = extend_scalars_group_algebra(m0, gring, gm.shifts)
        assert graded_modules_isomorphic(gm, back)

    def test_shifted_relation_roundtrip(self):
        g = FgAbGroup.free(1)
        gring, shape = group_algebra(pa.QQ, g)
        # relation u^2 e0 - e1 = 0 with shifts making it homogeneous
        gm = GradedModule(gring, [(0,), (2,)], [
            {((2, 0), 0): pa.QQ.one(), ((0, 0), 1): pa.QQ.of_int(-1)}
        ])
        ok, cert = graded_flat(gm, shape)
        assert ok and cert["roundtrip_certified"]

    def test_inhomogeneous_rejected(self):
        g = FgAbGroup.free(1)
        gring, _ = group_algebra(pa.QQ, g)
        with pytest.raises(NotHomogeneous):
            GradedModule(gring, [(0,)], [
                {((1, 0), 0): pa.QQ.one(), ((0, 0), 0): pa.QQ.of_int(-1),
                 ((2, 0), 0): pa.QQ.one()}
            ])

    def test_regrade_invariance(self):
        g = FgAbGroup.free(1)
        gring, shape = group_algebra(pa.QQ, g)
        gamma = GroupHom(g, FgAbGroup.free(2), ((1, 1),))
        regraded = regrade(gring, gamma)
        gm = GradedModule(regraded, [(0, 0)], [])
        m0 = degree_zero_part(gm)
        assert m0.dim() == 1


class TestFlatOverKt:
    def make_family(self, rels):
        ring = PolyRing(pa.QQ, ["t", "x", "y"])
        pres = RingPresentation(ring, [ring.parse("x*y - t")])
        return ModulePresentation(pres, 1, [pres.parse(s) for s in rels]), pres

    def test_structure_ring_flat(self):
        m, _ = self.make_family([])
        ok, _ = flat_over_kt(m, 0)
        assert ok

    def test_fiber_not_flat(self):
        m, _ = self.make_family(["x", "y"])  # the origin of the t=0 fiber
        ok, _ = flat_over_kt(m, 0)
        assert not ok

    def test_section_flat(self):
        m, _ = self.make_family(["x - 1"])  # graph of t = y
        ok, _ = flat_over_kt(m, 0)
        assert ok

    def test_torsion_away_from_zero(self):
        # t acts as 1 on B/(x-t, y-1): k[t]/(t-1) is torsion
        m, _ = self.make_family(["x - 1", "y - 1"])
        ok, fstar = flat_over_kt(m, 0)
        assert not ok

    def test_irrational_support_torsion(self):
        # x = t, x^2 = 2: torsion at the irreducible t^2 - 2
        m, _ = self.make_family(["y - 1", "x^2 - 2"])
        ok, _ = flat_over_kt(m, 0)
        assert not ok


class TestChartTowerFamily:
    def setup_method(self):
        ring = PolyRing(pa.QQ, ["t", "x", "y"])
        self.pres = RingPresentation(ring, [ring.parse("x*y - t")])
        grading = GradedRing(FgAbGroup.free(1), self.pres,
                             [(0,), (1,), (-1,)])
        self.shape = ChartShape(self.pres, grading, avars=(0,), evars=(1, 2),
                                base=("kt", 0))

    def test_structure_flat(self):
        m = ModulePresentation(self.pres, 1, [])
        ok, cert = graded_flat(m, self.shape)
        assert ok

    def test_central_fiber_skyscraper_not_flat(self):
        r = self.pres.ring
        m = ModulePresentation(self.pres, 1, [r.parse("x"), r.parse("y")])
        ok, _ = graded_flat(m, self.shape)
        assert not ok

    def test_section_through_smooth_locus_flat(self):
        r = self.pres.ring
        m = ModulePresentation(self.pres, 1, [r.parse("x - 1")])
        ok, _ = graded_flat(m, self.shape)
        assert ok


class TestFiltration:
    def test_kx_mod_x2(self):
        alg = MonoidAlgebra(nat_monoid(1), names=["x"])
        r = alg.pres.ring
        m = ModulePresentation(alg.pres, 1, [r.parse("x^2")])
        layers = monomial_filtration(alg, m)
        assert len(layers) == 2
        for ideal, _shift in layers:
            assert ideal.is_prime()
        # dimension check: 2 = 1 + 1
        assert sum(1 for _ in layers) == m.dim()

    def test_nodal_structure_ring(self):
        p = nat_monoid(2)
        alg = MonoidAlgebra(p)
        r = alg.pres.ring
        m = ModulePresentation(alg.pres, 1, [r.parse("x*y")])
        layers = monomial_filtration(alg, m)
        assert len(layers) >= 2
        for ideal, _ in layers:
            assert ideal.is_prime()


class TestKPConsistency:
    def test_prime_test_agrees_with_ideal_family(self):
        # over k[N] and k[N^2]: enumerated monomial ideals (several
        # generators, so the maximal ideal is included) vs the per-prime test
        from itertools import combinations
        for n, names in ((1, ["x"]), (2, None)):
            alg = MonoidAlgebra(nat_monoid(n), names=names)
            shape = KPShape(alg)
            r = alg.pres.ring
            monos = [m for m in gr._window_monomials(r.nvars, 2) if any(m)]
            family = [[r.monomial(m) for m in c]
                      for k in (1, 2) for c in combinations(monos, k)]
            mods = [[], [r.parse("x - 1")], [r.parse("x")]]
            if n == 2:
                mods += [[r.parse("x + y - 1")], [r.parse("x + y")]]
            for rels in mods:
                m = ModulePresentation(alg.pres, 1, rels)
                per_prime = graded_flat(m, shape)[0]
                fam, _ = graded_flat_on_ideal_family(m, family)
                assert per_prime == fam
