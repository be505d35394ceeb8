"""Tests for chart liftings, gluing, the obstruction table and its solver."""

import itertools
from fractions import Fraction

import pytest

import toruslift.lifting as ob
from toruslift.cochain import (
    CochainTable,
    FiniteModule,
    build_finite_module,
    cochain_add,
    is_cocycle,
    pi1_act,
    u_keys,
    zero_cochain,
)
from toruslift.errors import (
    AssemblyError,
    InputError,
    InvalidSigma,
    OutOfModel,
    ReconstructionError,
)
from toruslift.groups import AtlasModel, FPGroup, Representation
from toruslift.nerve import ChartCorrections, GLCocycle, Nerve, \
    chart_corrections
from toruslift.torus import TorusAut, polar, standard_act

F = Fraction
I2 = TorusAut.identity(2)
M = TorusAut([[1, 0], [-1, 1]])


def seam_model(m=2):
    """Cycle of three charts; the (c1, c2) overlap carries all samples and
    the shear M, giving holonomy M around the loop."""
    nerve = Nerve(["c0", "c1", "c2"],
                  edges=[("c0", "c1"), ("c0", "c2"), ("c1", "c2")])
    cocycle = GLCocycle.from_one_sided(
        nerve, {("c0", "c1"): I2, ("c0", "c2"): I2, ("c1", "c2"): M})
    half = F(1, 2)
    grid = [(F(i, m), F(j, m)) for i in range(m) for j in range(m)]
    pairs = []
    for x, y in grid:
        a, b = M.apply((x, y))
        pairs.append((polar(((half, a), (half, b))),
                      polar(((half, x), (half, y)))))
    model = AtlasModel(nerve, cocycle, m,
                       {"c0": [], "c1": [za for za, _ in pairs],
                        "c2": [zb for _, zb in pairs]},
                       {("c1", "c2"): pairs})
    rho = Representation(FPGroup.free_abelian(1), [M])
    corrections = chart_corrections(nerve, cocycle, rho)
    return model, rho, corrections


def make_lifting(model, chart, fn, m_prime, k=1):
    m = model.torus_order
    table = {(u, z): fn(u, z)
             for u in u_keys(model.rank, m)
             for z in model.samples[chart]}
    return ob.ChartLifting(chart, m, m_prime, table, n=model.rank, k=k)


def zero_gluing(model, m_prime, k=1):
    tables = {}
    for a, b in model.nerve.edges:
        for to_chart, from_chart in ((a, b), (b, a)):
            table = {}
            for z in model.samples[from_chart]:
                if model.matched(to_chart, from_chart, z) is not None:
                    table[z] = (0,) * k
            tables[(to_chart, from_chart)] = table
    return ob.GluingData(m_prime, tables)


def assembled(m=2, m_prime=2, fn=None):
    model, rho, corrections = seam_model(m)
    fn = fn or (lambda u, z: (0,))
    liftings = {chart: make_lifting(model, chart, fn, m_prime)
                for chart in model.nerve.vertices}
    lifting = ob.assemble_global_lifting(model, corrections, rho, liftings,
                                         zero_gluing(model, m_prime))
    return lifting, model, rho, corrections


def module_for(model, rho, corrections, window, m_prime, k=1):
    return build_finite_module(model, rho, corrections, window=window,
                               fiber_rank=k, fiber_order=m_prime)


def coord_cochain(module, coord, scale=1):
    """z-independent cochain nu(u, x) = scale * u[coord] mod m'."""
    values = {}
    for u in u_keys(module.n, module.m):
        vec = ((scale * u[coord]) % module.m_prime,)
        values[(u,)] = [vec] * module.size
    return CochainTable(q=1, values=values)


def one_point_module(m=2, m_prime=2, k=1):
    torus = {u: [0] for u in u_keys(1, m)}
    deck = {(0, 1): [0], (0, -1): [0]}
    return FiniteModule(n=1, m=m, k=k, m_prime=m_prime, points=("pt",),
                        torus_table=torus, deck_tables=deck,
                        rho_images=[TorusAut([[1]])],
                        pi1_group=FPGroup.free(1))


class TestChartLifting:
    def test_zero_table_valid(self):
        model = seam_model()[0]
        lifting = make_lifting(model, "c2", lambda u, z: (0,), 2)
        assert ob.check_chart_lifting(lifting).ok

    def test_homomorphism_valid(self):
        model = seam_model()[0]
        lifting = make_lifting(model, "c2", lambda u, z: (u[0] % 2,), 2)
        assert ob.check_chart_lifting(lifting).ok

    def test_bump_invalid(self):
        nerve = Nerve(["c"])
        cocycle = GLCocycle(nerve, {}, rank=2)
        samples = [polar(((1, F(i, 4)), (2, F(j, 4))))
                   for i in range(4) for j in range(4)]
        model = AtlasModel(nerve, cocycle, 4, {"c": samples})
        bump = make_lifting(model, "c",
                            lambda u, z: (0,) if u == (0, 0) else (1,), 4)
        report = ob.check_chart_lifting(bump)
        assert not report.ok
        z = samples[0]
        # 1 + 1 != 1 when both parts and the sum are nonzero
        assert ("cocycle", (1, 0), (2, 0), z) in report.violations

    def test_nonzero_at_identity_listed(self):
        model = seam_model()[0]
        lifting = make_lifting(model, "c2", lambda u, z: (1,), 4)
        report = ob.check_chart_lifting(lifting)
        assert any(v[0] == "zero" for v in report.violations)

    def test_partial_table_listed(self):
        model = seam_model()[0]
        z0 = model.samples["c2"][0]
        table = {((0, 0), z0): (0,)}
        lifting = ob.ChartLifting("c2", 2, 2, table)
        report = ob.check_chart_lifting(lifting)
        assert any(v[0] == "missing" for v in report.violations)

    def test_empty_chart_needs_ranks(self):
        with pytest.raises(InputError):
            ob.ChartLifting("c0", 2, 2, {})
        lifting = ob.ChartLifting("c0", 2, 2, {}, n=2, k=1)
        assert ob.check_chart_lifting(lifting).ok


def tri_model(m_prime=4):
    """Filled triangle, trivial transitions, all charts share one orbit."""
    nerve = Nerve(["a", "b", "c"],
                  edges=[("a", "b"), ("a", "c"), ("b", "c")],
                  triangles=[("a", "b", "c")])
    I1 = TorusAut.identity(1)
    cocycle = GLCocycle.from_one_sided(
        nerve, {("a", "b"): I1, ("a", "c"): I1, ("b", "c"): I1})
    pts = [polar(((1, F(0)),)), polar(((1, F(1, 2)),))]
    matches = {(x, y): [(z, z) for z in pts]
               for x, y in [("a", "b"), ("a", "c"), ("b", "c")]}
    model = AtlasModel(nerve, cocycle, 2,
                       {"a": pts, "b": pts, "c": pts}, matches)
    return model, m_prime


class TestGluing:
    def test_zero_gluing_valid(self):
        model = seam_model()[0]
        assert ob.check_gluing(model, zero_gluing(model, 2)).ok

    def test_antisymmetry_enforced(self):
        model, mp = tri_model()
        tables = {(x, y): {z: (1,) for z in model.samples[y]}
                  for x, y in itertools.permutations("abc", 2)}
        report = ob.check_gluing(model, ob.GluingData(mp, tables))
        assert any(v[0] == "antisymmetry" for v in report.violations)

    def test_totality_on_matched_samples(self):
        model, mp = tri_model()
        gluing = zero_gluing(model, mp)
        del gluing.tables[("a", "b")][model.samples["b"][0]]
        report = ob.check_gluing(model, gluing)
        assert any(v[0] == "missing" for v in report.violations)

    def test_triangle_additivity(self):
        model, mp = tri_model()

        def const(x, y, v):
            return {z: (v % mp,) for z in model.samples[y]}

        good = ob.GluingData(mp, {
            ("a", "b"): const("a", "b", 1), ("b", "a"): const("b", "a", -1),
            ("b", "c"): const("b", "c", 1), ("c", "b"): const("c", "b", -1),
            ("a", "c"): const("a", "c", 2), ("c", "a"): const("c", "a", -2),
        })
        assert ob.check_gluing(model, good).ok
        bad = ob.GluingData(mp, {
            ("a", "b"): const("a", "b", 1), ("b", "a"): const("b", "a", -1),
            ("b", "c"): const("b", "c", 1), ("c", "b"): const("c", "b", -1),
            ("a", "c"): const("a", "c", 0), ("c", "a"): const("c", "a", 0),
        })
        report = ob.check_gluing(model, bad)
        assert any(v[0] == "triangle" for v in report.violations)


class TestEquivariantGluing:
    def test_trivial_data_valid(self):
        model = seam_model()[0]
        la = make_lifting(model, "c1", lambda u, z: (0,), 2)
        lb = make_lifting(model, "c2", lambda u, z: (0,), 2)
        assert ob.check_equivariant_gluing(
            model, "c1", "c2", la, lb, zero_gluing(model, 2)).ok

    def test_transported_homomorphism_valid(self):
        # c_beta = lambda(u), c_alpha = lambda(rho^-1(v)): the identity
        # telescopes to lambda(u) on both sides
        model = seam_model()[0]
        minv = M.inverse()
        lb = make_lifting(model, "c2", lambda u, z: (u[1] % 2,), 2)
        la = make_lifting(model, "c1",
                          lambda u, z: (minv.apply_mod(u, 2)[1],), 2)
        assert ob.check_equivariant_gluing(
            model, "c1", "c2", la, lb, zero_gluing(model, 2)).ok

    def test_untwisted_homomorphism_invalid(self):
        model = seam_model()[0]
        lam = lambda u, z: (u[1] % 2,)   # lambda o M != lambda
        la = make_lifting(model, "c1", lam, 2)
        lb = make_lifting(model, "c2", lam, 2)
        report = ob.check_equivariant_gluing(
            model, "c1", "c2", la, lb, zero_gluing(model, 2))
        assert any(v[0] == "equivariance" for v in report.violations)


class TestAssembly:
    def test_trivial_rotates_base_fixes_fiber(self):
        lifting, model, rho, _ = assembled()
        z = model.samples["c2"][0]
        node = ("c2", (), z)
        out, t = lifting.act_T((1, 0), node, (0,))
        assert t == (0,)
        assert out == ("c2", (), standard_act((F(1, 2), F(0)), z))

    def test_missing_chart_rejected(self):
        model, rho, corrections = seam_model()
        liftings = {chart: make_lifting(model, chart, lambda u, z: (0,), 2)
                    for chart in ["c1", "c2"]}
        with pytest.raises(AssemblyError):
            ob.assemble_global_lifting(model, corrections, rho, liftings,
                                       zero_gluing(model, 2))

    def test_invalid_chart_table_rejected(self):
        model, rho, corrections = seam_model()
        liftings = {chart: make_lifting(model, chart, lambda u, z: (0,), 2)
                    for chart in model.nerve.vertices}
        liftings["c2"] = make_lifting(model, "c2", lambda u, z: (1,), 2)
        with pytest.raises(AssemblyError):
            ob.assemble_global_lifting(model, corrections, rho, liftings,
                                       zero_gluing(model, 2))

    def test_non_equivariant_gluing_rejected(self):
        model, rho, corrections = seam_model()
        lam = lambda u, z: (u[1] % 2,)
        liftings = {"c0": make_lifting(model, "c0", lam, 2),
                    "c1": make_lifting(model, "c1", lam, 2),
                    "c2": make_lifting(model, "c2", lam, 2)}
        with pytest.raises(AssemblyError):
            ob.assemble_global_lifting(model, corrections, rho, liftings,
                                       zero_gluing(model, 2))

    def test_lifted_action_is_homomorphism(self):
        minv = M.inverse()

        def fn_c2(u, z):
            return (u[1] % 2,)

        def fn_c1(u, z):
            return (minv.apply_mod(u, 2)[1],)

        model, rho, corrections = seam_model()
        liftings = {"c0": make_lifting(model, "c0", fn_c1, 2),
                    "c1": make_lifting(model, "c1", fn_c1, 2),
                    "c2": make_lifting(model, "c2", fn_c2, 2)}
        lifting = ob.assemble_global_lifting(
            model, corrections, rho, liftings, zero_gluing(model, 2))
        group = rho.group
        decks = [(), ((0, 1),), ((0, -1),)]
        cases = itertools.product(
            ["c1", "c2"], decks, range(4),
            list(u_keys(2, 2)), list(u_keys(2, 2)))
        for chart, deck, zi, u1, u2 in cases:
            node = (chart, deck, model.samples[chart][zi])
            both = tuple((a + b) % 2 for a, b in zip(u1, u2))
            step, t = lifting.act_T(u2, node, (0,))
            step, t = lifting.act_T(u1, step, t)
            direct, t2 = lifting.act_T(both, node, (0,))
            assert (step, t) == (direct, t2)

    def test_transition_accumulates_gluing(self):
        model, rho, corrections = seam_model()
        tables = zero_gluing(model, 4).tables
        for z in model.samples["c2"]:
            tables[("c1", "c2")][z] = (1,)
        for z in model.samples["c1"]:
            tables[("c2", "c1")][z] = (3,)
        gluing = ob.GluingData(4, tables)
        liftings = {chart: make_lifting(model, chart, lambda u, z: (0,), 4)
                    for chart in model.nerve.vertices}
        lifting = ob.assemble_global_lifting(model, corrections, rho,
                                             liftings, gluing)
        z2 = model.samples["c2"][0]
        z1 = model.matched("c1", "c2", z2)
        t = lifting.transition(("c2", (), z2), ("c1", ((0, 1),), z1), (0,))
        assert t == (1,)
        back = lifting.transition(("c1", ((0, 1),), z1), ("c2", (), z2),
                                  (1,))
        assert back == (0,)
        with pytest.raises(OutOfModel):
            lifting.transition(("c2", (), z2), ("c1", (), z1), (0,))


class TestSigma:
    def test_equivariant_lifting_has_zero_sigma(self):
        for fn in (None, lambda u, z: (u[0] % 2,)):
            lifting, model, rho, corrections = assembled(fn=fn)
            module = module_for(model, rho, corrections, 1, 2)
            sigma = ob.compute_sigma(lifting, module)
            assert sigma.is_zero()
            assert all(v == (0,) for table in sigma.tables
                       for col in table.values.values() for v in col)

    def test_twist_shifts_sigma_by_minus_coboundary(self):
        lifting, model, rho, corrections = assembled(m=4, m_prime=4)
        module = module_for(model, rho, corrections, 1, 4)
        nu = coord_cochain(module, coord=1)
        twisted = ob.twist_lifting(lifting, module, nu)
        sigma = ob.compute_sigma(twisted, module)
        cob = ob.deck_coboundary(nu, module)
        for u in u_keys(2, 4):
            got = sigma.tables[0].values[(u,)]
            want = cob.tables[0].values[(u,)]
            for c in range(module.size):
                assert (got[c] is None) == (want[c] is None)
                if got[c] is not None:
                    assert got[c] == tuple((-v) % 4 for v in want[c])

    def test_twisted_sigma_values_frozen(self):
        # nu(u) = u_2, rho(t) = [[1,0],[-1,1]]: sigma(t, u, x) = -u_1
        lifting, model, rho, corrections = assembled(m=4, m_prime=4)
        module = module_for(model, rho, corrections, 1, 4)
        twisted = ob.twist_lifting(lifting, module,
                                   coord_cochain(module, coord=1))
        sigma = ob.compute_sigma(twisted, module)
        for u in u_keys(2, 4):
            for v in sigma.tables[0].values[(u,)]:
                if v is not None:
                    assert v == ((-u[0]) % 4,)

    def test_out_of_window_entries_match_deck_table(self):
        lifting, model, rho, corrections = assembled(m=2, m_prime=2)
        module = module_for(model, rho, corrections, 1, 2)
        twisted = ob.twist_lifting(lifting, module,
                                   coord_cochain(module, coord=1))
        sigma = ob.compute_sigma(twisted, module)
        for u in u_keys(2, 2):
            col = sigma.tables[0].values[(u,)]
            for c in range(module.size):
                assert (col[c] is None) \
                    == (module.deck_act_gen(0, 1, c) is None)

    def test_twists_compose(self):
        lifting, model, rho, corrections = assembled(m=2, m_prime=2)
        module = module_for(model, rho, corrections, 1, 2)
        nu1 = coord_cochain(module, coord=0)
        nu2 = coord_cochain(module, coord=1)
        once = ob.twist_lifting(ob.twist_lifting(lifting, module, nu1),
                                module, nu2)
        both = ob.twist_lifting(lifting, module,
                                cochain_add(nu1, nu2, module))
        sa = ob.compute_sigma(once, module)
        sb = ob.compute_sigma(both, module)
        assert sa == sb

    def test_sigma_word_cocycle_law(self):
        # sigma(a1 a2) = sigma(a2) + sigma(a1) . a2
        lifting, model, rho, corrections = assembled(m=2, m_prime=2)
        module = module_for(model, rho, corrections, 2, 2)
        twisted = ob.twist_lifting(lifting, module,
                                   coord_cochain(module, coord=1))
        single = ob.sigma_word(twisted, module, ((0, 1),))
        double = ob.sigma_word(twisted, module, ((0, 2),))
        acted = pi1_act(single, ((0, 1),), module)
        total = cochain_add(single, acted, module)
        for u in u_keys(2, 2):
            for c in range(module.size):
                lhs = double.values[(u,)][c]
                rhs = total.values[(u,)][c]
                if lhs is not None and rhs is not None:
                    assert lhs == rhs


class TestDeckCoboundary:
    def test_formula(self):
        lifting, model, rho, corrections = assembled()
        module = module_for(model, rho, corrections, 1, 2)
        tau = coord_cochain(module, coord=0)
        cob = ob.deck_coboundary(tau, module)
        for u in u_keys(2, 2):
            ru = M.apply_mod(u, 2)
            for c in range(module.size):
                moved = module.deck_act_gen(0, 1, c)
                want = None if moved is None else \
                    ((tau.values[(u,)][c][0]
                      - tau.values[(ru,)][moved][0]) % 2,)
                assert cob.tables[0].values[(u,)][c] == want

    def test_coboundary_of_cocycle_is_cocycle(self):
        lifting, model, rho, corrections = assembled()
        module = module_for(model, rho, corrections, 1, 2)
        tau = coord_cochain(module, coord=1)
        assert is_cocycle(tau, module).ok
        cob = ob.deck_coboundary(tau, module)
        assert is_cocycle(cob.tables[0], module).ok


class TestExpand:
    def test_expansion_walks_suffixes(self):
        module = one_point_module(m=4)
        # one point: all classes collapse, terms count u
        assert ob.expand_generators(module, (3,), 0) \
            == [(0, 0), (0, 0), (0, 0)]

    def test_expand_witness_is_cocycle(self):
        lifting, model, rho, corrections = assembled(m=2, m_prime=4)
        module = module_for(model, rho, corrections, 1, 4)
        gen_values = {(j, c): ((3 * j + c) % 4,)
                      for j in range(2) for c in range(module.size)}
        # arbitrary generator data fails torsion/commutation in general;
        # zero data expands to the zero cocycle
        zeros = {key: (0,) for key in gen_values}
        tab = ob.expand_witness(module, zeros)
        assert tab == zero_cochain(module, 1)


class TestVanishing:
    def test_zero_sigma_vanishes_with_zero_witness(self):
        lifting, model, rho, corrections = assembled()
        module = module_for(model, rho, corrections, 1, 2)
        sigma = ob.compute_sigma(lifting, module)
        report = ob.test_vanishing(sigma, module)
        assert report.verdict == "vanishing-at-scale"
        assert report.witness == zero_cochain(module, 1)
        assert report.certificate is None

    def test_twisted_sigma_round_trips(self):
        lifting, model, rho, corrections = assembled(m=4, m_prime=4)
        module = module_for(model, rho, corrections, 1, 4)
        nu = coord_cochain(module, coord=1)
        twisted = ob.twist_lifting(lifting, module, nu)
        sigma = ob.compute_sigma(twisted, module)
        report = ob.test_vanishing(sigma, module)
        assert report.verdict == "vanishing-at-scale"
        cob = ob.deck_coboundary(report.witness, module)
        for i, table in enumerate(cob.tables):
            for u in u_keys(2, 4):
                for c in range(module.size):
                    got = table.values[(u,)][c]
                    want = sigma.tables[i].values[(u,)][c]
                    if want is not None:
                        assert got == want
        repaired = ob.reconstruct_lifting(twisted, module, report.witness)
        assert ob.compute_sigma(repaired, module).is_zero()

    def test_synthetic_nonvanishing_certified(self):
        module = one_point_module()
        sigma = ob.SigmaTable(tables=(CochainTable(
            q=1, values={((0,),): [(0,)], ((1,),): [(1,)]}),))
        report = ob.test_vanishing(sigma, module)
        assert report.verdict == "certified-nonvanishing"
        assert report.witness is None
        cert = report.certificate
        assert cert.fiber_coordinate == 0
        assert any(v % 2 for v in cert.vector)
        assert ob._verify_combination(report.rows, report.rhs[0], 2,
                                      cert.vector)
        # brute force: no tau table has this coboundary
        for g in range(2):
            tau = CochainTable(q=1, values={((0,),): [(0,)],
                                            ((1,),): [(g,)]})
            cob = ob.deck_coboundary(tau, module)
            assert cob.tables[0].values[((1,),)][0] == (0,)

    def test_invalid_sigma_rejected(self):
        module = one_point_module(m=4, m_prime=4)
        values = {((u,),): [(1 if u == 3 else 0,)] for u in range(4)}
        sigma = ob.SigmaTable(tables=(CochainTable(q=1, values=values),))
        with pytest.raises(InvalidSigma):
            ob.test_vanishing(sigma, module)

    def test_dishonest_module_rejected(self):
        # swap-without-inverse deck tables break the commutation relations
        dishonest = FiniteModule(
            n=1, m=2, k=1, m_prime=2, points=(0, 1),
            torus_table={(0,): [0, 1], (1,): [1, 0]},
            deck_tables={(0, 1): [0, 0], (0, -1): [0, 0]},
            rho_images=[TorusAut([[1]])])
        sigma = ob.SigmaTable(tables=(zero_cochain(dishonest, 1),))
        with pytest.raises(InputError):
            ob.test_vanishing(sigma, dishonest)

    def test_dropped_ratio_and_threshold(self):
        lifting, model, rho, corrections = assembled(m=4, m_prime=4)
        module = module_for(model, rho, corrections, 1, 4)
        twisted = ob.twist_lifting(lifting, module,
                                   coord_cochain(module, coord=1))
        sigma = ob.compute_sigma(twisted, module)
        report = ob.test_vanishing(sigma, module)
        assert report.dropped_ratio == F(1, 4)
        assert report.verdict == "vanishing-at-scale"
        strict = ob.test_vanishing(sigma, module, threshold=F(1, 5))
        assert strict.verdict == "indeterminate"
        assert strict.witness is not None

    def test_reports_are_deterministic(self):
        lifting, model, rho, corrections = assembled(m=2, m_prime=2)
        module = module_for(model, rho, corrections, 1, 2)
        twisted = ob.twist_lifting(lifting, module,
                                   coord_cochain(module, coord=1))
        sigma = ob.compute_sigma(twisted, module)
        first = ob.test_vanishing(sigma, module)
        second = ob.test_vanishing(sigma, module)
        assert first == second

    def test_multicoordinate_certificate_names_fiber_axis(self):
        module = one_point_module(k=2)
        zero = {((0,),): [(0, 0)], ((1,),): [(0, 1)]}
        sigma = ob.SigmaTable(tables=(CochainTable(q=1, values=zero),))
        report = ob.test_vanishing(sigma, module)
        assert report.verdict == "certified-nonvanishing"
        assert report.certificate.fiber_coordinate == 1


class TestReconstruct:
    def test_zero_witness_keeps_action(self):
        lifting, model, rho, corrections = assembled()
        module = module_for(model, rho, corrections, 1, 2)
        repaired = ob.reconstruct_lifting(lifting, module,
                                          zero_cochain(module, 1))
        for c in range(module.size):
            node = module.points[c]
            for u in u_keys(2, 2):
                assert lifting.act_T(u, node, (0,)) \
                    == repaired.act_T(u, node, (0,))

    def test_wrong_witness_rejected(self):
        lifting, model, rho, corrections = assembled(m=4, m_prime=4)
        module = module_for(model, rho, corrections, 1, 4)
        twisted = ob.twist_lifting(lifting, module,
                                   coord_cochain(module, coord=1))
        wrong = coord_cochain(module, coord=0)   # a cocycle, not a witness
        with pytest.raises(ReconstructionError):
            ob.reconstruct_lifting(twisted, module, wrong)

    def test_noncocycle_witness_rejected(self):
        lifting, model, rho, corrections = assembled(m=4, m_prime=4)
        module = module_for(model, rho, corrections, 1, 4)
        bad = zero_cochain(module, 1)
        bad.values[((1, 0),)] = [(1,)] * module.size
        with pytest.raises(ReconstructionError):
            ob.reconstruct_lifting(lifting, module, bad)

    def test_repaired_lifting_is_homomorphism(self):
        lifting, model, rho, corrections = assembled(m=4, m_prime=4)
        module = module_for(model, rho, corrections, 1, 4)
        twisted = ob.twist_lifting(lifting, module,
                                   coord_cochain(module, coord=1))
        sigma = ob.compute_sigma(twisted, module)
        witness = ob.test_vanishing(sigma, module).witness
        repaired = ob.reconstruct_lifting(twisted, module, witness)
        for c in range(0, module.size, 5):
            node = module.points[c]
            for u1 in u_keys(2, 4):
                for u2 in u_keys(2, 4):
                    both = tuple((a + b) % 4 for a, b in zip(u1, u2))
                    step, t = repaired.act_T(u2, node, (0,))
                    step, t = repaired.act_T(u1, step, t)
                    assert (step, t) == repaired.act_T(both, node, (0,))
