"""Chart liftings, equivariant gluing, the obstruction table, and its
vanishing test.

A chart lifting extends the standard torus action on a chart to the
trivialized bundle over it: phi(u)(z, t) = (u.z, t + c(u, z)), with the
fiber shift table c satisfying a cocycle identity that makes phi a group
action.  Gluing data carries the fiber components of the bundle
transitions between charts.  Once every chart lifting is valid and every
gluing is equivariant, the data assembles into evaluators for the lifted
torus action and the deck action on the pulled-back bundle.

The failure of the assembled lifting to commute with the deck action is
measured by a table sigma(a, u, x); it vanishes up to a coboundary exactly
when an equivariant lifting exists at the modeled scale.  The vanishing
test turns that coboundary equation into an exact linear system over
Z_{m'} and hands it to the Smith-form solver.  Windowed truncation keeps
one direction sound: an infeasibility certificate survives any
enlargement of the model, while a solution is only an at-scale witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple

from .cochain import (
    CochainTable,
    FiniteModule,
    cochain_add,
    is_cocycle,
    u_keys,
)
from .errors import (
    AssemblyError,
    InputError,
    InvalidSigma,
    OutOfModel,
    ReconstructionError,
)
from .groups import Representation
from .nerve import ChartCorrections
from .smith import SmithNF
from .torus import PolarPoint, standard_act

Vec = Tuple[int, ...]


def _vadd(a: Vec, b: Vec, mod: int) -> Vec:
    return tuple((x + y) % mod for x, y in zip(a, b))


def _vsub(a: Vec, b: Vec, mod: int) -> Vec:
    return tuple((x - y) % mod for x, y in zip(a, b))


@dataclass(frozen=True)
class LiftingReport:
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


class ChartLifting:
    """Fiber-shift table of one chart's lifted torus action.

    ``table`` maps (u, z) to a vector in Z_{m'}^k, u an integer tuple mod
    m and z a polar sample of the chart.  Validity (the action identity)
    is a separate check so invalid tables can be constructed and reported.
    """

    def __init__(self, chart: str, m: int, m_prime: int,
                 table: Mapping[Tuple[tuple, PolarPoint], Sequence[int]],
                 n: int = None, k: int = None):
        if m < 1 or m_prime < 1:
            raise InputError("orders must be >= 1")
        self.chart = chart
        self.m = m
        self.m_prime = m_prime
        self.table: Dict[Tuple[tuple, PolarPoint], Vec] = {}
        self.n = n
        self.k = k
        for (u, z), vec in table.items():
            u = tuple(int(v) for v in u)
            if self.n is None:
                self.n = len(u)
            if len(u) != self.n or any(not 0 <= v < m for v in u):
                raise InputError(
                    "chart %s: key %r is not an element of (Z/%d)^%d"
                    % (chart, u, m, self.n))
            vec = tuple(int(v) % m_prime for v in vec)
            if self.k is None:
                self.k = len(vec)
            if len(vec) != self.k:
                raise InputError("chart %s: mixed fiber ranks" % chart)
            self.table[(u, z)] = vec
        if self.n is None or self.k is None:
            # a chart with no samples carries an empty table; its ranks
            # cannot be inferred and must be given
            raise InputError("chart %s: lifting table is empty and n/k "
                             "were not supplied" % chart)
        self.samples = tuple(sorted({z for _, z in self.table}))

    def value(self, u: tuple, z: PolarPoint) -> Vec:
        try:
            return self.table[(u, z)]
        except KeyError:
            raise OutOfModel("chart %s has no lifting entry at (%r, %r)"
                             % (self.chart, u, z))


def check_chart_lifting(lifting: ChartLifting) -> LiftingReport:
    """Validate the action identity c(u1+u2, z) = c(u1, u2.z) + c(u2, z)
    together with c(0, z) = 0, listing every violation."""
    m, mp, n = lifting.m, lifting.m_prime, lifting.n
    zero_u = (0,) * n
    zero_v = (0,) * lifting.k
    violations = []
    samples = lifting.samples
    for z in samples:
        if lifting.table.get((zero_u, z)) != zero_v:
            violations.append(("zero", z))
    # index the samples once so the triple loop below runs on lists
    pos = {z: i for i, z in enumerate(samples)}
    vals = {}
    perm = {}
    for u in u_keys(n, m):
        frac = tuple(Fraction(v, m) for v in u)
        vals[u] = [lifting.table.get((u, z)) for z in samples]
        perm[u] = [pos.get(standard_act(frac, z)) for z in samples]
    keys = list(u_keys(n, m))
    for u1 in keys:
        row1 = vals[u1]
        for u2 in keys:
            total = tuple((a + b) % m for a, b in zip(u1, u2))
            row_total, row2, p2 = vals[total], vals[u2], perm[u2]
            for i, z in enumerate(samples):
                j = p2[i]
                lhs, rhs = row_total[i], row2[i]
                at_moved = None if j is None else row1[j]
                if lhs is None or at_moved is None or rhs is None:
                    violations.append(("missing", u1, u2, z))
                elif lhs != tuple((a + b) % mp
                                  for a, b in zip(at_moved, rhs)):
                    violations.append(("cocycle", u1, u2, z))
    return LiftingReport(violations=tuple(violations))


class GluingData:
    """Fiber components of the bundle transitions, per oriented overlap.

    The table for (alpha, beta) is keyed by beta-side overlap samples:
    moving a presentation from beta to alpha shifts the fiber coordinate
    by g(alpha, beta)(z_beta).
    """

    def __init__(self, m_prime: int,
                 tables: Mapping[Tuple[str, str],
                                 Mapping[PolarPoint, Sequence[int]]]):
        if m_prime < 1:
            raise InputError("fiber order must be >= 1")
        self.m_prime = m_prime
        self.k = None
        self.tables: Dict[Tuple[str, str], Dict[PolarPoint, Vec]] = {}
        for edge, table in tables.items():
            out = {}
            for z, vec in table.items():
                vec = tuple(int(v) % m_prime for v in vec)
                if self.k is None:
                    self.k = len(vec)
                if len(vec) != self.k:
                    raise InputError("gluing on %r: mixed fiber ranks"
                                     % (edge,))
                out[z] = vec
            self.tables[(edge[0], edge[1])] = out

    def get_table(self, a: str, b: str) -> Dict[PolarPoint, Vec]:
        return self.tables.get((a, b), {})

    def value(self, a: str, b: str, z: PolarPoint) -> Vec:
        try:
            return self.tables[(a, b)][z]
        except KeyError:
            raise OutOfModel("no gluing value on (%s, %s) at %r" % (a, b, z))


def check_gluing(model, gluing: GluingData) -> LiftingReport:
    """Antisymmetry, totality on matched samples, and triangle additivity."""
    mp = gluing.m_prime
    violations = []
    for a, b in model.nerve.edges:
        for to_chart, from_chart in ((a, b), (b, a)):
            table = gluing.get_table(to_chart, from_chart)
            opposite = gluing.get_table(from_chart, to_chart)
            for z in model.samples[from_chart]:
                mate = model.matched(to_chart, from_chart, z)
                if mate is None:
                    continue
                if z not in table:
                    violations.append(("missing", to_chart, from_chart, z))
                    continue
                back = opposite.get(mate)
                if back is None or \
                        back != tuple((-v) % mp for v in table[z]):
                    violations.append(
                        ("antisymmetry", to_chart, from_chart, z))
    for a, b, c in model.nerve.triangles:
        for z_c in model.samples[c]:
            z_b = model.matched(b, c, z_c)
            z_a = model.matched(a, c, z_c)
            if z_b is None or z_a is None:
                continue
            if model.matched(a, b, z_b) != z_a:
                violations.append(("incoherent-overlap", a, b, c, z_c))
                continue
            try:
                direct = gluing.value(a, c, z_c)
                step1 = gluing.value(b, c, z_c)
                step2 = gluing.value(a, b, z_b)
            except OutOfModel:
                continue    # totality reported above
            if direct != _vadd(step1, step2, mp):
                violations.append(("triangle", a, b, c, z_c))
    return LiftingReport(violations=tuple(violations))


def check_equivariant_gluing(model, a: str, b: str, lift_a: ChartLifting,
                             lift_b: ChartLifting,
                             gluing: GluingData) -> LiftingReport:
    """The transition must intertwine the two chart liftings:

    c_b(u, z) + g(a,b)(u.z) = g(a,b)(z) + c_a(rho_ab(u), matched z)

    for every matched sample z of chart b and every u.  This is exactly
    chart-independence of the assembled lifted action on the overlap.
    """
    m, mp = lift_b.m, gluing.m_prime
    aut = model.cocycle.get(a, b)
    violations = []
    for z in model.samples[b]:
        mate = model.matched(a, b, z)
        if mate is None:
            continue
        for u in u_keys(lift_b.n, m):
            frac = tuple(Fraction(v, m) for v in u)
            moved = standard_act(frac, z)
            try:
                lhs = _vadd(lift_b.value(u, z), gluing.value(a, b, moved),
                            mp)
                rhs = _vadd(gluing.value(a, b, z),
                            lift_a.value(aut.apply_mod(u, m), mate), mp)
            except OutOfModel:
                violations.append(("missing", a, b, u, z))
                continue
            if lhs != rhs:
                violations.append(("equivariance", a, b, u, z))
    return LiftingReport(violations=tuple(violations))


class GlobalLifting:
    """Evaluators for the lifted torus action and the deck action.

    Points are presentations (chart, deck word, sample) paired with a
    fiber coordinate in Z_{m'}^k.  The lifted torus action rotates the
    sample by rho_alpha(rho(deck)(u)) and shifts the fiber by the chart
    table at the source sample; the deck action multiplies the deck word
    on the right by the inverse and leaves the fiber coordinate alone
    (fiber coordinates live in the chart trivialization downstairs, which
    deck translation does not change).  An optional twist adds a cochain
    value at the source point class and is how non-equivariant liftings
    are produced and repaired.
    """

    def __init__(self, model, corrections: ChartCorrections,
                 rho: Representation, liftings: Mapping[str, ChartLifting],
                 gluing: GluingData, twist=None):
        self.model = model
        self.corrections = corrections
        self.rho = rho
        self.liftings = dict(liftings)
        self.gluing = gluing
        self.m = model.torus_order
        self.n = model.rank
        some = next(iter(self.liftings.values()))
        self.m_prime = some.m_prime
        self.k = some.k
        self.twist = twist          # (FiniteModule, CochainTable) or None
        self._mats = {}
        self._rotations = {}

    def _branch_aut(self, chart, deck):
        key = (chart, deck)
        if key not in self._mats:
            self._mats[key] = (self.corrections.rho_alpha[chart]
                               * self.rho.of(deck))
        return self._mats[key]

    def _rotate(self, chart, w, z):
        """Rotate a chart sample by w/m, memoized per (chart, w)."""
        key = (chart, w)
        table = self._rotations.get(key)
        if table is None:
            frac = tuple(Fraction(v, self.m) for v in w)
            table = {zs: standard_act(frac, zs)
                     for zs in self.model.samples[chart]}
            self._rotations[key] = table
        moved = table.get(z)
        if moved is None:
            return standard_act(tuple(Fraction(v, self.m) for v in w), z)
        return moved

    def source_shift(self, u: tuple, node) -> Vec:
        """Fiber shift of the lifted action of u at the given presentation."""
        chart, deck, z = node
        w = self._branch_aut(chart, deck).apply_mod(u, self.m)
        shift = self.liftings[chart].value(w, z)
        if self.twist is not None:
            module, table = self.twist
            cls = module.class_of.get(node)
            if cls is None:
                raise OutOfModel("presentation %r is outside the twist "
                                 "window" % (node,))
            extra = table.values[(u,)][cls]
            if extra is None:
                raise OutOfModel("twist undefined at %r" % (node,))
            shift = _vadd(shift, extra, self.m_prime)
        return shift

    def act_T(self, u: tuple, node, t: Vec):
        chart, deck, z = node
        w = self._branch_aut(chart, deck).apply_mod(u, self.m)
        moved = self._rotate(chart, w, z)
        if not self.model.has_sample(chart, moved):
            raise OutOfModel("rotated sample %r left chart %s"
                             % (moved, chart))
        return (chart, deck, moved), \
            _vadd(t, self.source_shift(u, node), self.m_prime)

    def act_T_inv(self, u: tuple, node, t: Vec):
        chart, deck, z = node
        w = self._branch_aut(chart, deck).apply_mod(u, self.m)
        back = tuple((-v) % self.m for v in w)
        source = (chart, deck, self._rotate(chart, back, z))
        return source, _vsub(t, self.source_shift(u, source), self.m_prime)

    def act_pi1(self, word, node, t: Vec):
        chart, deck, z = node
        group = self.rho.group
        return (chart, group.mul(deck, group.inv(word)), z), t

    def transition(self, node_from, node_to, t: Vec) -> Vec:
        """Fiber coordinate of the same bundle point in another
        presentation, accumulated along overlap hops.

        Presentations reachable by chains of single-overlap identifications
        are supported; a revisit with a conflicting shift means the gluing
        has holonomy around an overlap cycle and raises AssemblyError.
        """
        group = self.rho.group
        seen = {node_from: t}
        frontier = [node_from]
        while frontier:
            nxt = []
            for node in frontier:
                chart, deck, z = node
                for other in self.model.nerve.neighbors(chart):
                    hops = []
                    mate = self.model.matched(other, chart, z)
                    if mate is not None:
                        gen = self.corrections.edge_generator(other, chart)
                        trans = () if gen is None else \
                            group.normalize((gen,))
                        hops.append(((other, group.mul(trans, deck), mate),
                                     self.gluing.value(other, chart, z)))
                    for target, shift in hops:
                        t_new = _vadd(seen[node], shift, self.m_prime)
                        if target in seen:
                            if seen[target] != t_new:
                                raise AssemblyError(
                                    "gluing holonomy around an overlap "
                                    "cycle at %r" % (target,))
                            continue
                        seen[target] = t_new
                        nxt.append(target)
            frontier = nxt
        if node_to not in seen:
            raise OutOfModel("presentations %r and %r are not identified "
                             "within the model" % (node_from, node_to))
        return seen[node_to]

    def with_twist(self, module: FiniteModule,
                   table: CochainTable) -> "GlobalLifting":
        if table.q != 1:
            raise InputError("twist must be a degree-1 table")
        if self.twist is not None:
            old_module, old_table = self.twist
            if old_module is not module:
                raise InputError("cannot compose twists over different "
                                 "windows")
            table = cochain_add(old_table, table, module)
        return GlobalLifting(self.model, self.corrections, self.rho,
                             self.liftings, self.gluing,
                             twist=(module, table))


def assemble_global_lifting(model, corrections: ChartCorrections,
                            rho: Representation,
                            liftings: Mapping[str, ChartLifting],
                            gluing: GluingData) -> GlobalLifting:
    """Re-run every validity check and return the evaluators.

    Raises AssemblyError naming the first violated identity: chart tables
    must be total and satisfy the action identity, gluing must be
    antisymmetric and triangle-additive, and every overlap must satisfy
    the equivariance identity (which is chart-independence of the lifted
    action on all declared overlap samples).
    """
    m = model.torus_order
    for chart in model.nerve.vertices:
        if chart not in liftings:
            raise AssemblyError("no lifting table for chart %s" % chart)
        lifting = liftings[chart]
        if lifting.chart != chart:
            raise AssemblyError("lifting labeled %r attached to chart %s"
                               % (lifting.chart, chart))
        if lifting.m != m or lifting.n != model.rank:
            raise AssemblyError("chart %s: lifting orders disagree with "
                                "the model" % chart)
        declared = set(lifting.samples)
        wanted = set(model.samples[chart])
        if declared != wanted:
            raise AssemblyError(
                "chart %s: lifting table domain differs from the chart "
                "samples" % chart)
        report = check_chart_lifting(lifting)
        if not report.ok:
            raise AssemblyError("chart %s violates the lifting identity: "
                                "%r" % (chart, report.violations[0]))
    ks = {l.k for l in liftings.values()}
    if gluing.k is not None:
        ks.add(gluing.k)
    mps = {l.m_prime for l in liftings.values()} | {gluing.m_prime}
    if len(ks) > 1 or len(mps) > 1:
        raise AssemblyError("fiber shapes disagree across charts/gluing")
    report = check_gluing(model, gluing)
    if not report.ok:
        raise AssemblyError("gluing data invalid: %r" % (report.violations[0],))
    for a, b in model.nerve.edges:
        for to_chart, from_chart in ((a, b), (b, a)):
            report = check_equivariant_gluing(
                model, to_chart, from_chart, liftings[to_chart],
                liftings[from_chart], gluing)
            if not report.ok:
                raise AssemblyError(
                    "overlap (%s, %s) is not equivariant: %r"
                    % (to_chart, from_chart, report.violations[0]))
    return GlobalLifting(model, corrections, rho, liftings, gluing)


def twist_lifting(lifting: GlobalLifting, module: FiniteModule,
                  table: CochainTable) -> GlobalLifting:
    """Shift the lifted torus action by a cochain: the action of u gains
    the fiber shift table(u, source point).  No equivariance is re-checked
    — this is the constructor for deliberately obstructed liftings."""
    return lifting.with_twist(module, table)


@dataclass(frozen=True)
class SigmaTable:
    """Per-generator obstruction tables: sigma(a, u, x) in Z_{m'}^k.

    ``tables[i]`` is the degree-1 torus table of the i-th deck generator;
    None entries mark evaluations that left the window.
    """

    tables: Tuple[CochainTable, ...]

    @property
    def num_generators(self) -> int:
        return len(self.tables)

    def entry(self, i: int, u: tuple, c: int):
        return self.tables[i].values[(u,)][c]

    def is_zero(self) -> bool:
        return all(v is None or all(x == 0 for x in v)
                   for table in self.tables
                   for col in table.values.values() for v in col)


def sigma_entry(lifting: GlobalLifting, module: FiniteModule, word,
                u: tuple, cls: int):
    """One four-map evaluation:

        phi_T(u)^-1 . phi_pi1(a)^-1 . phi_T(rho(a)(u)) . phi_pi1(a)

    applied over the class representative with fiber coordinate 0; the
    resulting fiber coordinate is sigma.  A second run at coordinate 1
    asserts independence of the starting fiber coordinate.  Returns None
    if any step leaves the window.
    """
    ru = lifting.rho.of(word).apply_mod(u, lifting.m)
    return _sigma_entry(lifting, module, word, lifting.rho.group.inv(word),
                        ru, u, cls)


def _sigma_entry(lifting, module, word, inv, ru, u, cls):
    node = module.points[cls]
    results = []
    for start in ((0,) * lifting.k, (1,) + (0,) * (lifting.k - 1)):
        cur, t = lifting.act_pi1(word, node, start)
        try:
            cur, t = lifting.act_T(ru, cur, t)
        except OutOfModel:
            return None
        cur, t = lifting.act_pi1(inv, cur, t)
        try:
            cur, t = lifting.act_T_inv(u, cur, t)
        except OutOfModel:
            return None
        if cur != node:
            raise AssemblyError(
                "obstruction loop did not return to its base point: "
                "%r vs %r" % (cur, node))
        results.append(_vsub(t, start, lifting.m_prime))
    if results[0] != results[1]:
        raise AssemblyError("obstruction value depends on the fiber "
                            "coordinate at %r" % (node,))
    return results[0]


def sigma_word(lifting: GlobalLifting, module: FiniteModule,
               word) -> CochainTable:
    """The obstruction table of one deck word (generators give sigma)."""
    aut = lifting.rho.of(word)
    inv = lifting.rho.group.inv(word)
    values = {}
    for u in u_keys(lifting.n, lifting.m):
        ru = aut.apply_mod(u, lifting.m)
        values[(u,)] = [_sigma_entry(lifting, module, word, inv, ru, u, c)
                        for c in range(module.size)]
    return CochainTable(q=1, values=values)


def compute_sigma(lifting: GlobalLifting,
                  module: FiniteModule) -> SigmaTable:
    group = lifting.rho.group
    return SigmaTable(tables=tuple(
        sigma_word(lifting, module, ((i, 1),))
        for i in range(group.rank)))


def deck_coboundary(tau: CochainTable, module: FiniteModule) -> SigmaTable:
    """The deck-direction coboundary of a torus cochain:

        (cob tau)(a, u, x) = tau(u, x) - tau(rho(a)(u), phi_pi1(a)(x))

    per generator a.  The vanishing test solves sigma = cob tau; twisting
    a lifting by tau changes its sigma by -(cob tau), so the solved tau
    is exactly the twist that repairs equivariance.
    """
    if tau.q != 1:
        raise InputError("deck coboundary takes a degree-1 table")
    mp = module.m_prime
    tables = []
    for i in range(module.pi1_rank):
        aut = module.rho_images[i]
        values = {}
        for u in u_keys(module.n, module.m):
            ru = aut.apply_mod(u, module.m)
            src = tau.values[(u,)]
            twisted = tau.values[(ru,)]
            col = []
            for c in range(module.size):
                moved = module.deck_act_gen(i, 1, c)
                if moved is None or src[c] is None \
                        or twisted[moved] is None:
                    col.append(None)
                else:
                    col.append(_vsub(src[c], twisted[moved], mp))
            values[(u,)] = col
        tables.append(CochainTable(q=1, values=values))
    return SigmaTable(tables=tuple(tables))


def expand_generators(module: FiniteModule, u: tuple, cls: int):
    """Write tau(u, x) as a sum of generator values via the torus-cocycle
    identity: tau(l_1 + ... + l_L, x) = sum_t tau(l_t, (suffix after t).x)
    with letters l = e_1 (u_1 times), then e_2, ...  Returns the list of
    (generator index, class) pairs."""
    letters = []
    for j in range(module.n):
        letters.extend([j] * (u[j] % module.m))
    terms = []
    cur = cls
    for j in reversed(letters):
        terms.append((j, cur))
        cur = module.torus_act(module.generator_u(j), cur)
    return terms


def expand_witness(module: FiniteModule, gen_values) -> CochainTable:
    """Total degree-1 table generated by values on (e_j, x) pairs."""
    mp = module.m_prime
    values = {}
    for u in u_keys(module.n, module.m):
        col = []
        for c in range(module.size):
            total = [0] * module.k
            for j, cc in expand_generators(module, u, c):
                for idx, v in enumerate(gen_values[(j, cc)]):
                    total[idx] += v
            col.append(tuple(v % mp for v in total))
        values[(u,)] = col
    return CochainTable(q=1, values=values)


@dataclass(frozen=True)
class Certificate:
    """Integer row combination proving infeasibility in one fiber
    coordinate: vector . A = 0 and vector . b != 0 (mod m')."""

    fiber_coordinate: int
    vector: Tuple[int, ...]


@dataclass(frozen=True)
class ObstructionReport:
    verdict: str       # vanishing-at-scale | certified-nonvanishing |
    #                    indeterminate
    witness: Optional[CochainTable]
    certificate: Optional[Certificate]
    m: int
    m_prime: int
    n: int
    k: int
    window: int
    num_points: int
    unknowns: int
    rows: tuple                 # sparse rows: tuples of (column, coeff)
    row_labels: tuple
    rhs: tuple                  # per fiber coordinate, tuple over rows
    sigma_rows_total: int
    sigma_rows_dropped: int
    threshold: Fraction

    @property
    def dropped_ratio(self) -> Fraction:
        if self.sigma_rows_total == 0:
            return Fraction(0)
        return Fraction(self.sigma_rows_dropped, self.sigma_rows_total)


def _verify_combination(rows, rhs, modulus, vector):
    """Sparse check that vector.A = 0 and vector.b != 0 (mod modulus)."""
    acc = {}
    for coeff, row in zip(vector, rows):
        for col, val in row:
            acc[col] = (acc.get(col, 0) + coeff * val) % modulus
    if any(v % modulus for v in acc.values()):
        return False
    dot = sum(c * b for c, b in zip(vector, rhs)) % modulus
    return dot != 0


def _verify_assignment(rows, rhs, modulus, x):
    for row, b in zip(rows, rhs):
        if sum(coeff * x[col] for col, coeff in row) % modulus \
                != b % modulus:
            return False
    return True


def test_vanishing(sigma: SigmaTable, module: FiniteModule,
                   threshold: Fraction = Fraction(1, 4)
                   ) -> ObstructionReport:
    """Decide whether sigma is a deck coboundary at the modeled scale.

    Unknowns are the generator values g_j(x) = tau(e_j, x); the
    torus-cocycle identity determines tau everywhere else, so it is
    enforced through torsion and commutation rows, and the coboundary
    equation sigma = cob tau is imposed at u = e_j only (sufficient
    because both sides are torus cocycles in u — guaranteed by the
    InvalidSigma gate and the module honesty check).  An infeasibility
    certificate is sound regardless of windowing; a solution yields
    vanishing-at-scale only while the dropped-constraint ratio stays
    within the threshold.
    """
    bad = module.validate_actions()
    if bad:
        raise InputError("module action tables are not honest group "
                         "actions: %r" % (bad[0],))
    if sigma.num_generators != module.pi1_rank:
        raise InvalidSigma("obstruction table covers %d generators, module "
                           "has %d" % (sigma.num_generators,
                                       module.pi1_rank))
    for i, table in enumerate(sigma.tables):
        check = is_cocycle(table, module)
        if not check.ok:
            raise InvalidSigma(
                "generator %d: torus cocycle identity fails at %r"
                % (i, check.violations[0]))
    n, size, m, mp = module.n, module.size, module.m, module.m_prime

    def var(j, c):
        return j * size + c

    rows, labels, rhs_columns = [], [], [[] for _ in range(module.k)]

    def add_row(coeffs, label, vec):
        rows.append(coeffs)
        labels.append(label)
        for coord in range(module.k):
            rhs_columns[coord].append(vec[coord])

    zero = module.zero_vec()
    for j in range(n):
        gen = module.generator_u(j)
        for c in range(size):
            coeffs = {}
            cur = c
            for _ in range(m):
                key = var(j, cur)
                coeffs[key] = coeffs.get(key, 0) + 1
                cur = module.torus_act(gen, cur)
            add_row(coeffs, ("torsion", j, c), zero)
    for i in range(n):
        for j in range(i + 1, n):
            ei, ej = module.generator_u(i), module.generator_u(j)
            for c in range(size):
                coeffs = {}
                for key, delta in ((var(i, module.torus_act(ej, c)), 1),
                                   (var(j, c), 1),
                                   (var(j, module.torus_act(ei, c)), -1),
                                   (var(i, c), -1)):
                    coeffs[key] = coeffs.get(key, 0) + delta
                coeffs = {key: v for key, v in coeffs.items() if v}
                if coeffs:
                    add_row(coeffs, ("commutes", i, j, c), zero)
    dropped = 0
    total = module.pi1_rank * n * size
    for i in range(module.pi1_rank):
        aut = module.rho_images[i]
        for j in range(n):
            ej = module.generator_u(j)
            rej = aut.apply_mod(ej, m)
            for c in range(size):
                moved = module.deck_act_gen(i, 1, c)
                value = sigma.tables[i].values[(ej,)][c]
                if moved is None or value is None:
                    dropped += 1
                    continue
                coeffs = {var(j, c): 1}
                for jj, cc in expand_generators(module, rej, moved):
                    key = var(jj, cc)
                    coeffs[key] = coeffs.get(key, 0) - 1
                coeffs = {key: v for key, v in coeffs.items() if v}
                add_row(coeffs, ("deck", i, j, c), value)

    unknowns = n * size
    sparse_rows = tuple(tuple(sorted(r.items())) for r in rows)
    nf = SmithNF([dict(r) for r in rows], ncols=unknowns)
    solutions = []
    for coord in range(module.k):
        result = nf.solve_mod(tuple(rhs_columns[coord]), mp)
        if not result.solvable:
            cert = Certificate(fiber_coordinate=coord,
                               vector=result.certificate)
            if not _verify_combination(sparse_rows, rhs_columns[coord],
                                       mp, cert.vector):
                raise AssemblyError("infeasibility certificate failed "
                                    "re-verification")
            return ObstructionReport(
                verdict="certified-nonvanishing", witness=None,
                certificate=cert, m=m, m_prime=mp, n=n, k=module.k,
                window=module.window, num_points=size, unknowns=unknowns,
                rows=sparse_rows, row_labels=tuple(labels),
                rhs=tuple(tuple(col) for col in rhs_columns),
                sigma_rows_total=total, sigma_rows_dropped=dropped,
                threshold=threshold)
        if not _verify_assignment(sparse_rows, rhs_columns[coord], mp,
                                  result.solution):
            raise AssemblyError("solver witness failed re-verification")
        solutions.append(result.solution)

    gen_values = {(j, c): tuple(solutions[coord][var(j, c)]
                                for coord in range(module.k))
                  for j in range(n) for c in range(size)}
    witness = expand_witness(module, gen_values)
    if not is_cocycle(witness, module).ok:
        raise AssemblyError("expanded witness is not a torus cocycle")
    cob = deck_coboundary(witness, module)
    for i in range(module.pi1_rank):
        for u in u_keys(n, m):
            got = cob.tables[i].values[(u,)]
            want = sigma.tables[i].values[(u,)]
            for c in range(size):
                if got[c] is not None and want[c] is not None \
                        and got[c] != want[c]:
                    raise AssemblyError(
                        "witness coboundary disagrees with the obstruction "
                        "at generator %d, u=%r, point %d" % (i, u, c))
    ratio = Fraction(dropped, total) if total else Fraction(0)
    verdict = "vanishing-at-scale" if ratio <= threshold else "indeterminate"
    return ObstructionReport(
        verdict=verdict, witness=witness, certificate=None, m=m,
        m_prime=mp, n=n, k=module.k, window=module.window,
        num_points=size, unknowns=unknowns, rows=sparse_rows,
        row_labels=tuple(labels),
        rhs=tuple(tuple(col) for col in rhs_columns),
        sigma_rows_total=total, sigma_rows_dropped=dropped,
        threshold=threshold)


def reconstruct_lifting(lifting: GlobalLifting, module: FiniteModule,
                        tau: CochainTable) -> GlobalLifting:
    """Twist by a solved witness and re-verify equivariance.

    The returned lifting satisfies the commutation identity with the deck
    action on every in-window evaluation; any residue raises
    ReconstructionError (the window was too small to trust the witness).
    """
    if not is_cocycle(tau, module).ok:
        raise ReconstructionError("witness is not a torus cocycle")
    repaired = lifting.with_twist(module, tau)
    residue = compute_sigma(repaired, module)
    if not residue.is_zero():
        raise ReconstructionError(
            "twisted lifting still fails equivariance inside the window")
    return repaired
