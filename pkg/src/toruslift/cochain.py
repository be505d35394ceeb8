"""Finite cochain modules over the sampled fiber product.

The coefficient module of the obstruction theory is the group of maps from
the pulled-back space into the fiber torus.  Here both are finite: points
are (chart, deck word, sample) triples within a deck-word window, glued
along the declared overlap identifications, and the fiber torus is the
subgroup Z_{m'}^k.  Cochains become finite tables; the coboundary operator
and the pi_1-action become exact table computations.

Windowing makes the deck action tables partial: entries whose image leaves
the window are flagged undefined rather than guessed.  Identifications
whose partner falls outside the window are simply not applied — the two
presentations then count as separate points.  Both truncations only ever
split or drop information, which is the direction that keeps infeasibility
certificates sound (a function on the true space restricts to one on the
truncated model, never the reverse).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InputError, OutOfModel
from .groups import AtlasModel, FPGroup, Representation, Word
from .nerve import ChartCorrections
from .torus import TorusAut, standard_act

UKey = Tuple[int, ...]          # element of (Z/m)^n as integers mod m
Vec = Tuple[int, ...]           # element of Z_{m'}^k


def u_keys(n: int, m: int):
    """All of (Z/m)^n in lexicographic order."""
    return itertools.product(range(m), repeat=n)


class FiniteModule:
    """Finite model of the coefficient module: points plus action tables.

    ``points`` are opaque ids (canonical fiber-product representatives when
    built from an atlas, any hashable labels for synthetic modules).  The
    torus table is total; deck tables carry None where the action leaves
    the window.  ``rho_images`` are the torus automorphisms attached to the
    deck generators — the module remembers them because the pi_1-action on
    cochains twists torus arguments by them.
    """

    def __init__(self, n: int, m: int, k: int, m_prime: int,
                 points: Sequence, torus_table: Dict[UKey, Sequence[int]],
                 deck_tables: Dict[Tuple[int, int], Sequence[Optional[int]]],
                 rho_images: Sequence[TorusAut], window: int = 0,
                 pi1_group: Optional[FPGroup] = None, class_of=None):
        self.n = n
        self.m = m
        self.k = k
        self.m_prime = m_prime
        self.points = tuple(points)
        self.window = window
        self.pi1_group = pi1_group
        self.rho_images = tuple(rho_images)
        #: presentation -> class index, for every enumerated node
        self.class_of = dict(class_of) if class_of else \
            {p: i for i, p in enumerate(self.points)}
        size = len(self.points)
        self._torus = {tuple(u): list(col) for u, col in torus_table.items()}
        self._deck = {key: list(col) for key, col in deck_tables.items()}
        for u in u_keys(n, m):
            if u not in self._torus:
                raise InputError("torus table missing %r" % (u,))
            if len(self._torus[u]) != size:
                raise InputError("torus table at %r has wrong length" % (u,))
        for (i, e), col in self._deck.items():
            if not (0 <= i < len(self.rho_images) and e in (1, -1)):
                raise InputError("bad deck table key %r" % ((i, e),))
            if len(col) != size:
                raise InputError("deck table %r has wrong length" % ((i, e),))
        for i in range(len(self.rho_images)):
            for e in (1, -1):
                if (i, e) not in self._deck:
                    raise InputError("deck table missing for generator "
                                     "%d^%d" % (i, e))

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def pi1_rank(self) -> int:
        return len(self.rho_images)

    def torus_act(self, u: UKey, c: int) -> int:
        return self._torus[u][c]

    def torus_column(self, u: UKey) -> List[int]:
        return self._torus[u]

    def deck_act_gen(self, i: int, e: int, c: int) -> Optional[int]:
        return self._deck[(i, e)][c]

    def deck_act(self, word: Word, c: Optional[int]) -> Optional[int]:
        """Apply the point action of phi_pi1(word), letter by letter.

        None in, or any out-of-window step, gives None out.
        """
        if c is None:
            return None
        for i, e in word:
            step = 1 if e > 0 else -1
            for _ in range(abs(e)):
                c = self._deck[(i, step)][c]
                if c is None:
                    return None
        return c

    def rho_of(self, word: Word) -> TorusAut:
        out = None
        for i, e in word:
            aut = self.rho_images[i] ** e
            out = aut if out is None else out * aut
        if out is None:
            return TorusAut.identity(self.n)
        return out

    def rho_u(self, word: Word, u: UKey) -> UKey:
        return self.rho_of(word).apply_mod(u, self.m)

    def add_u(self, u: UKey, v: UKey) -> UKey:
        return tuple((a + b) % self.m for a, b in zip(u, v))

    def generator_u(self, j: int) -> UKey:
        return tuple(1 if i == j else 0 for i in range(self.n))

    def zero_vec(self) -> Vec:
        return (0,) * self.k

    def reduce_vec(self, vec: Sequence[int]) -> Vec:
        if len(vec) != self.k:
            raise InputError("fiber vector has rank %d, expected %d"
                             % (len(vec), self.k))
        return tuple(v % self.m_prime for v in vec)

    # -- honesty checks ----------------------------------------------------

    def validate_actions(self) -> list:
        """Check the tables really encode commuting group actions.

        Verifies: the torus table is the abelian action generated by its
        e_j columns (including m-torsion), deck generator tables are
        mutually inverse where defined, the torus/deck commutation
        phi_T(rho(a)(u)) o phi_pi1(a) = phi_pi1(a) o phi_T(u) holds on
        every defined entry, and deck tables satisfy the pi_1 family
        relations where visible.  Returns a list of violation descriptions;
        the vanishing test refuses modules that fail.
        """
        bad = []
        size = self.size
        gens = [self._torus[self.generator_u(j)] for j in range(self.n)]
        for j, col in enumerate(gens):
            if sorted(v for v in col) != list(range(size)):
                bad.append(("torus-not-bijective", j))
                continue
            walk = list(range(size))
            for _ in range(self.m):
                walk = [col[c] for c in walk]
            if walk != list(range(size)):
                bad.append(("torus-torsion", j))
        for i in range(self.n):
            for j in range(i + 1, self.n):
                for c in range(size):
                    if gens[i][gens[j][c]] != gens[j][gens[i][c]]:
                        bad.append(("torus-noncommuting", i, j, c))
                        break
        for u in u_keys(self.n, self.m):
            expect = list(range(size))
            for j in range(self.n):
                for _ in range(u[j]):
                    expect = [gens[j][c] for c in expect]
            if expect != self._torus[u]:
                bad.append(("torus-not-generated", u))
        for i in range(self.pi1_rank):
            fwd, rev = self._deck[(i, 1)], self._deck[(i, -1)]
            for c in range(size):
                if fwd[c] is not None and rev[fwd[c]] not in (None, c):
                    bad.append(("deck-not-inverse", i, c))
                if rev[c] is not None and fwd[rev[c]] not in (None, c):
                    bad.append(("deck-not-inverse", i, c))
        for i in range(self.pi1_rank):
            for e in (1, -1):
                aut = self.rho_images[i] ** e
                col = self._deck[(i, e)]
                for u in u_keys(self.n, self.m):
                    ru = aut.apply_mod(u, self.m)
                    tu, tru = self._torus[u], self._torus[ru]
                    for c in range(size):
                        if col[c] is None:
                            continue
                        if tru[col[c]] != col[tu[c]]:
                            bad.append(("torus-deck-commutation", i, e, u, c))
                            break
        bad.extend(self._family_relation_violations())
        return bad

    def _family_relation_violations(self):
        bad = []
        group = self.pi1_group
        if group is None:
            return bad
        if group.family == "free_abelian":
            for i in range(self.pi1_rank):
                for j in range(i + 1, self.pi1_rank):
                    for c in range(self.size):
                        a = self.deck_act(((i, 1), (j, 1)), c)
                        b = self.deck_act(((j, 1), (i, 1)), c)
                        if a is not None and b is not None and a != b:
                            bad.append(("deck-noncommuting", i, j, c))
                            break
        if group.family == "cyclic":
            q = group.modulus
            for c in range(self.size):
                out = self.deck_act(((0, q),), c)
                if out is not None and out != c:
                    bad.append(("deck-order", c))
        return bad


def build_finite_module(model: AtlasModel, rho: Representation,
                        corrections: ChartCorrections, window: int,
                        fiber_rank: int, fiber_order: int) -> FiniteModule:
    """Enumerate the windowed fiber product of an atlas and tabulate actions.

    Points are (chart, deck word, sample) triples with deck words in the
    ball of the given radius, identified across overlaps whenever both
    presentations fall inside the window.  Canonical representatives are
    minimal by (deck length, deck word, chart position, sample position).
    """
    if window < 0:
        raise InputError("window must be >= 0")
    group = rho.group
    ball = group.ball(window)
    ball_set = set(ball)
    nerve = model.nerve

    chart_pos = {v: i for i, v in enumerate(nerve.vertices)}
    sample_pos = {chart: {z: i for i, z in enumerate(model.samples[chart])}
                  for chart in nerve.vertices}
    nodes = []
    node_index = {}
    for chart in nerve.vertices:
        for deck in ball:
            for z in model.samples[chart]:
                node_index[(chart, deck, z)] = len(nodes)
                nodes.append((chart, deck, z))

    parent = list(range(len(nodes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[rj] = ri

    for a, b in nerve.edges:
        for to_chart, from_chart in ((a, b), (b, a)):
            gen = corrections.edge_generator(to_chart, from_chart)
            trans = () if gen is None else group.normalize((gen,))
            pairs = [(model.matched(to_chart, from_chart, z), z)
                     for z in model.samples[from_chart]]
            for z_to, z_from in pairs:
                if z_to is None:
                    continue
                for deck in ball:
                    lifted = group.mul(trans, deck)
                    if lifted not in ball_set:
                        continue
                    union(node_index[(from_chart, deck, z_from)],
                          node_index[(to_chart, lifted, z_to)])

    def node_key(idx):
        chart, deck, z = nodes[idx]
        return (group.word_length(deck), deck, chart_pos[chart],
                sample_pos[chart][z])

    roots: Dict[int, list] = {}
    for i in range(len(nodes)):
        roots.setdefault(find(i), []).append(i)
    reps = sorted((min(members, key=node_key) for members in roots.values()),
                  key=node_key)
    class_of_node = {}
    for cls, rep in enumerate(reps):
        for member in roots[find(rep)]:
            class_of_node[nodes[member]] = cls
    points = tuple(nodes[rep] for rep in reps)

    n, m = model.rank, model.torus_order
    mats = {}
    for chart, deck, _ in points:
        if (chart, deck) not in mats:
            mats[(chart, deck)] = (corrections.rho_alpha[chart]
                                   * rho.of(deck))
    torus_table = {}
    for u in u_keys(n, m):
        column = []
        for chart, deck, z in points:
            w = mats[(chart, deck)].apply_mod(u, m)
            moved = standard_act(tuple(Fraction(v, m) for v in w), z)
            target = class_of_node.get((chart, deck, moved))
            if target is None:
                raise OutOfModel(
                    "chart %s: rotated sample %r is not in the model"
                    % (chart, moved))
            column.append(target)
        torus_table[u] = column

    deck_tables = {}
    for i in range(group.rank):
        for e in (1, -1):
            shift = ((i, -e),)
            column = []
            for chart, deck, z in points:
                word = group.mul(deck, shift)
                column.append(class_of_node.get((chart, word, z))
                              if word in ball_set else None)
            deck_tables[(i, e)] = column

    return FiniteModule(n=n, m=m, k=fiber_rank, m_prime=fiber_order,
                        points=points, torus_table=torus_table,
                        deck_tables=deck_tables,
                        rho_images=rho.generator_images, window=window,
                        pi1_group=group, class_of=class_of_node)


@dataclass
class CochainTable:
    """A degree-q cochain on the torus direction, as a finite table.

    ``values`` maps a q-tuple of torus arguments to a column of fiber
    vectors indexed by point class; a None entry marks a point where the
    cochain is undefined (it referenced an out-of-window deck image).
    Degree 0 uses the single key ().  ``domain`` names the argument group
    (always the torus here; deck-direction data lives in its own type).
    """

    q: int
    values: Dict[tuple, list]
    domain: str = "torus"

    def value(self, us: tuple, c: int):
        return self.values[us][c]


def zero_cochain(module: FiniteModule, q: int) -> CochainTable:
    zero = module.zero_vec()
    keys = itertools.product(u_keys(module.n, module.m), repeat=q)
    return CochainTable(q=q, values={us: [zero] * module.size
                                     for us in keys})


def cochain_add(a: CochainTable, b: CochainTable,
                module: FiniteModule) -> CochainTable:
    if a.q != b.q:
        raise InputError("cannot add cochains of degrees %d and %d"
                         % (a.q, b.q))
    out = {}
    for us, col in a.values.items():
        other = b.values[us]
        out[us] = [None if x is None or y is None
                   else module.reduce_vec([p + q_ for p, q_ in zip(x, y)])
                   for x, y in zip(col, other)]
    return CochainTable(q=a.q, values=out)


def _column(sigma: CochainTable, us: tuple):
    try:
        return sigma.values[us]
    except KeyError:
        raise OutOfModel("cochain has no entry at arguments %r" % (us,))


def coboundary(sigma: CochainTable, module: FiniteModule) -> CochainTable:
    """The explicit coboundary on torus-direction cochains.

    delta s(u_1,...,u_{q+1}, x) = s(u_2,...,u_{q+1}, x)
        + sum_i (-1)^i s(u_1, ..., u_i + u_{i+1}, ..., u_{q+1}, x)
        + (-1)^{q+1} s(u_1,...,u_q, u_{q+1} . x)

    where the last term acts on the point through the torus table.  Works
    in any degree; an undefined entry in any referenced term leaves the
    result undefined there.
    """
    q = sigma.q
    mp = module.m_prime
    keys = list(u_keys(module.n, module.m))
    last_sign = 1 if (q + 1) % 2 == 0 else -1
    out = {}
    if q == 1 and module.k == 1:
        # hot path: delta s(u1, u2, x) = s(u2, x) - s(u1+u2, x) + s(u1, u2.x)
        for u1 in keys:
            col1 = _column(sigma, (u1,))
            for u2 in keys:
                col2 = _column(sigma, (u2,))
                col_sum = _column(sigma, (module.add_u(u1, u2),))
                permuted = [col1[p] for p in module.torus_column(u2)]
                out[(u1, u2)] = [
                    None if a is None or b is None or c is None
                    else ((a[0] - b[0] + c[0]) % mp,)
                    for a, b, c in zip(col2, col_sum, permuted)]
        return CochainTable(q=2, values=out)
    for us in itertools.product(keys, repeat=q + 1):
        terms = [(1, _column(sigma, us[1:]), None)]
        sign = 1
        for i in range(1, q + 1):
            sign = -sign
            merged = (us[:i - 1] + (module.add_u(us[i - 1], us[i]),)
                      + us[i + 1:])
            terms.append((sign, _column(sigma, merged), None))
        terms.append((last_sign, _column(sigma, us[:q]),
                      module.torus_column(us[q])))
        column = []
        for c in range(module.size):
            total = [0] * module.k
            for sgn, col, perm in terms:
                entry = col[c] if perm is None else col[perm[c]]
                if entry is None:
                    total = None
                    break
                for idx, v in enumerate(entry):
                    total[idx] += sgn * v
            column.append(None if total is None
                          else tuple(v % mp for v in total))
        out[us] = column
    return CochainTable(q=q + 1, values=out)


@dataclass(frozen=True)
class CocycleCheck:
    ok: bool
    violations: tuple      # (u_1, ..., u_q+1... , class index) per nonzero


def is_cocycle(sigma: CochainTable, module: FiniteModule) -> CocycleCheck:
    """True iff the coboundary vanishes on every defined entry."""
    delta = coboundary(sigma, module)
    zero = module.zero_vec()
    violations = []
    for us in sorted(delta.values):
        col = delta.values[us]
        for c in range(module.size):
            if col[c] is not None and col[c] != zero:
                violations.append(us + (c,))
    return CocycleCheck(ok=not violations, violations=tuple(violations))


def pi1_act(sigma: CochainTable, word: Word,
            module: FiniteModule) -> CochainTable:
    """Right pi_1-action on cochains:
    (s . a)(u_1,...,u_q, x) = s(rho(a)(u_1),...,rho(a)(u_q), phi_pi1(a)(x)).

    Entries whose point image leaves the window become None.
    """
    moved = [module.deck_act(word, c) for c in range(module.size)]
    out = {}
    for us, _ in sigma.values.items():
        twisted = tuple(module.rho_u(word, u) for u in us)
        src = sigma.values[twisted]
        out[us] = [None if moved[c] is None else src[moved[c]]
                   for c in range(module.size)]
    return CochainTable(q=sigma.q, values=out)
