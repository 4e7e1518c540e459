"""Weighted directed multigraphs, self-avoiding flows and the LGV formula with cycles.

Vertices are numbered ``1..n``.  Loops and parallel edges are allowed; each
parallel edge is a distinct step when enumerating paths and cycles, while the
adjacency matrix sums them.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpq

from .errors import ArgumentError, ParseError, SingularMatrixError
from .grassmann import permutation_sign
from .linalg import PolyMatrix, det_poly, det_rational, identity_rational, matrix_inverse_rational, submatrix
from .poly import Poly, var_key

SAMPLE_NUMERATORS = tuple(k for k in range(-9, 10) if k)
SAMPLE_DENOMINATOR = 10
MAX_RESAMPLES = 1000


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    weight: Poly


class DirectedMultigraph:
    """Immutable weighted digraph.  Edges may be given as :class:`Edge` or as
    ``(source, target[, weight])`` tuples; a missing weight becomes the
    variable ``w_<source>_<target>_<k>`` for the k-th parallel copy."""

    def __init__(self, n, edges=()):
        if not isinstance(n, int) or n < 1:
            raise ArgumentError(f"vertex count must be a positive integer, got {n!r}")
        self.n_vertices = n
        built = []
        seen = {}
        for e in edges:
            if isinstance(e, Edge):
                u, v, w = e.source, e.target, e.weight
            else:
                u, v, *rest = e
                w = rest[0] if rest else None
            if not (isinstance(u, int) and isinstance(v, int) and 1 <= u <= n and 1 <= v <= n):
                raise ArgumentError(f"edge ({u}, {v}) has an endpoint outside 1..{n}")
            k = seen[(u, v)] = seen.get((u, v), 0) + 1
            if w is None:
                w = Poly.var(f"w_{u}_{v}_{k}")
            elif isinstance(w, str):
                w = Poly.parse(w)
            elif not isinstance(w, Poly):
                w = Poly(w)
            if not w:
                raise ArgumentError(f"edge ({u}, {v}) has zero weight")
            built.append(Edge(u, v, w))
        self.edges = tuple(built)
        self._out = [[] for _ in range(n + 1)]
        for idx, e in enumerate(self.edges):
            self._out[e.source].append((idx, e.target))
        self._cycles = None
        self._collections = {}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise ParseError(f"malformed graph JSON: {exc}") from exc
        if not isinstance(data, dict) or "n" not in data:
            raise ParseError('graph JSON needs an "n" field')
        edges = []
        for item in data.get("edges", []):
            try:
                w = item.get("weight")
                if isinstance(w, float):
                    raise ParseError("floating-point weights are not accepted")
                edges.append((item["from"], item["to"], w))
            except (KeyError, AttributeError, TypeError) as exc:
                raise ParseError(f"bad edge entry {item!r}") from exc
        return cls(data["n"], edges)

    def to_json(self):
        return {
            "n": self.n_vertices,
            "edges": [{"from": e.source, "to": e.target, "weight": str(e.weight)} for e in self.edges],
        }

    @property
    def variables(self):
        names = set()
        for e in self.edges:
            names.update(e.weight.variables)
        return tuple(sorted(names, key=var_key))

    def out_edges(self, v):
        return self._out[v]

    def without_edges(self, indices):
        drop = set(indices)
        return DirectedMultigraph(self.n_vertices, [e for i, e in enumerate(self.edges) if i not in drop])

    def __repr__(self):
        return f"DirectedMultigraph({self.n_vertices}, {len(self.edges)} edges)"


def weighted_adjacency(g):
    rows = [[Poly() for _ in range(g.n_vertices)] for _ in range(g.n_vertices)]
    for e in g.edges:
        rows[e.source - 1][e.target - 1] = rows[e.source - 1][e.target - 1] + e.weight
    return PolyMatrix(rows)


def adjacency_at(g, edge_values):
    n = g.n_vertices
    rows = [[0] * n for _ in range(n)]
    for e, val in zip(g.edges, edge_values):
        rows[e.source - 1][e.target - 1] += val
    return rows


# -- cycles -------------------------------------------------------------------


@dataclass(frozen=True)
class Cycle:
    """Self-avoiding directed cycle, listed from its minimal vertex."""

    vertices: tuple
    edges: tuple
    mask: int


@dataclass(frozen=True)
class CycleCollection:
    cycles: tuple
    weight: Poly
    sign: int

    @property
    def vertex_mask(self):
        m = 0
        for c in self.cycles:
            m |= c.mask
        return m


def enumerate_cycles(g):
    """All self-avoiding cycles of ``g`` in canonical order."""
    if g._cycles is not None:
        return g._cycles
    found = []
    for s in range(1, g.n_vertices + 1):
        verts, edges = [s], []

        def extend(v, mask):
            for idx, w in g.out_edges(v):
                if w == s:
                    found.append(Cycle(tuple(verts), tuple(edges) + (idx,), mask))
                elif w > s and not mask >> w & 1:
                    verts.append(w)
                    edges.append(idx)
                    extend(w, mask | 1 << w)
                    verts.pop()
                    edges.pop()

        extend(s, 1 << s)
    g._cycles = tuple(found)
    return g._cycles


def _collection_indices(g, avoid):
    """Index tuples of pairwise-disjoint cycles avoiding the vertex mask ``avoid``."""
    hit = g._collections.get(avoid)
    if hit is not None:
        return hit
    cycles = [c for c in enumerate(enumerate_cycles(g)) if not c[1].mask & avoid]
    out = []

    def rec(start, used, chosen):
        out.append(tuple(chosen))
        for k in range(start, len(cycles)):
            idx, c = cycles[k]
            if not c.mask & used:
                chosen.append(idx)
                rec(k + 1, used | c.mask, chosen)
                chosen.pop()

    rec(0, 0, [])
    g._collections[avoid] = out
    return out


def _weight(g, edge_indices):
    w = Poly(1)
    for i in edge_indices:
        w = w * g.edges[i].weight
    return w


def _make_collection(g, indices):
    all_cycles = enumerate_cycles(g)
    cycles = tuple(all_cycles[i] for i in indices)
    w = Poly(1)
    for c in cycles:
        w = w * _weight(g, c.edges)
    return CycleCollection(cycles, w, -1 if len(cycles) % 2 else 1)


def enum_cycle_collections(g, avoid=0):
    """Every collection of self-avoiding, pairwise vertex-disjoint cycles
    (the empty collection first).  ``avoid`` is a vertex bitmask (bit v)."""
    return [_make_collection(g, ix) for ix in _collection_indices(g, avoid)]


def cycle_partition_function(g):
    total = Poly()
    for c in enum_cycle_collections(g):
        total = total + c.weight * c.sign
    return total


# -- paths and flows ----------------------------------------------------------


@dataclass(frozen=True)
class Path:
    vertices: tuple
    edges: tuple

    @property
    def mask(self):
        m = 0
        for v in self.vertices:
            m |= 1 << v
        return m


@dataclass(frozen=True)
class PPath:
    """Vertex-disjoint self-avoiding paths; ``paths[i]`` joins
    ``sources[i]`` to ``targets[permutation[i]]``."""

    sources: tuple
    targets: tuple
    paths: tuple
    permutation: tuple
    weight: Poly
    sign: int

    @property
    def vertex_mask(self):
        m = 0
        for p in self.paths:
            m |= p.mask
        return m


@dataclass(frozen=True)
class SelfAvoidingFlow:
    ppath: PPath
    cycles: CycleCollection

    @property
    def weight(self):
        return self.ppath.weight * self.cycles.weight

    @property
    def sign(self):
        return self.ppath.sign * self.cycles.sign

    def vertices(self):
        out = [v for p in self.ppath.paths for v in p.vertices]
        out += [v for c in self.cycles.cycles for v in c.vertices]
        return out


def check_endpoints(g, A, B):
    A, B = list(A), list(B)
    if len(A) != len(B):
        raise ArgumentError(f"|A| = {len(A)} differs from |B| = {len(B)}")
    for name, s in (("sources", A), ("sinks", B)):
        if s != sorted(set(s)):
            raise ArgumentError(f"{name} must be strictly increasing: {s}")
        if any(not 1 <= v <= g.n_vertices for v in s):
            raise ArgumentError(f"{name} {s} outside 1..{g.n_vertices}")
    return tuple(A), tuple(B)


def _ppath_structures(g, A, B):
    """Yield ``(permutation, [(vertices, edges), ...], mask)`` for every
    self-avoiding p-path from A to B."""
    target_pos = {b: j for j, b in enumerate(B)}
    source_mask = 0
    for a in A:
        source_mask |= 1 << a
    p = len(A)

    def paths_from(a, forbidden):
        if a in target_pos:
            yield target_pos[a], (a,), (), 1 << a
            return
        verts, edges = [a], []

        def extend(v, mask):
            for idx, w in g.out_edges(v):
                bit = 1 << w
                if mask & bit or forbidden & bit:
                    continue
                if w in target_pos:
                    yield target_pos[w], tuple(verts) + (w,), tuple(edges) + (idx,), mask | bit
                else:
                    verts.append(w)
                    edges.append(idx)
                    yield from extend(w, mask | bit)
                    verts.pop()
                    edges.pop()

        yield from extend(a, 1 << a)

    def rec(i, used, sigma, chosen):
        if i == p:
            yield tuple(sigma), list(chosen), used
            return
        a = A[i]
        forbidden = used | (source_mask & ~(1 << a))
        for j, verts, edges, mask in paths_from(a, forbidden):
            if j in sigma:
                continue
            sigma.append(j)
            chosen.append((verts, edges))
            yield from rec(i + 1, used | mask, sigma, chosen)
            sigma.pop()
            chosen.pop()

    yield from rec(0, 0, [], [])


def enum_ppaths(g, A, B):
    A, B = check_endpoints(g, A, B)
    out = []
    for sigma, chosen, _ in _ppath_structures(g, A, B):
        paths = tuple(Path(v, e) for v, e in chosen)
        w = Poly(1)
        for pth in paths:
            w = w * _weight(g, pth.edges)
        out.append(PPath(A, B, paths, sigma, w, permutation_sign(sigma)))
    return out


def enum_self_avoiding_flows(g, A, B):
    """Every pair (p-path A -> B, cycle collection) with all parts vertex-disjoint."""
    out = []
    for pp in enum_ppaths(g, A, B):
        for ix in _collection_indices(g, pp.vertex_mask):
            out.append(SelfAvoidingFlow(pp, _make_collection(g, ix)))
    return out


def flow_terms(g, A, B):
    """Compact flow list: ``(sign, edge indices)`` per self-avoiding flow."""
    A, B = check_endpoints(g, A, B)
    cycles = enumerate_cycles(g)
    out = []
    for sigma, chosen, mask in _ppath_structures(g, A, B):
        sign = permutation_sign(sigma)
        path_edges = tuple(e for _, edges in chosen for e in edges)
        for ix in _collection_indices(g, mask):
            edges = path_edges + tuple(e for i in ix for e in cycles[i].edges)
            out.append((-sign if len(ix) % 2 else sign, edges))
    return out


def flow_sum_at(terms, edge_values):
    total = 0
    for sign, edges in terms:
        t = sign
        for e in edges:
            t = t * edge_values[e]
        total += t
    return total


def lgv_rhs(g, A, B):
    """``(sum over flows of sign * weight, cycle partition function)``."""
    num = Poly()
    for sign, edges in flow_terms(g, A, B):
        w = _weight(g, edges)
        num = num + w if sign > 0 else num - w
    return num, cycle_partition_function(g)


def path_matrix_at(g, assignment):
    """``(I - A)^-1`` at a rational point; raises on a singular point."""
    values = [e.weight.eval(assignment) for e in g.edges]
    adj = adjacency_at(g, values)
    n = g.n_vertices
    ident = identity_rational(n)
    return matrix_inverse_rational([[ident[i][j] - adj[i][j] for j in range(n)] for i in range(n)])


def lgv_lhs_eval(g, A, B, assignment):
    """``det`` of the rows-A, columns-B minor of the path matrix at a point."""
    A, B = check_endpoints(g, A, B)
    m = path_matrix_at(g, assignment)
    return det_rational(submatrix(m, [a - 1 for a in A], [b - 1 for b in B]))


# -- randomized identity check ------------------------------------------------


def random_rational(rng):
    return mpq(rng.choice(SAMPLE_NUMERATORS), SAMPLE_DENOMINATOR)


def sample_point(variables, rng):
    return {v: random_rational(rng) for v in variables}


def sample_nonsingular(variables, rng, is_singular):
    for _ in range(MAX_RESAMPLES):
        point = sample_point(variables, rng)
        if not is_singular(point):
            return point
    raise SingularMatrixError(f"no non-singular point found in {MAX_RESAMPLES} samples")


@dataclass
class PointCheck:
    point: dict
    lhs: Fraction
    numerator: Fraction
    denominator: Fraction
    passed: bool

    def key(self):
        """Hashable verdict record used to compare checkers point by point."""
        return (tuple(sorted((k, str(v)) for k, v in self.point.items())), self.passed)

    def to_json(self):
        return {
            "point": {k: str(v) for k, v in self.point.items()},
            "lhs": str(self.lhs),
            "numerator": str(self.numerator),
            "denominator": str(self.denominator),
            "passed": self.passed,
        }


@dataclass
class IdentityReport:
    name: str
    sources: tuple
    sinks: tuple
    checks: list = field(default_factory=list)
    numerator: Poly = None
    denominator: Poly = None

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def verdicts(self):
        return [c.key() for c in self.checks]

    def to_json(self):
        out = {
            "name": self.name,
            "sources": list(self.sources),
            "sinks": list(self.sinks),
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }
        if self.numerator is not None:
            out["numerator"] = str(self.numerator)
            out["denominator"] = str(self.denominator)
        return out


def _singular_at(g):
    def test(point):
        try:
            path_matrix_at(g, point)
        except SingularMatrixError:
            return True
        return False

    return test


def lgv_check(g, A, B, trials=3, seed=0):
    """Compare ``numerator`` with ``det(M_AB) * denominator`` at seeded
    random rational points; failures are reported, not raised."""
    A, B = check_endpoints(g, A, B)
    num, den = lgv_rhs(g, A, B)
    rng = random.Random(seed)
    report = IdentityReport("lgv", A, B, numerator=num, denominator=den)
    singular = _singular_at(g)
    for _ in range(trials):
        point = sample_nonsingular(g.variables, rng, singular)
        lhs = lgv_lhs_eval(g, A, B, point)
        n_val, d_val = num.eval(point), den.eval(point)
        report.checks.append(PointCheck(point, lhs, n_val, d_val, n_val == lhs * d_val))
    return report


def lemma1_holds(g):
    n = g.n_vertices
    return cycle_partition_function(g) == det_poly(PolyMatrix.identity(n) - weighted_adjacency(g))
