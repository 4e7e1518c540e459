"""Chained layered graphs and the transfer-matrix form of the LGV formula.

Layer ``m`` (1-based) vertex ``i`` becomes flat vertex ``(m - 1) * N + i``.
Consecutive layers are joined by unit edges ``(i, m) -> (i, m + 1)``.

With ``A_m`` the adjacency of layer ``m`` (entry ``(i, j)`` = weight i -> j)
and ``T_m = (1 - A_m)^-1``, the path-weight matrix from layer 1 to layer n is
the product ``T_1 T_2 ... T_n`` taken in layer order.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpq

from .errors import ArgumentError, ParseError, ShapeError, SingularMatrixError
from .graphs import (
    DirectedMultigraph,
    Edge,
    adjacency_at,
    flow_sum_at,
    flow_terms,
    sample_nonsingular,
)
from .linalg import det_rational, identity_rational, matmul_rational, matrix_inverse_rational, submatrix
from .poly import Poly, var_key

FORWARD = "forward"
REVERSED = "reversed"


class LayeredGraph:
    """``n`` layers, each a multigraph on the same ``N`` vertices.

    ``layers`` items are :class:`DirectedMultigraph` instances or edge lists
    ``[(i, j[, weight]), ...]``; a missing weight becomes the variable named
    after the flat endpoints, ``w_<flat i>_<flat j>_<k>``.
    """

    def __init__(self, N, layers):
        if not isinstance(N, int) or N < 1:
            raise ShapeError(f"layer size must be a positive integer, got {N!r}")
        if not layers:
            raise ShapeError("at least one layer is required")
        self.N = N
        built = []
        for m, layer in enumerate(layers, start=1):
            if isinstance(layer, DirectedMultigraph):
                if layer.n_vertices != N:
                    raise ShapeError(f"layer {m} has {layer.n_vertices} vertices, expected {N}")
                built.append(layer)
                continue
            off = (m - 1) * N
            seen = {}
            edges = []
            for e in layer:
                i, j, *rest = e
                w = rest[0] if rest else None
                if not (isinstance(i, int) and isinstance(j, int) and 1 <= i <= N and 1 <= j <= N):
                    raise ShapeError(f"layer {m} edge ({i}, {j}) outside 1..{N}")
                k = seen[(i, j)] = seen.get((i, j), 0) + 1
                if w is None:
                    w = Poly.var(f"w_{off + i}_{off + j}_{k}")
                edges.append((i, j, w))
            built.append(DirectedMultigraph(N, edges))
        self.layers = tuple(built)

    @property
    def n_layers(self):
        return len(self.layers)

    @property
    def variables(self):
        names = set()
        for layer in self.layers:
            names.update(layer.variables)
        return tuple(sorted(names, key=var_key))

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise ParseError(f"malformed layered-graph JSON: {exc}") from exc
        if not isinstance(data, dict) or "N" not in data or "layers" not in data:
            raise ParseError('layered-graph JSON needs "N" and "layers"')
        layers = []
        for layer in data["layers"]:
            try:
                edges = []
                for item in layer.get("edges", []):
                    w = item.get("weight")
                    if isinstance(w, float):
                        raise ParseError("floating-point weights are not accepted")
                    if isinstance(w, str):
                        w = Poly.parse(w)
                    edges.append((item["from"], item["to"], w))
            except (KeyError, AttributeError, TypeError) as exc:
                raise ParseError(f"bad layer entry {layer!r}") from exc
            layers.append(edges)
        return cls(data["N"], layers)

    def to_json(self):
        return {
            "N": self.N,
            "layers": [
                {"edges": [{"from": e.source, "to": e.target, "weight": str(e.weight)} for e in layer.edges]}
                for layer in self.layers
            ],
        }

    def __repr__(self):
        return f"LayeredGraph(N={self.N}, n={self.n_layers})"


@dataclass(frozen=True)
class ChainedGraph:
    graph: DirectedMultigraph
    N: int
    n_layers: int

    def flat(self, i, m):
        return (m - 1) * self.N + i

    def unflat(self, v):
        return ((v - 1) % self.N + 1, (v - 1) // self.N + 1)


def chain_graph(lg):
    """Disjoint union of the layers plus ``N(n-1)`` unit edges between them."""
    N, n = lg.N, lg.n_layers
    edges = []
    for m, layer in enumerate(lg.layers, start=1):
        off = (m - 1) * N
        edges += [Edge(off + e.source, off + e.target, e.weight) for e in layer.edges]
        if m < n:
            edges += [Edge(off + i, off + N + i, Poly(1)) for i in range(1, N + 1)]
    return ChainedGraph(DirectedMultigraph(N * n, edges), N, n)


def _layer_complement(layer, point):
    values = [e.weight.eval(point) for e in layer.edges]
    adj = adjacency_at(layer, values)
    ident = identity_rational(layer.n_vertices)
    return [[ident[i][j] - adj[i][j] for j in range(len(adj))] for i in range(len(adj))]


def transfer_product(inverses, order=FORWARD):
    """Multiply per-layer transfer matrices, ``T_1 ... T_n`` or ``T_n ... T_1``."""
    seq = list(inverses) if order == FORWARD else list(reversed(inverses))
    out = seq[0]
    for t in seq[1:]:
        out = matmul_rational(out, t)
    return out


@dataclass
class TransferPoint:
    point: dict
    flow_side: Fraction
    det_factor: Fraction
    minor: Fraction
    passed: bool

    def key(self):
        return (tuple(sorted((k, str(v)) for k, v in self.point.items())), self.passed)

    def to_json(self):
        return {
            "point": {k: str(v) for k, v in self.point.items()},
            "flow_side": str(self.flow_side),
            "det_factor": str(self.det_factor),
            "minor": str(self.minor),
            "passed": self.passed,
        }


@dataclass
class TransferReport:
    sources: tuple
    sinks: tuple
    order: str
    checks: list = field(default_factory=list)

    name = "transfer"

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def verdicts(self):
        return [c.key() for c in self.checks]

    def to_json(self):
        return {
            "name": self.name,
            "sources": list(self.sources),
            "sinks": list(self.sinks),
            "order": self.order,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }


class _PointCache:
    """Per-point transfer data shared by every (A, B) pair of one layered graph."""

    def __init__(self, lg, order):
        self.lg = lg
        self.order = order
        self.chained = chain_graph(lg)
        self.variables = lg.variables
        self._samples = {}
        self._pending = None

    def points(self, trials, seed):
        """Same draws as a fresh ``random.Random(seed)`` per pair would give."""
        key = (trials, seed)
        hit = self._samples.get(key)
        if hit is None:
            rng = random.Random(seed)
            hit = self._samples[key] = []
            for _ in range(trials):
                point = sample_nonsingular(self.variables, rng, self.singular)
                hit.append((point, self._pending))
        return hit

    def singular(self, point):
        try:
            self._pending = self.data(point)
        except SingularMatrixError:
            return True
        return False

    def data(self, point):
        comps = [_layer_complement(layer, point) for layer in self.lg.layers]
        factor = mpq(1)
        for c in comps:
            factor *= det_rational(c)
        if not factor:
            raise SingularMatrixError("a layer has det(1 - A_m) = 0 at this point")
        product = transfer_product([matrix_inverse_rational(c) for c in comps], self.order)
        values = [e.weight.eval(point) for e in self.chained.graph.edges]
        return factor, product, values


def _check_local(lg, A, B):
    A, B = list(A), list(B)
    if len(A) != len(B):
        raise ArgumentError(f"|A| = {len(A)} differs from |B| = {len(B)}")
    for name, s in (("sources", A), ("sinks", B)):
        if s != sorted(set(s)) or any(not 1 <= v <= lg.N for v in s):
            raise ArgumentError(f"{name} must be strictly increasing within 1..{lg.N}: {s}")
    return tuple(A), tuple(B)


def _check_pair(cache, A, B, trials, seed):
    lg, ch = cache.lg, cache.chained
    flat_a = [ch.flat(a, 1) for a in A]
    flat_b = [ch.flat(b, lg.n_layers) for b in B]
    terms = flow_terms(ch.graph, flat_a, flat_b)
    report = TransferReport(A, B, cache.order)
    rows, cols = [a - 1 for a in A], [b - 1 for b in B]
    for point, (factor, product, values) in cache.points(trials, seed):
        flow_side = flow_sum_at(terms, values)
        minor = det_rational(submatrix(product, rows, cols))
        report.checks.append(TransferPoint(point, flow_side, factor, minor, flow_side == factor * minor))
    return report


def theorem2_check(lg, A, B, trials=3, seed=0, order=FORWARD):
    """Signed flow sum in the chained graph versus
    ``prod det(1 - A_m) * det[T_1 ... T_n]_{A,B}`` at seeded rational points.

    ``A`` are layer-1 vertices, ``B`` layer-n vertices (local labels).  Points
    are drawn exactly as :func:`grasscomb.graphs.lgv_check` draws them, so a
    one-layer graph reproduces its verdicts."""
    A, B = _check_local(lg, A, B)
    return _check_pair(_PointCache(lg, order), A, B, trials, seed)


def theorem2_check_all(lg, pairs, trials=3, seed=0, order=FORWARD):
    """:func:`theorem2_check` for many (A, B) pairs, sharing per-point work."""
    cache = _PointCache(lg, order)
    out = []
    for A, B in pairs:
        A, B = _check_local(lg, A, B)
        out.append(_check_pair(cache, A, B, trials, seed))
    return out
