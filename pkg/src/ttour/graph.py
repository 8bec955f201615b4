"""Multigraph instances plus the cut and connectivity helpers built on them.

Vertices are kept in sorted identifier order, so vertex index 0 is the
smallest identifier and serves as the designated root for cut
canonicalisation. Edges are addressed by position (edge index) internally
and by their string id at the file/CLI boundary; parallel edges are distinct.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import kernels

EdgeSet = frozenset  # of edge indices
EdgeVector = list  # list[Fraction] indexed by edge index


class InstanceError(ValueError):
    """Malformed or infeasible instance data."""


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    cost: Fraction


def parse_rational(text, what: str = "value") -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise InstanceError(f"{what}: expected a rational string like '3/2', got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InstanceError(f"{what}: cannot parse {text!r} as a rational") from exc


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


class Instance:
    """A connected multigraph with nonnegative rational costs and terminals T."""

    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge | tuple],
                 terminals: Iterable[str]):
        verts = list(vertices)
        if not verts:
            raise InstanceError("vertices: must be nonempty")
        if len(set(verts)) != len(verts):
            raise InstanceError("vertices: duplicate identifier")
        self.vertices: tuple[str, ...] = tuple(sorted(verts))
        self.index = {v: i for i, v in enumerate(self.vertices)}

        parsed: list[Edge] = []
        seen: set[str] = set()
        for raw in edges:
            e = raw if isinstance(raw, Edge) else Edge(raw[0], raw[1], raw[2], Fraction(raw[3]))
            if e.id in seen:
                raise InstanceError(f"edges: duplicate edge id {e.id!r}")
            seen.add(e.id)
            if e.u not in self.index or e.v not in self.index:
                raise InstanceError(f"edges[{e.id}]: unknown endpoint")
            if e.u == e.v:
                raise InstanceError(f"edges[{e.id}]: self-loops are not allowed")
            if e.cost < 0:
                raise InstanceError(f"edges[{e.id}].cost: must be nonnegative")
            parsed.append(e)
        self.edges: tuple[Edge, ...] = tuple(parsed)
        self.edge_pos = {e.id: k for k, e in enumerate(self.edges)}
        self.us = [self.index[e.u] for e in self.edges]
        self.vs = [self.index[e.v] for e in self.edges]
        self.costs: list[Fraction] = [e.cost for e in self.edges]

        terms = list(terminals)
        unknown = [t for t in terms if t not in self.index]
        if unknown:
            raise InstanceError(f"T: unknown vertex {unknown[0]!r}")
        if len(set(terms)) != len(terms):
            raise InstanceError("T: duplicate vertex")
        if len(terms) % 2:
            raise InstanceError("T: must have even cardinality")
        self.terminals = frozenset(terms)
        self.t_mask = self.mask_of(terms)
        self.incident: list[list[int]] = [[] for _ in self.vertices]
        for k, (a, b) in enumerate(zip(self.us, self.vs)):
            self.incident[a].append(k)
            self.incident[b].append(k)
        if not is_connected(self, range(self.m)):
            raise InstanceError("edges: graph is not connected")

    # -- sizes and lookups -------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def root(self) -> str:
        return self.vertices[0]

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def mask_of(self, vertices: Iterable[str]) -> int:
        mask = 0
        for v in vertices:
            if v not in self.index:
                raise InstanceError(f"unknown vertex {v!r}")
            mask |= 1 << self.index[v]
        return mask

    def side_of(self, mask: int) -> frozenset[str]:
        return frozenset(v for i, v in enumerate(self.vertices) if (mask >> i) & 1)

    def eidx(self, eid: str) -> int:
        try:
            return self.edge_pos[eid]
        except KeyError:
            raise InstanceError(f"unknown edge id {eid!r}") from None

    def edge_set(self, *ids: str) -> frozenset[int]:
        return frozenset(self.eidx(e) for e in ids)

    def multiset(self, *ids: str) -> Counter:
        return Counter(self.eidx(e) for e in ids)

    def ids(self, edges: Iterable[int]) -> list[str]:
        return sorted(self.edges[k].id for k in edges)

    def cost(self, edges: Iterable[int] | Mapping[int, int]) -> Fraction:
        """Total cost of an edge set or multiset under the instance costs."""
        return weigh(self.costs, edges)

    def vector(self, mapping: Mapping[str, Fraction]) -> EdgeVector:
        vec = [Fraction(0)] * self.m
        for eid, val in mapping.items():
            vec[self.eidx(eid)] = Fraction(val)
        return vec

    def vector_dict(self, vec: EdgeVector) -> dict[str, Fraction]:
        return {e.id: vec[k] for k, e in enumerate(self.edges)}

    # -- serialisation -----------------------------------------------------
    @classmethod
    def from_dict(cls, data: Mapping) -> Instance:
        if not isinstance(data, Mapping):
            raise InstanceError("instance: expected a JSON object")
        for key in ("vertices", "edges", "T"):
            if key not in data:
                raise InstanceError(f"{key}: missing field")
        if not isinstance(data["vertices"], list) or not all(isinstance(v, str) for v in data["vertices"]):
            raise InstanceError("vertices: expected a list of strings")
        if not isinstance(data["edges"], list):
            raise InstanceError("edges: expected a list")
        edges = []
        for k, raw in enumerate(data["edges"]):
            if not isinstance(raw, Mapping) or not {"id", "u", "v", "cost"} <= raw.keys():
                raise InstanceError(f"edges[{k}]: expected an object with id, u, v, cost")
            edges.append(Edge(str(raw["id"]), raw["u"], raw["v"],
                              parse_rational(raw["cost"], f"edges[{raw['id']}].cost")))
        if not isinstance(data["T"], list):
            raise InstanceError("T: expected a list of vertex identifiers")
        return cls(data["vertices"], edges, data["T"])

    @classmethod
    def load(cls, path: str | Path) -> Instance:
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise InstanceError(f"instance: invalid JSON ({exc})") from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"id": e.id, "u": e.u, "v": e.v, "cost": format_rational(e.cost)}
                      for e in self.edges],
            "T": sorted(self.terminals),
        }

    def __repr__(self) -> str:
        return f"Instance(n={self.n}, m={self.m}, T={sorted(self.terminals)})"


def weigh(weights: list[Fraction], edges) -> Fraction:
    """Sum of weights over an edge collection; mappings count multiplicity."""
    if isinstance(edges, Mapping):
        return sum((weights[k] * mult for k, mult in edges.items()), Fraction(0))
    return sum((weights[k] for k in edges), Fraction(0))


def dot(a: EdgeVector, b: EdgeVector) -> Fraction:
    return sum((p * q for p, q in zip(a, b)), Fraction(0))


def indicator(m: int, edges: Iterable[int]) -> EdgeVector:
    vec = [Fraction(0)] * m
    for k in edges:
        vec[k] += 1
    return vec


def _multiplicities(inst: Instance, F) -> Mapping[int, int]:
    counts = F if isinstance(F, Mapping) else Counter(F)
    for k, mult in counts.items():
        if not 0 <= k < inst.m:
            raise InstanceError(f"unknown edge index {k!r}")
        if mult < 0:
            raise InstanceError("edge multiplicities must be nonnegative")
    return counts


def odd_mask(inst: Instance, F) -> int:
    mask = 0
    for k, mult in _multiplicities(inst, F).items():
        if mult % 2:
            mask ^= (1 << inst.us[k]) ^ (1 << inst.vs[k])
    return mask


def odd_vertices(inst: Instance, F) -> frozenset[str]:
    """Vertices of odd degree in F, counting multiplicities."""
    return inst.side_of(odd_mask(inst, F))


@dataclass(frozen=True)
class Cut:
    """delta(U) stored by its canonical side (the side avoiding the root)."""

    mask: int
    side: frozenset[str] = field(compare=False)
    edges: frozenset[int] = field(compare=False)

    def __repr__(self) -> str:
        return f"Cut({sorted(self.side)})"


def crossing(inst: Instance, mask: int) -> frozenset[int]:
    return frozenset(k for k in range(inst.m)
                     if ((mask >> inst.us[k]) ^ (mask >> inst.vs[k])) & 1)


def cut_from_mask(inst: Instance, mask: int) -> Cut:
    if mask <= 0 or mask >= inst.full_mask:
        raise InstanceError("cut side must be a nonempty proper subset of V")
    if mask & 1:
        mask ^= inst.full_mask
    return Cut(mask, inst.side_of(mask), crossing(inst, mask))


def cut_edges(inst: Instance, U: Iterable[str]) -> Cut:
    return cut_from_mask(inst, inst.mask_of(U))


def canonical_masks(n: int) -> range:
    """Bitmasks of all canonical cut sides: even masks (root excluded), nonzero."""
    return range(2, 1 << n, 2)


def is_t_cut(inst: Instance, cut: Cut, target_mask: int | None = None) -> bool:
    """True iff the cut's side holds an odd number of targets (default T)."""
    target = inst.t_mask if target_mask is None else target_mask
    return bin(cut.mask & target).count("1") % 2 == 1


@dataclass(frozen=True)
class Partition:
    blocks: tuple[frozenset[str], ...]

    def __len__(self) -> int:
        return len(self.blocks)


def partition_from_masks(inst: Instance, masks: Iterable[int]) -> Partition:
    blocks = [inst.side_of(mk) for mk in masks]
    return Partition(tuple(sorted(blocks, key=lambda b: sorted(b))))


def partition_crossing(inst: Instance, partition: Partition) -> frozenset[int]:
    label = {}
    for b, block in enumerate(partition.blocks):
        for v in block:
            label[inst.index[v]] = b
    return frozenset(k for k in range(inst.m) if label[inst.us[k]] != label[inst.vs[k]])


def components(inst: Instance, F) -> Partition:
    uf = _UnionFind(inst.n)
    for k, mult in _multiplicities(inst, F).items():
        if mult:
            uf.union(inst.us[k], inst.vs[k])
    groups: dict[int, int] = {}
    for i in range(inst.n):
        groups[uf.find(i)] = groups.get(uf.find(i), 0) | (1 << i)
    return partition_from_masks(inst, groups.values())


def is_connected(inst: Instance, F) -> bool:
    uf = _UnionFind(inst.n)
    merged = 0
    for k, mult in _multiplicities(inst, F).items():
        if mult and uf.union(inst.us[k], inst.vs[k]):
            merged += 1
    return merged == inst.n - 1


def is_spanning_tree(inst: Instance, S: Iterable[int]) -> bool:
    S = list(S)
    return len(S) == inst.n - 1 and len(set(S)) == len(S) and is_connected(inst, S)


def scale(values: Iterable[Fraction]) -> tuple[list[int], int]:
    """Integers and a common denominator D with values[k] == ints[k] / D."""
    values = [Fraction(v) for v in values]
    denom = 1
    for v in values:
        denom = math.lcm(denom, v.denominator)
    return [v.numerator * (denom // v.denominator) for v in values], denom


def subset_loads(inst: Instance, x: EdgeVector) -> tuple[list[int], int]:
    """x(delta(U)) for every vertex bitmask U, as scaled integers and D."""
    ints, denom = scale(x)
    return kernels.subset_loads(inst.n, inst.us, inst.vs, ints), denom
