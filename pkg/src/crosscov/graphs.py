"""Mixed graphs with directed and bidirected edges, and m-separation.

Separation is decided by a reachability search over (vertex, arrived with an
arrowhead?) states.  A vertex is passed as a collider only if it is an
ancestor of the conditioning set, and as a non-collider only if it is not in
the conditioning set.  ``m_separated_by_paths`` enumerates simple paths
instead and is kept as an independent check.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import (
    GraphError,
    GraphTooLarge,
    NonDisjointSets,
    NotAncestral,
    UnknownVertex,
    VertexSetMismatch,
)

Vertex = Hashable
MAX_EXHAUSTIVE = 16
TAIL, HEAD = 0, 1


@dataclass(frozen=True)
class MixedGraph:
    """Immutable mixed graph; at most one edge per vertex pair.

    Bidirected edges are stored as pairs ordered by vertex position.
    ``latent`` is informational only.
    """

    vertices: tuple
    directed: frozenset = frozenset()
    bidirected: frozenset = frozenset()
    latent: frozenset = frozenset()
    _adj: dict = field(init=False, repr=False, compare=False)

    def __init__(self, vertices: Iterable, directed=(), bidirected=(), latent=()):
        verts = tuple(vertices)
        if len(set(verts)) != len(verts):
            raise GraphError("vertex labels must be unique")
        pos = {v: i for i, v in enumerate(verts)}

        def known(v):
            if v not in pos:
                raise UnknownVertex(f"unknown vertex {v!r}")
            return v

        seen = set()
        adj = {v: [] for v in verts}
        dir_edges, bi_edges = set(), set()
        for kind, edges in (("->", directed), ("<->", bidirected)):
            for edge in edges:
                x, y = (known(e) for e in edge)
                if x == y:
                    raise GraphError(f"self-loop at {x!r}")
                key = frozenset((x, y))
                if key in seen:
                    raise GraphError(f"more than one edge between {x!r} and {y!r}")
                seen.add(key)
                if kind == "->":
                    dir_edges.add((x, y))
                    adj[x].append((y, TAIL, HEAD))
                    adj[y].append((x, HEAD, TAIL))
                else:
                    x, y = sorted((x, y), key=pos.__getitem__)
                    bi_edges.add((x, y))
                    adj[x].append((y, HEAD, HEAD))
                    adj[y].append((x, HEAD, HEAD))
        for v in latent:
            known(v)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "directed", frozenset(dir_edges))
        object.__setattr__(self, "bidirected", frozenset(bi_edges))
        object.__setattr__(self, "latent", frozenset(latent))
        object.__setattr__(self, "_adj", adj)

    def __contains__(self, v) -> bool:
        return v in self._adj

    def edges_at(self, v):
        """``(neighbour, mark at v, mark at neighbour)`` triples; marks are TAIL or HEAD."""
        return self._adj[v]

    def parents(self, v) -> set:
        return {w for w, mv, _ in self._adj[v] if mv == HEAD and (w, v) in self.directed}

    def adjacent(self, x, y) -> bool:
        return any(w == y for w, _, _ in self._adj[x])

    def to_json(self) -> dict:
        pos = {v: i for i, v in enumerate(self.vertices)}
        order = lambda e: (pos[e[0]], pos[e[1]])  # noqa: E731
        return {
            "vertices": list(self.vertices),
            "directed": [list(e) for e in sorted(self.directed, key=order)],
            "bidirected": [list(e) for e in sorted(self.bidirected, key=order)],
            "latent": [v for v in self.vertices if v in self.latent],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "MixedGraph":
        try:
            return cls(doc["vertices"], doc.get("directed", ()), doc.get("bidirected", ()), doc.get("latent", ()))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, GraphError):
                raise
            raise GraphError(f"malformed graph document: {exc}") from None


def _require(g: MixedGraph, vs: Iterable) -> None:
    for v in vs:
        if v not in g:
            raise UnknownVertex(f"unknown vertex {v!r}")


def ancestors(g: MixedGraph, v) -> set:
    """``v`` together with every vertex that has a directed path into ``v``."""
    return ancestors_of_set(g, [v])


def ancestors_of_set(g: MixedGraph, vs: Iterable) -> set:
    vs = list(vs)
    _require(g, vs)
    seen = set(vs)
    stack = list(vs)
    while stack:
        w = stack.pop()
        for x in g.parents(w):
            if x not in seen:
                seen.add(x)
                stack.append(x)
    return seen


def has_directed_cycle(g: MixedGraph) -> bool:
    indeg = {v: 0 for v in g.vertices}
    children = {v: [] for v in g.vertices}
    for x, y in g.directed:
        indeg[y] += 1
        children[x].append(y)
    queue = deque(v for v, k in indeg.items() if k == 0)
    done = 0
    while queue:
        v = queue.popleft()
        done += 1
        for w in children[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return done < len(g.vertices)


def is_ancestral(g: MixedGraph) -> bool:
    if has_directed_cycle(g):
        return False
    for x, y in g.bidirected:
        if x in ancestors(g, y) or y in ancestors(g, x):
            return False
    return True


@dataclass(frozen=True)
class SeparationQuery:
    A: frozenset
    B: frozenset
    Z: frozenset = frozenset()

    def __post_init__(self):
        for name in ("A", "B", "Z"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if not self.A or not self.B:
            raise GraphError("A and B must be nonempty")
        if self.A & self.B or self.A & self.Z or self.B & self.Z:
            raise NonDisjointSets("A, B and Z must be pairwise disjoint")


def parse_query(text: str) -> SeparationQuery:
    """Parse ``"A1,A2 | B1 | Z1,Z2"``; an empty segment or ``∅`` is the empty set."""
    parts = text.split("|")
    if len(parts) == 2:
        parts.append("")
    if len(parts) != 3:
        raise GraphError(f"query must have the form 'A | B | Z', got {text!r}")
    sets = []
    for part in parts:
        names = [s.strip() for s in part.split(",")]
        sets.append(frozenset(s for s in names if s and s != "∅"))
    return SeparationQuery(*sets)


def m_reachable(g: MixedGraph, source, Z: Iterable = ()) -> set:
    """Vertices joined to ``source`` by an m-connecting path given ``Z``."""
    Z = set(Z)
    an_z = ancestors_of_set(g, Z) if Z else set()
    reached = set()
    seen = set()
    queue = deque()
    for w, _, mw in g.edges_at(source):
        state = (w, mw == HEAD)
        seen.add(state)
        queue.append(state)
    while queue:
        v, head_in = queue.popleft()
        reached.add(v)
        for w, mv, mw in g.edges_at(v):
            collider = head_in and mv == HEAD
            if (collider and v not in an_z) or (not collider and v in Z):
                continue
            state = (w, mw == HEAD)
            if state not in seen:
                seen.add(state)
                queue.append(state)
    reached.discard(source)
    return reached


def m_separated(g: MixedGraph, A, B=None, Z=()) -> bool:
    """Whether ``A`` and ``B`` are m-separated given ``Z``.

    ``A`` may also be a :class:`SeparationQuery`.
    """
    query = A if isinstance(A, SeparationQuery) else SeparationQuery(_as_set(A), _as_set(B), _as_set(Z))
    _require(g, query.A | query.B | query.Z)
    for a in query.A:
        if m_reachable(g, a, query.Z) & query.B:
            return False
    return True


def _as_set(x) -> frozenset:
    if x is None:
        return frozenset()
    if isinstance(x, str):
        return frozenset([x])
    return frozenset(x)


def _path_open(g: MixedGraph, path: Sequence, Z: set, an_z: set) -> bool:
    for i in range(1, len(path) - 1):
        prev, v, nxt = path[i - 1], path[i], path[i + 1]
        marks = {w: mv for w, mv, _ in g.edges_at(v)}
        collider = marks[prev] == HEAD and marks[nxt] == HEAD
        if collider and v not in an_z:
            return False
        if not collider and v in Z:
            return False
    return True


def m_connecting_paths(g: MixedGraph, a, b, Z: Iterable = ()):
    """Yield every simple path from ``a`` to ``b`` that m-connects given ``Z``."""
    Z = set(Z)
    an_z = ancestors_of_set(g, Z) if Z else set()
    path = [a]
    on_path = {a}

    def extend():
        v = path[-1]
        for w, _, _ in g.edges_at(v):
            if w in on_path:
                continue
            path.append(w)
            if w == b:
                if _path_open(g, path, Z, an_z):
                    yield list(path)
            else:
                on_path.add(w)
                yield from extend()
                on_path.discard(w)
            path.pop()

    yield from extend()


def m_separated_by_paths(g: MixedGraph, A, B, Z=()) -> bool:
    """Brute-force m-separation by simple path enumeration (exponential)."""
    query = SeparationQuery(_as_set(A), _as_set(B), _as_set(Z))
    _require(g, query.A | query.B | query.Z)
    for a in query.A:
        for b in query.B:
            if next(m_connecting_paths(g, a, b, query.Z), None) is not None:
                return False
    return True


def _subsets(items: Sequence):
    for k in range(len(items) + 1):
        yield from itertools.combinations(items, k)


def _check_size(n: int) -> None:
    if n > MAX_EXHAUSTIVE:
        raise GraphTooLarge(f"{n} vertices exceeds the exhaustive limit of {MAX_EXHAUSTIVE}")


def implied_separations(g: MixedGraph, over: Sequence | None = None) -> list[tuple]:
    """Every ``(a, b, Z)`` with ``a``, ``b`` m-separated given ``Z``.

    ``a`` precedes ``b`` in vertex order and ``Z`` ranges over all subsets of
    the remaining vertices.  With ``over`` only vertices in that collection
    are used for ``a``, ``b`` and ``Z``.  Ordered by ``|Z|``, then ``Z``, then
    the pair.
    """
    verts = list(g.vertices) if over is None else [v for v in g.vertices if v in set(over)]
    _require(g, verts)
    _check_size(len(verts))
    out = []
    for Z in _subsets(verts):
        zset = set(Z)
        rest = [v for v in verts if v not in zset]
        for i, a in enumerate(rest):
            reach = m_reachable(g, a, zset)
            for b in rest[i + 1 :]:
                if b not in reach:
                    out.append((a, b, frozenset(Z)))
    return out


def is_maximal(g: MixedGraph) -> bool:
    """Every non-adjacent pair is m-separated by some set of the other vertices."""
    if not is_ancestral(g):
        raise NotAncestral("maximality is only defined for ancestral graphs")
    _check_size(len(g.vertices))
    verts = list(g.vertices)
    for a, b in itertools.combinations(verts, 2):
        if g.adjacent(a, b):
            continue
        others = [v for v in verts if v not in (a, b)]
        if not any(b not in m_reachable(g, a, Z) for Z in _subsets(others)):
            return False
    return True


@dataclass(frozen=True)
class Equivalence:
    """``witness`` is the first separation holding in exactly one graph; ``holds_in`` is 1 or 2."""

    equivalent: bool
    witness: tuple | None = None
    holds_in: int | None = None

    def __bool__(self) -> bool:
        return self.equivalent


def _key(g: MixedGraph, verts: Sequence):
    pos = {v: i for i, v in enumerate(verts)}

    def key(t):
        a, b, Z = t
        a, b = sorted((a, b), key=pos.__getitem__)
        return (len(Z), sorted(pos[z] for z in Z), pos[a], pos[b])

    return key


def markov_equivalent(g1: MixedGraph, g2: MixedGraph, over: Sequence | None = None) -> Equivalence:
    """Compare the full sets of pairwise m-separations of two graphs.

    Both graphs must have the same vertex set unless ``over`` names a common
    subset, in which case only separations among those vertices are compared.
    """
    if over is None:
        if set(g1.vertices) != set(g2.vertices):
            raise VertexSetMismatch(
                f"vertex sets differ: {sorted(map(str, set(g1.vertices) ^ set(g2.vertices)))}"
            )
        over = list(g1.vertices)
    else:
        missing = [v for v in over if v not in g1 or v not in g2]
        if missing:
            raise VertexSetMismatch(f"vertices {missing} are not in both graphs")
    order = [v for v in g1.vertices if v in set(over)]
    _check_size(len(order))

    def canon(seps):
        pos = {v: i for i, v in enumerate(order)}
        return {(*sorted((a, b), key=pos.__getitem__), Z) for a, b, Z in seps}

    s1 = canon(implied_separations(g1, order))
    s2 = canon(implied_separations(g2, order))
    if s1 == s2:
        return Equivalence(True)
    witness = min(s1 ^ s2, key=_key(g1, order))
    return Equivalence(False, witness, 1 if witness in s1 else 2)


def rename_vertices(g: MixedGraph, mapping: dict) -> MixedGraph:
    r = lambda v: mapping.get(v, v)  # noqa: E731
    return MixedGraph(
        [r(v) for v in g.vertices],
        [(r(x), r(y)) for x, y in g.directed],
        [(r(x), r(y)) for x, y in g.bidirected],
        [r(v) for v in g.latent],
    )


def rename_separations(seps: Iterable[tuple], mapping: dict) -> list[tuple]:
    r = lambda v: mapping.get(v, v)  # noqa: E731
    return [(r(a), r(b), frozenset(r(z) for z in Z)) for a, b, Z in seps]


# --- two-block latent structures -------------------------------------------------

VARIANTS = ("a", "b", "c", "d", "e")
CONDITIONS = ("I", "II")


@dataclass(frozen=True)
class Figure4Spec:
    """One of the five two-block latent structures under error condition I or II.

    Condition I joins every within-block pair of observed variables by a
    bidirected edge (correlated errors); condition II has no such edges.
    """

    variant: str
    condition: str
    p: int
    q: int

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise GraphError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.condition not in CONDITIONS:
            raise GraphError(f"condition must be one of {CONDITIONS}, got {self.condition!r}")
        if int(self.p) < 1 or int(self.q) < 1:
            raise GraphError("p and q must be at least 1")


def figure4(spec: Figure4Spec | None = None, **kwargs) -> MixedGraph:
    """Build a two-block latent structure.

    (a) ``xi <-> omega``, ``xi -> X_i``, ``omega -> Y_j``; (b) as (a) with
    ``xi -> omega``; (c) ``X_i -> xi -> omega -> Y_j``; (d) ``eta -> X_i``,
    ``eta -> Y_j``; (e) ``X_i -> eta -> Y_j``.  Observed vertices come first
    in vertex order.
    """
    if spec is None:
        spec = Figure4Spec(**kwargs)
    xs = [f"X{i}" for i in range(1, spec.p + 1)]
    ys = [f"Y{j}" for j in range(1, spec.q + 1)]
    directed, bidirected = [], []
    if spec.variant in "abc":
        latents = ["xi", "omega"]
        if spec.variant == "a":
            bidirected.append(("xi", "omega"))
        else:
            directed.append(("xi", "omega"))
        if spec.variant == "c":
            directed += [(x, "xi") for x in xs]
        else:
            directed += [("xi", x) for x in xs]
        directed += [("omega", y) for y in ys]
    else:
        latents = ["eta"]
        if spec.variant == "d":
            directed += [("eta", x) for x in xs]
        else:
            directed += [(x, "eta") for x in xs]
        directed += [("eta", y) for y in ys]
    if spec.condition == "I":
        bidirected += list(itertools.combinations(xs, 2)) + list(itertools.combinations(ys, 2))
    return MixedGraph(xs + ys + latents, directed, bidirected, latents)


def random_mixed_graph(n: int, rng: np.random.Generator, p_directed: float = 0.3, p_bidirected: float = 0.2):
    """Random acyclic mixed graph: directed edges follow a random vertex order."""
    names = [f"v{i}" for i in range(n)]
    order = rng.permutation(n)
    directed, bidirected = [], []
    for i, j in itertools.combinations(range(n), 2):
        r = rng.random()
        x, y = names[order[i]], names[order[j]]
        if r < p_directed:
            directed.append((x, y))
        elif r < p_directed + p_bidirected:
            bidirected.append((x, y))
    return MixedGraph(names, directed, bidirected)
