"""Solutions of x^2 + y^2 + z^2 = 3xyz: Vieta moves, descent, the tree, counting, mod-p graphs."""

from __future__ import annotations

import csv
from collections import deque
from dataclasses import dataclass, field
from itertools import permutations
from math import log
from typing import Iterable, List, NamedTuple, Sequence, TextIO, Tuple, Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .cf import QuadraticSurd

ZAGIER_C = 0.180717104711507

Triple = Tuple[int, int, int]


def is_markov_triple(t: Sequence[int]) -> bool:
    x, y, z = (int(v) for v in t)
    return min(x, y, z) > 0 and x * x + y * y + z * z == 3 * x * y * z


@dataclass(frozen=True, order=True)
class MarkovTriple:
    """Sorted positive solution ``x <= y <= z``; validated on construction."""

    x: int
    y: int
    z: int

    def __post_init__(self):
        x, y, z = int(self.x), int(self.y), int(self.z)
        if not x <= y <= z:
            raise ValueError(f"triple ({x},{y},{z}) is not sorted; use MarkovTriple.of")
        if not is_markov_triple((x, y, z)):
            raise ValueError(f"({x},{y},{z}) does not solve x^2+y^2+z^2=3xyz")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)

    @classmethod
    def of(cls, *t: int) -> "MarkovTriple":
        if len(t) == 1:
            t = tuple(t[0])
        return cls(*sorted(t))

    def astuple(self) -> Triple:
        return (self.x, self.y, self.z)

    def children(self) -> Tuple["MarkovTriple", "MarkovTriple"]:
        x, y, z = self.astuple()
        return MarkovTriple.of(y, z, 3 * y * z - x), MarkovTriple.of(x, z, 3 * x * z - y)

    def __str__(self):
        return f"({self.x},{self.y},{self.z})"


ROOT = MarkovTriple(1, 1, 1)


def vieta(t: Sequence[int], coord: int) -> Triple:
    """Replace coordinate ``coord`` (1, 2 or 3) by three times the product of the others minus itself."""
    t = tuple(int(v) for v in t)
    if len(t) != 3 or not is_markov_triple(t):
        raise ValueError(f"{t} is not a solution of the Markov equation")
    if coord not in (1, 2, 3):
        raise ValueError("coord must be 1, 2 or 3")
    i = coord - 1
    a, b = (t[j] for j in range(3) if j != i)
    out = list(t)
    out[i] = 3 * a * b - t[i]
    return tuple(out)


Move = Union[Tuple[str, int], Tuple[str, Tuple[int, int, int]]]


@dataclass(frozen=True)
class DescentPath:
    """Moves taking ``source`` to (1,1,1).

    ``moves`` holds ``("vieta", coord)`` and ``("perm", sigma)`` entries, where
    ``sigma`` lists source positions: the new triple is ``(t[s0], t[s1], t[s2])``.
    ``triples`` records the triple after each move.
    """

    source: Triple
    moves: Tuple[Move, ...] = ()
    triples: Tuple[Triple, ...] = ()

    def __len__(self):
        return len(self.moves)

    @property
    def vieta_steps(self) -> int:
        return sum(1 for kind, _ in self.moves if kind == "vieta")

    def replay(self) -> Triple:
        t = self.source
        for kind, arg in self.moves:
            t = vieta(t, arg) if kind == "vieta" else tuple(t[i] for i in arg)
        return t


def descend(t: Union[MarkovTriple, Sequence[int]]) -> DescentPath:
    """Walk down the tree: flip the largest coordinate, then re-sort."""
    cur = t.astuple() if isinstance(t, MarkovTriple) else tuple(int(v) for v in t)
    if not is_markov_triple(cur):
        raise ValueError(f"{cur} is not a solution of the Markov equation")
    source = cur
    moves: List[Move] = []
    seen: List[Triple] = []
    order = tuple(sorted(range(3), key=lambda i: cur[i]))
    if order != (0, 1, 2):
        cur = tuple(cur[i] for i in order)
        moves.append(("perm", order))
        seen.append(cur)
    while cur != (1, 1, 1):
        top = cur[2]
        cur = vieta(cur, 3)
        if max(cur) >= top:
            raise AssertionError(f"descent did not decrease the maximum at {seen[-1] if seen else source}")
        moves.append(("vieta", 3))
        seen.append(cur)
        order = tuple(sorted(range(3), key=lambda i: cur[i]))
        if order != (0, 1, 2):
            cur = tuple(cur[i] for i in order)
            moves.append(("perm", order))
            seen.append(cur)
    return DescentPath(source, tuple(moves), tuple(seen))


def enumerate_triples(bound: int) -> List[MarkovTriple]:
    """All sorted triples with ``z <= bound``, by breadth-first search of the tree."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    found = {ROOT}
    queue = deque([ROOT])
    while queue:
        t = queue.popleft()
        for c in t.children():
            if c.z <= bound and c not in found:
                found.add(c)
                queue.append(c)
    return sorted(found, key=lambda t: (t.z, t.y, t.x))


def markov_numbers(bound: int) -> List[int]:
    return sorted({t.z for t in enumerate_triples(bound)})


def spectrum_points(n: int) -> List[QuadraticSurd]:
    """``sqrt(9 - 4/z^2) = sqrt(9z^2 - 4)/z`` for the first ``n`` Markov numbers."""
    if n < 1:
        raise ValueError("n must be >= 1")
    bound = 2
    while True:
        zs = markov_numbers(bound)
        if len(zs) >= n:
            break
        bound *= 10
    return [QuadraticSurd(0, 1, 9 * z * z - 4, z) for z in zs[:n]]


class ZagierCount(NamedTuple):
    count: int
    reference: float

    @property
    def ratio(self) -> float:
        return self.count / self.reference


def zagier_count(x) -> ZagierCount:
    """Number of Markov numbers ``<= x`` next to the asymptotic ``c (log 3x)^2``."""
    if x < 1:
        raise ValueError("x must be >= 1")
    count = len(markov_numbers(int(x)))
    return ZagierCount(count, ZAGIER_C * log(3 * x) ** 2)


class FrobeniusReport(NamedTuple):
    bound: int
    triples: int
    markov_numbers: int
    collisions: Tuple[Tuple[int, Tuple[MarkovTriple, ...]], ...]

    @property
    def unique(self) -> bool:
        return not self.collisions


def frobenius_report(bound: int) -> FrobeniusReport:
    """Check whether each Markov number up to ``bound`` is the largest entry of a single triple."""
    by_z = {}
    ts = enumerate_triples(bound)
    for t in ts:
        by_z.setdefault(t.z, []).append(t)
    coll = tuple((z, tuple(v)) for z, v in sorted(by_z.items()) if len(v) > 1)
    return FrobeniusReport(bound, len(ts), len(by_z), coll)


def fibonacci(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def fibonacci_triple(m: int) -> Triple:
    """``(1, F_{2m-1}, F_{2m+1})``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return (1, fibonacci(2 * m - 1), fibonacci(2 * m + 1))


# -- graphs mod p ------------------------------------------------------------

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass
class ModPGraph:
    p: int
    vertices: np.ndarray            # (n, 3) int64, lexicographic
    edges: np.ndarray               # (m, 2) vertex indices, each unordered pair once
    labels: np.ndarray              # component label per vertex
    component_sizes: List[int] = field(default_factory=list)   # descending

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_components(self) -> int:
        return len(self.component_sizes)

    @property
    def largest(self) -> int:
        return self.component_sizes[0] if self.component_sizes else 0

    @property
    def connected(self) -> bool:
        return self.num_components == 1


def _solutions_mod_p(p: int) -> np.ndarray:
    r = np.arange(p, dtype=np.int64)
    x, y, z = np.meshgrid(r, r, r, indexing="ij")
    ok = (x * x + y * y + z * z - 3 * x * y * z) % p == 0
    ok[0, 0, 0] = False
    return np.argwhere(ok).astype(np.int64)


def vieta_mod_p(v: np.ndarray, coord: int, p: int) -> np.ndarray:
    """Vectorized Vieta involution on rows of ``v`` modulo ``p``."""
    out = v.copy()
    i = coord - 1
    a, b = [v[:, j] for j in range(3) if j != i]
    out[:, i] = (3 * a * b - v[:, i]) % p
    return out


def mod_p_graph(p: int) -> ModPGraph:
    """Nonzero solutions over F_p with Vieta and permutation edges, and their components."""
    if p < 3 or not is_prime(p):
        raise ValueError(f"p must be a prime >= 3, got {p}")
    verts = _solutions_mod_p(p)
    code = lambda v: (v[:, 0] * p + v[:, 1]) * p + v[:, 2]
    index = np.full(p ** 3, -1, dtype=np.int64)
    index[code(verts)] = np.arange(len(verts))
    targets = [vieta_mod_p(verts, c, p) for c in (1, 2, 3)]
    targets += [verts[:, list(s)] for s in permutations(range(3)) if s != (0, 1, 2)]
    src, dst = [], []
    n = len(verts)
    for t in targets:
        j = index[code(t)]
        if (j < 0).any():
            raise AssertionError("move left the vertex set")
        src.append(np.arange(n))
        dst.append(j)
    src, dst = np.concatenate(src), np.concatenate(dst)
    keep = src < dst
    pairs = np.unique(np.stack([src[keep], dst[keep]], axis=1), axis=0)
    adj = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    ncomp, labels = connected_components(adj, directed=False)
    sizes = sorted(np.bincount(labels, minlength=ncomp).tolist(), reverse=True)
    return ModPGraph(p, verts, pairs, labels, sizes)


# -- csv ---------------------------------------------------------------------

def write_triples_csv(triples: Iterable[MarkovTriple], fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["x", "y", "z"])
    for t in triples:
        w.writerow(t.astuple())


def read_triples_csv(fh: TextIO) -> List[MarkovTriple]:
    rows = csv.reader(fh)
    header = next(rows)
    if [h.strip() for h in header] != ["x", "y", "z"]:
        raise ValueError("expected header x,y,z")
    return [MarkovTriple(*map(int, r)) for r in rows if r]


def write_modp_csv(graphs: Iterable[ModPGraph], fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["p", "num_vertices", "num_components", "largest"])
    for g in graphs:
        w.writerow([g.p, g.num_vertices, g.num_components, g.largest])
