"""Dense undirected simple graphs, permutations and disagreement counting.

Adjacency is stored as bit-packed rows of the full symmetric matrix
(``numpy.packbits`` along each row), so that counting disagreements between
two graphs reduces to a row-wise XOR followed by a popcount.  Vertices are
0-based inside the library; the edge-list text format is 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import comb
from os import PathLike
from typing import Iterable

import numpy as np

__all__ = [
    "DimensionError",
    "EdgeListError",
    "Graph",
    "SeededPair",
    "check_permutation",
    "compose_seeded",
    "density",
    "disagreements",
    "identity",
    "invert",
    "read_edge_list",
    "read_permutation",
    "seed_split_disagreements",
    "write_edge_list",
    "write_permutation",
]


class DimensionError(ValueError):
    """Raised when graphs or permutations have incompatible sizes."""


class EdgeListError(ValueError):
    """Raised for malformed edge-list or permutation files."""


def _popcount(a: np.ndarray) -> int:
    return int(np.bitwise_count(a).sum(dtype=np.int64))


class Graph:
    """Immutable undirected simple graph on vertices ``0..n-1``.

    Build one with :meth:`from_edges`, :meth:`from_adjacency` or
    :meth:`from_condensed`; the constructor takes already-packed rows.
    """

    def __init__(self, n: int, bits: np.ndarray):
        if n < 1:
            raise ValueError("a graph needs at least one vertex")
        bits = np.ascontiguousarray(bits, dtype=np.uint8)
        if bits.shape != (n, (n + 7) // 8):
            raise DimensionError(f"packed rows have shape {bits.shape}, expected {(n, (n + 7) // 8)}")
        bits.setflags(write=False)
        self.n = n
        self._bits = bits

    # -- construction -----------------------------------------------------

    @classmethod
    def from_adjacency(cls, adj: np.ndarray) -> "Graph":
        adj = np.asarray(adj).astype(bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise DimensionError("adjacency must be square")
        if adj.diagonal().any():
            raise ValueError("self-loops are not allowed")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        return cls(adj.shape[0], np.packbits(adj, axis=1))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Graph from 0-based vertex pairs; duplicates and loops are errors."""
        adj = np.zeros((n, n), dtype=bool)
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
            if adj[i, j]:
                raise ValueError(f"duplicate edge ({i}, {j})")
            adj[i, j] = adj[j, i] = True
        return cls(n, np.packbits(adj, axis=1))

    @classmethod
    def from_condensed(cls, n: int, upper: np.ndarray) -> "Graph":
        """Graph from a boolean vector over pairs ``i<j`` in row-major order."""
        upper = np.asarray(upper, dtype=bool)
        if upper.shape != (comb(n, 2),):
            raise DimensionError(f"expected {comb(n, 2)} pair indicators, got {upper.shape}")
        adj = np.zeros((n, n), dtype=bool)
        iu = np.triu_indices(n, 1)
        adj[iu] = upper
        adj |= adj.T
        return cls(n, np.packbits(adj, axis=1))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, np.zeros((n, (n + 7) // 8), dtype=np.uint8))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.from_adjacency(~np.eye(n, dtype=bool))

    # -- views ------------------------------------------------------------

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Read-only dense boolean adjacency matrix."""
        adj = np.unpackbits(self._bits, axis=1, count=self.n).astype(bool)
        adj.setflags(write=False)
        return adj

    @cached_property
    def edge_count(self) -> int:
        return _popcount(self._bits) // 2

    def condensed(self) -> np.ndarray:
        return self.adjacency[np.triu_indices(self.n, 1)]

    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.adjacency, 1))
        return list(zip(i.tolist(), j.tolist()))

    def complement(self) -> "Graph":
        return Graph.from_adjacency(~self.adjacency & ~np.eye(self.n, dtype=bool))

    def permuted(self, phi: np.ndarray) -> "Graph":
        """Graph ``K`` with ``K[i, j] = self[phi[i], phi[j]]``."""
        phi = check_permutation(phi, self.n)
        return Graph(self.n, np.packbits(self.adjacency[np.ix_(phi, phi)], axis=1))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._bits, other._bits)

    def __hash__(self) -> int:
        return hash((self.n, self._bits.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count})"


# -- permutations -----------------------------------------------------------


def identity(n: int) -> np.ndarray:
    return np.arange(n, dtype=np.int64)


def check_permutation(phi, n: int | None = None) -> np.ndarray:
    """Validate a 0-based permutation and return it as an int64 array."""
    arr = np.asarray(phi)
    if arr.ndim != 1 or (arr.size and not np.issubdtype(arr.dtype, np.integer)):
        raise ValueError("a permutation is a 1-d integer array")
    arr = arr.astype(np.int64, copy=False)
    if n is not None and arr.size != n:
        raise DimensionError(f"permutation has length {arr.size}, expected {n}")
    seen = np.zeros(arr.size, dtype=bool)
    if arr.size and (arr.min() < 0 or arr.max() >= arr.size):
        raise ValueError("permutation entries out of range")
    seen[arr] = True
    if not seen.all():
        raise ValueError("permutation is not a bijection")
    return arr


def invert(phi: np.ndarray) -> np.ndarray:
    phi = check_permutation(phi)
    inv = np.empty_like(phi)
    inv[phi] = np.arange(phi.size)
    return inv


# -- disagreements ----------------------------------------------------------


def density(g: Graph) -> float:
    """Edge count divided by ``C(n, 2)``."""
    if g.n < 2:
        raise ValueError("density needs n >= 2")
    return g.edge_count / comb(g.n, 2)


def disagreements(g: Graph, h: Graph, phi=None) -> int:
    """Number of vertex pairs adjacent in exactly one of ``g`` and ``h∘phi``.

    ``phi`` maps vertex ``i`` of ``g`` to vertex ``phi[i]`` of ``h``; ``None``
    means the identity, which runs directly on the packed rows.
    """
    if g.n != h.n:
        raise DimensionError(f"graphs have {g.n} and {h.n} vertices")
    if g.n < 2:
        raise ValueError("disagreements need n >= 2")
    if phi is None:
        hb = h.bits
    else:
        phi = check_permutation(phi, g.n)
        hb = np.packbits(h.adjacency[np.ix_(phi, phi)], axis=1)
    # each unordered pair appears twice in the symmetric rows
    return _popcount(np.bitwise_xor(g.bits, hb)) // 2


# -- seeded pairs -----------------------------------------------------------


@dataclass(frozen=True)
class SeededPair:
    """Two graphs on the same vertex set whose first ``s`` vertices are seeds."""

    g: Graph
    h: Graph
    s: int

    def __post_init__(self):
        if self.g.n != self.h.n:
            raise DimensionError(f"graphs have {self.g.n} and {self.h.n} vertices")
        if not 0 <= self.s <= self.g.n:
            raise ValueError(f"seed count {self.s} outside [0, {self.g.n}]")

    @property
    def n(self) -> int:
        return self.g.n

    @property
    def m(self) -> int:
        return self.g.n - self.s

    def blocks(self, dtype=np.int64):
        """Seed/ambiguous blocks ``(A11, A12, A21, A22), (B11, B12, B21, B22)``."""
        s = self.s
        out = []
        for adj in (self.g.adjacency, self.h.adjacency):
            a = adj.astype(dtype)
            out.append((a[:s, :s], a[:s, s:], a[s:, :s], a[s:, s:]))
        return tuple(out)


def compose_seeded(s: int, phi_amb) -> np.ndarray:
    """Extend a permutation of the ambiguous block by the identity on seeds."""
    phi_amb = check_permutation(phi_amb)
    return np.concatenate([np.arange(s, dtype=np.int64), phi_amb + s])


def seed_split_disagreements(pair: SeededPair, phi_amb=None) -> tuple[int, int, int]:
    """Disagreements split into seed-seed, seed-ambiguous and ambiguous-ambiguous."""
    s, m = pair.s, pair.m
    phi_amb = identity(m) if phi_amb is None else check_permutation(phi_amb, m)
    a = pair.g.adjacency
    b = pair.h.adjacency
    full = compose_seeded(s, phi_amb)
    bp = b[np.ix_(full, full)]
    diff = a ^ bp
    d_ss = int(np.triu(diff[:s, :s], 1).sum())
    d_sa = int(diff[:s, s:].sum())
    d_aa = int(np.triu(diff[s:, s:], 1).sum())
    return d_ss, d_sa, d_aa


# -- text formats -----------------------------------------------------------


def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_edge_list(text: str) -> Graph:
    lines = _data_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise EdgeListError("empty edge list") from None
    parts = header.split()
    if len(parts) != 2 or parts[0] != "n":
        raise EdgeListError(f"line {lineno}: expected header 'n <N>'")
    try:
        n = int(parts[1])
    except ValueError:
        raise EdgeListError(f"line {lineno}: bad vertex count {parts[1]!r}") from None
    if n < 1:
        raise EdgeListError(f"line {lineno}: vertex count must be positive")
    adj = np.zeros((n, n), dtype=bool)
    for lineno, line in lines:
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListError(f"line {lineno}: expected 'i j'")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(f"line {lineno}: non-integer vertex") from None
        if i == j:
            raise EdgeListError(f"line {lineno}: self-loop at {i}")
        if i > j:
            raise EdgeListError(f"line {lineno}: pairs must be written with i < j")
        if i < 1 or j > n:
            raise EdgeListError(f"line {lineno}: vertex out of range 1..{n}")
        if adj[i - 1, j - 1]:
            raise EdgeListError(f"line {lineno}: duplicate edge {i} {j}")
        adj[i - 1, j - 1] = adj[j - 1, i - 1] = True
    return Graph(n, np.packbits(adj, axis=1))


def format_edge_list(g: Graph) -> str:
    rows = [f"n {g.n}"]
    rows.extend(f"{i + 1} {j + 1}" for i, j in g.edges())
    return "\n".join(rows) + "\n"


def read_edge_list(path: str | PathLike) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def write_edge_list(g: Graph, path: str | PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_edge_list(g))


def read_permutation(path: str | PathLike, n: int | None = None) -> np.ndarray:
    """Read one 1-based image per line; returns a 0-based permutation."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    values = []
    for lineno, line in _data_lines(text):
        try:
            values.append(int(line) - 1)
        except ValueError:
            raise EdgeListError(f"line {lineno}: expected one integer") from None
    try:
        return check_permutation(np.array(values, dtype=np.int64), n)
    except ValueError as exc:
        raise EdgeListError(f"{path}: {exc}") from None


def write_permutation(phi, path: str | PathLike) -> None:
    phi = check_permutation(phi)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.writelines(f"{v + 1}\n" for v in phi.tolist())
