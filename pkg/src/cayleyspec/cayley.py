"""Cayley color graphs: colors, adjacency matrices, block structure.

The graph of a color function alpha on a group G has adjacency
``A[i, j] = alpha(g_j * g_i^{-1})`` over a fixed element ordering, so row i
lists the out-edges of vertex i.  For split extensions the vertex order is
the transversal order ``h_a k^b -> a*m + b`` and the matrix splits into
m-by-m circulant-like blocks indexed by coset pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import ConfigError, InvalidAction
from .groups import (
    FiniteGroup,
    MetacyclicGroup,
    SplitExtensionGroup,
    Transversal,
    is_generating_set,
    left_transversal_ordering,
)

EDGE_LIST_HEADER = "# vertex v = h^(v div m) k^(v mod m)"


class ColorFunction:
    """A complex-valued function on a group; unlisted elements map to 0."""

    def __init__(self, group: FiniteGroup, values: Mapping):
        self.group = group
        vals = {}
        for g, v in values.items():
            if not group.contains(g):
                raise ConfigError(f"color assigns {g!r}, which is not in the group")
            c = complex(v)
            if c != 0:
                vals[g] = c
        self._values = vals
        self._is_class_function: Optional[bool] = None
        self._class_witness = None

    @classmethod
    def from_set(cls, group: FiniteGroup, subset: Iterable) -> "ColorFunction":
        return cls(group, {g: 1.0 for g in subset})

    def __call__(self, g) -> complex:
        return self._values.get(g, 0j)

    def support(self) -> set:
        return set(self._values)

    def items(self):
        return self._values.items()

    @property
    def vanishes_at_identity(self) -> bool:
        return self.group.identity not in self._values

    @property
    def is_real(self) -> bool:
        return all(v.imag == 0 for v in self._values.values())

    @property
    def is_symmetric(self) -> bool:
        """alpha(g) == conj(alpha(g^{-1})) everywhere (Hermitian adjacency)."""
        for g, v in self._values.items():
            if self(self.group.inv(g)) != v.conjugate():
                return False
        return True

    @property
    def is_class_function(self) -> bool:
        if self._is_class_function is None:
            self._class_witness = self._find_class_witness()
            self._is_class_function = self._class_witness is None
        return self._is_class_function

    def class_function_witness(self):
        """None, or (g, x, xgx^{-1}, alpha(g), alpha(xgx^{-1})) breaking constancy."""
        self.is_class_function
        return self._class_witness

    def _find_class_witness(self):
        group = self.group
        for cls in group.conjugacy_classes():
            base = self(cls.representative)
            for member in cls.members:
                if self(member) != base:
                    for x in group.elements():
                        if group.conjugate(cls.representative, x) == member:
                            return (cls.representative, x, member, base, self(member))
                    raise AssertionError("class member without conjugator")
        return None

    def as_vector(self, ordering: Sequence) -> np.ndarray:
        return np.array([self(g) for g in ordering], dtype=complex)

    def __repr__(self):
        return f"<ColorFunction on {self.group!r} with support {len(self._values)}>"


def color_from_set(group: FiniteGroup, subset: Iterable) -> ColorFunction:
    """Indicator color of a connection set."""
    return ColorFunction.from_set(group, subset)


@dataclass(frozen=True)
class ConnectionSet:
    """A connection set with its structural flags and failure witnesses."""

    elements: tuple
    inverse_closed: bool
    contains_identity: bool
    generates: bool
    closure_size: int
    conjugation_closed: bool
    witnesses: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.elements)


def classify_connection_set(group: FiniteGroup, subset: Iterable) -> ConnectionSet:
    members = sorted(set(subset), key=group.index)
    witnesses = {}
    inverse_closed = True
    member_set = set(members)
    for s in members:
        if group.inv(s) not in member_set:
            inverse_closed = False
            witnesses["inverse_closed"] = (s, group.inv(s))
            break
    conjugation_closed = True
    for s in members:
        if not conjugation_closed:
            break
        for x in group.elements():
            conj = group.conjugate(s, x)
            if conj not in member_set:
                conjugation_closed = False
                witnesses["conjugation_closed"] = (x, s, conj)
                break
    generates, closure_size = is_generating_set(group, members)
    return ConnectionSet(
        elements=tuple(members),
        inverse_closed=inverse_closed,
        contains_identity=group.identity in member_set,
        generates=generates,
        closure_size=closure_size,
        conjugation_closed=conjugation_closed,
        witnesses=witnesses,
    )


@dataclass(frozen=True)
class AdjacencyMatrix:
    """Dense adjacency of a Cayley color graph over a fixed element order."""

    matrix: np.ndarray
    ordering: tuple

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def is_hermitian(self) -> bool:
        return bool(np.array_equal(self.matrix, self.matrix.conj().T))


def adjacency_matrix(group: FiniteGroup, color: ColorFunction,
                     ordering: Optional[Sequence] = None) -> AdjacencyMatrix:
    """A[i, j] = alpha(g_j * g_i^{-1})."""
    elems = list(ordering) if ordering is not None else group.elements()
    n = len(elems)
    out = np.zeros((n, n), dtype=complex)
    inverses = [group.inv(g) for g in elems]
    for i in range(n):
        gi_inv = inverses[i]
        row = out[i]
        for j in range(n):
            value = color(group.mul(elems[j], gi_inv))
            if value != 0:
                row[j] = value
    out.flags.writeable = False
    return AdjacencyMatrix(matrix=out, ordering=tuple(elems))


@dataclass(frozen=True)
class BlockDecomposition:
    """The l x l grid of K-graph blocks of a split-extension color graph.

    Block (i, j) is the adjacency of the K-graph of ``beta_ij``, where
    ``beta_ij(k) = alpha(h_j * k * h_i^{-1})``.
    """

    group: SplitExtensionGroup
    transversal: Transversal
    blocks: tuple
    beta_values: tuple

    @property
    def l(self) -> int:
        return self.group.l

    @property
    def m(self) -> int:
        return self.group.m

    def beta(self, i: int, j: int) -> dict:
        """beta_ij as a map from K exponents to colors (zeros omitted)."""
        return {
            c: v for c, v in enumerate(self.beta_values[i][j]) if v != 0
        }

    def first_row_beta(self, t: int) -> dict:
        """beta_{0, t}; when invariance holds every beta_ij with
        h_j h_i^{-1} = h_t equals this one."""
        return self.beta(0, t)

    def assemble(self) -> np.ndarray:
        m = self.m
        n = self.group.order
        out = np.zeros((n, n), dtype=complex)
        for i in range(self.l):
            for j in range(self.l):
                out[i * m:(i + 1) * m, j * m:(j + 1) * m] = self.blocks[i][j]
        return out


def beta_blocks(group: FiniteGroup, color: ColorFunction) -> BlockDecomposition:
    """Decompose the color graph of a split extension into K-blocks."""
    if not isinstance(group, SplitExtensionGroup):
        raise ValueError(f"group kind {group.kind!r} has no block decomposition")
    transversal = left_transversal_ordering(group)
    l, m = group.l, group.m
    beta_values = []
    blocks = []
    for i in range(l):
        hi_inv = group.inv((i, 0))
        beta_row = []
        block_row = []
        for j in range(l):
            values = [
                color(group.mul(group.mul((j, 0), (0, c)), hi_inv))
                for c in range(m)
            ]
            block = np.zeros((m, m), dtype=complex)
            for a in range(m):
                for b in range(m):
                    value = values[(b - a) % m]
                    if value != 0:
                        block[a, b] = value
            block.flags.writeable = False
            beta_row.append(tuple(values))
            block_row.append(block)
        beta_values.append(tuple(beta_row))
        blocks.append(tuple(block_row))
    return BlockDecomposition(
        group=group,
        transversal=transversal,
        blocks=tuple(blocks),
        beta_values=tuple(beta_values),
    )


def layers_from_set(group: SplitExtensionGroup, subset: Iterable) -> list:
    """Split a connection set into per-coset exponent layers S_0, ..., S_{l-1}."""
    if not isinstance(group, SplitExtensionGroup):
        raise ValueError(f"group kind {group.kind!r} has no layer structure")
    layers = [[] for _ in range(group.l)]
    for g in subset:
        a, b = g
        layers[a].append(b)
    return [sorted(layer) for layer in layers]


def nonnormal_family(m: int, l: int, r: int):
    """The non-normal family: S = (K minus e) + {h, h^{-1}} on C_m x| C_l.

    Each coset layer of S is closed under conjugation by h, yet for m > 2
    the set itself is not closed under full conjugation, so the graph is a
    non-normal Cayley graph whose spectrum the layer formula still covers.
    Requires 1 < r < m.
    """
    if not 1 < r < m:
        raise InvalidAction(f"family needs 1 < r < m, got r={r}, m={m}")
    group = MetacyclicGroup(m, l, r)
    subset = {(0, b) for b in range(1, m)}
    subset.add((1 % l, 0))
    subset.add(((l - 1) % l, 0))
    return group, classify_connection_set(group, subset)


def export_edge_list(adjacency: AdjacencyMatrix, path) -> None:
    """Write nonzero entries as ``i j re im`` lines after a header comment."""
    lines = [EDGE_LIST_HEADER]
    matrix = adjacency.matrix
    n = adjacency.n
    for i in range(n):
        for j in range(n):
            value = matrix[i, j]
            if value != 0:
                lines.append(f"{i} {j} {value.real:.15g} {value.imag:.15g}")
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


def read_edge_list(path, n: int) -> np.ndarray:
    """Rebuild a dense matrix from an exported edge list (ingest helper)."""
    out = np.zeros((n, n), dtype=complex)
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 4:
                raise ConfigError(f"{path}:{lineno}: expected 'i j re im', got {raw!r}")
            try:
                i, j = int(parts[0]), int(parts[1])
                value = complex(float(parts[2]), float(parts[3]))
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from None
            if not (0 <= i < n and 0 <= j < n):
                raise ConfigError(f"{path}:{lineno}: vertex out of range for n={n}")
            out[i, j] = value
    return out
