"""Balls in the Cayley graph of PSL(2,Z) with respect to {r, u, ū}.

The graph is 3-regular.  :func:`build_ball` runs a breadth-first search
from the identity, discovering neighbours in the letter order r, u, ū, so
node order is deterministic.

Only the predecessor letter sets (``s_minus``) are needed to recover
geodesic suffixes, and those are exact for every node of the ball, since
the predecessors of a node of norm n have norm n - 1.  Successor sets
(``s_plus``) are known only for nodes of norm at most ``radius - 1``.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from .group import IDENTITY, LETTERS, GroupElement, Letter, generator, mul
from .words import Word, format_word

DEFAULT_MAX_NODES = 2_000_000


class ElementNotInBall(KeyError):
    pass


class BoundaryError(ValueError):
    """A query needs more of the graph than the ball contains."""


class ResourceLimitError(RuntimeError):
    pass


@dataclass(frozen=True)
class NodeRecord:
    norm: int
    s_minus: FrozenSet[Letter]
    s_plus: Optional[FrozenSet[Letter]]  # None on the boundary sphere


@dataclass(frozen=True)
class SuffixProfile:
    """The set of geodesic suffixes of length ``level`` (level 0: identity)."""

    level: int
    suffixes: FrozenSet[Word]

    def __str__(self):
        if not self.suffixes:
            return "{}"
        return "{" + ",".join(sorted(format_word(w) for w in self.suffixes)) + "}"


class Ball:
    """The elements of word norm at most ``radius``.

    Attributes
    ----------
    elements : tuple of GroupElement
        BFS order.
    nodes : dict
        GroupElement -> NodeRecord.
    neighbors : ndarray of shape (n, 3)
        Index of ``g·s`` for s in (r, u, ū), or -1 when outside the ball.
    """

    def __init__(self, radius, elements, norms, neighbors):
        self.radius = radius
        self.elements: Tuple[GroupElement, ...] = tuple(elements)
        self.index: Dict[GroupElement, int] = {g: i for i, g in enumerate(self.elements)}
        self.norms = np.asarray(norms, dtype=np.int64)
        self.neighbors = np.asarray(neighbors, dtype=np.int64).reshape(-1, 3)
        self.spheres = tuple(int(x) for x in np.bincount(self.norms, minlength=radius + 1))
        self.nodes: Dict[GroupElement, NodeRecord] = {}
        for i, g in enumerate(self.elements):
            self.nodes[g] = self._record(i)

    def _record(self, i):
        n = int(self.norms[i])
        minus, plus = [], []
        for k, s in enumerate(LETTERS):
            j = self.neighbors[i, k]
            if j < 0:
                if n < self.radius:
                    raise AssertionError("interior node with a neighbour outside the ball")
                continue
            m = int(self.norms[j])
            if m == n - 1:
                minus.append(s)
            elif m == n + 1:
                plus.append(s)
            else:
                raise AssertionError(f"edge between equal norms {n} (odd relator?)")
        s_plus = frozenset(plus) if n < self.radius else None
        return NodeRecord(n, frozenset(minus), s_plus)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in self.index

    def __iter__(self):
        return iter(self.elements)

    def position(self, g: GroupElement) -> int:
        try:
            return self.index[g]
        except KeyError:
            raise ElementNotInBall(f"{g} is not in the ball of radius {self.radius}") from None

    def node(self, g: GroupElement) -> NodeRecord:
        self.position(g)
        return self.nodes[g]

    def norm(self, g: GroupElement) -> int:
        return int(self.norms[self.position(g)])

    def step(self, g: GroupElement, s: Letter) -> GroupElement:
        """``g·s``, which must lie in the ball."""
        j = self.neighbors[self.position(g), LETTERS.index(s)]
        if j < 0:
            raise ElementNotInBall(f"{g}·{s.value} lies outside the ball")
        return self.elements[j]

    def require_margin(self, g: GroupElement, margin: int) -> NodeRecord:
        rec = self.node(g)
        if rec.norm > self.radius - margin:
            raise BoundaryError(
                f"{g} has norm {rec.norm}; need norm <= {self.radius - margin} "
                f"in a ball of radius {self.radius}"
            )
        return rec

    def interior(self, margin: int) -> List[GroupElement]:
        cutoff = self.radius - margin
        return [g for g, n in zip(self.elements, self.norms) if n <= cutoff]


def build_ball(radius: int, max_nodes: int = DEFAULT_MAX_NODES) -> Ball:
    if radius < 0:
        raise ValueError("radius must be non-negative")
    gens = [generator(s) for s in LETTERS]
    elements = [IDENTITY]
    index = {IDENTITY: 0}
    norms = [0]
    neighbors: List[List[int]] = []
    frontier_start = 0
    for n in range(radius + 1):
        frontier_end = len(elements)
        for i in range(frontier_start, frontier_end):
            g = elements[i]
            row = []
            for h in gens:
                gh = mul(g, h)
                j = index.get(gh)
                if j is None and n < radius:
                    j = len(elements)
                    if j >= max_nodes:
                        raise ResourceLimitError(
                            f"ball of radius {radius} exceeds {max_nodes} nodes"
                        )
                    index[gh] = j
                    elements.append(gh)
                    norms.append(n + 1)
                row.append(-1 if j is None else j)
            neighbors.append(row)
        frontier_start = frontier_end
    return Ball(radius, elements, norms, neighbors)


def suffix_letters(g: GroupElement, ball: Ball) -> FrozenSet[Letter]:
    """Last letters of geodesic words for ``g``."""
    return frozenset(s.inverse for s in ball.node(g).s_minus)


def suffix_sets(g: GroupElement, ball: Ball) -> SuffixProfile:
    """Geodesic suffixes of length 2, falling back to length 1, then to ∅."""
    last = suffix_letters(g, ball)
    if not last:
        return SuffixProfile(0, frozenset())
    pairs = frozenset(
        (s, t)
        for t in last
        for s in suffix_letters(ball.step(g, t.inverse), ball)
    )
    if pairs:
        return SuffixProfile(2, pairs)
    return SuffixProfile(1, frozenset((t,) for t in last))


def suffix_words(g: GroupElement, ball: Ball, n: int) -> FrozenSet[Word]:
    """The raw set of length-``n`` suffixes of geodesic words for ``g`` (n = 1, 2)."""
    last = suffix_letters(g, ball)
    if n == 1:
        return frozenset((t,) for t in last)
    if n == 2:
        return frozenset(
            (s, t) for t in last for s in suffix_letters(ball.step(g, t.inverse), ball)
        )
    raise ValueError("only suffix lengths 1 and 2 are supported")


_R, _U, _UI = LETTERS


def forbidden_suffix_violations(g: GroupElement, ball: Ball) -> List[str]:
    """Suffix combinations that cannot occur together for a single element.

    Returns the offending pairs as strings such as ``"ur+Ur"``; an empty
    list means none was found.
    """
    s1 = suffix_words(g, ball, 1)
    s2 = suffix_words(g, ball, 2)
    found = []
    if (_U,) in s1 and (_UI,) in s1:
        found.append("u+U")
    if (_U, _R) in s2 and (_UI, _R) in s2:
        found.append("ur+Ur")
    for a in (_U, _UI):
        if (a, _R) in s2 and (a.inverse, a.inverse) in s2:
            found.append(f"{a.value}r+{a.inverse.value * 2}")
        if (a, _R) in s2 and (a,) in s1:
            found.append(f"{a.value}r+{a.value}")
    return found


def geodesic_word(g: GroupElement, ball: Ball) -> Word:
    """One geodesic word for ``g``: always strip the earliest available last letter."""
    out = []
    while ball.node(g).norm:
        t = min(suffix_letters(g, ball), key=LETTERS.index)
        out.append(t)
        g = ball.step(g, t.inverse)
    return tuple(reversed(out))


def geodesic_counts(ball: Ball) -> Tuple[int, ...]:
    """Number of geodesic words of each length, counted on the ball."""
    counts = np.zeros(len(ball), dtype=object)
    counts[0] = 1
    for i in range(1, len(ball)):
        n = ball.norms[i]
        counts[i] = sum(counts[j] for j in ball.neighbors[i] if j >= 0 and ball.norms[j] == n - 1)
    totals = [0] * (ball.radius + 1)
    for i, c in enumerate(counts):
        totals[ball.norms[i]] += c
    return tuple(int(t) for t in totals)


def geodesic_words(g: GroupElement, ball: Ball) -> List[Word]:
    """All geodesic words for ``g``, by descending through predecessors."""
    memo: Dict[GroupElement, List[Word]] = {IDENTITY: [()]}

    def rec(h):
        if h not in memo:
            out = []
            for t in sorted(suffix_letters(h, ball), key=LETTERS.index):
                out.extend(w + (t,) for w in rec(ball.step(h, t.inverse)))
            memo[h] = out
        return memo[h]

    ball.position(g)
    return rec(g)


def laplacian_matrix(ball: Ball, support_radius: Optional[int] = None) -> sp.csr_matrix:
    """Dirichlet Laplacian ``3I - A`` on the nodes of norm <= support_radius.

    Rows and columns follow BFS order, so the support is a prefix of
    ``ball.elements``.
    """
    if support_radius is None:
        support_radius = ball.radius
    n = int(np.sum(ball.norms <= support_radius))
    nb = ball.neighbors[:n]
    rows = np.repeat(np.arange(n), 3)
    cols = nb.ravel()
    keep = (cols >= 0) & (cols < n)
    adj = sp.csr_matrix(
        (np.ones(int(keep.sum())), (rows[keep], cols[keep])), shape=(n, n)
    )
    return (3.0 * sp.identity(n, format="csr") - adj).tocsr()


def apply_laplacian(h: Mapping, ball: Ball) -> Dict[GroupElement, float]:
    """``(Δh)_g = 3 h_g - Σ_s h_{gs}``, with ``h = 0`` off the ball and on missing keys."""
    x = np.zeros(len(ball))
    for g, value in h.items():
        x[ball.position(g)] = value
    y = laplacian_matrix(ball) @ x
    return dict(zip(ball.elements, y.tolist()))


def _letters(letters) -> str:
    if letters is None:
        return "?"
    return "".join(s.value for s in LETTERS if s in letters) or "-"


def export_ball(ball: Ball) -> str:
    """One line per node: ``matrix(a,b,c,d) norm s_minus s_plus``.

    Empty letter sets print as ``-``; undefined successor sets (the
    boundary sphere) as ``?``.
    """
    lines = []
    for g in ball.elements:
        rec = ball.nodes[g]
        lines.append(f"{g} {rec.norm} {_letters(rec.s_minus)} {_letters(rec.s_plus)}")
    return "\n".join(lines) + "\n"


def sphere_csv(ball: Ball) -> str:
    return "n,count\n" + "".join(f"{n},{c}\n" for n, c in enumerate(ball.spheres))


def export_dot(ball: Ball, max_radius: int = 6) -> str:
    if ball.radius > max_radius:
        raise ValueError(f"DOT export is limited to radius <= {max_radius}")
    out = ["graph cayley {"]
    for i, g in enumerate(ball.elements):
        out.append(f'  n{i} [label="{g.a},{g.b},{g.c},{g.d}" norm={ball.norms[i]}];')
    for i in range(len(ball)):
        j = ball.neighbors[i, 0]
        if j > i:
            out.append(f'  n{i} -- n{j} [label="r"];')
        j = ball.neighbors[i, 1]
        if j >= 0:
            out.append(f'  n{i} -- n{j} [label="u"];')
    out.append("}")
    return "\n".join(out) + "\n"
