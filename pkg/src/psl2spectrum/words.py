"""Words over {r, u, ū}: serialization, reduction, relators, path decomposition.

A word is a plain tuple of :class:`Letter`.  The compact string form uses
``r``, ``u`` and ``U`` (for ū); the empty word is written ``e``.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, NamedTuple, Sequence, Tuple

from .group import IDENTITY, GroupElement, Letter, generator, mul

if TYPE_CHECKING:
    from .cayley import Ball

Word = Tuple[Letter, ...]

EMPTY: Word = ()

_BY_CHAR = {letter.value: letter for letter in Letter}


def parse_word(text: str) -> Word:
    if text == "e":
        return EMPTY
    try:
        return tuple(_BY_CHAR[ch] for ch in text)
    except KeyError as exc:
        raise ValueError(f"invalid letter {exc.args[0]!r} in word {text!r}") from None


def format_word(w: Sequence[Letter]) -> str:
    return "".join(letter.value for letter in w) or "e"


def inverse_word(w: Sequence[Letter]) -> Word:
    """The formal inverse: reverse the word and invert each letter."""
    return tuple(letter.inverse for letter in reversed(w))


PRIMITIVE_RELATORS = frozenset(
    parse_word(s) for s in ("rr", "rururu", "rUrUrU", "ururur", "UrUrUr")
)

# Every contiguous non-empty subword of a primitive relator.
RELATOR_SUBWORDS = frozenset(
    rel[i:j]
    for rel in PRIMITIVE_RELATORS
    for i in range(len(rel))
    for j in range(i + 1, len(rel) + 1)
)

_FREE_PAIRS = frozenset({(Letter.U, Letter.UINV), (Letter.UINV, Letter.U)})


def evaluate(w: Sequence[Letter]) -> GroupElement:
    g = IDENTITY
    for letter in w:
        g = mul(g, generator(letter))
    return g


def free_reduce(w: Sequence[Letter]) -> Word:
    stack = []
    for letter in w:
        if stack and stack[-1] is letter.inverse:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def is_freely_reduced(w: Sequence[Letter]) -> bool:
    return all(w[i + 1] is not w[i].inverse for i in range(len(w) - 1))


def is_reduced_in_group(w: Sequence[Letter]) -> bool:
    """True if ``w`` has no relator subword.

    Besides the five primitive relators this also rejects the free
    cancellations ``uū`` and ``ūu`` (``rr`` is already a primitive relator).
    """
    w = tuple(w)
    for i in range(len(w) - 1):
        if (w[i], w[i + 1]) in _FREE_PAIRS:
            return False
    n = len(w)
    for rel in PRIMITIVE_RELATORS:
        k = len(rel)
        for i in range(n - k + 1):
            if w[i:i + k] == rel:
                return False
    return True


def is_primitive_relator(w: Sequence[Letter]) -> bool:
    """True if ``w`` evaluates to the identity and no proper subword does.

    Decided by evaluation, so it also recognises primitive relators that are
    not in :data:`PRIMITIVE_RELATORS`, such as ``UrUUrUrUUr``.
    """
    w = tuple(w)
    if not w or evaluate(w) != IDENTITY:
        return False
    n = len(w)
    for i in range(n):
        g = IDENTITY
        for j in range(i, n):
            g = mul(g, generator(w[j]))
            if g == IDENTITY and (i, j) != (0, n - 1):
                return False
    return True


def is_relator_subword(w: Sequence[Letter]) -> bool:
    return tuple(w) in RELATOR_SUBWORDS


def common_suffix_length(v: Sequence[Letter], w: Sequence[Letter]) -> int:
    n = 0
    while n < len(v) and n < len(w) and v[-1 - n] is w[-1 - n]:
        n += 1
    return n


class PathDecomposition(NamedTuple):
    v0: Word
    v1: Word
    w0: Word
    w1: Word
    x: Word

    @property
    def relator(self) -> Word:
        """The relator ``v1 · w̄1``."""
        return self.v1 + inverse_word(self.w1)


def _require_path(word: Word, ball: "Ball", name: str) -> GroupElement:
    if not is_freely_reduced(word):
        raise ValueError(f"{name}={format_word(word)} is not freely reduced")
    g = evaluate(word)
    if ball.norm(g) != len(word):
        raise ValueError(f"{name}={format_word(word)} is not a geodesic word")
    return g


def decompose_equivalent_paths(
    v: Sequence[Letter], w: Sequence[Letter], ball: "Ball"
) -> PathDecomposition:
    """Split two distinct equivalent geodesic words around a primitive relator.

    Returns ``(v0, v1, w0, w1, x)`` with ``v = v0 v1 x`` and ``w = w0 w1 x``,
    where ``x`` is the longest common suffix and ``v1``, ``w1`` are the
    shortest non-empty equivalent suffixes of what remains.
    """
    v, w = tuple(v), tuple(w)
    if v == w:
        raise ValueError("the two words are identical")
    gv = _require_path(v, ball, "v")
    gw = _require_path(w, ball, "w")
    if gv != gw:
        raise ValueError("the two words represent different elements")

    n = common_suffix_length(v, w)
    vp, wp = v[: len(v) - n], w[: len(w) - n]
    x = v[len(v) - n:]
    # equivalent paths have equal length, so matching suffixes do too
    for k in range(1, len(vp) + 1):
        v1, w1 = vp[-k:], wp[-k:]
        if evaluate(v1) == evaluate(w1):
            return PathDecomposition(vp[:-k], v1, wp[:-k], w1, x)
    raise AssertionError("no equivalent suffixes found")  # unreachable for paths
