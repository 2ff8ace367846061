"""The six-valued cone type function on PSL(2,Z) and its transition table.

An element's type is read off its geodesic suffix profile (see
:func:`psl2spectrum.cayley.suffix_sets`).  Writing ``a`` for u or ū and ``A``
for its inverse, the eight profile shapes are::

    {}          -> 0
    {r}         -> 1
    {ar}        -> 2
    {a}, {aa}   -> 3
    {ra}, {ra,aa} -> 4
    {ra,Ar}     -> 5
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from .cayley import Ball, SuffixProfile, geodesic_word, suffix_sets
from .group import LETTERS, GroupElement, Letter
from .words import Word, format_word

TransitionTable = Dict[int, Tuple[int, ...]]

NUM_TYPES = 6

# successor-type multisets, sorted
CONE_TYPE_TABLE: TransitionTable = {
    0: (1, 3, 3),
    1: (4, 4),
    2: (4, 5),
    3: (2, 3),
    4: (3, 5),
    5: (4,),
}

# number of predecessors of an element of each type
PREDECESSORS = {0: 0, 1: 1, 2: 1, 3: 1, 4: 1, 5: 2}

_R, _U, _UI = LETTERS


class UnclassifiableProfile(RuntimeError):
    """A suffix profile outside the eight known shapes."""


class InconsistentTyping(RuntimeError):
    """Two elements of the same type have different successor types."""


def _shapes(a: Letter) -> Dict[str, FrozenSet[Word]]:
    A = a.inverse
    return {
        "ar": frozenset({(a, _R)}),
        "a": frozenset({(a,)}),
        "aa": frozenset({(a, a)}),
        "ra": frozenset({(_R, a)}),
        "ra,aa": frozenset({(_R, a), (a, a)}),
        "ra,Ar": frozenset({(_R, a), (A, _R)}),
    }


# concrete suffix set -> (shape name, the letter playing the role of a)
CATALOGUE: Dict[FrozenSet[Word], Tuple[str, Optional[Letter]]] = {
    frozenset(): ("{}", None),
    frozenset({(_R,)}): ("r", None),
}
for _a in (_U, _UI):
    for _name, _words in _shapes(_a).items():
        CATALOGUE[_words] = (_name, _a)

SHAPE_TYPES = {
    "{}": 0, "r": 1, "ar": 2, "a": 3, "aa": 3, "ra": 4, "ra,aa": 4, "ra,Ar": 5,
}


def profile_shape(profile: SuffixProfile) -> Tuple[str, Optional[Letter]]:
    try:
        return CATALOGUE[profile.suffixes]
    except KeyError:
        raise UnclassifiableProfile(f"suffix profile {profile} is not in the catalogue") from None


def classify_profile(profile: SuffixProfile) -> int:
    return SHAPE_TYPES[profile_shape(profile)[0]]


def expected_successor_profiles(profile: SuffixProfile) -> List[FrozenSet[Word]]:
    """Suffix profiles of the successors, predicted from the profile alone."""
    shape, a = profile_shape(profile)
    if shape == "{}":
        out = [{(_R,)}, {(_U,)}, {(_UI,)}]
    elif shape == "r":
        out = [{(_R, _U)}, {(_R, _UI)}]
    else:
        A = a.inverse
        ar, ra, aa = (a, _R), (_R, a), (a, a)
        out = {
            "ar": [{ra, (A, _R)}, {(_R, A)}],
            "a": [{ar}, {aa}],
            "aa": [{ar}, {aa}],
            "ra": [{ar, (_R, A)}, {aa}],
            "ra,aa": [{ar, (_R, A)}, {aa}],
            "ra,Ar": [{ra, aa}],
        }[shape]
    return sorted((frozenset(s) for s in out), key=_profile_key)


def _profile_key(words):
    return sorted(format_word(w) for w in words)


def type_of(g: GroupElement, ball: Ball) -> int:
    return classify_profile(suffix_sets(g, ball))


def successor_types(g: GroupElement, ball: Ball) -> Tuple[int, ...]:
    rec = ball.require_margin(g, 1)
    return tuple(sorted(type_of(ball.step(g, s), ball) for s in rec.s_plus))


@dataclass
class CompatibilityReport:
    radius: int
    margin: int
    checked: int = 0
    per_type: Counter = field(default_factory=Counter)
    per_profile: Counter = field(default_factory=Counter)
    observed: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
    counterexamples: List[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def merge(self, other: "CompatibilityReport") -> "CompatibilityReport":
        self.checked += other.checked
        self.per_type.update(other.per_type)
        self.per_profile.update(other.per_profile)
        for k, row in other.observed.items():
            self.observed.setdefault(k, row)
        self.counterexamples.extend(other.counterexamples)
        return self

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "margin": self.margin,
            "checked": self.checked,
            "passed": self.passed,
            "per_type": {str(k): self.per_type[k] for k in sorted(self.per_type)},
            "per_profile": {k: self.per_profile[k] for k in sorted(self.per_profile)},
            "observed_table": {str(k): list(v) for k, v in sorted(self.observed.items())},
            "counterexamples": self.counterexamples,
        }


def _sweep(ball, nodes, table, radius, margin):
    report = CompatibilityReport(radius, margin)
    for g in nodes:
        rec = ball.nodes[g]
        profile = suffix_sets(g, ball)
        try:
            t = classify_profile(profile)
        except UnclassifiableProfile:
            report.counterexamples.append(_counterexample(ball, g, "catalogue", str(profile), None))
            continue
        report.checked += 1
        report.per_type[t] += 1
        report.per_profile[str(profile)] += 1

        succ = [ball.step(g, s) for s in LETTERS if s in rec.s_plus]
        try:
            observed = tuple(sorted(type_of(h, ball) for h in succ))
        except UnclassifiableProfile as exc:
            report.counterexamples.append(_counterexample(ball, g, "catalogue", str(exc), None))
            continue
        report.observed.setdefault(t, observed)
        if observed != tuple(table[t]):
            report.counterexamples.append(
                _counterexample(ball, g, "table", list(observed), list(table[t]), t)
            )

        succ_profiles = sorted((suffix_sets(h, ball).suffixes for h in succ), key=_profile_key)
        expected_profiles = expected_successor_profiles(profile)
        if succ_profiles != expected_profiles:
            report.counterexamples.append(_counterexample(
                ball, g, "profile",
                [_fmt_set(p) for p in succ_profiles],
                [_fmt_set(p) for p in expected_profiles], t,
            ))

        if len(rec.s_minus) != PREDECESSORS[t] or len(succ) != 3 - PREDECESSORS[t]:
            report.counterexamples.append(
                _counterexample(ball, g, "degree", len(rec.s_minus), PREDECESSORS[t], t)
            )
    return report


def _fmt_set(words):
    return "{" + ",".join(_profile_key(words)) + "}"


def _counterexample(ball, g, kind, observed, expected, t=None):
    return {
        "kind": kind,
        "element": str(g),
        "word": format_word(geodesic_word(g, ball)),
        "type": t,
        "observed": observed,
        "expected": expected,
    }


def _chunks(seq: Sequence, n: int) -> List[Sequence]:
    size = -(-len(seq) // n) if seq else 1
    return [seq[i:i + size] for i in range(0, len(seq), size)] or [seq]


def verify_compatibility(
    ball: Ball,
    table: Optional[Mapping[int, Sequence[int]]] = None,
    margin: int = 1,
    threads: int = 1,
) -> CompatibilityReport:
    """Check every node of norm <= radius - margin against the transition table.

    Besides the type-level table this checks the finer profile-level
    successor rule, the catalogue of profiles, and predecessor counts.
    Failures are collected as counterexamples, never raised.
    """
    if ball.radius < 3:
        raise ValueError("compatibility check needs a ball of radius >= 3")
    if margin < 1:
        raise ValueError("successor types need margin >= 1")
    table = {k: tuple(sorted(v)) for k, v in (table or CONE_TYPE_TABLE).items()}
    nodes = ball.interior(margin)
    parts = _chunks(nodes, max(1, threads))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            reports = list(ex.map(lambda p: _sweep(ball, p, table, ball.radius, margin), parts))
    else:
        reports = [_sweep(ball, p, table, ball.radius, margin) for p in parts]
    total = CompatibilityReport(ball.radius, margin)
    for r in reports:
        total.merge(r)
    return total


def extract_transition_table(ball: Ball) -> TransitionTable:
    """The successor-type multiset of each type, as observed on the ball."""
    if ball.radius < 4:
        raise ValueError("need radius >= 4 for every type to have observable successors")
    table: TransitionTable = {}
    for g in ball.interior(1):
        t = type_of(g, ball)
        row = successor_types(g, ball)
        if table.setdefault(t, row) != row:
            raise InconsistentTyping(
                f"type {t}: {format_word(geodesic_word(g, ball))} has successors {row}, "
                f"expected {table[t]}"
            )
    return dict(sorted(table.items()))


def automaton_path_counts(table: Mapping[int, Sequence[int]], n_max: int) -> List[int]:
    """Number of length-n paths from type 0 in the successor automaton.

    This counts geodesic words, not elements: an element of type 5 is
    reached along two paths.
    """
    counts = {0: 1}
    out = [1]
    for _ in range(n_max):
        nxt: Counter = Counter()
        for k, c in counts.items():
            for t in table[k]:
                nxt[t] += c
        counts = nxt
        out.append(sum(counts.values()))
    return out


def automaton_sphere_counts(
    table: Mapping[int, Sequence[int]],
    n_max: int,
    predecessors: Mapping[int, int] = PREDECESSORS,
) -> List[int]:
    """Sphere sizes from the automaton, counting each element once.

    Arrivals at a type are divided by the number of predecessors elements
    of that type have.
    """
    counts = {0: 1}
    out = [1]
    for _ in range(n_max):
        arrivals: Counter = Counter()
        for k, c in counts.items():
            for t in table[k]:
                arrivals[t] += c
        counts = {}
        for t, c in arrivals.items():
            q, rem = divmod(c, predecessors[t])
            if rem:
                raise InconsistentTyping(f"{c} arrivals at type {t} is not a multiple of {predecessors[t]}")
            counts[t] = q
        out.append(sum(counts.values()))
    return out
