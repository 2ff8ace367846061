import pytest

from oracles import brute_force_spheres
from psl2spectrum.cayley import BoundaryError, SuffixProfile, geodesic_counts
from psl2spectrum.conetypes import (
    PREDECESSORS, CONE_TYPE_TABLE, InconsistentTyping, UnclassifiableProfile,
    automaton_path_counts, automaton_sphere_counts, classify_profile,
    extract_transition_table, successor_types, type_of, verify_compatibility,
)
from psl2spectrum.group import IDENTITY, Letter, generator
from psl2spectrum.words import evaluate, parse_word


@pytest.mark.parametrize("word, t", [("e", 0), ("u", 3), ("ru", 4), ("ur", 2), ("uru", 5), ("r", 1), ("uu", 3)])
def test_type_of_examples(ball_cache, word, t):
    assert type_of(evaluate(parse_word(word)), ball_cache(6)) == t


@pytest.mark.parametrize("word, succ", [("e", (1, 3, 3)), ("r", (4, 4)), ("uru", (4,))])
def test_successor_types_examples(ball_cache, word, succ):
    assert successor_types(evaluate(parse_word(word)), ball_cache(6)) == succ


def test_type_five_mirror_profiles_agree(ball_cache):
    ball = ball_cache(6)
    a = evaluate(parse_word("uru"))   # {ru, Ur}
    b = evaluate(parse_word("UrU"))   # {rU, ur}
    assert type_of(a, ball) == type_of(b, ball) == 5


def test_successor_types_needs_margin(ball_cache):
    ball = ball_cache(4)
    with pytest.raises(BoundaryError):
        successor_types(evaluate(parse_word("uuuu")), ball)


def test_unclassifiable_profile():
    bogus = SuffixProfile(2, frozenset({parse_word("uu"), parse_word("UU")}))
    with pytest.raises(UnclassifiableProfile):
        classify_profile(bogus)


@pytest.mark.parametrize("radius", [3, 10])
def test_verify_compatibility_passes(ball_cache, radius):
    report = verify_compatibility(ball_cache(radius))
    assert report.passed, report.counterexamples[:3]
    for t, row in report.observed.items():
        assert row == CONE_TYPE_TABLE[t]


def test_verify_compatibility_radius_3_rows(ball_cache):
    report = verify_compatibility(ball_cache(3))
    assert set(report.observed) == {0, 1, 2, 3, 4}


def test_verify_compatibility_mutation(ball_cache):
    table = dict(CONE_TYPE_TABLE)
    table[5] = (3,)
    report = verify_compatibility(ball_cache(6), table)
    assert not report.passed
    bad = [c for c in report.counterexamples if c["kind"] == "table"]
    assert bad and all(c["type"] == 5 for c in bad)


def test_verify_compatibility_threads_independent(ball_cache):
    ball = ball_cache(9)
    one = verify_compatibility(ball).to_dict()
    four = verify_compatibility(ball, threads=4).to_dict()
    assert one == four


def test_verify_compatibility_small_radius(ball_cache):
    with pytest.raises(ValueError):
        verify_compatibility(ball_cache(2))


def test_extract_transition_table(ball_cache):
    table = extract_transition_table(ball_cache(4))
    assert table == CONE_TYPE_TABLE
    assert table[4] == (3, 5)
    assert table[2] == (4, 5)
    with pytest.raises(ValueError):
        extract_transition_table(ball_cache(3))


def test_table_rows_are_distinct():
    rows = list(CONE_TYPE_TABLE.values())
    assert len(set(rows)) == len(rows)


def test_degree_bookkeeping(ball_cache):
    ball = ball_cache(8)
    for g in ball.interior(1):
        t = type_of(g, ball)
        assert len(ball.nodes[g].s_minus) == PREDECESSORS[t]
        assert len(successor_types(g, ball)) == 3 - PREDECESSORS[t]


def test_automaton_sphere_counts():
    counts = automaton_sphere_counts(CONE_TYPE_TABLE, 8)
    assert counts[:2] == [1, 3]
    assert counts == brute_force_spheres(8)


def test_automaton_sphere_counts_match_bfs(ball_cache):
    ball = ball_cache(14)
    assert automaton_sphere_counts(CONE_TYPE_TABLE, 14) == list(ball.spheres)


def test_automaton_path_counts_are_geodesic_counts(ball_cache):
    paths = automaton_path_counts(CONE_TYPE_TABLE, 12)
    assert paths[:4] == [1, 3, 6, 12]
    assert tuple(paths) == geodesic_counts(ball_cache(12))


def test_automaton_rejects_inconsistent_predecessors():
    with pytest.raises(InconsistentTyping):
        automaton_sphere_counts(CONE_TYPE_TABLE, 5, predecessors={**PREDECESSORS, 4: 2})
