from collections import deque
from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from polymodal.perms import Permutation, all_permutations, generator_word, word_permutation


def perm_strategy(k):
    return st.permutations(list(range(k))).map(lambda p: Permutation(tuple(p)))


def bfs_lengths(k):
    # independent BFS where words act on tuples directly
    start = tuple(range(k))
    p = lambda t: t[-1:] + t[:-1]
    s = lambda t: t[:-2] + (t[-1], t[-2])
    dist = {start: 0}
    queue = deque([start])
    while queue:
        t = queue.popleft()
        for g in (p, s):
            u = g(t)
            if u not in dist:
                dist[u] = dist[t] + 1
                queue.append(u)
    return dist


def test_rejects_non_bijection():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))


def test_generators_act_on_tuples():
    assert Permutation.cyclic(3).apply("abc") == ("c", "a", "b")
    assert Permutation.swap(3).apply("abc") == ("a", "c", "b")


def test_identity_has_empty_word():
    assert generator_word(Permutation.identity(3)) == ""


def test_two_element_swap_prefers_p():
    # p and s coincide on pairs; the tie goes to the lexicographically least word
    assert Permutation.cyclic(2) == Permutation.swap(2)
    assert generator_word(Permutation.swap(2)) == "p"


def test_three_cycle():
    cycle = Permutation((1, 2, 0))
    word = generator_word(cycle)
    assert word_permutation(word, 3) == cycle
    assert len(word) == bfs_lengths(3)[cycle.apply((0, 1, 2))]


def test_k_below_two_rejected():
    with pytest.raises(ValueError):
        generator_word(Permutation((0,)))


@pytest.mark.parametrize("k", [2, 3, 4])
def test_words_are_shortest_and_correct(k):
    dist = bfs_lengths(k)
    for perm in all_permutations(k):
        word = generator_word(perm)
        assert word_permutation(word, k) == perm
        assert len(word) == dist[perm.apply(tuple(range(k)))]


@pytest.mark.parametrize("k", [2, 3, 4])
def test_all_permutations_in_one_line_order(k):
    assert [p.images for p in all_permutations(k)] == list(permutations(range(k)))


@given(st.integers(2, 5).flatmap(lambda k: st.tuples(perm_strategy(k), perm_strategy(k), perm_strategy(k))))
def test_group_laws(triple):
    a, b, c = triple
    e = Permutation.identity(a.k)
    assert (a * b) * c == a * (b * c)
    assert a * e == a == e * a
    assert a * a.inverse() == e


@given(st.integers(2, 5).flatmap(lambda k: st.tuples(perm_strategy(k), perm_strategy(k))))
def test_product_is_composition_of_actions(pair):
    a, b = pair
    t = tuple("abcde"[: a.k])
    assert (a * b).apply(t) == a.apply(b.apply(t))
