import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import TableBackend, doc, pair, random_table_backend
from oracles import brute_force_edit_cost, mutual_best_pairs
from semsim.corpus import Document
from semsim.errors import MeasureError
from semsim.measures import (
    jaccard,
    levenshtein,
    levenshtein_cost,
    score_pair,
    semantic_edit_cost,
    semantic_edit_distance,
    semantic_jaccard,
    softmatch,
)
from semsim.wordsim import EmbeddingBackend, EmbeddingTable, ExactMatchBackend

EXACT = ExactMatchBackend()

# the non-overlapping words of the worked example, each paired with its counterpart
FIG1_PAIRS = [("question", "query"), ("linked", "connected"), ("closely", "intimately"),
              ("to", "with"), ("debated", "disputed"), ("issue", "point"), ("beginnings", "origin")]


class TestJaccard:
    def test_half(self):
        assert jaccard(doc("a b c"), doc("b c d")) == 0.5

    def test_identical(self):
        assert jaccard(doc("a b a"), doc("b a")) == 1.0

    def test_seven_of_twenty_two(self):
        common = [f"c{i}" for i in range(7)]
        a = Document(tuple(common + [f"a{i}" for i in range(7)]))
        b = Document(tuple(common + [f"b{i}" for i in range(8)]))
        assert len(a.vocab | b.vocab) == 22
        assert jaccard(a, b) == pytest.approx(0.318, abs=0.01)
        assert jaccard(a, b) == 7 / 22

    def test_both_empty(self):
        with pytest.raises(MeasureError):
            jaccard(Document(()), Document(()))

    def test_one_empty_is_zero(self):
        assert jaccard(doc("a"), Document(())) == 0.0


class TestSoftmatch:
    SIMS = {("a", "c"): 0.9, ("a", "d"): 0.8, ("b", "c"): 0.85, ("b", "d"): 0.2}

    def test_mutual_best_example(self):
        b = TableBackend(self.SIMS)
        res = softmatch({"a", "b"}, {"c", "d"}, b)
        assert res.pairs == (("a", "c", 0.9),)
        assert res.total == 0.9
        oracle = mutual_best_pairs(["a", "b"], ["c", "d"], b.sim)
        assert {(x, y) for x, y, _ in res.pairs} == oracle == {("a", "c")}

    def test_iterate_rematches_leftovers(self):
        res = softmatch({"a", "b"}, {"c", "d"}, TableBackend(self.SIMS), rounds="iterate")
        assert [p[:2] for p in res.pairs] == [("a", "c"), ("b", "d")]
        assert res.total == pytest.approx(1.1)

    def test_empty(self):
        assert softmatch(set(), {"a"}, EXACT).total == 0.0
        assert softmatch({"a"}, set(), EXACT).pairs == ()

    def test_zero_similarity_never_matched(self):
        assert softmatch({"a", "b"}, {"c", "d"}, EXACT).total == 0.0

    def test_ties_one_to_one(self):
        b = TableBackend({("a", "c"): 0.7, ("a", "d"): 0.7})
        res = softmatch({"a"}, {"c", "d"}, b)
        assert res.pairs == (("a", "c", 0.7),)

    def test_full_tie_block_order_independent(self):
        b = TableBackend({(x, y): 0.5 for x in "ab" for y in "cd"})
        forward = softmatch({"a", "b"}, {"c", "d"}, b)
        backward = softmatch({"c", "d"}, {"a", "b"}, b)
        assert [p[:2] for p in forward.pairs] == [("a", "c"), ("b", "d")]
        assert forward.total == backward.total == 1.0

    def test_bad_rounds(self):
        with pytest.raises(ValueError):
            softmatch({"a"}, {"b"}, EXACT, rounds=3)

    @pytest.mark.parametrize("seed", range(50))
    def test_against_reference(self, seed):
        rng = np.random.default_rng(seed)
        xs = {f"x{i}" for i in range(rng.integers(0, 8))}
        ys = {f"y{i}" for i in range(rng.integers(0, 8))}
        b = TableBackend({(x, y): float(rng.random()) for x in xs for y in ys}, vocab=xs | ys)
        res = softmatch(xs, ys, b)
        assert {(x, y) for x, y, _ in res.pairs} == mutual_best_pairs(sorted(xs), sorted(ys), b.sim)
        assert res.total <= min(len(xs), len(ys))
        assert res.total <= softmatch(xs, ys, b, rounds="iterate").total


class TestSemanticJaccard:
    def test_exact_backend_reduces(self):
        a, b = doc("the cat sat on the mat"), doc("a cat lay on a rug")
        assert semantic_jaccard(a, b, EXACT) == jaccard(a, b)

    def test_full_synonym(self):
        b = TableBackend({("car", "automobile"): 1.0})
        assert semantic_jaccard(doc("car"), doc("automobile"), b) == 1.0

    def test_worked_example_arithmetic(self):
        common = [f"c{i}" for i in range(7)]
        a = Document(tuple(common + [x for x, _ in FIG1_PAIRS]))
        b = Document(tuple(common + [y for _, y in FIG1_PAIRS] + ["itself"]))
        sims = {p: 1.0 for p in FIG1_PAIRS[:6]}
        sims[FIG1_PAIRS[6]] = 0.75
        backend = TableBackend(sims)
        assert len(a.vocab | b.vocab) == 22
        assert softmatch(a.vocab - b.vocab, b.vocab - a.vocab, backend).total == 6.75
        assert semantic_jaccard(a, b, backend) == pytest.approx(13.75 / 15.25, abs=1e-12)
        assert semantic_jaccard(a, b, backend) == pytest.approx(0.90, abs=0.005)

    def test_both_empty(self):
        with pytest.raises(MeasureError):
            semantic_jaccard(Document(()), Document(()), EXACT)


class TestLevenshtein:
    def test_one_substitution(self):
        assert levenshtein(doc("a b c"), doc("a x c")) == pytest.approx(1 / 3)

    def test_identical(self):
        assert levenshtein(doc("a b c"), doc("a b c")) == 0.0

    def test_sub_plus_delete(self):
        assert levenshtein(doc("a b"), doc("c")) == 1.0

    def test_empty_side_is_error(self):
        with pytest.raises(MeasureError):
            levenshtein(doc("a b"), Document(()))
        with pytest.raises(MeasureError):
            levenshtein(Document(()), Document(()))

    def test_cost_against_brute_force(self):
        for xs in itertools.product("ab", repeat=3):
            for ys in itertools.product("ab", repeat=2):
                expected = brute_force_edit_cost(xs, ys, lambda x, y: 1.0, lambda x: 1.0)
                assert levenshtein_cost(xs, ys) == expected


class TestSemanticEditDistance:
    def test_exact_backend_reduces(self):
        a, b = doc("the question is closely linked"), doc("the query is intimately connected to it")
        assert semantic_edit_distance(a, b, EXACT) == levenshtein(a, b)

    def test_free_synonym_substitution(self):
        b = TableBackend({("car", "automobile"): 1.0})
        assert semantic_edit_distance(doc("car"), doc("automobile"), b) == 0.0

    def test_cheap_function_word_deletion(self):
        b = TableBackend({}, tau={"of": 0.1, "origin": 0.9}, vocab={"of", "origin"})
        cost = semantic_edit_cost(("origin", "of"), ("origin",), b)
        assert cost == pytest.approx(0.1)
        assert semantic_edit_distance(doc("origin of"), doc("origin"), b) == pytest.approx(0.05)

    def test_raw_cost_with_empty_side(self):
        b = TableBackend({}, tau={"a": 0.25, "b": 0.5}, vocab="ab")
        assert semantic_edit_cost(("a", "b", "a"), (), b) == 1.0
        assert semantic_edit_cost((), ("b",), b) == 0.5
        assert semantic_edit_cost((), (), b) == 0.0

    @pytest.mark.parametrize("seed", range(30))
    def test_matches_exhaustive_scripts(self, seed):
        rng = np.random.default_rng(seed)
        alphabet = list("pqrst")
        b = random_table_backend(rng, alphabet)
        for _ in range(10):
            xs = tuple(rng.choice(alphabet, rng.integers(0, 7)))
            ys = tuple(rng.choice(alphabet, rng.integers(0, 7)))
            if len(xs) + len(ys) > 10:
                xs, ys = xs[:5], ys[:5]
            expected = brute_force_edit_cost(xs, ys, b.dist, b.tau_dist)
            assert semantic_edit_cost(xs, ys, b) == pytest.approx(expected, abs=1e-12)

    def test_length_six_exhaustive(self):
        rng = np.random.default_rng(7)
        b = random_table_backend(rng, list("pqr"))
        for _ in range(5):
            xs, ys = tuple(rng.choice(list("pqr"), 6)), tuple(rng.choice(list("pqr"), 6))
            assert semantic_edit_cost(xs, ys, b) == pytest.approx(
                brute_force_edit_cost(xs, ys, b.dist, b.tau_dist), abs=1e-12)


class TestScorePair:
    def test_identical(self):
        s = score_pair(pair("p", "one two three", "one two three", True), EXACT)
        assert (s.j, s.sj, s.ed, s.sed) == (1.0, 1.0, 0.0, 0.0)

    def test_disjoint(self):
        s = score_pair(pair("p", "one two", "three four five", False), EXACT)
        assert (s.j, s.sj, s.ed, s.sed) == (0.0, 0.0, 1.0, 1.0)

    def test_exact_reduction(self):
        s = score_pair(pair("p", "a b c d", "b c x a", True), EXACT)
        assert s.sj == s.j and s.sed == s.ed

    def test_as_dict(self):
        s = score_pair(pair("p", "a", "a", True), EXACT)
        assert s.as_dict() == {"j": 1.0, "sj": 1.0, "ed": 0.0, "sed": 0.0}


words = st.sampled_from([f"w{i}" for i in range(12)])
docs = st.lists(words, min_size=1, max_size=15).map(lambda ws: Document(tuple(ws)))


def _embedding_backend(seed: int) -> EmbeddingBackend:
    rng = np.random.default_rng(seed)
    names = [f"w{i}" for i in range(10)]  # w10, w11 stay out of vocabulary
    return EmbeddingBackend(EmbeddingTable(names, rng.standard_normal((10, 3))), tau_topk=3)


class TestMeasureProperties:
    @settings(max_examples=300, deadline=None)
    @given(docs, docs)
    def test_exact_reduction(self, a, b):
        assert semantic_jaccard(a, b, EXACT) == jaccard(a, b)
        assert semantic_edit_distance(a, b, EXACT) == levenshtein(a, b)

    @settings(max_examples=300, deadline=None)
    @given(docs, docs, st.integers(0, 50), st.sampled_from([1, "iterate"]))
    def test_bounds_symmetry_dominance(self, a, b, seed, rounds):
        backend = _embedding_backend(seed)
        sj, sj_rev = semantic_jaccard(a, b, backend, rounds), semantic_jaccard(b, a, backend, rounds)
        sed, sed_rev = semantic_edit_distance(a, b, backend), semantic_edit_distance(b, a, backend)
        j, ed = jaccard(a, b), levenshtein(a, b)
        for v in (sj, sed, j, ed):
            assert 0.0 <= v <= 1.0
        assert sj == sj_rev and sed == sed_rev
        assert j == jaccard(b, a) and ed == levenshtein(b, a)
        assert sj >= j
        assert sed <= ed


def test_semantic_edit_distance_empty_side_is_error():
    with pytest.raises(MeasureError):
        semantic_edit_distance(doc("a"), Document(()), EXACT)
