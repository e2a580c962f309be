import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relcorpus.model import (
    AlignedUnit,
    AnnotationError,
    Corpus,
    LingToken,
    RelationLabel,
    SentencePair,
    SubTag,
    UnknownRelationError,
    is_complete,
    project_source_relations,
    unit_counts,
    validate,
)

from helpers import mutate_pair, random_complete_pair, unit

R = RelationLabel


def three_token_pair(units):
    return SentencePair(
        id="s1",
        src_tokens=("a", "b", "c"),
        tgt_tokens=("x", "y", "z"),
        units=tuple(units),
    )


FULL_COVER = [
    unit([0], [0], R.LITERAL),
    unit([1], [1], R.LITERAL),
    unit([2], [2], R.LITERAL),
]


class TestRelationLabel:
    def test_canonical_forms(self):
        assert str(R.LEXICAL_SHIFT) == "lexical_shift"
        assert len(RelationLabel) == 14

    def test_parse_known(self):
        assert RelationLabel.parse("modulation_transposition") is R.MODULATION_TRANSPOSITION

    def test_parse_trims_whitespace(self):
        assert RelationLabel.parse("literal ") is R.LITERAL

    @pytest.mark.parametrize("bad", ["paraphrase", "LITERAL", "", "literal translation"])
    def test_parse_rejects_unknown(self, bad):
        with pytest.raises(UnknownRelationError):
            RelationLabel.parse(bad)


class TestValidate:
    def test_fully_covered_sentence_is_clean(self):
        assert validate(three_token_pair(FULL_COVER), "complete").ok

    def test_empty_src_with_literal_label(self):
        pair = three_token_pair(
            [unit([], [0], R.LITERAL), unit([0, 1, 2], [1, 2], R.LITERAL)]
        )
        report = validate(pair, "draft")
        assert "BAD_UNALIGNED_LABEL" in report.codes()

    def test_overlap_is_the_only_violation(self):
        # token 2 owned by two units; everything else stays covered exactly once
        units = [
            unit([0, 2], [0], R.LITERAL),
            unit([1], [1], R.LITERAL),
            unit([2], [2], R.LITERAL),
        ]
        report = validate(three_token_pair(units), "complete")
        assert len(report) == 1
        violation = report.violations[0]
        assert violation.code == "OVERLAP"
        assert violation.locus == "src[2]"

    def test_uncovered_only_in_complete_mode(self):
        pair = SentencePair(
            id="s1",
            src_tokens=("a", "b", "c"),
            tgt_tokens=("x", "y"),
            units=tuple(FULL_COVER[:2]) + (unit([2], [], R.UNALIGNED_REDUCTION),),
        )
        partial = three_token_pair(FULL_COVER[:2])
        assert validate(pair, "complete").ok
        assert validate(partial, "draft").ok
        assert "UNCOVERED" in validate(partial, "complete").codes()

    def test_both_sides_empty_unit(self):
        report = validate(three_token_pair([AlignedUnit((), (), R.LITERAL)]), "draft")
        assert "EMPTY_UNIT" in report.codes()

    def test_explicitation_with_source_tokens(self):
        pair = three_token_pair([unit([0], [0], R.UNALIGNED_EXPLICITATION)])
        assert "BAD_UNALIGNED_LABEL" in validate(pair, "draft").codes()

    def test_reduction_with_target_tokens(self):
        pair = three_token_pair([unit([0], [0], R.UNALIGNED_REDUCTION)])
        assert "BAD_UNALIGNED_LABEL" in validate(pair, "draft").codes()

    def test_out_of_range_index(self):
        pair = three_token_pair([unit([7], [0], R.LITERAL)])
        assert "BAD_INDEX" in validate(pair, "draft").codes()

    def test_sub_tag_must_match_relation(self):
        ok = three_token_pair(
            [unit([0, 1, 2], [0, 1, 2], R.LEXICAL_SHIFT, sub="plural")]
        )
        assert validate(ok, "complete").ok
        bad = three_token_pair(
            [unit([0, 1, 2], [0, 1, 2], R.LEXICAL_SHIFT, sub="hyperonym")]
        )
        assert "SUB_TAG_MISMATCH" in validate(bad, "draft").codes()

    def test_bad_token_surfaces(self):
        pair = SentencePair(
            id="s1", src_tokens=("a b", "c"), tgt_tokens=("x", ""), units=()
        )
        report = validate(pair, "draft")
        assert [v.locus for v in report] == ["src[0]", "tgt[1]"]

    def test_ling_length_mismatch(self):
        pair = SentencePair(
            id="s1",
            src_tokens=("a", "b"),
            tgt_tokens=("x",),
            src_ling=(LingToken("NOUN", head=None),),
        )
        assert "LING_LENGTH" in validate(pair, "draft").codes()

    def test_ling_root_and_head_rules(self):
        two_roots = SentencePair(
            id="s1",
            src_tokens=("a", "b"),
            tgt_tokens=("x",),
            src_ling=(LingToken("NOUN", head=None), LingToken("VERB", head=None)),
        )
        assert "MULTI_ROOT" in validate(two_roots, "draft").codes()
        self_head = SentencePair(
            id="s1",
            src_tokens=("a", "b"),
            tgt_tokens=("x",),
            src_ling=(LingToken("NOUN", head=0), LingToken("VERB", head=None)),
        )
        assert "BAD_HEAD" in validate(self_head, "draft").codes()
        no_root = SentencePair(
            id="s1",
            src_tokens=("a", "b"),
            tgt_tokens=("x",),
            src_ling=(LingToken("NOUN", head=1), LingToken("VERB", head=0)),
        )
        assert "NO_ROOT" in validate(no_root, "draft").codes()

    def test_report_ordered_by_locus(self):
        units = [
            unit([1, 2], [1], R.LITERAL),
            unit([2], [2], R.LITERAL),
            unit([], [0], R.LITERAL),
        ]
        report = validate(three_token_pair(units), "complete")
        loci = [v.locus for v in report]
        assert loci == sorted(loci, key=loci.index)  # deterministic
        assert validate(three_token_pair(units), "complete") == report

    def test_mode_argument_checked(self):
        with pytest.raises(ValueError):
            validate(three_token_pair(FULL_COVER), "final")


class TestProjection:
    def test_table7_shape(self):
        # 15 source tokens: 12 literal 1:1 units plus one 3-token generalization group
        src = tuple(f"w{i}" for i in range(15))
        tgt = tuple(f"c{j}" for j in range(14))
        units = [unit([i], [i], R.LITERAL) for i in range(12)]
        units.append(unit([12, 13, 14], [12, 13], R.GENERALIZATION))
        pair = SentencePair(id="s1", src_tokens=src, tgt_tokens=tgt, units=tuple(units))
        assert project_source_relations(pair) == tuple(
            [R.LITERAL] * 12 + [R.GENERALIZATION] * 3
        )

    def test_all_literal(self):
        labels = project_source_relations(three_token_pair(FULL_COVER))
        assert labels == (R.LITERAL,) * 3

    def test_reduction_token_carries_label(self):
        # "Peter is six years old ." -> "彼得 六岁 。" with "is" untranslated
        pair = SentencePair(
            id="s1",
            src_tokens=("Peter", "is", "six", "years", "old", "."),
            tgt_tokens=("彼得", "六岁", "。"),
            units=(
                unit([0], [0], R.LITERAL),
                unit([1], [], R.UNALIGNED_REDUCTION),
                unit([2, 3, 4], [1], R.LITERAL),
                unit([5], [2], R.LITERAL),
            ),
        )
        assert project_source_relations(pair)[1] is R.UNALIGNED_REDUCTION

    def test_explicitation_contributes_nothing(self):
        pair = three_token_pair(FULL_COVER + [unit([], [2], R.UNALIGNED_EXPLICITATION)])
        # target token 2 double-covered now, so rebuild with a clean target side
        pair = SentencePair(
            id="s1",
            src_tokens=("a", "b", "c"),
            tgt_tokens=("x", "y", "z", "extra"),
            units=tuple(FULL_COVER) + (unit([], [3], R.UNALIGNED_EXPLICITATION),),
        )
        assert len(project_source_relations(pair)) == 3

    def test_incomplete_raises(self):
        with pytest.raises(AnnotationError) as exc:
            project_source_relations(three_token_pair(FULL_COVER[:2]))
        assert exc.value.code == "INCOMPLETE"


class TestCorpus:
    def test_duplicate_ids_rejected(self):
        pair = three_token_pair(FULL_COVER)
        with pytest.raises(ValueError):
            Corpus("X", (pair, pair))

    def test_unit_counts(self):
        corpus = Corpus("X", (three_token_pair(FULL_COVER),))
        counts = unit_counts(corpus)
        assert counts[R.LITERAL] == 3
        assert sum(counts.values()) == 3


class TestPartitionProperties:
    def test_random_pairs_validate_and_conserve(self):
        rng = random.Random(11)
        for k in range(300):
            pair = random_complete_pair(rng, f"s{k}")
            assert validate(pair, "complete").ok, pair
            assert sum(len(u.src) for u in pair.units) == len(pair.src_tokens)
            assert sum(len(u.tgt) for u in pair.units) == len(pair.tgt_tokens)
            # complete acceptance implies draft acceptance
            assert validate(pair, "draft").ok
            # projection is total and pure
            assert project_source_relations(pair) == project_source_relations(pair)

    def test_single_mutations_always_detected(self):
        rng = random.Random(12)
        for k in range(300):
            pair = random_complete_pair(rng, f"s{k}")
            kind, mutated = mutate_pair(rng, pair)
            report = validate(mutated, "complete")
            assert not report.ok, (kind, mutated)

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=60, deadline=None)
    def test_monotonicity_hypothesis(self, seed):
        pair = random_complete_pair(random.Random(seed))
        assert validate(pair, "complete").ok and validate(pair, "draft").ok

    def test_is_complete_helper(self):
        assert is_complete(three_token_pair(FULL_COVER))
        assert not is_complete(three_token_pair(FULL_COVER[:2]))


class TestSubTag:
    def test_provenance_checked(self):
        with pytest.raises(ValueError):
            SubTag("plural", "guessed")

    def test_unit_groups_sorted(self):
        u = AlignedUnit((3, 1, 2), (5, 4), R.LITERAL)
        assert u.src == (1, 2, 3)
        assert u.tgt == (4, 5)
