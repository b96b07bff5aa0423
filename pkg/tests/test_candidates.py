import itertools
import random

import pytest

from ocrpost.candidates import (
    CONFUSION,
    SIMILARITY,
    SPLIT,
    ConfusionMap,
    ConfusionMapError,
    confusion_variants,
    generate,
    split_variants,
)
from ocrpost.ingest import tokenize
from ocrpost.lexicon import Lexicon, contains


def make_lex(*words: str) -> Lexicon:
    return Lexicon(set(words), [("inline", len(words))])


class TestConfusionMap:
    def test_default_is_long_s(self):
        cmap = ConfusionMap()
        assert cmap.entries == {"f": ("s",)}
        assert cmap.max_sites == 8

    def test_self_mapping_rejected(self):
        with pytest.raises(ConfusionMapError):
            ConfusionMap(entries={"f": ("f",)})

    def test_max_sites_validated(self):
        with pytest.raises(ConfusionMapError):
            ConfusionMap(max_sites=0)

    def test_multichar_rejected(self):
        with pytest.raises(ConfusionMapError):
            ConfusionMap(entries={"ff": ("s",)})

    def test_from_file(self, tmp_path):
        f = tmp_path / "map.txt"
        f.write_text("# confusables\nf s\ne c,o\n")
        cmap = ConfusionMap.from_file(str(f), max_sites=4)
        assert cmap.entries == {"f": ("s",), "e": ("c", "o")}
        assert cmap.max_sites == 4

    def test_from_file_bad_line(self, tmp_path):
        f = tmp_path / "map.txt"
        f.write_text("justoneword\n")
        with pytest.raises(ConfusionMapError):
            ConfusionMap.from_file(str(f))


class TestConfusionVariants:
    def test_fhall(self):
        lex = make_lex("shall", "the")
        got = confusion_variants("fhall", ConfusionMap(), lex)
        assert {c.text for c in got} == {"shall"}
        assert all(c.kind == CONFUSION for c in got)

    def test_defire_word_internal(self):
        lex = make_lex("desire")
        got = confusion_variants("defire", ConfusionMap(), lex)
        assert {c.text for c in got} == {"desire"}

    def test_unreachable_without_lexicon_entry(self):
        lex = make_lex("the", "said")
        assert confusion_variants("fignification", ConfusionMap(), lex) == set()

    def test_reachable_with_lexicon_entry(self):
        lex = make_lex("signification")
        got = confusion_variants("fignification", ConfusionMap(), lex)
        assert {c.text for c in got} == {"signification"}

    def test_multiple_sites_all_subsets(self):
        lex = make_lex("poffeffion", "possession", "poffession", "possefsion")
        got = {c.text for c in confusion_variants("poffeffion", ConfusionMap(), lex)}
        # all reachable lexicon members except the original itself
        assert "possession" in got
        assert "poffeffion" not in got

    def test_all_sites_fallback_beyond_cap(self):
        word = "f" * 10
        lex = make_lex("s" * 10, "sfffffffff")
        cmap = ConfusionMap(max_sites=3)
        got = {c.text for c in confusion_variants(word, cmap, lex)}
        assert "s" * 10 in got  # all-sites variant despite the cap
        assert "sfffffffff" in got  # 1-site subset within the cap

    def test_output_bounded_by_cap(self):
        word = "f" * 12
        # lexicon contains every f/s combination so nothing is filtered
        lex = make_lex(
            *("".join(p) for p in itertools.product("fs", repeat=12))
        )
        cmap = ConfusionMap(max_sites=4)
        got = confusion_variants(word, cmap, lex)
        assert len(got) <= 2**cmap.max_sites

    def test_multi_replacement_entries(self):
        lex = make_lex("cat", "cot")
        cmap = ConfusionMap(entries={"e": ("a", "o")})
        got = {c.text for c in confusion_variants("cet", cmap, lex)}
        assert got == {"cat", "cot"}

    def test_brute_force_equivalence(self):
        rng = random.Random(3)
        alphabet = "fas"
        lexicon_words = {
            "".join(rng.choice(alphabet) for _ in range(n))
            for n in range(1, 9)
            for _ in range(30)
        }
        lex = make_lex(*lexicon_words)
        cmap = ConfusionMap(max_sites=8)
        for _ in range(80):
            word = "".join(rng.choice(alphabet) for _ in range(rng.randrange(1, 9)))
            sites = [i for i, ch in enumerate(word) if ch == "f"]
            expected = set()
            for size in range(1, len(sites) + 1):
                for combo in itertools.combinations(sites, size):
                    chars = list(word)
                    for pos in combo:
                        chars[pos] = "s"
                    variant = "".join(chars)
                    if variant != word and contains(lex, variant):
                        expected.add(variant)
            got = {c.text for c in confusion_variants(word, cmap, lex)}
            assert got == expected


class TestSplitVariants:
    def test_timeas(self):
        lex = make_lex("time", "as", "tim", "eas", "ti", "meas")
        got = {c.text for c in split_variants("timeas", lex)}
        assert got == {"time as", "tim eas", "ti meas"}

    def test_ikewife(self):
        lex = make_lex("ike", "wife")
        got = {c.text for c in split_variants("ikewife", lex)}
        assert got == {"ike wife"}

    def test_no_split(self):
        assert split_variants("ab", make_lex("cd")) == set()

    def test_single_letter_halves_allowed(self):
        lex = make_lex("f", "aid")
        assert {c.text for c in split_variants("faid", lex)} == {"f aid"}

    def test_kind_and_one_space(self):
        lex = make_lex("time", "as")
        for cand in split_variants("timeas", lex):
            assert cand.kind == SPLIT
            assert cand.text.count(" ") == 1


class TestGenerate:
    def test_faid_superset(self, fix_lexicon):
        cset = generate("faid", fix_lexicon)
        by_text = {c.text: c for c in cset.alternatives}
        assert by_text["said"].kind == CONFUSION
        assert by_text["fid"].kind == SIMILARITY
        assert by_text["fraid"].kind == SIMILARITY

    def test_recognized_without_sites_untouched(self, fix_lexicon):
        cset = generate("the", fix_lexicon)
        assert cset.r == 0
        assert cset.texts() == ["the"]

    def test_fo_gets_confusion(self, fix_lexicon):
        cset = generate("fo", fix_lexicon)
        assert "so" in {c.text for c in cset.alternatives}

    def test_recognized_with_sites_only_confusion(self):
        lex = make_lex("for", "sor", "or", "f")
        cset = generate("for", lex)
        kinds = {c.kind for c in cset.alternatives}
        assert {c.text for c in cset.alternatives} == {"sor"}
        assert kinds == {CONFUSION}

    def test_unrecognized_gets_all_rules(self, fix_lexicon):
        cset = generate("timeas", fix_lexicon)
        by_text = {c.text: c for c in cset.alternatives}
        assert by_text["time as"].kind == SPLIT
        assert by_text["times"].kind == SIMILARITY

    def test_numeric_token_untouched(self, fix_lexicon):
        assert generate("1719", fix_lexicon).r == 0

    def test_token_input(self, fix_lexicon):
        tok = tokenize("Defire").tokens[0]
        cset = generate(tok, fix_lexicon)
        assert cset.original == "defire"
        assert "desire" in {c.text for c in cset.alternatives}

    def test_dedupe_prefers_confusion(self):
        # "said" reachable via confusion and also among the close matches
        lex = make_lex("said", "aid", "sail")
        cset = generate("faid", lex, k=5, cutoff=0.5)
        said = [c for c in cset.alternatives if c.text == "said"]
        assert len(said) == 1
        assert said[0].kind == CONFUSION

    def test_no_duplicates_and_no_original(self, fix_lexicon):
        for word in ("faid", "fhall", "timeas", "ikewife", "fuch", "fo"):
            cset = generate(word, fix_lexicon)
            texts = [c.text for c in cset.alternatives]
            assert len(texts) == len(set(texts))
            assert word not in texts

    def test_membership_invariants(self, fix_lexicon):
        for word in ("faid", "timeas", "ikewife", "enjoyned"):
            cset = generate(word, fix_lexicon)
            for cand in cset.alternatives:
                if cand.kind == SPLIT:
                    left, right = cand.text.split(" ")
                    assert contains(fix_lexicon, left)
                    assert contains(fix_lexicon, right)
                else:
                    assert " " not in cand.text
                    assert contains(fix_lexicon, cand.text)

    def test_size_bound(self, fix_lexicon):
        k = 3
        for word in ("faid", "timeas", "fucceffors", "ikewife"):
            cset = generate(word, fix_lexicon, k=k)
            assert cset.r <= 2**8 + (len(word) - 1) + k
