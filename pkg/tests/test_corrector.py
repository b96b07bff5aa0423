import io

import pytest

from ocrpost import corrector
from ocrpost.candidates import Candidate, CandidateSet, generate
from ocrpost.corrector import (
    CorrectorConfig,
    build_variants,
    correct_document,
    correct_line,
    format_edits,
    parse_ledger,
    restore_case,
    select_best,
    variants_for_line,
    write_ledger,
)
from ocrpost.ingest import RawDocument, case_pattern_of, tokenize


def cset(original, *alts):
    return CandidateSet(original=original, alternatives=tuple(alts))


class TestBuildVariants:
    def test_single_substitution(self):
        line = tokenize("fuch timeas")
        cs = cset("fuch", Candidate("such", "confusion"))
        got = variants_for_line(line, 0, cs)
        assert got == [["fuch", "timeas"], ["such", "timeas"]]

    def test_split_extends_sequence(self):
        line = tokenize("the timeas")
        cs = cset("timeas", Candidate("time as", "split"))
        got = variants_for_line(line, 1, cs)
        assert got == [["the", "timeas"], ["the", "time", "as"]]
        assert len(got[1]) == len(line.tokens) + 1

    def test_no_alternatives(self):
        line = tokenize("the end")
        got = variants_for_line(line, 0, cset("the"))
        assert got == [["the", "end"]]

    def test_uses_current_slots(self):
        slots = [["so"], ["defire"], ["and"]]
        cs = cset("defire", Candidate("desire", "confusion"))
        got = build_variants(slots, 1, cs)
        assert got == [["so", "defire", "and"], ["so", "desire", "and"]]


class TestSelectBest:
    def test_picks_lower_perplexity(self, fix_model):
        variants = [
            ["fo", "defire"],
            ["so", "desire"],
        ]
        assert select_best(variants, fix_model) == 1

    def test_single_variant(self, fix_model):
        assert select_best([["the", "said"]], fix_model) == 0

    def test_exact_tie_keeps_original(self, fix_model):
        v = ["zzz", "the"]
        assert select_best([v, list(v)], fix_model) == 0

    def test_empty_rejected(self, fix_model):
        with pytest.raises(ValueError):
            select_best([], fix_model)


class TestRestoreCase:
    @pytest.mark.parametrize(
        "surface,replacement,expected",
        [
            ("Enjoyned", "enjoined", "Enjoined"),
            ("fhall", "shall", "shall"),
            ("SAID", "said", "SAID"),
        ],
    )
    def test_examples(self, surface, replacement, expected):
        assert restore_case(case_pattern_of(surface), replacement) == expected

    def test_title_split_each_half(self):
        assert restore_case(case_pattern_of("Timeas"), "time as") == "Time As"

    def test_mixed_falls_back_by_first_position(self):
        assert restore_case(case_pattern_of("DepUty"), "deputies") == "Deputies"
        assert restore_case(case_pattern_of("depUty"), "deputies") == "deputies"


class TestCorrectLine:
    def test_golden_row_two(self, fix_lexicon, fix_cmap, fix_model):
        line = tokenize("fo defire ; and on his Refutal, the faid")
        got = correct_line(line, fix_lexicon, fix_cmap, fix_model)
        assert got.text == "so desire ; and on his Refutal, the said"
        assert [(e.original_surface, e.replacement_surface) for e in got.edits] == [
            ("fo", "so"),
            ("defire", "desire"),
            ("faid", "said"),
        ]

    def test_golden_row_five_case_restored(self, fix_lexicon, fix_cmap, fix_model):
        line = tokenize("ikewife Enjoyned and Required to Call and")
        got = correct_line(line, fix_lexicon, fix_cmap, fix_model)
        assert got.text == "likewise Enjoined and Required to Call and"
        assert [(e.original_surface, e.replacement_surface) for e in got.edits] == [
            ("ikewife", "likewise"),
            ("Enjoyned", "Enjoined"),
        ]

    def test_clean_line_byte_identical(self, fix_lexicon, fix_cmap, fix_model):
        raw = "and on his Refutal the said Guardians shall be bound"
        got = correct_line(tokenize(raw), fix_lexicon, fix_cmap, fix_model)
        assert got.text == raw
        assert got.edits == ()

    def test_empty_line(self, fix_lexicon, fix_cmap, fix_model):
        got = correct_line(tokenize(""), fix_lexicon, fix_cmap, fix_model)
        assert got.text == ""
        assert got.edits == ()

    def test_edits_ordered_and_strictly_improving(
        self, fix_lexicon, fix_cmap, fix_model, golden_doc
    ):
        for cl in correct_document(golden_doc, fix_lexicon, fix_cmap, fix_model):
            indices = [e.token_index for e in cl.edits]
            assert indices == sorted(indices)
            for e in cl.edits:
                assert e.ppl_after < e.ppl_before
                assert e.replacement_surface != e.original_surface

    def test_replay_confirms_recorded_perplexities(
        self, fix_lexicon, fix_cmap, fix_model
    ):
        line = tokenize("fo defire ; and on his Refutal, the faid")
        got = correct_line(line, fix_lexicon, fix_cmap, fix_model)
        slots = [[t.normalized] for t in line.tokens]
        edit_at = {e.token_index: e for e in got.edits}
        for i, tok in enumerate(line.tokens):
            cands = generate(tok, fix_lexicon, fix_cmap)
            if cands.r == 0:
                continue
            variants = build_variants(slots, i, cands)
            ppls = [fix_model.perplexity(v).ppl for v in variants]
            if i in edit_at:
                edit = edit_at[i]
                assert ppls[0] == pytest.approx(edit.ppl_before)
                assert min(ppls) == pytest.approx(edit.ppl_after)
                assert min(ppls) < ppls[0]
                best = ppls.index(min(ppls))
                slots[i] = cands.texts()[best].split(" ")
            else:
                assert min(ppls[1:], default=ppls[0]) >= ppls[0] * (1 - 1e-12)

    def test_split_then_later_edit_same_line(self, fix_lexicon, fix_cmap, fix_model):
        # "suchtimes" only resolves via the two-word split; "faid" after it
        # must still anchor to its original token index
        line = tokenize("at suchtimes the faid")
        got = correct_line(line, fix_lexicon, fix_cmap, fix_model)
        assert got.text == "at such times the said"
        assert [(e.original_surface, e.replacement_surface, e.kind) for e in got.edits] == [
            ("suchtimes", "such times", "split"),
            ("faid", "said", "confusion"),
        ]
        assert [e.token_index for e in got.edits] == [1, 3]
        # the second decision was made on the already-split line
        assert got.edits[1].ppl_before == pytest.approx(got.edits[0].ppl_after)

    def test_no_regression_vs_raw(self, fix_lexicon, fix_cmap, fix_model, golden_doc):
        from ocrpost.ingest import rejoin_hyphens

        raw_lines = rejoin_hyphens(golden_doc).lines()
        for cl in correct_document(golden_doc, fix_lexicon, fix_cmap, fix_model):
            raw_words = [t.normalized for t in tokenize(raw_lines[cl.line_index]).tokens]
            new_words = [t.normalized for t in tokenize(cl.text).tokens]
            if not raw_words:
                continue
            assert (
                fix_model.perplexity(new_words).ppl
                <= fix_model.perplexity(raw_words).ppl
            )


class TestCorrectDocument:
    def test_document_order_and_hyphen_rejoin(self, fix_lexicon, fix_cmap, fix_model):
        doc = RawDocument(
            pages=("the faid Guardi-\nans shall meet", "fo defire the same"),
            source="t",
        )
        got = correct_document(doc, fix_lexicon, fix_cmap, fix_model)
        assert [cl.line_index for cl in got] == [0, 1, 2]
        assert got[0].text.startswith("the said Guardians")
        assert got[2].text.startswith("so desire")

    def test_empty_document(self, fix_lexicon, fix_cmap, fix_model):
        doc = RawDocument(pages=("",), source="t")
        got = correct_document(doc, fix_lexicon, fix_cmap, fix_model)
        assert len(got) == 1 and got[0].text == ""

    def test_workers_do_not_change_output(
        self, fix_lexicon, fix_cmap, fix_model, golden_doc
    ):
        serial = correct_document(golden_doc, fix_lexicon, fix_cmap, fix_model)
        parallel = correct_document(
            golden_doc, fix_lexicon, fix_cmap, fix_model, CorrectorConfig(workers=4)
        )
        assert serial == parallel


class TestLedgerFormat:
    def _lines(self, fix_lexicon, fix_cmap, fix_model, golden_doc):
        return correct_document(golden_doc, fix_lexicon, fix_cmap, fix_model)

    def test_tsv_round_trip(self, fix_lexicon, fix_cmap, fix_model, golden_doc):
        lines = self._lines(fix_lexicon, fix_cmap, fix_model, golden_doc)
        buf = io.StringIO()
        write_ledger(lines, buf)
        buf.seek(0)
        rows = parse_ledger(buf)
        assert len(rows) == len(lines)
        for cl, (text, pairs) in zip(lines, rows):
            assert text == cl.text
            assert pairs == [
                (e.original_surface, e.replacement_surface) for e in cl.edits
            ]

    def test_unicode_arrow(self, fix_lexicon, fix_cmap, fix_model, golden_doc):
        lines = self._lines(fix_lexicon, fix_cmap, fix_model, golden_doc)
        buf = io.StringIO()
        write_ledger(lines, buf, arrow="unicode")
        content = buf.getvalue()
        assert " → " in content
        buf.seek(0)
        rows = parse_ledger(buf)
        assert rows[1][1][0] == ("fo", "so")

    def test_empty_edit_column(self, fix_lexicon, fix_cmap, fix_model, golden_doc):
        lines = self._lines(fix_lexicon, fix_cmap, fix_model, golden_doc)
        buf = io.StringIO()
        write_ledger(lines, buf)
        last_row = buf.getvalue().rstrip("\n").split("\n")[-1]
        assert last_row.endswith("\t")

    def test_header_comments(self, fix_lexicon, fix_cmap, fix_model, golden_doc):
        lines = self._lines(fix_lexicon, fix_cmap, fix_model, golden_doc)
        buf = io.StringIO()
        write_ledger(lines, buf, header=["k=3", "cutoff=0.6"])
        content = buf.getvalue().split("\n")
        assert content[0] == "# k=3"
        buf.seek(0)
        assert len(parse_ledger(buf)) == len(lines)

    def test_format_edits(self):
        edits = [
            corrector.Edit(0, 0, "faid", "said", "confusion", 2.0, 1.0),
            corrector.Edit(0, 2, "fhall", "shall", "confusion", 1.0, 0.5),
        ]
        assert format_edits(edits) == "faid -> said; fhall -> shall"
        assert format_edits(edits, "unicode") == "faid → said; fhall → shall"
