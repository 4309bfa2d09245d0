"""To-do grammar: exact fixtures, round-trip properties, review parsing."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reviewforge.ingest.extract import extract_text
from reviewforge.prompt import VenueProfile
from reviewforge.review import (
    Locator,
    MalformedTodo,
    MissingTodoSection,
    TodoItem,
    UNKNOWN_TARGET,
    VALID,
    parse_review,
    parse_todo_line,
    render_checklist,
    render_todo,
    validate_locator,
    validate_review,
)

from conftest import FIXTURE_REVIEW_MARKDOWN

PAPER_FIXTURES = [
    (
        "Revise introduction: Describe the research gap [Section 1. L12-L18]",
        ("Revise introduction", "Describe the research gap"),
        Locator(kind="section_lines", section_path=(1,), line_range=(12, 18)),
    ),
    (
        "Update Figure 3 caption: Improve interpretability with detailed descriptions [Page 5. Figure 3]",
        ("Update Figure 3 caption", "Improve interpretability with detailed descriptions"),
        Locator(kind="page_figure", page=5, figure=3),
    ),
    (
        "Add citation: Ensure academic rigor for metric selections [Section 4.1]",
        ("Add citation", "Ensure academic rigor for metric selections"),
        Locator(kind="section", section_path=(4, 1)),
    ),
]


class TestPaperFixtures:
    @pytest.mark.parametrize("line,parts,locator", PAPER_FIXTURES)
    def test_parse_exact_fields(self, line, parts, locator):
        item = parse_todo_line(line)
        assert item.action == parts[0]
        assert item.objective == parts[1]
        assert item.locator == locator
        assert item.done is False

    @pytest.mark.parametrize("line,parts,locator", PAPER_FIXTURES)
    def test_render_byte_identical(self, line, parts, locator):
        assert render_todo(parse_todo_line(line)) == line


class TestGrammar:
    def test_missing_colon(self):
        with pytest.raises(MalformedTodo) as err:
            parse_todo_line("Fix everything [Page 2]")
        assert err.value.reason == "missing colon"

    def test_missing_brackets(self):
        with pytest.raises(MalformedTodo) as err:
            parse_todo_line("Fix it: because reasons Section 2")
        assert err.value.reason == "missing locator brackets"

    def test_unrecognized_locator(self):
        for loc in ("Appendix A", "Sec 2", "page 5", "Section", "Figure 3a", "Table", "L12-L18"):
            with pytest.raises(MalformedTodo) as err:
                parse_todo_line(f"Do thing: for a reason [{loc}]")
            assert err.value.reason == "unrecognized locator"

    def test_reversed_line_range_rejected(self):
        with pytest.raises(MalformedTodo):
            parse_todo_line("A: B [Section 1. L18-L12]")
        with pytest.raises(MalformedTodo):
            parse_todo_line("A: B [Section 1. L0-L4]")

    def test_internal_spaces_normalized(self):
        item = parse_todo_line("A:  B  [Page 1]")
        assert render_todo(item) == "A: B [Page 1]"

    def test_keyword_case_sensitive(self):
        with pytest.raises(MalformedTodo):
            parse_todo_line("A: B [page 1]")
        with pytest.raises(MalformedTodo):
            parse_todo_line("A: B [SECTION 1]")

    def test_list_markers_stripped(self):
        for prefix in ("- ", "* ", "+ ", "- [ ] ", "- [x] ", "[ ] "):
            item = parse_todo_line(prefix + "A: B [Table 2]")
            assert item.locator.table == 2

    def test_empty_action_or_objective(self):
        with pytest.raises(MalformedTodo):
            parse_todo_line(": B [Page 1]")
        with pytest.raises(MalformedTodo):
            parse_todo_line("A:   [Page 1]")

    def test_multiple_space_tolerance_in_locator(self):
        item = parse_todo_line("A: B [Section   2.1.3]")
        assert item.locator.section_path == (2, 1, 3)


# --- round-trip property -----------------------------------------------------

_words = st.lists(
    st.text(alphabet="abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789,.;'-", min_size=1, max_size=10)
    .filter(lambda w: ":" not in w and "[" not in w and "]" not in w),
    min_size=1,
    max_size=6,
)
_clause = _words.map(" ".join).filter(lambda s: s.strip() and not s.startswith(("-", "*", "+")))


@st.composite
def locators(draw):
    kind = draw(st.sampled_from(["section", "section_lines", "page", "page_figure", "figure", "table"]))
    if kind == "section":
        return Locator(kind=kind, section_path=tuple(draw(st.lists(st.integers(1, 30), min_size=1, max_size=4))))
    if kind == "section_lines":
        a = draw(st.integers(1, 400))
        b = draw(st.integers(a, a + 200))
        return Locator(
            kind=kind,
            section_path=tuple(draw(st.lists(st.integers(1, 30), min_size=1, max_size=4))),
            line_range=(a, b),
        )
    if kind == "page":
        return Locator(kind=kind, page=draw(st.integers(1, 500)))
    if kind == "page_figure":
        return Locator(kind=kind, page=draw(st.integers(1, 500)), figure=draw(st.integers(1, 99)))
    if kind == "figure":
        return Locator(kind=kind, figure=draw(st.integers(1, 99)))
    return Locator(kind=kind, table=draw(st.integers(1, 99)))


@st.composite
def todo_items(draw):
    return TodoItem(
        index=0,
        action=draw(_clause),
        objective=draw(_clause),
        locator=draw(locators()),
    )


@settings(max_examples=300, deadline=None)
@given(todo_items())
def test_round_trip_identity(item):
    rendered = render_todo(item)
    parsed = parse_todo_line(rendered)
    assert parsed.action == item.action
    assert parsed.objective == item.objective
    assert parsed.locator == item.locator


@settings(max_examples=150, deadline=None)
@given(todo_items())
def test_render_parse_render_idempotent(item):
    once = render_todo(item)
    again = render_todo(parse_todo_line(once))
    assert once == again


# --- parse_review -------------------------------------------------------------


@pytest.fixture
def profile():
    return VenueProfile(venue="testconf")


class TestParseReview:
    def test_fixture_markdown(self, profile):
        review = parse_review(FIXTURE_REVIEW_MARKDOWN, profile, manuscript_id="m1", venue="testconf")
        assert len(review.todos) == 5
        assert [t.index for t in review.todos] == list(range(5))
        assert review.summary.startswith("The manuscript studies rolling calibration")
        assert set(review.dimension_comments) == {"originality", "soundness", "clarity", "significance"}
        assert all(review.dimension_comments[d] for d in review.dimension_comments)
        assert len(review.strengths) == 2
        assert len(review.weaknesses) == 2
        assert review.raw_markdown == FIXTURE_REVIEW_MARKDOWN

    def test_missing_todo_section(self, profile):
        with pytest.raises(MissingTodoSection):
            parse_review("## Summary\nFine work.\n", profile)

    def test_partial_tolerance(self, profile):
        md = "## To-Do\n- Good: item [Page 1]\n- Broken item without colon [Page 2]\n"
        review = parse_review(md, profile)
        assert len(review.todos) == 1
        assert len(review.malformed) == 1
        assert review.malformed[0][1] == "missing colon"
        assert review.raw_markdown == md

    def test_header_case_and_order_tolerant(self, profile):
        md = "## TO-DO\n- A: B [Page 1]\n\n## summary\nLate summary.\n"
        review = parse_review(md, profile)
        assert review.summary == "Late summary."
        assert len(review.todos) == 1

    def test_unknown_sections_preserved_in_raw(self, profile):
        md = "## Ethics\nAll good.\n## To-Do\n- A: B [Page 1]\n"
        review = parse_review(md, profile)
        assert "Ethics" in review.raw_markdown
        assert len(review.todos) == 1


@pytest.fixture(scope="module")
def man(three_page_pdf):
    return extract_text(three_page_pdf)


class TestValidateLocator:
    def test_page_bounds(self, man):
        assert validate_locator(Locator(kind="page", page=3), man) == VALID
        assert validate_locator(Locator(kind="page", page=5), man) == UNKNOWN_TARGET
        assert validate_locator(Locator(kind="page", page=0), man) == UNKNOWN_TARGET

    def test_sections(self, man):
        assert validate_locator(Locator(kind="section", section_path=(1,)), man) == VALID
        assert validate_locator(Locator(kind="section", section_path=(2, 1)), man) == VALID
        assert validate_locator(Locator(kind="section", section_path=(9,)), man) == UNKNOWN_TARGET

    def test_figures_and_tables(self, man):
        assert validate_locator(Locator(kind="figure", figure=1), man) == VALID
        assert validate_locator(Locator(kind="figure", figure=9), man) == UNKNOWN_TARGET
        assert validate_locator(Locator(kind="table", table=1), man) == VALID
        assert validate_locator(Locator(kind="page_figure", page=2, figure=1), man) == VALID
        assert validate_locator(Locator(kind="page_figure", page=9, figure=1), man) == UNKNOWN_TARGET

    def test_section_lines_against_sentence_count(self, man):
        count = len(man.sentences_in_section((1,)))
        assert count >= 2
        ok = Locator(kind="section_lines", section_path=(1,), line_range=(1, count))
        over = Locator(kind="section_lines", section_path=(1,), line_range=(1, count + 5))
        assert validate_locator(ok, man) == VALID
        assert validate_locator(over, man) == UNKNOWN_TARGET

    def test_rendered_todos_never_malformed(self, man, profile):
        review = parse_review(FIXTURE_REVIEW_MARKDOWN, profile)
        report = validate_review(review, man)
        assert len(report.statuses) == len(review.todos)
        assert set(report.statuses) <= {VALID, UNKNOWN_TARGET}
        assert VALID in report.statuses


def test_render_checklist_marks_done():
    items = [
        parse_todo_line("A: B [Page 1]"),
        parse_todo_line("C: D [Table 2]", index=1),
    ]
    items[1].done = True
    text = render_checklist(items)
    assert text.splitlines() == ["- [ ] A: B [Page 1]", "- [x] C: D [Table 2]"]


def test_review_json_dict_round_trip(profile):
    from reviewforge.review import review_from_dict, review_to_dict

    review = parse_review(FIXTURE_REVIEW_MARKDOWN, profile, manuscript_id="m9", venue="vtest")
    review.todos[1].done = True
    raw = review_to_dict(review)
    assert raw["schema_version"] == 1
    again = review_from_dict(raw)
    assert again.id == review.id
    assert again.raw_markdown == FIXTURE_REVIEW_MARKDOWN
    assert again.todos[1].done is True
    assert [render_todo(t) for t in again.todos] == [render_todo(t) for t in review.todos]
