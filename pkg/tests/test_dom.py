import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wattagent.errors import ParseError, ValidationError
from wattagent.tokenization import (
    FULL_CONTEXT,
    NO_CONTEXT,
    HeuristicCharCounter,
    WhitespaceWordCounter,
    cleaned_element_repr,
    count_tokens,
    dom_elements,
    dom_expansion_factor,
    page_expansion_counts,
)
from wattagent.tokenization.dom import ContextPolicy


def ceil4(s):
    return math.ceil(len(s) / 4)


def test_three_elements_with_parent_links():
    els = dom_elements("<html><body><a>x</a></body></html>")
    assert [e.tag for e in els] == ["html", "body", "a"]
    a = els[2]
    assert a.parent_repr == "body"
    assert els[a.parent].tag == "body"
    assert els[1].children == [2]


def test_singleton_self_closing():
    (div,) = dom_elements("<div/>")
    assert div.parent_repr is None and div.child_reprs == []
    assert div.source_span == (0, 6)


def test_1135_element_page(fixtures):
    html = (fixtures / "html" / "page_1135.html").read_text()
    assert len(dom_elements(html)) == 1135


def test_forgiving_recovery():
    html = "<div><p>one<p>two<span>x</div>tail</b><br><i>q"
    els = dom_elements(html)
    assert [e.tag for e in els] == ["div", "p", "p", "span", "br", "i"]
    div = els[0]
    assert div.source_span == (0, html.index("tail"))
    # unclosed <i> runs to the end of the document
    assert els[-1].source_span[1] == len(html)


def test_salient_attributes_only():
    (inp,) = dom_elements('<input type="text" name="q" style="x" placeholder="Search" data-k="1">')
    assert inp.salient_attributes == {"type": "text", "name": "q", "placeholder": "Search"}


def test_not_text_is_parse_error():
    with pytest.raises(ParseError):
        dom_elements(12345)
    with pytest.raises(ParseError):
        dom_elements(b"\xff\xfe<div>")


def test_crlf_offsets():
    html = "<ul>\r\n<li>a</li>\n<li>b</li></ul>"
    for e in dom_elements(html):
        start, end = e.source_span
        assert html[start:].startswith("<" + e.tag)


def test_no_context_repr_matches_own_slice():
    (div,) = dom_elements("<div>hello</div>")
    counter = HeuristicCharCounter()
    assert count_tokens(cleaned_element_repr(div, NO_CONTEXT), counter) == count_tokens(
        "<div>hello</div>", counter)


def test_full_context_mentions_parent():
    els = dom_elements("<html><body><a>x</a></body></html>")
    assert "body" in cleaned_element_repr(els[2], FULL_CONTEXT)
    assert "body" not in cleaned_element_repr(els[2], NO_CONTEXT)


def test_children_capped_at_five():
    html = "<ul>" + "".join(f"<li>{i}</li>" for i in range(8)) + "</ul>"
    ul = dom_elements(html)[0]
    assert len(ul.child_reprs) == 5
    assert cleaned_element_repr(ul).count(" li ") == 5


def test_marker_text_truncated():
    els = dom_elements("<div>" + "x" * 50 + "<p>a</p></div>")
    assert els[1].parent_repr == "div " + "x" * 32


def test_flat_page_no_context_is_one(fixtures):
    html = (fixtures / "html" / "flat.html").read_text()
    est = dom_expansion_factor(html, HeuristicCharCounter(), NO_CONTEXT)
    assert est.k_hat == 1.0
    assert est.within_paper_bounds


def test_max_context_fixture_is_three(fixtures):
    html = (fixtures / "html" / "max_context.html").read_text()
    # hand tally with ceil(len / 4):
    #   div own  '<div>Pick a size for your order</div>'          37 ch -> 10
    #   p own    '<p>small</p>' (x5)                              12 ch ->  3 each
    #   div repr own + 5 x ' p <word>'                             77 ch -> 20
    #   p repr   own + ' div Pick a size for your order'           43 ch -> 11 each
    page = 10 + 5 * 3
    reprs = 20 + 5 * 11
    assert (page, reprs) == (25, 75)
    est = dom_expansion_factor(html, HeuristicCharCounter(), FULL_CONTEXT)
    assert est.page_tokens == (page,) and est.repr_tokens == (reprs,)
    assert est.k_hat == pytest.approx(3.0, abs=1e-9)


def deep_chain_oracle(levels=10):
    """Brute-force tally for the nested-div fixture, built without the parser."""
    page = reprs = 0
    for i in range(levels):
        own = f'<div class="level{i}">level {i} </div>'
        parts = [own]
        if i > 0:
            parts.append(f"div level {i - 1}")
        if i < levels - 1:
            parts.append(f"div level {i + 1}")
        page += ceil4(own)
        reprs += ceil4(" ".join(parts))
    return page, reprs


def test_deep_chain_matches_brute_force(fixtures):
    html = (fixtures / "html" / "deep_chain.html").read_text()
    page, reprs = deep_chain_oracle()
    est = dom_expansion_factor(html, HeuristicCharCounter(), FULL_CONTEXT)
    assert est.page_tokens == (page,) and est.repr_tokens == (reprs,)
    assert est.k_hat == reprs / page
    assert 1 < est.k_hat <= 3 and est.within_paper_bounds


def test_multi_page_weighted_mean(fixtures):
    pages = [(fixtures / "html" / n).read_text() for n in ("flat.html", "deep_chain.html")]
    est = dom_expansion_factor(pages)
    assert len(est.per_page_k) == 2
    weighted = sum(k * p for k, p in zip(est.per_page_k, est.page_tokens)) / sum(est.page_tokens)
    assert est.k_hat == pytest.approx(weighted, rel=1e-15)


def test_out_of_bounds_flagged_not_raised():
    wide = ContextPolicy(max_children=50, text_chars=500)
    # every short child repeats the parent's long text
    html = "<ul>" + "w" * 400 + "".join("<li>x</li>" for _ in range(20)) + "</ul>"
    est = dom_expansion_factor(html, HeuristicCharCounter(), wide)
    assert est.k_hat > 3 and not est.within_paper_bounds


def test_zero_token_page():
    with pytest.raises(ValidationError):
        dom_expansion_factor("just text, no elements")
    with pytest.raises(ValidationError):
        dom_expansion_factor([])


# random documents for the property checks
TAGS = ["div", "p", "span", "a", "li", "section"]


@st.composite
def trees(draw, depth=0):
    tag = draw(st.sampled_from(TAGS))
    text = draw(st.text(alphabet="ab cd\n", max_size=12))
    kids = [] if depth >= 3 else draw(st.lists(trees(depth=depth + 1), max_size=3))
    tail = draw(st.text(alphabet="xy ", max_size=6))
    return f"<{tag}>{text}{''.join(kids)}{tail}</{tag}>"


documents = st.lists(trees(), min_size=1, max_size=3).map("".join)


@settings(max_examples=200)
@given(documents)
def test_spans_nest_and_partition(html):
    els = dom_elements(html)
    for e in els:
        s, t = e.source_span
        assert 0 <= s <= t <= len(html)
        for c in e.children:
            cs, ct = els[c].source_span
            assert s <= cs <= ct <= t
    assert [e.source_span[0] for e in els] == sorted(e.source_span[0] for e in els)
    assert sum(len(e.own_text) for e in els) == len(html)


@settings(max_examples=200)
@given(documents, st.sampled_from([HeuristicCharCounter(), HeuristicCharCounter(3),
                                   WhitespaceWordCounter()]))
def test_own_slices_bounded_by_page_plus_markup(html, counter):
    els = dom_elements(html)
    own = sum(count_tokens(e.own_text, counter) for e in els)
    assert own <= count_tokens(html, counter) + len(els) * counter.markup_epsilon


@settings(max_examples=200)
@given(documents)
def test_no_context_is_exactly_one(html):
    page, reprs = page_expansion_counts(html, HeuristicCharCounter(), NO_CONTEXT)
    if page:
        assert reprs / page == 1.0


@settings(max_examples=100)
@given(documents)
def test_full_context_never_below_one(html):
    est = dom_expansion_factor(html, HeuristicCharCounter(), FULL_CONTEXT)
    assert est.k_hat >= 1.0
