"""Forgiving DOM extraction and DOM-expansion analysis.

Every element records its character span in the original document.  An
element's *own* text is its span with the spans of its children cut out,
so the own texts of all elements partition the element-covered part of
the page.  A cleaned element representation starts from that own text and
optionally appends short markers for the parent and the direct children.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from html.parser import HTMLParser

from ..errors import ParseError, ValidationError
from .counters import DEFAULT_COUNTER, TokenCounter, count_tokens

VOID_TAGS = frozenset(
    "area base br col embed hr img input link meta param source track wbr".split()
)
SALIENT_ATTRIBUTES = frozenset(
    "id class title alt value placeholder aria-label href name type".split()
)
_SPACE_RE = re.compile(r"\s+")


@dataclass(frozen=True)
class ContextPolicy:
    """How much neighbourhood goes into a cleaned element representation."""

    include_parent: bool = True
    include_children: bool = True
    max_children: int = 5
    text_chars: int = 32
    salient_attributes: frozenset = SALIENT_ATTRIBUTES

    @property
    def name(self):
        if not (self.include_parent or self.include_children):
            return "no-context"
        if self.include_parent and self.include_children:
            return "full-context"
        return "parent-only" if self.include_parent else "children-only"


NO_CONTEXT = ContextPolicy(include_parent=False, include_children=False)
FULL_CONTEXT = ContextPolicy()
POLICIES = {"no-context": NO_CONTEXT, "full-context": FULL_CONTEXT}


@dataclass
class DomElement:
    tag: str
    text: str
    salient_attributes: dict
    parent_repr: str | None
    child_reprs: list
    source_span: tuple
    own_text: str = ""
    index: int = 0
    parent: int | None = None
    children: list = field(default_factory=list)


class _Node:
    __slots__ = ("tag", "attrs", "start", "end", "parent", "children", "text_parts")

    def __init__(self, tag, attrs, start, parent):
        self.tag = tag
        self.attrs = attrs
        self.start = start
        self.end = None
        self.parent = parent
        self.children = []
        self.text_parts = []


class _SpanParser(HTMLParser):
    def __init__(self, html):
        super().__init__(convert_charrefs=True)
        self.html = html
        self.line_starts = [0] + [m.end() for m in re.finditer("\n", html)]
        self.nodes = []
        self.stack = []

    def _offset(self):
        line, col = self.getpos()
        return self.line_starts[line - 1] + col

    def _open(self, tag, attrs):
        start = self._offset()
        parent = self.stack[-1] if self.stack else None
        node = _Node(tag, attrs, start, parent)
        if parent is not None:
            parent.children.append(node)
        self.nodes.append(node)
        return node, start + len(self.get_starttag_text() or "")

    def handle_starttag(self, tag, attrs):
        node, tag_end = self._open(tag, attrs)
        if tag in VOID_TAGS:
            node.end = tag_end
        else:
            self.stack.append(node)

    def handle_startendtag(self, tag, attrs):
        node, tag_end = self._open(tag, attrs)
        node.end = tag_end

    def handle_endtag(self, tag):
        if not any(n.tag == tag for n in self.stack):
            return  # stray end tag
        start = self._offset()
        close = self.html.find(">", start)
        end = len(self.html) if close < 0 else close + 1
        while self.stack:
            node = self.stack.pop()
            if node.tag == tag:
                node.end = end
                return
            node.end = start  # implicitly closed by an ancestor's end tag

    def handle_data(self, data):
        if self.stack:
            self.stack[-1].text_parts.append(data)

    def finish(self):
        self.close()
        for node in self.stack:
            node.end = len(self.html)
        self.stack = []
        return self.nodes


def _parse(html):
    if isinstance(html, (bytes, bytearray)):
        try:
            html = bytes(html).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"document is not UTF-8 text: {exc}") from exc
    if not isinstance(html, str):
        raise ParseError(f"expected an HTML document as text, got {type(html).__name__}")
    if "\x00" in html:
        raise ParseError("document contains NUL bytes; not text")
    parser = _SpanParser(html)
    try:
        parser.feed(html)
        nodes = parser.finish()
    except Exception as exc:  # html.parser is forgiving; anything left is fatal
        raise ParseError(f"cannot parse document: {exc}") from exc
    return html, nodes


def _direct_text(node):
    return _SPACE_RE.sub(" ", "".join(node.text_parts)).strip()


def marker(tag: str, text: str, text_chars: int = 32) -> str:
    """Short textual stand-in for a neighbouring element: tag plus leading text."""
    text = text[:text_chars].strip()
    return f"{tag} {text}" if text else tag


def _own_text(html, node):
    pieces = []
    cursor = node.start
    for child in node.children:
        pieces.append(html[cursor:child.start])
        cursor = child.end
    pieces.append(html[cursor:node.end])
    return "".join(pieces)


def dom_elements(html, policy: ContextPolicy = FULL_CONTEXT) -> list[DomElement]:
    """Parse ``html`` and return one record per element, in document order.

    Unclosed tags are closed implicitly by an ancestor's end tag or by the end
    of the document; stray end tags are ignored.
    """
    html, nodes = _parse(html)
    index = {id(n): i for i, n in enumerate(nodes)}
    texts = [_direct_text(n) for n in nodes]
    out = []
    for i, node in enumerate(nodes):
        parent = node.parent
        salient = {k: (v or "") for k, v in node.attrs if k in policy.salient_attributes}
        out.append(
            DomElement(
                tag=node.tag,
                text=texts[i],
                salient_attributes=salient,
                parent_repr=(
                    None if parent is None
                    else marker(parent.tag, texts[index[id(parent)]], policy.text_chars)
                ),
                child_reprs=[
                    marker(c.tag, texts[index[id(c)]], policy.text_chars)
                    for c in node.children[: policy.max_children]
                ],
                source_span=(node.start, node.end),
                own_text=_own_text(html, node),
                index=i,
                parent=None if parent is None else index[id(parent)],
                children=[index[id(c)] for c in node.children],
            )
        )
    return out


def cleaned_element_repr(e: DomElement, policy: ContextPolicy = FULL_CONTEXT) -> str:
    """Text an element-ranking model would see for ``e``.

    The core is the element's own source text (tag, attributes, direct text);
    with :data:`NO_CONTEXT` nothing else is added.
    """
    parts = [e.own_text]
    if policy.include_parent and e.parent_repr is not None:
        parts.append(e.parent_repr)
    if policy.include_children:
        parts.extend(e.child_reprs[: policy.max_children])
    return " ".join(parts)


@dataclass(frozen=True)
class ExpansionEstimate:
    k_hat: float
    per_page_k: tuple
    page_tokens: tuple
    repr_tokens: tuple
    within_paper_bounds: bool

    def to_dict(self):
        return {
            "k_hat": self.k_hat,
            "per_page_k": list(self.per_page_k),
            "page_tokens": list(self.page_tokens),
            "repr_tokens": list(self.repr_tokens),
            "within_paper_bounds": self.within_paper_bounds,
        }


def page_expansion_counts(html, counter: TokenCounter = DEFAULT_COUNTER,
                          policy: ContextPolicy = FULL_CONTEXT) -> tuple[int, int]:
    """Return ``(page_tokens, repr_tokens)`` for one document.

    Page tokens are counted slice by slice over the elements' own texts,
    which keeps the no-context ratio at exactly 1.  Text outside every
    element (doctype, surrounding whitespace) is not part of any element
    and is left out of both counts.
    """
    elements = dom_elements(html, policy)
    page = 0
    reprs = 0
    for e in elements:
        page += count_tokens(e.own_text, counter)
        reprs += count_tokens(cleaned_element_repr(e, policy), counter)
    return page, reprs


def dom_expansion_factor(html, counter: TokenCounter = DEFAULT_COUNTER,
                         policy: ContextPolicy = FULL_CONTEXT) -> ExpansionEstimate:
    """Estimate the multiplier between cleaned-element tokens and raw page tokens.

    ``html`` may be one document or an iterable of documents; ``k_hat`` is
    the page-token-weighted mean of the per-page ratios.  Ratios outside
    ``[1, 3]`` are flagged, not rejected.
    """
    pages = [html] if isinstance(html, (str, bytes, bytearray)) else list(html)
    if not pages:
        raise ValidationError("no documents given")
    page_tokens, repr_tokens, per_page = [], [], []
    for doc in pages:
        p, r = page_expansion_counts(doc, counter, policy)
        if p == 0:
            raise ValidationError("page has zero tokens; expansion factor undefined")
        page_tokens.append(p)
        repr_tokens.append(r)
        per_page.append(r / p)
    k_hat = sum(repr_tokens) / sum(page_tokens)
    return ExpansionEstimate(
        k_hat=k_hat,
        per_page_k=tuple(per_page),
        page_tokens=tuple(page_tokens),
        repr_tokens=tuple(repr_tokens),
        within_paper_bounds=1.0 <= k_hat <= 3.0,
    )


def document_span_residue(html) -> str:
    """Text of ``html`` not covered by any element span."""
    html, nodes = _parse(html)
    covered = sorted((n.start, n.end) for n in nodes if n.parent is None)
    pieces, cursor = [], 0
    for start, end in covered:
        pieces.append(html[cursor:start])
        cursor = max(cursor, end)
    pieces.append(html[cursor:])
    return "".join(pieces)


_SCRIPT_STYLE_RE = re.compile(r"<(script|style)\b[^>]*>.*?</\1\s*>", re.I | re.S)


def strip_script_style(html: str) -> str:
    """Remove ``<script>`` and ``<style>`` elements including their contents."""
    return _SCRIPT_STYLE_RE.sub("", html)


__all__ = [
    "ContextPolicy", "DomElement", "ExpansionEstimate", "FULL_CONTEXT", "NO_CONTEXT",
    "POLICIES", "SALIENT_ATTRIBUTES", "cleaned_element_repr", "dom_elements",
    "dom_expansion_factor", "marker", "page_expansion_counts", "strip_script_style",
]
