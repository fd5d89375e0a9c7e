"""Trivial web-page text extraction: the largest contiguous text block wins.
A deliberate stand-in for a full article extractor."""

from __future__ import annotations

import re
from html.parser import HTMLParser

import httpx


class FetchError(RuntimeError):
    pass


_SKIP_TAGS = {"script", "style", "noscript", "template", "head", "svg"}
_BLOCK_TAGS = {
    "p", "div", "section", "article", "main", "body", "li", "td",
    "h1", "h2", "h3", "h4", "h5", "h6", "blockquote", "pre", "br",
}


class _TextBlocks(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.blocks: list[str] = []
        self._current: list[str] = []
        self._skip_depth = 0
        self.title = ""
        self._in_title = False

    def handle_starttag(self, tag, attrs):
        if tag in _SKIP_TAGS:
            self._skip_depth += 1
        if tag == "title":
            self._in_title = True
        if tag in _BLOCK_TAGS:
            self._flush()

    def handle_endtag(self, tag):
        if tag in _SKIP_TAGS and self._skip_depth:
            self._skip_depth -= 1
        if tag == "title":
            self._in_title = False
        if tag in _BLOCK_TAGS:
            self._flush()

    def handle_data(self, data):
        if self._in_title:
            self.title += data
            return
        if not self._skip_depth:
            self._current.append(data)

    def _flush(self):
        text = re.sub(r"\s+", " ", "".join(self._current)).strip()
        if text:
            self.blocks.append(text)
        self._current = []

    def close(self):
        self._flush()
        super().close()


def extract_main_text(html: str) -> tuple[str, str]:
    """(title, text of the largest contiguous block group)."""
    parser = _TextBlocks()
    parser.feed(html)
    parser.close()
    if not parser.blocks:
        return parser.title.strip(), ""
    # merge adjacent blocks of similar substance, then take the largest group
    groups: list[list[str]] = [[]]
    for block in parser.blocks:
        if len(block) >= 80:
            groups[-1].append(block)
        elif groups[-1]:
            groups.append([])
    groups = [g for g in groups if g]
    if groups:
        best = max(groups, key=lambda g: sum(len(b) for b in g))
        return parser.title.strip(), " ".join(best)
    return parser.title.strip(), max(parser.blocks, key=len)


def fetch_article(url: str, timeout: float = 20.0) -> tuple[str, str]:
    try:
        resp = httpx.get(url, timeout=timeout, follow_redirects=True)
        resp.raise_for_status()
    except httpx.HTTPError as exc:
        raise FetchError(f"could not fetch {url}: {exc}") from exc
    title, text = extract_main_text(resp.text)
    if not text.strip():
        raise FetchError(f"no extractable text at {url}")
    return title, text
