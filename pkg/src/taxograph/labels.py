"""Label normalization and compound decomposition.

A label is identified by its normalized text: lowercase, letters and
digits only, words separated by single spaces. Raw labels from source
datasets carry case, parenthetical qualifiers ("(object) rustling"),
slash alternatives ("shop/supermarket") and hyphens ("subway-train");
:func:`normalize` strips all of that.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Sequence

from .errors import EmptyLabel, InvalidLabel

OBJECT = "object"
ACTION = "action"
UNTAGGED = "untagged"
KINDS = (UNTAGGED, OBJECT, ACTION)

# join order for kind metadata: a tagged kind beats untagged, action beats object
_KIND_RANK = {UNTAGGED: 0, OBJECT: 1, ACTION: 2}

_PARENTHETICAL = re.compile(r"\([^()]*\)|\[[^\[\]]*\]")
_APOSTROPHES = re.compile(r"['’`]")
_SPACES = re.compile(r"\s+")


def is_normalized(text: str) -> bool:
    """True if ``text`` already satisfies every Label invariant."""
    if not text or text != text.strip() or "  " in text:
        return False
    for ch in text:
        if ch == " ":
            continue
        if not ch.isalnum() or ch.isupper():
            return False
    return True


def join_kinds(a: str, b: str) -> str:
    """Combine two kind tags; commutative, associative and idempotent."""
    return a if _KIND_RANK[a] >= _KIND_RANK[b] else b


@dataclass(frozen=True)
class Label:
    """An atomic, normalized vocabulary term.

    Equality and hashing use ``text`` only; ``kind`` is metadata.
    """

    text: str
    kind: str = field(default=UNTAGGED, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidLabel(f"unknown label kind {self.kind!r}")
        if not is_normalized(self.text):
            raise InvalidLabel(f"not a normalized label: {self.text!r}")

    def __str__(self) -> str:
        return self.text

    def with_kind(self, kind: str) -> "Label":
        return Label(self.text, kind)


def raw_key(raw: str) -> str:
    """Lookup key for a raw label: lowercase, whitespace collapsed, punctuation kept."""
    return _SPACES.sub(" ", raw.strip().lower())


def _strip_parentheticals(text: str) -> str:
    # repeat so nested qualifiers like "a (b (c))" vanish entirely
    while True:
        stripped = _PARENTHETICAL.sub(" ", text)
        if stripped == text:
            return stripped
        text = stripped


def normalize_text(raw: str) -> str:
    """Normalize raw label text; may return the empty string."""
    text = _strip_parentheticals(raw).lower()
    text = _APOSTROPHES.sub("", text)
    text = "".join(ch if ch.isalnum() and not ch.isupper() else " " for ch in text)
    return _SPACES.sub(" ", text).strip()


def normalize(raw: str | Label, kind: str = UNTAGGED) -> Label:
    """Turn a raw label into a canonical :class:`Label`.

    Parenthetical qualifiers are dropped, the text is lowercased, and every
    other punctuation character (slash, hyphen, comma, ...) becomes a word
    separator.

    >>> normalize("(object) rustling").text
    'rustling'
    >>> normalize("subway-train").text
    'subway train'
    """
    if isinstance(raw, Label):
        return raw if kind == UNTAGGED else raw.with_kind(kind)
    if not raw or not raw.strip():
        raise EmptyLabel("raw label is empty")
    text = normalize_text(raw)
    if not text:
        raise EmptyLabel(f"raw label {raw!r} normalizes to an empty string")
    return Label(text, kind)


@dataclass(frozen=True)
class DecompositionRule:
    """How to split a normalized compound into atomic labels.

    ``records`` maps a normalized text (or a :func:`raw_key`) to an explicit
    list of output labels and wins over everything else. Texts listed in
    ``exceptions`` are kept whole. Anything else is split with ``pattern``.
    A rule with a ``scope`` applies only to labels from that source set.
    """

    exceptions: frozenset[str] = frozenset()
    records: Mapping[str, tuple[Label, ...]] = field(default_factory=dict)
    pattern: str = r"\s+"
    scope: str | None = None

    def __post_init__(self):
        for text in self.exceptions:
            if not is_normalized(text):
                raise InvalidLabel(f"decomposition exception is not normalized: {text!r}")
        records = {}
        for key, outputs in self.records.items():
            outputs = tuple(outputs)
            if not outputs:
                raise InvalidLabel(f"decomposition record {key!r} has no outputs")
            for out in outputs:
                if not isinstance(out, Label):
                    raise InvalidLabel(f"record output {out!r} is not a Label")
            records[key] = outputs
        object.__setattr__(self, "exceptions", frozenset(self.exceptions))
        object.__setattr__(self, "records", MappingProxyType(records))
        re.compile(self.pattern)

    def applies_to(self, source: str | None) -> bool:
        return self.scope is None or self.scope == source

    def split(self, label: Label) -> list[Label]:
        parts = [p for p in re.split(self.pattern, label.text) if p]
        if len(parts) <= 1:
            return [label]
        return [Label(p) for p in parts]


DEFAULT_RULE = DecompositionRule()


def decompose(
    label: Label,
    rules: Sequence[DecompositionRule] = (),
    *,
    raw: str | None = None,
    source: str | None = None,
) -> list[Label]:
    """Split ``label`` into atomic labels, in source token order.

    Explicit records are consulted first (by ``raw_key(raw)`` when the raw
    text is given, then by normalized text), then exceptions, then the first
    applicable rule's generic split. With no rules the split is on whitespace.
    """
    active = [r for r in rules if r.applies_to(source)]
    keys = [label.text]
    if raw is not None:
        keys.insert(0, raw_key(raw))
    for key in keys:
        for rule in active:
            if key in rule.records:
                return list(rule.records[key])
    for rule in active:
        if label.text in rule.exceptions:
            return [label]
    splitter = active[0] if active else DEFAULT_RULE
    return splitter.split(label)
