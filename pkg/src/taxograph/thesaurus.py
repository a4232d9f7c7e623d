"""Synsets and preferred-term resolution."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import ThesaurusError
from .labels import Label, is_normalized


@dataclass(frozen=True)
class Synset:
    """A synonym group indexed by its preferred term."""

    preferred: str
    variants: frozenset[str] = frozenset()
    note: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "variants", frozenset(self.variants))
        for text in (self.preferred, *self.variants):
            if not is_normalized(text):
                raise ThesaurusError(f"synset term is not normalized: {text!r}")
        if self.preferred in self.variants:
            raise ThesaurusError(f"preferred term {self.preferred!r} listed as its own variant")

    @property
    def terms(self) -> frozenset[str]:
        return self.variants | {self.preferred}


class Thesaurus:
    """An immutable collection of disjoint synsets.

    Every term belongs to at most one synset, so resolution is a function.
    """

    def __init__(self, synsets: Iterable[Synset] = ()):
        self._synsets: dict[str, Synset] = {}
        self._index: dict[str, str] = {}
        for synset in synsets:
            for term in sorted(synset.terms):
                if term in self._index:
                    raise ThesaurusError(
                        f"term {term!r} appears in synsets {self._index[term]!r} "
                        f"and {synset.preferred!r}"
                    )
                self._index[term] = synset.preferred
            self._synsets[synset.preferred] = synset

    def __len__(self) -> int:
        return len(self._synsets)

    def __iter__(self) -> Iterator[Synset]:
        return iter(self._synsets.values())

    def __contains__(self, term: str) -> bool:
        return term in self._index

    def __eq__(self, other):
        if not isinstance(other, Thesaurus):
            return NotImplemented
        return set(self._synsets.values()) == set(other._synsets.values())

    def __repr__(self) -> str:
        return f"Thesaurus({len(self)} synsets, {len(self._index)} terms)"

    @property
    def terms(self) -> frozenset[str]:
        return frozenset(self._index)

    def preferred(self, text: str) -> str:
        """Preferred term for ``text``; unknown text maps to itself."""
        return self._index.get(text, text)

    def synset(self, text: str) -> Synset | None:
        key = self._index.get(text)
        return None if key is None else self._synsets[key]

    def is_variant(self, text: str) -> bool:
        """True if ``text`` is a non-preferred member of some synset."""
        return self._index.get(text, text) != text

    def resolve(self, term: Label) -> Label:
        preferred = self.preferred(term.text)
        if preferred == term.text:
            return term
        return Label(preferred, term.kind)

    def are_synonyms(self, a: Label | str, b: Label | str) -> bool:
        a = a.text if isinstance(a, Label) else a
        b = b.text if isinstance(b, Label) else b
        return self.preferred(a) == self.preferred(b)

    def merged(self, other: "Thesaurus") -> "Thesaurus":
        """Union of two thesauri; identical synsets are allowed, overlaps are not."""
        synsets = dict(self._synsets)
        for synset in other:
            mine = synsets.get(synset.preferred)
            if mine is not None and mine != synset:
                raise ThesaurusError(f"thesauri disagree on synset {synset.preferred!r}")
            synsets[synset.preferred] = synset
        return Thesaurus(synsets.values())


EMPTY_THESAURUS = Thesaurus()


def resolve(term: Label, thesaurus: Thesaurus) -> Label:
    """Replace ``term`` with its synset's preferred label, keeping the kind tag."""
    return thesaurus.resolve(term)


def are_synonyms(a: Label, b: Label, thesaurus: Thesaurus) -> bool:
    return thesaurus.are_synonyms(a, b)
