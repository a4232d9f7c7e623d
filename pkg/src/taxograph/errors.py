"""Exception hierarchy shared by every taxograph module."""

from __future__ import annotations


class TaxographError(Exception):
    """Base class for all errors raised by taxograph."""


class EmptyLabel(TaxographError, ValueError):
    """A raw label normalized to the empty string."""


class InvalidLabel(TaxographError, ValueError):
    """Text that violates the normalized-label invariants."""


class ThesaurusError(TaxographError, ValueError):
    """A thesaurus whose synsets overlap or hold unnormalized text."""


class SubsetNameCollision(TaxographError, ValueError):
    """A label text equal to a cluster name, or the reverse."""


class UnknownLabel(TaxographError, KeyError):
    """A label that is not a node of the graph."""

    def __str__(self) -> str:
        return f"unknown label: {self.args[0]!r}" if self.args else "unknown label"


class UnknownCluster(TaxographError, KeyError):
    """A cluster name that does not exist in the graph."""

    def __str__(self) -> str:
        return f"unknown cluster: {self.args[0]!r}" if self.args else "unknown cluster"


class InvalidEdge(TaxographError, ValueError):
    """A cross edge that would break the cluster-graph structure."""


class SynonymConflict(TaxographError, ValueError):
    """Two graphs use different non-preferred variants for one synset."""


class InvalidGraph(TaxographError, ValueError):
    """A graph that fails validation where a valid one is required."""

    def __init__(self, issues):
        self.issues = list(issues)
        lines = "; ".join(f"{i.code}: {i.subject}" for i in self.issues[:5])
        super().__init__(f"graph has {len(self.issues)} validation error(s): {lines}")


class ParseError(TaxographError, ValueError):
    """Malformed input file. ``line`` is 1-based, or None when not line-bound."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = source or "<input>"
        if line is not None:
            where = f"{where}:{line}"
        super().__init__(f"{where}: {message}")


class UnknownFormatVersion(ParseError):
    """A document declaring a format version this build cannot read."""


class GoldenMismatch(TaxographError):
    """The DCASE reproduction differs from the transcribed golden sets."""

    def __init__(self, diff):
        self.diff = diff
        super().__init__(f"golden mismatch: {diff.summary()}")
