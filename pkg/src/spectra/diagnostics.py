"""Source spans and diagnostics shared by the whole toolchain."""

from __future__ import annotations

import bisect
from dataclasses import dataclass


@dataclass(frozen=True)
class Span:
    """Half-open byte range [start, end) inside a named source file."""

    file: str
    start: int
    end: int

    def join(self, other: "Span") -> "Span":
        return Span(self.file, min(self.start, other.start), max(self.end, other.end))


GENERATED = Span("<generated>", 0, 0)


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    message: str
    span: Span

    def render(self, sources: "SourceCatalog | None" = None) -> str:
        line, col = (1, 1)
        if sources is not None:
            line, col = sources.position(self.span)
        return f"{self.span.file}:{line}:{col}: {self.severity}: {self.message}"


class DiagnosticsError(Exception):
    """Raised by parse/check/import resolution when errors were found."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0] if self.diagnostics else None
        n = len(self.diagnostics)
        msg = first.message if first else "unknown error"
        super().__init__(f"{n} diagnostic(s): {msg}" if n != 1 else msg)


class SourceCatalog:
    """Maps (file, offset) spans to line:col positions for rendering."""

    def __init__(self):
        self._texts: dict[str, str] = {}
        self._lines: dict[str, list[int]] = {}

    def add(self, file: str, text: str) -> None:
        self._texts[file] = text
        starts = [0]
        for i, ch in enumerate(text):
            if ch == "\n":
                starts.append(i + 1)
        self._lines[file] = starts

    def text(self, file: str) -> str | None:
        return self._texts.get(file)

    def position(self, span: Span) -> tuple[int, int]:
        starts = self._lines.get(span.file)
        if starts is None:
            return (1, 1)
        idx = bisect.bisect_right(starts, span.start) - 1
        return (idx + 1, span.start - starts[idx] + 1)

    def render(self, diags) -> str:
        return "\n".join(d.render(self) for d in diags)


class SpectraError(Exception):
    """Base class for non-diagnostic toolchain failures."""
