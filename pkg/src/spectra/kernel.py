"""Kernel form of a specification: boolean variables and ini/trans/alwEv
assumptions and guarantees only. Every language feature lowers to this."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .diagnostics import GENERATED, Span
from .syntax import nodes as n
from .syntax.printer import print_spec


@dataclass(frozen=True)
class Origin:
    """Ties a kernel constraint back to the source element it encodes.

    category 'guarantee'/'assumption' marks user-removable elements;
    'monitor', 'vardecl', and 'pattern-host' pieces are structural and
    survive guarantee-subset analyses.
    """

    key: str
    category: str  # assumption | guarantee | monitor | vardecl
    label: str
    span: Span = GENERATED


@dataclass(frozen=True)
class KernelVar:
    name: str
    kind: str  # "env" | "sys"


@dataclass(frozen=True)
class KernelConstraint:
    polarity: str  # "asm" | "gar"
    kind: str  # "ini" | "trans" | "alwEv"
    name: Optional[str]
    expr: n.Expr
    origin: Optional[Origin] = None
    span: Span = GENERATED

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        if self.origin is not None and self.origin.label:
            return self.origin.label
        return f"{self.polarity} {self.kind}"


@dataclass(frozen=True)
class KernelSpec:
    name: str
    vars: Tuple[KernelVar, ...]
    constraints: Tuple[KernelConstraint, ...]

    @property
    def env_vars(self) -> Tuple[str, ...]:
        return tuple(v.name for v in self.vars if v.kind == "env")

    @property
    def sys_vars(self) -> Tuple[str, ...]:
        return tuple(v.name for v in self.vars if v.kind == "sys")

    @property
    def assumptions(self):
        return tuple(c for c in self.constraints if c.polarity == "asm")

    @property
    def guarantees(self):
        return tuple(c for c in self.constraints if c.polarity == "gar")

    def to_spec_ast(self) -> n.SpecAst:
        elements: list[n.Element] = [
            n.VarDecl(v.kind, n.BoolType(), v.name) for v in self.vars
        ]
        for c in self.constraints:
            tc = n.TempConstraint(c.kind, c.expr)
            if c.polarity == "asm":
                elements.append(n.Assumption(c.name, tc))
            else:
                elements.append(n.Guarantee(c.name, tc))
        return n.SpecAst((), self.name, tuple(elements))

    def pretty(self) -> str:
        """Render as a parseable Spectra file."""
        return print_spec(self.to_spec_ast())
