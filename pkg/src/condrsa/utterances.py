"""The utterance grammar.

Utterances are built from possibly-negated literals over the two
propositional variables: bare literals, "likely"-hedged literals,
conjunctions, and indicative conditionals.  Conjunctions and conditionals
must mention both variables (one each).

The textual syntax used by scenario files and the CLI is::

    A        ~C        likely A        A & ~C        A -> C

with variable names configurable per scenario (e.g. ``E -> S``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .core import Event, Var, event_for


class UtteranceType(Enum):
    LITERAL = "literal"
    LIKELY = "likely"
    CONJUNCTION = "conjunction"
    CONDITIONAL = "conditional"


@dataclass(frozen=True)
class Lit:
    """A possibly negated propositional variable."""

    var: Var
    positive: bool = True

    def event(self) -> Event:
        return event_for(self.var, self.positive)

    def negated(self) -> "Lit":
        return Lit(self.var, not self.positive)

    def format(self, names: dict[Var, str] | None = None) -> str:
        name = (names or {}).get(self.var, self.var.value)
        return name if self.positive else f"~{name}"

    def __str__(self) -> str:
        return self.format()


class Utterance:
    """Base class; see `Literal`, `Likely`, `Conjunction`, `Conditional`."""

    kind: UtteranceType

    def format(self, names: dict[Var, str] | None = None) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.format()


@dataclass(frozen=True)
class Literal(Utterance):
    lit: Lit
    kind = UtteranceType.LITERAL

    def format(self, names=None) -> str:
        return self.lit.format(names)


@dataclass(frozen=True)
class Likely(Utterance):
    lit: Lit
    kind = UtteranceType.LIKELY

    def format(self, names=None) -> str:
        return f"likely {self.lit.format(names)}"


def _check_distinct(first: Lit, second: Lit, what: str) -> None:
    if first.var is second.var:
        raise ValueError(f"a {what} must mention two distinct variables")


@dataclass(frozen=True)
class Conjunction(Utterance):
    first: Lit
    second: Lit
    kind = UtteranceType.CONJUNCTION

    def __post_init__(self) -> None:
        _check_distinct(self.first, self.second, "conjunction")

    def format(self, names=None) -> str:
        return f"{self.first.format(names)} & {self.second.format(names)}"


@dataclass(frozen=True)
class Conditional(Utterance):
    antecedent: Lit
    consequent: Lit
    kind = UtteranceType.CONDITIONAL

    def __post_init__(self) -> None:
        _check_distinct(self.antecedent, self.consequent, "conditional")

    def format(self, names=None) -> str:
        return f"{self.antecedent.format(names)} -> {self.consequent.format(names)}"


_LIT_RE = re.compile(r"^(~|not\s+)?(\w+)$")


def _parse_lit(text: str, by_name: dict[str, Var]) -> Lit:
    m = _LIT_RE.match(text.strip())
    if not m:
        raise ValueError(f"cannot parse literal {text!r}")
    positive = m.group(1) is None
    name = m.group(2)
    if name not in by_name:
        known = ", ".join(sorted(by_name))
        raise ValueError(f"unknown variable {name!r} (known: {known})")
    return Lit(by_name[name], positive)


def parse_utterance(text: str, names: dict[Var, str] | None = None) -> Utterance:
    """Parse the textual utterance syntax; inverse of ``Utterance.format``."""
    if names:
        by_name = {name: var for var, name in names.items()}
    else:
        by_name = {Var.A.value: Var.A, Var.C.value: Var.C}

    text = text.strip()
    if text.startswith("likely"):
        return Likely(_parse_lit(text[len("likely"):], by_name))
    if "->" in text:
        left, _, right = text.partition("->")
        return Conditional(_parse_lit(left, by_name), _parse_lit(right, by_name))
    if "&" in text:
        left, _, right = text.partition("&")
        return Conjunction(_parse_lit(left, by_name), _parse_lit(right, by_name))
    return Literal(_parse_lit(text, by_name))
