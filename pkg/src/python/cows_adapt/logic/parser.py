"""
Parser for formulas and ``.prop`` property files.

Formula grammar (lowest to highest precedence)::

    f -> f          implication, right associative
    f | f           disjunction
    f & f           conjunction
    !f  AG f  AF f  EF f  EG f  <pattern> f  [pattern] f
    true  false  enabled(p.o)  E[f U f]  A[f U f]  (f)

Patterns are ``partner.operation<values>`` where any part may be ``*`` and
``<*>`` accepts any number of values.
"""

import logging
import re
from dataclasses import dataclass
from typing import Dict, List

from lark import Lark, Transformer, v_args
from lark.exceptions import LarkError, UnexpectedCharacters, UnexpectedInput, VisitError

from ..errors import CowsError, CowsSyntaxError
from ..syntax.terms import BoolVal, IntVal, NameVal
from .formulas import (
    AF,
    AG,
    AU,
    EF,
    EG,
    EU,
    TRUE,
    ActionPattern,
    And,
    Box,
    Diamond,
    Enabled,
    Formula,
    Implies,
    Not,
    Or,
)

logger = logging.getLogger(__name__)

GRAMMAR = r"""
?start: implies

?implies: disj "->" implies   -> imp
        | disj

?disj: disj "|" conj          -> or_
     | conj

?conj: conj "&" unary         -> and_
     | unary

?unary: "!" unary             -> not_
      | "AG" unary            -> ag
      | "AF" unary            -> af
      | "EF" unary            -> ef
      | "EG" unary            -> eg
      | "<" pattern ">" unary -> diamond
      | "[" pattern "]" unary -> box
      | atom

?atom: "true"                          -> top
     | "false"                         -> bottom
     | "enabled" "(" NAME "." NAME ")" -> enabled
     | "E" "[" implies "U" implies "]" -> eu
     | "A" "[" implies "U" implies "]" -> au
     | "(" implies ")"

pattern: part "." part "<" [pval ("," pval)*] ">"

part: NAME
    | STAR

pval: INT     -> v_int
    | "true"  -> v_true
    | "false" -> v_false
    | NAME    -> v_name
    | STAR    -> v_any

STAR: "*"
NAME: /[A-Za-z][A-Za-z0-9_]*/
INT: /-?[0-9]+/

%import common.WS
%ignore WS
"""

_PARSER = Lark(GRAMMAR, parser="lalr", maybe_placeholders=True)

_ANY = object()


class _FormulaBuilder(Transformer):
    @v_args(inline=True)
    def imp(self, left, right):
        return Implies(left, right)

    @v_args(inline=True)
    def or_(self, left, right):
        return Or(left, right)

    @v_args(inline=True)
    def and_(self, left, right):
        return And(left, right)

    @v_args(inline=True)
    def not_(self, sub):
        return Not(sub)

    @v_args(inline=True)
    def ag(self, sub):
        return AG(sub)

    @v_args(inline=True)
    def af(self, sub):
        return AF(sub)

    @v_args(inline=True)
    def ef(self, sub):
        return EF(sub)

    @v_args(inline=True)
    def eg(self, sub):
        return EG(sub)

    @v_args(inline=True)
    def diamond(self, pattern, sub):
        return Diamond(pattern, sub)

    @v_args(inline=True)
    def box(self, pattern, sub):
        return Box(pattern, sub)

    def top(self, _):
        return TRUE

    def bottom(self, _):
        return Not(TRUE)

    @v_args(inline=True)
    def enabled(self, partner, operation):
        return Enabled(str(partner), str(operation))

    @v_args(inline=True)
    def eu(self, left, right):
        return EU(left, right)

    @v_args(inline=True)
    def au(self, left, right):
        return AU(left, right)

    @v_args(inline=True)
    def part(self, token):
        return None if token.type == "STAR" else str(token)

    @v_args(inline=True)
    def v_int(self, token):
        return IntVal(int(token))

    def v_true(self, _):
        return BoolVal(True)

    def v_false(self, _):
        return BoolVal(False)

    @v_args(inline=True)
    def v_name(self, token):
        return NameVal(str(token))

    def v_any(self, _):
        return _ANY

    def pattern(self, items):
        partner, operation, *values = items
        present = [v for v in values if v is not None]
        if len(present) == 1 and present[0] is _ANY:
            return ActionPattern(partner, operation, None)
        return ActionPattern(
            partner, operation, tuple(None if v is _ANY else v for v in present)
        )


def _syntax_error(
    exc: UnexpectedInput, line_offset: int = 0, column_offset: int = 0
) -> CowsSyntaxError:
    line = max(getattr(exc, "line", 0) or 0, 0)
    column = max(getattr(exc, "column", 0) or 0, 0)
    if line == 1:
        column += column_offset
    if isinstance(exc, UnexpectedCharacters):
        message = f"unexpected character {exc.char!r}"
        expected = exc.allowed or ()
    else:
        token = getattr(exc, "token", None)
        if token is None or token.type == "$END":
            message = "unexpected end of formula"
        else:
            message = f"unexpected token {str(token)!r}"
        expected = getattr(exc, "expected", None) or ()
    return CowsSyntaxError(message, line + line_offset if line else 0, column, expected)


def parse_formula(source: str, line_offset: int = 0, column_offset: int = 0) -> Formula:
    """
    Parse a formula.

    Args:
        source: Formula text
        line_offset: Added to reported line numbers (for formulas inside files)
        column_offset: Added to columns reported on the first line

    Raises:
        CowsSyntaxError: positioned syntax error
    """
    try:
        return _FormulaBuilder().transform(_PARSER.parse(source))
    except UnexpectedInput as exc:
        raise _syntax_error(exc, line_offset, column_offset) from None
    except VisitError as exc:
        if isinstance(exc.orig_exc, CowsError):
            raise exc.orig_exc from None
        raise CowsSyntaxError(f"malformed formula: {exc.orig_exc}") from None
    except LarkError as exc:
        raise CowsSyntaxError(f"malformed formula: {exc}") from None


@dataclass(frozen=True)
class Property:
    name: str
    formula: Formula
    line: int


_STANZA_HEAD = re.compile(r"prop\s+([A-Za-z][A-Za-z0-9_]*)\s*:")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def parse_properties(text: str) -> List[Property]:
    """
    Parse a ``.prop`` file.

    One property per stanza, ``prop <name>: <formula>``; a formula may
    continue on the following lines until a blank line. ``#`` starts a comment.

    Raises:
        CowsSyntaxError: malformed stanza, duplicate name or formula error
    """
    stanzas: List[List[tuple]] = []
    current: List[tuple] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            if current:
                stanzas.append(current)
                current = []
            continue
        stripped = _strip_comment(raw)
        if not stripped.strip():
            continue
        if current and _STANZA_HEAD.match(stripped.lstrip()):
            stanzas.append(current)
            current = []
        current.append((number, stripped))
    if current:
        stanzas.append(current)

    properties: List[Property] = []
    names: Dict[str, int] = {}
    for stanza in stanzas:
        first_line, head = stanza[0]
        indent = len(head) - len(head.lstrip())
        match = _STANZA_HEAD.match(head.lstrip())
        if match is None:
            raise CowsSyntaxError("expected 'prop <name>: <formula>'", first_line, indent + 1)
        name = match.group(1)
        if name in names:
            raise CowsSyntaxError(
                f"property {name!r} already defined on line {names[name]}", first_line, indent + 1
            )
        names[name] = first_line
        body = "\n".join([head.lstrip()[match.end():]] + [line for _, line in stanza[1:]])
        formula = parse_formula(body, first_line - 1, indent + match.end())
        properties.append(Property(name, formula, first_line))

    logger.debug("Parsed %d propert(ies)", len(properties))
    return properties
