"""
Parser for the model dialect.

The grammar is the one the adaptation-manager listings are written in:
``p.o!<e1,...,en>`` invokes, ``p.o?<x1,...,xn>.P`` receives, ``[x]`` and
``[x#]`` delimitations, ``*P`` replication, ``|`` parallel, ``+`` choice,
``kill(k)``, ``{| P |}`` protection, and ``let f(params) = P ... in P end``.
Definitions may also stand before or after the ``let`` block.
"""

import logging
from typing import Dict, List, Optional, Set, Tuple

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import (
    LarkError,
    UnexpectedCharacters,
    UnexpectedEOF,
    UnexpectedInput,
    UnexpectedToken,
    VisitError,
)

from ..errors import CowsError, CowsSyntaxError, ModelError
from .scope import resolve_term
from .terms import (
    NIL,
    BindVar,
    BoolVal,
    Call,
    Choice,
    Definition,
    Delim,
    DelimKind,
    Gt,
    IntVal,
    Invoke,
    Kill,
    Lit,
    MatchVal,
    Model,
    Parallel,
    Protect,
    Receive,
    Replicate,
    Term,
    Var,
    walk,
)

logger = logging.getLogger(__name__)

GRAMMAR = r"""
start: item*

?item: definition
     | let_block

let_block: "let" definition* "in" term "end"

definition: NAME "(" [NAME ("," NAME)*] ")" "=" term

?term: parallel

?parallel: choice ("|" choice)*

?choice: prefixed ("+" prefixed)*

?prefixed: receive "." prefixed          -> receive_prefix
         | "*" prefixed                  -> replicate
         | "[" NAME FRESH? "]" prefixed  -> delim
         | atom

?atom: "nil"                                   -> nil
     | NAME "." NAME "!" "<" [expr ("," expr)*] ">"  -> invoke
     | NAME "(" [expr ("," expr)*] ")"         -> call
     | "kill" "(" NAME ")"                     -> kill
     | "{|" term "|}"                          -> protect
     | "(" term ")"

receive: NAME "." NAME "?" "<" [pattern ("," pattern)*] ">"

pattern: NAME      -> pat_name
       | INT       -> pat_int
       | "true"    -> pat_true
       | "false"   -> pat_false

?expr: expr "gt" operand   -> gt
     | operand

?operand: NAME             -> e_name
        | INT              -> e_int
        | "true"           -> e_true
        | "false"          -> e_false
        | "(" expr ")"

FRESH: "#"
NAME: /[A-Za-z][A-Za-z0-9_]*/
INT: /-?[0-9]+/
COMMENT: /\/\/[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""

_PARSER = Lark(GRAMMAR, parser="lalr", propagate_positions=True, maybe_placeholders=True)


def _present(items) -> list:
    return [item for item in items if item is not None]


class _ReceiveHead:
    """A receive prefix waiting for its continuation."""

    def __init__(self, partner: str, operation: str, params: tuple) -> None:
        self.partner = partner
        self.operation = operation
        self.params = params


class _ModelBuilder(Transformer):
    """Builds raw terms; identifiers are resolved afterwards by the scope pass."""

    def __init__(self) -> None:
        super().__init__()
        self.call_sites: List[Tuple[str, int, int, int]] = []

    # expressions

    @v_args(inline=True)
    def gt(self, left, right):
        return Gt(left, right)

    @v_args(inline=True)
    def e_name(self, token):
        return Var(str(token))

    @v_args(inline=True)
    def e_int(self, token):
        return Lit(IntVal(int(token)))

    def e_true(self, _):
        return Lit(BoolVal(True))

    def e_false(self, _):
        return Lit(BoolVal(False))

    # patterns

    @v_args(inline=True)
    def pat_name(self, token):
        return BindVar(str(token))

    @v_args(inline=True)
    def pat_int(self, token):
        return MatchVal(IntVal(int(token)))

    def pat_true(self, _):
        return MatchVal(BoolVal(True))

    def pat_false(self, _):
        return MatchVal(BoolVal(False))

    # processes

    def nil(self, _):
        return NIL

    def invoke(self, items):
        partner, operation, *args = items
        return Invoke(str(partner), str(operation), tuple(_present(args)))

    @v_args(meta=True)
    def call(self, meta, items):
        name, *args = items
        args = tuple(_present(args))
        self.call_sites.append((str(name), len(args), meta.line, meta.column))
        return Call(str(name), args)

    @v_args(inline=True)
    def kill(self, label):
        return Kill(str(label))

    @v_args(inline=True)
    def protect(self, body):
        return Protect(body)

    @v_args(inline=True)
    def replicate(self, body):
        return Replicate(body)

    def delim(self, items):
        name = str(items[0])
        fresh = isinstance(items[1], Token) and items[1].type == "FRESH"
        body = items[-1]
        return Delim(name, DelimKind.NAME, body, fresh)

    def receive(self, items):
        partner, operation, *params = items
        return _ReceiveHead(str(partner), str(operation), tuple(_present(params)))

    @v_args(inline=True)
    def receive_prefix(self, head, continuation):
        return Receive(head.partner, head.operation, head.params, continuation)

    def parallel(self, items):
        return Parallel(tuple(items))

    @v_args(meta=True)
    def choice(self, meta, items):
        branches: List[Receive] = []
        for item in items:
            if isinstance(item, Receive):
                branches.append(item)
            elif isinstance(item, Choice):
                branches.extend(item.branches)
            else:
                raise CowsSyntaxError(
                    "every branch of a choice must start with a receive",
                    meta.line,
                    meta.column,
                )
        return Choice(tuple(branches))

    # top level

    @v_args(meta=True)
    def definition(self, meta, items):
        name, *rest = items
        body = rest[-1]
        params = tuple(str(p) for p in _present(rest[:-1]))
        return (str(name), params, body, meta.line, meta.column)

    @v_args(meta=True)
    def let_block(self, meta, items):
        return ("let", items[:-1], items[-1], meta.line, meta.column)

    def start(self, items):
        return items


def _syntax_error(exc: UnexpectedInput) -> CowsSyntaxError:
    line = max(getattr(exc, "line", 0) or 0, 0)
    column = max(getattr(exc, "column", 0) or 0, 0)
    if isinstance(exc, UnexpectedCharacters):
        return CowsSyntaxError(
            f"unexpected character {exc.char!r}", line, column, exc.allowed or ()
        )
    if isinstance(exc, UnexpectedEOF):
        return CowsSyntaxError("unexpected end of input", line, column, exc.expected or ())
    if isinstance(exc, UnexpectedToken):
        if exc.token.type == "$END":
            return CowsSyntaxError("unexpected end of input", line, column, exc.expected or ())
        return CowsSyntaxError(
            f"unexpected token {str(exc.token)!r}", line, column, exc.expected or ()
        )
    return CowsSyntaxError(str(exc), line, column)


def _check_recursion(definitions: Dict[str, Definition]) -> None:
    """Reject definitions that reach themselves through unguarded calls."""

    def unguarded_calls(term: Term) -> Set[str]:
        calls: Set[str] = set()
        stack = [term]
        while stack:
            node = stack.pop()
            if isinstance(node, Call):
                calls.add(node.name)
            elif isinstance(node, Receive) or isinstance(node, Choice):
                continue
            elif isinstance(node, Parallel):
                stack.extend(node.branches)
            elif isinstance(node, (Delim, Protect, Replicate)):
                stack.append(node.body)
        return calls

    graph = {name: unguarded_calls(d.body) for name, d in definitions.items()}
    visiting: Set[str] = set()
    done: Set[str] = set()

    def visit(name: str, trail: List[str]) -> None:
        if name in done or name not in graph:
            return
        if name in visiting:
            cycle = " -> ".join(trail[trail.index(name):] + [name])
            raise ModelError(f"unguarded recursion: {cycle}")
        visiting.add(name)
        for callee in sorted(graph[name]):
            visit(callee, trail + [name])
        visiting.discard(name)
        done.add(name)

    for name in graph:
        visit(name, [])


def _collect_calls(term: Term) -> List[Call]:
    return [node for node in walk(term) if isinstance(node, Call)]


def validate_model(model: Model) -> None:
    """
    Check the call-related invariants of an already built model.

    Raises:
        ModelError: unknown definition, arity mismatch or unguarded recursion
    """
    bodies = [(d.name, d.body) for d in model.definitions.values()] + [("main", model.main)]
    for where, body in bodies:
        for call in _collect_calls(body):
            definition = model.definitions.get(call.name)
            if definition is None:
                raise ModelError(f"call to undefined {call.name!r} in {where}")
            if len(definition.params) != len(call.args):
                raise ModelError(
                    f"{call.name!r} expects {len(definition.params)} argument(s), "
                    f"got {len(call.args)} in {where}"
                )
    _check_recursion(model.definitions)


def parse_model(source: str) -> Model:
    """
    Parse a model source into a validated Model.

    Args:
        source: Model text (LF or CRLF line endings)

    Returns:
        Model with resolved identifiers and delimitation kinds

    Raises:
        CowsSyntaxError: the text is not in the dialect
        ModelError: the text parses but breaks a model invariant
    """
    builder = _ModelBuilder()
    try:
        tree = _PARSER.parse(source)
        items = builder.transform(tree)
    except UnexpectedInput as exc:
        raise _syntax_error(exc) from None
    except VisitError as exc:
        if isinstance(exc.orig_exc, CowsError):
            raise exc.orig_exc from None
        raise CowsSyntaxError(f"malformed input: {exc.orig_exc}") from None
    except LarkError as exc:
        raise CowsSyntaxError(f"malformed input: {exc}") from None
    except RecursionError:
        raise CowsSyntaxError("input nested too deeply") from None

    raw_definitions: List[Tuple[str, Tuple[str, ...], Term, int, int]] = []
    main: Optional[Term] = None
    for item in items:
        if item[0] == "let" and len(item) == 5 and isinstance(item[1], list):
            _, local_defs, body, line, column = item
            if main is not None:
                raise ModelError("only one let ... in ... end block is allowed", line, column)
            raw_definitions.extend(local_defs)
            main = body
        else:
            raw_definitions.append(item)
    if main is None:
        raise ModelError("missing let ... in ... end block")

    definitions: Dict[str, Definition] = {}
    for name, params, body, line, column in raw_definitions:
        if name in definitions:
            raise ModelError(f"duplicate definition {name!r}", line, column)
        if len(set(params)) != len(params):
            raise ModelError(f"repeated parameter in {name!r}", line, column)
        definitions[name] = Definition(name, params, resolve_term(body, frozenset(params), name))

    for name, arity, line, column in builder.call_sites:
        definition = definitions.get(name)
        if definition is None:
            raise ModelError(f"call to undefined {name!r}", line, column)
        if len(definition.params) != arity:
            raise ModelError(
                f"{name!r} expects {len(definition.params)} argument(s), got {arity}",
                line,
                column,
            )

    model = Model(definitions, resolve_term(main))
    _check_recursion(model.definitions)
    logger.debug("Parsed model with %d definitions", len(definitions))
    return model
