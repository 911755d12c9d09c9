"""
Pretty-printing, AST dumps and structural shapes of terms.
"""

from typing import Iterable, List, Sequence, Tuple

from .terms import (
    FRESH_SEP,
    BindVar,
    BoolVal,
    Call,
    Choice,
    Definition,
    Delim,
    Expr,
    Gt,
    IntVal,
    Invoke,
    Kill,
    Lit,
    MatchVal,
    Model,
    NameVal,
    Nil,
    Parallel,
    Pattern,
    Protect,
    Receive,
    Replicate,
    Term,
    Value,
    Var,
)

INDENT = "  "

# precedence levels used when deciding on parentheses
_PARALLEL, _CHOICE, _PREFIXED = 0, 1, 2


def format_value(value: Value) -> str:
    if isinstance(value, BoolVal):
        return "true" if value.value else "false"
    if isinstance(value, IntVal):
        return str(value.value)
    return value.name


def format_expr(expr: Expr) -> str:
    if isinstance(expr, Lit):
        return format_value(expr.value)
    if isinstance(expr, Var):
        return expr.name
    right = format_expr(expr.right)
    if isinstance(expr.right, Gt):
        right = f"({right})"
    return f"{format_expr(expr.left)} gt {right}"


def format_pattern(pattern: Pattern) -> str:
    if isinstance(pattern, BindVar):
        return pattern.name
    return format_value(pattern.value)


def _tuple(items: Iterable[str]) -> str:
    return "<" + ",".join(items) + ">"


def format_term(term: Term, level: int = _PARALLEL) -> str:
    """Render a process in the model dialect, adding parentheses only where needed."""
    if isinstance(term, Nil):
        return "nil"
    if isinstance(term, Invoke):
        return f"{term.partner}.{term.operation}!{_tuple(format_expr(a) for a in term.args)}"
    if isinstance(term, Receive):
        head = f"{term.partner}.{term.operation}?{_tuple(format_pattern(p) for p in term.params)}"
        text = f"{head}.{format_term(term.continuation, _PREFIXED)}"
    elif isinstance(term, Parallel):
        text = " | ".join(
            f"({format_term(b)})" if isinstance(b, Parallel) else format_term(b, _CHOICE)
            for b in term.branches
        )
        return f"({text})" if level > _PARALLEL else text
    elif isinstance(term, Choice):
        text = " + ".join(format_term(b, _PREFIXED) for b in term.branches)
        if len(term.branches) > 1 and level > _CHOICE:
            return f"({text})"
        return text
    elif isinstance(term, Delim):
        mark = "#" if term.fresh else ""
        text = f"[{term.bound}{mark}] {format_term(term.body, _PREFIXED)}"
    elif isinstance(term, Kill):
        return f"kill({term.label})"
    elif isinstance(term, Protect):
        return "{| " + format_term(term.body) + " |}"
    elif isinstance(term, Replicate):
        text = f"* {format_term(term.body, _PREFIXED)}"
    elif isinstance(term, Call):
        return f"{term.name}({', '.join(format_expr(a) for a in term.args)})"
    else:
        raise TypeError(f"not a term: {term!r}")
    return text


def _format_definition(definition: Definition) -> List[str]:
    header = f"{definition.name}({', '.join(definition.params)}) ="
    return [INDENT + header, INDENT * 2 + format_term(definition.body)]


def pretty_print(model: Model) -> str:
    """
    Render a model as dialect source.

    Every definition is placed inside the ``let`` block, so the output parses
    back to a structurally equal model.
    """
    lines = ["let"]
    for definition in model.definitions.values():
        lines.extend(_format_definition(definition))
    lines.append("in")
    lines.append(INDENT + format_term(model.main))
    lines.append("end")
    return "\n".join(lines) + "\n"


# --- AST dump ---------------------------------------------------------------


def _dump_value(value: Value) -> str:
    if isinstance(value, IntVal):
        return f"Int {value.value}"
    if isinstance(value, BoolVal):
        return f"Bool {format_value(value)}"
    return f"Name {value.name}"


def _dump_expr(expr: Expr, depth: int, out: List[str]) -> None:
    pad = INDENT * depth
    if isinstance(expr, Lit):
        out.append(f"{pad}Lit {_dump_value(expr.value)}")
    elif isinstance(expr, Var):
        out.append(f"{pad}Var {expr.name}")
    else:
        out.append(f"{pad}Gt")
        _dump_expr(expr.left, depth + 1, out)
        _dump_expr(expr.right, depth + 1, out)


def _dump_pattern(pattern: Pattern, depth: int, out: List[str]) -> None:
    pad = INDENT * depth
    if isinstance(pattern, BindVar):
        out.append(f"{pad}BindVar {pattern.name}")
    else:
        out.append(f"{pad}MatchVal {_dump_value(pattern.value)}")


def _dump_term(term: Term, depth: int, out: List[str]) -> None:
    pad = INDENT * depth
    if isinstance(term, Nil):
        out.append(f"{pad}Nil")
    elif isinstance(term, Invoke):
        out.append(f"{pad}Invoke {term.partner}.{term.operation}")
        for arg in term.args:
            _dump_expr(arg, depth + 1, out)
    elif isinstance(term, Receive):
        out.append(f"{pad}Receive {term.partner}.{term.operation}")
        for pattern in term.params:
            _dump_pattern(pattern, depth + 1, out)
        _dump_term(term.continuation, depth + 1, out)
    elif isinstance(term, Parallel):
        out.append(f"{pad}Parallel")
        for branch in term.branches:
            _dump_term(branch, depth + 1, out)
    elif isinstance(term, Choice):
        out.append(f"{pad}Choice")
        for branch in term.branches:
            _dump_term(branch, depth + 1, out)
    elif isinstance(term, Delim):
        fresh = " fresh" if term.fresh else ""
        out.append(f"{pad}Delim {term.bound} {term.kind.value}{fresh}")
        _dump_term(term.body, depth + 1, out)
    elif isinstance(term, Kill):
        out.append(f"{pad}Kill {term.label}")
    elif isinstance(term, Protect):
        out.append(f"{pad}Protect")
        _dump_term(term.body, depth + 1, out)
    elif isinstance(term, Replicate):
        out.append(f"{pad}Replicate")
        _dump_term(term.body, depth + 1, out)
    elif isinstance(term, Call):
        out.append(f"{pad}Call {term.name}")
        for arg in term.args:
            _dump_expr(arg, depth + 1, out)


def dump_ast(model: Model) -> str:
    """Deterministic, indentation-structured dump of a model's AST."""
    out = ["Model"]
    for definition in model.definitions.values():
        out.append(f"{INDENT}Definition {definition.name}({', '.join(definition.params)})")
        _dump_term(definition.body, 2, out)
    out.append(f"{INDENT}Main")
    _dump_term(model.main, 2, out)
    return "\n".join(out) + "\n"


# --- shapes -----------------------------------------------------------------


def _shape_name(name: str, env: Sequence[str]) -> str:
    for distance, bound in enumerate(reversed(env)):
        if bound == name:
            return f"^{distance}"
    if FRESH_SEP in name:
        return FRESH_SEP
    return name


def _shape_value(value: Value, env: Sequence[str]) -> str:
    if isinstance(value, NameVal):
        return "'" + _shape_name(value.name, env)
    return format_value(value)


def _shape_expr(expr: Expr, env: Sequence[str]) -> str:
    if isinstance(expr, Lit):
        return _shape_value(expr.value, env)
    if isinstance(expr, Var):
        return "?" + _shape_name(expr.name, env)
    return f"({_shape_expr(expr.left, env)} gt {_shape_expr(expr.right, env)})"


def _shape_pattern(pattern: Pattern, env: Sequence[str]) -> str:
    if isinstance(pattern, BindVar):
        return "?" + _shape_name(pattern.name, env)
    return _shape_value(pattern.value, env)


def term_shape(term: Term, env: Tuple[str, ...] = (), unordered: bool = False) -> str:
    """
    Encode a term with binders replaced by de Bruijn-style distances.

    Two terms that differ only in the names of their delimitations get the same
    shape. With ``unordered`` set, parallel components and choice branches are
    sorted, so the shape is also insensitive to their order. Names carrying a
    canonical index are collapsed to a placeholder.
    """
    def name(n: str) -> str:
        return _shape_name(n, env)

    if isinstance(term, Nil):
        return "0"
    if isinstance(term, Invoke):
        args = ",".join(_shape_expr(a, env) for a in term.args)
        return f"{name(term.partner)}.{name(term.operation)}!<{args}>"
    if isinstance(term, Receive):
        params = ",".join(_shape_pattern(p, env) for p in term.params)
        cont = term_shape(term.continuation, env, unordered)
        return f"{name(term.partner)}.{name(term.operation)}?<{params}>.{cont}"
    if isinstance(term, (Parallel, Choice)):
        parts = [term_shape(b, env, unordered) for b in term.branches]
        if unordered:
            parts.sort()
        sep = "|" if isinstance(term, Parallel) else "+"
        return "(" + sep.join(parts) + ")"
    if isinstance(term, Delim):
        fresh = "#" if term.fresh else ""
        return f"[{term.kind.value}{fresh}]" + term_shape(term.body, env + (term.bound,), unordered)
    if isinstance(term, Kill):
        return f"kill({name(term.label)})"
    if isinstance(term, Protect):
        return "{|" + term_shape(term.body, env, unordered) + "|}"
    if isinstance(term, Replicate):
        return "*" + term_shape(term.body, env, unordered)
    if isinstance(term, Call):
        return f"{term.name}(" + ",".join(_shape_expr(a, env) for a in term.args) + ")"
    raise TypeError(f"not a term: {term!r}")


def alpha_equivalent(left, right) -> bool:
    """
    Structural equality up to the names of delimitation binders and definition parameters.

    Accepts two terms or two models.
    """
    if isinstance(left, Model) and isinstance(right, Model):
        if set(left.definitions) != set(right.definitions):
            return False
        for name, definition in left.definitions.items():
            other = right.definitions[name]
            if len(definition.params) != len(other.params):
                return False
            if term_shape(definition.body, definition.params) != term_shape(
                other.body, other.params
            ):
                return False
        return term_shape(left.main) == term_shape(right.main)
    if isinstance(left, Model) or isinstance(right, Model):
        return False
    return term_shape(left) == term_shape(right)
