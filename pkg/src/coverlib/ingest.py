"""Problem input and output.

Two text formats are supported:

* the native format, a small line-friendly syntax for nets plus
  coverability targets, written and re-read bit-faithfully;
* a subset of the MIST ``.spec`` counter-system syntax, translated to
  Petri-net arcs when (and only when) that translation is exact.

Native grammar, with ``#`` comments to end of line::

    problem  := section+
    section  := "places" ":" ident+
              | "transitions" ":" entry*
              | "init" ":" (ident "=" nat)*
              | "target" ":" (ident ">=" nat)*
    entry    := ident ":" ["in" arc*] ["out" arc*] ";"
    arc      := ident ["*" nat]

Identifiers match ``[A-Za-z_][A-Za-z0-9_.-]*``; the section keywords and
``in``/``out`` are reserved.  Every ``target:`` section describes one
target marking (unlisted places need zero tokens); ``init:`` entries
default to zero as well.  A problem needs at least one place and one
target.  Duplicate declarations and negative numbers are rejected.  The
``init:`` section may be omitted for the zero marking.

The MIST subset accepts the four sections ``vars``, ``rules``, ``init``
and ``target`` in that order.  Rule guards are conjunctions of
``x >= c``; updates are ``x' = x + c``, ``x' = x - c`` or ``x' = x``.
Each rule becomes one transition consuming ``max(guard, decrease)`` and
producing accordingly; anything else (transfers, resets, parametric
initial markings, other sections) is rejected with a diagnostic rather
than translated approximately.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .net import Marking, PetriNet


@dataclass(frozen=True)
class Problem:
    """A net together with the markings whose coverability is asked."""

    net: PetriNet
    targets: Tuple[Marking, ...]
    name: str = ""

    def __post_init__(self) -> None:
        targets = tuple(self.net.marking(m) for m in self.targets)
        if not targets:
            raise ValueError("a problem needs at least one target")
        object.__setattr__(self, "targets", targets)


class ParseError(ValueError):
    """Syntax or validation error, with 1-based source position."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int


_NATIVE_TOKEN = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*|\d+|>=|[:;*=]|\S")
_MIST_TOKEN = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*'?|\d+|->|>=|[=,;+\-]|\S")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*\Z")

_NATIVE_KEYWORDS = frozenset({"places", "transitions", "init", "target", "in", "out"})
_MIST_SECTIONS = ("vars", "rules", "init", "target")


def _scan(text: Union[str, bytes], pattern: re.Pattern) -> List[_Token]:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    tokens: List[_Token] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            m = pattern.match(line, pos)
            tok = m.group()
            if len(tok) == 1 and not tok.isalnum() and tok not in ":;*=,'+-":
                raise ParseError(f"unexpected character {tok!r}", lineno, pos + 1)
            tokens.append(_Token(tok, lineno, pos + 1))
            pos = m.end()
    return tokens


class _Cursor:
    def __init__(self, tokens: List[_Token]) -> None:
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> Optional[_Token]:
        tok = self.peek()
        if tok is not None:
            self.i += 1
        return tok

    def expect(self, text: str, what: str) -> _Token:
        tok = self.next()
        if tok is None:
            last = self.tokens[-1] if self.tokens else _Token("", 1, 1)
            raise ParseError(f"expected {what} but the input ended", last.line, last.column)
        if tok.text != text:
            raise ParseError(f"expected {what}, got {tok.text!r}", tok.line, tok.column)
        return tok

    def error(self, message: str) -> ParseError:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else _Token("", 1, 1)
            return ParseError(message + " (at end of input)", last.line, last.column)
        return ParseError(message, tok.line, tok.column)


def _is_nat(text: str) -> bool:
    return text.isdigit()


def _native_ident(cur: _Cursor, what: str) -> _Token:
    tok = cur.next()
    if tok is None:
        raise cur.error(f"expected {what}")
    if tok.text == "-":
        raise ParseError("negative numbers are not allowed", tok.line, tok.column)
    if not _IDENT.match(tok.text):
        raise ParseError(f"expected {what}, got {tok.text!r}", tok.line, tok.column)
    if tok.text in _NATIVE_KEYWORDS:
        raise ParseError(f"{tok.text!r} is a reserved word", tok.line, tok.column)
    return tok


def _native_nat(cur: _Cursor, what: str) -> int:
    tok = cur.next()
    if tok is None:
        raise cur.error(f"expected {what}")
    if tok.text == "-":
        raise ParseError("negative numbers are not allowed", tok.line, tok.column)
    if not _is_nat(tok.text):
        raise ParseError(f"expected {what}, got {tok.text!r}", tok.line, tok.column)
    return int(tok.text)


def _at_section(cur: _Cursor) -> bool:
    tok = cur.peek()
    if tok is None or tok.text not in ("places", "transitions", "init", "target"):
        return False
    nxt = cur.tokens[cur.i + 1] if cur.i + 1 < len(cur.tokens) else None
    return nxt is not None and nxt.text == ":"


def parse_native(text: Union[str, bytes], name: str = "") -> Problem:
    """Parse the native problem format; positions in errors are 1-based."""
    tokens = _scan(text, _NATIVE_TOKEN)
    if not tokens:
        raise ParseError("empty input", 1, 1)
    cur = _Cursor(tokens)

    place_order: List[str] = []
    place_seen: Dict[str, _Token] = {}
    transitions: List[Tuple[str, Dict[str, int], Dict[str, int]]] = []
    transition_seen: Dict[str, _Token] = {}
    init_counts: Dict[str, int] = {}
    target_specs: List[Dict[str, int]] = []
    refs: List[_Token] = []  # every place use, for precise diagnostics

    while cur.peek() is not None:
        if not _at_section(cur):
            tok = cur.peek()
            raise ParseError(
                f"expected a section keyword, got {tok.text!r}", tok.line, tok.column
            )
        head = cur.next()
        cur.expect(":", f"':' after {head.text!r}")
        if head.text == "places":
            while cur.peek() is not None and not _at_section(cur):
                tok = _native_ident(cur, "place name")
                if tok.text in place_seen:
                    raise ParseError(f"duplicate place {tok.text!r}", tok.line, tok.column)
                place_seen[tok.text] = tok
                place_order.append(tok.text)
        elif head.text == "transitions":
            while cur.peek() is not None and not _at_section(cur):
                transitions.append(_parse_transition_entry(cur, transition_seen, refs))
        elif head.text == "init":
            while cur.peek() is not None and not _at_section(cur):
                tok = _native_ident(cur, "place name")
                refs.append(tok)
                cur.expect("=", "'=' in init entry")
                count = _native_nat(cur, "token count")
                if tok.text in init_counts:
                    raise ParseError(f"duplicate init entry for {tok.text!r}",
                                     tok.line, tok.column)
                init_counts[tok.text] = count
        else:  # target
            atoms: Dict[str, int] = {}
            while cur.peek() is not None and not _at_section(cur):
                tok = _native_ident(cur, "place name")
                refs.append(tok)
                cur.expect(">=", "'>=' in target entry")
                count = _native_nat(cur, "token count")
                if tok.text in atoms:
                    raise ParseError(f"duplicate target entry for {tok.text!r}",
                                     tok.line, tok.column)
                atoms[tok.text] = count
            target_specs.append(atoms)

    if not place_order:
        raise ParseError("no places declared", 1, 1)
    if not target_specs:
        last = tokens[-1]
        raise ParseError("no target declared", last.line, last.column)
    for tok in refs:
        if tok.text not in place_seen:
            raise ParseError(f"unknown place {tok.text!r}", tok.line, tok.column)
    for tname, tok in transition_seen.items():
        if tname in place_seen:
            raise ParseError(
                f"{tname!r} is declared as both a place and a transition",
                tok.line, tok.column,
            )

    pre_arcs: Dict[Tuple[str, str], int] = {}
    post_arcs: Dict[Tuple[str, str], int] = {}
    for tname, ins, outs in transitions:
        for p, w in ins.items():
            pre_arcs[(p, tname)] = w
        for p, w in outs.items():
            post_arcs[(tname, p)] = w

    net = PetriNet(
        places=place_order,
        transitions=[t for t, _, _ in transitions],
        pre_arcs=pre_arcs,
        post_arcs=post_arcs,
        initial=init_counts,
    )
    targets = tuple(net.marking(atoms) for atoms in target_specs)
    return Problem(net=net, targets=targets, name=name)


def _parse_transition_entry(cur: _Cursor, seen: Dict[str, _Token],
                            refs: List[_Token]):
    tok = _native_ident(cur, "transition name")
    if tok.text in seen:
        raise ParseError(f"duplicate transition {tok.text!r}", tok.line, tok.column)
    seen[tok.text] = tok
    cur.expect(":", "':' after transition name")
    ins = _parse_arc_list(cur, "in", refs)
    outs = _parse_arc_list(cur, "out", refs)
    end = cur.next()
    if end is None:
        raise ParseError(f"expected ';' to close transition {tok.text!r}",
                         tok.line, tok.column)
    if end.text != ";":
        raise ParseError(
            f"expected ';' to close transition {tok.text!r}, got {end.text!r}",
            end.line, end.column,
        )
    return tok.text, ins, outs


def _parse_arc_list(cur: _Cursor, keyword: str,
                    refs: List[_Token]) -> Dict[str, int]:
    arcs: Dict[str, int] = {}
    tok = cur.peek()
    if tok is None or tok.text != keyword:
        return arcs
    cur.next()
    while True:
        tok = cur.peek()
        if tok is None or tok.text in (";", "out") or _at_section(cur):
            return arcs
        ptok = _native_ident(cur, "place name in arc list")
        refs.append(ptok)
        weight = 1
        nxt = cur.peek()
        if nxt is not None and nxt.text == "*":
            cur.next()
            weight = _native_nat(cur, "arc multiplicity")
        if ptok.text in arcs:
            raise ParseError(f"duplicate arc for place {ptok.text!r}",
                             ptok.line, ptok.column)
        if weight:
            arcs[ptok.text] = weight


def emit_native(problem: Problem) -> str:
    """Serialize a problem so that parsing the text reproduces it."""
    net = problem.net
    lines = ["places: " + " ".join(net.places)]
    lines.append("transitions:")
    for t, tname in enumerate(net.transitions):
        parts = [f"{tname}:"]
        ins = [(net.places[p], w) for p, w in enumerate(net.pre[t]) if w]
        outs = [(net.places[p], w) for p, w in enumerate(net.post[t]) if w]
        if ins:
            parts.append("in")
            parts.extend(p if w == 1 else f"{p}*{w}" for p, w in ins)
        if outs:
            parts.append("out")
            parts.extend(p if w == 1 else f"{p}*{w}" for p, w in outs)
        lines.append(" ".join(parts) + " ;")
    init = [f"{p}={c}" for p, c in zip(net.places, net.initial) if c]
    lines.append(("init: " + " ".join(init)).rstrip())
    for m in problem.targets:
        atoms = [f"{p}>={c}" for p, c in zip(net.places, m) if c]
        lines.append(("target: " + " ".join(atoms)).rstrip())
    return "\n".join(lines) + "\n"


# -- MIST subset ---------------------------------------------------------------

def parse_mist(text: Union[str, bytes], name: str = "") -> Problem:
    """Parse the supported subset of the MIST ``.spec`` format."""
    tokens = _scan(text, _MIST_TOKEN)
    if not tokens:
        raise ParseError("empty input", 1, 1)

    # Split into the four fixed sections.
    starts: Dict[str, int] = {}
    for idx, tok in enumerate(tokens):
        if tok.text in _MIST_SECTIONS and tok.text not in starts:
            starts[tok.text] = idx
    if "vars" not in starts or starts["vars"] != 0:
        tok = tokens[0]
        raise ParseError("input must start with a 'vars' section", tok.line, tok.column)
    order = sorted(starts, key=starts.get)
    if order != [s for s in _MIST_SECTIONS if s in starts]:
        tok = tokens[starts[order[-1]]]
        raise ParseError(
            "sections must appear in the order vars, rules, init, target",
            tok.line, tok.column,
        )
    for section in _MIST_SECTIONS:
        if section not in starts:
            last = tokens[-1]
            raise ParseError(f"missing section {section!r}", last.line, last.column)

    bounds = sorted(starts.values()) + [len(tokens)]
    chunks: Dict[str, List[_Token]] = {}
    for section, begin in starts.items():
        end = bounds[bounds.index(begin) + 1]
        chunks[section] = tokens[begin + 1:end]

    variables = _mist_vars(chunks["vars"])
    var_index = {v: i for i, v in enumerate(variables)}
    rules = _mist_rules(chunks["rules"], var_index)
    init = _mist_init(chunks["init"], var_index)
    targets = _mist_targets(chunks["target"], var_index)

    taken = set(variables)
    tnames = []
    for k in range(len(rules)):
        tname = f"r{k}"
        while tname in taken:
            tname += "_"
        taken.add(tname)
        tnames.append(tname)

    pre_arcs: Dict[Tuple[str, str], int] = {}
    post_arcs: Dict[Tuple[str, str], int] = {}
    for tname, (guards, deltas) in zip(tnames, rules):
        for v, i in var_index.items():
            g = guards.get(i, 0)
            d = deltas.get(i, 0)
            need = max(g, -d) if d < 0 else g
            give = need + d
            if need:
                pre_arcs[(v, tname)] = need
            if give:
                post_arcs[(tname, v)] = give

    net = PetriNet(
        places=variables,
        transitions=tnames,
        pre_arcs=pre_arcs,
        post_arcs=post_arcs,
        initial={v: c for v, c in init.items()},
    )
    markings = tuple(
        net.marking({variables[i]: c for i, c in atoms.items()}) for atoms in targets
    )
    return Problem(net=net, targets=markings, name=name)


def _mist_vars(tokens: List[_Token]) -> Tuple[str, ...]:
    if not tokens:
        raise ParseError("no variables declared", 1, 1)
    names: List[str] = []
    seen = set()
    for tok in tokens:
        if not _IDENT.match(tok.text):
            raise ParseError(f"expected a variable name, got {tok.text!r}",
                             tok.line, tok.column)
        if tok.text in seen:
            raise ParseError(f"duplicate variable {tok.text!r}", tok.line, tok.column)
        seen.add(tok.text)
        names.append(tok.text)
    return tuple(names)


def _mist_var(tok: Optional[_Token], var_index: Dict[str, int],
              what: str, allow_prime: bool = False) -> Tuple[int, bool]:
    if tok is None:
        raise ParseError(f"expected {what} but the input ended", 1, 1)
    text = tok.text
    primed = text.endswith("'")
    if primed:
        text = text[:-1]
    if primed and not allow_prime:
        raise ParseError(f"unexpected primed variable {tok.text!r}", tok.line, tok.column)
    if text not in var_index:
        raise ParseError(f"unknown variable {text!r}", tok.line, tok.column)
    return var_index[text], primed


def _mist_rules(tokens: List[_Token], var_index: Dict[str, int]):
    cur = _Cursor(tokens)
    rules = []
    while cur.peek() is not None:
        first = cur.peek()
        rule_no = len(rules)
        label = f"rule {rule_no} (line {first.line})"
        guards: Dict[int, int] = {}
        if first.text == "->":
            cur.next()  # guardless rule
        else:
            while True:
                tok = cur.next()
                var, _ = _mist_var(tok, var_index, "a guard variable")
                op = cur.next()
                if op is None or op.text != ">=":
                    bad = op if op is not None else tok
                    raise ParseError(f"{label}: guards must use '>='",
                                     bad.line, bad.column)
                bound = _mist_nat(cur, label)
                guards[var] = max(guards.get(var, 0), bound)
                sep = cur.next()
                if sep is None:
                    raise ParseError(f"{label}: unterminated rule", tok.line, tok.column)
                if sep.text == "->":
                    break
                if sep.text != ",":
                    raise ParseError(f"{label}: expected ',' or '->', got {sep.text!r}",
                                     sep.line, sep.column)
        deltas: Dict[int, int] = {}
        updated = set()
        while True:
            nxt = cur.peek()
            if nxt is not None and nxt.text == ";":
                cur.next()
                break
            tok = cur.next()
            var, primed = _mist_var(tok, var_index, "an update variable",
                                    allow_prime=True)
            if not primed:
                raise ParseError(
                    f"{label}: update target must be primed, got {tok.text!r}",
                    tok.line, tok.column,
                )
            if var in updated:
                raise ParseError(f"{label}: variable updated twice", tok.line, tok.column)
            updated.add(var)
            eq = cur.next()
            if eq is None or eq.text != "=":
                bad = eq if eq is not None else tok
                raise ParseError(f"{label}: expected '=' in update", bad.line, bad.column)
            rhs = cur.next()
            if rhs is None:
                raise ParseError(f"{label}: unterminated update", eq.line, eq.column)
            if _is_nat(rhs.text):
                raise ParseError(
                    f"{label}: reset updates are not expressible as Petri-net arcs",
                    rhs.line, rhs.column,
                )
            rvar, rprimed = _mist_var(rhs, var_index, "the update source")
            if rprimed or rvar != var:
                raise ParseError(
                    f"{label}: update of {tok.text!r} from {rhs.text!r} is not "
                    "expressible as Petri-net arcs",
                    rhs.line, rhs.column,
                )
            delta = 0
            sign = cur.peek()
            if sign is not None and sign.text in "+-":
                cur.next()
                step = _mist_nat(cur, label)
                delta = step if sign.text == "+" else -step
            deltas[var] = delta
            sep = cur.next()
            if sep is None:
                raise ParseError(f"{label}: unterminated rule", tok.line, tok.column)
            if sep.text == ";":
                break
            if sep.text != ",":
                raise ParseError(f"{label}: expected ',' or ';', got {sep.text!r}",
                                 sep.line, sep.column)
        for var, delta in deltas.items():
            if delta < 0 and guards.get(var, 0) < -delta:
                raise ParseError(
                    f"{label}: decrease of {-delta} is not covered by the guard, "
                    "so the rule is not expressible as Petri-net arcs",
                    first.line, first.column,
                )
        rules.append((guards, deltas))
    return rules


def _mist_nat(cur: _Cursor, label: str) -> int:
    tok = cur.next()
    if tok is None:
        raise ParseError(f"{label}: expected a number", 1, 1)
    if not _is_nat(tok.text):
        raise ParseError(f"{label}: expected a number, got {tok.text!r}",
                         tok.line, tok.column)
    return int(tok.text)


def _mist_init(tokens: List[_Token], var_index: Dict[str, int]) -> Dict[str, int]:
    cur = _Cursor(tokens)
    counts: Dict[str, int] = {}
    names = {i: v for v, i in var_index.items()}
    while cur.peek() is not None:
        tok = cur.next()
        var, _ = _mist_var(tok, var_index, "an init variable")
        op = cur.next()
        if op is not None and op.text == ">=":
            raise ParseError("parametric initial marking unsupported",
                             op.line, op.column)
        if op is None or op.text != "=":
            bad = op if op is not None else tok
            raise ParseError(f"expected '=' in init, got {bad.text!r}",
                             bad.line, bad.column)
        count = _mist_nat(cur, "init")
        if names[var] in counts:
            raise ParseError(f"duplicate init entry for {names[var]!r}",
                             tok.line, tok.column)
        counts[names[var]] = count
        sep = cur.peek()
        if sep is not None and sep.text == ",":
            cur.next()
    return counts


def _mist_targets(tokens: List[_Token], var_index: Dict[str, int]):
    if not tokens:
        raise ParseError("no target declared", 1, 1)
    # One target marking per source line.
    by_line: List[List[_Token]] = []
    for tok in tokens:
        if by_line and by_line[-1][0].line == tok.line:
            by_line[-1].append(tok)
        else:
            by_line.append([tok])
    targets = []
    for group in by_line:
        cur = _Cursor(group)
        atoms: Dict[int, int] = {}
        while cur.peek() is not None:
            tok = cur.next()
            if tok.text == ",":
                continue
            var, primed = _mist_var(tok, var_index, "a target variable")
            if primed:
                raise ParseError(f"unexpected primed variable {tok.text!r}",
                                 tok.line, tok.column)
            op = cur.next()
            if op is None or op.text != ">=":
                bad = op if op is not None else tok
                raise ParseError("targets must use '>='", bad.line, bad.column)
            bound = _mist_nat(cur, "target")
            atoms[var] = max(atoms.get(var, 0), bound)
        targets.append(atoms)
    return targets
