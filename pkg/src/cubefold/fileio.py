"""Line-oriented text formats for pocsets, actions, maps and relations.

All four share the same lexical rules: UTF-8, one declaration per line,
``#`` starts a comment, names are ``[A-Za-z0-9_]+``.  Errors carry 1-based
line and column numbers.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from pathlib import Path

from .action import GroupAction, validate_action
from .errors import CubefoldError, ParseError
from .maps import PocsetMap
from .pocset import Pocset, RawPocset, validate_pocset
from .quotient import EquivalenceRelation

NAME = re.compile(r"[A-Za-z0-9_]+")
_TOKEN = re.compile(r"->|[:,]|[A-Za-z0-9_]+|[^\s:,A-Za-z0-9_]+")


def _tokens(line: str) -> list[tuple[str, int]]:
    """``(token, column)`` pairs of a line, comment dropped."""
    body = line.split("#", 1)[0]
    return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(body)]


def _lines(text: str):
    for number, line in enumerate(text.splitlines(), 1):
        toks = _tokens(line)
        if toks:
            yield number, toks


def _name(tok: tuple[str, int], line: int) -> str:
    value, col = tok
    if not NAME.fullmatch(value):
        raise ParseError(f"invalid name {value!r}", line=line, column=col)
    return value


def _expect_count(toks, n: int, keyword: str, line: int, usage: str) -> None:
    if len(toks) != n:
        # point at the first surplus token, or just past the last one
        col = toks[n][1] if len(toks) > n else toks[-1][1] + len(toks[-1][0])
        raise ParseError(f"{keyword}: expected {usage}", line=line, column=col)


def _keyword(toks, line: int, allowed: tuple[str, ...]) -> str:
    word, col = toks[0]
    if word not in allowed:
        raise ParseError(f"unknown keyword {word!r}, expected {' or '.join(allowed)}", line=line, column=col)
    return word


# -- pocsets ---------------------------------------------------------------


def parse_pocset_raw(text: str) -> RawPocset:
    pairs, order, pair_lines, order_lines = [], [], [], []
    for line, toks in _lines(text):
        word = _keyword(toks, line, ("pair", "le"))
        _expect_count(toks, 3, word, line, f"'{word} NAME NAME'")
        a, b = _name(toks[1], line), _name(toks[2], line)
        if word == "pair":
            pairs.append((a, b))
            pair_lines.append(line)
        else:
            order.append((a, b))
            order_lines.append(line)
    return RawPocset(pairs=pairs, order=order, pair_lines=pair_lines, order_lines=order_lines)


def parse_pocset(text: str) -> Pocset:
    return validate_pocset(parse_pocset_raw(text))


def format_pocset(p: Pocset) -> str:
    return p.to_text()


# -- actions ---------------------------------------------------------------


def parse_action_raw(text: str) -> tuple[dict[str, dict[str, str]], dict[str, int]]:
    gens: dict[str, dict[str, str]] = {}
    where: dict[str, int] = {}
    for line, toks in _lines(text):
        _keyword(toks, line, ("gen",))
        if len(toks) < 3 or toks[2][0] != ":":
            col = toks[2][1] if len(toks) > 2 else toks[-1][1] + len(toks[-1][0])
            raise ParseError("gen: expected 'gen NAME : a -> b, ...'", line=line, column=col)
        name = _name(toks[1], line)
        if name in gens:
            raise ParseError(f"generator {name} declared twice", line=line, column=toks[1][1])
        moves: dict[str, str] = {}
        rest = toks[3:]
        i = 0
        while i < len(rest):
            chunk = rest[i:i + 3]
            if len(chunk) < 3 or chunk[1][0] != "->":
                col = chunk[-1][1] if chunk else toks[-1][1]
                raise ParseError("expected 'NAME -> NAME'", line=line, column=col)
            src, dst = _name(chunk[0], line), _name(chunk[2], line)
            if src in moves and moves[src] != dst:
                raise ParseError(f"{src} mapped twice in generator {name}", line=line, column=chunk[0][1])
            moves[src] = dst
            i += 3
            if i < len(rest):
                if rest[i][0] != ",":
                    raise ParseError("expected ','", line=line, column=rest[i][1])
                i += 1
                if i == len(rest):
                    raise ParseError("trailing ','", line=line, column=rest[i - 1][1])
        gens[name] = moves
        where[name] = line
    return gens, where


def parse_action(text: str, p: Pocset) -> GroupAction:
    gens, where = parse_action_raw(text)
    try:
        return validate_action(p, gens)
    except CubefoldError as exc:
        if exc.line is None and exc.witness and exc.witness[0] in where:
            exc.line = where[exc.witness[0]]
        raise


def format_action(a: GroupAction) -> str:
    return a.to_text()


# -- maps ------------------------------------------------------------------


def parse_map_raw(text: str) -> tuple[dict[str, str], dict[str, int]]:
    mapping: dict[str, str] = {}
    where: dict[str, int] = {}
    for line, toks in _lines(text):
        _keyword(toks, line, ("map",))
        _expect_count(toks, 4, "map", line, "'map NAME -> NAME'")
        if toks[2][0] != "->":
            raise ParseError("map: expected '->'", line=line, column=toks[2][1])
        src, dst = _name(toks[1], line), _name(toks[3], line)
        if src in mapping and mapping[src] != dst:
            raise ParseError(f"{src} mapped twice", line=line, column=toks[1][1])
        mapping[src] = dst
        where[src] = line
    return mapping, where


def parse_map(text: str, domain: Pocset, codomain: Pocset) -> PocsetMap:
    mapping, where = parse_map_raw(text)
    return PocsetMap.from_names(domain, codomain, mapping, lines=where)


def format_map(f: PocsetMap) -> str:
    return f.to_text()


# -- relations -------------------------------------------------------------


def parse_relation_raw(text: str) -> list[tuple[str, str, int]]:
    out = []
    for line, toks in _lines(text):
        _keyword(toks, line, ("rel",))
        _expect_count(toks, 3, "rel", line, "'rel NAME NAME'")
        out.append((_name(toks[1], line), _name(toks[2], line), line))
    return out


def parse_relation(text: str, p: Pocset) -> EquivalenceRelation:
    """Equivalence generated by the declared pairs and complementation."""
    pairs = []
    for a, b, line in parse_relation_raw(text):
        try:
            pairs.append((p.id(a), p.id(b)))
        except CubefoldError as exc:
            exc.line = line
            raise
    return EquivalenceRelation.from_pairs(p, pairs)


def format_relation(rel: EquivalenceRelation) -> str:
    names = rel.pocset.names
    lines = []
    for c in rel.classes:
        members = sorted(c)
        lines += [f"rel {names[members[0]]} {names[h]}" for h in members[1:]]
    return "".join(line + "\n" for line in lines)


# -- workspace -------------------------------------------------------------


@dataclass
class Workspace:
    """Loads files, interning parsed objects by content hash."""

    cache: dict[tuple, object] = field(default_factory=dict)

    @staticmethod
    def _read(path) -> tuple[str, str]:
        data = Path(path).read_bytes()
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"{path}: not UTF-8 ({exc.reason})") from None
        return text, hashlib.sha256(data).hexdigest()

    def _get(self, key, build):
        if key not in self.cache:
            self.cache[key] = build()
        return self.cache[key]

    def pocset(self, path) -> Pocset:
        text, digest = self._read(path)
        return self._get(("pocset", digest), lambda: parse_pocset(text))

    def action(self, path, p: Pocset) -> GroupAction:
        text, digest = self._read(path)
        return self._get(("action", digest, id(p)), lambda: parse_action(text, p))

    def map(self, path, domain: Pocset, codomain: Pocset) -> PocsetMap:
        text, digest = self._read(path)
        return self._get(("map", digest, id(domain), id(codomain)), lambda: parse_map(text, domain, codomain))

    def relation(self, path, p: Pocset) -> EquivalenceRelation:
        text, digest = self._read(path)
        return self._get(("relation", digest, id(p)), lambda: parse_relation(text, p))

    def action_trivial(self, p: Pocset) -> GroupAction:
        return self._get(("action", None, id(p)), lambda: validate_action(p, {}))
