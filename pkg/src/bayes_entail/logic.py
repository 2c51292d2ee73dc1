"""Propositional language: formulas, parsing, worlds and model sets.

Grammar (loosest binding first)::

    iff     := impl ( ("<->" | "↔") iff )?          right-assoc
    impl    := disj ( ("->" | "→" | "<-" | "←") impl )?   right-assoc
    disj    := conj ( ("|" | "∨") conj )*             left-assoc
    conj    := unary ( ("&" | "∧") unary )*           left-assoc
    unary   := ("!" | "~" | "¬") unary | atom | "(" iff ")"

Atom names are runs of ``[A-Za-z0-9_.=?']`` so classifier atoms such as
``Pclass=3`` or ``Age=?`` parse as single atoms.

Worlds over a signature ``(x1, ..., xk)`` are indexed by the big-endian
binary number ``x1 x2 ... xk``: index 0 is all-false, index ``2**k - 1`` is
all-true, and ``x1`` is the most significant bit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Iterable, Iterator, Sequence, Union

MAX_ATOMS = 20


class LogicError(Exception):
    """Base class for errors raised by the logic core."""


class FormulaSyntaxError(LogicError, ValueError):
    def __init__(self, message: str, position: int, expected: str = ""):
        self.message = message
        self.position = position
        self.expected = expected
        detail = f" (expected {expected})" if expected else ""
        super().__init__(f"{message} at offset {position}{detail}")


class UnknownAtom(LogicError, KeyError):
    def __str__(self) -> str:
        return f"unknown atom {self.args[0]!r} in sealed signature"


class AtomNotInWorld(LogicError, KeyError):
    def __str__(self) -> str:
        return f"atom {self.args[0]!r} is not in the world's signature"


class EnumerationLimitError(LogicError):
    pass


# ---------------------------------------------------------------------------
# Formula AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("atom name must be non-empty")


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ImpliedBy:
    """``left <- right``: material implication read right to left."""

    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


Formula = Union[Atom, Not, And, Or, Implies, ImpliedBy, Iff]
BINARY = (And, Or, Implies, ImpliedBy, Iff)


def atoms_of(f: Formula) -> list[str]:
    """Atom names of ``f`` in left-to-right order of first occurrence."""
    seen: dict[str, None] = {}
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            seen.setdefault(node.name)
        elif isinstance(node, Not):
            stack.append(node.arg)
        else:
            stack.append(node.right)
            stack.append(node.left)
    return list(seen)


def evaluate(f: Formula, w: "PossibleWorld") -> int:
    """Classical truth value of ``f`` at ``w`` as 0 or 1."""
    return int(_truth(f, w))


def _truth(f: Formula, w: "PossibleWorld") -> bool:
    if isinstance(f, Atom):
        return w[f.name]
    if isinstance(f, Not):
        return not _truth(f.arg, w)
    if isinstance(f, And):
        return _truth(f.left, w) and _truth(f.right, w)
    if isinstance(f, Or):
        return _truth(f.left, w) or _truth(f.right, w)
    if isinstance(f, Implies):
        return (not _truth(f.left, w)) or _truth(f.right, w)
    if isinstance(f, ImpliedBy):
        return _truth(f.left, w) or not _truth(f.right, w)
    if isinstance(f, Iff):
        return _truth(f.left, w) == _truth(f.right, w)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Signatures and worlds
# ---------------------------------------------------------------------------


class Signature:
    """Ordered, duplicate-free list of atom names.

    An extensible signature grows as the parser meets new atoms; a sealed one
    rejects them. Atom order fixes world indexing, so it never changes for
    atoms already present.
    """

    def __init__(self, atoms: Iterable[str] = (), extensible: bool = False,
                 max_atoms: int = MAX_ATOMS):
        self._atoms: list[str] = []
        self._index: dict[str, int] = {}
        self.extensible = extensible
        self.max_atoms = max_atoms
        for name in atoms:
            self._add(name)

    def _add(self, name: str) -> int:
        if not name:
            raise ValueError("atom name must be non-empty")
        if name in self._index:
            raise ValueError(f"duplicate atom {name!r}")
        self._index[name] = len(self._atoms)
        self._atoms.append(name)
        return self._index[name]

    def resolve(self, name: str) -> int:
        idx = self._index.get(name)
        if idx is None:
            if not self.extensible:
                raise UnknownAtom(name)
            idx = self._add(name)
        return idx

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise AtomNotInWorld(name) from None

    def sealed(self) -> "Signature":
        return Signature(self._atoms, extensible=False, max_atoms=self.max_atoms)

    @property
    def atoms(self) -> tuple[str, ...]:
        return tuple(self._atoms)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self._atoms)

    def __iter__(self) -> Iterator[str]:
        return iter(self._atoms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Signature) and self._atoms == other._atoms

    def __hash__(self) -> int:
        return hash(tuple(self._atoms))

    def __repr__(self) -> str:
        flag = ", extensible=True" if self.extensible else ""
        return f"Signature({self._atoms!r}{flag})"


@dataclass(frozen=True)
class PossibleWorld:
    """A total truth assignment; ``bits[i]`` is the value of atom ``i``."""

    signature: Signature
    bits: tuple[int, ...]

    def __getitem__(self, name: str) -> bool:
        return bool(self.bits[self.signature.index(name)])

    @property
    def index(self) -> int:
        out = 0
        for b in self.bits:
            out = (out << 1) | b
        return out

    @property
    def bitstring(self) -> str:
        return "".join(map(str, self.bits))

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.signature.atoms, self.bits))

    def __repr__(self) -> str:
        return f"PossibleWorld({self.bitstring})"


class WorldSpace:
    """All ``2**k`` worlds of a signature in big-endian index order."""

    def __init__(self, signature: Signature):
        k = len(signature)
        if k > signature.max_atoms:
            raise EnumerationLimitError(
                f"{k} atoms exceed the enumeration limit of {signature.max_atoms}")
        self.signature = signature.sealed() if signature.extensible else signature
        self.worlds: tuple[PossibleWorld, ...] = tuple(
            PossibleWorld(self.signature, bits) for bits in product((0, 1), repeat=k))

    @classmethod
    def of(cls, *atoms: str) -> "WorldSpace":
        return cls(Signature(atoms))

    def world(self, bitstring: str) -> PossibleWorld:
        if len(bitstring) != len(self.signature) or set(bitstring) - {"0", "1"}:
            raise ValueError(f"bad world bitstring {bitstring!r} for {len(self.signature)} atoms")
        return self.worlds[int(bitstring, 2) if bitstring else 0]

    def __len__(self) -> int:
        return len(self.worlds)

    def __iter__(self) -> Iterator[PossibleWorld]:
        return iter(self.worlds)

    def __getitem__(self, i: int) -> PossibleWorld:
        return self.worlds[i]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, WorldSpace) and self.signature == other.signature

    def __hash__(self) -> int:
        return hash(self.signature)

    def __repr__(self) -> str:
        return f"WorldSpace({list(self.signature.atoms)!r})"


# ---------------------------------------------------------------------------
# Knowledge bases and model sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KnowledgeBase:
    """A finite multiset of formulas; duplicates are kept."""

    formulas: tuple[Formula, ...] = ()

    def __init__(self, formulas: Iterable[Formula] = ()):
        object.__setattr__(self, "formulas", tuple(formulas))

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.formulas)

    def __len__(self) -> int:
        return len(self.formulas)

    def __add__(self, other: Iterable[Formula]) -> "KnowledgeBase":
        return KnowledgeBase(self.formulas + tuple(other))

    @classmethod
    def parse(cls, texts: Iterable[str], sig: Signature) -> "KnowledgeBase":
        return cls(parse_formula(t, sig) for t in texts)


def models(kb: Iterable[Formula], space: WorldSpace) -> tuple[PossibleWorld, ...]:
    """Worlds of ``space`` satisfying every formula of ``kb``, in index order."""
    kb = tuple(kb)
    return tuple(w for w in space if all(_truth(f, w) for f in kb))


def satisfied_count(kb: Iterable[Formula], w: PossibleWorld) -> int:
    return sum(_truth(f, w) for f in kb)


def max_support_worlds(kb: Iterable[Formula], space: WorldSpace) -> tuple[PossibleWorld, ...]:
    """Worlds satisfying the largest number of formulas of ``kb``.

    Coincides with :func:`models` whenever ``kb`` is satisfiable.
    """
    kb = tuple(kb)
    counts = [satisfied_count(kb, w) for w in space]
    best = max(counts)
    return tuple(w for w, c in zip(space, counts) if c == best)


# ---------------------------------------------------------------------------
# Parsing and rendering
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<op><->|->|<-|[!~¬&∧|∨→←↔()])|(?P<atom>[A-Za-z0-9_.=?']+))")

_CANON = {
    "!": "!", "~": "!", "¬": "!",
    "&": "&", "∧": "&",
    "|": "|", "∨": "|",
    "->": "->", "→": "->",
    "<-": "<-", "←": "<-",
    "<->": "<->", "↔": "<->",
    "(": "(", ")": ")",
}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos,
                                     "atom, operator or parenthesis")
        start = m.start("op") if m.group("op") else m.start("atom")
        if m.group("op"):
            tokens.append(("op", _CANON[m.group("op")], start))
        else:
            tokens.append(("atom", m.group("atom"), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.tokens = _tokenize(text)
        self.i = 0
        self.sig = sig

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def accept(self, *ops: str) -> str | None:
        kind, value, _ = self.peek()
        if kind == "op" and value in ops:
            self.i += 1
            return value
        return None

    def parse(self) -> Formula:
        f = self.iff()
        kind, value, pos = self.peek()
        if kind != "end":
            raise FormulaSyntaxError(f"unexpected token {value!r}", pos, "operator or end of input")
        return f

    def iff(self) -> Formula:
        left = self.impl()
        if self.accept("<->"):
            return Iff(left, self.iff())
        return left

    def impl(self) -> Formula:
        left = self.disj()
        op = self.accept("->", "<-")
        if op == "->":
            return Implies(left, self.impl())
        if op == "<-":
            return ImpliedBy(left, self.impl())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.accept("|"):
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.accept("&"):
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.accept("!"):
            return Not(self.unary())
        kind, value, pos = self.peek()
        if kind == "atom":
            self.i += 1
            self.sig.resolve(value)
            return Atom(value)
        if self.accept("("):
            f = self.iff()
            if not self.accept(")"):
                _, got, at = self.peek()
                raise FormulaSyntaxError(f"unexpected {got or 'end of input'!r}", at, "')'")
            return f
        what = "end of input" if kind == "end" else repr(value)
        raise FormulaSyntaxError(f"unexpected {what}", pos, "atom, '!' or '('")


def parse_formula(text: str, sig: Signature) -> Formula:
    """Parse ``text`` into a :data:`Formula`, registering atoms in ``sig``.

    Raises :class:`FormulaSyntaxError` on malformed input and
    :class:`UnknownAtom` when ``sig`` is sealed and the text names an atom it
    does not contain.
    """
    if not text or not text.strip():
        raise FormulaSyntaxError("empty formula", 0, "atom, '!' or '('")
    return _Parser(text, sig).parse()


# precedence levels: higher binds tighter
_LEVEL = {Iff: 1, Implies: 2, ImpliedBy: 2, Or: 3, And: 4, Not: 5, Atom: 6}
_ASCII = {And: "&", Or: "|", Implies: "->", ImpliedBy: "<-", Iff: "<->"}
_UNICODE = {And: "∧", Or: "∨", Implies: "→", ImpliedBy: "←", Iff: "↔"}
_RIGHT_ASSOC = {1, 2}


def render(f: Formula, unicode: bool = False) -> str:
    """Inverse of :func:`parse_formula` with minimal parentheses."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        inner = render(f.arg, unicode)
        if _LEVEL[type(f.arg)] < _LEVEL[Not]:
            inner = f"({inner})"
        return ("¬" if unicode else "!") + inner
    level = _LEVEL[type(f)]
    left, right = render(f.left, unicode), render(f.right, unicode)
    ll, rl = _LEVEL[type(f.left)], _LEVEL[type(f.right)]
    if level in _RIGHT_ASSOC:
        wrap_left, wrap_right = ll <= level, rl < level
    else:
        wrap_left, wrap_right = ll < level, rl <= level
    if wrap_left:
        left = f"({left})"
    if wrap_right:
        right = f"({right})"
    op = (_UNICODE if unicode else _ASCII)[type(f)]
    return f"{left} {op} {right}"


def read_kb_file(path: str | Path, sig: Signature) -> KnowledgeBase:
    """One formula per line; ``#`` starts a comment; blank lines are skipped."""
    formulas = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            formulas.append(parse_formula(line, sig))
        except FormulaSyntaxError as exc:
            raise FormulaSyntaxError(f"line {lineno}: {exc.message}", exc.position,
                                     exc.expected) from None
    return KnowledgeBase(formulas)


def space_for(formulas: Sequence[Formula], atoms: Sequence[str] = ()) -> WorldSpace:
    """World space over ``atoms`` followed by any further atoms of ``formulas``."""
    sig = Signature(atoms, extensible=True)
    for f in formulas:
        for name in atoms_of(f):
            if name not in sig:
                sig.resolve(name)
    return WorldSpace(sig)
