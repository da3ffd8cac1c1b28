"""Formula terms, signatures, and the ASCII concrete syntax.

Formulas are immutable trees of :class:`Var` and :class:`Op` nodes.  A
:class:`Signature` lists the primitive connectives of an algebra and, on top
of them, a table of derived connectives given by templates in the variables
``x`` and ``y``.  Parsing and rendering use a single token table::

    !    neg       (unary, prefix)
    ~    tilde     (unary, prefix)
    &    and       |    or       o+   oplus     o*   otimes
    ->   imp       <->  iff

Any other unary connective is written as a word prefix (``sq p``, ``box p``),
any other binary connective in functional form (``name(a, b)``).  ``n#f`` is
``f o+ ... o+ f`` and ``f^n`` is ``f o* ... o* f`` (n copies, left-nested).

Binding strength, tightest first: prefix, ``o*``, ``o+``, ``&``, ``|``,
``->`` (right associative), ``<->``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union


class Var:
    __slots__ = ("name", "_hash")

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("var", name))

    def __eq__(self, other):
        return isinstance(other, Var) and other.name == self.name

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Var({self.name!r})"

    def __str__(self):
        return render(self)


class Op:
    __slots__ = ("symbol", "args", "_hash", "_size")

    def __init__(self, symbol: str, args: Sequence["Formula"] = ()):
        self.symbol = symbol
        self.args = tuple(args)
        self._hash = hash((symbol, self.args))
        self._size = 1 + sum(a.size if isinstance(a, Op) else 1 for a in self.args)

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Op)
            and other._hash == self._hash
            and other.symbol == self.symbol
            and other.args == self.args
        )

    def __hash__(self):
        return self._hash

    @property
    def size(self) -> int:
        return self._size

    def __repr__(self):
        return f"Op({self.symbol!r}, {list(self.args)!r})"

    def __str__(self):
        return render(self)


Formula = Union[Var, Op]


def size(f: Formula) -> int:
    return 1 if isinstance(f, Var) else f.size


def depth(f: Formula) -> int:
    if isinstance(f, Var) or not f.args:
        return 0
    return 1 + max(depth(a) for a in f.args)


class FormulaError(ValueError):
    """Raised for syntax errors and signature violations."""

    def __init__(self, message: str, pos: Optional[int] = None):
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)
        self.pos = pos


# ---------------------------------------------------------------------------
# signatures

X, Y = Var("x"), Var("y")


@dataclass
class Signature:
    """Primitive connectives plus derived connectives given by templates."""

    name: str
    connectives: Dict[str, int]
    derived: Dict[str, Tuple[int, Formula]] = field(default_factory=dict)

    def __post_init__(self):
        for sym, arity in self.connectives.items():
            if arity < 0:
                raise ValueError(f"negative arity for {sym}")
        clash = set(self.connectives) & set(self.derived)
        if clash:
            raise ValueError(f"connectives both primitive and derived: {sorted(clash)}")

    def arity(self, symbol: str) -> Optional[int]:
        if symbol in self.connectives:
            return self.connectives[symbol]
        if symbol in self.derived:
            return self.derived[symbol][0]
        return None

    def knows(self, symbol: str) -> bool:
        return symbol in self.connectives or symbol in self.derived

    def all_symbols(self) -> List[Tuple[str, int]]:
        out = list(self.connectives.items())
        out += [(s, a) for s, (a, _) in self.derived.items()]
        return out

    def __hash__(self):
        return hash((self.name, tuple(sorted(self.connectives.items()))))

    def __eq__(self, other):
        return (
            isinstance(other, Signature)
            and self.name == other.name
            and self.connectives == other.connectives
            and set(self.derived) == set(other.derived)
        )


def _neg(a):
    return Op("neg", (a,))


def _imp(a, b):
    return Op("imp", (a, b))


def _luk_derived() -> Dict[str, Tuple[int, Formula]]:
    return {
        "otimes": (2, _neg(_imp(X, _neg(Y)))),
        "oplus": (2, _imp(_neg(X), Y)),
        "or": (2, _imp(_imp(X, Y), Y)),
        "and": (2, _neg(_imp(_imp(_neg(X), _neg(Y)), _neg(Y)))),
        "iff": (2, Op("and", (_imp(X, Y), _imp(Y, X)))),
    }


def _j4_derived() -> Dict[str, Tuple[int, Formula]]:
    sq = lambda a: Op("sq", (a,))
    or_ = lambda a, b: Op("or", (a, b))
    and_ = lambda a, b: Op("and", (a, b))
    tilde = lambda a: Op("tilde", (a,))
    return {
        "delta": (1, sq(sq(X))),
        "tilde": (1, Op("delta", (_neg(X),))),
        "imp": (2, or_(tilde(X), Y)),
        "and": (2, _neg(or_(_neg(X), _neg(Y)))),
        "iff": (2, and_(Op("imp", (X, Y)), Op("imp", (Y, X)))),
        "nabla": (1, _neg(tilde(X))),
        "alpha13": (1, and_(Op("nabla", (X,)), tilde(sq(X)))),
        "beta13": (1, and_(Op("alpha13", (X,)), sq(_neg(X)))),
    }


SIG_LUK = Signature("SigLuk", {"neg": 1, "imp": 2}, _luk_derived())
SIG_J4 = Signature("SigJ4", {"or": 2, "neg": 1, "sq": 1}, _j4_derived())

BUILTIN_SIGNATURES = {"SigLuk": SIG_LUK, "SigJ4": SIG_J4}


def signature_for(connectives: Mapping[str, int], name: str = "custom") -> Signature:
    """Reuse a built-in signature (with its derived table) when the primitives match."""
    for sig in BUILTIN_SIGNATURES.values():
        if dict(connectives) == sig.connectives:
            return sig
    return Signature(name, dict(connectives))


# ---------------------------------------------------------------------------
# tokens and rendering

PUNCT_UNARY = {"!": "neg", "~": "tilde"}
PUNCT_BINARY = {"o*": "otimes", "o+": "oplus", "&": "and", "|": "or", "->": "imp", "<->": "iff"}
SYMBOL_TOKEN = {v: k for k, v in {**PUNCT_UNARY, **PUNCT_BINARY}.items()}

# (precedence, right-associative); higher binds tighter
BINARY_LEVEL = {
    "o*": (6, False),
    "o+": (5, False),
    "&": (4, False),
    "|": (3, False),
    "->": (2, True),
    "<->": (1, False),
}

_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<num>\d+)(?P<hash>\#)?"
    r"|(?P<op><->|->|o\+|o\*|[!~&|()^,])"
    r"|(?P<ident>[A-Za-z](?:(?!o[+*])[A-Za-z0-9_])*)"
    r")"
)


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise FormulaError(f"unexpected character {text[pos]!r}", pos)
        if m.group("num") is not None:
            start = m.start("num")
            kind = "nfold" if m.group("hash") else "num"
            toks.append((kind, m.group("num"), start))
        elif m.group("op") is not None:
            toks.append(("op", m.group("op"), m.start("op")))
        else:
            toks.append(("ident", m.group("ident"), m.start("ident")))
        pos = m.end()
    toks.append(("eof", "", n))
    return toks


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.text = text
        self.sig = sig
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def advance(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.advance()
        if val != value:
            raise FormulaError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def need(self, symbol, arity, pos):
        have = self.sig.arity(symbol)
        if have is None:
            raise FormulaError(f"connective {symbol!r} unknown for signature {self.sig.name}", pos)
        if have != arity:
            raise FormulaError(f"connective {symbol!r} has arity {have}, used with {arity}", pos)

    def parse(self) -> Formula:
        f = self.binary(1)
        kind, val, pos = self.peek()
        if kind != "eof":
            raise FormulaError(f"unexpected token {val!r}", pos)
        return f

    def binary(self, min_level: int) -> Formula:
        left = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind != "op" or val not in BINARY_LEVEL:
                return left
            level, right_assoc = BINARY_LEVEL[val]
            if level < min_level:
                return left
            self.advance()
            symbol = PUNCT_BINARY[val]
            self.need(symbol, 2, pos)
            right = self.binary(level if right_assoc else level + 1)
            left = Op(symbol, (left, right))

    def unary(self) -> Formula:
        kind, val, pos = self.peek()
        if kind == "op" and val in PUNCT_UNARY:
            self.advance()
            symbol = PUNCT_UNARY[val]
            self.need(symbol, 1, pos)
            return Op(symbol, (self.unary(),))
        if kind == "nfold":
            self.advance()
            count = int(val)
            if count < 1:
                raise FormulaError("n-fold sugar needs n >= 1", pos)
            self.need("oplus", 2, pos)
            return _fold("oplus", self.unary(), count)
        if kind == "ident" and self.sig.arity(val) == 1:
            self.advance()
            return Op(val, (self.unary(),))
        return self.postfix()

    def postfix(self) -> Formula:
        f = self.primary()
        while True:
            kind, val, pos = self.peek()
            if not (kind == "op" and val == "^"):
                return f
            self.advance()
            kind, num, npos = self.advance()
            if kind != "num":
                raise FormulaError("expected a count after '^'", npos)
            count = int(num)
            if count < 1:
                raise FormulaError("power sugar needs n >= 1", npos)
            self.need("otimes", 2, pos)
            f = _fold("otimes", f, count)

    def primary(self) -> Formula:
        kind, val, pos = self.advance()
        if kind == "op" and val == "(":
            f = self.binary(1)
            self.expect(")")
            return f
        if kind == "ident":
            arity = self.sig.arity(val)
            if arity is None:
                return Var(val)
            if arity == 0:
                return Op(val, ())
            # functional form name(a, b, ...)
            self.expect("(")
            args = [self.binary(1)]
            while self.peek()[1] == ",":
                self.advance()
                args.append(self.binary(1))
            self.expect(")")
            if len(args) != arity:
                raise FormulaError(f"connective {val!r} has arity {arity}, given {len(args)}", pos)
            return Op(val, tuple(args))
        if kind == "eof":
            raise FormulaError("unexpected end of input", pos)
        raise FormulaError(f"unexpected token {val!r}", pos)


def _fold(symbol: str, f: Formula, count: int) -> Formula:
    out = f
    for _ in range(count - 1):
        out = Op(symbol, (out, f))
    return out


def nfold(f: Formula, count: int) -> Formula:
    """``count``-fold strong disjunction of ``f`` with itself."""
    return _fold("oplus", f, count)


def power(f: Formula, count: int) -> Formula:
    """``count``-fold strong conjunction of ``f`` with itself."""
    return _fold("otimes", f, count)


def parse(text: str, sig: Signature = SIG_LUK) -> Formula:
    return _Parser(text, sig).parse()


def _is_atomic_render(f: Formula) -> bool:
    if isinstance(f, Var):
        return True
    return len(f.args) != 2 or f.symbol not in SYMBOL_TOKEN


def render(f: Formula) -> str:
    if isinstance(f, Var):
        return f.name
    sym, args = f.symbol, f.args
    if len(args) == 0:
        return sym
    if len(args) == 1:
        inner = render(args[0])
        if not _is_atomic_render(args[0]):
            inner = f"({inner})"
        if sym in SYMBOL_TOKEN:
            return SYMBOL_TOKEN[sym] + inner
        return f"{sym} {inner}"
    if len(args) == 2 and sym in SYMBOL_TOKEN:
        parts = []
        for a in args:
            s = render(a)
            parts.append(s if _is_atomic_render(a) else f"({s})")
        return f"{parts[0]} {SYMBOL_TOKEN[sym]} {parts[1]}"
    return f"{sym}(" + ", ".join(render(a) for a in args) + ")"


# ---------------------------------------------------------------------------
# structural operations


def variables(f: Formula) -> List[str]:
    """Variable names in first-occurrence order, without duplicates."""
    seen: Dict[str, None] = {}
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Var):
            seen.setdefault(g.name)
        else:
            stack.extend(reversed(g.args))
    return list(seen)


def variables_of(formulas: Iterable[Formula]) -> List[str]:
    seen: Dict[str, None] = {}
    for f in formulas:
        for v in variables(f):
            seen.setdefault(v)
    return list(seen)


def substitute(f: Formula, mapping: Mapping[str, Formula]) -> Formula:
    """Simultaneous substitution; unmapped variables stay as they are."""
    memo: Dict[Formula, Formula] = {}

    def go(g):
        if isinstance(g, Var):
            return mapping.get(g.name, g)
        hit = memo.get(g)
        if hit is not None:
            return hit
        out = Op(g.symbol, tuple(go(a) for a in g.args))
        memo[g] = out
        return out

    return go(f)


def expand(f: Formula, sig: Signature) -> Formula:
    """Rewrite derived connectives until only primitives of ``sig`` remain."""
    memo: Dict[Formula, Formula] = {}

    def go(g):
        if isinstance(g, Var):
            return g
        hit = memo.get(g)
        if hit is not None:
            return hit
        args = tuple(go(a) for a in g.args)
        if g.symbol in sig.connectives:
            out = Op(g.symbol, args)
        elif g.symbol in sig.derived:
            arity, template = sig.derived[g.symbol]
            names = ["x", "y", "z"][:arity]
            out = go(substitute(template, dict(zip(names, args))))
        else:
            raise FormulaError(f"unknown derived connective {g.symbol!r} for {sig.name}")
        memo[g] = out
        return out

    return go(f)


def subformulas(f: Formula) -> List[Formula]:
    """Distinct subformulas, children before parents."""
    out: Dict[Formula, None] = {}

    def go(g):
        if g in out:
            return
        if isinstance(g, Op):
            for a in g.args:
                go(a)
        out[g] = None

    go(f)
    return list(out)


def check_signature(f: Formula, sig: Signature) -> None:
    for g in subformulas(f):
        if isinstance(g, Op):
            arity = sig.arity(g.symbol)
            if arity is None:
                raise FormulaError(f"connective {g.symbol!r} unknown for signature {sig.name}")
            if arity != len(g.args):
                raise FormulaError(f"connective {g.symbol!r} has arity {arity}, used with {len(g.args)}")


def match(pattern: Formula, f: Formula, binding: Optional[Dict[str, Formula]] = None) -> Optional[Dict[str, Formula]]:
    """First-order matching; variables of ``pattern`` are metavariables."""
    binding = dict(binding or {})
    stack = [(pattern, f)]
    while stack:
        p, g = stack.pop()
        if isinstance(p, Var):
            bound = binding.get(p.name)
            if bound is None:
                binding[p.name] = g
            elif bound != g:
                return None
        else:
            if not isinstance(g, Op) or g.symbol != p.symbol or len(g.args) != len(p.args):
                return None
            stack.extend(zip(p.args, g.args))
    return binding


def random_formula(rng, ops: Sequence[Tuple[str, int]], names: Sequence[str], max_depth: int, leaf_prob: float = 0.3) -> Formula:
    """Random formula with depth at most ``max_depth`` (``rng`` is a ``random.Random``)."""
    if max_depth <= 0 or rng.random() < leaf_prob:
        return Var(rng.choice(list(names)))
    sym, arity = rng.choice(list(ops))
    return Op(sym, tuple(random_formula(rng, ops, names, max_depth - 1, leaf_prob) for _ in range(arity)))
