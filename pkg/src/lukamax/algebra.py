"""Finite algebras, order filters, evaluation and unary clone synthesis.

Elements are always integer indices ``0..size-1``.  In the chain ``LV(n+1)``
index ``k`` stands for ``k/n``; in a product ``A x B`` the pair ``(a, b)`` is
stored at ``a * |B| + b``.
"""
from __future__ import annotations

import os
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .formula import (
    SIG_J4,
    SIG_LUK,
    Formula,
    Op,
    Signature,
    Var,
    signature_for,
    subformulas,
    variables,
)

TABLE_DTYPE = np.int16


class AlgebraError(ValueError):
    pass


def frac_label(k: int, n: int) -> str:
    f = Fraction(k, n)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


class FiniteAlgebra:
    """A finite carrier with one total table per primitive connective.

    Derived connectives of the signature get their tables on first use by
    evaluating the defining template, so ``table("oplus")`` works on any
    algebra over ``SIG_LUK``.
    """

    def __init__(
        self,
        name: str,
        sig: Signature,
        size: int,
        tables: Mapping[str, np.ndarray],
        labels: Optional[Sequence[str]] = None,
        kind: str = "custom",
        params: tuple = (),
        designated: Optional[Iterable[int]] = None,
    ):
        if size < 1:
            raise AlgebraError("an algebra needs at least one element")
        self.name = name
        self.sig = sig
        self.size = size
        self.labels = list(labels) if labels is not None else [str(k) for k in range(size)]
        if len(self.labels) != size or len(set(self.labels)) != size:
            raise AlgebraError("labels must be distinct and one per element")
        self.kind = kind
        self.params = params
        self.designated = frozenset(designated) if designated is not None else None
        self._tables: Dict[str, np.ndarray] = {}
        for sym, arity in sig.connectives.items():
            if sym not in tables:
                raise AlgebraError(f"missing table for connective {sym!r}")
            t = np.asarray(tables[sym])
            if t.shape != (size,) * arity:
                raise AlgebraError(f"table for {sym!r} has shape {t.shape}, expected {(size,) * arity}")
            if t.size and (t.min() < 0 or t.max() >= size):
                raise AlgebraError(f"table for {sym!r} has entries out of range")
            t = t.astype(TABLE_DTYPE)
            t.setflags(write=False)
            self._tables[sym] = t
        extra = set(tables) - set(sig.connectives)
        if extra:
            raise AlgebraError(f"tables for undeclared connectives: {sorted(extra)}")

    def __repr__(self):
        return f"FiniteAlgebra({self.name!r}, size={self.size})"

    def table(self, symbol: str) -> np.ndarray:
        t = self._tables.get(symbol)
        if t is not None:
            return t
        if symbol not in self.sig.derived:
            raise AlgebraError(f"algebra {self.name} has no connective {symbol!r}")
        arity, template = self.sig.derived[symbol]
        names = ["x", "y", "z"][:arity]
        grids = np.meshgrid(*([np.arange(self.size)] * arity), indexing="ij")
        env = {nm: g.ravel().astype(TABLE_DTYPE) for nm, g in zip(names, grids)}
        t = eval_vector(self, template, env, length=self.size ** arity).reshape((self.size,) * arity)
        t = t.astype(TABLE_DTYPE)
        t.setflags(write=False)
        self._tables[symbol] = t
        return t

    def has(self, symbol: str) -> bool:
        return self.sig.knows(symbol)

    @property
    def primitive_tables(self) -> Dict[str, np.ndarray]:
        return {s: self._tables[s] for s in self.sig.connectives}

    def label(self, k: int) -> str:
        return self.labels[k]

    def element(self, text: Union[str, int]) -> int:
        """Index of an element given its label, index, or (for chains) any equal fraction."""
        if isinstance(text, (int, np.integer)):
            k = int(text)
            if not 0 <= k < self.size:
                raise AlgebraError(f"element index {k} out of range")
            return k
        s = str(text).strip()
        if s in self.labels:
            return self.labels.index(s)
        if self.kind == "chain":
            (n,) = self.params
            try:
                v = Fraction(s) * n
            except (ValueError, ZeroDivisionError):
                v = None
            if v is not None and v.denominator == 1 and 0 <= v <= n:
                return int(v)
        if self.kind == "product" and s.startswith("(") and s.endswith(")"):
            A, B = self.params
            parts = _split_pair(s[1:-1])
            if parts is not None:
                return A.element(parts[0]) * B.size + B.element(parts[1])
        raise AlgebraError(f"no element {s!r} in {self.name}")

    def eval(self, f: Formula, asg: Mapping[str, int]) -> int:
        return eval_formula(self, f, asg)


def _split_pair(s: str) -> Optional[Tuple[str, str]]:
    depth = 0
    for idx, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            return s[:idx].strip(), s[idx + 1 :].strip()
    return None


# ---------------------------------------------------------------------------
# constructors


@lru_cache(maxsize=None)
def make_chain(n: int) -> FiniteAlgebra:
    """The Lukasiewicz chain with elements ``0, 1/n, ..., 1`` over ``SIG_LUK``."""
    if n < 1:
        raise AlgebraError("chain parameter n must be at least 1")
    k = np.arange(n + 1)
    neg = n - k
    imp = np.minimum(n, n - k[:, None] + k[None, :])
    labels = [frac_label(j, n) for j in range(n + 1)]
    return FiniteAlgebra(f"LV{n + 1}", SIG_LUK, n + 1, {"neg": neg, "imp": imp}, labels, "chain", (n,))


def make_product(A: FiniteAlgebra, B: FiniteAlgebra) -> FiniteAlgebra:
    if A.sig != B.sig:
        raise AlgebraError(f"signature mismatch: {A.sig.name} vs {B.sig.name}")
    nb = B.size
    size = A.size * nb
    idx = np.arange(size)
    ca, cb = idx // nb, idx % nb
    tables = {}
    for sym, arity in A.sig.connectives.items():
        ta, tb = A.table(sym), B.table(sym)
        if arity == 0:
            tables[sym] = np.array(int(ta) * nb + int(tb))
            continue
        grids = np.meshgrid(*([idx] * arity), indexing="ij")
        ra = ta[tuple(ca[g] for g in grids)]
        rb = tb[tuple(cb[g] for g in grids)]
        tables[sym] = ra.astype(np.int64) * nb + rb
    labels = [f"({A.labels[a]},{B.labels[b]})" for a in range(A.size) for b in range(nb)]
    return FiniteAlgebra(f"{A.name}x{B.name}", A.sig, size, tables, labels, "product", (A, B))


@lru_cache(maxsize=None)
def chain_product(chains: Tuple[int, ...]) -> FiniteAlgebra:
    """``LV(n0+1) x ... x LV(n_{l-1}+1)``, nested to the left."""
    if not chains:
        raise AlgebraError("empty chain list")
    alg = make_chain(chains[0])
    for n in chains[1:]:
        alg = make_product(alg, make_chain(n))
    return alg


def component_values(A: FiniteAlgebra) -> List[Tuple[int, ...]]:
    """Per element, the tuple of chain coordinates (for chains and chain products)."""
    if A.kind == "chain":
        return [(k,) for k in range(A.size)]
    if A.kind == "product":
        L, R = A.params
        left, right = component_values(L), component_values(R)
        return [left[a] + right[b] for a in range(L.size) for b in range(R.size)]
    raise AlgebraError(f"{A.name} is not built from chains")


def component_params(A: FiniteAlgebra) -> Tuple[int, ...]:
    if A.kind == "chain":
        return A.params
    if A.kind == "product":
        return component_params(A.params[0]) + component_params(A.params[1])
    raise AlgebraError(f"{A.name} is not built from chains")


def order_filter(n: int, i: int) -> frozenset:
    if not 1 <= i <= n:
        raise AlgebraError(f"filter index must satisfy 1 <= i <= n, got i={i}, n={n}")
    return frozenset(range(i, n + 1))


def restrict_filter(n: int, i: int, m: int) -> int:
    """The ``j`` with ``F_{i/n}`` restricted to the ``m``-subchain equal to ``F_{j/m}``."""
    if m < 1 or n % m:
        raise AlgebraError(f"{m} does not divide {n}")
    if not 1 <= i <= n:
        raise AlgebraError(f"filter index must satisfy 1 <= i <= n, got i={i}, n={n}")
    return -((-i * m) // n)


def chain_embedding(m: int, n: int) -> List[int]:
    """Index map of ``LV(m+1)`` into ``LV(n+1)``; requires ``m | n``."""
    if m < 1 or n % m:
        raise AlgebraError(f"{m} does not divide {n}")
    return [k * (n // m) for k in range(m + 1)]


def is_homomorphism(B: FiniteAlgebra, A: FiniteAlgebra, emb: Sequence[int]) -> bool:
    """Whether ``emb`` (indices of B into A) commutes with every primitive connective."""
    emb = np.asarray(emb)
    if len(emb) != B.size:
        return False
    for sym, arity in B.sig.connectives.items():
        if A.sig.arity(sym) != arity:
            return False
        tb, ta = B.table(sym), A.table(sym)
        if arity == 0:
            if emb[int(tb)] != int(ta):
                return False
            continue
        grids = np.meshgrid(*([np.arange(B.size)] * arity), indexing="ij")
        if not np.array_equal(emb[tb[tuple(grids)]], ta[tuple(emb[g] for g in grids)]):
            return False
    return True


def is_closed(A: FiniteAlgebra, elems: Iterable[int]) -> bool:
    """Whether ``elems`` is closed under all primitive operations of ``A``."""
    s = sorted(set(elems))
    mask = np.zeros(A.size, dtype=bool)
    mask[s] = True
    for sym, arity in A.sig.connectives.items():
        t = A.table(sym)
        if arity == 0:
            if not mask[int(t)]:
                return False
            continue
        sub = t[np.ix_(*([s] * arity))]
        if not mask[sub].all():
            return False
    return True


def subalgebra(A: FiniteAlgebra, elems: Iterable[int], name: Optional[str] = None) -> Tuple[FiniteAlgebra, List[int]]:
    """The subalgebra on ``elems`` together with its embedding into ``A``."""
    s = sorted(set(elems))
    if not is_closed(A, s):
        raise AlgebraError(f"{[A.labels[k] for k in s]} is not closed under the operations of {A.name}")
    pos = {a: b for b, a in enumerate(s)}
    remap = np.full(A.size, -1)
    for a, b in pos.items():
        remap[a] = b
    tables = {}
    for sym, arity in A.sig.connectives.items():
        t = A.table(sym)
        tables[sym] = remap[int(t)] if arity == 0 else remap[t[np.ix_(*([s] * arity))]]
    kind, params = "custom", ()
    if A.kind == "chain":
        (n,) = A.params
        step = s[1] if len(s) > 1 else 0
        if step and n % step == 0 and s == list(range(0, n + 1, step)):
            kind, params = "chain", (n // step,)
    sub = FiniteAlgebra(name or f"{A.name}|{len(s)}", A.sig, len(s), tables, [A.labels[k] for k in s], kind, params)
    return sub, s


# ---------------------------------------------------------------------------
# evaluation


def eval_vector(A: FiniteAlgebra, f: Formula, env: Mapping[str, np.ndarray], length: Optional[int] = None, memo=None) -> np.ndarray:
    """Evaluate ``f`` pointwise over equal-length arrays of element indices."""
    if memo is None:
        memo = {}
    if length is None:
        length = len(next(iter(env.values()))) if env else 1

    def go(g):
        hit = memo.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Var):
            try:
                out = env[g.name]
            except KeyError:
                raise AlgebraError(f"no value assigned to variable {g.name!r}") from None
        else:
            t = A.table(g.symbol)
            if len(g.args) == 0:
                out = np.full(length, int(t), dtype=TABLE_DTYPE)
            elif len(g.args) == 1:
                out = t[go(g.args[0])]
            elif len(g.args) == 2:
                out = t[go(g.args[0]), go(g.args[1])]
            else:
                out = t[tuple(go(a) for a in g.args)]
        memo[g] = out
        return out

    # evaluate bottom-up to keep recursion shallow on deep terms
    for g in subformulas(f):
        go(g)
    return go(f)


def eval_formula(A: FiniteAlgebra, f: Formula, asg: Mapping[str, int]) -> int:
    missing = [v for v in variables(f) if v not in asg]
    if missing:
        raise AlgebraError(f"no value assigned to variable(s) {missing}")
    env = {v: np.array([A.element(asg[v])], dtype=TABLE_DTYPE) for v in variables(f)}
    return int(eval_vector(A, f, env, length=1)[0])


def term_function(A: FiniteAlgebra, f: Formula, var: Optional[str] = None) -> np.ndarray:
    """Table of a formula in at most one variable, as a function on the carrier."""
    vs = variables(f)
    if len(vs) > 1 or (var is not None and vs and vs != [var]):
        raise AlgebraError(f"expected a formula in one variable, got {vs}")
    name = vs[0] if vs else (var or "p")
    out = eval_vector(A, f, {name: np.arange(A.size, dtype=TABLE_DTYPE)}, length=A.size)
    return np.asarray(out, dtype=TABLE_DTYPE)


# ---------------------------------------------------------------------------
# presets and table files

PRESET_DIR = Path(__file__).with_name("presets")


def preset_dir() -> Path:
    override = os.environ.get("LUKAMAX_PRESET_DIR")
    return Path(override) if override else PRESET_DIR


def list_presets() -> List[str]:
    return sorted(p.stem for p in preset_dir().glob("*.alg"))


def load_algebra(source: Union[str, os.PathLike]) -> FiniteAlgebra:
    """Load a ``.alg`` table file, or a shipped preset by name (``"G3"``, ``"M4m"``)."""
    path = Path(source)
    if not path.exists():
        candidate = preset_dir() / (str(source) if str(source).endswith(".alg") else f"{source}.alg")
        if not candidate.exists():
            raise AlgebraError(f"no algebra file or preset named {str(source)!r}")
        path = candidate
    return parse_algebra(path.read_text(encoding="utf-8"), default_name=path.stem)


def parse_algebra(text: str, default_name: str = "custom") -> FiniteAlgebra:
    """Parse the table format::

        name M4m
        size 4
        labels 0 N B 1
        signature and/2 or/2 neg/1 box/1
        designated 2 3
        table neg
        3 1 2 0
        ...

    ``#`` starts a comment.  Table entries are listed row-major by element
    index; an entry may also be written as a non-numeric label.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    name, size, labels, sig_items, designated = default_name, None, None, None, None
    tables_raw: Dict[str, List[str]] = {}
    current = None
    for line in lines:
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "name":
            name, current = rest, None
        elif head == "size":
            try:
                size = int(rest)
            except ValueError:
                raise AlgebraError(f"bad size line: {line!r}") from None
            current = None
        elif head == "labels":
            labels, current = rest.split(), None
        elif head == "signature":
            sig_items = []
            for item in rest.split():
                sym, slash, ar = item.partition("/")
                if not slash or not ar.isdigit():
                    raise AlgebraError(f"bad signature entry {item!r}; expected name/arity")
                sig_items.append((sym, int(ar)))
            current = None
        elif head == "designated":
            designated, current = rest.split(), None
        elif head == "table":
            if rest in tables_raw:
                raise AlgebraError(f"duplicate table for {rest!r}")
            current = rest
            tables_raw[current] = []
        else:
            if current is None:
                raise AlgebraError(f"unexpected line {line!r}")
            tables_raw[current].extend(line.split())
    if size is None:
        raise AlgebraError("missing 'size' line")
    if sig_items is None:
        raise AlgebraError("missing 'signature' line")
    syms = [s for s, _ in sig_items]
    if len(set(syms)) != len(syms):
        raise AlgebraError("duplicate connective in signature")
    labels = labels or [str(k) for k in range(size)]
    if len(labels) != size:
        raise AlgebraError(f"{len(labels)} labels for {size} elements")

    def to_index(tok: str) -> int:
        # bare integers are indices even when some label reads "1"
        try:
            k = int(tok)
        except ValueError:
            if tok in labels:
                return labels.index(tok)
            raise AlgebraError(f"unknown element {tok!r}") from None
        if not 0 <= k < size:
            raise AlgebraError(f"element {k} out of range 0..{size - 1}")
        return k

    tables = {}
    for sym, arity in sig_items:
        if sym not in tables_raw:
            raise AlgebraError(f"missing table for connective {sym!r}")
        entries = [to_index(t) for t in tables_raw[sym]]
        if len(entries) != size ** arity:
            raise AlgebraError(f"table {sym!r} has {len(entries)} entries, expected {size ** arity}")
        tables[sym] = np.array(entries).reshape((size,) * arity)
    undeclared = set(tables_raw) - set(syms)
    if undeclared:
        raise AlgebraError(f"tables for undeclared connectives: {sorted(undeclared)}")
    sig = signature_for(dict(sig_items), name=f"Sig[{name}]")
    des = [to_index(t) for t in designated] if designated is not None else None
    if des is not None and not des:
        raise AlgebraError("designated set must be non-empty")
    return FiniteAlgebra(name, sig, size, tables, labels, "custom", (), des)


def dump_algebra(A: FiniteAlgebra, designated: Optional[Iterable[int]] = None) -> str:
    """Render an algebra in the table-file format."""
    out = [f"name {A.name}", f"size {A.size}", "labels " + " ".join(A.labels)]
    out.append("signature " + " ".join(f"{s}/{a}" for s, a in A.sig.connectives.items()))
    des = designated if designated is not None else A.designated
    if des is not None:
        out.append("designated " + " ".join(str(k) for k in sorted(des)))
    for sym, arity in A.sig.connectives.items():
        out.append(f"table {sym}")
        t = A.table(sym)
        if arity <= 1:
            out.append(" ".join(str(int(x)) for x in np.ravel(t)))
        else:
            for row in t.reshape(-1, A.size):
                out.append(" ".join(str(int(x)) for x in row))
    return "\n".join(out) + "\n"


def boolean_j4() -> FiniteAlgebra:
    """The two-element Boolean algebra over the J4 signature (``sq`` is the identity)."""
    return FiniteAlgebra(
        "B2[J4]",
        SIG_J4,
        2,
        {"or": np.maximum.outer(np.arange(2), np.arange(2)), "neg": np.array([1, 0]), "sq": np.array([0, 1])},
        ["0", "1"],
    )


# ---------------------------------------------------------------------------
# unary clone


def default_clone_ops(A: FiniteAlgebra) -> List[Tuple[str, int]]:
    """Generating operations for the clone BFS: primitives, then derived ones.

    Derived connectives do not enlarge the clone but give shorter witnesses
    (``p o+ p`` rather than its expansion).  Unary operations come first.
    """
    ops = [(s, a) for s, a in A.sig.connectives.items()]
    ops += [(s, a) for s, (a, _) in A.sig.derived.items() if a <= 2 and s != "iff"]
    return sorted(ops, key=lambda sa: sa[1] if sa[1] > 0 else -1)


class CloneCapExceeded(RuntimeError):
    pass


class UnaryClone:
    """Breadth-first closure of the identity under the generating operations.

    Function ``k`` has table ``tables[k]``; its witness term is rebuilt from
    parent pointers.  Layers are expanded on demand, so searching for a
    target stops as soon as it is found.
    """

    CHUNK_ENTRIES = 1 << 21

    def __init__(self, A: FiniteAlgebra, ops: Optional[Sequence[Tuple[str, int]]] = None, cap: int = 5_000_000, var: str = "p"):
        self.algebra = A
        self.ops = list(ops) if ops is not None else default_clone_ops(A)
        for sym, arity in self.ops:
            if arity > 2:
                raise AlgebraError("clone generators of arity above 2 are not supported")
        self.cap = cap
        self.var = var
        N = A.size
        self.N = N
        self._powers = (N ** np.arange(N - 1, -1, -1)).astype(np.int64)
        space = N ** N
        self._bitmap = np.zeros(space, dtype=bool) if space <= (1 << 27) else None
        self._known_codes = set() if self._bitmap is None else None
        ident = np.arange(N, dtype=TABLE_DTYPE)
        self._blocks = [ident[None, :]]
        self._tables_cache = None
        self.parents: List[tuple] = [("var",)]
        self._mark(self._codes(ident[None, :]))
        self.layers = [(0, 1)]
        self.complete = False
        self.capped = False
        self._witness: Dict[int, Formula] = {0: Var(var)}

    # bookkeeping
    def _codes(self, rows: np.ndarray) -> np.ndarray:
        return rows.astype(np.int64) @ self._powers

    def _mark(self, codes: np.ndarray):
        if self._bitmap is not None:
            self._bitmap[codes] = True
        else:
            self._known_codes.update(int(c) for c in codes)

    def _unknown(self, codes: np.ndarray) -> np.ndarray:
        if self._bitmap is not None:
            return ~self._bitmap[codes]
        return np.fromiter((int(c) not in self._known_codes for c in codes), dtype=bool, count=len(codes))

    @property
    def tables(self) -> np.ndarray:
        if self._tables_cache is None or len(self._tables_cache) != len(self.parents):
            self._tables_cache = np.concatenate(self._blocks, axis=0)
            self._blocks = [self._tables_cache]
        return self._tables_cache

    def __len__(self):
        return len(self.parents)

    def _offer(self, codes: np.ndarray, build_rows, parents_of) -> None:
        """Add candidates with unseen codes, keeping first occurrences in order.

        ``build_rows(positions)`` materializes tables for the chosen candidate
        positions; ``parents_of(position)`` names a candidate's origin.
        """
        if not len(codes):
            return
        pos = np.nonzero(self._unknown(codes))[0]
        if not len(pos):
            return
        _, first = np.unique(codes[pos], return_index=True)
        fresh = np.sort(pos[first])
        if len(self.parents) + len(fresh) > self.cap:
            fresh = fresh[: max(0, self.cap - len(self.parents))]
            self.capped = True
        if not len(fresh):
            return
        self._mark(codes[fresh])
        self._blocks.append(np.asarray(build_rows(fresh), dtype=TABLE_DTYPE))
        self.parents.extend(parents_of(int(j)) for j in fresh)

    def step(self) -> bool:
        """Expand one layer; returns False once the closure is complete."""
        if self.complete or self.capped:
            return False
        start, stop = self.layers[-1]
        T = self.tables
        frontier = T[start:stop]
        before = len(self.parents)
        A = self.algebra
        for sym, arity in self.ops:
            if self.capped:
                break
            t = A.table(sym)
            if arity == 0:
                if start == 0:
                    row = np.full((1, self.N), int(t), dtype=TABLE_DTYPE)
                    self._offer(self._codes(row), lambda js, r=row: r[js], lambda j, s=sym: (s,))
            elif arity == 1:
                rows = t[frontier]
                self._offer(self._codes(rows), lambda js, r=rows: r[js], lambda j, s=sym, o=start: (s, o + j))
            else:
                self._binary_block(t, sym, T[:start], 0, frontier, start)
                self._binary_block(t, sym, frontier, start, T[:stop], 0)
        after = len(self.parents)
        if after == before:
            self.complete = not self.capped
            return False
        self.layers.append((before, after))
        return True

    def _binary_block(self, t, sym, left, lstart, right, rstart):
        # candidates enumerated in lexicographic order of (left, right) indices
        nl, nr = len(left), len(right)
        if not nl or not nr:
            return
        N = self.N
        per_left = max(1, self.CHUNK_ENTRIES // max(1, nr))
        for a0 in range(0, nl, per_left):
            if self.capped:
                return
            L = left[a0 : a0 + per_left]
            codes = np.zeros((len(L), nr), dtype=np.int64)
            for x in range(N):
                codes *= N
                codes += t[L[:, x, None], right[None, :, x]]
            codes = codes.ravel()

            def build(js, L=L):
                a, b = js // nr, js % nr
                return t[L[a], right[b]]

            self._offer(codes, build, lambda j, a0=a0: (sym, lstart + a0 + j // nr, rstart + j % nr))

    def run(self) -> "UnaryClone":
        while self.step():
            pass
        return self

    def witness(self, k: int) -> Formula:
        hit = self._witness.get(k)
        if hit is not None:
            return hit
        stack = [k]
        while stack:
            top = stack[-1]
            if top in self._witness:
                stack.pop()
                continue
            par = self.parents[top]
            kids = [c for c in par[1:] if c not in self._witness]
            if kids:
                stack.extend(kids)
                continue
            self._witness[top] = Op(par[0], tuple(self._witness[c] for c in par[1:]))
            stack.pop()
        return self._witness[k]

    def find(self, target: Mapping[int, int]) -> Optional[int]:
        """Index of the first function (breadth order) extending the partial map."""
        if not target:
            return 0
        keys = np.array(list(target.keys()))
        vals = np.array(list(target.values()))
        checked = 0
        while True:
            T = self.tables
            if checked < len(T):
                hits = np.nonzero((T[checked:, keys] == vals).all(axis=1))[0]
                if len(hits):
                    return checked + int(hits[0])
                checked = len(T)
            if not self.step():
                return None

    def functions(self) -> np.ndarray:
        return self.tables


_CLONES: Dict[tuple, UnaryClone] = {}


def unary_clone(A: FiniteAlgebra, cap: int = 5_000_000, ops: Optional[Sequence[Tuple[str, int]]] = None, run: bool = True) -> UnaryClone:
    """The (cached) unary clone of ``A``; fully expanded unless ``run`` is False."""
    key = (id(A), cap, tuple(ops) if ops is not None else None)
    clone = _CLONES.get(key)
    if clone is None or clone.algebra is not A:
        clone = UnaryClone(A, ops, cap)
        _CLONES[key] = clone
    if run:
        clone.run()
    return clone


def synth_unary(A: FiniteAlgebra, target: Mapping, cap: int = 5_000_000) -> Optional[Formula]:
    """A one-variable term whose function extends ``target``, or None if none exists.

    Returns None only when the clone was exhausted; a cap hit raises
    :class:`CloneCapExceeded` instead, since then the answer is unknown.
    """
    tgt = {A.element(k): A.element(v) for k, v in target.items()}
    clone = unary_clone(A, cap, run=False)
    k = clone.find(tgt)
    if k is not None:
        return clone.witness(k)
    if clone.capped:
        raise CloneCapExceeded(f"clone of {A.name} exceeded {cap} functions before finding a match")
    return None
