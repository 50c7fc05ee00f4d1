"""The weighted polynomial ring S = k[x_0, ..., x_n], deg x_i = a_i.

Monomials are exponent tuples.  Polynomials are dicts ``{exponents: coeff}``
with coefficients reduced into [0, p); elements of a free module
S(-b_1) + ... + S(-b_k) are dicts ``{(exponents, component): coeff}``.
The monomial order is weighted grevlex: weighted degree first, then reverse
lexicographic with x_n smallest.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .field import PrimeField

Monomial = tuple  # tuple[int, ...]
Term = tuple  # (Monomial, component)
Vector = dict  # {Term: int}


class ParseError(ValueError):
    """Malformed polynomial text; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


class UnknownIdentifierError(ParseError):
    pass


@dataclass(frozen=True)
class WeightedRing:
    weights: tuple
    var_names: tuple = None
    field: PrimeField = field(default_factory=PrimeField)

    def __post_init__(self):
        w = tuple(int(a) for a in self.weights)
        if not w:
            raise ValueError("need at least one variable")
        if any(a < 1 for a in w):
            raise ValueError(f"weights must be positive, got {w}")
        if any(w[i] > w[i + 1] for i in range(len(w) - 1)):
            raise ValueError(f"weights must be nondecreasing, got {w}")
        object.__setattr__(self, "weights", w)
        names = self.var_names
        if names is None:
            names = tuple(f"x{i}" for i in range(len(w)))
        names = tuple(names)
        if len(names) != len(w) or len(set(names)) != len(names):
            raise ValueError("need one distinct name per variable")
        for nm in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", nm):
                raise ValueError(f"bad variable name {nm!r}")
        object.__setattr__(self, "var_names", names)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def nvars(self) -> int:
        return len(self.weights)

    @property
    def n(self) -> int:
        return len(self.weights) - 1

    @property
    def a(self) -> int:
        return sum(self.weights)

    @property
    def sigma(self) -> int:
        return self.a - self.nvars

    def degree(self, m: Monomial) -> int:
        return sum(e * w for e, w in zip(m, self.weights))

    def mono_key(self, m: Monomial) -> tuple:
        """Sort key for weighted grevlex; larger key = larger monomial."""
        return (self.degree(m),) + tuple(-e for e in reversed(m))

    def one(self) -> Monomial:
        return (0,) * self.nvars

    def var(self, i: int) -> Monomial:
        m = [0] * self.nvars
        m[i] = 1
        return tuple(m)

    def __repr__(self):
        return f"WeightedRing(P{self.weights}, p={self.p})"


def weighted_degree(m: Monomial, R: WeightedRing) -> int:
    return R.degree(m)


def symonds_constant(R: WeightedRing) -> int:
    return R.sigma


@lru_cache(maxsize=None)
def _monomials(weights: tuple, d: int) -> tuple:
    if d < 0:
        return ()
    out = []

    def rec(i, left, prefix):
        if i == len(weights) - 1:
            if left % weights[i] == 0:
                out.append(prefix + (left // weights[i],))
            return
        for e in range(left // weights[i], -1, -1):
            rec(i + 1, left - e * weights[i], prefix + (e,))

    rec(0, d, ())
    return tuple(out)


def monomials_of_degree(R: WeightedRing, d: int) -> list:
    """All monomials of weighted degree d, descending in weighted grevlex."""
    mons = _monomials(R.weights, d)
    return sorted(mons, key=R.mono_key, reverse=True)


# -- dict-polynomial helpers (hot paths use these directly) -----------------


def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    return tuple(a + b for a, b in zip(m1, m2))


def mono_divides(m1: Monomial, m2: Monomial) -> bool:
    return all(a <= b for a, b in zip(m1, m2))


def mono_div(m2: Monomial, m1: Monomial) -> Monomial:
    return tuple(b - a for a, b in zip(m1, m2))


def mono_lcm(m1: Monomial, m2: Monomial) -> Monomial:
    return tuple(max(a, b) for a, b in zip(m1, m2))


def poly_add(f: dict, g: dict, p: int, scale: int = 1) -> dict:
    """f + scale*g as a new dict."""
    out = dict(f)
    for m, c in g.items():
        v = (out.get(m, 0) + scale * c) % p
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def poly_mul(f: dict, g: dict, p: int) -> dict:
    out: dict = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            m = mono_mul(m1, m2)
            v = (out.get(m, 0) + c1 * c2) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def poly_scale(f: dict, c: int, p: int) -> dict:
    c %= p
    if c == 0:
        return {}
    return {m: v * c % p for m, v in f.items()}


def poly_shift(f: dict, mono: Monomial, c: int, p: int) -> dict:
    c %= p
    return {mono_mul(m, mono): v * c % p for m, v in f.items()} if c else {}


class Polynomial:
    """Immutable polynomial over a :class:`WeightedRing`."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: WeightedRing, terms: dict | None = None):
        p = ring.p
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(int(e) for e in m)
            if len(m) != ring.nvars or any(e < 0 for e in m):
                raise ValueError(f"bad exponent vector {m}")
            c %= p
            if c:
                clean[m] = c
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def constant(cls, ring, c):
        return cls(ring, {ring.one(): c})

    @classmethod
    def variable(cls, ring, i):
        return cls(ring, {ring.var(i): 1})

    @property
    def homogeneous_degree(self) -> int | None:
        degs = {self.ring.degree(m) for m in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def is_homogeneous(self) -> bool:
        return not self.terms or self.homogeneous_degree is not None

    def is_zero(self) -> bool:
        return not self.terms

    def _wrap(self, terms):
        out = Polynomial.__new__(Polynomial)
        object.__setattr__(out, "ring", self.ring)
        object.__setattr__(out, "terms", terms)
        return out

    def _other(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("polynomials over different rings")
            return other.terms
        if isinstance(other, int):
            return {self.ring.one(): other % self.ring.p} if other % self.ring.p else {}
        return NotImplemented

    def __add__(self, other):
        g = self._other(other)
        return self._wrap(poly_add(self.terms, g, self.ring.p))

    __radd__ = __add__

    def __sub__(self, other):
        g = self._other(other)
        return self._wrap(poly_add(self.terms, g, self.ring.p, -1))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self._wrap(poly_scale(self.terms, -1, self.ring.p))

    def __mul__(self, other):
        g = self._other(other)
        return self._wrap(poly_mul(self.terms, g, self.ring.p))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        out = {self.ring.one(): 1}
        base = self.terms
        while k:
            if k & 1:
                out = poly_mul(out, base, self.ring.p)
            k >>= 1
            if k:
                base = poly_mul(base, base, self.ring.p)
        return self._wrap(out)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int):
            return self.terms == self._other(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: self.ring.mono_key(t[0]), reverse=True)

    def __str__(self):
        return format_poly(self.terms, self.ring)

    def __repr__(self):
        return f"Polynomial({self})"


def format_mono(m: Monomial, R: WeightedRing) -> str:
    parts = []
    for name, e in zip(R.var_names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(terms: dict, R: WeightedRing) -> str:
    if not terms:
        return "0"
    out = []
    for m, c in sorted(terms.items(), key=lambda t: R.mono_key(t[0]), reverse=True):
        c = R.field.symmetric(c)
        sign = "-" if c < 0 else "+"
        c = abs(c)
        ms = format_mono(m, R)
        if not ms:
            body = str(c)
        elif c == 1:
            body = ms
        else:
            body = f"{c}*{ms}"
        out.append((sign, body))
    s = "".join(f"{sg}{b}" for sg, b in out)
    return s[1:] if s.startswith("+") else s


# -- parser ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()]))")


def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad, text)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, R: WeightedRing):
        self.text = text
        self.R = R
        self.toks = _tokenize(text)
        self.i = 0
        self.names = {nm: i for i, nm in enumerate(R.var_names)}

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        what = "end of input" if tok[0] == "end" else repr(tok[1])
        raise ParseError(f"{msg}, found {what}", tok[2], self.text)

    def parse(self) -> dict:
        if self.peek()[0] == "end":
            self.error("empty expression")
        f = self.expr()
        if self.peek()[0] != "end":
            self.error("expected operator")
        return f

    def expr(self) -> dict:
        p = self.R.p
        sign = 1
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            sign = -1 if self.take()[1] == "-" else 1
        f = poly_scale(self.term(), sign, p)
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            s = 1 if self.take()[1] == "+" else -1
            f = poly_add(f, self.term(), p, s)
        return f

    def term(self) -> dict:
        f = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            f = poly_mul(f, self.factor(), self.R.p)
        return f

    def factor(self) -> dict:
        f = self.primary()
        while self.peek()[:2] == ("op", "^"):
            self.take()
            t = self.peek()
            if t[0] != "int":
                self.error("expected integer exponent")
            self.take()
            f = Polynomial(self.R, f).__pow__(int(t[1])).terms
        return f

    def primary(self) -> dict:
        t = self.peek()
        R = self.R
        if t[0] == "int":
            self.take()
            c = int(t[1]) % R.p
            return {R.one(): c} if c else {}
        if t[0] == "id":
            self.take()
            if t[1] not in self.names:
                raise UnknownIdentifierError(f"unknown identifier {t[1]!r}", t[2], self.text)
            return {R.var(self.names[t[1]]): 1}
        if t[:2] == ("op", "("):
            self.take()
            f = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.error("expected ')'")
            self.take()
            return f
        self.error("expected variable, integer or '('")


def parse_polynomial(text: str, R: WeightedRing) -> Polynomial:
    """Parse ``text`` (grammar: + - * ^ and parentheses, no implicit products)."""
    return Polynomial(R, _Parser(text, R).parse())


# -- free modules and presentations -----------------------------------------


def vector_degree(v: Vector, R: WeightedRing, degrees: Sequence[int]) -> int | None:
    """Degree of a homogeneous vector, None if it is zero or inhomogeneous."""
    degs = {R.degree(m) + degrees[c] for (m, c) in v}
    return degs.pop() if len(degs) == 1 else None


def format_vector(v: Vector, R: WeightedRing, rank: int) -> str:
    comps = [{} for _ in range(rank)]
    for (m, c), x in v.items():
        comps[c][m] = x
    return "[" + ", ".join(format_poly(f, R) for f in comps) + "]"


class InhomogeneousError(ValueError):
    pass


@dataclass(eq=False)
class ModulePresentation:
    """Cokernel of a homogeneous map  F_1 -> F_0 = S(-b_1) + ... + S(-b_k).

    ``relations`` are the images of the basis of F_1, as module vectors.
    """

    ring: WeightedRing
    ambient_degrees: tuple
    relations: list
    cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.ambient_degrees = tuple(int(b) for b in self.ambient_degrees)
        k = len(self.ambient_degrees)
        rels = []
        for v in self.relations:
            v = {(tuple(m), int(c)): x % self.ring.p for (m, c), x in v.items() if x % self.ring.p}
            if not v:
                continue
            if any(not 0 <= c < k for (_, c) in v):
                raise ValueError("relation refers to a nonexistent generator")
            if vector_degree(v, self.ring, self.ambient_degrees) is None:
                raise InhomogeneousError(
                    f"relation {format_vector(v, self.ring, k)} is not homogeneous"
                )
            rels.append(v)
        self.relations = rels

    @property
    def rank(self) -> int:
        return len(self.ambient_degrees)

    @classmethod
    def quotient(cls, R: WeightedRing, generators: Iterable) -> ModulePresentation:
        """S/I for I generated by ``generators`` (Polynomials or strings)."""
        rels = []
        for g in generators:
            if isinstance(g, str):
                g = parse_polynomial(g, R)
            rels.append({(m, 0): c for m, c in g.terms.items()})
        return cls(R, (0,), rels)

    @classmethod
    def free(cls, R: WeightedRing, degrees: Sequence[int] = (0,)) -> ModulePresentation:
        return cls(R, tuple(degrees), [])

    @classmethod
    def cokernel(cls, R: WeightedRing, degrees: Sequence[int], rows: Sequence[Sequence]):
        """Cokernel of a matrix given row by row; row k belongs to generator k."""
        if len(rows) != len(degrees):
            raise ValueError("need one matrix row per generator degree")
        ncols = {len(r) for r in rows}
        if len(ncols) > 1:
            raise ValueError("ragged matrix")
        ncols = ncols.pop() if ncols else 0
        rels = []
        for j in range(ncols):
            v = {}
            for k, row in enumerate(rows):
                f = row[j]
                if isinstance(f, str):
                    f = parse_polynomial(f, R)
                for m, c in f.terms.items():
                    v[(m, k)] = c
            rels.append(v)
        return cls(R, tuple(degrees), rels)

    def __repr__(self):
        rels = "; ".join(format_vector(v, self.ring, self.rank) for v in self.relations)
        return f"ModulePresentation({self.ring!r}, degrees={self.ambient_degrees}, relations=[{rels}])"
