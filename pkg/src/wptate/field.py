"""Prime fields F_p.

Coefficients everywhere else in the package are plain Python ints kept in
``[0, p)``; :class:`FieldElement` is the boxed value type for callers who
want operator arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass

from ._config import DEFAULT_CHAR

# products of two residues must fit in int64 for the matrix kernels
MAX_CHAR = 2**31 - 1

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b == g == gcd(a, b)."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
    return a, x, y


@dataclass(frozen=True)
class PrimeField:
    p: int = DEFAULT_CHAR

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"characteristic must be prime, got {self.p!r}")
        if self.p > MAX_CHAR:
            raise ValueError(f"characteristic {self.p} exceeds word-size limit {MAX_CHAR}")

    def normalize(self, n: int) -> int:
        return n % self.p

    def invert(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        _, x, _ = xgcd(a, self.p)
        return x % self.p

    def __call__(self, n: int) -> FieldElement:
        return FieldElement(n % self.p, self)

    def symmetric(self, a: int) -> int:
        """Representative of ``a`` in (-p/2, p/2], used for printing."""
        a %= self.p
        return a - self.p if a > self.p // 2 else a


def normalize(n: int, F: PrimeField) -> FieldElement:
    return FieldElement(n % F.p, F)


def invert(a: FieldElement | int, F: PrimeField) -> FieldElement:
    v = a.value if isinstance(a, FieldElement) else a
    return FieldElement(F.invert(v), F)


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: PrimeField

    def __post_init__(self):
        if not 0 <= self.value < self.field.p:
            raise ValueError("FieldElement value must be a canonical residue")

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("mixing elements of different fields")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement((self.value + o) % self.field.p, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldElement((self.value - o) % self.field.p, self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        return FieldElement((o - self.value) % self.field.p, self.field)

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement(self.value * o % self.field.p, self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value % self.field.p, self.field)

    def __truediv__(self, other):
        o = self._coerce(other)
        return FieldElement(self.value * self.field.invert(o) % self.field.p, self.field)

    def inverse(self) -> FieldElement:
        return FieldElement(self.field.invert(self.value), self.field)

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} (mod {self.field.p})"
