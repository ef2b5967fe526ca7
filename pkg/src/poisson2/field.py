"""Finite fields GF(2^k) for 1 <= k <= 8, with exact scalar arithmetic.

Scalars are plain Python ints in ``range(2**k)`` interpreted as GF(2)
polynomials (bit i is the coefficient of x^i). Addition is XOR; products are
reduced modulo an irreducible polynomial of degree k. Multiplication and
inversion go through log/antilog tables built from a generator of the
multiplicative group, so every operation is table lookups and XORs.
"""

from __future__ import annotations

from dataclasses import dataclass, field as _dc_field
from functools import lru_cache

import numpy as np


class FieldError(Exception):
    """Base class for scalar-arithmetic errors."""


class UnsupportedDegree(FieldError):
    """Extension degree outside the supported range 1..8."""


class NonIrreducibleModulus(FieldError):
    """Modulus polynomial is reducible or has the wrong degree."""


class DivisionByZero(FieldError):
    """Division or inversion of the zero scalar."""


#: Default irreducible moduli, degree -> polynomial bits. Degree 8 is the
#: usual x^8+x^4+x^3+x+1; the rest are the smallest irreducibles.
DEFAULT_MODULI: dict[int, int] = {
    1: 0b10,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0b100011011,
}


def _polymul_mod(a: int, b: int, modulus: int, degree: int) -> int:
    """Carry-less multiply of two GF(2) polynomials, reduced mod ``modulus``."""
    acc = 0
    top = 1 << degree
    while b:
        if b & 1:
            acc ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= modulus
    return acc


def _is_irreducible(modulus: int, degree: int) -> bool:
    """Trial-divide ``modulus`` by every GF(2) polynomial of degree 1..k//2."""
    if modulus.bit_length() != degree + 1:
        return False
    if degree == 1:
        return True
    if not modulus & 1:  # divisible by x
        return False
    for d in range(1, degree // 2 + 1):
        for low in range(1 << d):
            divisor = (1 << d) | low
            # long division, keep only the remainder
            rem = modulus
            while rem.bit_length() >= divisor.bit_length():
                rem ^= divisor << (rem.bit_length() - divisor.bit_length())
            if rem == 0:
                return False
    return True


@dataclass(frozen=True)
class Field:
    """GF(2^k) described by its degree and modulus polynomial.

    Instances are immutable and compare by (degree, modulus). Use
    :func:`field_new` rather than the constructor so the tables get built
    and the modulus gets validated.
    """

    degree: int
    modulus: int
    _exp: tuple[int, ...] = _dc_field(repr=False, compare=False, default=())
    _log: tuple[int, ...] = _dc_field(repr=False, compare=False, default=())

    @property
    def order(self) -> int:
        return 1 << self.degree

    # ---- scalar ops -----------------------------------------------------

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    sub = add  # characteristic 2

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.degree == 1:
            return 1
        n = self.order - 1
        return self._exp[(self._log[a] + self._log[b]) % n]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of 0")
        if self.degree == 1:
            return 1
        n = self.order - 1
        return self._exp[(n - self._log[a]) % n]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise DivisionByZero("division by 0")
        return self.mul(a, self.inv(b))

    def power(self, a: int, e: int) -> int:
        if e < 0:
            return self.power(self.inv(a), -e)
        out = 1
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            e >>= 1
        return out

    def square(self, a: int) -> int:
        return self.mul(a, a)

    def validate_scalar(self, a: int) -> int:
        if not isinstance(a, int) or not 0 <= a < self.order:
            raise FieldError(f"scalar {a!r} out of range for GF(2^{self.degree})")
        return a

    def fmt(self, a: int) -> str:
        """Hex rendering used by the algebra file format."""
        return format(a, "x")

    # ---- numpy helpers (used by the dense eliminator for k > 1) ---------

    def mul_table_np(self) -> np.ndarray:
        return _mul_table_np(self.degree, self.modulus)

    def inv_table_np(self) -> np.ndarray:
        return _inv_table_np(self.degree, self.modulus)


@lru_cache(maxsize=None)
def _mul_table_np(degree: int, modulus: int) -> np.ndarray:
    f = field_new(degree, modulus)
    q = f.order
    table = np.zeros((q, q), dtype=np.uint8)
    for a in range(1, q):
        for b in range(1, q):
            table[a, b] = f.mul(a, b)
    return table


@lru_cache(maxsize=None)
def _inv_table_np(degree: int, modulus: int) -> np.ndarray:
    f = field_new(degree, modulus)
    table = np.zeros(f.order, dtype=np.uint8)
    for a in range(1, f.order):
        table[a] = f.inv(a)
    return table


def _find_generator(modulus: int, degree: int) -> int:
    """Smallest multiplicative generator of GF(2^k)*.

    Works for any irreducible modulus: x itself need not be primitive (it is
    not for the degree-8 default), so candidates are tested by walking their
    powers until 1 reappears.
    """
    n = (1 << degree) - 1
    for g in range(2, 1 << degree):
        seen = 1
        acc = g
        while acc != 1:
            acc = _polymul_mod(acc, g, modulus, degree)
            seen += 1
            if seen > n:  # pragma: no cover - defensive, cannot happen
                break
        if seen == n:
            return g
    raise NonIrreducibleModulus(f"no generator found, modulus {modulus:#b} is not irreducible")


@lru_cache(maxsize=None)
def field_new(degree: int, modulus: int | None = None) -> Field:
    """Construct (and cache) GF(2^degree).

    Args:
        degree: extension degree k, 1 <= k <= 8.
        modulus: optional irreducible polynomial of degree k, as bits.
            Defaults to a built-in irreducible for that degree.

    Raises:
        UnsupportedDegree: k outside 1..8.
        NonIrreducibleModulus: modulus reducible or of the wrong degree.
    """
    if not isinstance(degree, int) or not 1 <= degree <= 8:
        raise UnsupportedDegree(f"degree must be in 1..8, got {degree!r}")
    if modulus is None:
        modulus = DEFAULT_MODULI[degree]
    if not _is_irreducible(modulus, degree):
        raise NonIrreducibleModulus(
            f"{modulus:#b} is not an irreducible polynomial of degree {degree}"
        )
    if degree == 1:
        return Field(1, modulus)
    g = _find_generator(modulus, degree)
    n = (1 << degree) - 1
    exp = [1] * n
    for i in range(1, n):
        exp[i] = _polymul_mod(exp[i - 1], g, modulus, degree)
    log = [0] * (1 << degree)
    for i, v in enumerate(exp):
        log[v] = i
    return Field(degree, modulus, tuple(exp), tuple(log))


GF2 = field_new(1)
