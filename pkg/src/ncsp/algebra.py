"""Finite alphabets and their arithmetic.

Three kinds of alphabet are supported:

* prime fields GF(p),
* binary extension fields GF(2^m) for 1 <= m <= 8, and
* the ring of 2-bit words with Z4 addition, bitwise XOR and bit reversal.

Symbols are canonically encoded as integers ``0 .. q-1``.  For GF(2^m) the
integer is the coefficient vector of the polynomial representation; the
reduction polynomials are fixed per ``m`` (see ``REDUCTION_POLYS``) so that
multiplication results are bit-exact everywhere.  2-bit words use the
msb-first encoding ``v = 2*b1 + b0``; bit reversal swaps ``b1`` and ``b0``.

All operations accept plain ints or numpy integer arrays and are pure, so
Alphabet values are safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AlphabetError, UnsupportedOperation

# Fixed reduction polynomials for GF(2^m), coefficient bitmask with the
# leading term included (m=8 is the AES polynomial x^8+x^4+x^3+x+1).
REDUCTION_POLYS = {
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011011,
}

MAX_EXTENSION_M = 8

PRIME = "prime-field"
BINARY_EXT = "binary-extension-field"
Z4_WORDS = "z4-words"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Alphabet:
    """A finite symbol set together with its arithmetic."""

    kind: str
    q: int
    m: int = 0  # extension degree, binary extension fields only

    # lazy multiplication table for extension fields; not part of identity
    _mul_table: dict = field(default_factory=dict, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.kind == PRIME:
            if not _is_prime(self.q):
                raise AlphabetError(f"{self.q} is not prime")
        elif self.kind == BINARY_EXT:
            if self.q != 1 << self.m or not (1 <= self.m <= MAX_EXTENSION_M):
                raise AlphabetError(f"bad extension field parameters q={self.q} m={self.m}")
        elif self.kind == Z4_WORDS:
            if self.q != 4:
                raise AlphabetError("2-bit word alphabet has exactly 4 symbols")
        else:
            raise AlphabetError(f"unknown alphabet kind {self.kind!r}")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def prime(p: int) -> "Alphabet":
        return Alphabet(PRIME, p)

    @staticmethod
    def gf2m(m: int) -> "Alphabet":
        if not 1 <= m <= MAX_EXTENSION_M:
            raise AlphabetError(f"extension degree m={m} outside 1..{MAX_EXTENSION_M}")
        if m == 1:
            return Alphabet.prime(2)
        return Alphabet(BINARY_EXT, 1 << m, m)

    @staticmethod
    def gf(q: int) -> "Alphabet":
        """GF(q) for q prime or a power of two up to 256."""
        if q >= 4 and q & (q - 1) == 0:
            return Alphabet.gf2m(q.bit_length() - 1)
        return Alphabet.prime(q)

    @staticmethod
    def z4() -> "Alphabet":
        return Alphabet(Z4_WORDS, 4)

    # -- properties --------------------------------------------------------

    @property
    def is_field(self) -> bool:
        return self.kind in (PRIME, BINARY_EXT)

    @property
    def char(self) -> int:
        """Additive order of 1 (used for coefficient accumulation)."""
        if self.kind == PRIME:
            return self.q
        if self.kind == BINARY_EXT:
            return 2
        return 4

    def symbols(self) -> list[int]:
        """All symbols in ascending canonical order."""
        return list(range(self.q))

    def check(self, *xs):
        for x in xs:
            if np.any(np.asarray(x) < 0) or np.any(np.asarray(x) >= self.q):
                raise AlphabetError(f"symbol {x} out of range 0..{self.q - 1}")

    # -- arithmetic --------------------------------------------------------

    def add(self, x, y):
        """Alphabet addition (mod p / XOR / mod 4)."""
        self.check(x, y)
        if self.kind == BINARY_EXT:
            return np.bitwise_xor(x, y) if isinstance(x, np.ndarray) or isinstance(y, np.ndarray) else x ^ y
        return (x + y) % self.q

    def mul(self, x, y):
        """Field multiplication; rejected on the 2-bit word ring."""
        if not self.is_field:
            raise UnsupportedOperation("'*' is not defined on 2-bit words (only +, ^, t)")
        self.check(x, y)
        if self.kind == PRIME:
            return (x * y) % self.q
        table = self._gf2m_table()
        return table[x, y] if isinstance(x, np.ndarray) or isinstance(y, np.ndarray) else int(table[x, y])

    def xor(self, x, y):
        """Bitwise XOR of two 2-bit words."""
        if self.kind != Z4_WORDS:
            raise UnsupportedOperation("'^' is only defined on 2-bit words")
        self.check(x, y)
        return np.bitwise_xor(x, y) if isinstance(x, np.ndarray) or isinstance(y, np.ndarray) else x ^ y

    def bit_reverse(self, x):
        """t(b1 b0) = b0 b1 on the msb-first 2-bit encoding."""
        if self.kind != Z4_WORDS:
            raise UnsupportedOperation("t(.) is only defined on 2-bit words")
        self.check(x)
        if isinstance(x, np.ndarray):
            return ((x & 1) << 1) | (x >> 1)
        return ((x & 1) << 1) | (x >> 1)

    def neg(self, x):
        """Additive inverse (fields only)."""
        if not self.is_field:
            raise UnsupportedOperation("negation is only used on fields here")
        self.check(x)
        if self.kind == BINARY_EXT:
            return x  # characteristic 2
        return (self.q - x) % self.q

    def inv(self, x: int) -> int:
        """Multiplicative inverse of a nonzero field element."""
        if not self.is_field:
            raise UnsupportedOperation("inversion requires a field")
        self.check(x)
        if x == 0:
            raise AlphabetError("0 has no multiplicative inverse")
        if self.kind == PRIME:
            return pow(x, self.q - 2, self.q)
        acc, base, e = 1, x, self.q - 2
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def scalar(self, c: int, x):
        """c-fold scalar action used by linear-map evaluation.

        Field multiplication on fields; repeated ring addition (= c*x mod 4)
        on 2-bit words, where coefficients only ever arise from folding
        repeated '+' terms.
        """
        self.check(c)
        if self.is_field:
            return self.mul(c, x)
        self.check(x)
        return (c * x) % self.q

    def _gf2m_table(self) -> np.ndarray:
        tab = self._mul_table.get("t")
        if tab is None:
            poly = REDUCTION_POLYS[self.m]
            tab = np.zeros((self.q, self.q), dtype=np.int64)
            for a in range(self.q):
                for b in range(self.q):
                    tab[a, b] = _clmul_mod(a, b, poly, self.m)
            self._mul_table["t"] = tab
        return tab

    # -- text form ---------------------------------------------------------

    def spec_string(self) -> str:
        return "z4" if self.kind == Z4_WORDS else f"gf {self.q}"

    def __str__(self) -> str:
        return self.spec_string()


def _clmul_mod(a: int, b: int, poly: int, m: int) -> int:
    """Carry-less multiply of a and b reduced modulo poly (degree m)."""
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        b >>= 1
        a <<= 1
    while acc.bit_length() > m:
        acc ^= poly << (acc.bit_length() - 1 - m)
    return acc


def parse_alphabet(text: str) -> Alphabet:
    """Parse an alphabet spec string: ``gf <q>`` or ``z4``."""
    parts = text.strip().split()
    if parts == ["z4"]:
        return Alphabet.z4()
    if len(parts) == 2 and parts[0] == "gf":
        try:
            q = int(parts[1])
        except ValueError:
            raise AlphabetError(f"bad alphabet spec {text!r}") from None
        if q < 2 or q > 256:
            raise AlphabetError(f"alphabet size {q} outside 2..256")
        return Alphabet.gf(q)
    raise AlphabetError(f"bad alphabet spec {text!r} (expected 'gf <q>' or 'z4')")
