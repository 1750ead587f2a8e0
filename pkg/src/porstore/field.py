"""Prime-field arithmetic and Lagrange interpolation.

Shared by the erasure code (p = 2^16 + 1) and the secret-sharing scheme
(p = 2^61 - 1).  Elements are plain ints in [0, p).
"""

from __future__ import annotations

from hashlib import sha256

from .encoding import le64
from .errors import InvalidParams


def inv_mod(x: int, p: int) -> int:
    """Multiplicative inverse of x mod prime p."""
    if x % p == 0:
        raise ZeroDivisionError("no inverse for 0")
    return pow(x, p - 2, p)


def poly_eval(coeffs: list[int], x: int, p: int) -> int:
    """Evaluate a polynomial given low-order-first coefficients."""
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def lagrange_at(xs: list[int], target: int, p: int) -> list[int]:
    """Coefficients c_j with f(target) == sum c_j * f(xs[j]) for deg < len(xs).

    xs must be distinct mod p.
    """
    coeffs = []
    for j, xj in enumerate(xs):
        num = 1
        den = 1
        for m, xm in enumerate(xs):
            if m == j:
                continue
            num = num * (target - xm) % p
            den = den * (xj - xm) % p
        coeffs.append(num * inv_mod(den, p) % p)
    return coeffs


class FieldSampler:
    """Deterministic uniform field elements from a hashed counter stream.

    Draws 64-bit words from sha256(seed || domain_le64 || counter_le64) and
    rejection-samples to remove modulo bias.  Requires p < 2^63 so the
    acceptance region is non-empty.
    """

    def __init__(self, seed: bytes, domain: int, p: int):
        if p >= 1 << 63:
            raise InvalidParams("field modulus too large for 64-bit sampling")
        self._seed = seed
        self._domain = domain
        self._p = p
        self._counter = 0
        self._words: list[int] = []
        self._limit = ((1 << 64) // p) * p

    def _next_word(self) -> int:
        if not self._words:
            block = sha256(self._seed + le64(self._domain) + le64(self._counter)).digest()
            self._counter += 1
            self._words = [int.from_bytes(block[i : i + 8], "little") for i in (24, 16, 8, 0)]
        return self._words.pop()

    def next_element(self) -> int:
        while True:
            w = self._next_word()
            if w < self._limit:
                return w % self._p
