"""CRC outer codes over GF(2).

Bits are numpy arrays with the highest-degree coefficient first.  Encoding is
plain polynomial long division with zero initialisation: the parity bits are
the remainder of msg(x) * x^r divided by the generator, appended after the
message.  The syndrome of a word is its polynomial remainder, which equals
H_O @ word for the parity-check matrix of the systematic code.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "CrcSpec",
    "CRC6",
    "CRC11",
    "CRC24C",
    "crc_spec_for",
    "crc_encode",
    "crc_syndrome",
]


@dataclass(frozen=True)
class CrcSpec:
    """Generator polynomial of a CRC code, coefficients highest degree first."""

    poly: tuple[int, ...]

    def __post_init__(self):
        if len(self.poly) < 2:
            raise ValueError("generator polynomial needs degree >= 1")
        if any(c not in (0, 1) for c in self.poly):
            raise ValueError("polynomial coefficients must be 0 or 1")
        if self.poly[0] != 1:
            raise ValueError("leading coefficient of the generator must be 1")

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    def parity_check(self, length: int) -> np.ndarray:
        """H_O for words of ``length`` bits: column j is x^(length-1-j) mod g."""
        return _remainder_table(self.poly, length)


# 3GPP TS 38.212 generators used with polar codes
CRC6 = CrcSpec((1, 1, 0, 0, 0, 0, 1))
CRC11 = CrcSpec((1, 1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1))
CRC24C = CrcSpec((1, 1, 0, 1, 1, 0, 0, 1, 0, 1, 0, 1, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 1, 1))

_DEFAULT_SPECS = {6: CRC6, 11: CRC11, 24: CRC24C}


def crc_spec_for(parity_bits: int) -> CrcSpec:
    """Default generator for a given parity length r = K - M."""
    try:
        return _DEFAULT_SPECS[parity_bits]
    except KeyError:
        known = sorted(_DEFAULT_SPECS)
        raise ValueError(
            f"no default CRC with r={parity_bits} parity bits (known: {known}); "
            "pass an explicit polynomial"
        ) from None


@lru_cache(maxsize=None)
def _remainder_table(poly: tuple[int, ...], length: int) -> np.ndarray:
    """Remainders of x^(length-1), ..., x^1, x^0 modulo poly, as columns."""
    r = len(poly) - 1
    low = np.array(poly[1:], dtype=np.uint8)  # poly minus its leading term
    table = np.zeros((r, length), dtype=np.uint8)
    rem = np.zeros(r, dtype=np.uint8)
    rem[-1] = 1  # x^0
    table[:, length - 1] = rem
    for j in range(length - 2, -1, -1):
        carry = rem[0]
        rem = np.roll(rem, -1)
        rem[-1] = 0
        if carry:
            rem ^= low
        table[:, j] = rem
    table.setflags(write=False)
    return table


def crc_encode(msg: np.ndarray, spec: CrcSpec) -> np.ndarray:
    """Append spec.degree parity bits to ``msg`` (vectorised over leading axes)."""
    msg = np.asarray(msg, dtype=np.uint8)
    if msg.shape[-1] == 0:
        raise ValueError("cannot CRC-encode an empty message")
    r = spec.degree
    # parity = remainder of msg(x) * x^r, via the columns for x^(r+j)
    table = _remainder_table(spec.poly, msg.shape[-1] + r)[:, : msg.shape[-1]]
    parity = (msg @ table.T) % 2
    return np.concatenate([msg, parity.astype(np.uint8)], axis=-1)


def crc_syndrome(word: np.ndarray, spec: CrcSpec) -> np.ndarray:
    """Polynomial remainder of ``word`` (vectorised over leading axes)."""
    word = np.asarray(word, dtype=np.uint8)
    if word.shape[-1] < spec.degree:
        raise ValueError(
            f"word of {word.shape[-1]} bits is shorter than the {spec.degree}-bit parity"
        )
    table = _remainder_table(spec.poly, word.shape[-1])
    return ((word @ table.T) % 2).astype(np.uint8)
