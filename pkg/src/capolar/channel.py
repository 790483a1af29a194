"""BPSK over AWGN with counter-based per-trial noise.

LLRs follow the convention L = log f(y|x=1) - log f(y|x=0) throughout the
package: positive values favour bit 1.  With the 0 -> +1, 1 -> -1 mapping
this gives L = -2y / sigma^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "LLR_LIMIT",
    "ChannelParams",
    "modulate",
    "transmit",
    "llr_from_channel",
    "saturate_llr",
    "noise_rng",
    "message_rng",
]

LLR_LIMIT = 40.0

_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class ChannelParams:
    """AWGN operating point; sigma is derived from Eb/N0 and the rate M/N."""

    ebno_db: float
    rate: float

    def __post_init__(self):
        if not 0.0 < self.rate <= 1.0:
            raise ValueError(f"rate {self.rate} must lie in (0, 1]")

    @property
    def sigma(self) -> float:
        return float(np.sqrt(1.0 / (2.0 * self.rate * 10.0 ** (self.ebno_db / 10.0))))


def modulate(x: np.ndarray) -> np.ndarray:
    """BPSK: bit 0 -> +1.0, bit 1 -> -1.0."""
    return 1.0 - 2.0 * np.asarray(x, dtype=np.float64)


def noise_rng(seed: int, trial: int = 0) -> np.random.Generator:
    """Philox stream for the noise of one trial; a pure function of its key."""
    return np.random.Generator(np.random.Philox(key=[seed & _U64, trial & _U64]))


def message_rng(seed: int, trial: int = 0) -> np.random.Generator:
    """Philox stream for message bits, disjoint from the noise stream."""
    bg = np.random.Philox(key=[seed & _U64, trial & _U64], counter=[0, 0, 0, 1])
    return np.random.Generator(bg)


def transmit(s: np.ndarray, params: ChannelParams, seed: int, trial: int = 0) -> np.ndarray:
    """y = s + sigma * z with z drawn from the (seed, trial) noise stream."""
    s = np.asarray(s, dtype=np.float64)
    z = noise_rng(seed, trial).standard_normal(s.shape)
    return s + params.sigma * z


def llr_from_channel(y: np.ndarray, params: ChannelParams) -> np.ndarray:
    """Exact channel LLRs -2y/sigma^2 (unsaturated)."""
    return -2.0 * np.asarray(y, dtype=np.float64) / params.sigma**2


def saturate_llr(llr: np.ndarray, limit: float = LLR_LIMIT) -> np.ndarray:
    """Clip LLR magnitudes before decoding."""
    return np.clip(llr, -limit, limit)
