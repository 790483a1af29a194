"""Brute-force references for the test suite.

Everything here recomputes results from first principles: generator matrices
come from Kronecker powers instead of the butterfly, likelihoods are summed
or multiplied per codeword, CRC division is schoolbook bitwise long
division.  Nothing is shared with the production modules, so agreement is
evidence rather than tautology.  Instance sizes are capped; callers asking
for more get a refusal, not a slow answer.
"""

from __future__ import annotations

import itertools

import numpy as np

from .polar import PolarCode

__all__ = ["ml_decode", "exact_so", "xor_statistics", "crc_longdivision"]

_F = np.array([[1, 0], [1, 1]], dtype=np.uint8)


def _generator(stages: int) -> np.ndarray:
    g = np.array([[1]], dtype=np.uint8)
    for _ in range(stages):
        g = np.kron(g, _F)
    return g


def ml_decode(llr: np.ndarray, codebook: np.ndarray, method: str = "llr"):
    """Most likely codeword in ``codebook`` and its posterior over it.

    ``method`` selects one of two independent likelihood formulations:
    "llr" scores each codeword by the sum of the LLRs it asserts, "prob"
    by the product of per-bit posteriors.  They must agree; tests run both.
    """
    llr = np.asarray(llr, dtype=np.float64)
    codebook = np.asarray(codebook, dtype=np.uint8)
    if codebook.ndim != 2 or len(codebook) == 0:
        raise ValueError("codebook must be a non-empty (m, n) bit array")
    if len(codebook) > 1 << 20:
        raise ValueError("codebook larger than 2^20; refusing")
    if method == "llr":
        score = codebook @ llr
        scale = score - score.max()
        weights = np.exp(scale)
    elif method == "prob":
        p1 = np.where(llr >= 0, 1.0 / (1.0 + np.exp(-llr)),
                      np.exp(llr) / (1.0 + np.exp(llr)))
        weights = np.prod(np.where(codebook == 1, p1, 1.0 - p1), axis=1)
        score = weights
    else:
        raise ValueError(f"unknown method {method!r}")
    best = int(np.argmax(score))
    total = weights.sum()
    posterior = float(weights[best] / total) if total > 0 else 0.0
    return codebook[best].copy(), posterior


def exact_so(u_hat: np.ndarray, llr: np.ndarray, code: PolarCode) -> float:
    """Posterior of the path ``u_hat`` among all paths with zero frozen bits.

    Enumerates every information assignment, maps it through the Kronecker
    generator, and normalises the per-bit posterior product.
    """
    u_hat = np.asarray(u_hat, dtype=np.uint8)
    llr = np.asarray(llr, dtype=np.float64)
    k = len(code.info)
    if k > 20:
        raise ValueError(f"2^{k} paths exceed the enumeration cap of 2^20; refusing")
    if u_hat.shape != (code.n_code,) or llr.shape != (code.n_code,):
        raise ValueError("u_hat and llr must both have n_code entries")
    if u_hat[code.frozen].any():
        raise ValueError("u_hat sets a frozen bit; not a valid path")

    g = _generator(code.stages)
    msgs = (np.arange(1 << k)[:, None] >> np.arange(k)[None, ::-1]) & 1
    u = np.zeros((1 << k, code.n_code), dtype=np.uint8)
    u[:, code.info] = msgs.astype(np.uint8)
    x = (u @ g) % 2
    # log Q(u) = sum_i log P(x_i | y_i), with log P(1|y) = -log(1 + e^-L)
    log_p1 = -np.logaddexp(0.0, -llr)
    log_p0 = -np.logaddexp(0.0, llr)
    log_q = x @ log_p1 + (1 - x) @ log_p0
    x_hat = (u_hat @ g) % 2
    log_target = x_hat @ log_p1 + (1 - x_hat) @ log_p0
    peak = log_q.max()
    return float(np.exp(log_target - peak) / np.exp(log_q - peak).sum())


def xor_statistics(indices, b: np.ndarray) -> float:
    """P(XOR of the indexed independent bits = 1) by full enumeration."""
    idx = sorted(int(i) for i in indices)
    if len(idx) > 24:
        raise ValueError(f"{len(idx)} indices exceed the enumeration cap of 24; refusing")
    if len(idx) == 0:
        return 0.0
    b = np.asarray(b, dtype=np.float64)
    total = 0.0
    for bits in itertools.product((0, 1), repeat=len(idx)):
        if sum(bits) % 2 == 1:
            pr = 1.0
            for pos, bit in zip(idx, bits):
                pr *= b[pos] if bit else 1.0 - b[pos]
            total += pr
    return total


def crc_longdivision(word, poly) -> np.ndarray:
    """Remainder of ``word`` divided by ``poly``, schoolbook bitwise.

    Both are coefficient sequences, highest power first.  The remainder is
    returned at full parity width (degree of poly), left padded with zeros.
    """
    poly = [int(c) & 1 for c in poly]
    if len(poly) < 2 or poly[0] != 1:
        raise ValueError("poly must have degree >= 1 and a leading 1")
    work = [int(c) & 1 for c in word]
    r = len(poly) - 1
    for i in range(len(work) - r):
        if work[i]:
            for j, c in enumerate(poly):
                work[i + j] ^= c
    padded = [0] * r + work
    return np.array(padded[len(padded) - r:], dtype=np.uint8)
