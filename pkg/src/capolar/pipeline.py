"""Complete decoding: inner list decoding, outer guessing, threshold test.

The control flow always ends in a decision.  CRC-passing inner candidates
win outright; otherwise the channel LLRs are converted to outer-code LLRs
and the guessing decoder takes over; if even that finds nothing, the hard
decision of the outer LLRs is emitted with zero confidence.  An optional
threshold on the blockwise soft output turns low-confidence decisions into
flagged erasures, with an optional single retry through the outer decoder
when the inner decision is the one that failed the test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .crc import CrcSpec, crc_syndrome
from .outer import gcd_decode, hard_decision, outer_llr, sogrand_decode
from .polar import PolarCode
from .scl import SclOutput, ca_select, message_window, scl_decode

__all__ = ["PipelineConfig", "DecodeResult", "threshold_test", "cca_scl_decode",
           "resolve_decision", "InnerDecision"]


@dataclass(frozen=True)
class PipelineConfig:
    """Everything one complete-decoder instance needs."""

    code: PolarCode
    spec: CrcSpec
    list_size: int
    epsilon: float | None = None
    retry_on_threshold_fail: bool = False
    outer_max_queries: int = 1 << 16
    outer_list_size: int = 1
    outer_max_weight: int | None = None
    outer_decoder: str = "sogrand"  # pattern guessing | "gcd" codeword guessing

    def __post_init__(self):
        if self.list_size < 1:
            raise ValueError("list_size must be >= 1")
        k = len(self.code.info)
        if self.spec.degree >= k:
            raise ValueError(
                f"{self.spec.degree} parity bits leave no message in {k} info bits"
            )
        if self.epsilon is None:
            if self.retry_on_threshold_fail:
                raise ValueError("retry_on_threshold_fail needs a threshold epsilon")
        elif not 0.0 <= self.epsilon < 1.0:
            raise ValueError("epsilon must lie in [0, 1)")
        if self.outer_max_queries < 1 or self.outer_list_size < 1:
            raise ValueError("outer budget and list size must be >= 1")
        if self.outer_decoder not in ("sogrand", "gcd"):
            raise ValueError(f"unknown outer decoder {self.outer_decoder!r}")

    @property
    def m_msg(self) -> int:
        return len(self.code.info) - self.spec.degree


@dataclass(frozen=True)
class DecodeResult:
    """One decision: the message, its confidence, and where it came from."""

    message: np.ndarray
    so: float
    origin: str  # "inner" | "outer" | "fallback"
    erased: bool
    inner_pass_count: int
    outer_queries: int


@dataclass(frozen=True)
class InnerDecision:
    """CRC-passing inner selection handed to resolve_decision."""

    window: np.ndarray  # K-bit CRC word at the information positions
    so: float
    pass_count: int


def threshold_test(so: float, epsilon: float) -> bool:
    """Accept a decision: strictly above 1 - epsilon."""
    if not 0.0 <= epsilon < 1.0:
        raise ValueError("epsilon must lie in [0, 1)")
    return so > 1.0 - epsilon


def _outer_decision(llr: np.ndarray, cfg: PipelineConfig):
    lo = outer_llr(llr, cfg.code)
    decode = gcd_decode if cfg.outer_decoder == "gcd" else sogrand_decode
    out = decode(lo, cfg.spec, max_queries=cfg.outer_max_queries,
                 list_size=cfg.outer_list_size,
                 max_weight=cfg.outer_max_weight)
    m = cfg.m_msg
    if out.found:
        return out.candidates[0][:m], out.so[0], "outer", out.queries_used
    return hard_decision(lo)[:m], 0.0, "fallback", out.queries_used


def resolve_decision(llr: np.ndarray, inner: InnerDecision | None,
                     cfg: PipelineConfig) -> DecodeResult:
    """Finish a trial whose inner stage already ran.

    ``inner`` carries the CRC-passing selection, or None when no list
    candidate passed.  The batched simulator calls this with the per-trial
    slice of its inner batch; cca_scl_decode with a fresh single decode.
    """
    m = cfg.m_msg
    if inner is not None:
        message, so, origin = inner.window[:m].copy(), inner.so, "inner"
        pass_count, queries = inner.pass_count, 0
    else:
        message, so, origin, queries = _outer_decision(llr, cfg)
        pass_count = 0

    if cfg.epsilon is None:
        return DecodeResult(message, so, origin, False, pass_count, queries)
    if threshold_test(so, cfg.epsilon):
        return DecodeResult(message, so, origin, False, pass_count, queries)
    if cfg.retry_on_threshold_fail and origin == "inner":
        alt_msg, alt_so, alt_origin, queries = _outer_decision(llr, cfg)
        if threshold_test(alt_so, cfg.epsilon):
            return DecodeResult(alt_msg, alt_so, alt_origin, False, pass_count, queries)
        if alt_so > so:
            return DecodeResult(alt_msg, alt_so, alt_origin, True, pass_count, queries)
    return DecodeResult(message, so, origin, True, pass_count, queries)


def _inner_from_scl(out: SclOutput, cfg: PipelineConfig) -> InnerDecision | None:
    sel = ca_select(out, cfg.spec)
    if sel is None:
        return None
    best, so = sel
    windows = np.array([message_window(c, out.code) for c in out.candidates])
    pass_count = int((~crc_syndrome(windows, cfg.spec).any(axis=1)).sum())
    return InnerDecision(message_window(best, out.code), so, pass_count)


def cca_scl_decode(llr: np.ndarray, cfg: PipelineConfig) -> DecodeResult:
    """Decode one word end to end; never raises on valid config."""
    out = scl_decode(llr, cfg.code, cfg.list_size)
    return resolve_decision(np.asarray(llr, dtype=np.float64),
                            _inner_from_scl(out, cfg), cfg)
