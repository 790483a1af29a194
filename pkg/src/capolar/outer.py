"""Outer decoding of the CRC code from channel soft information.

For non-systematic codes the message bits are parities of channel bits:
bit i of the CRC word equals the XOR of x over the support X_i of column
pi(i) of F^(x)n.  Treating the channel bits as independent given y, the
flip probability of such a parity is B = 1/2 - 1/2 prod (1 - 2 B_j), and a
full vector of them comes out of one XOR butterfly because every combine in
the transform joins disjoint supports.  Systematic codes skip all of this:
the CRC word is observed directly at the information positions.

The outer decoder is a soft-input GRAND: guess error patterns around the
hard decision in decreasing plausibility (logistic-weight order over
reliability ranks), keep the ones whose syndrome vanishes, and report a soft
output whose denominator charges the unqueried patterns with the expected
mass of codewords hiding among them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .crc import CrcSpec
from .polar import PolarCode

__all__ = [
    "bit_prob",
    "hard_decision",
    "convert_llr",
    "outer_llr",
    "pair_covariance",
    "orbgrand_schedule",
    "sogrand_decode",
    "gcd_decode",
    "OuterDecodeOutput",
]


def hard_decision(llr):
    """Bitwise decision for the convention where positive LLR favours 1."""
    return (np.asarray(llr) > 0).astype(np.uint8)


def bit_prob(llr):
    """P(bit = 1) from an LLR in the package convention (logistic)."""
    llr = np.asarray(llr, dtype=np.float64)
    out = np.empty_like(llr)
    pos = llr >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-llr[pos]))
    ex = np.exp(llr[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _soft_xor_butterfly(vals, combine):
    """Run the polar butterfly with a custom combine on the last axis."""
    n = vals.shape[-1]
    out = vals.copy()
    half = 1
    while half < n:
        blocks = out.reshape(out.shape[:-1] + (n // (2 * half), 2, half))
        blocks[..., 0, :] = combine(blocks[..., 0, :], blocks[..., 1, :])
        half *= 2
    return out


def convert_llr(b: np.ndarray, code: PolarCode) -> np.ndarray:
    """Flip probabilities of the K CRC-word bits from channel flip probs.

    Evaluates the per-column products through the XOR butterfly in the
    1 - 2B domain, where the soft XOR is a plain multiplication.
    """
    b = np.asarray(b, dtype=np.float64)
    if b.shape[-1] != code.n_code:
        raise ValueError(f"expected {code.n_code} probabilities, got {b.shape[-1]}")
    if np.any(b < 0.0) or np.any(b > 1.0):
        raise ValueError("flip probabilities must lie in [0, 1]")
    d = _soft_xor_butterfly(1.0 - 2.0 * b, np.multiply)
    return (0.5 - 0.5 * d)[..., code.info]


def _llr_soft_xor(a, b):
    # XOR of independent bits in the LLR domain (package convention):
    # magnitudes contract onto min(|a|,|b|), computed in stable form
    return -(
        np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
        + np.log1p(np.exp(-np.abs(a + b)))
        - np.log1p(np.exp(-np.abs(a - b)))
    )


def outer_llr(llr_in: np.ndarray, code: PolarCode) -> np.ndarray:
    """LLRs of the K CRC-word bits seen by the outer decoder.

    Systematic: restriction of the channel LLRs to the information positions.
    Non-systematic: the convert_llr butterfly carried out directly in the LLR
    domain, which stays exact for saturated inputs where probabilities would
    round to 0 or 1.
    """
    llr_in = np.asarray(llr_in, dtype=np.float64)
    if llr_in.shape[-1] != code.n_code:
        raise ValueError(f"expected {code.n_code} LLRs, got {llr_in.shape[-1]}")
    if code.systematic:
        return llr_in[..., code.info]
    return _soft_xor_butterfly(llr_in, _llr_soft_xor)[..., code.info]


def _column_support(code: PolarCode, msg_index: int) -> np.ndarray:
    """Support of the F^(x)n column feeding CRC-word bit msg_index."""
    col = int(code.info[msg_index])
    s = np.arange(code.n_code)
    return s[(s & col) == col]


def _parity_flip_prob(b: np.ndarray, support: np.ndarray) -> float:
    if len(support) == 0:
        return 0.0
    return 0.5 - 0.5 * float(np.prod(1.0 - 2.0 * b[support]))


def pair_covariance(i: int, j: int, b: np.ndarray, code: PolarCode) -> float:
    """Covariance of CRC-word bits i and j under independent channel flips.

    Bits sharing channel positions are correlated; with S = X_i ^ X_j the
    closed form is p_S (1 - p_S) (1 - 2 p_{i minus j}) (1 - 2 p_{j minus i}).
    Disjoint supports give zero.
    """
    b = np.asarray(b, dtype=np.float64)
    xi, xj = _column_support(code, i), _column_support(code, j)
    shared = np.intersect1d(xi, xj)
    if len(shared) == 0:
        return 0.0
    p_shared = _parity_flip_prob(b, shared)
    p_i_only = _parity_flip_prob(b, np.setdiff1d(xi, xj))
    p_j_only = _parity_flip_prob(b, np.setdiff1d(xj, xi))
    return p_shared * (1.0 - p_shared) * (1.0 - 2.0 * p_i_only) * (1.0 - 2.0 * p_j_only)


def _distinct_partitions(total, max_part):
    """Partitions of ``total`` into distinct parts <= max_part, as ascending
    tuples in lexicographic order."""
    def rec(remaining, smallest):
        if remaining == 0:
            yield ()
            return
        for part in range(smallest, min(remaining, max_part) + 1):
            # the parts above ``part`` must sum to remaining - part
            for rest in rec(remaining - part, part + 1):
                yield (part,) + rest
    yield from rec(total, 1)


def orbgrand_schedule(order: np.ndarray, max_weight: int | None = None):
    """Yield error patterns in non-decreasing logistic weight.

    ``order`` lists bit positions from least to most reliable; the rank of a
    position is its 1-based index in this list, and a pattern's logistic
    weight is the sum of the ranks it flips.  The all-zero pattern comes
    first; ties inside a weight class break lexicographically on the flipped
    rank sets.  Patterns are uint8 masks over the original positions.
    """
    order = np.asarray(order, dtype=np.int64)
    k = len(order)
    if sorted(order.tolist()) != list(range(k)):
        raise ValueError("order must be a permutation of 0..K-1")
    if max_weight is None:
        max_weight = k * (k + 1) // 2
    for weight in range(max_weight + 1):
        for ranks in _distinct_partitions(weight, k):
            mask = np.zeros(k, dtype=np.uint8)
            mask[order[np.array(ranks, dtype=np.int64) - 1]] = 1
            yield mask


# rank-set schedules only depend on (K, weight); cache them as flip matrices
_rank_cache: dict[int, list[np.ndarray]] = {}


def _weight_class(k: int, weight: int) -> np.ndarray | None:
    """Boolean flip matrix over ranks for one weight class, None past the end."""
    if weight > k * (k + 1) // 2:
        return None
    per_weight = _rank_cache.setdefault(k, [])
    while len(per_weight) <= weight:
        sets = list(_distinct_partitions(len(per_weight), k))
        m = np.zeros((len(sets), k), dtype=bool)
        for row, ranks in enumerate(sets):
            m[row, np.array(ranks, dtype=np.int64) - 1] = True
        per_weight.append(m)
    return per_weight[weight]


@dataclass(frozen=True)
class OuterDecodeOutput:
    """Codebook candidates found by guessing, best first."""

    candidates: tuple[np.ndarray, ...]
    so: tuple[float, ...]
    queries_used: int
    found: bool


def sogrand_decode(llr: np.ndarray, spec: CrcSpec,
                   max_queries: int = 1 << 16, list_size: int = 1,
                   max_weight: int | None = None) -> OuterDecodeOutput:
    """Guess error patterns around the hard decision of ``llr``.

    Stops after ``list_size`` syndrome-zero candidates or ``max_queries``
    pattern queries.  Each candidate's soft output is phi(c) / (sum of phi
    over the list + R), where phi is the pattern likelihood and R estimates
    the codeword mass left in the unqueried patterns: the leftover pattern
    mass times the fraction of unqueried patterns expected to be codewords.
    """
    llr = np.asarray(llr, dtype=np.float64)
    k = llr.shape[-1]
    if llr.ndim != 1:
        raise ValueError("sogrand_decode takes a single LLR vector")
    if k <= spec.degree:
        raise ValueError(f"{k} bits cannot carry {spec.degree} parity bits")
    if max_queries < 1 or list_size < 1:
        raise ValueError("max_queries and list_size must be >= 1")

    hard = hard_decision(llr)
    mag = np.abs(llr)
    order = np.argsort(mag, kind="stable")  # least reliable first
    log_keep = -np.logaddexp(0.0, -mag).sum()

    # syndrome columns packed into integers: the syndrome of a flip pattern
    # is the XOR of the columns it touches, and a hit is a pattern whose
    # syndrome cancels the hard decision's
    tab = spec.parity_check(k)
    col_bits = (tab.T.astype(np.uint64) << np.arange(spec.degree, dtype=np.uint64)).sum(axis=1)
    syn_hard = np.bitwise_xor.reduce(col_bits[hard.astype(bool)]) if hard.any() else np.uint64(0)
    ranked_cols = col_bits[order]
    ranked_mag = mag[order]

    budget = max_queries
    top_weight = max_weight if max_weight is not None else k * (k + 1) // 2

    def to_pattern(rank_mask: np.ndarray) -> np.ndarray:
        mask = np.zeros(k, dtype=np.uint8)
        mask[order[rank_mask]] = 1
        return hard ^ mask

    cands: list[np.ndarray] = []
    log_phi: list[float] = []
    queried_mass = 0.0
    queries = 0
    weight = 0
    while queries < budget and len(cands) < list_size and weight <= top_weight:
        masks = _weight_class(k, weight)
        if masks is None:
            break
        take = min(len(masks), budget - queries)
        masks = masks[:take]
        syn = np.bitwise_xor.reduce(np.where(masks, ranked_cols, np.uint64(0)), axis=1)
        lp = log_keep - masks @ ranked_mag
        hits = np.flatnonzero(syn == syn_hard)
        needed = list_size - len(cands)
        if len(hits) >= needed:
            last = hits[needed - 1]
            queries += last + 1
            queried_mass += float(np.exp(lp[: last + 1]).sum())
            for h in hits[:needed]:
                cands.append(to_pattern(masks[h]))
                log_phi.append(float(lp[h]))
            break
        queries += take
        queried_mass += float(np.exp(lp).sum())
        for h in hits:
            cands.append(to_pattern(masks[h]))
            log_phi.append(float(lp[h]))
        weight += 1

    n_codewords = 2.0 ** (k - spec.degree)
    n_patterns = 2.0 ** k
    remaining = max(0.0, 1.0 - queried_mass)
    if n_patterns > queries:
        r_term = remaining * (n_codewords - len(cands)) / (n_patterns - queries)
        r_term = max(0.0, r_term)
    else:
        r_term = 0.0
    phi = np.exp(np.array(log_phi)) if cands else np.array([])
    denom = phi.sum() + r_term
    so = phi / denom if denom > 0.0 and len(cands) else np.zeros(len(cands))
    rank = np.argsort(-phi, kind="stable") if len(cands) else np.array([], dtype=int)
    return OuterDecodeOutput(
        candidates=tuple(cands[i] for i in rank),
        so=tuple(float(so[i]) for i in rank),
        queries_used=queries,
        found=bool(cands),
    )


def gcd_decode(llr: np.ndarray, spec: CrcSpec,
               max_queries: int = 1 << 16, list_size: int = 1,
               max_weight: int | None = None) -> OuterDecodeOutput:
    """Guess only the reliable bits; solve the unreliable ones from parity.

    The ``degree`` least reliable positions whose parity-check columns are
    linearly independent form the solved part; the remaining K - degree
    positions form the guessed part.  Each query flips an ORBGRAND pattern
    over the guessed part and completes the word through the parity
    equations, so every query lands on a codeword.  Candidates are the
    ``list_size`` highest-likelihood completions; their soft output divides
    phi(c) by the phi mass of all queried codewords plus the guessed-part
    pattern mass left unqueried, which never exceeds the mass of the missed
    codewords, so the quoted posteriors are conservative.
    """
    llr = np.asarray(llr, dtype=np.float64)
    k = llr.shape[-1]
    if llr.ndim != 1:
        raise ValueError("gcd_decode takes a single LLR vector")
    if k <= spec.degree:
        raise ValueError(f"{k} bits cannot carry {spec.degree} parity bits")
    if max_queries < 1 or list_size < 1:
        raise ValueError("max_queries and list_size must be >= 1")

    hard = hard_decision(llr)
    mag = np.abs(llr)
    order = np.argsort(mag, kind="stable")  # least reliable first
    r = spec.degree

    tab = spec.parity_check(k)
    col_bits = (tab.T.astype(np.uint64) << np.arange(r, dtype=np.uint64)).sum(axis=1)
    syn_hard = np.bitwise_xor.reduce(col_bits[hard.astype(bool)]) if hard.any() else np.uint64(0)

    # greedy basis over the reliability order: the first ``degree`` positions
    # with independent columns become the solved part P, everything else the
    # guessed part S; each basis row remembers which P columns built it so a
    # syndrome can be traced back to the P flips that cancel it
    solved: list[int] = []
    guessed: list[int] = []
    basis: list[tuple[int, int, int]] = []  # (pivot bit, reduced column, P combination)
    for pos in order.tolist():
        if len(solved) < r:
            vec = int(col_bits[pos])
            comb = 1 << len(solved)
            for pivot, b_vec, b_comb in basis:
                if (vec >> pivot) & 1:
                    vec ^= b_vec
                    comb ^= b_comb
            if vec:
                basis.append((vec.bit_length() - 1, vec, comb))
                solved.append(pos)
                continue
        guessed.append(pos)
    solved_idx = np.array(solved, dtype=np.int64)
    guessed_idx = np.array(guessed, dtype=np.int64)
    sm = k - r

    mag_s = mag[guessed_idx]
    mag_p = mag[solved_idx]
    cols_s = col_bits[guessed_idx]
    log_keep = -np.logaddexp(0.0, -mag).sum()
    log_keep_s = -np.logaddexp(0.0, -mag_s).sum()

    # the P flips are a linear image of the syndrome; tabulate it bytewise so
    # a batch solve is three lookups instead of a walk over the basis
    unit = np.zeros(r, dtype=np.uint64)
    for i in range(r):
        t, e = 1 << i, 0
        for pivot, b_vec, b_comb in basis:
            if (t >> pivot) & 1:
                t ^= b_vec
                e ^= b_comb
        unit[i] = e
    n_bytes = (r + 7) // 8
    solve_tab = np.zeros((n_bytes, 256), dtype=np.uint64)
    cost_tab = np.zeros((n_bytes, 256), dtype=np.float64)
    byte_bits = (np.arange(256)[:, None] >> np.arange(8)) & 1
    for b in range(n_bytes):
        chunk = unit[8 * b:8 * b + 8]
        weights = mag_p[8 * b:8 * b + 8]
        bits = byte_bits[:, :len(chunk)]
        solve_tab[b] = np.bitwise_xor.reduce(
            np.where(bits.astype(bool), chunk, np.uint64(0)), axis=1)
        cost_tab[b] = bits @ weights

    budget = max_queries
    top_weight = max_weight if max_weight is not None else sm * (sm + 1) // 2

    best: list[tuple[float, int, int, np.ndarray, int]] = []
    phi_sum = 0.0
    psi_sum = 0.0
    queries = 0
    weight = 0
    while queries < budget and weight <= top_weight:
        masks = _weight_class(sm, weight)
        if masks is None:
            break
        take = min(len(masks), budget - queries)
        masks = masks[:take]
        target = syn_hard ^ np.bitwise_xor.reduce(
            np.where(masks, cols_s, np.uint64(0)), axis=1)
        flips_p = np.zeros(take, dtype=np.uint64)
        cost_p = np.zeros(take, dtype=np.float64)
        for b in range(n_bytes):
            flips_p ^= solve_tab[b][(target >> np.uint64(8 * b)) & np.uint64(255)]
        for b in range(n_bytes):
            cost_p += cost_tab[b][(flips_p >> np.uint64(8 * b)) & np.uint64(255)]
        cost_s = masks @ mag_s
        lp = log_keep - cost_s - cost_p
        phi_sum += float(np.exp(lp).sum())
        psi_sum += float(np.exp(log_keep_s - cost_s).sum())
        for row in np.argsort(-lp, kind="stable")[:list_size]:
            best.append((float(lp[row]), weight, int(row),
                         masks[row], int(flips_p[row])))
        queries += take
        weight += 1

    best.sort(key=lambda item: (-item[0], item[1], item[2]))
    best = best[:list_size]

    cands = []
    for _, _, _, s_mask, p_comb in best:
        word = hard.copy()
        word[guessed_idx[s_mask]] ^= 1
        for j in range(r):
            if (p_comb >> j) & 1:
                word[solved_idx[j]] ^= 1
        cands.append(word)
    log_phi = np.array([item[0] for item in best])
    r_term = max(0.0, 1.0 - psi_sum)
    denom = phi_sum + r_term
    so = np.exp(log_phi) / denom if denom > 0.0 and cands else np.zeros(len(cands))
    return OuterDecodeOutput(
        candidates=tuple(cands),
        so=tuple(float(v) for v in so),
        queries_used=queries,
        found=bool(cands),
    )
