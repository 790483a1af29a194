import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capolar.crc import CRC6, CRC11, crc_encode
from capolar.polar import (
    CodeDims,
    PolarCode,
    ca_encode,
    construct_polar,
    encode_nonsystematic,
    encode_systematic,
    polar_transform,
)

# (N, K) pool for randomized encoding checks; covers both CRC lengths
DIM_POOL = [(8, 7), (16, 9), (32, 20), (64, 43), (64, 31), (128, 114)]


def unpack_bits(word, n):
    return np.array([(word >> i) & 1 for i in range(n)], dtype=np.uint8)


def test_transform_matches_kron_generator():
    # independent generator: F^(x)n by explicit kron power
    f = np.array([[1, 0], [1, 1]], dtype=np.uint8)
    for stages in range(1, 6):
        n = 1 << stages
        g = np.array([[1]], dtype=np.uint8)
        for _ in range(stages):
            g = np.kron(g, f)
        words = np.random.default_rng(stages).integers(0, 2, (50, n)).astype(np.uint8)
        assert np.array_equal(polar_transform(words), (words @ g) % 2)


def test_transform_rejects_bad_length():
    with pytest.raises(ValueError):
        polar_transform(np.zeros(6, np.uint8))


@settings(max_examples=1000, deadline=None, derandomize=True)
@given(stages=st.integers(0, 6), word=st.integers(0, 2**64 - 1))
def test_transform_involution(stages, word):
    n = 1 << stages
    u = unpack_bits(word, n)
    assert np.array_equal(polar_transform(polar_transform(u)), u)


@settings(max_examples=1000, deadline=None, derandomize=True)
@given(pick=st.integers(0, len(DIM_POOL) - 1), word=st.integers(0, 2**128 - 1))
def test_systematic_extraction(pick, word):
    n, k = DIM_POOL[pick]
    code = construct_polar(n, k, systematic=True)
    phi = unpack_bits(word, k)
    x = encode_systematic(phi, code)
    assert np.array_equal(x[code.info], phi)
    # same codebook as the plain arrangement: u = T(x) vanishes on the
    # frozen set
    u = polar_transform(x)
    assert not u[code.frozen].any()


@settings(max_examples=1000, deadline=None, derandomize=True)
@given(pick=st.integers(0, len(DIM_POOL) - 1), word=st.integers(0, 2**128 - 1))
def test_nonsystematic_round_trip(pick, word):
    n, k = DIM_POOL[pick]
    code = construct_polar(n, k)
    phi = unpack_bits(word, k)
    x = encode_nonsystematic(phi, code)
    u = polar_transform(x)
    assert np.array_equal(u[code.info], phi)
    assert not u[code.frozen].any()


def test_construct_polar_partitions_positions():
    for method in ("5g", "bhattacharyya"):
        code = construct_polar(64, 43, method=method)
        assert len(code.frozen) == 21 and len(code.info) == 43
        assert np.array_equal(
            np.sort(np.concatenate([code.frozen, code.info])), np.arange(64)
        )


def test_construct_polar_rejects_unknown_method():
    with pytest.raises(ValueError, match="method"):
        construct_polar(16, 8, method="genie")


def test_info_set_closed_under_domination():
    # systematic encoding relies on this closure property of the shipped
    # orderings: covering an information index keeps you in the set
    for method in ("5g", "bhattacharyya"):
        for n, k in DIM_POOL:
            code = construct_polar(n, k, method=method)
            frozen = set(code.frozen.tolist())
            for a in code.info.tolist():
                for j in range(n):
                    if (a & j) == a and j in frozen:
                        pytest.fail(f"{method} [{n},{k}]: {j} covers info {a} but is frozen")


def test_polar_code_validation():
    with pytest.raises(ValueError):
        PolarCode(n_code=6, frozen=np.arange(3), info=np.arange(3, 6))
    with pytest.raises(ValueError):
        PolarCode(n_code=8, frozen=np.arange(4), info=np.arange(3, 7))


def test_code_dims_validation():
    CodeDims(64, 48, 24)
    with pytest.raises(ValueError):
        CodeDims(48, 24, 12)
    with pytest.raises(ValueError):
        CodeDims(64, 65, 24)
    with pytest.raises(ValueError):
        CodeDims(64, 48, 48)


def test_code_dims_helpers():
    dims = CodeDims(64, 43, 32)
    assert dims.parity_bits == 11
    assert dims.rate == 0.5
    assert dims.crc_spec() is CRC11
    with pytest.raises(ValueError, match="degree"):
        dims.crc_spec(poly=CRC6.poly)


def test_ca_encode_places_crc_word():
    rng = np.random.default_rng(9)
    for systematic in (False, True):
        code = construct_polar(64, 43, systematic=systematic)
        msg = rng.integers(0, 2, 32).astype(np.uint8)
        x = ca_encode(msg, code, CRC11)
        phi = crc_encode(msg, CRC11)
        u = polar_transform(x)
        if systematic:
            assert np.array_equal(x[code.info], phi)
        else:
            assert np.array_equal(u[code.info], phi)
        assert not u[code.frozen].any()


def test_ca_encode_rejects_wrong_length():
    code = construct_polar(64, 43)
    with pytest.raises(ValueError, match="parity"):
        ca_encode(np.zeros(30, np.uint8), code, CRC11)
