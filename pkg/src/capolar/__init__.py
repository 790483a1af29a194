"""CRC-aided polar coding with complete decoding and blockwise soft output.

Layering: codes (crc, polar, reliability) -> channel -> scl -> outer ->
pipeline -> sim/cli, with oracle providing brute-force references for the
test suite and selftest.
"""

from .channel import (ChannelParams, LLR_LIMIT, llr_from_channel, message_rng,
                      modulate, noise_rng, saturate_llr, transmit)
from .crc import (CRC6, CRC11, CRC24C, CrcSpec, crc_encode, crc_spec_for,
                  crc_syndrome)
from .outer import (OuterDecodeOutput, bit_prob, convert_llr, gcd_decode,
                    hard_decision, orbgrand_schedule, outer_llr,
                    pair_covariance, sogrand_decode)
from .pipeline import (DecodeResult, PipelineConfig, cca_scl_decode,
                       resolve_decision, threshold_test)
from .polar import (CodeDims, PolarCode, ca_encode, construct_polar,
                    encode_nonsystematic, encode_systematic, polar_transform)
from .reliability import bhattacharyya_order, sequence_for
from .scl import (BatchSclOutput, SclCandidate, SclOutput, ca_select,
                  ca_select_batch, message_window, scl_decode,
                  scl_decode_batch, so_ca, so_forney, so_polar)
from .sim import (CalibrationBin, SimConfig, SimRecord, run_bler_sweep,
                  run_calibration, run_llr_profile, run_uer_sweep,
                  wilson_interval)

__version__ = "0.1.0"

__all__ = [
    "ChannelParams", "LLR_LIMIT", "llr_from_channel", "message_rng",
    "modulate", "noise_rng", "saturate_llr", "transmit",
    "CRC6", "CRC11", "CRC24C", "CrcSpec", "crc_encode", "crc_spec_for",
    "crc_syndrome",
    "OuterDecodeOutput", "bit_prob", "convert_llr", "hard_decision",
    "orbgrand_schedule", "outer_llr", "pair_covariance", "sogrand_decode",
    "gcd_decode",
    "DecodeResult", "PipelineConfig", "cca_scl_decode", "resolve_decision",
    "threshold_test",
    "CodeDims", "PolarCode", "ca_encode", "construct_polar",
    "encode_nonsystematic", "encode_systematic", "polar_transform",
    "bhattacharyya_order", "sequence_for",
    "BatchSclOutput", "SclCandidate", "SclOutput", "ca_select",
    "ca_select_batch", "message_window", "scl_decode", "scl_decode_batch",
    "so_ca", "so_forney", "so_polar",
    "CalibrationBin", "SimConfig", "SimRecord", "run_bler_sweep",
    "run_calibration", "run_llr_profile", "run_uer_sweep", "wilson_interval",
    "__version__",
]
