"""Pairing-based TMIS authentication protocol, with executable session-key
recovery attacks against it.

Submodules: ``algebra`` (F_p^2, the curve, the symmetric pairing),
``params`` (the TEST and DESK parameter sets), ``primitives`` (hashes, the
symmetric cipher, freshness), ``protocol`` (registration and handshake),
``attacks`` and ``harness`` (deterministic scenarios, export/replay).
"""
from .params import DESK, TEST

__version__ = "0.1.0"
__all__ = ["DESK", "TEST", "__version__"]
