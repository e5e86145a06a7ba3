"""Deterministic counter-based random stream shared by all cohort members.

Every party must derive bitwise-identical encoding keys from the shared
32-byte seed, so the generator and its draw order are normative (see
docs/DETERMINISM.md):

* Raw stream: the ChaCha20 keystream for key = seed and a 16-byte zero
  nonce (8-byte little-endian block counter followed by an 8-byte zero
  nonce, both starting at zero).
* Uniforms: consecutive 8-byte little-endian words x; each maps to
  u = ((x >> 11) + 0.5) * 2**-53, which lies strictly inside (0, 1).
* Complex Gaussians: one uniform pair (u1, u2) per entry,
  re = sqrt(-ln u1) * cos(2*pi*u2), im = sqrt(-ln u1) * sin(2*pi*u2),
  i.e. Box-Muller scaled so each component is N(0, 1/2).
* Bounded integers: 64-bit rejection sampling (reject x >= 2**64 - 2**64 % n,
  return x % n) so draws are exactly uniform.
"""

import numpy as np
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms

_U64_MOD = 1 << 64
_TO_UNIT = 2.0 ** -53


class DeterministicStream:
    """Sequential reader over the ChaCha20 keystream of a 32-byte seed."""

    def __init__(self, seed: bytes):
        if len(seed) != 32:
            raise ValueError(f"seed must be exactly 32 bytes, got {len(seed)}")
        cipher = Cipher(algorithms.ChaCha20(bytes(seed), b"\x00" * 16), mode=None)
        self._keystream = cipher.encryptor()

    def take_bytes(self, n: int) -> bytes:
        return self._keystream.update(b"\x00" * n)

    def uint64(self, count: int) -> np.ndarray:
        raw = self.take_bytes(8 * count)
        return np.frombuffer(raw, dtype="<u8")

    def uniform(self, count: int) -> np.ndarray:
        """count doubles strictly inside (0, 1)."""
        words = self.uint64(count)
        return ((words >> np.uint64(11)).astype(np.float64) + 0.5) * _TO_UNIT

    def complex_gaussians(self, count: int) -> np.ndarray:
        """count standard complex normals (components N(0, 1/2))."""
        u = self.uniform(2 * count)
        radius = np.sqrt(-np.log(u[0::2]))
        angle = (2.0 * np.pi) * u[1::2]
        return radius * np.cos(angle) + 1j * (radius * np.sin(angle))

    def randint_below(self, n: int) -> int:
        """Uniform integer in [0, n) via rejection sampling."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = _U64_MOD - _U64_MOD % n
        while True:
            x = int(self.uint64(1)[0])
            if x < limit:
                return x % n
