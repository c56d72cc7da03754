"""
Seeded random sampling.

Every draw in sketchlab goes through a `Seed`: a (master, stream) pair that is
turned into a Philox counter-based generator. Philox keys are independent per
stream, so a trial's samples depend only on its own seed and never on which
worker thread happens to run it. Normal variates come from numpy's ziggurat
`standard_normal`, which is deterministic for a fixed generator state.
"""

import hashlib
from typing import NamedTuple

import numpy as np

from sketchlab.core.linalg import qr
from sketchlab.errors import DomainError

_MASK64 = (1 << 64) - 1


class Seed(NamedTuple):
    master: int
    stream: int = 0

    def child(self, *parts):
        """Seed for a sub-task, stream derived from `parts` (see derive_stream)."""
        return Seed(self.master, derive_stream(self.stream, *parts))


def derive_stream(*parts):
    """
    Stable 64-bit substream index for a tuple of ints/strings.

    Uses blake2b over the repr of the parts, so the value is identical across
    processes, platforms and Python hash randomisation.
    """
    payload = "\x1f".join(repr(p) for p in parts).encode("utf-8")
    digest = hashlib.blake2b(payload, digest_size=8).digest()
    return int.from_bytes(digest, "little")


def generator(seed):
    master = int(seed.master) & _MASK64
    stream = int(seed.stream) & _MASK64
    sequence = np.random.SeedSequence(entropy=master, spawn_key=(stream,))
    return np.random.Generator(np.random.Philox(sequence))


def _check_size(rows, cols):
    if rows < 0 or cols < 0:
        raise DomainError(f"sample size must be nonnegative, got {rows}x{cols}")


def sample_complex_gaussian(rows, cols, seed):
    """
    i.i.d. standard complex Gaussian entries Z = X + iY, X and Y ~ N(0, 1/2).

    E|Z|^2 = 1. The real parts are drawn first, then the imaginary parts.
    """
    _check_size(rows, cols)
    rng = generator(seed)
    scale = np.sqrt(0.5)
    re = rng.standard_normal((rows, cols))
    im = rng.standard_normal((rows, cols))
    return (scale * re + 1j * (scale * im)).astype(np.complex128)


def sample_real_gaussian(rows, cols, seed):
    """i.i.d. N(0, 1) entries embedded as complex with zero imaginary part."""
    _check_size(rows, cols)
    rng = generator(seed)
    return rng.standard_normal((rows, cols)).astype(np.complex128)


def sample_gaussian(rows, cols, seed, mode="complex"):
    if mode == "complex":
        return sample_complex_gaussian(rows, cols, seed)
    if mode == "real":
        return sample_real_gaussian(rows, cols, seed)
    raise DomainError(f"unknown sampling mode {mode!r}")


def sample_haar_unitary(n, seed):
    """
    Haar-distributed n x n unitary matrix.

    QR of a complex Ginibre matrix, with the columns of Q multiplied by the
    phases of diag(R) so that R has a real positive diagonal; without the
    phase fix the distribution is not Haar.
    """
    if n < 0:
        raise DomainError(f"unitary size must be nonnegative, got {n}")
    ginibre = sample_complex_gaussian(n, n, seed)
    q, _ = qr(ginibre)
    return q
