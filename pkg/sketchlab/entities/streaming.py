import logging

import numpy as np

from sketchlab.constants import REL_TOL
from sketchlab.core.linalg import as_dense
from sketchlab.errors import DomainError, ShapeError
from sketchlab.recovery.matrix_sketch import SketchPair, recover

logger = logging.getLogger(__name__)


class StreamingSketcher:
    """
    Single-pass sketch accumulator for X0 = H1 + H2 + ...

    Each update is folded into the running sketches Y = S X0 and
    Y~ = S~ X0^* and then dropped; X0 itself is never stored. Rank-one
    updates w * u v^* are applied without forming the n1 x n2 outer product.
    Noise is added exactly once, at finalize().
    """

    def __init__(self, s, s_tilde):
        """
        Args:
            s: r x n1 sketching matrix (applied from the left)
            s_tilde: r x n2 sketching matrix (applied to X0^*)
        """
        self.s = as_dense(s, "s")
        self.s_tilde = as_dense(s_tilde, "s_tilde")
        r, self.n1 = self.s.shape
        if self.s_tilde.shape[0] != r:
            raise ShapeError(f"s and s_tilde need the same row count, got {r} and {self.s_tilde.shape[0]}")
        self.n2 = self.s_tilde.shape[1]
        self.r = r
        self.reset()

    def reset(self):
        """Clear the running sketches to the zero-matrix state."""
        self.y = np.zeros((self.r, self.n2), dtype=np.complex128)
        self.y_tilde = np.zeros((self.r, self.n1), dtype=np.complex128)
        self.updates_seen = 0
        self.rank_one_updates = 0
        self.finalized = False

    def _check_open(self):
        if self.finalized:
            raise DomainError("sketcher already finalized; call reset() to start a new stream")

    def update(self, h):
        """Fold a dense n1 x n2 update into both sketches."""
        self._check_open()
        h = as_dense(h, "update")
        if h.shape != (self.n1, self.n2):
            raise ShapeError(f"update must be {self.n1}x{self.n2}, got {h.shape}")
        self.y += self.s @ h
        self.y_tilde += self.s_tilde @ h.conj().T
        self.updates_seen += 1

    def update_rank_one(self, u, v, weight=1.0):
        """Fold weight * u v^* in O(r (n1 + n2)) work."""
        self._check_open()
        u = np.asarray(u, dtype=np.complex128).reshape(-1)
        v = np.asarray(v, dtype=np.complex128).reshape(-1)
        if u.size != self.n1 or v.size != self.n2:
            raise ShapeError(f"rank-one factors must have lengths {self.n1} and {self.n2}")
        self.y += weight * np.outer(self.s @ u, v.conj())
        self.y_tilde += np.conj(weight) * np.outer(self.s_tilde @ v, u.conj())
        self.updates_seen += 1
        self.rank_one_updates += 1

    def finalize(self, z=None, z_tilde=None):
        """Add the sketch noise once and return the (Y, Y~) pair."""
        self._check_open()
        if z is not None:
            z = as_dense(z, "z")
            if z.shape != self.y.shape:
                raise ShapeError(f"z must be {self.y.shape}, got {z.shape}")
            self.y += z
        if z_tilde is not None:
            z_tilde = as_dense(z_tilde, "z_tilde")
            if z_tilde.shape != self.y_tilde.shape:
                raise ShapeError(f"z_tilde must be {self.y_tilde.shape}, got {z_tilde.shape}")
            self.y_tilde += z_tilde
        self.finalized = True
        logger.debug(
            "stream finalized after %d updates (%d rank-one)", self.updates_seen, self.rank_one_updates
        )
        return SketchPair(self.y.copy(), self.y_tilde.copy())

    def recover(self, rel_tol=REL_TOL):
        if not self.finalized:
            self.finalize()
        return recover(self.y, self.y_tilde, self.s, rel_tol).x
