"""Vectorized zero filters for polynomials at torsion points, modulo a prime.

A point whose value is nonzero modulo p is certainly off the hypersurface;
survivors are confirmed exactly by the caller.  The numba kernel is used unless
numba is missing or the environment sets TORUS_STAB_NUMBA=0.
"""
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and os.environ.get("TORUS_STAB_NUMBA", "1") != "0"


def zero_mask_numpy(pts, exps, cvals, scale, L, pw, p):
    dot = pts @ exps.T
    idx = (dot * scale) % L
    vals = (pw[idx] * cvals[None, :]) % p
    return vals.sum(axis=1) % p == 0


if numba is not None:

    @numba.njit(cache=True, nogil=True)
    def _zero_mask_jit(pts, exps, cvals, scale, L, pw, p):
        npts, n = pts.shape
        nterms = exps.shape[0]
        out = np.empty(npts, dtype=np.bool_)
        for i in range(npts):
            acc = 0
            for j in range(nterms):
                d = 0
                for k in range(n):
                    d += pts[i, k] * exps[j, k]
                d = ((d * scale) % L + L) % L
                acc = (acc + pw[d] * cvals[j]) % p
            out[i] = acc == 0
        return out

else:  # pragma: no cover
    _zero_mask_jit = None


def zero_mask(pts, exps, cvals, scale, L, pw, p, backend=None):
    """Boolean mask of points where sum_j c_j r^(scale <e_j, pt>) vanishes mod p."""
    use = USE_NUMBA if backend is None else backend == "numba"
    if use and _zero_mask_jit is not None:
        return _zero_mask_jit(pts, exps, cvals, np.int64(scale), np.int64(L), pw, np.int64(p))
    return zero_mask_numpy(pts, exps, cvals, scale, L, pw, p)


def active_backend() -> str:
    return "numba" if USE_NUMBA and _zero_mask_jit is not None else "numpy"
