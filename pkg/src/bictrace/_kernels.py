"""Dense mod-p elimination kernels.

Prime-field matrices are the one place where elimination reduces to machine
integer arithmetic, so the inner loop is jitted with numba.  A pure-numpy
implementation of the identical algorithm is kept as a fallback and can be
forced with BICTRACE_NO_NUMBA=1; both backends produce bit-identical output
(same pivoting, same mod-p arithmetic).

Rational matrices never come through here: arbitrary-precision arithmetic is
outside numba's reach, and exactness is non-negotiable.
"""

from __future__ import annotations

import os

import numpy as np

# Below this many entries the list<->ndarray round trip costs more than it saves.
MODP_DENSE_MIN = 256

# p*p must stay well inside int64 for the mod-p inner products.
_MODP_MAX_PRIME = 2**31 - 1


def _rref_modp_numpy(a: np.ndarray, p: int) -> list[int]:
    """Reduced row echelon form of int64 array a mod p, in place."""
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        pv = int(a[r, c])
        if pv != 1:
            a[r] = (a[r] * pow(pv, p - 2, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            a[mask] = (a[mask] - np.outer(col[mask], a[r])) % p
        pivots.append(c)
        r += 1
    return pivots


def _build_numba_kernel():
    from numba import njit

    @njit(cache=True)
    def _rref_modp_jit(a, p):  # pragma: no cover - exercised via wrapper
        rows, cols = a.shape
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        npiv = 0
        r = 0
        for c in range(cols):
            if r == rows:
                break
            pr = -1
            for i in range(r, rows):
                if a[i, c] % p != 0:
                    pr = i
                    break
            if pr == -1:
                continue
            if pr != r:
                for j in range(cols):
                    tmp = a[r, j]
                    a[r, j] = a[pr, j]
                    a[pr, j] = tmp
            # modular inverse by binary exponentiation
            pv = a[r, c] % p
            inv = 1
            e = p - 2
            base = pv
            while e > 0:
                if e & 1:
                    inv = (inv * base) % p
                base = (base * base) % p
                e >>= 1
            if inv != 1:
                for j in range(c, cols):
                    a[r, j] = (a[r, j] * inv) % p
            for i in range(rows):
                if i == r:
                    continue
                fac = a[i, c] % p
                if fac == 0:
                    continue
                for j in range(c, cols):
                    a[i, j] = (a[i, j] - fac * a[r, j]) % p
            pivots[npiv] = c
            npiv += 1
            r += 1
        return pivots[:npiv]

    return _rref_modp_jit


_BACKEND = None


def backend_name() -> str:
    _ensure_backend()
    return _BACKEND[0]


def _ensure_backend():
    global _BACKEND
    if _BACKEND is not None:
        return
    if os.environ.get("BICTRACE_NO_NUMBA"):
        _BACKEND = ("numpy", _rref_modp_numpy)
        return
    try:
        jit = _build_numba_kernel()

        def runner(a: np.ndarray, p: int) -> list[int]:
            return list(jit(a, p))

        _BACKEND = ("numba", runner)
    except ImportError:
        _BACKEND = ("numpy", _rref_modp_numpy)


def set_backend(name: str) -> None:
    """Force 'numba' or 'numpy' (used by tests and the benchmark)."""
    global _BACKEND
    if name == "numpy":
        _BACKEND = ("numpy", _rref_modp_numpy)
    elif name == "numba":
        jit = _build_numba_kernel()
        _BACKEND = ("numba", lambda a, p: list(jit(a, p)))
    else:
        raise ValueError(f"unknown backend {name!r}")


def rref_modp(data: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """RREF of an integer matrix mod p via the selected dense kernel."""
    if p > _MODP_MAX_PRIME:
        raise ValueError(f"prime too large for int64 kernels: {p}")
    _ensure_backend()
    a = np.array(data, dtype=np.int64) % p
    pivots = [int(c) for c in _BACKEND[1](a, p)]
    return a.tolist(), pivots
