"""Hot integer kernels with a numba path and a pure-numpy fallback.

Three loops dominate runtime once the inputs leave toy sizes:

* enumerating lattice points of ``{x : A x >= b}`` inside a box,
* scanning the torus ``(F_p^*)^n`` for common zeros of ``f`` and the
  logarithmic derivatives ``x_i df/dx_i``,
* ranks of integer matrices over ``F_p``.

All three work on int64 with exact integer arithmetic; callers guard the
value ranges (see ``int64_safe``) and fall back to the pure-Python exact
routines when a guard trips.

Set ``TORIC_EMBED_DISABLE_NUMBA=1`` to force the numpy path.
"""
from __future__ import annotations

import os

import numpy as np

_INT64_LIMIT = 2**62

_DISABLED = os.environ.get("TORIC_EMBED_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _DISABLED:
        raise ImportError("disabled by TORIC_EMBED_DISABLE_NUMBA")
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised when numba is absent
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


def _resolve(backend):
    backend = backend or BACKEND
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but unavailable")
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


def int64_safe(*bounds) -> bool:
    """True if every magnitude bound is comfortably inside int64."""
    return all(abs(int(b)) < _INT64_LIMIT for b in bounds)


# -- lattice points -----------------------------------------------------------


def _suffix_max(A, lo, hi):
    # smax[k, j] = max over the box of sum_{i >= j} A[k, i] x_i
    m, d = A.shape
    smax = np.zeros((m, d + 1), dtype=np.int64)
    for j in range(d - 1, -1, -1):
        smax[:, j] = smax[:, j + 1] + np.maximum(A[:, j] * lo[j], A[:, j] * hi[j])
    return smax


def _lattice_points_numpy(A, b, lo, hi):
    m, d = A.shape
    smax = _suffix_max(A, lo, hi)
    prefix = np.zeros((1, 0), dtype=np.int64)
    partial = np.zeros((1, m), dtype=np.int64)  # A[:, :j] @ x[:j] for each prefix
    for j in range(d):
        need = b[None, :] - partial - smax[None, :, j + 1]  # A[:, j] x_j >= need
        a = A[:, j]
        low = np.full(prefix.shape[0], lo[j], dtype=np.int64)
        high = np.full(prefix.shape[0], hi[j], dtype=np.int64)
        pos = a > 0
        neg = a < 0
        if pos.any():
            low = np.maximum(low, (-((-need[:, pos]) // a[pos])).max(axis=1))
        if neg.any():
            high = np.minimum(high, (need[:, neg] // a[neg]).min(axis=1))
        if (~pos & ~neg).any():
            ok = (need[:, ~pos & ~neg] <= 0).all(axis=1)
            high = np.where(ok, high, low - 1)
        counts = np.maximum(high - low + 1, 0)
        total = int(counts.sum())
        if total == 0:
            return np.zeros((0, d), dtype=np.int64)
        rep = np.repeat(np.arange(prefix.shape[0]), counts)
        starts = np.repeat(low, counts)
        offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
        xj = starts + offsets
        prefix = np.concatenate([prefix[rep], xj[:, None]], axis=1)
        partial = partial[rep] + xj[:, None] * a[None, :]
    keep = (partial >= b[None, :]).all(axis=1)
    return prefix[keep]


if HAVE_NUMBA:

    @njit(cache=True)
    def _lattice_points_numba(A, b, lo, hi, smax):  # pragma: no cover - jitted
        m, d = A.shape
        cap = 1024
        out = np.empty((cap, d), dtype=np.int64)
        count = 0
        x = np.zeros(d, dtype=np.int64)
        low = np.zeros(d, dtype=np.int64)
        high = np.zeros(d, dtype=np.int64)
        partial = np.zeros((d + 1, m), dtype=np.int64)
        j = 0
        fresh = True
        while j >= 0:
            if fresh:
                l = lo[j]
                h = hi[j]
                for k in range(m):
                    need = b[k] - partial[j, k] - smax[k, j + 1]
                    a = A[k, j]
                    if a > 0:
                        t = -((-need) // a)
                        if t > l:
                            l = t
                    elif a < 0:
                        t = need // a
                        if t < h:
                            h = t
                    elif need > 0:
                        h = l - 1
                low[j] = l
                high[j] = h
                x[j] = l - 1
                fresh = False
            x[j] += 1
            if x[j] > high[j]:
                j -= 1
                continue
            for k in range(m):
                partial[j + 1, k] = partial[j, k] + A[k, j] * x[j]
            if j == d - 1:
                ok = True
                for k in range(m):
                    if partial[d, k] < b[k]:
                        ok = False
                        break
                if ok:
                    if count == cap:
                        cap *= 2
                        grown = np.empty((cap, d), dtype=np.int64)
                        grown[:count] = out[:count]
                        out = grown
                    out[count] = x
                    count += 1
            else:
                j += 1
                fresh = True
        return out[:count]


def lattice_points_in(A, b, lo, hi, backend=None) -> np.ndarray:
    """All integer ``x`` with ``lo <= x <= hi`` and ``A x >= b``, lexicographic.

    Uses per-axis interval pruning: after fixing ``x_0..x_{j-1}`` each
    inequality bounds ``x_j`` using the box maximum of the remaining terms.
    """
    A = np.ascontiguousarray(A, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    lo = np.ascontiguousarray(lo, dtype=np.int64)
    hi = np.ascontiguousarray(hi, dtype=np.int64)
    if _resolve(backend) == "numba":
        return _lattice_points_numba(A, b, lo, hi, _suffix_max(A, lo, hi))
    return _lattice_points_numpy(A, b, lo, hi)


# -- torus scan over F_p ----------------------------------------------------------


def _power_table(p, max_exp):
    table = np.ones((p, max_exp + 1), dtype=np.int64)
    vals = np.arange(p, dtype=np.int64)
    for e in range(1, max_exp + 1):
        table[:, e] = (table[:, e - 1] * vals) % p
    return table


def _torus_scan_numpy(exps, coeffs, p, max_hits, chunk=1 << 16):
    T, n = exps.shape
    table = _power_table(p, int(exps.max()) if exps.size else 0)
    total = (p - 1) ** n
    hits = []
    count = 0
    radix = (p - 1) ** np.arange(n - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        pts = (idx[:, None] // radix[None, :]) % (p - 1) + 1
        vals = np.broadcast_to(coeffs % p, (len(idx), T)).copy()
        for i in range(n):
            vals = (vals * table[pts[:, i][:, None], exps[None, :, i]]) % p
        zero = vals.sum(axis=1) % p == 0
        for i in range(n):
            zero &= (vals * exps[None, :, i]).sum(axis=1) % p == 0
        nz = np.flatnonzero(zero)
        count += len(nz)
        for k in nz[: max(0, max_hits - len(hits))]:
            hits.append(pts[k].copy())
    return count, (np.array(hits, dtype=np.int64).reshape(-1, n))


if HAVE_NUMBA:

    @njit(cache=True)
    def _torus_scan_numba(exps, coeffs, p, max_hits, table):  # pragma: no cover - jitted
        T, n = exps.shape
        hits = np.empty((max_hits, n), dtype=np.int64)
        nh = 0
        count = 0
        x = np.ones(n, dtype=np.int64)
        vals = np.empty(T, dtype=np.int64)
        while True:
            for t in range(T):
                v = coeffs[t] % p
                for i in range(n):
                    v = (v * table[x[i], exps[t, i]]) % p
                vals[t] = v
            s = 0
            for t in range(T):
                s += vals[t]
            if s % p == 0:
                ok = True
                for i in range(n):
                    s = 0
                    for t in range(T):
                        s += vals[t] * exps[t, i]
                    if s % p != 0:
                        ok = False
                        break
                if ok:
                    if nh < max_hits:
                        hits[nh] = x
                        nh += 1
                    count += 1
            i = n - 1
            while i >= 0:
                x[i] += 1
                if x[i] < p:
                    break
                x[i] = 1
                i -= 1
            if i < 0:
                break
        return count, hits[:nh]


def torus_scan(exps, coeffs, p, max_hits=16, backend=None):
    """Count points of (F_p^*)^n where f and every x_i df/dx_i vanish.

    ``f = sum_t coeffs[t] * prod_i x_i^exps[t, i]`` with coefficients already
    reduced mod ``p``.  Returns ``(count, first_hits)``.
    """
    exps = np.ascontiguousarray(exps, dtype=np.int64)
    coeffs = np.ascontiguousarray(coeffs, dtype=np.int64)
    if not int64_safe(p * p * (int(exps.max()) + 1) * max(1, exps.shape[0])):
        raise OverflowError("prime too large for int64 torus scan")
    if _resolve(backend) == "numba":
        table = _power_table(p, int(exps.max()) if exps.size else 0)
        return _torus_scan_numba(exps, coeffs, p, max_hits, table)
    return _torus_scan_numpy(exps, coeffs, p, max_hits)


# -- rank over F_p ---------------------------------------------------------------


def _rank_mod_p_numpy(M, p):
    M = M.copy() % p
    rows, cols = M.shape
    r = 0
    for c in range(cols):
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = pow(int(M[r, c]), p - 2, p)
        M[r] = (M[r] * inv) % p
        others = np.flatnonzero(M[:, c])
        others = others[others != r]
        if others.size:
            M[others] = (M[others] - M[others, c][:, None] * M[r][None, :]) % p
        r += 1
        if r == rows:
            break
    return r


if HAVE_NUMBA:

    @njit(cache=True)
    def _rank_mod_p_numba(M, p):  # pragma: no cover - jitted
        M = M.copy()
        rows, cols = M.shape
        for i in range(rows):
            for j in range(cols):
                M[i, j] %= p
        r = 0
        for c in range(cols):
            piv = -1
            for i in range(r, rows):
                if M[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(cols):
                    tmp = M[r, j]
                    M[r, j] = M[piv, j]
                    M[piv, j] = tmp
            # modular inverse by square-and-multiply
            inv = 1
            base = M[r, c]
            e = p - 2
            while e > 0:
                if e & 1:
                    inv = (inv * base) % p
                base = (base * base) % p
                e >>= 1
            for j in range(cols):
                M[r, j] = (M[r, j] * inv) % p
            for i in range(rows):
                if i != r and M[i, c] != 0:
                    f = M[i, c]
                    for j in range(cols):
                        M[i, j] = (M[i, j] - f * M[r, j]) % p
            r += 1
            if r == rows:
                break
        return r


def rank_mod_p(M, p, backend=None) -> int:
    if not int64_safe(p * p):
        raise OverflowError("prime too large for int64 elimination")
    if isinstance(M, np.ndarray):
        M = np.ascontiguousarray(M % p, dtype=np.int64)
    else:  # python ints may exceed int64 before reduction
        M = np.array([[int(x) % p for x in row] for row in M], dtype=np.int64)
    if M.size == 0:
        return 0
    if _resolve(backend) == "numba":
        return int(_rank_mod_p_numba(M, p))
    return int(_rank_mod_p_numpy(M, p))
