"""Site-embedding kernels with selectable backend.

The environment variable ``CHARGEHAM_BACKEND`` picks the implementation:
``"numba"`` for the jitted kernel, ``"numpy"`` for the pure-numpy fallback.
Unset, the jitted kernel is used when numba imports cleanly.
"""

from __future__ import annotations

import os

import numpy as np

_VALID = ("numba", "numpy")


def _select_backend() -> str:
    requested = os.environ.get("CHARGEHAM_BACKEND", "").strip().lower()
    if requested and requested not in _VALID:
        raise ValueError(
            f"CHARGEHAM_BACKEND must be one of {_VALID}, got {requested!r}"
        )
    if requested == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if requested == "numba":
            raise
        return "numpy"
    return "numba"


_BACKEND = _select_backend()


def active_backend() -> str:
    """Name of the kernel implementation in use ("numba" or "numpy")."""
    return _BACKEND


def _embed_numpy(op: np.ndarray, sites: tuple[int, ...], n_sites: int,
                 local_dim: int) -> np.ndarray:
    """Embed a k-site operator into the n-site space; sites are 0-based."""
    d = local_dim
    k = len(sites)
    rest = [p for p in range(n_sites) if p not in sites]
    big = np.kron(op, np.eye(d ** (n_sites - k), dtype=complex))
    big = big.reshape([d] * (2 * n_sites))
    # axis a of `big` currently carries the digit of src_order[a]
    src_order = list(sites) + rest
    perm = [0] * n_sites
    for axis, site in enumerate(src_order):
        perm[site] = axis
    full = perm + [n_sites + p for p in perm]
    dim = d ** n_sites
    return np.ascontiguousarray(big.transpose(full)).reshape(dim, dim)


if _BACKEND == "numba":
    import numba

    @numba.njit(cache=True)
    def _embed_fill(out, op, weights, local_dim):  # pragma: no cover - jitted
        k = weights.shape[0]
        dim = out.shape[0]
        dk = op.shape[0]
        for s in range(dim):
            a = 0
            base = s
            for i in range(k):
                w = weights[i]
                digit = (s // w) % local_dim
                a = a * local_dim + digit
                base -= digit * w
            for ap in range(dk):
                v = op[ap, a]
                if v != 0:
                    q = base
                    t = ap
                    for i in range(k - 1, -1, -1):
                        q += (t % local_dim) * weights[i]
                        t //= local_dim
                    out[q, s] = v

    def _embed_numba(op, sites, n_sites, local_dim):
        dim = local_dim ** n_sites
        out = np.zeros((dim, dim), dtype=complex)
        weights = np.array(
            [local_dim ** (n_sites - 1 - p) for p in sites], dtype=np.int64
        )
        _embed_fill(out, np.ascontiguousarray(op, dtype=complex), weights,
                    local_dim)
        return out


def embed_sites(op: np.ndarray, sites: tuple[int, ...], n_sites: int,
                local_dim: int) -> np.ndarray:
    """Embed ``op`` acting on ``sites`` (0-based, distinct) into n-site space.

    Site 0 is the leftmost tensor factor; ``sites`` order matches the index
    order of ``op`` (first site = most significant digit of the row index).
    """
    if len(set(sites)) != len(sites):
        raise ValueError(f"sites must be distinct, got {sites}")
    if any(p < 0 or p >= n_sites for p in sites):
        raise ValueError(f"sites {sites} out of range for n_sites={n_sites}")
    dk = local_dim ** len(sites)
    if op.shape != (dk, dk):
        raise ValueError(
            f"operator shape {op.shape} does not match {len(sites)} sites of "
            f"local dimension {local_dim}"
        )
    if _BACKEND == "numba":
        return _embed_numba(op, tuple(sites), n_sites, local_dim)
    return _embed_numpy(op, tuple(sites), n_sites, local_dim)
