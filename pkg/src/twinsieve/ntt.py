"""Exact integer convolution via number-theoretic transforms.

Two word-sized NTT primes p = c * 2^27 + 1 support transform lengths up
to 2^27; true convolution values are recovered by CRT as long as they
stay below p1 * p2 ~ 4.6e18.  All butterflies run vectorized on int64
(products stay under 2^63 because both primes are < 2^31.1).
"""

from __future__ import annotations

import numpy as np

P1 = 2013265921  # 15 * 2^27 + 1
P2 = 2281701377  # 17 * 2^27 + 1
MAX_EXACT = P1 * P2
MAX_TRANSFORM = 1 << 27


class ReconstructionOverflow(ValueError):
    """Convolution values may exceed the CRT range; split the inputs."""


def _primitive_root(p: int) -> int:
    phi = p - 1
    factors = []
    n = phi
    for q in (2, 3, 5, 7, 11, 13):
        while n % q == 0:
            n //= q
            if q not in factors:
                factors.append(q)
    if n > 1:
        factors.append(n)
    g = 2
    while True:
        if all(pow(g, phi // q, p) != 1 for q in factors):
            return g
        g += 1


_ROOTS = {p: _primitive_root(p) for p in (P1, P2)}


_BITREV_CACHE: dict[int, np.ndarray] = {}


def _bit_reverse_permutation(n: int) -> np.ndarray:
    cached = _BITREV_CACHE.get(n)
    if cached is not None:
        return cached
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    if len(_BITREV_CACHE) < 4:
        _BITREV_CACHE[n] = rev
    return rev


def _pow_array(base: int, n: int, p: int) -> np.ndarray:
    """base^0 .. base^(n-1) mod p via doubling (O(log n) vector ops)."""
    out = np.ones(n, dtype=np.int64)
    filled = 1
    while filled < n:
        mult = pow(base, filled, p)
        take = min(filled, n - filled)
        out[filled : filled + take] = out[:take] * mult % p
        filled *= 2
    return out


def _ntt(a: np.ndarray, p: int, invert: bool) -> np.ndarray:
    n = len(a)
    a = a[_bit_reverse_permutation(n)].copy()
    root = pow(_ROOTS[p], (p - 1) // n, p)
    if invert:
        root = pow(root, p - 2, p)
    length = 2
    while length <= n:
        w_len = pow(root, n // length, p)
        half = length // 2
        w = _pow_array(w_len, half, p)
        blocks = a.reshape(-1, length)
        lo = blocks[:, :half].copy()
        hi = blocks[:, half:] * w % p
        blocks[:, :half] = (lo + hi) % p
        blocks[:, half:] = (lo - hi) % p
        a = blocks.reshape(-1)
        length *= 2
    if invert:
        n_inv = pow(n, p - 2, p)
        a = a * n_inv % p
    return a


def _convolve_mod(a: np.ndarray, b: np.ndarray, p: int, size: int) -> np.ndarray:
    fa = np.zeros(size, dtype=np.int64)
    fb = np.zeros(size, dtype=np.int64)
    fa[: len(a)] = a % p
    fb[: len(b)] = b % p
    fa = _ntt(fa, p, invert=False)
    fb = _ntt(fb, p, invert=False)
    return _ntt(fa * fb % p, p, invert=True)


def exact_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Bit-exact nonnegative-integer convolution of two int arrays.

    Result length len(a) + len(b) - 1.  Raises ReconstructionOverflow when
    an a-priori bound on the output exceeds the CRT range.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if np.any(a < 0) or np.any(b < 0):
        raise ValueError("exact mode expects nonnegative integer inputs")
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, dtype=np.int64)
    bound = (
        int(min(len(a), len(b)))
        * int(a.max(initial=0))
        * int(b.max(initial=0))
    )
    if bound >= MAX_EXACT:
        raise ReconstructionOverflow(
            f"output bound {bound} exceeds CRT range {MAX_EXACT}; split the inputs"
        )
    out_len = len(a) + len(b) - 1
    size = 1
    while size < out_len:
        size *= 2
    if size > MAX_TRANSFORM:
        raise ValueError("transform size exceeds 2^27")
    r1 = _convolve_mod(a, b, P1, size)[:out_len]
    r2 = _convolve_mod(a, b, P2, size)[:out_len]
    # CRT: x = r1 + P1 * ((r2 - r1) * inv(P1) mod P2); all interim products
    # stay below 2^62
    inv_p1 = pow(P1, P2 - 2, P2)
    t = (r2 - r1) % P2 * inv_p1 % P2
    return r1 + P1 * t


def float_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """FFT convolution in doubles; roundoff well below 1e-6 N |f| |g|."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    out_len = len(a) + len(b) - 1
    size = 1
    while size < out_len:
        size *= 2
    fa = np.fft.rfft(a, size)
    fb = np.fft.rfft(b, size)
    return np.fft.irfft(fa * fb, size)[:out_len]
