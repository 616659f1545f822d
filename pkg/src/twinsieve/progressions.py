"""Distribution of Lambda and mu in progressions with low-conductor corrections.

The discrepancy of interest replaces the classical single-main-term
approximation by the full expansion over characters of conductor <= P:
summing w(n) against the corrected indicator u_P(n a^-1; q).  Exactness
matters here - the imprimitive parts are computed by restricting to n
coprime to q via per-modulus residue sums, never by bounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arith import PrimeTable, default_table
from .characters import (
    DirichletCharacter,
    _value_table,
    character_group,
    conductor,
    primitive_characters,
)
from .sieves import SieveWeights

__all__ = [
    "CharSumTable",
    "weight_array",
    "psi_progression",
    "char_sum_table",
    "bv_discrepancy",
    "bv_profile",
    "weighted_level_sum",
]


def weight_array(weight: str, N: int, table: PrimeTable | None = None) -> np.ndarray:
    """Dense w(n) for n = 0..N, w in {Lambda, mu}."""
    table = table or default_table(max(N, 1_100_000))
    if table.limit < N:
        raise ValueError("prime table must cover N")
    if weight == "Lambda":
        out = np.zeros(N + 1)
        for p in table.primes_upto(N):
            p = int(p)
            logp = math.log(p)
            pk = p
            while pk <= N:
                out[pk] = logp
                pk *= p
        return out
    if weight == "mu":
        mu = np.ones(N + 1, dtype=np.int64)
        mu[0] = 0
        for p in table.primes_upto(N):
            p = int(p)
            mu[p::p] *= -1
            if p * p <= N:
                mu[p * p :: p * p] = 0
        return mu
    raise ValueError("weight must be 'Lambda' or 'mu'")


def _residue_sums(w: np.ndarray, q: int) -> np.ndarray:
    """R[r] = sum of w(n) over n = r mod q, n in [1, len(w))."""
    n = np.arange(len(w))
    return np.bincount(n % q, weights=w, minlength=q)[:q]


def psi_progression(
    N: int, q: int, a: int, weight: str, table: PrimeTable | None = None,
    w: np.ndarray | None = None,
) -> float:
    """sum of w(n) over n <= N with n = a mod q."""
    if math.gcd(a, q) != 1:
        raise ValueError("a must be coprime to q")
    if w is None:
        w = weight_array(weight, N, table)
    idx = np.arange(a % q if (a % q) > 0 else q, N + 1, q)
    return float(w[idx].sum())


@dataclass(frozen=True)
class CharSumTable:
    """Sums of w(n) psi(n) for every primitive psi with conductor <= P."""

    N: int
    P: int
    weight: str
    entries: dict = field(repr=False)  # (f, index) -> complex
    characters: dict = field(repr=False)  # (f, index) -> DirichletCharacter

    def total(self) -> float:
        return self.entries[(1, 0)].real


def char_sum_table(
    N: int, P: int, weight: str, table: PrimeTable | None = None,
    w: np.ndarray | None = None,
) -> CharSumTable:
    """One pass per conductor: residue sums, then dot with character values."""
    if P > 1000:
        raise ValueError("conductor budget is 1000")
    if w is None:
        w = weight_array(weight, N, table)
    entries: dict = {}
    chars: dict = {}
    for f in range(1, P + 1):
        prims = primitive_characters(f)
        if not prims:
            continue
        R = _residue_sums(w, f)
        for i, chi in enumerate(prims):
            vals = _value_table(chi)
            entries[(f, i)] = complex(np.dot(vals, R))
            chars[(f, i)] = chi
    return CharSumTable(N=N, P=P, weight=weight, entries=entries, characters=chars)


def _chars_mod_q_with_small_conductor(q: int, P: float):
    """(f, psi*) pairs for the characters mod q with conductor <= P."""
    out = []
    for f in range(1, q + 1):
        if q % f == 0 and f <= P:
            for chi in primitive_characters(f):
                out.append((f, chi))
    return out


def bv_discrepancy(
    N: int,
    q: int,
    a: int,
    P: float,
    weight: str,
    table: PrimeTable | None = None,
    w: np.ndarray | None = None,
) -> float:
    """sum_n w(n) u_P(n a^-1; q), computed exactly via residue sums.

    Each character mod q with conductor <= P contributes its induced sum
    restricted to n coprime to q (the imprimitivity correction is exact:
    the value table of the induced character vanishes on non-units).
    """
    if math.gcd(a, q) != 1:
        raise ValueError("a must be coprime to q")
    if w is None:
        w = weight_array(weight, N, table)
    if q == 1:
        return 0.0
    R = _residue_sums(w, q)
    r = np.arange(q)
    coprime = np.gcd(r, q) == 1
    phi = int(np.count_nonzero(coprime))
    disc = float(R[a % q])
    correction = 0j
    for f, chi_star in _chars_mod_q_with_small_conductor(q, P):
        star_vals = _value_table(chi_star)
        induced = np.where(coprime, star_vals[r % f], 0)
        T = np.dot(induced, R)
        correction += np.conj(induced[a % q]) * T
    assert abs(correction.imag) < 1e-6 * (abs(correction.real) + 1)
    return disc - correction.real / phi


def bv_profile(
    N: int,
    Q: int,
    P_list,
    weight: str,
    table: PrimeTable | None = None,
) -> list[dict]:
    """For each P: sum over q <= Q of max over units a of |discrepancy|.

    Returns per-(P, q) rows with the maximizing residue, plus per-P totals
    appended by the caller-facing helpers.  The trend in P is emitted for
    inspection, never asserted.
    """
    if Q > N:
        raise ValueError("Q must be at most N")
    w = weight_array(weight, N, table)
    P_list = sorted(set(P_list))
    rows = []
    for q in range(1, Q + 1):
        R = _residue_sums(w, q) if q > 1 else None
        r = np.arange(q)
        coprime = (np.gcd(r, q) == 1) if q > 1 else None
        for P in P_list:
            if q == 1:
                rows.append({"P": P, "q": 1, "a_max": 1, "discrepancy": 0.0})
                continue
            phi = int(np.count_nonzero(coprime))
            base = np.where(coprime, R, 0.0).astype(complex)
            corr = np.zeros(q, dtype=complex)
            for f, chi_star in _chars_mod_q_with_small_conductor(q, P):
                star_vals = _value_table(chi_star)
                induced = np.where(coprime, star_vals[r % f], 0)
                T = np.dot(induced, R)
                corr += np.conj(induced) * T
            disc = np.where(coprime, R - corr.real / phi, 0.0)
            units = np.nonzero(coprime)[0]
            best = units[np.argmax(np.abs(disc[units]))]
            rows.append(
                {
                    "P": P,
                    "q": q,
                    "a_max": int(best),
                    "discrepancy": float(disc[best]),
                }
            )
    return rows


def profile_totals(rows) -> dict:
    totals: dict = {}
    for row in rows:
        totals[row["P"]] = totals.get(row["P"], 0.0) + abs(row["discrepancy"])
    return totals


def weighted_level_sum(
    lam: SieveWeights,
    N: int,
    P: float,
    weight: str,
    a: int = 1,
    table: PrimeTable | None = None,
) -> float:
    """sum over the support of lambda_d times the discrepancy at modulus d.

    Moduli not coprime to a are skipped (the underlying statistic carries
    the (d, a) = 1 restriction).
    """
    if len(lam.coefficients) > 10**4:
        raise ValueError("weight support budget is 10^4 moduli")
    w = weight_array(weight, N, table)
    total = 0.0
    for d, coeff in sorted(lam.coefficients.items()):
        if math.gcd(a, d) != 1:
            continue
        total += coeff * bv_discrepancy(N, d, a, P, weight, w=w)
    return total
