"""Hecke operator T_2 on S_k(1) and desk-scale evidence for Maeda's conjecture.

The cusp space is spanned by the Victor Miller basis f_i = q^i + O(q^(d_k+1)),
built from Delta^j E_4^a E_6^b monomials and cleared by integer row
operations. T_2 acts on q-expansions by

    a_n(T_2 f) = a_{2n}(f) + 2^(k-1) a_{n/2}(f)    (second term for even n only),

and the echelon shape lets the matrix be read off coefficients 1..d_k.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor, as_completed
from enum import Enum

from pydantic import model_validator

from ..arithmetic.chebotarev import GaloisCertificate, certify_symmetric_group
from ..arithmetic.ffpoly import IntPolynomial
from ..config import settings
from ..density.model import dim_cusp_level1
from ..errors import ExactnessError, PrecisionTooSmallError, PreconditionError
from ..schemas import BigInt, LabModel
from .charpoly import charpoly
from .qexp import QExpansion, delta_form, eisenstein, series_mul, series_pow

logger = logging.getLogger(__name__)


class MaedaVerdict(str, Enum):
    CONSISTENT = "consistent"
    INCONSISTENT = "inconsistent"
    INCONCLUSIVE = "inconclusive"


class HeckeCharPoly(LabModel):
    """Characteristic polynomial of T_2 on S_k(1), constant term first."""

    k: int
    dk: int
    coeffs: tuple[BigInt, ...]

    @model_validator(mode="after")
    def _monic(self) -> "HeckeCharPoly":
        if len(self.coeffs) != self.dk + 1 or self.coeffs[-1] != 1:
            raise ValueError("charpoly must be monic of degree dk")
        return self

    @property
    def polynomial(self) -> IntPolynomial:
        return IntPolynomial(coeffs=self.coeffs)


class MaedaEvidence(LabModel):
    k: int
    dk: int
    charpoly: HeckeCharPoly
    irreducible: bool
    irreducible_witness: int | None = None
    symmetric_group: GaloisCertificate
    verdict: MaedaVerdict


# ---------------------------------------------------------------------------
# Basis
# ---------------------------------------------------------------------------

def _eisenstein_exponents(k: int, dk: int) -> tuple[int, int]:
    """(a, b) with 4a + 6b = k - 12 dk, the weight left over after Delta^dk."""
    rest = k - 12 * dk
    b = 0 if rest % 4 == 0 else 1
    return (rest - 6 * b) // 4, b


def victor_miller_basis(k: int, prec: int) -> list[QExpansion]:
    """Echelonized integral basis of S_k(1) to precision prec."""
    if k < 12 or k % 2:
        raise PreconditionError(f"weight must be even and >= 12, got {k}")
    dk = dim_cusp_level1(k)
    if dk == 0:
        return []
    if prec < 2 * dk + 2:
        raise PrecisionTooSmallError(f"precision {prec} < 2*d_k + 2 = {2 * dk + 2} for k={k}")

    a, b = _eisenstein_exponents(k, dk)
    delta = delta_form(prec).coeffs
    e4, e6 = eisenstein(4, prec).coeffs, eisenstein(6, prec).coeffs
    tail = series_mul(series_pow(e4, a, prec), series_pow(e6, b, prec), prec)
    e4_cubed = series_pow(e4, 3, prec)

    # g_j = Delta^j * E_4^(3(dk - j)) * E_4^a * E_6^b = q^j + O(q^(j+1))
    fillers = [[1] + [0] * prec]
    for _ in range(dk - 1):
        fillers.append(series_mul(fillers[-1], e4_cubed, prec))
    rows: list[list[int]] = []
    delta_power = list(delta)
    for j in range(1, dk + 1):
        rows.append(series_mul(series_mul(delta_power, fillers[dk - j], prec), tail, prec))
        if j < dk:
            delta_power = series_mul(delta_power, delta, prec)

    # clear coefficients j+1..dk of row j, bottom row first
    for i in range(dk - 1, -1, -1):
        row = rows[i]
        if row[i + 1] != 1 or any(row[1 : i + 1]):
            raise ExactnessError(f"basis monomial {i + 1} is not q^{i + 1} + O(q^{i + 2})")
        for m in range(i + 1, dk):
            c = row[m + 1]
            if c:
                lower = rows[m]
                rows[i] = row = [x - c * y for x, y in zip(row, lower)]
    logger.debug("Victor Miller basis for k=%d: %d forms at precision %d", k, dk, prec)
    return [QExpansion(weight=k, coeffs=tuple(r), prec=prec) for r in rows]


# ---------------------------------------------------------------------------
# Hecke matrix
# ---------------------------------------------------------------------------

def _t2_coefficients(f: QExpansion, k: int, n_max: int) -> list[int]:
    """a_1..a_n_max of T_2 f."""
    scale = 1 << (k - 1)
    return [f[2 * n] + (scale * f[n // 2] if n % 2 == 0 else 0) for n in range(1, n_max + 1)]


def hecke_matrix(k: int, prec: int | None = None) -> list[list[int]]:
    """Row i holds the coordinates of T_2 f_i in the basis f_1..f_dk."""
    dk = dim_cusp_level1(k)
    prec = 4 * dk + 4 if prec is None else prec
    basis = victor_miller_basis(k, prec)
    return [_t2_coefficients(f, k, dk) for f in basis]


def t2_charpoly(k: int, prec: int | None = None) -> HeckeCharPoly:
    matrix = hecke_matrix(k, prec)
    coeffs = charpoly(matrix)
    return HeckeCharPoly(k=k, dk=len(matrix), coeffs=tuple(coeffs))


# ---------------------------------------------------------------------------
# Evidence
# ---------------------------------------------------------------------------

def maeda_evidence(k: int, prime_budget: int | None = None) -> MaedaEvidence:
    """Irreducibility and S_dk witnesses for the T_2 charpoly at weight k."""
    dk = dim_cusp_level1(k)
    if dk < 1:
        raise PreconditionError(f"S_{k}(1) is zero")
    poly = t2_charpoly(k)
    certificate = certify_symmetric_group(poly.polynomial, prime_budget)
    if dk == 1:
        irreducible, witness = True, None
    else:
        witness = certificate.witnesses.get("transitive")
        irreducible = witness is not None
    verdict = MaedaVerdict.CONSISTENT if irreducible and certificate.certified else MaedaVerdict.INCONCLUSIVE
    logger.info("Weight %d (d_k=%d): %s", k, dk, verdict.value)
    return MaedaEvidence(
        k=k,
        dk=dk,
        charpoly=poly,
        irreducible=irreducible,
        irreducible_witness=witness,
        symmetric_group=certificate,
        verdict=verdict,
    )


def parse_weight_range(text: str) -> list[int]:
    """"12..200" or "12,24,36" to the even weights with nonzero cusp space."""
    if ".." in text:
        lo, _, hi = text.partition("..")
        try:
            weights = range(int(lo), int(hi) + 1)
        except ValueError as exc:
            raise PreconditionError(f"bad weight range {text!r}") from exc
    else:
        try:
            weights = [int(part) for part in text.split(",")]
        except ValueError as exc:
            raise PreconditionError(f"bad weight list {text!r}") from exc
    return [k for k in weights if k >= 12 and k % 2 == 0 and dim_cusp_level1(k) > 0]


def maeda_sweep(
    weights: Sequence[int], prime_budget: int | None = None, workers: int | None = None
) -> list[MaedaEvidence]:
    """maeda_evidence for every weight, returned in weight order."""
    workers = workers or settings.workers
    ordered = sorted(set(weights))
    if workers <= 1 or len(ordered) <= 1:
        return [maeda_evidence(k, prime_budget) for k in ordered]
    by_weight = {}
    with ProcessPoolExecutor(max_workers=workers) as ex:
        futures = {ex.submit(maeda_evidence, k, prime_budget): k for k in ordered}
        for fut in as_completed(futures):
            by_weight[futures[fut]] = fut.result()
    return [by_weight[k] for k in ordered]
