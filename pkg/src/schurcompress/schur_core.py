"""Representation-theoretic combinatorics for the Schur-Weyl block picture.

Everything in here is a pure function of its arguments: Young diagrams,
irrep and multiplicity dimensions (exact big integers), Schur polynomials
(float, via Jacobi-Trudi), SU(2) Clebsch-Gordan coefficients and Wigner
rotation matrices.  Half-integer angular momenta are passed around as
doubled integers (2j, 2m) so they stay exact and hashable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import ParameterError

SUM_TOL = 1e-12


@dataclass(frozen=True, order=True)
class YoungDiagram:
    """A partition of N into weakly decreasing rows (trailing zeros allowed).

    For qubits (two rows) the total-spin label j corresponds to the diagram
    ((N + 2j)/2, (N - 2j)/2); ``two_j`` recovers 2j = rows[0] - rows[1].
    """

    rows: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if any(r < 0 for r in rows):
            raise ParameterError(f"negative row length in {rows}")
        if any(rows[i] < rows[i + 1] for i in range(len(rows) - 1)):
            raise ParameterError(f"rows not weakly decreasing: {rows}")

    @property
    def boxes(self) -> int:
        return sum(self.rows)

    @property
    def num_rows(self) -> int:
        """Number of nonzero rows."""
        return sum(1 for r in self.rows if r > 0)

    @property
    def two_j(self) -> int:
        """Doubled total-spin label for two-row diagrams."""
        if len(self.rows) != 2:
            raise ParameterError("two_j is only defined for two-row diagrams")
        return self.rows[0] - self.rows[1]

    @classmethod
    def from_two_j(cls, n: int, two_j: int) -> "YoungDiagram":
        if two_j < 0 or two_j > n or (n - two_j) % 2:
            raise ParameterError(f"invalid spin label 2j={two_j} for N={n}")
        return cls(((n + two_j) // 2, (n - two_j) // 2))

    def padded(self, d: int) -> "YoungDiagram":
        if self.num_rows > d:
            raise ParameterError(f"{self.rows} has more than {d} nonzero rows")
        return YoungDiagram(tuple(self.rows[:d]) + (0,) * (d - len(self.rows)))

    def __repr__(self) -> str:
        return f"YoungDiagram({self.rows})"


@dataclass(frozen=True)
class Spectrum:
    """Sorted eigenvalue vector of the single-copy state.

    probs must be weakly decreasing, non-negative and sum to 1 within 1e-12.
    ``degeneracy_m`` counts repeated positive eigenvalues: m = sum_i mu_i with
    mu_i = #{j > i : p_j = p_i}, taken over positive entries only.
    """

    probs: tuple[float, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if not probs:
            raise ParameterError("empty spectrum")
        if any(p < 0 for p in probs):
            raise ParameterError(f"negative eigenvalue in {probs}")
        if any(probs[i] < probs[i + 1] for i in range(len(probs) - 1)):
            raise ParameterError(f"spectrum not sorted descending: {probs}")
        if abs(sum(probs) - 1.0) > SUM_TOL:
            raise ParameterError(f"spectrum sums to {sum(probs)!r}, not 1")

    @property
    def d(self) -> int:
        return len(self.probs)

    @property
    def rank(self) -> int:
        return sum(1 for p in self.probs if p > 0)

    @property
    def max_eigenvalue(self) -> float:
        return self.probs[0]

    @property
    def degeneracy_m(self) -> int:
        r = self.rank
        m = 0
        for i in range(r):
            m += sum(1 for j in range(i + 1, r) if _same_eigenvalue(self.probs[j], self.probs[i]))
        return m

    def positive(self) -> tuple[float, ...]:
        return tuple(p for p in self.probs if p > 0)


def _same_eigenvalue(a: float, b: float) -> bool:
    return abs(a - b) <= 1e-12


def spectrum_of(*probs: float) -> Spectrum:
    """Convenience constructor: sorts descending, renormalizes tiny drift."""
    vals = sorted((float(p) for p in probs), reverse=True)
    total = sum(vals)
    if abs(total - 1.0) > 1e-9:
        raise ParameterError(f"probabilities sum to {total!r}, not 1")
    return Spectrum(tuple(v / total for v in vals))


# ---------------------------------------------------------------------------
# Diagram enumeration and dimensions
# ---------------------------------------------------------------------------

def _partitions_at_most(n: int, max_part: int, parts_left: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    if parts_left == 0 or max_part == 0:
        return
    # smallest admissible first part keeps the remainder fillable
    lo = -(-n // parts_left)  # ceil(n / parts_left)
    for first in range(min(n, max_part), lo - 1, -1):
        for rest in _partitions_at_most(n - first, first, parts_left - 1):
            yield (first,) + rest


def enumerate_diagrams(n: int, d: int, r: int | None = None) -> list[YoungDiagram]:
    """All partitions of n into at most r parts, padded to d rows.

    Output is in lexicographically decreasing order; the count equals the
    number of partitions of n into at most r parts.
    """
    if r is None:
        r = d
    if n < 0:
        raise ParameterError(f"negative box count {n}")
    if r < 1 or r > d:
        raise ParameterError(f"need 1 <= r <= d, got r={r}, d={d}")
    return [YoungDiagram(p + (0,) * (d - len(p))) for p in _partitions_at_most(n, n, r)]


def irrep_dim(diagram: YoungDiagram, d: int) -> int:
    """Dimension of the GL(d) irrep labeled by the diagram (exact integer).

    Weyl formula: prod_{i<j} (l_i - l_j - i + j) / prod_{k<d} k!.
    """
    lam = diagram.padded(d).rows
    num = 1
    for i in range(d):
        for j in range(i + 1, d):
            num *= lam[i] - lam[j] + j - i
    den = 1
    for k in range(1, d):
        den *= math.factorial(k)
    q, rem = divmod(num, den)
    assert rem == 0, "Weyl numerator must be divisible by the superfactorial"
    return q


def multiplicity_dim(diagram: YoungDiagram) -> int:
    """Dimension of the symmetric-group multiplicity space (exact integer).

    Equals the number of standard Young tableaux of the shape:
    N! * prod_{i<j} (l_i - l_j + j - i) / prod_i (l_i + d - i)!.
    """
    lam = diagram.rows
    d = len(lam)
    n = sum(lam)
    num = math.factorial(n)
    for i in range(d):
        for j in range(i + 1, d):
            num *= lam[i] - lam[j] + j - i
    den = 1
    for i in range(d):
        den *= math.factorial(lam[i] + d - 1 - i)
    q, rem = divmod(num, den)
    assert rem == 0, "multiplicity formula must divide exactly"
    return q


def qubit_multiplicity(n: int, two_j: int) -> int:
    """m_j for two-row diagrams: C(N, (N-2j)/2) - C(N, (N-2j)/2 - 1)."""
    k = (n - two_j) // 2
    low = math.comb(n, k - 1) if k >= 1 else 0
    return math.comb(n, k) - low


# ---------------------------------------------------------------------------
# Semistandard tableaux and Schur polynomials
# ---------------------------------------------------------------------------

def semistandard_tableaux(diagram: YoungDiagram, d: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Yield all semistandard fillings with entries 1..d, in a fixed order.

    Rows weakly increase, columns strictly increase.  The order is
    lexicographic in the row-reading word, which downstream code relies on
    as the canonical basis order for diagonal qudit blocks.
    """
    lam = [r for r in diagram.rows if r > 0]
    if not lam:
        yield ()
        return
    if len(lam) > d:
        return
    rows: list[list[int]] = [[0] * r for r in lam]

    def fill(i: int, j: int) -> Iterator[tuple[tuple[int, ...], ...]]:
        if i == len(lam):
            yield tuple(tuple(row) for row in rows)
            return
        ni, nj = (i, j + 1) if j + 1 < lam[i] else (i + 1, 0)
        lo = 1
        if j > 0:
            lo = max(lo, rows[i][j - 1])
        if i > 0:
            lo = max(lo, rows[i - 1][j] + 1)
        for v in range(lo, d + 1):
            rows[i][j] = v
            yield from fill(ni, nj)
        rows[i][j] = 0

    yield from fill(0, 0)


def tableau_content(tableau: Sequence[Sequence[int]], d: int) -> tuple[int, ...]:
    """Count of each entry 1..d in the tableau."""
    counts = [0] * d
    for row in tableau:
        for v in row:
            counts[v - 1] += 1
    return tuple(counts)


def complete_homogeneous(values: Sequence[float], degree: int) -> list[float]:
    """h_0..h_degree of the given variables, by the one-variable-at-a-time DP."""
    h = [0.0] * (degree + 1)
    h[0] = 1.0
    for x in values:
        for k in range(1, degree + 1):
            h[k] += x * h[k - 1]
    return h


def _det_small(mat: list[list[float]]) -> float:
    n = len(mat)
    if n == 1:
        return mat[0][0]
    if n == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    total = 0.0
    for col in range(n):
        if mat[0][col] == 0.0:
            continue
        minor = [row[:col] + row[col + 1 :] for row in mat[1:]]
        total += (-1) ** col * mat[0][col] * _det_small(minor)
    return total


def schur_polynomial(diagram: YoungDiagram, spectrum: Spectrum) -> float:
    """s_lambda evaluated at the spectrum, via the Jacobi-Trudi determinant.

    det(h_{l_i - i + j}) stays finite for degenerate spectra, unlike the
    bialternant quotient whose Vandermonde denominator vanishes there.
    Returns 0 when the diagram has more nonzero rows than the spectrum has
    positive entries.
    """
    lam = [r for r in diagram.rows if r > 0]
    if not lam:
        return 1.0
    ell = len(lam)
    values = spectrum.positive()
    if ell > len(values):
        return 0.0
    h = complete_homogeneous(values, lam[0] + ell - 1)

    def h_at(k: int) -> float:
        if k < 0:
            return 0.0
        return h[k]

    mat = [[h_at(lam[i] - (i + 1) + (j + 1)) for j in range(ell)] for i in range(ell)]
    return _det_small(mat)


def schur_polynomial_brute(diagram: YoungDiagram, spectrum: Spectrum) -> float:
    """Independent evaluation: sum the content monomial over all SSYT.

    Exponential in the diagram size; meant as a test oracle, kept in the
    package so the tableau order and the polynomial can be audited together.
    """
    d = spectrum.d
    total = 0.0
    for tab in semistandard_tableaux(diagram, d):
        term = 1.0
        for v, count in enumerate(tableau_content(tab, d)):
            term *= spectrum.probs[v] ** count
        total += term
    return total


# ---------------------------------------------------------------------------
# SU(2) Clebsch-Gordan coefficients (doubled-integer quantum numbers)
# ---------------------------------------------------------------------------

def _check_momentum(two_j: int, two_m: int, name: str) -> None:
    if two_j < 0:
        raise ParameterError(f"{name}: negative 2j={two_j}")
    if abs(two_m) > two_j or (two_j - two_m) % 2:
        raise ParameterError(f"{name}: invalid 2m={two_m} for 2j={two_j}")


def _cg_bounds(two_j1, two_m1, two_j2, two_m2, two_jt):
    """Triangle checks plus the summation range of the Racah single-sum form."""
    if (two_j1 + two_j2 + two_jt) % 2:
        raise ParameterError("couplings 2j1+2j2+2J must be even")
    if two_jt < abs(two_j1 - two_j2) or two_jt > two_j1 + two_j2:
        raise ParameterError(f"triangle violated: 2j1={two_j1}, 2j2={two_j2}, 2J={two_jt}")
    a = (two_j1 + two_j2 - two_jt) // 2
    k_lo = max(0, (two_j2 - two_jt - two_m1) // 2, (two_j1 - two_jt + two_m2) // 2)
    k_hi = min(a, (two_j1 - two_m1) // 2, (two_j2 + two_m2) // 2)
    return a, k_lo, k_hi


def clebsch_gordan(two_j1: int, two_m1: int, two_j2: int, two_m2: int,
                   two_jt: int, two_mt: int) -> float:
    """<j1 m1; j2 m2 | J M> in the Condon-Shortley convention.

    Racah's single-sum factorial formula, evaluated in log space with sign
    tracking; stable through 2j ~ 60.  Returns 0 when M != m1 + m2.
    """
    _check_momentum(two_j1, two_m1, "j1")
    _check_momentum(two_j2, two_m2, "j2")
    _check_momentum(two_jt, two_mt, "J")
    if two_mt != two_m1 + two_m2:
        return 0.0
    a, k_lo, k_hi = _cg_bounds(two_j1, two_m1, two_j2, two_m2, two_jt)
    if k_lo > k_hi:
        return 0.0

    def lf(two_x: int) -> float:
        return _log_factorial(two_x // 2)

    log_pref = (
        math.log(two_jt + 1)
        + lf(two_j1 + two_j2 - two_jt) + lf(two_j1 - two_j2 + two_jt)
        + lf(-two_j1 + two_j2 + two_jt) - lf(two_j1 + two_j2 + two_jt + 2)
        + lf(two_j1 + two_m1) + lf(two_j1 - two_m1)
        + lf(two_j2 + two_m2) + lf(two_j2 - two_m2)
        + lf(two_jt + two_mt) + lf(two_jt - two_mt)
    )
    logs = []
    for k in range(k_lo, k_hi + 1):
        log_den = (
            _log_factorial(k) + _log_factorial(a - k)
            + _log_factorial((two_j1 - two_m1) // 2 - k)
            + _log_factorial((two_j2 + two_m2) // 2 - k)
            + _log_factorial((two_jt - two_j2 + two_m1) // 2 + k)
            + _log_factorial((two_jt - two_j1 - two_m2) // 2 + k)
        )
        logs.append((k, -log_den))
    peak = max(v for _, v in logs)
    acc = 0.0
    for k, v in logs:
        acc += (-1.0) ** k * math.exp(v - peak)
    if acc == 0.0:
        return 0.0
    return math.copysign(math.exp(0.5 * log_pref + peak + math.log(abs(acc))), acc)


def clebsch_gordan_signed_square(two_j1: int, two_m1: int, two_j2: int, two_m2: int,
                                 two_jt: int, two_mt: int) -> Fraction:
    """sign(CG) * CG^2 as an exact rational: the test oracle for the float path."""
    _check_momentum(two_j1, two_m1, "j1")
    _check_momentum(two_j2, two_m2, "j2")
    _check_momentum(two_jt, two_mt, "J")
    if two_mt != two_m1 + two_m2:
        return Fraction(0)
    a, k_lo, k_hi = _cg_bounds(two_j1, two_m1, two_j2, two_m2, two_jt)
    if k_lo > k_hi:
        return Fraction(0)

    def f(two_x: int) -> int:
        return math.factorial(two_x // 2)

    pref = Fraction(
        (two_jt + 1)
        * f(two_j1 + two_j2 - two_jt) * f(two_j1 - two_j2 + two_jt)
        * f(-two_j1 + two_j2 + two_jt)
        * f(two_j1 + two_m1) * f(two_j1 - two_m1)
        * f(two_j2 + two_m2) * f(two_j2 - two_m2)
        * f(two_jt + two_mt) * f(two_jt - two_mt),
        f(two_j1 + two_j2 + two_jt + 2),
    )
    acc = Fraction(0)
    for k in range(k_lo, k_hi + 1):
        den = (
            math.factorial(k) * math.factorial(a - k)
            * math.factorial((two_j1 - two_m1) // 2 - k)
            * math.factorial((two_j2 + two_m2) // 2 - k)
            * math.factorial((two_jt - two_j2 + two_m1) // 2 + k)
            * math.factorial((two_jt - two_j1 - two_m2) // 2 + k)
        )
        acc += Fraction((-1) ** k, den)
    square = pref * acc * acc
    return square if acc >= 0 else -square


@lru_cache(maxsize=None)
def _log_factorial(n: int) -> float:
    return math.log(math.factorial(n)) if n > 1 else 0.0


# ---------------------------------------------------------------------------
# Wigner rotation matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WignerRotation:
    """Euler angles (z-y-z) plus the doubled spin of the target irrep."""

    alpha: float
    beta: float
    gamma: float
    two_j: int

    def __post_init__(self):
        if self.two_j < 0:
            raise ParameterError(f"negative 2j={self.two_j}")


def wigner_small_d(two_j: int, beta: float) -> np.ndarray:
    """The real rotation-about-y matrix d^j(beta), rows/cols in ascending m."""
    dim = two_j + 1
    out = np.zeros((dim, dim))
    c = math.cos(beta / 2.0)
    s = math.sin(beta / 2.0)
    for ip in range(dim):
        two_mp = -two_j + 2 * ip
        for im in range(dim):
            two_m = -two_j + 2 * im
            jpm = (two_j + two_m) // 2
            jmm = (two_j - two_m) // 2
            jpmp = (two_j + two_mp) // 2
            jmmp = (two_j - two_mp) // 2
            pref = math.sqrt(
                math.factorial(jpmp) * math.factorial(jmmp)
                * math.factorial(jpm) * math.factorial(jmm)
            )
            k_lo = max(0, (two_m - two_mp) // 2)
            k_hi = min(jpm, jmmp)
            val = 0.0
            for k in range(k_lo, k_hi + 1):
                den = (
                    math.factorial(jpm - k) * math.factorial(k)
                    * math.factorial((two_mp - two_m) // 2 + k)
                    * math.factorial(jmmp - k)
                )
                cpow = (2 * two_j + two_m - two_mp) // 2 - 2 * k
                spow = (two_mp - two_m) // 2 + 2 * k
                val += (-1.0) ** k * (c ** cpow) * (s ** spow) / den
            out[ip, im] = pref * val
    return out


def wigner_d_matrix(rotation: WignerRotation) -> np.ndarray:
    """Full (2j+1)-dimensional unitary D(alpha, beta, gamma), ascending m.

    D = exp(-i alpha Jz) d(beta) exp(-i gamma Jz).
    """
    two_j = rotation.two_j
    small = wigner_small_d(two_j, rotation.beta)
    ms = np.arange(-two_j, two_j + 1, 2) / 2.0
    left = np.exp(-1j * rotation.alpha * ms)
    right = np.exp(-1j * rotation.gamma * ms)
    return left[:, None] * small * right[None, :]
