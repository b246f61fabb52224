"""From the Frobenius matrix to Q(t), point counts and the group order.

Convention: columns of the Frobenius matrix are images of basis forms,
M = Phi * Phi^sigma * ... * Phi^(sigma^(n-1)) is the matrix of the q-power
Frobenius, and Q(t) = det(I - tM).  The residues of a_1..a_g are lifted to
integers inside the Weil windows; the rest follows from the functional
equation a_(g+i) = q^i a_(g-i).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .curve import CurveSpec, validate_curve
from .errors import InconsistentResult, InvalidParameters, LiftAmbiguous, NotRational, PrecisionError
from .linalg import berkowitz, mat_mul
from .padic import ZqElem, ceil_log
from .reduction import BasisVector, FrobMatrix, frobenius_matrix

_MAX_REPLANS = 4


@dataclass(frozen=True)
class PrecisionPlan:
    """Digits for one run.

    N is the target precision that pins every a_i, ``guard`` the extra
    working digits (``denominator_digits`` of them reserved for the
    negative valuations Phi can have when p <= 2g+1), K the truncation
    order of the Frobenius series.
    """

    N: int
    guard: int
    K: int
    denominator_digits: int = 0

    @property
    def Nw(self) -> int:
        return self.N + self.guard


def _binom(n, k):
    return math.comb(n, k)


def minimal_N(g: int, q: int, p: int) -> int:
    """Least N with p^N > 2 C(2g,g) q^(g/2), compared on squares to stay exact."""
    bound_sq = 4 * _binom(2 * g, g) ** 2 * q**g
    N = 1
    while p ** (2 * N) <= bound_sq:
        N += 1
    return N


def guard_needed(g: int, p: int, K: int) -> int:
    J = (p * (2 * K + 1) - 1) // 2
    return ceil_log((2 * g + 1) * (J + 1), p) + ceil_log(2 * J + 1, p) + 1


def required_precision(
    g: int,
    p: int,
    n: int = 1,
    *,
    N: int | None = None,
    guard: int | str | None = None,
    K: int | None = None,
    denominator_digits: int = 0,
) -> PrecisionPlan:
    """Smallest plan satisfying the precision inequalities, with optional overrides.

    ``guard`` may be an absolute digit count or "+k" (k digits over the
    minimum).  Overrides that violate an inequality raise InvalidParameters.
    The minimal guard is found by iterating K = Nw - 1 to a fixed point.
    """
    if g < 1:
        raise InvalidParameters("genus must be >= 1")
    q = p**n
    N0 = minimal_N(g, q, p)
    if N is None:
        N = N0
    elif N < N0:
        raise InvalidParameters(f"N = {N} does not pin the coefficients: need N >= {N0}")

    extra_guard = 0
    fixed = None
    if isinstance(guard, str):
        text = guard.strip()
        if not text.startswith("+") or not text[1:].isdigit():
            raise InvalidParameters(f"guard {guard!r} must be an integer or +k")
        extra_guard = int(text[1:])
    elif guard is not None:
        fixed = int(guard)

    def k_for(gd):
        return K if K is not None else N + gd - 1

    gd = denominator_digits
    while True:
        need = guard_needed(g, p, k_for(gd)) + denominator_digits + extra_guard
        if need <= gd:
            break
        gd = need
    if fixed is not None:
        required = guard_needed(g, p, k_for(fixed)) + denominator_digits
        if fixed < required:
            raise InvalidParameters(f"guard = {fixed} is below the required {required} digits")
        gd = fixed
    Kf = k_for(gd)
    if Kf < N + gd - 1:
        raise InvalidParameters(f"truncation K = {Kf} is below Nw - 1 = {N + gd - 1}")
    return PrecisionPlan(N, gd, Kf, denominator_digits)


def _sigma_matrix(A, power: int):
    out = A
    for _ in range(power):
        out = [[x.sigma() for x in row] for row in out]
    return out


def _matrix_to_frob(rows, template: FrobMatrix, denom_exp: int) -> FrobMatrix:
    d = len(rows)
    cols = tuple(BasisVector(tuple(rows[i][j] for i in range(d)), denom_exp) for j in range(d))
    return FrobMatrix(cols, template.prec, denom_exp, template.shift, template.K, template.loss, template.basis)


def q_power_matrix(phi: FrobMatrix, n: int) -> FrobMatrix:
    """Phi * Phi^sigma * ... * Phi^(sigma^(n-1)), the q-power Frobenius.

    With columns as images, F^n = F o ... o F and F is sigma-semilinear, so
    the matrix of F^n is the product above (left to right).
    """
    if n == 1:
        return phi
    A = phi.entries()
    M = A
    for k in range(1, n):
        M = mat_mul(M, _sigma_matrix(A, k))
    return _matrix_to_frob(M, phi, n * phi.denom_exp)


def charpoly(M: FrobMatrix) -> list[ZqElem]:
    """Scaled coefficients c_i of det(I - tM): c_i = p^(i e) * (true c_i)."""
    E = M.entries()
    return berkowitz(E, E[0][0] * 0 + 1)


def lift_coefficient(residue: int, modulus: int, bound_sq: int) -> int:
    """Unique integer a = residue mod modulus with a^2 <= bound_sq."""
    r = residue % modulus
    root = math.isqrt(bound_sq)
    lo = r - ((r + root) // modulus) * modulus
    candidates = [a for a in range(lo, root + 1, modulus) if a * a <= bound_sq]
    if len(candidates) != 1:
        raise LiftAmbiguous(
            f"residue {r} mod {modulus}: {len(candidates)} candidates with a^2 <= {bound_sq}"
        )
    return candidates[0]


def _rational_residue(c: ZqElem, shift: int, N: int) -> int:
    """The F_p-rational value c / p^shift mod p^N; asserts it lies in Z_p."""
    p = c.params.p
    d = p**shift
    mod = p**N
    vals = []
    for x in c.coeffs:
        if x % d:
            raise PrecisionError(f"coefficient not divisible by the expected p^{shift}")
        vals.append((x // d) % mod)
    if any(vals[1:]):
        raise NotRational(f"coefficient has non-zero extension part {vals[1:]} mod p^{N}")
    return vals[0]


def lift_Q(M: FrobMatrix, plan: PrecisionPlan, q: int) -> list[int]:
    """Integer Q(t) from the q-power matrix, via the Weil windows."""
    d = M.size
    g = d // 2
    c = charpoly(M)
    e = M.denom_exp
    p = M.params.p
    a = [1]
    for i in range(1, g + 1):
        r = _rational_residue(c[i], e * i, plan.N)
        a.append(lift_coefficient(r, p**plan.N, _binom(2 * g, i) ** 2 * q**i))
    for i in range(1, g + 1):
        a.append(q**i * a[g - i])
    det = _rational_residue(c[d], e * d, plan.N)
    if det != q**g % p**plan.N:
        raise InconsistentResult(f"det of the q-power matrix is {det}, expected q^g mod p^{plan.N}")
    return a


def det_residue(M: FrobMatrix, N: int) -> int:
    """det(M) mod p^N as an integer (M must have a rational determinant)."""
    c = charpoly(M)
    return _rational_residue(c[-1], M.denom_exp * M.size, N)


def counts_from_Q(Q, q: int, m: int) -> int:
    """#X(F_(q^m)) = q^m + 1 - s_m, s_m by Newton's identities."""
    a = list(Q) + [0] * max(0, m + 1 - len(Q))
    s = [0] * (m + 1)
    for k in range(1, m + 1):
        s[k] = -(k * a[k] + sum(a[j] * s[k - j] for j in range(1, k)))
    return q**m + 1 - s[m]


def check_invariants(Q, g: int, q: int) -> None:
    """Hard checks on an emitted Q; raises InconsistentResult."""
    if len(Q) != 2 * g + 1 or Q[0] != 1:
        raise InconsistentResult(f"Q must have degree 2g and Q(0) = 1, got {Q}")
    for i in range(1, g + 1):
        if Q[g + i] != q**i * Q[g - i]:
            raise InconsistentResult(f"functional equation fails at i = {i}")
    for i in range(1, 2 * g + 1):
        if Q[i] ** 2 > _binom(2 * g, i) ** 2 * q**i:
            raise InconsistentResult(f"Weil bound fails for a_{i} = {Q[i]}")
    if sum(Q) < 1:
        raise InconsistentResult(f"group order Q(1) = {sum(Q)} is not positive")


@dataclass(frozen=True)
class ZetaResult:
    """Z(X, t) = Q(t) / ((1-t)(1-qt)) with derived data."""

    Q: tuple[int, ...]
    q: int
    g: int
    plan: PrecisionPlan
    counts: tuple[int, ...] = ()
    timings: dict = field(default_factory=dict, compare=False)
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        check_invariants(self.Q, self.g, self.q)

    @property
    def group_order(self) -> int:
        return sum(self.Q)

    def count(self, m: int) -> int:
        return counts_from_Q(self.Q, self.q, m)


def _plan_for(spec: CurveSpec, plan, overrides, denominator_digits: int) -> PrecisionPlan:
    if plan is not None and denominator_digits <= plan.denominator_digits:
        return plan
    return required_precision(spec.g, spec.p, spec.n, denominator_digits=denominator_digits, **overrides)


def assemble_zeta(
    spec: CurveSpec,
    plan: PrecisionPlan | None = None,
    basis: str = "y1",
    workers: int = 1,
    **overrides,
) -> ZetaResult:
    """Full pipeline: plan, lift, Phi, q-power matrix, Q, counts.

    When Phi turns out to have a denominator p^e (possible for p <= 2g+1)
    the plan is widened by (gn - 1) e digits and the run repeated, since
    the i-th charpoly coefficient of the q-power matrix can lose that much.
    ``overrides`` are passed to :func:`required_precision` (N, guard, K).
    """
    g, n, q = spec.g, spec.n, spec.q
    validate_curve(spec, 1)
    timings = {}
    start = time.perf_counter()
    plan = _plan_for(spec, plan, overrides, 0)
    for _ in range(_MAX_REPLANS):
        t0 = time.perf_counter()
        curve = validate_curve(spec, plan.Nw)
        phi = frobenius_matrix(curve, K=plan.K, basis=basis, workers=workers)
        timings["frobenius"] = time.perf_counter() - t0
        need = (g * n - 1) * phi.denom_exp
        if need <= plan.denominator_digits:
            break
        plan = _plan_for(spec, None, overrides, need)
    else:
        raise PrecisionError("precision plan did not stabilise")
    t0 = time.perf_counter()
    M = q_power_matrix(phi, n)
    Q = lift_Q(M, plan, q)
    timings["charpoly"] = time.perf_counter() - t0
    counts = tuple(counts_from_Q(Q, q, m) for m in range(1, g + 2))
    timings["total"] = time.perf_counter() - start
    diagnostics = {
        "det_mod_pN": det_residue(M, plan.N),
        "denominator_exponent": phi.denom_exp,
        "division_shift": phi.shift,
        "max_division_loss": phi.loss,
    }
    return ZetaResult(tuple(Q), q, g, plan, counts, timings, diagnostics)
