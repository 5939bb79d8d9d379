"""
Torus closures for the frequency systems eta_k = 1/3^{k-1} ("triadic") and
eta_k = 1/k ("1/k"), an avoiding offset beta for the model singular set

    Xi^0 = {alpha : alpha_k -> 0},

and finite-depth certificates. Everything is exact: coordinates are
``fractions.Fraction`` in [0, 1) and the enumeration runs on integers over
a common denominator.

In the triadic case ``3 alpha_{k+1} = alpha_k mod 1``, so an element is
alpha_1 together with the digits eps_k = 3 alpha_{k+1} - alpha_k in {0, 1, 2}.
The offset used here satisfies ``3 beta_{k+1} = beta_k + 1/2 mod 1``. Then
gamma = alpha + beta obeys ``3 gamma_{k+1} = gamma_k + 1/2`` and no two
consecutive gamma_k can both lie within 1/8 of 0, for any alpha.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd

KINDS = ("triadic", "1/k")
THRESHOLD = Fraction(1, 9)


def frac_mod1(x):
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def circle_distance_exact(x):
    r = frac_mod1(x)
    return min(r, 1 - r)


def base3_digits(x, depth):
    """First ``depth`` base-3 digits of x mod 1."""
    r = frac_mod1(x)
    out = []
    for _ in range(depth):
        r *= 3
        d = r.numerator // r.denominator
        out.append(int(d))
        r -= d
    return tuple(out)


@dataclass(frozen=True)
class PAdic3:
    """Truncated triadic integer eps_1 + 3 eps_2 + ... + 3^{N-1} eps_N."""

    digits: tuple

    def __post_init__(self):
        if any(d not in (0, 1, 2) for d in self.digits):
            raise ValueError("triadic digits must be 0, 1 or 2")
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))

    def prefix(self, k):
        return PAdic3(self.digits[:k])

    def value(self, k=None):
        k = len(self.digits) if k is None else k
        return sum(d * 3**i for i, d in enumerate(self.digits[:k]))


@dataclass(frozen=True)
class TorusElement:
    """alpha_1..alpha_N as exact rationals in [0, 1)."""

    kind: str
    alpha: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        object.__setattr__(self, "alpha", tuple(frac_mod1(a) for a in self.alpha))

    @property
    def N(self):
        return len(self.alpha)

    def __getitem__(self, k):
        """alpha_k, 1-based."""
        return self.alpha[k - 1]

    def __add__(self, other):
        if len(other.alpha) != self.N:
            raise ValueError("depths differ")
        return TorusElement(self.kind, tuple(a + b for a, b in zip(self.alpha, other.alpha)))

    @property
    def alpha1(self):
        return self.alpha[0]

    @property
    def adic(self):
        """Digits eps_k = 3 alpha_{k+1} - alpha_k (triadic kind only)."""
        if self.kind != "triadic":
            raise ValueError("adic digits exist for the triadic kind only")
        return PAdic3(tuple(int(3 * b - a) for a, b in zip(self.alpha, self.alpha[1:])))

    def to_json(self):
        return {"kind": self.kind, "alpha": [str(a) for a in self.alpha]}


def triadic_element(alpha1, digits):
    """alpha_{k+1} = (eps_k + alpha_k) / 3; depth len(digits) + 1."""
    a = [frac_mod1(alpha1)]
    for d in PAdic3(tuple(digits)).digits:
        a.append((d + a[-1]) / 3)
    return TorusElement("triadic", tuple(a))


def torus_sample(x, kind, N):
    """alpha_k = eta_k x mod 1 for k = 1..N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    x = Fraction(x)
    if kind == "triadic":
        return TorusElement(kind, tuple(x / 3 ** (k - 1) for k in range(1, N + 1)))
    if kind == "1/k":
        return TorusElement(kind, tuple(x / k for k in range(1, N + 1)))
    raise ValueError(f"kind must be one of {KINDS}")


def triadic_relation_ok(el: TorusElement):
    return all(frac_mod1(3 * b - a) == 0 for a, b in zip(el.alpha, el.alpha[1:]))


# avoiding offset ---------------------------------------------------------------------


@dataclass(frozen=True)
class AvoidingBeta:
    beta: TorusElement
    digit_table: tuple  # base-3 digits of each beta_k

    def shift_condition_ok(self):
        """beta_2^{(k+1)} != beta_1^{(k)} for every k < N."""
        t = self.digit_table
        return all(t[k][1] != t[k - 1][0] for k in range(1, len(t)))

    def to_json(self):
        return {
            "beta": [str(b) for b in self.beta.alpha],
            "digits": [list(r) for r in self.digit_table],
            "shift_condition": self.shift_condition_ok(),
        }


def construct_avoiding_beta(N, digits=None) -> AvoidingBeta:
    """beta_1 = 0, beta_{k+1} = (beta_k + 1/2) / 3, i.e. beta_k = (1 - 3^{1-k}) / 4.

    Each beta_k is 0.0202..._3 truncated towards 1/4, so its first digit is 0
    and its second digit is 2 (k >= 3) or 1 (k = 2): the shift condition holds.
    """
    if N < 3:
        raise ValueError("N must be >= 3")
    b = [Fraction(0)]
    for _ in range(N - 1):
        b.append((b[-1] + Fraction(1, 2)) / 3)
    depth = digits or N
    el = TorusElement("triadic", tuple(b))
    return AvoidingBeta(el, tuple(base3_digits(x, depth) for x in b))


def perturb_tail(ab: AvoidingBeta, start, new_digits):
    """Replace digits at positions >= ``start`` (1-based) of every beta_k.

    ``new_digits[k]`` is the replacement digit sequence for beta_{k+1}; digits
    beyond it are taken as 0.
    """
    rows = []
    vals = []
    for k, row in enumerate(ab.digit_table):
        head = list(row[: start - 1])
        tail = list(new_digits[k])
        full = tuple(head + tail)
        rows.append(full)
        vals.append(sum(Fraction(d, 3 ** (i + 1)) for i, d in enumerate(full)))
    return AvoidingBeta(TorusElement(ab.beta.kind, tuple(vals)), tuple(rows))


# certificate -------------------------------------------------------------------------


@dataclass(frozen=True)
class AvoidanceCertificate:
    depth: int
    threshold: Fraction
    checked: int
    failures: tuple  # (alpha1 numerator, prefix, tail kind) of failing elements
    max_first_witness: int
    min_best_distance: Fraction

    @property
    def ok(self):
        return not self.failures

    def to_json(self):
        return {
            "depth": self.depth,
            "threshold": str(self.threshold),
            "checked": self.checked,
            "failures": [list(map(str, f)) for f in self.failures],
            "max_first_witness": self.max_first_witness,
            "min_best_distance": str(self.min_best_distance),
            "ok": self.ok,
        }


def _common_denominator(beta: TorusElement, grid):
    d = 1
    for b in beta.alpha:
        d = d * b.denominator // gcd(d, b.denominator)
    d = d * grid // gcd(d, grid)
    return d * 3 ** (beta.N - 1)


def avoidance_certificate(ab: AvoidingBeta, depth=30, prefix_digits=6, grid=27, threshold=THRESHOLD):
    """Check every alpha = (j/grid; prefix; tail) for a k <= depth with
    circle-distance(alpha_k + beta_k, 0) >= threshold.

    Prefixes run over all 3^prefix_digits digit strings and j over the grid.
    Each prefix is continued to depth by three tails: all zeros, all twos,
    and a greedy tail that picks the digit bringing alpha_k + beta_k closest
    to 0 at each step.
    """
    beta = ab.beta
    if beta.N < depth:
        raise ValueError("beta is shallower than the requested depth")
    D = _common_denominator(TorusElement(beta.kind, beta.alpha[:depth]), grid)
    bnum = [int(b * D) for b in beta.alpha[:depth]]
    thr = threshold * D
    if thr.denominator != 1:
        D *= thr.denominator
        bnum = [x * thr.denominator for x in bnum]
        thr = threshold * D
    thr = int(thr)
    checked = 0
    failures = []
    worst_witness = 0
    min_best = None
    for j in range(grid):
        a1 = D * j // grid
        for pre in product((0, 1, 2), repeat=prefix_digits):
            for tail in ("zeros", "twos", "greedy"):
                checked += 1
                a = a1
                witness = None
                best = 0
                for k in range(1, depth + 1):
                    g = (a + bnum[k - 1]) % D
                    dist = min(g, D - g)
                    best = max(best, dist)
                    if witness is None and dist >= thr:
                        witness = k
                    if k == depth:
                        break
                    if k <= prefix_digits:
                        eps = pre[k - 1]
                    elif tail == "zeros":
                        eps = 0
                    elif tail == "twos":
                        eps = 2
                    else:
                        cands = [((e * D + a) // 3, e) for e in (0, 1, 2)]
                        eps = min(
                            cands, key=lambda c: min((c[0] + bnum[k]) % D, D - (c[0] + bnum[k]) % D)
                        )[1]
                    a, rem = divmod(eps * D + a, 3)
                    if rem:
                        raise ArithmeticError("common denominator too small")
                if witness is None:
                    failures.append((j, "".join(map(str, pre)), tail))
                else:
                    worst_witness = max(worst_witness, witness)
                min_best = best if min_best is None else min(min_best, best)
    return AvoidanceCertificate(depth, threshold, checked, tuple(failures), worst_witness, Fraction(min_best, D))


# model singular set --------------------------------------------------------------------


@dataclass(frozen=True)
class Xi0Verdict:
    consistent: bool
    witness: object  # first k in [K/2, K] with distance > tol, or None
    max_distance: float

    def to_json(self):
        return {"consistent": self.consistent, "witness": self.witness, "max_distance": float(self.max_distance)}


def _dist(x):
    if isinstance(x, (Fraction, int)):
        return circle_distance_exact(x)
    r = float(x) % 1.0
    return min(r, 1.0 - r)


def xi0_membership(alpha, tol, K):
    """Finite-depth proxy for alpha in Xi^0: max_{K/2 <= k <= K} ||alpha_k|| <= tol.

    ``alpha`` is a 1-based sequence given as a list/tuple (alpha[0] = alpha_1)
    or a :class:`TorusElement`.
    """
    seq = alpha.alpha if isinstance(alpha, TorusElement) else tuple(alpha)
    if len(seq) < K:
        raise ValueError(f"sequence has {len(seq)} terms, need K={K}")
    lo = max(1, K // 2)
    worst = 0
    witness = None
    for k in range(lo, K + 1):
        d = _dist(seq[k - 1])
        if d > worst:
            worst = d
        if witness is None and d > tol:
            witness = k
    return Xi0Verdict(witness is None, witness, worst)


# 1/k torus -----------------------------------------------------------------------------


def crt_consistency(table, N=None):
    """Number of pairs (n1 >= 2, n2 >= 1, n1 n2 <= N) with n1 alpha_{n1 n2} != alpha_{n2} mod 1.

    ``table`` maps k -> alpha_k (or is a 1-based sequence / TorusElement).
    """
    if isinstance(table, TorusElement):
        table = table.alpha
    if not isinstance(table, dict):
        table = {k: v for k, v in enumerate(table, start=1)}
    N = N or max(table)
    bad = 0
    for n2 in range(1, N + 1):
        for n1 in range(2, N // n2 + 1):
            if frac_mod1(n1 * Fraction(table[n1 * n2]) - Fraction(table[n2])) != 0:
                bad += 1
    return bad


def triadic_subsequence(el: TorusElement):
    """alpha_{3^{k-1}}, k = 1, 2, ...: a triadic element for the 1/k kind."""
    if el.kind != "1/k":
        raise ValueError("need a 1/k-kind element")
    out = []
    m = 1
    while m <= el.N:
        out.append(el[m])
        m *= 3
    return TorusElement("triadic", tuple(out))


@dataclass(frozen=True)
class SeriesReport:
    partial_sums: tuple
    tail_oscillation: Fraction

    def to_json(self):
        return {"partial_sums": [str(s) for s in self.partial_sums], "tail_oscillation": str(self.tail_oscillation)}


def series_partial_sums(alpha, K):
    """Partial sums of sum_k alpha_k / k with alpha_k lifted to [-1/2, 1/2).

    Diagnostic only; ``tail_oscillation`` is max - min over the second half.
    """
    seq = alpha.alpha if isinstance(alpha, TorusElement) else tuple(alpha)
    s = Fraction(0)
    sums = []
    for k in range(1, K + 1):
        a = frac_mod1(Fraction(seq[k - 1]) + Fraction(1, 2)) - Fraction(1, 2)
        s += a / k
        sums.append(s)
    half = sums[K // 2 :] or sums
    return SeriesReport(tuple(sums), max(half) - min(half))

