"""
Finite-gap spectral sets and the hyperelliptic curve w^2 = T(z).

A :class:`GapSet` stores gaps in decreasing order, ``(a_1, b_1)`` being the
gap farthest from the origin::

    0 < a_n < b_n < a_{n-1} < ... < a_1 < b_1

so the bands are ``[0, a_n], [b_n, a_{n-1}], ..., [b_1, inf)``. Band ``j``
(for ``1 <= j <= n``) is the band directly below gap ``j``.

Branch of sqrt(T)
-----------------
Each linear factor of T gets the root ``f_c(z) = i*sqrt(c - z)`` (principal
square root), which has its cut on ``[c, inf)`` and equals ``+sqrt(x - c)``
on the top lip of that ray. The product of these factors is analytic off
``[0, inf)`` except across the bands, is real and positive on the top lip
of ``[b_1, inf)``, and on the top lip of the real axis::

    band j      : sqrt(T) = (-1)^j |T|^{1/2}
    gap j       : sqrt(T) = i (-1)^{j-1} |T|^{1/2}
    (-inf, 0)   : sqrt(T) = i (-1)^n |T|^{1/2}

A global sign (``GapSet.sqrt_sign``) is then calibrated so that
``R_{D_0}(z) = i prod(z - b_j) / (2 sqrt(T(z)))`` is positive on the negative
axis. With the factorization above the calibrated sign is +1; it is kept
explicit so that every real-line formula below reads it instead of assuming.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np


class GapSetError(ValueError):
    pass


@dataclass(frozen=True)
class GapSet:
    gaps: tuple = ()

    def __post_init__(self):
        gaps = tuple(sorted(((float(a), float(b)) for a, b in self.gaps), reverse=True))
        object.__setattr__(self, "gaps", gaps)
        prev = np.inf
        for a, b in gaps:
            if not (np.isfinite(a) and np.isfinite(b)):
                raise GapSetError("gap endpoints must be finite")
            if not (0.0 < a < b):
                raise GapSetError(f"gap ({a}, {b}) must satisfy 0 < a < b")
            if not b < prev:
                raise GapSetError(f"gap ({a}, {b}) overlaps its neighbour")
            prev = a

    # basic views -------------------------------------------------------------

    @property
    def n(self):
        return len(self.gaps)

    @cached_property
    def a(self):
        return np.array([g[0] for g in self.gaps])

    @cached_property
    def b(self):
        return np.array([g[1] for g in self.gaps])

    @cached_property
    def roots(self):
        """All branch points 0, a_k, b_k (ascending)."""
        return np.sort(np.concatenate([[0.0], self.a, self.b]))

    def band(self, j):
        """Closed band below gap ``j`` (1-based), ``[b_{j+1}, a_j]`` with b_{n+1}=0."""
        lo = self.b[j] if j < self.n else 0.0
        return lo, self.a[j - 1]

    def gap(self, j):
        return self.gaps[j - 1]

    def scaled(self, s):
        return GapSet(tuple((s * a, s * b) for a, b in self.gaps))

    def to_json(self):
        return {"gaps": [[a, b] for a, b in self.gaps]}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, dict):
            obj = obj.get("gaps")
        if not isinstance(obj, (list, tuple)):
            raise GapSetError("GapSet JSON needs a 'gaps' list")
        pairs = []
        for item in obj:
            if not (isinstance(item, (list, tuple)) and len(item) == 2):
                raise GapSetError(f"malformed gap entry {item!r}")
            pairs.append((float(item[0]), float(item[1])))
        return cls(tuple(pairs))

    # locating real points ------------------------------------------------------

    def locate(self, x):
        """Classify a real point.

        Returns ``("gap", j)``, ``("band", j)``, ``("neg", 0)`` or
        ``("top", 0)`` for the unbounded band ``[b_1, inf)``.
        Band ``j`` for 1 <= j <= n is the band below gap j. Branch points are
        reported as belonging to the adjacent band.
        """
        x = float(x)
        if x < 0:
            return ("neg", 0)
        if self.n == 0 or x >= self.b[0]:
            return ("top", 0)
        for j in range(1, self.n + 1):
            a, b = self.gaps[j - 1]
            if a < x < b:
                return ("gap", j)
            lo, hi = self.band(j)
            if lo <= x <= hi:
                return ("band", j)
        raise AssertionError("unreachable")

    def gap_index(self, x, closed=True):
        """1-based index of the gap containing x, or None."""
        for j, (a, b) in enumerate(self.gaps, start=1):
            if (a <= x <= b) if closed else (a < x < b):
                return j
        return None

    # polynomials ----------------------------------------------------------------

    @cached_property
    def T_poly(self):
        return np.polynomial.Polynomial.fromroots(np.concatenate([[0.0], self.a, self.b]))

    @cached_property
    def T1_poly(self):
        """T_1(z) = prod (z - a_j)(z - b_j)."""
        return np.polynomial.Polynomial.fromroots(np.concatenate([self.a, self.b]))

    @property
    def A_T(self):
        """Coefficient of z^{2n} in T, i.e. -sum(a_k + b_k)."""
        return -float(self.a.sum() + self.b.sum()) if self.n else 0.0

    def abs_T(self, lam):
        lam = np.asarray(lam, dtype=float)
        out = np.abs(lam)
        for c in np.concatenate([self.a, self.b]):
            out = out * np.abs(lam - c)
        return out

    def abs_T_except(self, lam, skip):
        """|T(lam)| with the factors for the roots in ``skip`` removed."""
        lam = np.asarray(lam, dtype=float)
        out = np.ones_like(lam)
        skip = list(skip)
        for c in self.roots:
            hit = [i for i, s in enumerate(skip) if s == c]
            if hit:
                skip.pop(hit[0])
                continue
            out = out * np.abs(lam - c)
        return out

    def dT_at_root(self, c):
        """T'(c) at a branch point by the explicit product rule."""
        others = [r for r in self.roots if r != c]
        return float(np.prod([c - r for r in others]))

    # branch of sqrt(T) -------------------------------------------------------------

    def _raw_sqrt(self, z, side):
        z = np.asarray(z, dtype=complex)
        out = np.ones_like(z)
        real = np.abs(z.imag) == 0.0
        for c in self.roots:
            d = c - z
            f = 1j * np.sqrt(d)
            if np.any(real):
                x = z.real
                top = np.where(x > c, np.sqrt(np.abs(x - c)) + 0j, 1j * np.sqrt(np.abs(c - x)))
                if side == "below":
                    top = np.where(x > c, -top, top)
                f = np.where(real, top, f)
            out = out * f
        return out

    @cached_property
    def sqrt_sign(self):
        """Global sign making R_{D_0} positive on the negative axis."""
        z = -1.0
        r = 1j * np.prod(z - self.b) / (2.0 * complex(self._raw_sqrt(z, "above")))
        return 1.0 if r.real > 0 else -1.0

    def gap_phase(self, j):
        """Unit factor u with sqrt(T(x+i0)) = u |T(x)|^{1/2} on gap j."""
        return 1j * (-1.0) ** (j - 1) * self.sqrt_sign

    def band_phase(self, j):
        """Same for band j (j = 0 denotes the top band [b_1, inf))."""
        return (-1.0) ** j * self.sqrt_sign

    @property
    def neg_phase(self):
        return 1j * (-1.0) ** self.n * self.sqrt_sign

    def region_sigma(self, x):
        """Real sign s with i/sqrt(T(x+i0)) = s/|T(x)|^{1/2} for x in a gap or x < 0."""
        kind, j = self.locate(x)
        if kind == "gap":
            return (-1.0) ** (j - 1) * self.sqrt_sign
        if kind == "neg":
            return (-1.0) ** self.n * self.sqrt_sign
        raise ValueError(f"{x} lies on the spectrum")


def eval_T(gs: GapSet, z):
    """T(z) = z prod (z - a_k)(z - b_k)."""
    z = np.asarray(z, dtype=complex)
    out = z.copy()
    for a, b in gs.gaps:
        out = out * (z - a) * (z - b)
    return out if out.ndim else complex(out)


def eval_sqrtT(gs: GapSet, z, side="auto", return_flag=False):
    """Branch-consistent sqrt(T(z)).

    ``side`` matters only on the real axis: ``"above"`` (default for
    ``"auto"``) and ``"below"`` select the lip. The result at a branch point
    is exactly 0; with ``return_flag=True`` a boolean array marking those
    points is returned as well.
    """
    if side not in ("auto", "above", "below"):
        raise ValueError(f"unknown side {side!r}")
    zz = np.asarray(z, dtype=complex)
    raw = gs._raw_sqrt(zz, "below" if side == "below" else "above") * gs.sqrt_sign
    at_branch = np.zeros(zz.shape, dtype=bool)
    for c in gs.roots:
        at_branch |= zz == c
    raw = np.where(at_branch, 0.0, raw)
    val = raw if raw.ndim else complex(raw)
    if return_flag:
        return val, (at_branch if at_branch.ndim else bool(at_branch))
    return val


def random_gapset(rng, n, first_band=(0.2, 1.0), lengths=(0.3, 1.5)):
    """A random valid GapSet built from alternating band and gap lengths."""
    x = rng.uniform(*first_band)
    gaps = []
    for _ in range(n):
        g = rng.uniform(*lengths)
        gaps.append((x, x + g))
        x += g + rng.uniform(*lengths)
    return GapSet(tuple(gaps))
