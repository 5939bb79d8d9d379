"""
Polynomials in a Lagrange-type product basis attached to a node set c_1..c_n:

    p(z) = sum_{k<n} m_k(z) prod_{i != k} (z - c_i) + m_n(z) prod_i (z - c_i)

with small multiplier polynomials m_k in powers of z. With one node per gap
(we use the gap centres) a coefficient acts like a shift of the zero in that
gap, so evaluation does not cancel even when the gaps span many scales.
"""

import numpy as np
from numpy.polynomial import Polynomial


def _prod_except(z, nodes, skip):
    out = np.ones_like(z)
    for i, c in enumerate(nodes):
        if i != skip:
            out = out * (z - c)
    return out


def product_columns(z, nodes):
    """Columns prod_{i != k}(z - c_i) for k < n, then the full product."""
    z = np.asarray(z, dtype=float).ravel()
    n = len(nodes)
    return np.stack([_prod_except(z, nodes, k) for k in range(n)] + [_prod_except(z, nodes, -1)], axis=1)


class NodalPoly:
    """``coef[k, i]`` is the z^i coefficient of the multiplier m_k."""

    def __init__(self, nodes, coef):
        self.nodes = np.asarray(nodes, dtype=float)
        coef = np.atleast_2d(np.asarray(coef, dtype=float))
        if coef.shape[0] != len(self.nodes) + 1:
            raise ValueError("coef needs one row per node plus one")
        self.coef = coef

    @classmethod
    def from_columns(cls, nodes, lagrange, full=0.0, zshift=0):
        """z^zshift * (sum_k lagrange[k] prod_{i != k} + full * prod)."""
        n = len(nodes)
        coef = np.zeros((n + 1, zshift + 1))
        coef[:n, zshift] = lagrange
        coef[n, zshift] = full
        return cls(nodes, coef)

    @property
    def n(self):
        return len(self.nodes)

    def __call__(self, z):
        zz = np.asarray(z, dtype=float)
        cols = product_columns(zz, self.nodes)
        powers = zz.ravel()[:, None] ** np.arange(self.coef.shape[1])[None, :]
        val = np.sum(cols * (powers @ self.coef.T), axis=1)
        return val.reshape(zz.shape) if zz.ndim else float(val[0])

    def derivative(self, z):
        zz = np.asarray(z, dtype=float).ravel()
        n = self.n
        d = self.coef.shape[1]
        powers = zz[:, None] ** np.arange(d)[None, :]
        dpowers = np.zeros_like(powers)
        if d > 1:
            dpowers[:, 1:] = powers[:, :-1] * np.arange(1, d)[None, :]
        m = powers @ self.coef.T
        dm = dpowers @ self.coef.T
        out = np.zeros(zz.shape)
        for k in range(n + 1):
            skip = k if k < n else -1
            out += dm[:, k] * _prod_except(zz, self.nodes, skip)
            # product rule over the factors present in column k
            for l in range(n):
                if l == skip:
                    continue
                rest = np.ones_like(zz)
                for i, c in enumerate(self.nodes):
                    if i != skip and i != l:
                        rest = rest * (zz - c)
                out += m[:, k] * rest
        return out.reshape(np.shape(z)) if np.ndim(z) else float(out[0])

    def _binary(self, other, sign):
        d = max(self.coef.shape[1], other.coef.shape[1])
        if not np.array_equal(self.nodes, other.nodes):
            raise ValueError("node sets differ")
        a = np.zeros((self.n + 1, d))
        b = np.zeros((self.n + 1, d))
        a[:, : self.coef.shape[1]] = self.coef
        b[:, : other.coef.shape[1]] = other.coef
        return NodalPoly(self.nodes, a + sign * b)

    def __add__(self, other):
        return self._binary(other, 1.0)

    def __sub__(self, other):
        return self._binary(other, -1.0)

    def __mul__(self, s):
        return NodalPoly(self.nodes, self.coef * float(s))

    __rmul__ = __mul__

    def rescaled(self, beta, degree):
        """beta^degree * p(z / beta), with nodes beta * c."""
        n = self.n
        i = np.arange(self.coef.shape[1])[None, :]
        col_deg = np.array([n - 1] * n + [n], dtype=float)[:, None]
        return NodalPoly(self.nodes * beta, self.coef * beta ** (degree - i - col_deg))

    def to_power(self):
        """Ascending power-basis coefficients (trailing zeros trimmed)."""
        total = Polynomial([0.0])
        n = self.n
        for k in range(n + 1):
            roots = [c for i, c in enumerate(self.nodes) if i != k]
            base = Polynomial.fromroots(roots) if roots else Polynomial([1.0])
            total = total + Polynomial(self.coef[k]) * base
        c = total.coef
        nz = np.nonzero(c)[0]
        return c[: nz[-1] + 1] if len(nz) else np.zeros(1)

    def roots(self, newton_steps=3):
        """Companion-matrix roots of the power form, refined by Newton on the nodal form."""
        c = self.to_power()
        if len(c) < 2:
            return np.zeros(0)
        r = np.sort(Polynomial(c).roots().real)
        for _ in range(newton_steps):
            d = self.derivative(r)
            safe = np.abs(d) > 0
            r = np.where(safe, r - self(r) / np.where(safe, d, 1.0), r)
        return np.sort(r)
