"""
Elementary Blaschke-Potapov factors and their action on Herglotz pairs.

    J = [[0, 1], [-1, 0]],   E = rho e e^T,  e = (cos phi, sin phi)
    A(z) = I - E J / z,      A(z)^{-1} = I + E J / z,   det A = 1

A pair (n_+, n_-) is acted on projectively through row vectors:

    (r_+, 1) ~ (n_+, 1) A       (-r_-, 1) ~ (-n_-, 1) A

``inverse=True`` uses A^{-1} instead, which is the backward step used when
peeling factors off a product; its phi != 0 expansion at 0 is
``-tan(phi) + z/(rho cos^2 phi) + o(z)``.
"""

from dataclasses import dataclass

import numpy as np

from .comb import sincospi

J = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class PotapovFactor:
    rho: float
    phi: float = 0.0

    def __post_init__(self):
        if not self.rho >= 0:
            raise ValueError("rho must be non-negative")

    @property
    def E(self):
        e = np.array([np.cos(self.phi), np.sin(self.phi)])
        return self.rho * np.outer(e, e)

    def to_json(self):
        return {"rho": self.rho, "phi": self.phi}


def factor_matrix(f: PotapovFactor, z, inverse=False):
    if z == 0:
        raise ZeroDivisionError("factor matrix is singular at z = 0")
    sign = 1.0 if inverse else -1.0
    return np.eye(2, dtype=complex) + sign * (f.E @ J) / z


def product_matrix(factors, z, inverse=False):
    out = np.eye(2, dtype=complex)
    for f in factors:
        out = out @ factor_matrix(f, z, inverse)
    return out


def j_form(A, z):
    """(J - A J A^*) / (z - conj z), Hermitian for z off the real axis."""
    return (J - A @ J @ A.conj().T) / (z - np.conj(z))


def _act(vec_first, A, sign):
    """Projective row action (sign*x, 1) A = k (sign*y, 1); returns y."""
    u = sign * vec_first * A[0, 0] + A[1, 0]
    v = sign * vec_first * A[0, 1] + A[1, 1]
    if v == 0:
        raise ZeroDivisionError("row action hits a pole of the fraction")
    return sign * u / v


def transform_pair(n_plus, n_minus, f: PotapovFactor, inverse=False):
    """Evaluators (r_+, r_-) for one factor acting on (n_+, n_-)."""

    def r_plus(z):
        return _act(n_plus(z), factor_matrix(f, z, inverse), 1.0)

    def r_minus(z):
        return _act(n_minus(z), factor_matrix(f, z, inverse), -1.0)

    return r_plus, r_minus


def transform_chain(n_plus, n_minus, factors, inverse=False):
    rp, rm = n_plus, n_minus
    for f in factors:
        rp, rm = transform_pair(rp, rm, f, inverse)
    return rp, rm


@dataclass(frozen=True)
class HerglotzPointData:
    """Behaviour at 0: ``w + sigma z`` (kind "regular"), ``-weight/z`` ("pole"),
    or "singular" when neither fits (e.g. square-root behaviour)."""

    kind: str
    w: float
    sigma: float
    weight: float
    residual: float

    def to_json(self):
        return {"kind": self.kind, "w": self.w, "sigma": self.sigma, "weight": self.weight, "residual": self.residual}


PROBES = (-1e-2, -1e-3, -1e-4)


def two_term_expansion(r, probes=PROBES):
    """Fit r(z) = w + sigma z + o(z) at z -> 0 from below, or detect a pole.

    The probes must form a geometric sequence with ratio 1/10 (the default).
    """
    z = np.asarray(probes, dtype=float)
    v = np.array([complex(r(x)).real for x in z])
    q = -z * v
    if q[2] != 0 and abs(q[1] - q[2]) < 0.5 * abs(q[2]):
        weight = (10.0 * q[2] - q[1]) / 9.0
        res = abs(q[2] - weight) / abs(weight)
        return HerglotzPointData("pole", float("inf"), float("nan"), float(weight), float(res))
    s12 = (v[1] - v[0]) / (z[1] - z[0])
    s23 = (v[2] - v[1]) / (z[2] - z[1])
    sigma = (10.0 * s23 - s12) / 9.0
    kappa = (s12 - s23) / (z[0] - z[2])
    w = v[2] - s23 * z[2] + kappa * z[1] * z[2]
    res = abs(s23 - sigma) / max(abs(sigma), 1e-300)
    # linear behaviour keeps neighbouring chord slopes close; sqrt(-z) makes them differ by sqrt(10)
    kind = "regular" if abs(s12 - s23) < 0.5 * abs(s23) else "singular"
    return HerglotzPointData(kind, float(w), float(sigma), 0.0, float(res))


def point_mass_herglotz(weights, nodes):
    """n(z) = sum w_i z / (x_i (x_i - z)): Herglotz, n(0) = 0, slope sum w_i/x_i^2."""
    w = np.asarray(weights, dtype=float)
    x = np.asarray(nodes, dtype=float)
    if np.any(w <= 0) or np.any(x <= 0):
        raise ValueError("weights and nodes must be positive")

    def n(z):
        return complex(np.sum(w * z / (x * (x - z))))

    n.slope = float(np.sum(w / x**2))
    return n


def trace_model(rho, mu):
    """(1/2) tr(A_rho(mu) B(mu)) with A_rho = I + 2 rho mu e1 e1^T J and B the rotation by pi mu."""
    mu = np.asarray(mu, dtype=float)
    s, c = sincospi(mu)
    e1 = np.array([[1.0, 0.0], [0.0, 0.0]])
    N = e1 @ J
    out = np.empty(mu.shape)
    for idx, m in np.ndenumerate(mu):
        A = np.eye(2) + 2.0 * rho * m * N
        B = np.array([[c[idx], s[idx]], [-s[idx], c[idx]]])
        out[idx] = 0.5 * np.trace(A @ B)
    return out if out.ndim else float(out)
