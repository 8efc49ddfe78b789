"""Four-point KZ connection: numerical monodromy and braiding data.

The reduced correlation G(x) satisfies dG/dx = (P/x + Q/(x-1)) G with
exact rational triangular matrices P, Q.  Monodromy matrices are
computed by adaptive Runge-Kutta transport around the singular points;
their eigenvalues can be checked against exp(2*pi*i * diag) since both
connection matrices are triangular.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from .errors import (DegeneratePoints, InvalidParams, SingularityTooClose,
                     StepUnderflow)


def _mat_json(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


@dataclass(frozen=True)
class KZSystem:
    """Connection data of the reduced 4-point equation for SU(N) level k."""
    N: int
    k: int
    g: int
    P: tuple
    Q: tuple

    def eig_p(self):
        return (self.P[0][0], self.P[1][1])

    def eig_q(self):
        return (self.Q[0][0], self.Q[1][1])

    def p_complex(self):
        return np.array(self.P, dtype=complex)

    def q_complex(self):
        return np.array(self.Q, dtype=complex)

    def to_json(self):
        return {
            "N": self.N, "k": self.k, "g": self.g,
            "P": [[str(v) for v in row] for row in self.P],
            "Q": [[str(v) for v in row] for row in self.Q],
            "eigP": [str(v) for v in self.eig_p()],
            "eigQ": [str(v) for v in self.eig_q()],
        }


@dataclass
class MonodromyResult:
    M0: np.ndarray
    M1: np.ndarray
    eigenvalues: tuple
    path_tolerance: float

    def to_json(self):
        return {
            "monodromy0": {"matrix": _mat_json(self.M0),
                           "eig": _mat_json([np.linalg.eigvals(self.M0)])[0],
                           "cond": float(np.linalg.cond(self.M0))},
            "monodromy1": {"matrix": _mat_json(self.M1),
                           "eig": _mat_json([np.linalg.eigvals(self.M1)])[0],
                           "cond": float(np.linalg.cond(self.M1))},
            "eigenvalues": _mat_json([np.array(self.eigenvalues)])[0],
            "path_tolerance": self.path_tolerance,
        }


@dataclass
class CouplingMatrix:
    """The normalized quadratic coupling t-hat and its exponential R."""
    that: np.ndarray
    R: np.ndarray

    def to_json(self):
        return {"t": _mat_json(self.that), "R": _mat_json(self.R),
                "eigR": _mat_json([np.linalg.eigvals(self.R)])[0]}


def build_system(N, k):
    """Exact rational (P, Q) for SU(N) at level k; g is the dual Coxeter number."""
    if N < 2 or k < 1:
        raise InvalidParams("need N >= 2 and k >= 1, got N=%r k=%r" % (N, k))
    s = Fraction(-1, N * (N + k))
    P = ((s * (N * N - 1), s * N), (Fraction(0), -s))
    Q = ((-s, Fraction(0)), (s * N, s * (N * N - 1)))
    return KZSystem(N=N, k=k, g=N, P=P, Q=Q)


def _segment_clearance(a, b, p):
    """Distance from singular point p to the segment [a, b]."""
    d = b - a
    if d == 0:
        return abs(a - p)
    t = ((p - a) * d.conjugate()).real / abs(d) ** 2
    t = min(1.0, max(0.0, t))
    return abs(a + t * d - p)


def integrate(sys, path, tol=1e-10):
    """Transport the fundamental 2x2 solution along straight path segments."""
    path = [complex(p) for p in path]
    if len(path) < 2:
        return np.eye(2, dtype=complex)
    for a, b in zip(path, path[1:]):
        for p in (0.0, 1.0):
            if _segment_clearance(a, b, p) < 10 * tol:
                raise SingularityTooClose(
                    "path passes within %g of x=%g" % (10 * tol, p))
    P = sys.p_complex()
    Q = sys.q_complex()
    G = np.eye(2, dtype=complex)
    for a, b in zip(path, path[1:]):
        d = b - a
        if d == 0:
            continue

        def rhs(s, y):
            x = a + s * d
            A = P / x + Q / (x - 1)
            return (d * (A @ y.reshape(2, 2))).ravel()

        sol = solve_ivp(rhs, (0.0, 1.0), G.ravel(), method="RK45",
                        rtol=tol, atol=tol * 1e-3)
        if not sol.success:
            raise StepUnderflow("integrator failed: %s" % sol.message)
        G = sol.y[:, -1].reshape(2, 2)
    return G


def _circle(center, radius, basepoint, n=64):
    """Closed polygonal loop around ``center`` starting at ``basepoint``."""
    phase0 = np.angle(complex(basepoint) - center)
    angles = phase0 + 2 * np.pi * np.arange(n + 1) / n
    return list(center + radius * np.exp(1j * angles))


def monodromy(sys, around=0, tol=1e-10):
    """Closed-loop transport around x=0 or x=1 (basepoint a quarter away)."""
    if around not in (0, 1):
        raise InvalidParams("monodromy center must be 0 or 1")
    M0 = integrate(sys, _circle(0.0, 0.25, 0.25), tol)
    M1 = integrate(sys, _circle(1.0, 0.25, 0.75), tol)
    eig = np.linalg.eigvals(M0 if around == 0 else M1)
    return MonodromyResult(M0=M0, M1=M1, eigenvalues=tuple(eig),
                           path_tolerance=tol)


def r_matrix(N, k):
    """Coupling t-hat = (sum_a t^a x t^a)/(k+g) on C^N x C^N and R = exp(i*pi*t-hat).

    With generators normalized by trace(t^a t^b) = delta_ab / 2 the sum
    over generators is (swap - I/N)/2.
    """
    if N < 2 or k < 1:
        raise InvalidParams("need N >= 2 and k >= 1, got N=%r k=%r" % (N, k))
    n2 = N * N
    swap = np.zeros((n2, n2))
    for i in range(N):
        for j in range(N):
            swap[i * N + j, j * N + i] = 1.0
    casimir = 0.5 * (swap - np.eye(n2) / N)
    that = casimir / (k + N)
    R = expm(1j * np.pi * that)
    return CouplingMatrix(that=that.astype(complex), R=R)


def skein_coefficients(B):
    """(det B, tr B, Cayley-Hamilton residual) of a 2x2 block matrix."""
    B = np.asarray(B, dtype=complex)
    a = np.linalg.det(B)
    b = np.trace(B)
    residual = np.linalg.norm(B @ B - b * B + a * np.eye(2))
    return a, b, float(residual)


def conformal_weight(N, k):
    """Weight of the fundamental primary: (N^2-1) / (2N(N+k))."""
    if N < 2 or k < 1:
        raise InvalidParams("need N >= 2 and k >= 1, got N=%r k=%r" % (N, k))
    return Fraction(N * N - 1, 2 * N * (N + k))


def central_charge(k, d, g):
    """c = k d / (k + g) for a level-k algebra of dimension d."""
    if k < 1 or d < 1 or g < 1:
        raise InvalidParams("central charge needs positive k, d, g")
    return Fraction(k * d, k + g)


def cross_ratio(z1, z2, z3, z4):
    """x = (z1-z2)(z3-z4) / ((z1-z3)(z2-z4))."""
    z1, z2, z3, z4 = complex(z1), complex(z2), complex(z3), complex(z4)
    if z1 == z3 or z2 == z4:
        raise DegeneratePoints("cross ratio undefined when z1=z3 or z2=z4")
    return (z1 - z2) * (z3 - z4) / ((z1 - z3) * (z2 - z4))
