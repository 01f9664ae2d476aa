"""Finite parafermion algebras as concrete complex matrices.

The degree-d algebra on m generators satisfies

    c_j^d = 1,        c_i c_j = q c_j c_i   (i < j),   q = exp(2*pi*i/d),

and is represented on C^(d^(m/2)) by pairing two generators per Z_d tensor
factor (a Jordan-Wigner-type construction built from clock and shift
matrices).  Elements carry both a normal-ordered coefficient table and the
dense matrix; the two are kept consistent by construction and re-checked in
the test suite.

The reflection theta mirrors generator indices (c_j -> c_{m+1-j}) and extends
antilinearly as a homomorphism.  The twisted product of homogeneous elements
A in the left half and B in the right half is

    A o B = xi^(grade(A) * grade(B)) * A B,    xi = exp(i*pi*(d-1)/d),

which reduces to the plain product whenever either grade vanishes (the
bosonic case).  At d = 2 the phase xi equals exp(i*pi/2) = i, i.e. the square
root of q; for d > 2 this particular root is the one for which the form
(A, B) -> omega(theta(A) o B) is hermitian for every reflection-invariant
omega, which is what every positivity check downstream relies on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigMismatch, InvalidConfig, InvalidState, SizeLimit

DEFAULT_CAP = 4096


def unit_root(d: int, k: int = 1) -> complex:
    """exp(2*pi*i*k/d), exact at quarter turns so Pauli cases come out integral."""
    k = k % d
    quarters = {(0, 4): 1.0 + 0j, (1, 4): 1j, (2, 4): -1.0 + 0j, (3, 4): -1j}
    if (4 * k) % d == 0:
        return quarters[((4 * k // d) % 4, 4)]
    return np.exp(2j * np.pi * k / d)


def clock_shift(d: int):
    """Clock and shift matrices with V U = q U V, U^d = V^d = 1.

    U = diag(1, q, q^2, ...) and V maps e_j -> e_{j-1} (cyclic).
    """
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise InvalidConfig(f"degree must be an integer >= 2, got {d!r}")
    U = np.diag([unit_root(d, k) for k in range(d)])
    V = np.zeros((d, d), dtype=complex)
    for i in range(d):
        V[i, (i + 1) % d] = 1.0
    return U, V


@dataclass(frozen=True)
class AlgebraConfig:
    """Degree d, generator count m, and the size cap for the matrix dimension."""

    d: int
    m: int
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if not isinstance(self.d, (int, np.integer)) or self.d < 2:
            raise InvalidConfig(f"degree d must be an integer >= 2, got {self.d!r}")
        if not isinstance(self.m, (int, np.integer)) or self.m < 2 or self.m % 2:
            raise InvalidConfig(f"generator count m must be even and >= 2, got {self.m!r}")

    @property
    def q(self) -> complex:
        return np.exp(2j * np.pi / self.d)

    @property
    def zeta(self) -> complex:
        """Square root of q, zeta = exp(i*pi/d)."""
        return np.exp(1j * np.pi / self.d)

    @property
    def xi(self) -> complex:
        """Twist phase base exp(i*pi*(d-1)/d); equals zeta when d = 2."""
        return np.exp(1j * np.pi * (self.d - 1) / self.d)

    @property
    def dim(self) -> int:
        return self.d ** (self.m // 2)

    def twist(self, a: int, b: int) -> complex:
        """Phase xi^(a*b) attached to grades (a, b) in the twisted product."""
        return np.exp(1j * np.pi * (self.d - 1) * (a % self.d) * (b % self.d) / self.d)


def _reorder(factors, d):
    """Normal order a factor list [(index, exponent), ...].

    Swapping adjacent factors with indices i > j costs q^(-e_i * e_j); equal
    indices merge.  Returns (phase exponent mod d, merged exponent dict).
    """
    arr = list(factors)
    phase = 0
    n = len(arr)
    for a in range(n):
        for b in range(n - 1 - a):
            (i1, e1), (i2, e2) = arr[b], arr[b + 1]
            if i1 > i2:
                phase -= e1 * e2
                arr[b], arr[b + 1] = arr[b + 1], arr[b]
    merged = {}
    for i, e in arr:
        merged[i] = (merged.get(i, 0) + e) % d
    return phase % d, merged


class Algebra:
    """Shared context: configuration, generator matrices, monomial-rep cache."""

    def __init__(self, cfg: AlgebraConfig):
        if cfg.dim > cfg.cap:
            raise SizeLimit(
                f"matrix dimension d^(m/2) = {cfg.dim} exceeds cap {cfg.cap}")
        self.cfg = cfg
        d, m = cfg.d, cfg.m
        U, V = clock_shift(d)
        eta = np.exp(1j * np.pi * (d - 1) / d)
        eye = np.eye(d)
        gens = []
        for s in range(m // 2):
            left = [U] * s
            right = [eye] * (m // 2 - s - 1)
            gens.append(_kron(left + [V] + right))
            gens.append(eta * _kron(left + [V @ U] + right))
        self._gen_mats = gens
        self._mono_cache: dict[tuple, np.ndarray] = {}

    # -- element constructors -------------------------------------------------

    def element(self, coeffs: dict) -> "AlgebraElement":
        clean = {self._canon(k): complex(v) for k, v in coeffs.items() if v != 0}
        return AlgebraElement(self, clean)

    def monomial(self, k) -> "AlgebraElement":
        """c_1^{k_1} ... c_m^{k_m} in that fixed order."""
        return self.element({tuple(k): 1.0})

    def identity(self) -> "AlgebraElement":
        return self.element({(0,) * self.cfg.m: 1.0})

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def generators(self) -> list:
        out = []
        for j in range(self.cfg.m):
            k = [0] * self.cfg.m
            k[j] = 1
            out.append(self.monomial(k))
        return out

    # -- internals -------------------------------------------------------------

    def _canon(self, k) -> tuple:
        if len(k) != self.cfg.m:
            raise InvalidConfig(f"exponent tuple length {len(k)} != m = {self.cfg.m}")
        return tuple(int(x) % self.cfg.d for x in k)

    def monomial_rep(self, k) -> np.ndarray:
        k = self._canon(k)
        hit = self._mono_cache.get(k)
        if hit is not None:
            return hit
        mat = np.eye(self.cfg.dim, dtype=complex)
        for i, e in enumerate(k):
            if e:
                mat = mat @ np.linalg.matrix_power(self._gen_mats[i], e)
        self._mono_cache[k] = mat
        return mat


def _kron(ops):
    out = np.array([[1.0 + 0j]])
    for op in ops:
        out = np.kron(out, op)
    return out


def build_algebra(cfg: AlgebraConfig) -> list:
    """Generators c_1 ... c_m as AlgebraElements sharing one context."""
    return Algebra(cfg).generators()


class AlgebraElement:
    """Normal-ordered coefficient table plus a dense matrix representation."""

    __slots__ = ("algebra", "coeffs", "_rep")

    def __init__(self, algebra: Algebra, coeffs: dict, rep=None):
        self.algebra = algebra
        self.coeffs = coeffs
        self._rep = rep

    @property
    def cfg(self) -> AlgebraConfig:
        return self.algebra.cfg

    @property
    def rep(self) -> np.ndarray:
        if self._rep is None:
            out = np.zeros((self.cfg.dim, self.cfg.dim), dtype=complex)
            for k, v in self.coeffs.items():
                out += v * self.algebra.monomial_rep(k)
            self._rep = out
        return self._rep

    @property
    def grade(self):
        """Total degree mod d when homogeneous, None for mixed elements."""
        grades = {sum(k) % self.cfg.d for k in self.coeffs}
        if len(grades) == 1:
            return grades.pop()
        return None if grades else 0

    def grade_parts(self) -> dict:
        parts: dict[int, dict] = {}
        for k, v in self.coeffs.items():
            parts.setdefault(sum(k) % self.cfg.d, {})[k] = v
        return {g: AlgebraElement(self.algebra, c) for g, c in parts.items()}

    def support(self) -> set:
        """Generator indices (1-based) appearing with nonzero exponent."""
        out = set()
        for k in self.coeffs:
            out.update(i + 1 for i, e in enumerate(k) if e)
        return out

    # -- ring operations --------------------------------------------------------

    def _check(self, other):
        if self.algebra is not other.algebra and self.cfg != other.cfg:
            raise ConfigMismatch("operands built over different algebra configs")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
            if out[k] == 0:
                del out[k]
        return AlgebraElement(self.algebra, out)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rmul__(self, scalar):
        s = complex(scalar)
        return AlgebraElement(self.algebra, {k: s * v for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if np.isscalar(other):
            return self.__rmul__(other)
        self._check(other)
        d, m = self.cfg.d, self.cfg.m
        q = self.cfg.q
        out: dict[tuple, complex] = {}
        for k1, v1 in self.coeffs.items():
            f1 = [(i, e) for i, e in enumerate(k1) if e]
            for k2, v2 in other.coeffs.items():
                f2 = [(i, e) for i, e in enumerate(k2) if e]
                ph, merged = _reorder(f1 + f2, d)
                kk = tuple(merged.get(i, 0) for i in range(m))
                out[kk] = out.get(kk, 0) + v1 * v2 * q**ph
        out = {k: v for k, v in out.items() if v != 0}
        rep = None
        if self._rep is not None and other._rep is not None:
            rep = self._rep @ other._rep
        return AlgebraElement(self.algebra, out, rep)

    def star(self) -> "AlgebraElement":
        """Adjoint: reverses products, conjugates scalars; matches rep.conj().T."""
        d, m = self.cfg.d, self.cfg.m
        q = self.cfg.q
        out: dict[tuple, complex] = {}
        for k, v in self.coeffs.items():
            fact = [(i, (-e) % d) for i, e in reversed(list(enumerate(k))) if e]
            ph, merged = _reorder(fact, d)
            kk = tuple(merged.get(i, 0) for i in range(m))
            out[kk] = out.get(kk, 0) + np.conj(v) * q**ph
        rep = self._rep.conj().T if self._rep is not None else None
        return AlgebraElement(self.algebra, {k: v for k, v in out.items() if v != 0}, rep)

    def norm_max(self) -> float:
        """Largest coefficient modulus (zero element -> 0)."""
        return max((abs(v) for v in self.coeffs.values()), default=0.0)

    def __repr__(self):
        terms = ", ".join(f"{k}: {v:.4g}" for k, v in sorted(self.coeffs.items()))
        return f"AlgebraElement(d={self.cfg.d}, m={self.cfg.m}, {{{terms}}})"


def monomial(algebra: Algebra, k) -> AlgebraElement:
    return algebra.monomial(k)


def theta(A: AlgebraElement) -> AlgebraElement:
    """Antilinear reflection homomorphism: theta(c_j) = c_{m+1-j}.

    Applied to a normal-ordered monomial, factors mirror their indices while
    keeping their order, then the result is normal ordered; coefficients are
    conjugated.  theta(A B) = theta(A) theta(B) and theta^2 = id.
    """
    d, m = A.cfg.d, A.cfg.m
    q = A.cfg.q
    out: dict[tuple, complex] = {}
    for k, v in A.coeffs.items():
        fact = [(m - 1 - i, e) for i, e in enumerate(k) if e]
        ph, merged = _reorder(fact, d)
        kk = tuple(merged.get(i, 0) for i in range(m))
        out[kk] = out.get(kk, 0) + np.conj(v) * q**ph
    return AlgebraElement(A.algebra, {k: v for k, v in out.items() if v != 0})


def _support_in(A: AlgebraElement, lo: int, hi: int) -> bool:
    return all(lo <= j <= hi for j in A.support())


def twisted_product(A: AlgebraElement, B: AlgebraElement) -> AlgebraElement:
    """A o B for A supported on generators 1..m/2 and B on m/2+1..m.

    Homogeneous parts of grades (a, b) pick up the phase xi^(a*b); for
    grade-zero (bosonic) parts the product is untwisted.
    """
    A._check(B)
    half = A.cfg.m // 2
    from .errors import WrongHalf
    if not _support_in(A, 1, half):
        raise WrongHalf("left factor of the twisted product must live on generators 1..m/2")
    if not _support_in(B, half + 1, A.cfg.m):
        raise WrongHalf("right factor of the twisted product must live on generators m/2+1..m")
    out = A.algebra.zero()
    for ga, Pa in A.grade_parts().items():
        for gb, Pb in B.grade_parts().items():
            out = out + A.cfg.twist(ga, gb) * (Pa * Pb)
    return out


@dataclass
class StateFunctional:
    """Normalized trace or Gibbs functional A -> Tr(exp(-beta H) A)/Tr(exp(-beta H))."""

    kind: str
    beta: float = 0.0
    hamiltonian: AlgebraElement | None = None
    _rho: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("trace", "gibbs"):
            raise InvalidState(f"unknown state kind {self.kind!r}")
        if self.kind == "gibbs":
            if self.hamiltonian is None:
                raise InvalidState("gibbs state requires a hamiltonian")
            if self.beta < 0:
                raise InvalidState("gibbs state requires beta >= 0")
            H = self.hamiltonian.rep
            if np.abs(H - H.conj().T).max() > 1e-10:
                raise InvalidState("gibbs hamiltonian must be star-invariant")

    def density(self, algebra: Algebra) -> np.ndarray:
        if self._rho is None:
            dim = algebra.cfg.dim
            if self.kind == "trace":
                rho = np.eye(dim) / dim
            else:
                H = self.hamiltonian.rep
                w, v = np.linalg.eigh((H + H.conj().T) / 2)
                e = np.exp(-self.beta * (w - w.min()))
                rho = (v * e) @ v.conj().T
                rho /= np.trace(rho).real
            self._rho = rho
        return self._rho


def evaluate(omega: StateFunctional, A: AlgebraElement) -> complex:
    """omega(A); linear in A with omega(1) = 1."""
    rho = omega.density(A.algebra)
    return complex(np.trace(rho @ A.rep))
