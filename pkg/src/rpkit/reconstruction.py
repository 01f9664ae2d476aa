"""Osterwalder-Schrader quantization: quotient space, transfer operator, spectrum.

quantize() turns a PSD Gram report into quotient data; the transfer operator
compresses the away-from-the-plane shift onto the quotient.  Shifted basis
monomials that stay on the chain are projected back onto the quotient through
the Gram form of the extended monomial family (no truncation); shifts falling
off the chain map to the zero class.

The compression is a self-adjoint contraction exactly when the functional is
invariant under the shift on its support; the stated precondition is checked
and a PreconditionViolation raised otherwise, since the raw compression of a
shift-variant functional is not a transfer operator in any useful sense.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import Algebra, StateFunctional, evaluate, theta, twisted_product
from .errors import InvalidArgument, PreconditionViolation, ReconstructionFailure
from .verifier import GramReport, _check_plus

DEFAULT_TOL = 1e-10


@dataclass
class QuotientSpace:
    """Rank, isometry into basis-coefficient space, and the PSD square root."""

    rank: int
    isometry: np.ndarray
    gram_sqrt: np.ndarray
    null_vectors: np.ndarray
    tol: float


def quantize(report: GramReport, tol: float | None = None) -> QuotientSpace:
    """Quotient the basis span by the null space of the Gram form."""
    if not report.psd:
        raise PreconditionViolation("quantize requires a PSD Gram report")
    tol = report.tol if tol is None else tol
    M = report.matrix
    ev, vec = np.linalg.eigh(M)
    keep = ev > tol
    iso = vec[:, keep] / np.sqrt(ev[keep])
    nullv = vec[:, ~keep]
    sqrt = (vec * np.sqrt(np.clip(ev, 0.0, None))) @ vec.conj().T
    return QuotientSpace(rank=int(keep.sum()), isometry=iso, gram_sqrt=sqrt,
                         null_vectors=nullv, tol=tol)


def time_shift(k, steps: int, cfg) -> tuple | None:
    """Shift a plus-half monomial away from the plane by `steps` generators.

    Returns the shifted exponent tuple, or None when support would leave the
    chain.  steps = 0 is the identity.
    """
    if steps < 0:
        raise InvalidArgument("time_shift requires steps >= 0")
    k = tuple(int(x) % cfg.d for x in k)
    if steps == 0:
        return k
    w = cfg.m // 2
    plus = list(k[w:])
    if steps >= w:
        return k if not any(plus) else None
    if any(plus[w - steps:]):
        return None
    return tuple([0] * w + [0] * steps + plus[:w - steps])


@dataclass
class TransferData:
    """Quantized one-step time translation and its Hamiltonian."""

    transfer: np.ndarray
    hamiltonian: np.ndarray
    dt: float = 1.0
    kernel_dim: int = 0
    asymmetry: float = 0.0
    normalization: float = 1.0
    shift_defect: float = 0.0
    excluded: list = field(default_factory=list)


def _extended_gram(omega: StateFunctional, algebra: Algebra, family):
    elems = [algebra.monomial(k) for k in family]
    n = len(elems)
    M = np.zeros((n, n), dtype=complex)
    for a in range(n):
        Ta = theta(elems[a])
        for b in range(n):
            M[a, b] = evaluate(omega, twisted_product(Ta, elems[b]))
    return (M + M.conj().T) / 2


def transfer_operator(omega: StateFunctional, algebra: Algebra, basis,
                      qspace: QuotientSpace | None = None, steps: int = 1,
                      shift_tol: float = DEFAULT_TOL,
                      max_steps: int = 3) -> TransferData:
    """Compress the `steps`-generator shift onto the OS quotient of `basis`.

    The quotient defaults to quantize(gram(omega, basis)).  dt equals
    `steps` in lattice units and H = -(1/dt) log T on the strictly positive
    spectral part of T; kernel directions are reported as infinite-energy and
    excluded, never capped.
    """
    from .verifier import gram  # cycle-free at call time

    _check_plus(algebra, basis)
    cfg = algebra.cfg
    if steps < 0:
        raise InvalidArgument("transfer_operator needs steps >= 0")
    if steps == 0:
        # identity automorphism: T = 1 on the quotient, H = 0
        if qspace is None:
            rep = gram(omega, algebra, basis)
            if not rep.psd:
                raise PreconditionViolation("basis Gram is not PSD")
            qspace = quantize(rep)
        n = qspace.rank
        return TransferData(transfer=np.eye(n), hamiltonian=np.zeros((n, n)), dt=1.0)
    family = list(basis)
    index = {k: i for i, k in enumerate(family)}
    for j in range(steps, steps * max_steps + 1, steps):
        for k in basis:
            sk = time_shift(k, j, cfg)
            if sk is not None and sk not in index:
                index[sk] = len(family)
                family.append(sk)
    M = _extended_gram(omega, algebra, family)
    scale = max(1.0, float(np.abs(M).max()))

    # precondition: omega invariant under the shift automorphism on its support.
    # Moving the shift across the reflection plane gives the operational form
    # omega(theta(alpha A) o B) = omega(theta(A) o alpha B), i.e.
    # M[shift a, b] = M[a, shift b]; this is exactly what makes the compressed
    # transfer self-adjoint.
    defect = 0.0
    for a in basis:
        sa = time_shift(a, steps, cfg)
        if sa is None:
            continue
        for b in basis:
            sb = time_shift(b, steps, cfg)
            if sb is None:
                continue
            defect = max(defect, abs(M[index[sa], index[b]] - M[index[a], index[sb]]))
    if defect > shift_tol * scale:
        raise PreconditionViolation(
            f"functional not shift-invariant on the basis support "
            f"(defect {defect:.3e}, gate {shift_tol:.1e} x {scale:.3g})")

    sel = [index[k] for k in basis]
    Mb = M[np.ix_(sel, sel)]
    if qspace is None:
        rep = GramReport(basis=list(basis), matrix=Mb,
                         min_eig=float(np.linalg.eigvalsh(Mb)[0]),
                         psd=bool(np.linalg.eigvalsh(Mb)[0] >= -DEFAULT_TOL),
                         witness=np.zeros(len(basis)), tol=DEFAULT_TOL,
                         verdict="positive")
        if not rep.psd:
            raise PreconditionViolation("basis Gram is not PSD; run gram() first")
        qspace = quantize(rep)
    iso = qspace.isometry

    cols = np.zeros((len(family), len(basis)), dtype=complex)
    for j, k in enumerate(basis):
        sk = time_shift(k, steps, cfg)
        if sk is not None:
            cols[index[sk], j] = 1.0

    # well-definedness: null classes must shift into the null space
    worst_null = 0.0
    worst_vec = None
    for i in range(qspace.null_vectors.shape[1]):
        v = cols @ qspace.null_vectors[:, i]
        nrm = float(np.sqrt(abs(np.real(v.conj() @ M @ v))))
        if nrm > worst_null:
            worst_null, worst_vec = nrm, qspace.null_vectors[:, i]
    if worst_null > 1e-8 * scale:
        raise ReconstructionFailure(
            f"null vector maps to a class of norm {worst_null:.3e}", witness=worst_vec)

    T = iso.conj().T @ (M[sel, :] @ cols) @ iso
    asym = float(np.abs(T - T.conj().T).max())
    T = (T + T.conj().T) / 2
    ev = np.linalg.eigvalsh(T)
    norm = 1.0
    if ev.size and ev[-1] > 1.0 + DEFAULT_TOL:
        norm = float(ev[-1])
        T = T / norm
        ev = ev / norm
    # TransferData invariant: T self-adjoint PSD.  A genuinely negative part
    # means the quantized shift is not a transfer operator for this state.
    if ev.size and ev[0] < -1e-9 * max(1.0, abs(ev[-1])):
        w, vec = np.linalg.eigh(T)
        raise ReconstructionFailure(
            f"quantized shift is not positive (min eigenvalue {ev[0]:.3e})",
            witness=vec[:, 0])

    ker_tol = 1e-12
    w, vec = np.linalg.eigh(T)
    pos = w > ker_tol
    excluded = [float(x) for x in w[~pos]]
    lam = w[pos]
    Hdiag = -np.log(lam) / steps
    V = vec[:, pos]
    H = (V * Hdiag) @ V.conj().T
    return TransferData(transfer=T, hamiltonian=(H + H.conj().T) / 2, dt=float(steps),
                        kernel_dim=int((~pos).sum()), asymmetry=asym,
                        normalization=norm, shift_defect=float(defect),
                        excluded=excluded)


def compress_shift(M_full: np.ndarray, basis_idx, shift_of, tol: float = DEFAULT_TOL):
    """Matrix-level shift compression shared with the lattice pipeline.

    M_full is the Gram of an extended family; basis_idx selects the window;
    shift_of maps window positions to family indices (None = falls off).
    Returns (T symmetrized, quotient eigenvalues, asymmetry, null defect).
    """
    sel = list(basis_idx)
    Mb = M_full[np.ix_(sel, sel)]
    ev, vec = np.linalg.eigh((Mb + Mb.conj().T) / 2)
    keep = ev > tol * max(1.0, float(ev.max())) if ev.size else ev > tol
    iso = vec[:, keep] / np.sqrt(ev[keep])
    cols = np.zeros((M_full.shape[0], len(sel)), dtype=complex)
    for j in range(len(sel)):
        tgt = shift_of(j)
        if tgt is not None:
            cols[tgt, j] = 1.0
    null_defect = 0.0
    for i in np.nonzero(~keep)[0]:
        v = cols @ vec[:, i]
        null_defect = max(null_defect, float(np.sqrt(abs(np.real(v.conj() @ M_full @ v)))))
    T = iso.conj().T @ (M_full[sel, :] @ cols) @ iso
    asym = float(np.abs(T - T.conj().T).max())
    return (T + T.conj().T) / 2, ev, asym, null_defect


@dataclass
class SpectrumReport:
    """Ascending eigenvalues of the reconstructed Hamiltonian and the gap."""

    eigenvalues: np.ndarray
    gap: float


def spectrum_report(td: TransferData) -> SpectrumReport:
    ev = np.sort(np.linalg.eigvalsh(td.hamiltonian))
    gap = float(ev[1] - ev[0]) if len(ev) >= 2 else 0.0
    return SpectrumReport(eigenvalues=ev, gap=gap)
