"""Dense complex linear algebra and truncated Fock-space constructors.

Everything works on plain square complex numpy arrays.  Dimensions stay
small (a few hundred at most), so eigendecomposition-based routines are
used throughout; they give exactly unitary propagators up to roundoff.
Natural units hbar = k_B = 1.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "TruncationError",
    "kron",
    "partial_trace",
    "expm_hermitian",
    "fock_operators",
    "thermal_state",
    "coherent_state",
    "is_hermitian",
    "is_unitary",
    "is_density_matrix",
    "check_density_matrix",
    "thermal_tail_mass",
]

DEFAULT_TAIL_THRESHOLD = 1e-10


class TruncationError(ValueError):
    """Raised when a truncated Fock-space state leaves too much tail mass."""


def _as_square(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains NaN/Inf entries")
    return m


def is_hermitian(m, tol=1e-10):
    m = _as_square(m)
    return np.max(np.abs(m - m.conj().T)) <= tol


def is_unitary(m, tol=1e-10):
    m = _as_square(m)
    return np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0]))) <= tol


def is_density_matrix(rho, trace_tol=1e-10, herm_tol=1e-10, eig_tol=1e-9):
    rho = _as_square(rho)
    if abs(np.trace(rho) - 1.0) > trace_tol:
        return False
    if not is_hermitian(rho, herm_tol):
        return False
    evals = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    return bool(evals.min() >= -eig_tol)


def check_density_matrix(rho, trace_tol=1e-10, herm_tol=1e-10, eig_tol=1e-9):
    """Raise ValueError unless rho is a valid density matrix."""
    rho = _as_square(rho)
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"trace {tr} deviates from 1 beyond {trace_tol}")
    if not is_hermitian(rho, herm_tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    evals = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    if evals.min() < -eig_tol:
        raise ValueError(f"negative eigenvalue {evals.min()} below -{eig_tol}")
    return rho


def kron(a, b):
    """Kronecker product of two square complex matrices."""
    return np.kron(_as_square(a), _as_square(b))


def partial_trace(rho, dims, keep):
    """Trace out all tensor factors except ``dims[keep]``.

    ``dims`` lists the factor dimensions in tensor order; their product
    must equal the dimension of ``rho``.
    """
    rho = _as_square(rho)
    dims = list(dims)
    d = int(np.prod(dims))
    if d != rho.shape[0]:
        raise ValueError(f"product of dims {dims} != matrix dimension {rho.shape[0]}")
    if not 0 <= keep < len(dims):
        raise ValueError(f"keep index {keep} out of range")
    n = len(dims)
    order = [keep] + [i for i in range(n) if i != keep]
    resh = rho.reshape(dims + dims).transpose(order + [i + n for i in order])
    dk = dims[keep]
    rest = d // dk
    return np.einsum("arbr->ab", resh.reshape(dk, rest, dk, rest))


def expm_hermitian(h, scale):
    """exp(scale * h) for Hermitian h, via eigendecomposition.

    ``scale`` may be any complex number; with purely imaginary scale the
    result is unitary up to roundoff.
    """
    h = _as_square(h)
    if not is_hermitian(h, 1e-10):
        raise ValueError("expm_hermitian requires a Hermitian matrix")
    w, v = np.linalg.eigh(h)
    return (v * np.exp(scale * w)) @ v.conj().T


def fock_operators(ncut):
    """Truncated ladder operators (annihilate, create, number) on ncut levels."""
    if ncut < 2:
        raise ValueError("ncut must be >= 2")
    a = np.zeros((ncut, ncut), dtype=complex)
    ns = np.arange(1, ncut)
    a[ns - 1, ns] = np.sqrt(ns)
    adag = a.conj().T
    return a, adag, adag @ a


def thermal_tail_mass(nbar, ncut):
    """Mass of the geometric thermal distribution beyond the truncation."""
    if nbar == 0:
        return 0.0
    r = nbar / (nbar + 1.0)
    return r**ncut


def thermal_state(ncut, nbar, tail_threshold=DEFAULT_TAIL_THRESHOLD):
    """Truncated thermal (geometric) state, renormalized to unit trace."""
    if ncut < 2:
        raise ValueError("ncut must be >= 2")
    if nbar < 0:
        raise ValueError("nbar must be >= 0")
    tail = thermal_tail_mass(nbar, ncut)
    if tail > tail_threshold:
        raise TruncationError(
            f"thermal tail mass {tail:.3e} above threshold {tail_threshold:.1e}"
            f" (nbar={nbar}, ncut={ncut})"
        )
    if nbar == 0:
        p = np.zeros(ncut)
        p[0] = 1.0
    else:
        r = nbar / (nbar + 1.0)
        p = r ** np.arange(ncut)
        p /= p.sum()
    return np.diag(p).astype(complex)


def coherent_state(ncut, alpha, tail_threshold=DEFAULT_TAIL_THRESHOLD):
    """Truncated coherent-state vector, renormalized on the cut space."""
    if ncut < 2:
        raise ValueError("ncut must be >= 2")
    alpha = complex(alpha)
    n = np.arange(ncut)
    # log-domain Poisson weights to avoid overflow in alpha**n / sqrt(n!)
    if alpha == 0:
        amp = np.zeros(ncut, dtype=complex)
        amp[0] = 1.0
        return amp
    logmag = n * np.log(abs(alpha)) - 0.5 * np.array(
        [0.0] + list(np.cumsum(np.log(np.arange(1, ncut))))
    )
    phase = np.exp(1j * n * np.angle(alpha))
    amp = np.exp(logmag - abs(alpha) ** 2 / 2) * phase
    norm2 = float(np.sum(np.abs(amp) ** 2))
    tail = 1.0 - norm2
    if tail > tail_threshold:
        raise TruncationError(
            f"coherent tail mass {tail:.3e} above threshold {tail_threshold:.1e}"
            f" (|alpha|={abs(alpha)}, ncut={ncut})"
        )
    return amp / np.sqrt(norm2)
