"""QUBO matrix assembly for the L0-regularized least-squares objective.

The objective  ||A x - b||^2 + lambda * ||x||_0  over fixed-point encoded x
is lowered to a quadratic form over binary spins:

    energy(q) = q^T W q + h

with W symmetric and h the exact constant carried along so that the energy
equals the true objective value (not just the same argmin). The squared
error lowers directly; the cardinality term is quadratic for P <= 2 and
needs one ancilla spin per coordinate for P >= 3, where for each data
assignment the minimum of the energy over the ancilla bits equals the true
nonzero count.

Index layout: spin (i, p) of coordinate i and bit p lives at i*P + p;
ancilla i (when present) lives at N*P + i.

Symmetric convention: a bilinear coefficient c on q_a q_b is stored as c/2
at both (a, b) and (b, a); ``to_coo_lines`` exports the upper triangle with
full coefficients for tools using that convention instead.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .encoding import FixedPointFormat, zero_codes

__all__ = [
    "QuboProblem",
    "BaseTerms",
    "build_base_terms",
    "build_l2_qubo",
    "build_l0_qubo",
    "assemble_total",
]

SYMMETRY_RTOL = 1e-12


@dataclass(frozen=True)
class QuboProblem:
    """Symmetric QUBO matrix with its exact constant offset.

    ``n_ancilla`` trailing spins are auxiliary: they belong to the
    cardinality construction, not to the encoded signal.
    """

    W: np.ndarray
    h: float
    n_ancilla: int = 0
    fmt: FixedPointFormat | None = field(default=None, repr=False)

    def __post_init__(self):
        W = np.asarray(self.W, dtype=np.float64)
        if W.ndim != 2 or W.shape[0] != W.shape[1]:
            raise ValueError(f"W must be square, got shape {W.shape}")
        scale = np.abs(W).max() if W.size else 0.0
        if not np.allclose(W, W.T, rtol=0.0, atol=SYMMETRY_RTOL * max(scale, 1.0)):
            raise ValueError("W must be symmetric")
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "h", float(self.h))

    @property
    def n_spins(self) -> int:
        return self.W.shape[0]

    def energy(self, q) -> float:
        """q^T W q + h for one binary assignment."""
        q = np.asarray(q, dtype=np.float64)
        if q.shape != (self.n_spins,):
            raise ValueError(f"expected {self.n_spins} spins, got shape {q.shape}")
        return float(q @ self.W @ q + self.h)

    def energies(self, Q) -> np.ndarray:
        """Energies of a batch of assignments (rows of Q)."""
        Q = np.asarray(Q, dtype=np.float64)
        return np.einsum("ij,jk,ik->i", Q, self.W, Q) + self.h

    def to_dense_csv(self, matrix_path, meta_path) -> None:
        """Dense CSV matrix plus a JSON sidecar with {h, n_spins, n_ancilla}."""
        from .instances import save_matrix_csv

        save_matrix_csv(matrix_path, self.W)
        meta = {"h": self.h, "n_spins": self.n_spins, "n_ancilla": self.n_ancilla}
        with open(meta_path, "w", encoding="ascii") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")

    def to_coo_lines(self, tol: float = 0.0) -> list[str]:
        """Upper-triangular 'i j value' lines with full bilinear coefficients.

        Off-diagonal couplings are emitted once as W[i,j] + W[j,i]; entries
        with |value| <= tol are dropped.
        """
        lines = []
        D = self.n_spins
        for i in range(D):
            v = float(self.W[i, i])
            if abs(v) > tol:
                lines.append(f"{i} {i} {v!r}")
            for j in range(i + 1, D):
                v = float(self.W[i, j] + self.W[j, i])
                if abs(v) > tol:
                    lines.append(f"{i} {j} {v!r}")
        return lines

    def to_coo(self, path, tol: float = 0.0) -> None:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write("\n".join(self.to_coo_lines(tol)) + "\n")


@dataclass(frozen=True)
class BaseTerms:
    """Quadratic/linear/constant pieces of ||A x - b||^2 in signal space:

    ||A x - b||^2 = x^T W1 x + sum_i x_i lin[i] + h.
    """

    W1: np.ndarray
    lin: np.ndarray
    h: float

    def objective(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        return float(x @ self.W1 @ x + self.lin @ x + self.h)


def build_base_terms(A, b) -> BaseTerms:
    """Expand the squared error into Gram-matrix form: W1 = A^T A,
    lin = -2 A^T b, h = ||b||^2."""
    A = np.asarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if A.ndim != 2 or b.shape != (A.shape[0],):
        raise ValueError(f"shape mismatch: A is {A.shape}, b is {b.shape}")
    return BaseTerms(W1=A.T @ A, lin=-2.0 * (A.T @ b), h=float(b @ b))


def build_l2_qubo(A, b, fmt: FixedPointFormat) -> QuboProblem:
    """QUBO whose energy equals ||A x(q) - b||^2 for every spin assignment.

    Substituting the fixed-point expansion of x into the Gram form gives a
    bilinear coefficient 2^(s+p) * d_i * d_j * (A^T A)_{ij} on bit pair
    ((i,s),(j,p)), a linear term on each bit collecting the cross terms
    with the offsets c_min, and a constant absorbing everything that does
    not depend on q. Diagonal bilinear terms act linearly because q^2 = q,
    which the quadratic form already honors without rearrangement.
    """
    A = np.asarray(A, dtype=np.float64)
    if fmt.N != A.shape[1]:
        raise ValueError(f"format describes {fmt.N} coordinates, A has {A.shape[1]} columns")
    base = build_base_terms(A, b)
    weights = np.power(2.0, np.arange(fmt.P))

    scaled = base.W1 * np.outer(fmt.d, fmt.d)
    W = np.kron(scaled, np.outer(weights, weights))

    lin_coord = fmt.d * (base.lin + 2.0 * (base.W1 @ fmt.c_min))
    W[np.diag_indices_from(W)] += np.kron(lin_coord, weights)

    h = float(fmt.c_min @ base.W1 @ fmt.c_min + base.lin @ fmt.c_min + base.h)
    return QuboProblem(W=W, h=h, n_ancilla=0, fmt=fmt)


def _monomial_expansion(code: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """Expand 1 - prod_p y_p over the raw bits of one coordinate, where
    y_p = q_p when code[p] = 1 and y_p = 1 - q_p otherwise.

    The product is an indicator of "this block equals its zero code", so
    the expansion is the coordinate's exact contribution to the nonzero
    count. Returns (constant, linear coefficients, bilinear coefficient
    matrix with full coefficients above the diagonal). Only usable for
    P <= 2, where no monomial of degree > 2 survives.
    """
    P = code.shape[0]
    affine = np.where(code == 1, 0.0, 1.0)  # y_p = affine[p] + sign[p] * q_p
    sign = np.where(code == 1, 1.0, -1.0)

    const = 1.0
    lin = np.zeros(P)
    quad = np.zeros((P, P))
    for subset in range(2**P):
        members = [p for p in range(P) if (subset >> p) & 1]
        coeff = 1.0
        for p in range(P):
            coeff *= sign[p] if (subset >> p) & 1 else affine[p]
        if coeff == 0.0:
            continue
        if len(members) == 0:
            const -= coeff
        elif len(members) == 1:
            lin[members[0]] -= coeff
        elif len(members) == 2:
            quad[members[0], members[1]] -= coeff
        else:
            raise ValueError("monomial of degree > 2; use the ancilla construction")
    return const, lin, quad


def build_l0_qubo(fmt: FixedPointFormat) -> QuboProblem:
    """QUBO computing the number of nonzero coordinates of the decoded signal.

    P = 1: one diagonal entry per coordinate (identity matrix in the plain
    binary format where the zero code is 0).

    P = 2: per-coordinate 2x2 blocks from the exact expansion of the
    zero-code indicator; energies are exact integers.

    P >= 3: the zero-code indicator of a coordinate is a degree-P monomial,
    replaced by min over one ancilla bit s of s * (sum_p y_p - (P - 1)).
    That minimum is 1 exactly when all transformed bits y are active, so
    for every data assignment the ancilla-minimized energy equals the true
    nonzero count. Couplings after substituting raw bits: -1 between the
    ancilla and bits whose zero code is 1, +1 for bits whose zero code is
    0, and a diagonal ancilla term (P - 1) - (number of zero-code zeros).
    """
    N, P = fmt.N, fmt.P
    codes = zero_codes(fmt)

    if P <= 2:
        W = np.zeros((N * P, N * P))
        h = 0.0
        for i in range(N):
            const, lin, quad = _monomial_expansion(codes[i])
            h += const
            block = slice(i * P, (i + 1) * P)
            W[block, block] += np.diag(lin) + 0.5 * (quad + quad.T)
        return QuboProblem(W=W, h=h, n_ancilla=0, fmt=fmt)

    D = N * (P + 1)
    W = np.zeros((D, D))
    for i in range(N):
        anc = N * P + i
        coupling = np.where(codes[i] == 1, -1.0, 1.0)
        W[i * P : (i + 1) * P, anc] = 0.5 * coupling
        W[anc, i * P : (i + 1) * P] = 0.5 * coupling
        W[anc, anc] = (P - 1) - float(np.sum(codes[i] == 0))
    return QuboProblem(W=W, h=float(N), n_ancilla=N, fmt=fmt)


def assemble_total(l2: QuboProblem, l0: QuboProblem, lam: float) -> QuboProblem:
    """Combined problem W_l2 (zero-padded over ancillas) + lam * W_l0."""
    if lam < 0:
        raise ValueError(f"penalty weight must be >= 0, got {lam}")
    if l2.fmt is not l0.fmt and (
        l2.fmt is None
        or l0.fmt is None
        or l2.fmt.P != l0.fmt.P
        or not np.array_equal(l2.fmt.c_min, l0.fmt.c_min)
        or not np.array_equal(l2.fmt.d, l0.fmt.d)
    ):
        raise ValueError("squared-error and cardinality terms use different formats")
    if l2.n_ancilla != 0:
        raise ValueError("squared-error term must not carry ancillas")
    D = l0.n_spins
    W = np.zeros((D, D))
    nd = l2.n_spins
    if nd > D:
        raise ValueError("size mismatch between the two terms")
    W[:nd, :nd] = l2.W
    W += lam * l0.W
    return QuboProblem(
        W=W, h=l2.h + lam * l0.h, n_ancilla=l0.n_ancilla, fmt=l2.fmt
    )
