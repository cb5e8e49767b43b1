"""State and process reconstruction from sampled counts.

State tomography measures the data qubit in the three Pauli bases, forms the
raw linear-inversion estimate mu = (I + r . sigma)/2, and projects it to the
nearest physical density matrix by flooring negative eigenvalues while
spreading the deficit over the rest (trace and eigenvectors preserved).

Process tomography (single qubit) prepares the four spanning inputs
|0>, |1>, |+>, |+i>, reconstructs each output state by plain linear
inversion, assembles the Choi matrix block-wise, projects it to positive
semidefinite at trace 2, and reads the channel's Kraus operators off the
eigendecomposition: K_i = sqrt(lambda_i) * column-major reshape of the i-th
eigenvector. The reconstructed unitary is the polar-unitary factor of the
dominant Kraus operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls

from .bloch import state_to_bloch
from .circuit import Circuit, GateOp
from .errors import DomainError, NumericError, ShapeError
from .linalg import (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z, dagger, eig_hermitian,
                     is_unitary, max_abs, polar_unitary, trace)
from .rotation import RotationSpec, ErParams, axis_rotation_sequence, erp_from_unitary
from .simulator import (BASIS_LABELS, NoiseModel, ShotResult, derive_seed,
                        expectation_from_counts, sample)

MIN_SHOTS = 100

# Gate realizations of the four spanning input states.
_PREP_OPS = {
    "0": (),
    "1": (GateOp("X", 0),),
    "+": (GateOp("RY", 0, math.pi / 2.0),),
    "+i": (GateOp("RY", 0, math.pi / 2.0), GateOp("RZ", 0, math.pi / 2.0)),
}
_PREP_STATES = {
    "0": np.array([1.0, 0.0], dtype=complex),
    "1": np.array([0.0, 1.0], dtype=complex),
    "+": np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0),
    "+i": np.array([1.0, 1.0j], dtype=complex) / math.sqrt(2.0),
}
PREP_LABELS = ("0", "1", "+", "+i")


@dataclass
class KrausSet:
    """Kraus operators with their Choi eigenvalue weights; sum K_i^dag K_i = I."""

    operators: list[np.ndarray]
    weights: list[float]

    def completeness_error(self) -> float:
        total = sum(dagger(k) @ k for k in self.operators)
        return max_abs(total - np.eye(2))


@dataclass
class StateTomographyResult:
    density: np.ndarray          # 2x2, PSD, trace 1
    bloch: np.ndarray            # Bloch vector of the dominant eigenvector
    expectations: dict[str, float]
    counts: dict[str, ShotResult]


@dataclass
class ProcessTomographyResult:
    choi: np.ndarray             # 4x4, PSD, trace 2 after projection
    kraus: KrausSet
    unitary: np.ndarray          # polar-unitary factor of the dominant Kraus
    degenerate: bool             # True when the dominant Choi eigenvalue is nearly tied


def _floor_spectrum(values_desc: np.ndarray) -> np.ndarray:
    """Zero out eigenvalues that would stay negative and spread the deficit
    over the remaining ones; preserves the total exactly."""
    out = np.asarray(values_desc, dtype=float).copy()
    acc = 0.0
    for i in range(out.size - 1, -1, -1):
        if out[i] + acc / (i + 1) < 0.0:
            acc += out[i]
            out[i] = 0.0
        else:
            out[: i + 1] += acc / (i + 1)
            break
    return out


def smolin_project(mu) -> np.ndarray:
    """Maximum-likelihood projection of a Hermitian trace-1 matrix onto the
    physical density matrices (eigenvalue flooring; eigenvectors unchanged)."""
    mu = np.asarray(mu, dtype=complex)
    if mu.ndim != 2 or mu.shape[0] != mu.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {mu.shape}")
    if max_abs(mu - dagger(mu)) > 1e-8:
        raise DomainError("input must be Hermitian")
    if abs(trace(mu).real - 1.0) > 1e-6:
        raise DomainError(f"input must have trace 1, got {trace(mu).real!r}")
    values, vectors = eig_hermitian(mu)
    floored = _floor_spectrum(values)
    rho = vectors @ np.diag(floored) @ dagger(vectors)
    return (rho + dagger(rho)) / 2.0


def density_from_bloch(r) -> np.ndarray:
    return 0.5 * (PAULI_I + r[0] * PAULI_X + r[1] * PAULI_Y + r[2] * PAULI_Z)


def _marginal_freqs(result: ShotResult, qubit: int) -> np.ndarray:
    n = len(result.basis)
    f = np.zeros(2)
    for bits, cnt in result.counts.items():
        f[int(bits[n - 1 - qubit])] += cnt
    return f / result.shots


def _measured_bloch(circuit: Circuit, data_qubit: int, shots: int,
                    noise: NoiseModel | None, seed: int, cal,
                    counts_out: dict | None = None) -> np.ndarray:
    r = np.empty(3)
    for bi, label in enumerate(BASIS_LABELS):
        basis = ["Z"] * circuit.num_qubits
        basis[data_qubit] = label
        res = sample(circuit, basis, shots, noise, derive_seed(seed, bi))
        if counts_out is not None:
            counts_out[label] = res
        if cal is not None:
            p = mitigate_frequencies(_marginal_freqs(res, data_qubit), cal)
            r[bi] = float(p[0] - p[1])
        else:
            r[bi] = expectation_from_counts(res, data_qubit)
    return r


def state_tomography(circuit: Circuit, data_qubit: int = 0, shots: int = 20000,
                     noise: NoiseModel | None = None, seed: int = 0,
                     mitigate: bool = False) -> StateTomographyResult:
    """Reconstruct the data qubit's state from three basis-sampled jobs of
    ``shots`` each; returns the projected density matrix and the Bloch vector
    of its dominant eigenvector."""
    if shots < MIN_SHOTS:
        raise DomainError(f"shots must be >= {MIN_SHOTS} for tomography, got {shots}")
    cal = calibrate_readout(noise, shots, derive_seed(seed, 3), 1) if mitigate else None
    counts: dict[str, ShotResult] = {}
    r = _measured_bloch(circuit, data_qubit, shots, noise, seed, cal, counts)
    rho = smolin_project(density_from_bloch(r))
    _, vectors = eig_hermitian(rho)
    bloch = state_to_bloch(vectors[:, 0])
    return StateTomographyResult(
        density=rho, bloch=bloch,
        expectations=dict(zip(BASIS_LABELS, (float(x) for x in r))),
        counts=counts)


def _reconstruct_process(outputs: dict[str, np.ndarray]) -> ProcessTomographyResult:
    """Assemble and project the Choi matrix from the four output states, then
    extract Kraus operators and the closest unitary."""
    e00, e11 = outputs["0"], outputs["1"]
    e01 = outputs["+"] + 1j * outputs["+i"] - (1.0 + 1.0j) / 2.0 * (e00 + e11)
    choi = np.block([[e00, e01], [dagger(e01), e11]])
    values, vectors = eig_hermitian(choi)
    floored = _floor_spectrum(values)
    choi = vectors @ np.diag(floored) @ dagger(vectors)
    choi = (choi + dagger(choi)) / 2.0
    operators = []
    weights = []
    for k in range(4):
        w = float(max(floored[k], 0.0))
        operators.append(math.sqrt(w) * vectors[:, k].reshape(2, 2, order="F"))
        weights.append(w)
    degenerate = bool(floored[0] - floored[1] < 1e-6 and floored[1] > 0.1)
    unitary = polar_unitary(operators[0])
    return ProcessTomographyResult(choi=choi, kraus=KrausSet(operators, weights),
                                   unitary=unitary, degenerate=degenerate)


def process_tomography(spec: RotationSpec, shots: int = 20000,
                       noise: NoiseModel | None = None, seed: int = 0,
                       mitigate: bool = False) -> ProcessTomographyResult:
    """Sampled process tomography of the rotation circuit: 4 input states
    x 3 measurement bases, ``shots`` per circuit."""
    if shots < MIN_SHOTS:
        raise DomainError(f"shots must be >= {MIN_SHOTS} for tomography, got {shots}")
    rotation_ops = axis_rotation_sequence(spec)
    cal = calibrate_readout(noise, shots, derive_seed(seed, 12), 1) if mitigate else None
    outputs = {}
    for pi_, prep in enumerate(PREP_LABELS):
        circuit = Circuit(1, _PREP_OPS[prep] + rotation_ops)
        r = _measured_bloch(circuit, 0, shots, noise, derive_seed(seed, 4 + pi_), cal)
        outputs[prep] = density_from_bloch(r)
    return _reconstruct_process(outputs)


def process_tomography_exact(u) -> ProcessTomographyResult:
    """Process tomography of a 2x2 unitary from analytic (infinite-shot)
    expectation values; isolates the reconstruction algebra from shot noise."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ShapeError(f"expected a 2x2 matrix, got shape {u.shape}")
    if not is_unitary(u, 1e-6):
        raise DomainError("matrix is not unitary within tolerance")
    outputs = {}
    for prep, psi in _PREP_STATES.items():
        out = u @ psi
        outputs[prep] = np.outer(out, out.conj())
    return _reconstruct_process(outputs)


def gate_fidelity(u_exact, u_rec) -> float:
    """Phase-invariant overlap |Tr(U^dag V)|^2 / 4 between two 2x2 unitaries."""
    u_exact = np.asarray(u_exact, dtype=complex)
    u_rec = np.asarray(u_rec, dtype=complex)
    if u_exact.shape != (2, 2) or u_rec.shape != (2, 2):
        raise ShapeError(
            f"expected 2x2 matrices, got {u_exact.shape} and {u_rec.shape}")
    for m in (u_exact, u_rec):
        if not is_unitary(m, 1e-3):
            raise DomainError("inputs must be unitary within 1e-3")
    return float(abs(np.trace(dagger(u_exact) @ u_rec)) ** 2 / 4.0)


def erp_from_tomography(spec: RotationSpec, shots: int = 20000,
                        noise: NoiseModel | None = None, seed: int = 0,
                        mitigate: bool = False) -> ErParams:
    """Euler-Rodrigues parameters of the tomography-reconstructed unitary."""
    result = process_tomography(spec, shots, noise, seed, mitigate)
    return erp_from_unitary(result.unitary, unitarity_tol=1e-3)


def calibrate_readout(noise: NoiseModel | None, shots: int, seed: int = 0,
                      num_qubits: int = 1) -> np.ndarray:
    """Estimate the readout confusion matrix by prepare-and-measure runs.

    Column j holds the outcome frequencies observed when basis state j is
    prepared; columns sum to 1 exactly.
    """
    if num_qubits < 1:
        raise DomainError(f"num_qubits must be >= 1, got {num_qubits}")
    if shots < 1:
        raise DomainError(f"shots must be >= 1, got {shots}")
    dim = 1 << num_qubits
    cal = np.zeros((dim, dim))
    for j in range(dim):
        prep = tuple(GateOp("X", q) for q in range(num_qubits) if (j >> q) & 1)
        res = sample(Circuit(num_qubits, prep), ("Z",) * num_qubits, shots,
                     noise, derive_seed(seed, j))
        for bits, cnt in res.counts.items():
            cal[int(bits, 2), j] = cnt
    return cal / shots


def mitigate_frequencies(freqs, cal) -> np.ndarray:
    """Solve cal @ p = freqs by nonnegative least squares; p is clipped to
    >= 0 and renormalized to sum 1."""
    cal = np.asarray(cal, dtype=float)
    freqs = np.asarray(freqs, dtype=float).reshape(-1)
    if cal.ndim != 2 or cal.shape[0] != cal.shape[1]:
        raise ShapeError(f"calibration matrix must be square, got {cal.shape}")
    if freqs.shape[0] != cal.shape[0]:
        raise ShapeError(
            f"frequency vector of length {freqs.shape[0]} does not match "
            f"calibration dimension {cal.shape[0]}")
    gram_values, _ = eig_hermitian(cal.T @ cal)
    smallest = float(gram_values[-1])
    if smallest <= 0.0 or math.sqrt(gram_values[0] / smallest) > 1e8:
        raise NumericError("calibration matrix is numerically singular")
    p, _ = nnls(cal, freqs)
    p = np.clip(p, 0.0, None)
    total = p.sum()
    if total <= 0.0:
        raise NumericError("mitigation produced an all-zero probability vector")
    return p / total


def mitigate_counts(result: ShotResult, cal) -> np.ndarray:
    """Readout-corrected outcome frequencies for a full shot result."""
    n = len(result.basis)
    freqs = np.zeros(1 << n)
    for bits, cnt in result.counts.items():
        freqs[int(bits, 2)] = cnt
    return mitigate_frequencies(freqs / result.shots, cal)
