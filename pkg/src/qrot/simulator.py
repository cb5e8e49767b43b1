"""Exact statevector evolution and seeded shot sampling.

Conventions
-----------
* Qubit 0 is the least-significant bit of a basis-state index; outcome
  bitstrings are printed most-significant-first, so the last character of a
  bitstring is qubit 0.
* Measurement bases are per-qubit Pauli labels. "Z" measures directly; "X"
  applies H before measuring; "Y" applies RZ(-pi/2) then H. Basis-change
  gates are ordinary gates and are subject to gate noise like any other.
* Randomness comes from numpy's Philox counter-based generator keyed by a
  64-bit seed, so identical inputs give byte-identical counts. Per sampling
  job the stream is consumed in fixed blocks: with stochastic gate noise,
  uniforms for (noise trigger, Pauli choice) per gate and shot, then one
  measurement uniform per shot, then readout-flip uniforms; without gate
  noise only the measurement and readout blocks are drawn. A partition of
  the shot range can therefore reproduce its rows by advancing the counter,
  and merged counts do not depend on how shots are batched.
* Gate noise: after each gate, with the configured depolarizing probability
  (``depol_ctrl`` for controlled gates, ``depol_1q`` otherwise), one Pauli
  chosen uniformly from {X, Y, Z} is applied to the gate's target qubit.
  ``readout_flip`` flips each measured bit independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, GateOp
from .errors import DomainError, NumericError, ShapeError
from .linalg import PAULI_X, PAULI_Y, PAULI_Z
from .rotation import gate_rx, gate_ry, gate_rz

_MASK64 = (1 << 64) - 1

_CONST_GATES = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0),
    "X": PAULI_X,
}
_PARAM_GATES = {"RX": gate_rx, "RY": gate_ry, "RZ": gate_rz}

BASIS_LABELS = ("X", "Y", "Z")


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing probabilities per gate plus an independent readout flip."""

    depol_1q: float = 0.0
    depol_ctrl: float = 0.0
    readout_flip: float = 0.0

    def __post_init__(self):
        for name in ("depol_1q", "depol_ctrl", "readout_flip"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise DomainError(f"{name} must be a probability in [0, 1], got {p!r}")

    @property
    def is_noiseless(self) -> bool:
        return self.depol_1q == 0.0 and self.depol_ctrl == 0.0 and self.readout_flip == 0.0


NOISELESS = NoiseModel()


@dataclass
class ShotResult:
    """Counts per outcome bitstring for one measurement basis."""

    basis: tuple[str, ...]
    counts: dict[str, int]
    shots: int


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_seed(seed: int, *path: int) -> int:
    """Derive an independent child seed from ``seed`` and an index path.

    Uses splitmix64 mixing, so the derivation is documented, cheap, and
    reproducible from the integers alone.
    """
    s = int(seed) & _MASK64
    for part in path:
        s = _splitmix64(s ^ _splitmix64(int(part) & _MASK64))
    return s


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed) & _MASK64))


def zero_state(num_qubits: int) -> np.ndarray:
    state = np.zeros(1 << num_qubits, dtype=complex)
    state[0] = 1.0
    return state


def _gate_matrix(op: GateOp) -> np.ndarray:
    if op.kind in _CONST_GATES:
        return _CONST_GATES[op.kind]
    return _PARAM_GATES[op.kind](op.theta)


def _matmul_axis(arr: np.ndarray, mat: np.ndarray, axis: int) -> np.ndarray:
    moved = np.moveaxis(arr, axis, -1)
    return np.moveaxis(moved @ mat.T, -1, axis)


def _apply_matrix(t: np.ndarray, mat: np.ndarray, target: int, n: int,
                  controls=()) -> np.ndarray:
    """Apply a 2x2 matrix to one qubit of a batched state tensor.

    ``t`` has shape (batch, 2, ..., 2) with qubit q on axis 1 + (n - 1 - q).
    Controlled gates act in place on the slice selected by the triggers, so
    ``t`` must be owned by the caller.
    """
    axis = 1 + (n - 1 - target)
    if not controls:
        return _matmul_axis(t, mat, axis)
    sl: list = [slice(None)] * (n + 1)
    for q, trig in controls:
        sl[1 + (n - 1 - q)] = trig
    # Integer indices collapse their axes, shifting the target axis left.
    shift = sum(1 for q, _ in controls if 1 + (n - 1 - q) < axis)
    t[tuple(sl)] = _matmul_axis(t[tuple(sl)], mat, axis - shift)
    return t


def _apply_ops_batched(states: np.ndarray, ops, n: int) -> np.ndarray:
    t = states.reshape((-1,) + (2,) * n)
    for op in ops:
        t = _apply_matrix(t, _gate_matrix(op), op.target, n, op.controls)
    return t.reshape(states.shape)


def apply(circuit: Circuit, initial) -> np.ndarray:
    """Evolve ``initial`` through the circuit exactly; returns the final state."""
    initial = np.asarray(initial, dtype=complex).reshape(-1)
    dim = 1 << circuit.num_qubits
    if initial.shape != (dim,):
        raise ShapeError(
            f"state has {initial.shape[0]} amplitudes; circuit width {circuit.num_qubits} "
            f"needs {dim}")
    if abs(np.linalg.norm(initial) - 1.0) > 1e-10:
        raise DomainError("initial state must be normalized")
    out = _apply_ops_batched(initial[None, :].copy(), circuit.ops, circuit.num_qubits)[0]
    if abs(np.linalg.norm(out) - 1.0) > 1e-10:
        raise NumericError("statevector norm drifted beyond 1e-10")
    return out


def _basis_change_ops(basis, n: int) -> list[GateOp]:
    ops: list[GateOp] = []
    for q, label in enumerate(basis):
        if label == "Z":
            continue
        if label == "X":
            ops.append(GateOp("H", q))
        elif label == "Y":
            ops.append(GateOp("RZ", q, -math.pi / 2.0))
            ops.append(GateOp("H", q))
        else:
            raise DomainError(f"invalid basis label {label!r}; expected X, Y or Z")
    return ops


def _born_outcomes(states: np.ndarray, u: np.ndarray) -> np.ndarray:
    probs = np.abs(states) ** 2
    probs /= probs.sum(axis=1, keepdims=True)
    cum = np.cumsum(probs, axis=1)
    return np.minimum((u[:, None] >= cum).sum(axis=1), states.shape[1] - 1)


def _sample_trajectories(ops, n: int, shots: int, noise: NoiseModel,
                         rng: np.random.Generator) -> np.ndarray:
    """Per-shot stochastic-Pauli trajectories, vectorized across shots."""
    dim = 1 << n
    num_gates = len(ops)
    fire = rng.random((shots, num_gates))
    which = rng.random((shots, num_gates))
    u_meas = rng.random(shots)
    states = np.zeros((shots, dim), dtype=complex)
    states[:, 0] = 1.0
    t = states.reshape((shots,) + (2,) * n)
    paulis = (PAULI_X, PAULI_Y, PAULI_Z)
    for g, op in enumerate(ops):
        t = _apply_matrix(t, _gate_matrix(op), op.target, n, op.controls)
        p = noise.depol_ctrl if op.controls else noise.depol_1q
        if p <= 0.0:
            continue
        hit = fire[:, g] < p
        if not hit.any():
            continue
        pick = np.minimum((which[:, g] * 3).astype(int), 2)
        for k, pauli in enumerate(paulis):
            rows = hit & (pick == k)
            if rows.any():
                t[rows] = _apply_matrix(t[rows], pauli, op.target, n)
    return _born_outcomes(t.reshape(shots, dim), u_meas)


def sample(circuit: Circuit, basis, shots: int, noise: NoiseModel | None = None,
           seed: int = 0) -> ShotResult:
    """Run the circuit from |0...0>, measure every qubit, return counts.

    ``basis`` gives one Pauli label per qubit (index order). Deterministic
    for fixed ``(circuit, basis, shots, noise, seed)``.
    """
    noise = NOISELESS if noise is None else noise
    if shots < 1:
        raise DomainError(f"shots must be >= 1, got {shots}")
    n = circuit.num_qubits
    basis = tuple(str(b).upper() for b in basis)
    if len(basis) != n:
        raise DomainError(f"expected {n} basis labels, got {len(basis)}")
    all_ops = list(circuit.ops) + _basis_change_ops(basis, n)
    rng = _rng(seed)
    if noise.depol_1q == 0.0 and noise.depol_ctrl == 0.0:
        final = _apply_ops_batched(zero_state(n)[None, :], all_ops, n)
        outcomes = _born_outcomes(np.broadcast_to(final, (shots, 1 << n)),
                                  rng.random(shots))
    else:
        outcomes = _sample_trajectories(all_ops, n, shots, noise, rng)
    if noise.readout_flip > 0.0:
        flips = rng.random((shots, n)) < noise.readout_flip
        outcomes = outcomes ^ (flips.astype(np.int64) << np.arange(n)).sum(axis=1)
    binc = np.bincount(outcomes, minlength=1 << n)
    counts = {format(j, f"0{n}b"): int(cnt) for j, cnt in enumerate(binc) if cnt}
    return ShotResult(basis=basis, counts=counts, shots=int(shots))


def expectation_from_counts(result: ShotResult, qubit: int) -> float:
    """Expectation of the measured Pauli on one qubit: (N_plus - N_minus)/shots.

    Outcome bit 0 counts as +1, bit 1 as -1.
    """
    if not result.counts:
        raise DomainError("empty counts")
    n = len(result.basis)
    if not 0 <= qubit < n:
        raise DomainError(f"qubit {qubit} out of range for {n} measured qubits")
    pos = 0
    for bits, cnt in result.counts.items():
        if bits[n - 1 - qubit] == "0":
            pos += cnt
    return (2 * pos - result.shots) / result.shots
