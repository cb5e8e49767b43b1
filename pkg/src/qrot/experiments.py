"""Seeded experiment pipelines behind the CLI: single rotations, the worked
example, and fidelity/angle sweeps over a logarithmic shot grid."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bloch import angle_between, vec_to_angles
from .circuit import Circuit
from .errors import DomainError
from .multirot import MultiRotationPlan, extract_all
from .rotation import (RotationSpec, axis_rotation_sequence, axis_rotation_unitary,
                       erp_from_spec, erp_from_unitary, initialization_ops,
                       rodrigues_rotate)
from .simulator import NoiseModel, derive_seed
from .tomography import (erp_from_tomography, gate_fidelity, process_tomography,
                         state_tomography)

NOISE_PRESETS = {
    "ideal": NoiseModel(),
    # Plausibility knobs, not measured device data. Both channels shrink
    # Bloch components isotropically, so they blur tomography statistics
    # without biasing the reconstructed rotation.
    "nisq-lite": NoiseModel(depol_1q=0.001, depol_ctrl=0.01, readout_flip=0.02),
}

DEFAULT_SHOT_RANGE = (200, 20000)
DEFAULT_GRID_POINTS = 20
DEFAULT_TRIALS = 20


@dataclass
class SweepRecord:
    backend: str
    trial: int
    shots: int
    metric: str   # "gate_fidelity" or "angle_deg"
    value: float


def log_shot_grid(lo: int = DEFAULT_SHOT_RANGE[0], hi: int = DEFAULT_SHOT_RANGE[1],
                  points: int = DEFAULT_GRID_POINTS) -> list[int]:
    """Logarithmically spaced integer shot counts, duplicates removed."""
    if lo < 1 or hi < lo or points < 1:
        raise DomainError(f"invalid shot grid ({lo}, {hi}, {points})")
    grid = np.rint(np.geomspace(lo, hi, points)).astype(int)
    out: list[int] = []
    for s in grid:
        if not out or s != out[-1]:
            out.append(int(s))
    return out


def random_unit_vector(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_spec(rng: np.random.Generator) -> RotationSpec:
    return RotationSpec(random_unit_vector(rng), float(rng.uniform(0.0, 2.0 * math.pi)))


def seeded_rotations(seed: int, count: int) -> list[RotationSpec]:
    rng = np.random.Generator(np.random.Philox(key=derive_seed(seed, 1)))
    return [random_spec(rng) for _ in range(count)]


def seeded_vectors(seed: int, count: int) -> list[np.ndarray]:
    rng = np.random.Generator(np.random.Philox(key=derive_seed(seed, 2)))
    return [random_unit_vector(rng) for _ in range(count)]


def rotation_circuit(vector, spec: RotationSpec) -> Circuit:
    """Initialize a qubit to ``vector`` and rotate it: the single-vector pipeline."""
    return Circuit(1, initialization_ops(vector) + axis_rotation_sequence(spec))


def rotate_report(spec: RotationSpec, vector, shots: int, noise: NoiseModel | None,
                  seed: int, mitigate: bool = False) -> dict:
    """Rotate one vector classically and through sampled tomography."""
    oracle = rodrigues_rotate(spec, vector)
    result = state_tomography(rotation_circuit(vector, spec), 0, shots, noise,
                              seed, mitigate)
    return {
        "axis": [float(x) for x in spec.axis],
        "angle_r": spec.angle_r,
        "vector": [float(x) for x in vector],
        "oracle": [float(x) for x in oracle],
        "extracted": [float(x) for x in result.bloch],
        "angle_deg": math.degrees(angle_between(result.bloch, oracle)),
        "shots": shots,
        "seed": seed,
    }


def erp_report(spec: RotationSpec, shots: int | None, noise: NoiseModel | None,
               seed: int, mitigate: bool = False) -> dict:
    """Euler-Rodrigues parameters via the classical formula, the exact circuit
    unitary, and (when shots are given) sampled process tomography."""
    classical = erp_from_spec(spec).canonical()
    circuit = erp_from_unitary(axis_rotation_unitary(spec))
    report = {
        "axis": [float(x) for x in spec.axis],
        "angle_r": spec.angle_r,
        "classical": [float(x) for x in classical],
        "circuit": [float(x) for x in circuit],
        "tomography": None,
        "delta": None,
        "seed": seed,
    }
    if shots is not None:
        tomo = erp_from_tomography(spec, shots, noise, seed, mitigate)
        report["tomography"] = [float(x) for x in tomo]
        report["delta"] = [float(t - c) for t, c in zip(tomo, classical)]
        report["shots"] = shots
    return report


EXAMPLE_AXIS = (2.0, 1.0, 1.0)
EXAMPLE_VECTOR = (1.0, 1.0, 1.0)
EXAMPLE_ANGLE_DEG = 90.0


def example_report(shots: int = 20000, noise: NoiseModel | None = None,
                   seed: int = 7, mitigate: bool = False) -> dict:
    """The demonstration pipeline: rotate (1,1,1)/sqrt(3) by 90 degrees about
    (2,1,1)/sqrt(6), extracting parameters and the rotated vector."""
    axis = np.asarray(EXAMPLE_AXIS) / np.linalg.norm(EXAMPLE_AXIS)
    vector = np.asarray(EXAMPLE_VECTOR) / np.linalg.norm(EXAMPLE_VECTOR)
    spec = RotationSpec(axis, math.radians(EXAMPLE_ANGLE_DEG))
    theta_i, phi_i = vec_to_angles(vector)
    theta_n, phi_n = vec_to_angles(axis)
    gates = [{"kind": op.kind, "theta": op.theta} for op in axis_rotation_sequence(spec)]
    report = {
        "axis": [float(x) for x in axis],
        "vector": [float(x) for x in vector],
        "angle_r": spec.angle_r,
        "angle_deg": EXAMPLE_ANGLE_DEG,
        "init_angles": {"theta": theta_i, "phi": phi_i},
        "axis_angles": {"theta": theta_n, "phi": phi_n},
        "gate_sequence": gates,
        "erp_classical": [float(x) for x in erp_from_spec(spec).canonical()],
        "erp_circuit": [float(x) for x in erp_from_unitary(axis_rotation_unitary(spec))],
        "shots": shots,
        "seed": seed,
    }
    tomo_erp = erp_from_tomography(spec, shots, noise, derive_seed(seed, 10), mitigate)
    report["erp_tomography"] = [float(x) for x in tomo_erp]
    rotated = rotate_report(spec, vector, shots, noise, derive_seed(seed, 11), mitigate)
    report["oracle"] = rotated["oracle"]
    report["extracted"] = rotated["extracted"]
    report["angle_diff_deg"] = rotated["angle_deg"]
    return report


def multi_report(plan: MultiRotationPlan, shots_per_vector: int,
                 noise: NoiseModel | None, seed: int,
                 mitigate: bool = False) -> list[dict]:
    """Run the batched pipeline and pair each extraction with its oracle."""
    extracted = extract_all(plan, shots_per_vector, noise, seed, mitigate)
    entries = []
    for item in extracted:
        spec = plan.rotations if plan.is_uniform else plan.rotations[item.index - 1]
        vec_in = plan.batch.vectors[item.index - 1]
        oracle = rodrigues_rotate(spec, vec_in)
        entry = {
            "index": item.index,
            "input": [float(x) for x in vec_in],
            "oracle": [float(x) for x in oracle],
            "extracted": None if item.vector is None else [float(x) for x in item.vector],
            "angle_deg": None if item.vector is None
            else math.degrees(angle_between(item.vector, oracle)),
            "samples": item.samples,
            "under_sampled": item.under_sampled,
            "error": item.error,
        }
        entries.append(entry)
    return entries


def sweep_records(backends, trials: int = DEFAULT_TRIALS, shot_grid=None,
                  seed: int = 0, mitigate: bool = False) -> list[SweepRecord]:
    """Fidelity and angle curves: for every (backend, trial, shots) run process
    tomography of a random rotation and state tomography of a random rotated
    vector. Rotations and vectors are drawn once from the seed, so every
    backend sees the same set.

    Grid points use common random numbers: within a trial, every shot count
    samples from the same counter-based stream, so a larger job extends a
    smaller one instead of resampling it. Each point keeps its exact marginal
    distribution while the curve as a whole fluctuates far less, which is
    what makes point-to-point comparisons along the curve meaningful.
    """
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    shot_grid = log_shot_grid() if shot_grid is None else [int(s) for s in shot_grid]
    specs = seeded_rotations(seed, trials)
    vectors = seeded_vectors(seed, trials)
    records: list[SweepRecord] = []
    for backend in backends:
        noise = None if backend == "noiseless" else NOISE_PRESETS[backend]
        use_mitigation = mitigate and backend != "noiseless"
        label = backend + "+mit" if use_mitigation else backend
        for trial, (spec, vector) in enumerate(zip(specs, vectors)):
            exact = axis_rotation_unitary(spec)
            oracle = rodrigues_rotate(spec, vector)
            for shots in shot_grid:
                proc = process_tomography(
                    spec, shots, noise, derive_seed(seed, trial, 3),
                    use_mitigation)
                records.append(SweepRecord(label, trial, shots, "gate_fidelity",
                                           gate_fidelity(exact, proc.unitary)))
                state = state_tomography(
                    rotation_circuit(vector, spec), 0, shots, noise,
                    derive_seed(seed, trial, 4), use_mitigation)
                records.append(SweepRecord(
                    label, trial, shots, "angle_deg",
                    math.degrees(angle_between(state.bloch, oracle))))
    return records


def median_by_shots(records, metric: str, backend: str | None = None) -> dict[int, float]:
    """Median of one metric across trials, keyed by shot count."""
    buckets: dict[int, list[float]] = {}
    for rec in records:
        if rec.metric != metric:
            continue
        if backend is not None and rec.backend != backend:
            continue
        buckets.setdefault(rec.shots, []).append(rec.value)
    return {shots: float(np.median(vals)) for shots, vals in sorted(buckets.items())}
