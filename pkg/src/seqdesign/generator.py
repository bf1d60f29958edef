"""Sequential conditional generation of design vectors.

Designs are generated one parameter at a time: at each step the regressor is
fitted to [reference performances || already-available parameter columns] ->
next parameter, and queried with [target performances || known values ||
previously generated values]. All arithmetic happens in normalized space
(min-max fitted on the reference set); outputs are denormalized at the end.

Inpainting is the same machinery with some parameters pinned via a known
mask; pinned positions are returned verbatim and never perturbed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .data import Dataset, fit_normalization
from .errors import CapacityError, GenerationError, ProtocolError, TransportError
from .regressor import RegressorSpec, fit


@dataclass(frozen=True)
class OrderPolicy:
    """Which order the unknown parameters are generated in.

    kind 'default' follows ascending schema order, 'random' is a seeded
    shuffle, 'explicit' takes a caller-supplied permutation of the unknown
    parameter indices.
    """

    kind: str = "default"
    seed: int = 0
    permutation: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("default", "random", "explicit"):
            raise ValueError(f"unknown order kind {self.kind!r}")
        if self.kind == "explicit" and self.permutation is None:
            raise ValueError("explicit order requires a permutation")


def resolve_order(policy: OrderPolicy, unknown_indices) -> tuple[int, ...]:
    """Materialize an OrderPolicy into a concrete generation order."""
    unknown = sorted(int(i) for i in unknown_indices)
    if len(set(unknown)) != len(unknown):
        raise ValueError("unknown_indices contains duplicates")
    if not unknown:
        return ()
    if policy.kind == "default":
        return tuple(unknown)
    if policy.kind == "random":
        rng = np.random.default_rng(policy.seed)
        return tuple(int(i) for i in rng.permutation(unknown))
    perm = tuple(int(i) for i in policy.permutation)
    if sorted(perm) != unknown:
        raise ValueError(f"explicit permutation {perm} is not a bijection over {unknown}")
    return perm


@dataclass(frozen=True)
class GenerationTask:
    """Targets and options for one generation call.

    conditions: (m, n) target performance values (raw units).
    known_mask: length-N booleans, True = parameter given, not generated.
    known_values: (m, number of True mask entries), raw units.
    noise_std: Gaussian noise added to each generated parameter in
    normalized space (0 disables); the noisy value propagates to later steps.
    """

    conditions: np.ndarray
    known_mask: np.ndarray | None = None
    known_values: np.ndarray | None = None
    order: OrderPolicy = field(default_factory=OrderPolicy)
    noise_std: float = 0.0
    noise_seed: int = 0

    def __post_init__(self):
        cond = np.atleast_2d(np.asarray(self.conditions, dtype=float))
        object.__setattr__(self, "conditions", cond)
        if self.noise_std < 0:
            raise ValueError("noise_std must be >= 0")
        if self.known_mask is not None:
            mask = np.asarray(self.known_mask, dtype=bool)
            object.__setattr__(self, "known_mask", mask)
            n_known = int(mask.sum())
            if n_known > 0:
                if self.known_values is None:
                    raise ValueError("known_mask set but known_values missing")
                kv = np.atleast_2d(np.asarray(self.known_values, dtype=float))
                if kv.shape != (cond.shape[0], n_known):
                    raise ValueError(
                        f"known_values shape {kv.shape} does not match "
                        f"({cond.shape[0]}, {n_known})"
                    )
                object.__setattr__(self, "known_values", kv)


@dataclass(frozen=True)
class GenerationResult:
    """Generated designs in canonical schema parameter order plus diagnostics."""

    designs: np.ndarray  # (m, N), raw units, booleans thresholded
    designs_normalized: np.ndarray  # (m, N), normalized space, pre-threshold
    order: tuple[int, ...]
    num_fits: int
    underflow_steps: tuple[int, ...]  # step indices where the weight fallback fired
    pre_threshold: dict  # boolean param index -> continuous column before thresholding
    elapsed_seconds: float


def generate(reference: Dataset, spec: RegressorSpec, task: GenerationTask) -> GenerationResult:
    """Run the sequential generation loop; exactly one fit per unknown parameter."""
    t0 = time.perf_counter()
    schema = reference.schema
    n, N = schema.num_performances, schema.num_parameters
    if reference.row_count < 1:
        raise ValueError("reference set must be non-empty")
    if reference.row_count > spec.capacity:
        raise CapacityError(
            f"reference has {reference.row_count} rows, exceeding the capacity of {spec.capacity}"
        )
    cond = task.conditions
    if cond.shape[1] != n:
        raise ValueError(f"condition width {cond.shape[1]} != {n} performance indicators")
    mask = task.known_mask if task.known_mask is not None else np.zeros(N, dtype=bool)
    if mask.shape != (N,):
        raise ValueError(f"known_mask must have length {N}")
    known_idx = [i for i in range(N) if mask[i]]
    unknown_idx = [i for i in range(N) if not mask[i]]
    m = cond.shape[0]

    state = fit_normalization(reference, "minmax")
    all_cols = range(len(schema.columns))
    ref_rows = state.transform(reference.rows, all_cols)
    cond_n = state.transform(cond, range(n))
    if known_idx:
        known_n = state.transform(task.known_values, [n + j for j in known_idx])
    else:
        known_n = np.empty((m, 0))

    order = resolve_order(task.order, unknown_idx)
    rng = np.random.default_rng(task.noise_seed) if task.noise_std > 0 else None

    generated: dict[int, np.ndarray] = {}
    feature_param_idx = list(known_idx)  # parameter columns present in the features so far
    underflow_steps = []
    for step, j in enumerate(order):
        X_ref = np.hstack(
            [ref_rows[:, :n]] + [ref_rows[:, n + i : n + i + 1] for i in feature_param_idx]
        )
        y_ref = ref_rows[:, n + j]
        X_gen = np.hstack(
            [cond_n, known_n] + [generated[i][:, None] for i in order[:step]]
        )
        try:
            model = fit(spec, X_ref, y_ref)
            col, diag = model.predict_mean_ex(X_gen)
        except (TransportError, ProtocolError) as exc:
            raise GenerationError(
                f"backend failed at generation step {step} (parameter {j}): {exc}", step=step
            ) from exc
        if diag.any_underflow:
            underflow_steps.append(step)
        if rng is not None:
            col = col + rng.normal(0.0, task.noise_std, size=m)
        generated[j] = col
        feature_param_idx.append(j)

    designs_n = np.empty((m, N))
    for k, j in enumerate(known_idx):
        designs_n[:, j] = known_n[:, k]
    for j in order:
        designs_n[:, j] = generated[j]

    designs = state.inverse(designs_n, [n + j for j in range(N)])
    pre_threshold = {}
    for j in schema.boolean_parameter_indices():
        if j in generated:
            pre_threshold[j] = designs[:, j].copy()
            designs[:, j] = np.where(designs[:, j] >= 0.5, 1.0, 0.0)
    # Known positions are returned verbatim, bypassing the scaling round trip.
    for k, j in enumerate(known_idx):
        designs[:, j] = task.known_values[:, k]

    return GenerationResult(
        designs=designs,
        designs_normalized=designs_n,
        order=order,
        num_fits=len(order),
        underflow_steps=tuple(underflow_steps),
        pre_threshold=pre_threshold,
        elapsed_seconds=time.perf_counter() - t0,
    )


def inpaint(reference: Dataset, spec: RegressorSpec, task: GenerationTask) -> GenerationResult:
    """Complete a partially known design; alias for generate with a mask
    (an all-false mask reduces to plain generation, all-true performs no fits)."""
    return generate(reference, spec, task)
