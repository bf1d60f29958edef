"""Desk-scale synthetic design problems with closed-form performance maps.

Each problem defines an analytic map from a parameter vector to one or more
performance indicators, so generated designs can be scored exactly without a
surrogate. The library covers three regimes: independent linear coupling,
smooth nonlinear coupling, and a gated hierarchical space where a 0/1
parameter switches the active formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .data import Dataset, DatasetSchema


@dataclass(frozen=True)
class SyntheticProblem:
    name: str
    num_parameters: int
    performance_names: tuple[str, ...]
    lower: np.ndarray
    upper: np.ndarray
    evaluate: Callable[[np.ndarray], np.ndarray]  # (m, N) params -> (m, n) performances
    boolean_indices: tuple[int, ...] = ()

    def schema(self) -> DatasetSchema:
        params = tuple(f"x{i}" for i in range(self.num_parameters))
        return DatasetSchema(
            performance_columns=self.performance_names,
            parameter_columns=params,
            boolean_columns=tuple(params[i] for i in self.boolean_indices),
        )

    def sample_dataset(self, n_rows: int, seed: int) -> Dataset:
        """Seeded uniform parameter draws with their exact performances."""
        rng = np.random.default_rng(seed)
        params = rng.uniform(self.lower, self.upper, size=(n_rows, self.num_parameters))
        for i in self.boolean_indices:
            params[:, i] = (params[:, i] >= 0.5 * (self.lower[i] + self.upper[i])).astype(float)
        perf = self.evaluate(params)
        return Dataset(self.schema(), np.hstack([np.atleast_2d(perf), params]))


def _linear_sum(n_params: int) -> SyntheticProblem:
    def f(x):
        return x.sum(axis=1, keepdims=True)

    return SyntheticProblem(
        name="linear-sum",
        num_parameters=n_params,
        performance_names=("total",),
        lower=np.full(n_params, 0.1),
        upper=np.full(n_params, 1.0),
        evaluate=f,
    )


def _quadratic_bowl(n_params: int) -> SyntheticProblem:
    def f(x):
        return (x**2).sum(axis=1, keepdims=True)

    return SyntheticProblem(
        name="quadratic-bowl",
        num_parameters=n_params,
        performance_names=("bowl",),
        lower=np.full(n_params, 0.1),
        upper=np.full(n_params, 1.0),
        evaluate=f,
    )


def _gated_hierarchical(n_params: int) -> SyntheticProblem:
    # Parameter 0 is a 0/1 gate selecting which formula shapes the output,
    # mimicking activation-controlling booleans in hierarchical design spaces.
    def f(x):
        gate = x[:, 0]
        rest = x[:, 1:]
        branch_a = rest.sum(axis=1)
        branch_b = (rest**2).sum(axis=1) + 2.0
        return (gate * branch_a + (1.0 - gate) * branch_b)[:, None]

    lower = np.full(n_params, 0.1)
    upper = np.full(n_params, 1.0)
    lower[0], upper[0] = 0.0, 1.0
    return SyntheticProblem(
        name="gated-hierarchical",
        num_parameters=n_params,
        performance_names=("score",),
        lower=lower,
        upper=upper,
        evaluate=f,
        boolean_indices=(0,),
    )


_FACTORIES = {
    "linear-sum": _linear_sum,
    "quadratic-bowl": _quadratic_bowl,
    "gated-hierarchical": _gated_hierarchical,
}


def make_problem(name: str, n_params: int = 6) -> SyntheticProblem:
    if name not in _FACTORIES:
        raise ValueError(f"unknown synthetic problem {name!r}; choose from {sorted(_FACTORIES)}")
    if n_params < 2:
        raise ValueError("synthetic problems need >= 2 parameters")
    return _FACTORIES[name](n_params)
