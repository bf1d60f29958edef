"""Config-driven experiment studies: generation accuracy, ordering, reference
size, inpainting, noise, and reference-set variation.

Configs are INI files with typed sections ([dataset], [regressor], [split],
[evaluator], [study]); unknown sections or keys are rejected so typos cannot
silently poison a sweep. Every study is fully seeded and writes CSVs whose
first line records the config hash, seed, and backend, so reruns are
byte-identical.
"""

from __future__ import annotations

import configparser
import csv
import hashlib
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import __version__
from .airfoil import airfoil_parameter_names, load_selig, resample_airfoil
from .data import Dataset, DatasetSchema, load_tabular, split_reference_test
from .errors import ConfigError, SeqDesignError
from .generator import GenerationTask, OrderPolicy, generate, inpaint
from .metrics import (
    MmdConfig,
    build_state_space,
    mae,
    mape,
    median_pairwise_distance,
    mmd_squared,
    prd_curve,
    r_squared,
)
from .regressor import RegressorSpec, fit
from .synthetic import make_problem

PRD_NUM_CLUSTERS = 20
PRD_RESOLUTION = 1001
PRD_CLUSTER_SEEDS = 5
SURROGATE_PAIRS = 5_000
DEFAULT_SIZE_GRID = tuple(range(200, 10_001, 200))
NOISE_REPEATS = 1_500
NOISE_STD = 1e-4
REFERENCE_SETS = 3


@dataclass
class DatasetConfig:
    kind: str = "synthetic"  # synthetic | tabular | airfoil
    # synthetic
    problem: str = "quadratic-bowl"
    n_params: int = 6
    n_rows: int = 2000
    seed: int = 0
    # tabular
    path: str = ""
    performance_columns: tuple = ()
    parameter_columns: tuple = ()
    boolean_columns: tuple = ()
    # airfoil
    directory: str = ""
    points_per_surface: int = 30
    performances_csv: str = ""
    performance_name: str = "cl_cd"


@dataclass
class RegressorConfig:
    backend: str = "kernel"
    bandwidth: float = 0.0  # 0 -> median heuristic
    k: int = 5
    capacity: int = 10_000
    num_bins: int = 64
    endpoint: str = ""

    def to_spec(self) -> RegressorSpec:
        return RegressorSpec(
            kind=self.backend,
            bandwidth=self.bandwidth or None,
            k=self.k,
            capacity=self.capacity,
            num_bins=self.num_bins,
            endpoint=self.endpoint or None,
        )


@dataclass
class SplitConfig:
    fraction: float = 0.7
    seed: int = 0


@dataclass
class EvaluatorConfig:
    kind: str = "analytic"  # analytic | surrogate
    surrogate_pairs: int = SURROGATE_PAIRS


@dataclass
class StudyConfig:
    kind: str = "gen"
    num_conditions: int = 2000
    conditions_source: str = "test"  # test | all
    repeats: int = 10
    sizes: tuple = ()
    missing_counts: tuple = ()
    repeats_per_count: int = 3
    noise_std: float = NOISE_STD
    repeat_count: int = NOISE_REPEATS
    num_reference_sets: int = REFERENCE_SETS
    order: str = "default"


@dataclass
class ExperimentConfig:
    dataset: DatasetConfig = field(default_factory=DatasetConfig)
    regressor: RegressorConfig = field(default_factory=RegressorConfig)
    split: SplitConfig = field(default_factory=SplitConfig)
    evaluator: EvaluatorConfig = field(default_factory=EvaluatorConfig)
    study: StudyConfig = field(default_factory=StudyConfig)
    seed: int = 0
    config_hash: str = "unconfigured"


_SECTIONS = {
    "dataset": DatasetConfig,
    "regressor": RegressorConfig,
    "split": SplitConfig,
    "evaluator": EvaluatorConfig,
    "study": StudyConfig,
    "run": None,  # holds the top-level seed
}


def _coerce(raw: str, annotation):
    if annotation in ("int", int):
        return int(raw)
    if annotation in ("float", float):
        return float(raw)
    if annotation in ("tuple", tuple):
        items = [s.strip() for s in raw.split(",") if s.strip()]
        converted = []
        for item in items:
            try:
                converted.append(int(item))
            except ValueError:
                try:
                    converted.append(float(item))
                except ValueError:
                    converted.append(item)
        return tuple(converted)
    return raw


def load_config(path) -> ExperimentConfig:
    """Parse and validate an experiment config file."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    text = path.read_text(encoding="utf-8")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    config = ExperimentConfig()
    config.config_hash = hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ConfigError(f"{path}: unknown section [{section}]")
        if section == "run":
            for key, raw in parser.items(section):
                if key != "seed":
                    raise ConfigError(f"{path}: unknown key {key!r} in [run]")
                config.seed = int(raw)
            continue
        target = getattr(config, section)
        known = {f.name: f for f in fields(target)}
        for key, raw in parser.items(section):
            if key not in known:
                raise ConfigError(f"{path}: unknown key {key!r} in [{section}]")
            try:
                setattr(target, key, _coerce(raw, known[key].type))
            except ValueError as exc:
                raise ConfigError(f"{path}: bad value for {section}.{key}: {exc}") from exc
    validate_config(config)
    return config


def validate_config(config: ExperimentConfig):
    ds = config.dataset
    if ds.kind not in ("synthetic", "tabular", "airfoil"):
        raise ConfigError(f"unknown dataset kind {ds.kind!r}")
    if ds.kind == "tabular":
        if not ds.path:
            raise ConfigError("tabular dataset requires 'path'")
        if not Path(ds.path).exists():
            raise ConfigError(f"dataset path does not exist: {ds.path}")
        if not ds.performance_columns or not ds.parameter_columns:
            raise ConfigError("tabular dataset requires performance_columns and parameter_columns")
    if ds.kind == "airfoil":
        if not ds.directory or not Path(ds.directory).is_dir():
            raise ConfigError(f"airfoil dataset requires an existing 'directory', got {ds.directory!r}")
        if not ds.performances_csv or not Path(ds.performances_csv).exists():
            raise ConfigError("airfoil dataset requires an existing 'performances_csv'")
    if config.evaluator.kind not in ("analytic", "surrogate"):
        raise ConfigError(f"unknown evaluator kind {config.evaluator.kind!r}")
    if config.evaluator.kind == "analytic" and ds.kind != "synthetic":
        raise ConfigError("analytic evaluator is only available for synthetic datasets")
    if not 0.0 < config.split.fraction < 1.0:
        raise ConfigError("split.fraction must be in (0, 1)")
    config.regressor.to_spec()  # validates backend parameters


def build_dataset(config: ExperimentConfig) -> Dataset:
    ds = config.dataset
    if ds.kind == "synthetic":
        problem = make_problem(ds.problem, ds.n_params)
        return problem.sample_dataset(ds.n_rows, ds.seed)
    if ds.kind == "tabular":
        schema = DatasetSchema(
            tuple(ds.performance_columns), tuple(ds.parameter_columns), tuple(ds.boolean_columns)
        )
        return load_tabular(ds.path, schema)
    return _build_airfoil_dataset(ds)


def _build_airfoil_dataset(ds: DatasetConfig) -> Dataset:
    """Resample every .dat in the directory and join with a name,value CSV."""
    perf_by_name = {}
    with open(ds.performances_csv, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            perf_by_name[row["name"]] = float(row["value"])
    rows = []
    for dat in sorted(Path(ds.directory).glob("*.dat")):
        if dat.stem not in perf_by_name:
            continue
        vec = resample_airfoil(load_selig(dat), ds.points_per_surface)
        rows.append(np.concatenate([[perf_by_name[dat.stem]], vec]))
    if not rows:
        raise ConfigError(f"no airfoils in {ds.directory} matched {ds.performances_csv}")
    schema = DatasetSchema(
        (ds.performance_name,), tuple(airfoil_parameter_names(ds.points_per_surface))
    )
    return Dataset(schema, np.vstack(rows))


class Evaluator:
    """Maps generated parameter matrices to performance matrices."""

    def __init__(self, config: ExperimentConfig, reference: Dataset, test: Dataset):
        self.kind = config.evaluator.kind
        self.self_metrics: dict[str, float] = {}
        if self.kind == "analytic":
            problem = make_problem(config.dataset.problem, config.dataset.n_params)
            self._fn = problem.evaluate
            return
        # Surrogate: one regressor per indicator, fitted on reference
        # (params -> performance) pairs; accuracy reported on the test set.
        n_pairs = min(config.evaluator.surrogate_pairs, reference.row_count)
        sub = reference.take(range(n_pairs))
        spec = config.regressor.to_spec()
        if spec.kind == "remote":
            spec = RegressorSpec(kind="kernel", capacity=spec.capacity, num_bins=spec.num_bins)
        self._models = []
        for i, name in enumerate(reference.schema.performance_columns):
            model = fit(spec, sub.parameters, sub.performances[:, i])
            self._models.append(model)
            pred = model.predict_mean(test.parameters)
            self.self_metrics[f"surrogate_r2_{name}"] = r_squared(test.performances[:, i], pred)
            self.self_metrics[f"surrogate_mape_{name}"] = mape(test.performances[:, i], pred).percent

    def __call__(self, parameters: np.ndarray) -> np.ndarray:
        if self.kind == "analytic":
            return np.atleast_2d(self._fn(np.atleast_2d(parameters)))
        return np.column_stack([m.predict_mean(parameters) for m in self._models])


def _meta_line(config: ExperimentConfig) -> str:
    return (
        f"# config_hash={config.config_hash} seed={config.seed} "
        f"backend={config.regressor.backend} seqdesign={__version__}\n"
    )


def write_result_csv(path, config: ExperimentConfig, header, rows):
    """CSV with a metadata comment line; floats serialized via repr."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(_meta_line(config))
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return path


def _prepare(config: ExperimentConfig):
    dataset = build_dataset(config)
    reference, test = split_reference_test(dataset, config.split.fraction, config.split.seed)
    return dataset, reference, test


def _pick_conditions(config: ExperimentConfig, dataset: Dataset, test: Dataset, count: int, seed: int):
    """Target performance rows; test-set provenance by default."""
    source = test if config.study.conditions_source == "test" else dataset
    count = min(count, source.row_count)
    idx = np.random.default_rng(seed).choice(source.row_count, count, replace=False)
    idx = np.sort(idx)
    return source.performances[idx], source.parameters[idx]


def _accuracy_rows(names, targets, achieved):
    rows = []
    for i, name in enumerate(names):
        mp = mape(targets[:, i], achieved[:, i])
        rows.append(("mape_percent", name, mp.percent))
        rows.append(("mape_skipped", name, float(mp.num_skipped)))
        rows.append(("mae", name, mae(targets[:, i], achieved[:, i])))
    return rows


def run_generation_eval(config: ExperimentConfig, out_dir) -> list[Path]:
    """Generate against held-out conditions and score accuracy + diversity."""
    dataset, reference, test = _prepare(config)
    evaluator = Evaluator(config, reference, test)
    spec = config.regressor.to_spec()
    conditions, _ = _pick_conditions(config, dataset, test, config.study.num_conditions, config.seed)
    task = GenerationTask(conditions, order=_order_policy(config.study.order, config.seed))
    result = generate(reference, spec, task)
    achieved = evaluator(result.designs)

    rows = _accuracy_rows(reference.schema.performance_columns, conditions, achieved)
    for key, value in sorted(evaluator.self_metrics.items()):
        rows.append((key, "", value))
    sigma = median_pairwise_distance(reference.parameters, result.designs)
    rows.append(
        ("mmd_squared", "", mmd_squared(reference.parameters, result.designs, MmdConfig(sigma)))
    )
    rows.append(("mmd_sigma", "", sigma))
    out_dir = Path(out_dir)
    paths = [
        write_result_csv(out_dir / "generation_eval.csv", config, ("metric", "indicator", "value"), rows)
    ]
    paths.append(_write_prd(config, out_dir, reference.parameters, result.designs))
    return paths


def _write_prd(config, out_dir, reference_samples, generated_samples) -> Path:
    """Mean PRD curve over several clustering seeds, per-seed curves retained."""
    per_seed = []
    for s in range(PRD_CLUSTER_SEEDS):
        hist = build_state_space(reference_samples, generated_samples, PRD_NUM_CLUSTERS, seed=s)
        per_seed.append(prd_curve(hist, PRD_RESOLUTION))
    lam = per_seed[0].lambdas
    alpha = np.mean([c.precisions for c in per_seed], axis=0)
    beta = np.mean([c.recalls for c in per_seed], axis=0)
    rows = [(float(l), float(a), float(b)) for l, a, b in zip(lam, alpha, beta)]
    path = write_result_csv(out_dir / "prd_curve.csv", config, ("lambda", "alpha", "beta"), rows)
    seed_rows = [
        (s, float(l), float(a), float(b))
        for s, curve in enumerate(per_seed)
        for l, a, b in zip(curve.lambdas, curve.precisions, curve.recalls)
    ]
    write_result_csv(
        out_dir / "prd_curve_seeds.csv", config, ("cluster_seed", "lambda", "alpha", "beta"), seed_rows
    )
    return path


def _order_policy(kind: str, seed: int) -> OrderPolicy:
    if kind not in ("default", "random"):
        raise ConfigError(f"study order must be 'default' or 'random', got {kind!r}")
    return OrderPolicy(kind=kind, seed=seed)


def run_order_study(config: ExperimentConfig, out_dir, repeats: int | None = None) -> list[Path]:
    """Random-order repeats plus the default-order baseline; mean/std per metric."""
    repeats = config.study.repeats if repeats is None else repeats
    if repeats < 2:
        raise ValueError("order study needs repeats >= 2")
    dataset, reference, test = _prepare(config)
    evaluator = Evaluator(config, reference, test)
    spec = config.regressor.to_spec()
    conditions, _ = _pick_conditions(config, dataset, test, config.study.num_conditions, config.seed)
    names = reference.schema.performance_columns

    def run_one(policy):
        result = generate(reference, spec, GenerationTask(conditions, order=policy))
        achieved = evaluator(result.designs)
        return (
            [mape(conditions[:, i], achieved[:, i]).percent for i in range(len(names))],
            [mae(conditions[:, i], achieved[:, i]) for i in range(len(names))],
        )

    base_mape, base_mae = run_one(OrderPolicy("default"))
    rows = []
    all_mape, all_mae = [], []
    for r in range(repeats):
        mp, ma = run_one(OrderPolicy("random", seed=config.seed * 10_000 + r))
        all_mape.append(mp)
        all_mae.append(ma)
        for i, name in enumerate(names):
            rows.append(("repeat", r, name, mp[i], ma[i]))
    mp_arr, ma_arr = np.array(all_mape), np.array(all_mae)
    for i, name in enumerate(names):
        rows.append(("baseline_default", -1, name, base_mape[i], base_mae[i]))
        rows.append(("mean", -1, name, float(mp_arr[:, i].mean()), float(ma_arr[:, i].mean())))
        rows.append(("std", -1, name, float(mp_arr[:, i].std()), float(ma_arr[:, i].std())))
    path = write_result_csv(
        Path(out_dir) / "order_study.csv",
        config,
        ("kind", "repeat", "indicator", "mape_percent", "mae"),
        rows,
    )
    return [path]


def run_reference_size_sweep(config: ExperimentConfig, out_dir, sizes=None) -> list[Path]:
    """MAPE as the reference subsample grows; conditions stay fixed."""
    dataset, reference, test = _prepare(config)
    evaluator = Evaluator(config, reference, test)
    spec = config.regressor.to_spec()
    sizes = tuple(sizes) if sizes else (tuple(config.study.sizes) or DEFAULT_SIZE_GRID)
    for size in sizes:
        if size <= 0:
            raise ValueError(f"size {size} must be positive")
        if size > reference.row_count:
            raise ValueError(f"size {size} exceeds available reference rows ({reference.row_count})")
        if size > spec.capacity:
            raise ValueError(f"size {size} exceeds regressor capacity ({spec.capacity})")
    conditions, _ = _pick_conditions(config, dataset, test, config.study.num_conditions, config.seed)
    names = reference.schema.performance_columns
    rows = []
    for size in sorted(sizes):
        idx = np.random.default_rng(config.seed + size).choice(
            reference.row_count, size, replace=False
        )
        sub = reference.take(np.sort(idx))
        result = generate(sub, spec, GenerationTask(conditions))
        achieved = evaluator(result.designs)
        for i, name in enumerate(names):
            rows.append(
                (
                    size,
                    mape(conditions[:, i], achieved[:, i]).percent,
                    mae(conditions[:, i], achieved[:, i]),
                    name,
                )
            )
    path = write_result_csv(
        Path(out_dir) / "refsize_sweep.csv", config, ("size", "mape_percent", "mae", "indicator"), rows
    )
    return [path]


def run_inpainting_sweep(
    config: ExperimentConfig, out_dir, missing_counts=None, repeats_per_count=None
) -> list[Path]:
    """Accuracy as progressively more parameters are left for the generator."""
    dataset, reference, test = _prepare(config)
    evaluator = Evaluator(config, reference, test)
    spec = config.regressor.to_spec()
    N = reference.schema.num_parameters
    counts = tuple(missing_counts) if missing_counts is not None else (
        tuple(config.study.missing_counts) or tuple(range(N + 1))
    )
    repeats = repeats_per_count if repeats_per_count is not None else config.study.repeats_per_count
    for c in counts:
        if not 0 <= c <= N:
            raise ValueError(f"missing count {c} outside [0, {N}]")
    conditions, known_designs = _pick_conditions(
        config, dataset, test, config.study.num_conditions, config.seed
    )
    names = reference.schema.performance_columns
    rows = []
    for c in sorted(counts):
        for r in range(repeats):
            rng = np.random.default_rng(config.seed * 1_000 + c * 10 + r)
            missing = np.sort(rng.choice(N, c, replace=False))
            mask = np.ones(N, dtype=bool)
            mask[missing] = False  # True = known
            if mask.any():
                task = GenerationTask(
                    conditions, known_mask=mask, known_values=known_designs[:, mask]
                )
                designs = inpaint(reference, spec, task).designs
            else:
                designs = generate(reference, spec, GenerationTask(conditions)).designs
            achieved = evaluator(designs)
            for i, name in enumerate(names):
                rows.append((c, r, mape(conditions[:, i], achieved[:, i]).percent, name))
    path = write_result_csv(
        Path(out_dir) / "inpaint_sweep.csv",
        config,
        ("missing_count", "repeat", "mape_percent", "indicator"),
        rows,
    )
    return [path]


def _exact_std(col: np.ndarray) -> float:
    """np.std of identical values can round to ~1e-17; the true value is 0."""
    if np.ptp(col) == 0.0:
        return 0.0
    return float(col.std())


def run_noise_study(
    config: ExperimentConfig, out_dir, noise_std=None, repeat_count=None
) -> list[Path]:
    """One condition replicated many times with per-step Gaussian noise."""
    dataset, reference, test = _prepare(config)
    evaluator = Evaluator(config, reference, test)
    spec = config.regressor.to_spec()
    noise_std = config.study.noise_std if noise_std is None else noise_std
    repeat_count = config.study.repeat_count if repeat_count is None else repeat_count
    if repeat_count < 2:
        raise ValueError("noise study needs repeat_count >= 2")
    conditions, _ = _pick_conditions(config, dataset, test, 1, config.seed)
    tiled = np.tile(conditions[0], (repeat_count, 1))
    task = GenerationTask(tiled, noise_std=noise_std, noise_seed=config.seed)
    result = generate(reference, spec, task)
    achieved = evaluator(result.designs)
    rows = []
    for j, pname in enumerate(reference.schema.parameter_columns):
        col = result.designs[:, j]
        rows.append(
            ("parameter", pname, float(col.mean()), _exact_std(col), float(np.median(col)))
        )
    for i, name in enumerate(reference.schema.performance_columns):
        err = 100.0 * np.abs(achieved[:, i] - tiled[:, i]) / np.maximum(np.abs(tiled[:, i]), 1e-12)
        rows.append(("performance_mape", name, float(err.mean()), float(err.std()), float(np.median(err))))
    path = write_result_csv(
        Path(out_dir) / "noise_study.csv", config, ("kind", "name", "mean", "std", "median"), rows
    )
    return [path]


def run_reference_variation_study(config: ExperimentConfig, out_dir, num_reference_sets=None) -> list[Path]:
    """Fixed conditions, independently subsampled reference sets."""
    dataset, reference, test = _prepare(config)
    evaluator = Evaluator(config, reference, test)
    spec = config.regressor.to_spec()
    n_sets = config.study.num_reference_sets if num_reference_sets is None else num_reference_sets
    if n_sets < 2:
        raise ValueError("reference variation study needs >= 2 sets")
    conditions, _ = _pick_conditions(config, dataset, test, config.study.num_conditions, config.seed)
    subset_size = max(2, reference.row_count // 2)
    names = reference.schema.performance_columns
    rows = []
    for s in range(n_sets):
        idx = np.random.default_rng(config.seed * 100 + s).choice(
            reference.row_count, subset_size, replace=False
        )
        sub = reference.take(np.sort(idx))
        result = generate(sub, spec, GenerationTask(conditions))
        achieved = evaluator(result.designs)
        for j, pname in enumerate(reference.schema.parameter_columns):
            col = result.designs[:, j]
            rows.append(
                (s, "parameter", pname, float(col.mean()), _exact_std(col), float(np.median(col)))
            )
        for i, name in enumerate(names):
            rows.append(
                (s, "mape_percent", name, mape(conditions[:, i], achieved[:, i]).percent, 0.0, 0.0)
            )
    path = write_result_csv(
        Path(out_dir) / "refsets_study.csv",
        config,
        ("set", "kind", "name", "mean", "std", "median"),
        rows,
    )
    return [path]


def run_inpaint_once(config: ExperimentConfig, out_dir) -> list[Path]:
    """Single inpainting run: half the parameters known (deterministic choice)."""
    dataset, reference, test = _prepare(config)
    evaluator = Evaluator(config, reference, test)
    spec = config.regressor.to_spec()
    N = reference.schema.num_parameters
    conditions, known_designs = _pick_conditions(
        config, dataset, test, config.study.num_conditions, config.seed
    )
    mask = np.zeros(N, dtype=bool)
    mask[: N // 2] = True
    task = GenerationTask(conditions, known_mask=mask, known_values=known_designs[:, mask])
    result = inpaint(reference, spec, task)
    achieved = evaluator(result.designs)
    rows = _accuracy_rows(reference.schema.performance_columns, conditions, achieved)
    path = write_result_csv(
        Path(out_dir) / "inpaint_eval.csv", config, ("metric", "indicator", "value"), rows
    )
    return [path]
