# -*- coding: utf-8 -*-
"""Исследования Монте-Карло по восстановлению параметров и бутстреп-оценки стандартных ошибок.

Каждая репликация получает собственное зерно derive_seed(seed, index),
поэтому результат не зависит от порядка выполнения и числа потоков.
Угловые координаты (φ₀, θ₀) усредняются как круговые величины, разброс
для них считается по отклонениям от кругового среднего, приведённым к
[−π, π).
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..errors import EstimationError, PreconditionError
from ..torus.distributions import CovariateSpec, ErrorSpec, derive_seed, make_rng
from ..torus.geometry import TorusGeometry, angular_distance, signed_angle, wrap_angle
from ..torus.mobius import PARAM_NAMES, ModelParams, predict_mean_arrays
from ..torus.model import Dataset, simulate_responses
from .selection import FitConfig, fit

logger = logging.getLogger(__name__)

ANGULAR = (0, 5)
BOOTSTRAP_MIN = 20


@dataclass
class McSummary:
	"""Сводка исследования Монте-Карло.

	Атрибуты:
		true_params: ModelParams
		mean: np.ndarray
			Средние оценки (углы — круговое среднее в [0, 2π)).
		sd: np.ndarray
			Стандартное отклонение оценок по репликациям.
		se: np.ndarray
			Стандартная ошибка среднего sd / √reps.
		reps: int
			Число успешных репликаций.
		failures: int
			Число репликаций, где оценка не удалась.
		mean_prediction_error: float
			Среднее по репликациям максимальное угловое расхождение прогнозов.
		estimates: np.ndarray
			Оценки по репликациям (reps × 6).
		config: Dict[str, Any]
			Конфигурация исследования.
	"""

	true_params: ModelParams
	mean: np.ndarray
	sd: np.ndarray
	se: np.ndarray
	reps: int
	failures: int
	mean_prediction_error: float
	estimates: np.ndarray
	config: Dict[str, Any] = field(default_factory=dict)

	def deviation(self) -> np.ndarray:
		"""Отклонения средних от истины (угловые — по angular_distance)."""
		truth = self.true_params.to_vector()
		dev = np.abs(self.mean - truth)
		for i in ANGULAR:
			dev[i] = angular_distance(self.mean[i], truth[i])
		return dev


def prediction_error(a: ModelParams, b: ModelParams, covariates: np.ndarray) -> float:
	"""Наибольшее угловое расхождение прогнозов двух наборов параметров на ковариатах."""
	cov = np.asarray(covariates, dtype=float).reshape(-1, 2)
	if cov.shape[0] == 0:
		return 0.0
	pa = predict_mean_arrays(a, cov[:, 0], cov[:, 1])
	pb = predict_mean_arrays(b, cov[:, 0], cov[:, 1])
	return float(max(np.max(angular_distance(pa[0], pb[0])), np.max(angular_distance(pa[1], pb[1]))))


def summarize_estimates(estimates: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
	"""Средние и стандартные отклонения по репликациям с учётом угловых координат."""
	est = np.asarray(estimates, dtype=float).reshape(-1, 6)
	mean = est.mean(axis=0)
	centered = est - mean
	for i in ANGULAR:
		mean[i] = wrap_angle(math.atan2(np.sum(np.sin(est[:, i])), np.sum(np.cos(est[:, i]))))
		centered[:, i] = signed_angle(est[:, i] - mean[i])
	ddof = 1 if est.shape[0] > 1 else 0
	sd = np.sqrt(np.sum(centered ** 2, axis=0) / max(est.shape[0] - ddof, 1))
	return mean, sd


def _replicate(
	index: int,
	true_params: ModelParams,
	covariate_spec: CovariateSpec,
	error_spec: ErrorSpec,
	n: int,
	fit_config: FitConfig,
) -> Tuple[int, Optional[np.ndarray], float]:
	seed = derive_seed(fit_config.seed, index)
	cov_seed, err_seed, fit_seed = np.random.SeedSequence(seed).generate_state(3, dtype=np.uint64)
	covariates = covariate_spec.sample(n, int(cov_seed))
	data = simulate_responses(true_params, covariates, error_spec, int(err_seed))
	try:
		result = fit(data, replace(fit_config, seed=int(fit_seed), workers=1))
	except EstimationError as exc:
		logger.warning("Репликация %d: оценка не удалась (%s)", index, exc)
		return index, None, float("nan")
	return index, result.params.to_vector(), prediction_error(result.params, true_params, covariates)


def monte_carlo_study(
	true_params: ModelParams,
	covariate_spec: CovariateSpec,
	error_spec: ErrorSpec,
	n: int,
	reps: int,
	fit_config: FitConfig,
	workers: int = 1,
) -> McSummary:
	"""Исследование восстановления параметров.

	Для каждой репликации: ковариаты, ошибки, отклики, оценка fit.
	Неудавшиеся репликации исключаются из сводки и подсчитываются.

	Параметры:
		true_params: ModelParams
			Истинные параметры.
		covariate_spec: CovariateSpec
			Распределение ковариат.
		error_spec: ErrorSpec
			Распределение угловых ошибок.
		n: int
			Объём выборки в репликации.
		reps: int
			Число репликаций (≥ 2).
		fit_config: FitConfig
			Настройки оценки; fit_config.seed — корневое зерно исследования.
		workers: int
			Число потоков для репликаций.

	Исключения:
		PreconditionError: при reps < 2 или если успешных репликаций меньше двух.
	"""
	if reps < 2:
		raise PreconditionError(f"Для оценки разброса нужно reps ≥ 2, получено {reps}")
	args = (true_params, covariate_spec, error_spec, int(n), fit_config)
	if workers > 1:
		with ThreadPoolExecutor(max_workers=workers) as pool:
			outcomes = list(pool.map(lambda i: _replicate(i, *args), range(reps)))
	else:
		outcomes = [_replicate(i, *args) for i in range(reps)]
	outcomes.sort(key=lambda o: o[0])

	good = [o for o in outcomes if o[1] is not None]
	failures = len(outcomes) - len(good)
	if len(good) < 2:
		raise PreconditionError(f"Успешных репликаций меньше двух (неудач: {failures})")
	estimates = np.vstack([o[1] for o in good])
	mean, sd = summarize_estimates(estimates)
	config = {
		"n": int(n),
		"reps": int(reps),
		"covariates": covariate_spec.describe(),
		"errors": error_spec.describe(),
		"true_params": true_params.to_vector().tolist(),
		"fit": fit_config.echo(),
	}
	logger.info("Монте-Карло n=%d: %d репликаций, неудач %d", n, len(good), failures)
	return McSummary(
		true_params=true_params,
		mean=mean,
		sd=sd,
		se=sd / math.sqrt(len(good)),
		reps=len(good),
		failures=failures,
		mean_prediction_error=float(np.mean([o[2] for o in good])),
		estimates=estimates,
		config=config,
	)


def bootstrap_se(
	data: Dataset,
	config: FitConfig,
	B: int,
	restarts: int = 8,
	workers: int = 1,
) -> Tuple[np.ndarray, int]:
	"""Непараметрический бутстреп пар: B пересчётов на выборках с возвращением.

	Для b₁…b₄ — выборочное стандартное отклонение, для φ₀ и θ₀ — круговое
	стандартное отклонение √(−2 ln R̄).

	Возвращает:
		(se, failures): вектор из 6 стандартных ошибок и число неудачных пересчётов.

	Исключения:
		PreconditionError: при B < 20.
	"""
	if B < BOOTSTRAP_MIN:
		raise PreconditionError(f"Для бутстрепа нужно B ≥ {BOOTSTRAP_MIN}, получено {B}")
	refit_config = replace(config, restarts=int(restarts), workers=1)

	def one(b: int) -> Optional[np.ndarray]:
		rng = make_rng(derive_seed(config.seed, 1_000_000 + b))
		sample = data.subset(rng.integers(0, data.n, size=data.n))
		try:
			return fit(sample, replace(refit_config, seed=int(rng.integers(0, 2 ** 62)))).params.to_vector()
		except (EstimationError, PreconditionError) as exc:
			logger.warning("Бутстреп %d: оценка не удалась (%s)", b, exc)
			return None

	if workers > 1:
		with ThreadPoolExecutor(max_workers=workers) as pool:
			draws = list(pool.map(one, range(B)))
	else:
		draws = [one(b) for b in range(B)]
	good = [d for d in draws if d is not None]
	failures = B - len(good)
	if len(good) < 2:
		raise EstimationError(f"Бутстреп: успешных пересчётов меньше двух (неудач: {failures})")
	est = np.vstack(good)
	se = np.std(est, axis=0, ddof=1)
	for i in ANGULAR:
		rbar = math.hypot(np.mean(np.cos(est[:, i])), np.mean(np.sin(est[:, i])))
		se[i] = math.sqrt(-2.0 * math.log(min(max(rbar, 1e-300), 1.0)))
	return se, failures


# ---------------------------------------------------------------------------
# Готовые конфигурации исследований
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StudyCell:
	"""Ячейка таблицы: объём выборки, подпись, ошибки и геометрия."""

	n: int
	label: str
	error_spec: ErrorSpec
	geometry: Optional[TorusGeometry] = None


@dataclass(frozen=True)
class StudyPreset:
	"""Исследование: истинные параметры, ковариаты и список ячеек."""

	name: str
	true_params: ModelParams
	covariate_spec: CovariateSpec
	cells: Tuple[StudyCell, ...]


def _grid(sizes: Sequence[int], errors: Sequence[Tuple[str, str]]) -> Tuple[StudyCell, ...]:
	return tuple(StudyCell(n, label, ErrorSpec.parse(spec)) for n in sizes for label, spec in errors)


STUDY_PRESETS: Dict[str, StudyPreset] = {
	"table1": StudyPreset(
		"table1",
		ModelParams(1.0472, -1.7, 1.2, -1.8, 1.5, 3.1416),
		CovariateSpec("vm", 0.0, 1.0),
		_grid((50, 100, 500), [(f"kappa3={k}", f"sine:3:3:{k}") for k in (-1, 0, 1)]),
	),
	"table2": StudyPreset(
		"table2",
		ModelParams(0.0, 0.3, -3.5, 1.7, 0.5, 0.0),
		CovariateSpec("vm", 0.0, 1.0),
		_grid((50, 100, 500), [(f"rho3={k}", f"cosine:4:4:{k}") for k in (-1, 0, 1)]),
	),
	"table3": StudyPreset(
		"table3",
		ModelParams(0.0, 3.3, 5.5, 4.7, 3.1, math.pi / 2),
		CovariateSpec("vm", 0.0, 1.0),
		_grid(
			(50, 150, 500),
			[(f"kappa3={k},rho3={r}", f"mixture:4:4:{k}:4:4:{r}:0.5") for k, r in ((-1, -1), (0, 0), (1, 1), (1, -1))],
		),
	),
	"table4": StudyPreset(
		"table4",
		ModelParams(math.pi / 4, -3.3, -5.5, -4.7, -3.1, math.pi / 4),
		CovariateSpec("wc", math.pi, 0.2),
		_grid((250,), [(f"kappa3={k},rho3={r}", f"mixture:4:5:{k}:5:6:{r}:0.5") for k, r in ((0, 0), (-3.35, 2.04))]),
	),
	"table5": StudyPreset(
		"table5",
		ModelParams(0.0, 0.3, 0.5, 0.7, 0.4, math.pi),
		CovariateSpec("wc", math.pi, 0.2),
		tuple(
			StudyCell(250, f"r/R={ratio / 10:g}", ErrorSpec.parse("sine:5:5:1"), TorusGeometry(2.0, 2.0 * ratio / 10))
			for ratio in range(1, 11)
		),
	),
}


def run_preset(
	preset: StudyPreset,
	reps: int,
	fit_config: FitConfig,
	sizes: Optional[Sequence[int]] = None,
	workers: int = 1,
) -> List[Tuple[StudyCell, McSummary]]:
	"""Прогнать все ячейки готового исследования (опционально только заданные объёмы)."""
	rows: List[Tuple[StudyCell, McSummary]] = []
	for cell in preset.cells:
		if sizes is not None and cell.n not in sizes:
			continue
		config = replace(fit_config, geometry=cell.geometry) if cell.geometry is not None else fit_config
		summary = monte_carlo_study(preset.true_params, preset.covariate_spec, cell.error_spec, cell.n, reps, config, workers)
		rows.append((cell, summary))
	return rows


def summary_table(rows: Sequence[Tuple[StudyCell, McSummary]], spread: str = "se"):
	"""Сводная таблица: строка на ячейку, «среднее (разброс)» по каждому параметру.

	Параметры:
		spread: str
			"se" — стандартная ошибка среднего, "sd" — стандартное отклонение.
	"""
	records = []
	for cell, summary in rows:
		values = summary.se if spread == "se" else summary.sd
		record: Dict[str, Any] = {"n": cell.n, "cell": cell.label}
		for name, m, s in zip(PARAM_NAMES, summary.mean, values):
			record[name] = f"{m:.4f} ({s:.4f})"
		record["reps"] = summary.reps
		record["failures"] = summary.failures
		records.append(record)
	return pd.DataFrame.from_records(records, columns=["n", "cell", *PARAM_NAMES, "reps", "failures"])
