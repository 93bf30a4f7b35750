# -*- coding: utf-8 -*-
"""Многостартовая оценка параметров и выбор лучшего старта.

Функция fit запускает restarts независимых минимизаций loss_total из
равномерно распределённых начальных точек и выбирает старт с наименьшей
итоговой потерей среди допустимых параметров.
"""
from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..errors import EstimationError, PreconditionError
from ..torus.distributions import derive_seed, make_rng
from ..torus.geometry import TWO_PI, TorusGeometry
from ..torus.mobius import ModelParams, params_valid
from ..torus.model import Dataset, loss_total
from .methods import OptimizationResult, guarded, minimize_start, project_guard_band

logger = logging.getLogger(__name__)

MIN_ROWS = 3


def default_bounds(b_bound: float = 20.0) -> Tuple[Tuple[float, float], ...]:
	"""Границы по умолчанию: φ₀, θ₀ ∈ [0, 2π], b₁…b₄ ∈ [−b_bound, b_bound]."""
	b = (-float(b_bound), float(b_bound))
	return ((0.0, TWO_PI), b, b, b, b, (0.0, TWO_PI))


@dataclass(frozen=True)
class FitConfig:
	"""Настройки многостартовой оценки.

	Атрибуты:
		restarts: int
			Число независимых стартов (≥ 1).
		bounds: Tuple[Tuple[float, float], ...]
			Покоординатные границы (φ₀, b₁, b₂, b₃, b₄, θ₀).
		h: float
			Шаг численного градиента.
		tol: float
			Критерий остановки по потерям.
		max_iter: int
			Максимум итераций на старт.
		seed: int
			Зерно; начальная точка старта i зависит только от (seed, i).
		geometry: TorusGeometry
			Радиусы тора для функции потерь.
		workers: int
			Число потоков для параллельных стартов.
	"""

	restarts: int = 64
	bounds: Tuple[Tuple[float, float], ...] = field(default_factory=default_bounds)
	h: float = 1e-6
	tol: float = 1e-10
	max_iter: int = 500
	seed: int = 0
	geometry: TorusGeometry = field(default_factory=TorusGeometry)
	workers: int = 1

	def __post_init__(self) -> None:
		if self.restarts < 1:
			raise ValueError("restarts должно быть ≥ 1")
		if self.h <= 0:
			raise ValueError("Шаг градиента h должен быть > 0")
		if len(self.bounds) != 6:
			raise ValueError("Нужно 6 пар границ")
		for lo, hi in self.bounds:
			if not lo < hi:
				raise ValueError(f"Пустой интервал границ ({lo}, {hi})")
		object.__setattr__(self, "bounds", tuple((float(lo), float(hi)) for lo, hi in self.bounds))

	def echo(self) -> Dict[str, Any]:
		return {
			"restarts": self.restarts,
			"bounds": [list(b) for b in self.bounds],
			"h": self.h,
			"tol": self.tol,
			"max_iter": self.max_iter,
			"seed": self.seed,
			"R": self.geometry.R,
			"r": self.geometry.r,
		}


@dataclass
class StartRecord:
	"""Итог одного старта для отчёта."""

	index: int
	init: np.ndarray
	final: np.ndarray
	final_loss: float
	converged: bool
	iterations: int
	method: str
	valid: bool
	diagnostic: str = ""
	history: List[Dict[str, Any]] = field(default_factory=list)


@dataclass
class FitResult:
	"""Результат оценки.

	Атрибуты:
		params: ModelParams
			Лучшие найденные параметры (углы в [0, 2π)).
		loss: float
			loss_total(params, data).
		per_start: List[StartRecord]
			Записи по всем стартам в порядке индексов.
		standard_errors: Optional[np.ndarray]
			Стандартные ошибки (если вычислялся бутстреп).
		wall_time: float
			Время выполнения в секундах.
	"""

	params: ModelParams
	loss: float
	per_start: List[StartRecord]
	standard_errors: Optional[np.ndarray] = None
	wall_time: float = 0.0


def draw_start(config: FitConfig, index: int) -> np.ndarray:
	"""Начальная точка старта index: равномерно внутри границ, вне защитной полосы."""
	rng = make_rng(derive_seed(config.seed, index))
	lows = np.array([b[0] for b in config.bounds])
	highs = np.array([b[1] for b in config.bounds])
	x = lows + (highs - lows) * rng.random(6)
	nudged = project_guard_band(x)
	if not np.array_equal(nudged, x):
		logger.debug("Старт %d выведен из полосы |·| = 1", index)
	return nudged


def _finalize(x: np.ndarray) -> ModelParams:
	"""Вектор оптимизатора → параметры: вывод из полосы и приведение углов."""
	return ModelParams.from_vector(project_guard_band(x))


def _run_start(data: Dataset, config: FitConfig, index: int) -> StartRecord:
	def objective(x: np.ndarray) -> float:
		return loss_total(ModelParams.from_vector(x), data, config.geometry)

	x0 = draw_start(config, index)
	res: OptimizationResult = minimize_start(
		guarded(objective), x0, config.bounds, h=config.h, tol=config.tol, max_iter=config.max_iter,
	)
	params = _finalize(res.x_min)
	ok, diagnostic = params_valid(params)
	final_loss = loss_total(params, data, config.geometry) if ok else float("nan")
	if ok and not math.isfinite(final_loss):
		ok, diagnostic = False, "потеря не конечна"
	logger.debug("Старт %d: f=%.6g, итераций %d, %s", index, final_loss, res.iterations, res.method)
	return StartRecord(
		index=index,
		init=res.init,
		final=params.to_vector(),
		final_loss=final_loss,
		converged=res.converged,
		iterations=res.iterations,
		method=res.method,
		valid=ok,
		diagnostic=diagnostic,
		history=res.history,
	)


def fit(data: Dataset, config: FitConfig) -> FitResult:
	"""Оценить параметры многостартовой ограниченной минимизацией loss_total.

	Параметры:
		data: Dataset
			Наблюдения, n ≥ 3.
		config: FitConfig
			Число стартов, границы, зерно, геометрия, число потоков.

	Возвращает:
		FitResult с лучшим стартом; при равенстве потерь выбирается меньший индекс.

	Исключения:
		PreconditionError: если строк меньше трёх.
		EstimationError: если ни один старт не дал допустимых параметров.
	"""
	if data.n < MIN_ROWS:
		raise PreconditionError(f"Для оценки нужно не менее {MIN_ROWS} наблюдений, получено {data.n}")
	start_time = time.time()
	indices = range(config.restarts)
	if config.workers > 1:
		with ThreadPoolExecutor(max_workers=config.workers) as pool:
			records = list(pool.map(lambda i: _run_start(data, config, i), indices))
	else:
		records = [_run_start(data, config, i) for i in indices]
	records.sort(key=lambda r: r.index)

	valid = [r for r in records if r.valid]
	if not valid:
		diagnostics = [
			{"index": r.index, "init": r.init.tolist(), "final": r.final.tolist(), "diagnostic": r.diagnostic}
			for r in records
		]
		raise EstimationError("Ни один старт не дал допустимых параметров", diagnostics)
	best = min(valid, key=lambda r: (r.final_loss, r.index))
	params = ModelParams.from_vector(best.final)
	wall_time = time.time() - start_time
	logger.info(
		"Оценка: лучший старт %d из %d, потеря %.6g, %.2f с",
		best.index, config.restarts, best.final_loss, wall_time,
	)
	return FitResult(params=params, loss=best.final_loss, per_start=records, wall_time=wall_time)
