# -*- coding: utf-8 -*-
"""Методы ограниченной минимизации функции потерь из одной начальной точки.

Содержит реализации и единый тип результата:
- numerical_gradient: центральные разности по каждой координате
- project_guard_band: вывод (b₁, b₂) и (b₃, b₄) из полосы |·| ≈ 1
- lbfgsb_start: квазиньютоновский L-BFGS-B с численным градиентом
- simplex_start: безградиентный симплекс Нелдера–Мида с границами
- minimize_start: L-BFGS-B с переходом на симплекс при повторном сбое
  линейного поиска

Формат элементов history: {"iter": int, "f": float}.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from ..torus.mobius import MODULUS_GUARD, ModelParams

logger = logging.getLogger(__name__)

Objective = Callable[[np.ndarray], float]
Bounds = Sequence[Tuple[float, float]]

# Сообщение scipy о сбое линейного поиска
_LINE_SEARCH_FAILURE = "ABNORMAL"


@dataclass
class OptimizationResult:
	"""Результат минимизации из одного старта.

	Атрибуты:
		init: np.ndarray
			Начальная точка (после вывода из защитной полосы).
		x_min: np.ndarray
			Найденная точка минимума.
		f_min: float
			Значение функции в x_min.
		iterations: int
			Количество итераций.
		converged: bool
			Признак штатной остановки по критерию сходимости.
		history: List[Dict[str, Any]]
			Значения функции по итерациям.
		method: str
			Использованный метод ("L-BFGS-B" или "Nelder-Mead").
		execution_time: float
			Время выполнения в секундах.
	"""

	init: np.ndarray
	x_min: np.ndarray
	f_min: float
	iterations: int
	converged: bool
	history: List[Dict[str, Any]] = field(default_factory=list)
	method: str = "L-BFGS-B"
	execution_time: float = 0.0


def numerical_gradient(objective: Objective, params, h: float = 1e-6) -> np.ndarray:
	"""Градиент центральными разностями (f(x + h eᵢ) − f(x − h eᵢ)) / (2h).

	Параметры:
		objective: Callable[[np.ndarray], float]
			Целевая функция от вектора параметров.
		params: np.ndarray | ModelParams
			Точка дифференцирования.
		h: float
			Шаг разности, h > 0.

	Исключения:
		ValueError: если h ≤ 0.
	"""
	if h <= 0:
		raise ValueError("Шаг численного дифференцирования h должен быть > 0")
	x = params.to_vector() if isinstance(params, ModelParams) else np.asarray(params, dtype=float)
	grad = np.empty_like(x)
	for i in range(x.size):
		step = np.zeros_like(x)
		step[i] = h
		grad[i] = (objective(x + step) - objective(x - step)) / (2.0 * h)
	return grad


def _push_out(x: np.ndarray, i: int, j: int, offset: float) -> bool:
	modulus = float(np.hypot(x[i], x[j]))
	if abs(modulus - 1.0) >= MODULUS_GUARD:
		return False
	target = 1.0 + offset if modulus >= 1.0 else 1.0 - offset
	x[i] *= target / modulus
	x[j] *= target / modulus
	return True


def project_guard_band(x: Sequence[float], offset: float = 2.0 * MODULUS_GUARD) -> np.ndarray:
	"""Радиально вывести β₁ = (b₁, b₂) и γ₁ = (b₃, b₄) из полосы (1 − ε, 1 + ε).

	Точка в полосе переносится на ближайший край 1 ± offset; остальные
	точки возвращаются без изменений.
	"""
	out = np.array(x, dtype=float)
	_push_out(out, 1, 2, offset)
	_push_out(out, 3, 4, offset)
	return out


def guarded(objective: Objective) -> Objective:
	"""Обёртка целевой функции, вычисляющая её только вне защитной полосы."""
	def wrapped(x: np.ndarray) -> float:
		return float(objective(project_guard_band(x)))
	return wrapped


def lbfgsb_start(
	objective: Objective,
	x0: Sequence[float],
	bounds: Bounds,
	h: float = 1e-6,
	tol: float = 1e-10,
	max_iter: int = 500,
) -> OptimizationResult:
	"""L-BFGS-B из одной точки с градиентом центральными разностями.

	Параметры:
		objective: Callable[[np.ndarray], float]
			Целевая функция (уже защищённая от полосы |·| = 1).
		x0: Sequence[float]
			Начальная точка.
		bounds: Sequence[Tuple[float, float]]
			Покоординатные границы.
		h: float
			Шаг численного градиента.
		tol: float
			Критерий остановки по относительному уменьшению функции.
		max_iter: int
			Максимум итераций.

	Возвращает:
		OptimizationResult, где converged = False при сбое линейного поиска
		или исчерпании итераций.
	"""
	start_time = time.time()
	init = np.asarray(x0, dtype=float)
	history: List[Dict[str, Any]] = []

	def callback(xk: np.ndarray) -> None:
		history.append({"iter": len(history) + 1, "f": float(objective(xk))})

	res = minimize(
		objective,
		init,
		method="L-BFGS-B",
		jac=lambda x: numerical_gradient(objective, x, h),
		bounds=list(bounds),
		callback=callback,
		options={"maxiter": int(max_iter), "ftol": float(tol), "gtol": 1e-12},
	)
	message = res.message.decode() if isinstance(res.message, bytes) else str(res.message)
	converged = bool(res.success) and _LINE_SEARCH_FAILURE not in message.upper()
	return OptimizationResult(
		init=init,
		x_min=np.asarray(res.x, dtype=float),
		f_min=float(res.fun),
		iterations=int(res.nit),
		converged=converged,
		history=history,
		method="L-BFGS-B",
		execution_time=time.time() - start_time,
	)


def simplex_start(
	objective: Objective,
	x0: Sequence[float],
	bounds: Bounds,
	tol: float = 1e-10,
	max_iter: int = 500,
) -> OptimizationResult:
	"""Симплекс Нелдера–Мида с границами: запасной безградиентный метод."""
	start_time = time.time()
	init = np.asarray(x0, dtype=float)
	history: List[Dict[str, Any]] = []

	def callback(xk: np.ndarray) -> None:
		history.append({"iter": len(history) + 1, "f": float(objective(xk))})

	res = minimize(
		objective,
		init,
		method="Nelder-Mead",
		bounds=list(bounds),
		callback=callback,
		options={"maxiter": int(max_iter) * len(init), "xatol": 1e-10, "fatol": float(tol)},
	)
	return OptimizationResult(
		init=init,
		x_min=np.asarray(res.x, dtype=float),
		f_min=float(res.fun),
		iterations=int(res.nit),
		converged=bool(res.success),
		history=history,
		method="Nelder-Mead",
		execution_time=time.time() - start_time,
	)


def minimize_start(
	objective: Objective,
	x0: Sequence[float],
	bounds: Bounds,
	h: float = 1e-6,
	tol: float = 1e-10,
	max_iter: int = 500,
) -> OptimizationResult:
	"""Один старт: L-BFGS-B, повтор из достигнутой точки, затем симплекс.

	Симплекс запускается, только если линейный поиск L-BFGS-B сорвался
	дважды подряд.
	"""
	first = lbfgsb_start(objective, x0, bounds, h=h, tol=tol, max_iter=max_iter)
	if first.converged or first.iterations >= max_iter:
		return first
	second = lbfgsb_start(objective, first.x_min, bounds, h=h, tol=tol, max_iter=max_iter)
	second.init = first.init
	second.iterations += first.iterations
	second.history = first.history + second.history
	if second.converged or second.iterations >= max_iter:
		return second
	logger.debug("Линейный поиск L-BFGS-B сорвался дважды, переход на симплекс из f=%.6g", second.f_min)
	third = simplex_start(objective, second.x_min, bounds, tol=tol, max_iter=max_iter)
	third.init = first.init
	third.iterations += second.iterations
	third.history = second.history + third.history
	if third.f_min > second.f_min:
		third.x_min = second.x_min
		third.f_min = second.f_min
	return third
