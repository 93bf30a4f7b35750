# -*- coding: utf-8 -*-
"""Диагностика невязок: круговые сводки, оценки фон Мизеса, тест Ватсона U², данные для QQ-графиков."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy import integrate, special

from ..errors import PreconditionError
from .geometry import TWO_PI, wrap_angle

logger = logging.getLogger(__name__)

KAPPA_CAP = 1e4
WATSON_MIN_N = 10

# 5%-ные критические значения U² для фон Мизеса при оценённых μ и κ,
# индексированные по κ̂; предел при κ̂ → ∞ задан отдельно
_WATSON_KAPPA = np.array([0.0, 0.5, 1.0, 1.5, 2.0, 4.0])
_WATSON_CRIT_5 = np.array([0.061, 0.066, 0.079, 0.092, 0.101, 0.113])
_WATSON_CRIT_5_INF = 0.117


@dataclass(frozen=True)
class CircularSummary:
	"""Круговая сводка выборки.

	Атрибуты:
		mean_direction: float
			arg Σ e^{iθ}; NaN, если результирующая равна нулю.
		resultant_length: float
			R̄ ∈ [0, 1].
		circular_sd: float
			√(−2 ln R̄) (inf при R̄ = 0).
		n: int
		mean_undefined: bool
			True, если среднее направление не определено.
	"""

	mean_direction: float
	resultant_length: float
	circular_sd: float
	n: int
	mean_undefined: bool = False


@dataclass(frozen=True)
class VonMisesEstimate:
	"""Оценки максимального правдоподобия (μ̂, κ̂) и флаги вырожденности."""

	mu_hat: float
	kappa_hat: float
	capped: bool = False
	mean_undefined: bool = False

	def __iter__(self):
		return iter((self.mu_hat, self.kappa_hat))


@dataclass(frozen=True)
class WatsonResult:
	"""Результат теста Ватсона U² на фон Мизеса; reject ⟺ statistic > critical_value_5pct."""

	statistic: float
	critical_value_5pct: float
	reject: bool
	kappa_hat: float
	mu_hat: float
	kappa_capped: bool = False


def circular_summary(angles: Sequence[float]) -> CircularSummary:
	"""Среднее направление, длина результирующей и круговое стандартное отклонение.

	Исключения:
		PreconditionError: для пустой выборки.
	"""
	a = np.asarray(angles, dtype=float).reshape(-1)
	if a.size == 0:
		raise PreconditionError("Круговая сводка не определена для пустой выборки")
	c = float(np.sum(np.cos(a)))
	s = float(np.sum(np.sin(a)))
	rbar = min(1.0, math.hypot(c, s) / a.size)
	if rbar < 1e-12:
		return CircularSummary(float("nan"), 0.0, float("inf"), int(a.size), True)
	return CircularSummary(wrap_angle(math.atan2(s, c)), rbar, math.sqrt(-2.0 * math.log(rbar)), int(a.size))


def bessel_ratio(kappa: float) -> float:
	"""A₁(κ) = I₁(κ)/I₀(κ), устойчиво через масштабированные функции."""
	return float(special.i1e(kappa) / special.i0e(kappa))


def kappa_from_resultant(rbar: float, cap: float = KAPPA_CAP) -> Tuple[float, bool]:
	"""Решить A₁(κ) = R̄ методом Ньютона с защитой бисекцией.

	Начальное приближение — стандартная кусочная аппроксимация для малых,
	средних и больших R̄.

	Возвращает:
		(κ̂, capped): capped = True, если решение превышает cap и обрезано.
	"""
	if rbar <= 0.0:
		return 0.0, False
	if rbar >= bessel_ratio(cap):
		return cap, True
	if rbar < 0.53:
		kappa = 2.0 * rbar + rbar ** 3 + 5.0 * rbar ** 5 / 6.0
	elif rbar < 0.85:
		kappa = -0.4 + 1.39 * rbar + 0.43 / (1.0 - rbar)
	else:
		kappa = 1.0 / (rbar ** 3 - 4.0 * rbar ** 2 + 3.0 * rbar)
	lo, hi = 0.0, cap
	kappa = min(max(kappa, lo), hi)
	for _ in range(100):
		a1 = bessel_ratio(kappa)
		g = a1 - rbar
		if g > 0:
			hi = kappa
		else:
			lo = kappa
		deriv = 1.0 - a1 / kappa - a1 * a1 if kappa > 0 else 0.5
		step = kappa - g / deriv if deriv > 0 else -1.0
		# шаг Ньютона вне скобки заменяется бисекцией
		new = step if lo < step < hi else 0.5 * (lo + hi)
		if abs(new - kappa) <= 1e-12 * max(1.0, kappa):
			kappa = new
			break
		kappa = new
	return kappa, False


def vm_mle(angles: Sequence[float], cap: float = KAPPA_CAP) -> VonMisesEstimate:
	"""Оценки максимального правдоподобия параметров фон Мизеса.

	μ̂ — среднее направление, κ̂ — корень уравнения I₁(κ)/I₀(κ) = R̄.

	Исключения:
		PreconditionError: при n < 2.
	"""
	a = np.asarray(angles, dtype=float).reshape(-1)
	if a.size < 2:
		raise PreconditionError(f"Для оценки фон Мизеса нужно не менее 2 углов, получено {a.size}")
	summary = circular_summary(a)
	if summary.mean_undefined:
		logger.warning("R̄ = 0: среднее направление не определено, κ̂ = 0")
		return VonMisesEstimate(0.0, 0.0, False, True)
	kappa, capped = kappa_from_resultant(summary.resultant_length, cap)
	if capped:
		logger.warning("κ̂ превышает предел %g и обрезан", cap)
	return VonMisesEstimate(summary.mean_direction, kappa, capped, False)


def vm_cdf(theta: float, mu: float, kappa: float) -> float:
	"""Функция распределения фон Мизеса на [0, 2π], отсчитанная от 0.

	∫₀^θ f_vm(t; μ, κ) dt адаптивной квадратурой; плотность берётся в
	масштабированном виде exp(κ(cos(t−μ) − 1)) / (2π i0e(κ)), что устойчиво
	при больших κ.
	"""
	if kappa < 0:
		raise ValueError(f"kappa должно быть ≥ 0, получено {kappa}")
	t_end = min(max(float(theta), 0.0), TWO_PI)
	if kappa == 0.0:
		return t_end / TWO_PI
	mu = wrap_angle(mu)
	scale = TWO_PI * special.i0e(kappa)

	def density(t: float) -> float:
		return math.exp(kappa * (math.cos(t - mu) - 1.0)) / scale

	points = [mu] if 0.0 < mu < t_end else None
	value, _ = integrate.quad(density, 0.0, t_end, points=points, epsabs=1e-13, epsrel=1e-12, limit=200)
	return min(max(value, 0.0), 1.0)


def watson_critical_value(kappa_hat: float) -> float:
	"""5%-ное критическое значение U², интерполированное по κ̂.

	Между узлами таблицы — линейно по κ̂; при κ̂ > 4 — линейно по 1/κ̂ к
	предельному значению 0.117.
	"""
	k = max(float(kappa_hat), 0.0)
	if k <= _WATSON_KAPPA[-1]:
		return float(np.interp(k, _WATSON_KAPPA, _WATSON_CRIT_5))
	last = float(_WATSON_CRIT_5[-1])
	return _WATSON_CRIT_5_INF + (last - _WATSON_CRIT_5_INF) * (_WATSON_KAPPA[-1] / k)


def watson_u2(angles: Sequence[float]) -> WatsonResult:
	"""Тест Ватсона U² согласия с фон Мизесом (оба параметра оцениваются).

	uᵢ = F(θᵢ; μ̂, κ̂), U² = Σ (u₍ᵢ₎ − (2i−1)/(2n))² + 1/(12n) − n(ū − ½)².

	Исключения:
		PreconditionError: при n < 10.
	"""
	a = wrap_angle(np.asarray(angles, dtype=float).reshape(-1))
	n = int(np.size(a))
	if n < WATSON_MIN_N:
		raise PreconditionError(f"Для теста Ватсона нужно не менее {WATSON_MIN_N} углов, получено {n}")
	est = vm_mle(a)
	u = np.sort([vm_cdf(t, est.mu_hat, est.kappa_hat) for t in a])
	i = np.arange(1, n + 1)
	stat = float(np.sum((u - (2 * i - 1) / (2.0 * n)) ** 2) + 1.0 / (12.0 * n) - n * (np.mean(u) - 0.5) ** 2)
	crit = watson_critical_value(est.kappa_hat)
	return WatsonResult(stat, crit, stat > crit, est.kappa_hat, est.mu_hat, est.capped)


def qq_pairs(observed: Sequence[float], predicted: Sequence[float]) -> List[Tuple[float, float]]:
	"""Пары квантилей: обе выборки (в [0, 2π)) сортируются и сопоставляются по рангу.

	Исключения:
		PreconditionError: при пустых входах или разной длине.
	"""
	obs = np.asarray(observed, dtype=float).reshape(-1)
	pred = np.asarray(predicted, dtype=float).reshape(-1)
	if obs.size != pred.size:
		raise PreconditionError(f"Длины выборок различаются: {obs.size} и {pred.size}")
	if obs.size == 0:
		raise PreconditionError("Для QQ-пар нужна хотя бы одна точка")
	obs = np.sort(wrap_angle(obs))
	pred = np.sort(wrap_angle(pred))
	return [(float(x), float(y)) for x, y in zip(obs, pred)]
