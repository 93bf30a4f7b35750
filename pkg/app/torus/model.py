# -*- coding: utf-8 -*-
"""Регрессионная модель тор → тор: данные, моделирование откликов, невязки и функция потерь.

Потери:
- loss_torus: среднее по наблюдениям A_T(ψᵢ) + A_T(ξᵢ) на вложенном торе
- loss_sphere: среднее A_S(deflectionᵢ) для отклонения нормалей на сфере
- loss_total: их сумма

Невязки ψ, ξ сводятся к [0, π] через angular_distance, поэтому потери
зависят только от минимальных угловых отклонений.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import PreconditionError
from .distributions import ErrorSpec, RngSeed
from .geometry import (
	TorusGeometry,
	TorusPoint,
	angular_distance,
	great_circle_distance_arrays,
	signed_angle,
	square_angle_sphere,
	square_angle_torus,
	wrap_angle,
)
from .mobius import ModelParams, UnitComplex, predict_mean, predict_mean_arrays

ErrorSampler = Union[ErrorSpec, Callable[[int, RngSeed], np.ndarray]]


def _angles(values, name: str) -> np.ndarray:
	arr = np.asarray(values, dtype=float).reshape(-1)
	if not np.all(np.isfinite(arr)):
		raise PreconditionError(f"Углы '{name}' должны быть конечными числами")
	return wrap_angle(arr) if arr.size else arr


@dataclass(frozen=True)
class Dataset:
	"""Набор из n пар (ковариата, отклик) на торе.

	Атрибуты:
		cov_phi, cov_theta: np.ndarray
			Аргументы ковариат z и w.
		resp_phi, resp_theta: np.ndarray
			Отклики φ и θ.
		labels: Optional[List[str]]
			Метки строк (например, моменты времени).
	"""

	cov_phi: np.ndarray
	cov_theta: np.ndarray
	resp_phi: np.ndarray
	resp_theta: np.ndarray
	labels: Optional[Tuple[str, ...]] = None

	def __post_init__(self) -> None:
		arrays = {}
		for name in ("cov_phi", "cov_theta", "resp_phi", "resp_theta"):
			arrays[name] = _angles(getattr(self, name), name)
			object.__setattr__(self, name, arrays[name])
		sizes = {a.size for a in arrays.values()}
		if len(sizes) != 1:
			raise PreconditionError(f"Столбцы набора данных имеют разную длину: {sorted(sizes)}")
		if self.labels is not None:
			labels = tuple(str(x) for x in self.labels)
			if len(labels) != self.n:
				raise PreconditionError("Число меток не совпадает с числом строк")
			object.__setattr__(self, "labels", labels)

	@property
	def n(self) -> int:
		return int(self.cov_phi.size)

	def __len__(self) -> int:
		return self.n

	@classmethod
	def from_rows(cls, rows: Sequence[Tuple[TorusPoint, TorusPoint]], labels: Optional[Sequence[str]] = None) -> "Dataset":
		cov = [c for c, _ in rows]
		resp = [r for _, r in rows]
		return cls(
			np.array([c.phi for c in cov]),
			np.array([c.theta for c in cov]),
			np.array([r.phi for r in resp]),
			np.array([r.theta for r in resp]),
			tuple(labels) if labels is not None else None,
		)

	def rows(self) -> Iterator[Tuple[TorusPoint, TorusPoint]]:
		for i in range(self.n):
			yield (
				TorusPoint(self.cov_phi[i], self.cov_theta[i]),
				TorusPoint(self.resp_phi[i], self.resp_theta[i]),
			)

	def covariates(self) -> np.ndarray:
		return np.column_stack([self.cov_phi, self.cov_theta])

	def subset(self, indices: Sequence[int]) -> "Dataset":
		idx = np.asarray(indices, dtype=int)
		labels = tuple(self.labels[i] for i in idx) if self.labels is not None else None
		return Dataset(self.cov_phi[idx], self.cov_theta[idx], self.resp_phi[idx], self.resp_theta[idx], labels)

	def rotated(self, W1: UnitComplex, W2: UnitComplex, V1: UnitComplex = 1.0, V2: UnitComplex = 1.0) -> "Dataset":
		"""Повернуть ковариаты на (W₁, W₂) и отклики на (V₁, V₂)."""
		return Dataset(
			self.cov_phi + np.angle(W1),
			self.cov_theta + np.angle(W2),
			self.resp_phi + np.angle(V1),
			self.resp_theta + np.angle(V2),
			self.labels,
		)


@dataclass(frozen=True)
class ResidualPair:
	"""Невязки наблюдения: psi, xi по компонентам и sphere_deflection для нормалей (все в [0, π])."""

	psi: float
	xi: float
	sphere_deflection: float


def _covariate_array(covariates) -> np.ndarray:
	if isinstance(covariates, np.ndarray):
		arr = covariates.reshape(-1, 2) if covariates.size else np.empty((0, 2))
	else:
		arr = np.array([[c.phi, c.theta] for c in covariates], dtype=float).reshape(-1, 2)
	return arr


def simulate_responses(
	params: ModelParams,
	covariates,
	error_sampler: ErrorSampler,
	seed: RngSeed,
	labels: Optional[Sequence[str]] = None,
) -> Dataset:
	"""Смоделировать отклики (g₁ + ε₁, g₂ + ε₂) mod 2π.

	Параметры:
		params: ModelParams
			Истинные параметры.
		covariates: np.ndarray формы (n, 2) или список TorusPoint
			Ковариаты (φ_z, φ_w).
		error_sampler: ErrorSpec | Callable[[int, seed], np.ndarray]
			Генератор угловых ошибок формы (n, 2) с нулевым средним направлением.
		seed:
			Зерно генератора ошибок.

	Возвращает:
		Dataset с одним откликом на каждую ковариату.

	Исключения:
		SingularInputError: при вырожденных параметрах.
	"""
	cov = _covariate_array(covariates)
	n = cov.shape[0]
	sampler = error_sampler.sample if isinstance(error_sampler, ErrorSpec) else error_sampler
	errors = np.asarray(sampler(n, seed), dtype=float).reshape(n, 2)
	if n == 0:
		return Dataset(np.empty(0), np.empty(0), np.empty(0), np.empty(0), tuple(labels) if labels else None)
	mean_phi, mean_theta = predict_mean_arrays(params, cov[:, 0], cov[:, 1])
	return Dataset(
		cov[:, 0],
		cov[:, 1],
		mean_phi + errors[:, 0],
		mean_theta + errors[:, 1],
		tuple(labels) if labels is not None else None,
	)


def residual_pair(params: ModelParams, covariate: TorusPoint, response: TorusPoint) -> ResidualPair:
	"""Невязки одного наблюдения относительно условного среднего."""
	mean = predict_mean(params, covariate)
	return ResidualPair(
		psi=float(angular_distance(response.phi, mean.phi)),
		xi=float(angular_distance(response.theta, mean.theta)),
		sphere_deflection=float(great_circle_distance_arrays(response.phi, response.theta, mean.phi, mean.theta)),
	)


def residual_arrays(params: ModelParams, data: Dataset) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
	"""Векторизованные невязки (ψ, ξ, deflection) для всего набора."""
	mean_phi, mean_theta = predict_mean_arrays(params, data.cov_phi, data.cov_theta)
	psi = np.asarray(angular_distance(data.resp_phi, mean_phi))
	xi = np.asarray(angular_distance(data.resp_theta, mean_theta))
	deflection = np.asarray(great_circle_distance_arrays(data.resp_phi, data.resp_theta, mean_phi, mean_theta))
	return psi, xi, deflection


def signed_residuals(params: ModelParams, data: Dataset) -> Tuple[np.ndarray, np.ndarray]:
	"""Покомпонентные невязки (наблюдение − прогноз), приведённые к [−π, π)."""
	mean_phi, mean_theta = predict_mean_arrays(params, data.cov_phi, data.cov_theta)
	return signed_angle(data.resp_phi - mean_phi), signed_angle(data.resp_theta - mean_theta)


def _require_rows(data: Dataset) -> None:
	if data.n < 1:
		raise PreconditionError("Функция потерь не определена для пустого набора данных")


def loss_torus(params: ModelParams, data: Dataset, geom: TorusGeometry) -> float:
	"""(1/n) Σ [A_T(ψᵢ) + A_T(ξᵢ)]."""
	_require_rows(data)
	psi, xi, _ = residual_arrays(params, data)
	return float(np.mean(square_angle_torus(geom, psi) + square_angle_torus(geom, xi)))


def loss_sphere(params: ModelParams, data: Dataset) -> float:
	"""(1/n) Σ A_S(deflectionᵢ)."""
	_require_rows(data)
	_, _, deflection = residual_arrays(params, data)
	return float(np.mean(square_angle_sphere(deflection)))


def loss_total(params: ModelParams, data: Dataset, geom: TorusGeometry) -> float:
	"""Полная функция потерь loss_torus + loss_sphere.

	Невязки вычисляются один раз; суммирование numpy попарное, поэтому
	результат не зависит от разбиения данных.
	"""
	_require_rows(data)
	psi, xi, deflection = residual_arrays(params, data)
	torus = np.mean(square_angle_torus(geom, psi) + square_angle_torus(geom, xi))
	sphere = np.mean(square_angle_sphere(deflection))
	return float(torus + sphere)
