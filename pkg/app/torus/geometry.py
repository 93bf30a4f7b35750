# -*- coding: utf-8 -*-
"""Внутренняя геометрия вложенного тора и единичной сферы.

Содержит:
- TorusGeometry, TorusPoint: радиусы тора и точка на нём (пара углов)
- embed_torus, torus_area_density: параметризация и элемент площади
- square_angle_torus, square_angle_sphere: «квадратные» угловые площади
- angular_distance, torus_normal, great_circle_distance
- area_element_expr: символьный вывод элемента площади через первую
  фундаментальную форму (sympy)

Все функции принимают как скаляры, так и массивы numpy (поэлементно).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Tuple, Union

import numpy as np
import sympy as sp

from ..errors import DomainError

TWO_PI = 2.0 * np.pi

# Углы хранятся как вещественные числа в радианах
Angle = float
Vec3 = np.ndarray
ArrayLike = Union[float, np.ndarray]


def wrap_angle(x: ArrayLike) -> ArrayLike:
	"""Привести угол к каноническому представителю в [0, 2π).

	Параметры:
		x: float | np.ndarray
			Произвольный угол (или массив углов) в радианах.

	Возвращает:
		То же, приведённое по модулю 2π.
	"""
	v = np.mod(x, TWO_PI)
	# x % 2π может дать ровно 2π для крошечных отрицательных x
	v = np.where(v >= TWO_PI, 0.0, v)
	if np.ndim(v) == 0:
		return float(v)
	return v


def signed_angle(x: ArrayLike) -> ArrayLike:
	"""Представитель угла в [−π, π)."""
	v = wrap_angle(np.asarray(x, dtype=float) + np.pi)
	return v - np.pi


@dataclass(frozen=True)
class TorusGeometry:
	"""Радиусы вложенного тора.

	Атрибуты:
		R: float
			Горизонтальный (большой) радиус.
		r: float
			Вертикальный (малый) радиус.

	Требуется R ≥ r > 0; вырожденный случай r = R допустим.
	"""

	R: float = 2.0
	r: float = 1.0

	def __post_init__(self) -> None:
		if not (np.isfinite(self.R) and np.isfinite(self.r)):
			raise DomainError(f"Радиусы тора должны быть конечными: R={self.R}, r={self.r}")
		if self.r <= 0:
			raise DomainError(f"Малый радиус должен быть > 0, получено r={self.r}")
		if self.R < self.r:
			raise DomainError(f"Требуется R ≥ r (кольцевой тор), получено R={self.R}, r={self.r}")

	@property
	def ratio(self) -> float:
		return self.r / self.R


@dataclass(frozen=True)
class TorusPoint:
	"""Точка тора 𝕋₂: горизонтальный угол phi и вертикальный угол theta."""

	phi: float
	theta: float

	def __post_init__(self) -> None:
		object.__setattr__(self, "phi", wrap_angle(float(self.phi)))
		object.__setattr__(self, "theta", wrap_angle(float(self.theta)))

	def as_tuple(self) -> Tuple[float, float]:
		return (self.phi, self.theta)


def embed_torus(geom: TorusGeometry, p: TorusPoint) -> Vec3:
	"""Координаты точки тора в R³: ((R + r cos θ) cos φ, (R + r cos θ) sin φ, r sin θ)."""
	ring = geom.R + geom.r * np.cos(p.theta)
	return np.array([ring * np.cos(p.phi), ring * np.sin(p.phi), geom.r * np.sin(p.theta)])


def torus_area_density(geom: TorusGeometry, theta: ArrayLike) -> ArrayLike:
	"""Элемент площади тора r (R + r cos θ)."""
	return geom.r * (geom.R + geom.r * np.cos(theta))


def _check_delta(delta: ArrayLike) -> np.ndarray:
	d = np.asarray(delta, dtype=float)
	if np.any(~np.isfinite(d)) or np.any(d < 0.0) or np.any(d > np.pi):
		raise DomainError(f"Угловое отклонение должно лежать в [0, π], получено {delta!r}")
	return d


def _scalar_or_array(v: np.ndarray) -> ArrayLike:
	return float(v) if np.ndim(v) == 0 else v


def square_angle_torus(geom: TorusGeometry, delta: ArrayLike) -> ArrayLike:
	"""Площадь прямоугольника [0, δ]² под элементом площади тора.

	∫₀^δ ∫₀^δ r (R + r cos t) dφ dt = r δ (R δ + r sin δ).

	Параметры:
		geom: TorusGeometry
			Радиусы тора.
		delta: float | np.ndarray
			Угловое отклонение в [0, π] (предварительно сведённое angular_distance).

	Возвращает:
		Неотрицательная площадь; 0 при δ = 0.

	Исключения:
		DomainError: если δ вне [0, π].
	"""
	d = _check_delta(delta)
	return _scalar_or_array(geom.r * d * (geom.R * d + geom.r * np.sin(d)))


def square_angle_sphere(delta: ArrayLike) -> ArrayLike:
	"""Площадь прямоугольника [0, δ]² под элементом площади сферы |cos t|.

	δ sin δ при δ ≤ π/2 и δ (2 − sin δ) при δ > π/2.

	Исключения:
		DomainError: если δ вне [0, π].
	"""
	d = _check_delta(delta)
	s = np.sin(d)
	return _scalar_or_array(np.where(d <= np.pi / 2, d * s, d * (2.0 - s)))


def angular_distance(a: ArrayLike, b: ArrayLike) -> ArrayLike:
	"""Минимальное угловое расстояние между углами, значение в [0, π]."""
	diff = np.mod(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)), TWO_PI)
	return _scalar_or_array(np.minimum(diff, TWO_PI - diff))


def _normal_components(phi: ArrayLike, theta: ArrayLike) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
	ct = np.cos(theta)
	return np.cos(phi) * ct, np.sin(phi) * ct, np.sin(theta)


def torus_normal(p: TorusPoint) -> Vec3:
	"""Единичная нормаль к тору (cos φ cos θ, sin φ cos θ, sin θ)."""
	return np.array(_normal_components(p.phi, p.theta))


def great_circle_distance_arrays(
	phi1: ArrayLike, theta1: ArrayLike, phi2: ArrayLike, theta2: ArrayLike,
) -> ArrayLike:
	"""Расстояние по большому кругу между нормалями, поэлементно для массивов."""
	inner = np.sin(theta1) * np.sin(theta2) + np.cos(theta1) * np.cos(theta2) * np.cos(
		np.asarray(phi1, dtype=float) - np.asarray(phi2, dtype=float)
	)
	return _scalar_or_array(np.arccos(np.clip(inner, -1.0, 1.0)))


def great_circle_distance(p1: TorusPoint, p2: TorusPoint) -> float:
	"""Кратчайшее расстояние (по большому кругу) между нормалями двух точек тора.

	arccos[sin θ₁ sin θ₂ + cos θ₁ cos θ₂ cos(φ₁ − φ₂)], аргумент arccos
	ограничивается отрезком [−1, 1].
	"""
	return float(great_circle_distance_arrays(p1.phi, p1.theta, p2.phi, p2.theta))


@lru_cache(maxsize=1)
def area_element_expr() -> sp.Expr:
	"""Символьный элемент площади тора √(EG − F²).

	Первая фундаментальная форма параметризации
	x(φ, θ) = ((R + r cos θ) cos φ, (R + r cos θ) sin φ, r sin θ)
	вычисляется через частные производные; результат зависит от символов
	R, r, theta.
	"""
	R, r = sp.symbols("R r", positive=True)
	phi, theta = sp.symbols("phi theta", real=True)
	x = sp.Matrix([
		(R + r * sp.cos(theta)) * sp.cos(phi),
		(R + r * sp.cos(theta)) * sp.sin(phi),
		r * sp.sin(theta),
	])
	x_phi = x.diff(phi)
	x_theta = x.diff(theta)
	E = sp.simplify(x_phi.dot(x_phi))
	F = sp.simplify(x_phi.dot(x_theta))
	G = sp.simplify(x_theta.dot(x_theta))
	return sp.sqrt(sp.factor(sp.simplify(E * G - F ** 2)))


def area_element_function(geom: TorusGeometry) -> Callable[[ArrayLike], ArrayLike]:
	"""Численная функция θ ↦ √(EG − F²) для заданных радиусов."""
	expr = area_element_expr()
	symbols = {s.name: s for s in expr.free_symbols}
	bound = expr.subs({symbols["R"]: geom.R, symbols["r"]: geom.r})
	return sp.lambdify(symbols["theta"], bound, modules=["numpy"])
