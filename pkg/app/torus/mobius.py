# -*- coding: utf-8 -*-
"""Обобщённые связующие функции Мёбиуса, отображающие тор в тор.

Регрессионная кривая задаётся парой
	f₁(z, w) = β₀ (z + w β₁) / (w + β̄₁ z),
	f₂(z, w) = γ₀ (w + z γ₁) / (z + γ̄₁ w),
где z = e^{iφ_z}, w = e^{iφ_w} — ковариаты, β₀ = e^{iφ₀}, γ₀ = e^{iθ₀},
β₁ = b₁ + i b₂, γ₁ = b₃ + i b₄. При |β₁| ≠ 1 и |γ₁| ≠ 1 каждая компонента
переводит единичную окружность в себя.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, replace
from typing import Sequence, Tuple, Union

import numpy as np

from ..errors import DomainError, SingularInputError
from .geometry import TorusPoint, wrap_angle

# Полоса исключения вокруг |β₁| = 1 и |γ₁| = 1
MODULUS_GUARD = 1e-6
DENOMINATOR_EPS = 1e-12
UNIT_TOL = 1e-9

UnitComplex = complex
ComplexLike = Union[complex, np.ndarray]

PARAM_NAMES = ("phi0", "b1", "b2", "b3", "b4", "theta0")


def unit_complex(angle: float) -> UnitComplex:
	"""Точка единичной окружности e^{i·angle}."""
	return cmath.exp(1j * float(angle))


def _check_unit(name: str, value: complex) -> None:
	if abs(abs(value) - 1.0) > UNIT_TOL:
		raise DomainError(f"{name} должно лежать на единичной окружности, |{name}|={abs(value):.12g}")


@dataclass(frozen=True)
class ModelParams:
	"""Шесть вещественных параметров модели (φ₀, b₁, b₂, b₃, b₄, θ₀).

	Атрибуты:
		phi0: float
			Аргумент β₀, приводится к [0, 2π).
		b1, b2: float
			β₁ = b₁ + i b₂.
		b3, b4: float
			γ₁ = b₃ + i b₄.
		theta0: float
			Аргумент γ₀, приводится к [0, 2π).
	"""

	phi0: float
	b1: float
	b2: float
	b3: float
	b4: float
	theta0: float

	def __post_init__(self) -> None:
		object.__setattr__(self, "phi0", wrap_angle(float(self.phi0)))
		object.__setattr__(self, "theta0", wrap_angle(float(self.theta0)))
		for name in ("b1", "b2", "b3", "b4"):
			object.__setattr__(self, name, float(getattr(self, name)))

	@property
	def beta0(self) -> complex:
		return unit_complex(self.phi0)

	@property
	def beta1(self) -> complex:
		return complex(self.b1, self.b2)

	@property
	def gamma0(self) -> complex:
		return unit_complex(self.theta0)

	@property
	def gamma1(self) -> complex:
		return complex(self.b3, self.b4)

	def to_vector(self) -> np.ndarray:
		return np.array([self.phi0, self.b1, self.b2, self.b3, self.b4, self.theta0], dtype=float)

	@classmethod
	def from_vector(cls, x: Sequence[float]) -> "ModelParams":
		v = [float(t) for t in x]
		if len(v) != 6:
			raise ValueError(f"Ожидается 6 параметров, получено {len(v)}")
		return cls(*v)

	@classmethod
	def from_complex(cls, beta0: complex, beta1: complex, gamma0: complex, gamma1: complex) -> "ModelParams":
		return cls(
			phi0=cmath.phase(beta0),
			b1=beta1.real,
			b2=beta1.imag,
			b3=gamma1.real,
			b4=gamma1.imag,
			theta0=cmath.phase(gamma0),
		)


def params_valid(params: ModelParams) -> Tuple[bool, str]:
	"""Проверить условия обратимости |β₁| ∉ (1 − ε, 1 + ε) и |γ₁| ∉ (1 − ε, 1 + ε).

	Возвращает:
		(ok, diagnostic): diagnostic называет нарушающий параметр или пуст.
	"""
	for name, value in (("beta1", params.beta1), ("gamma1", params.gamma1)):
		if not (np.isfinite(value.real) and np.isfinite(value.imag)):
			return False, f"{name} не конечен: {value}"
		if abs(abs(value) - 1.0) < MODULUS_GUARD:
			return False, f"|{name}| = {abs(value):.12g} попадает в полосу |·| = 1 ± {MODULUS_GUARD:g}"
	for name in ("phi0", "theta0"):
		if not np.isfinite(getattr(params, name)):
			return False, f"{name} не конечен"
	return True, ""


def _ratio(num: ComplexLike, den: ComplexLike) -> ComplexLike:
	if np.any(np.abs(den) <= DENOMINATOR_EPS):
		raise SingularInputError("Вырожденный знаменатель преобразования Мёбиуса (|β₁| или |γ₁| близок к 1)")
	return num / den


def link_f1(z: ComplexLike, w: ComplexLike, params: ModelParams) -> ComplexLike:
	"""Первая компонента связи: β₀ (z + w β₁) / (w + β̄₁ z).

	Исключения:
		SingularInputError: если |w + β̄₁ z| ≤ 1e−12.
	"""
	b1 = params.beta1
	return params.beta0 * _ratio(z + w * b1, w + np.conj(b1) * z)


def link_f2(z: ComplexLike, w: ComplexLike, params: ModelParams) -> ComplexLike:
	"""Вторая компонента связи: γ₀ (w + z γ₁) / (z + γ̄₁ w)."""
	g1 = params.gamma1
	return params.gamma0 * _ratio(w + z * g1, z + np.conj(g1) * w)


def link_f1_decomposed(z: ComplexLike, w: ComplexLike, beta1: complex) -> ComplexLike:
	"""Разложение f₁ при β₀ = 1: β̄₁⁻¹ + τ / (β̄₁ z + w), τ = w β₁ − w / β̄₁."""
	cb = np.conj(beta1)
	tau = w * beta1 - w / cb
	return 1.0 / cb + tau / (cb * z + w)


def predict_mean_arrays(params: ModelParams, phi: np.ndarray, theta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
	"""Условное среднее направление для массивов ковариат (φ_z, φ_w)."""
	z = np.exp(1j * np.asarray(phi, dtype=float))
	w = np.exp(1j * np.asarray(theta, dtype=float))
	return wrap_angle(np.angle(link_f1(z, w, params))), wrap_angle(np.angle(link_f2(z, w, params)))


def predict_mean(params: ModelParams, covariate: TorusPoint) -> TorusPoint:
	"""Условное среднее направление (arg f₁, arg f₂) в точке ковариат.

	Исключения:
		SingularInputError: при вырожденном знаменателе.
	"""
	z = unit_complex(covariate.phi)
	w = unit_complex(covariate.theta)
	return TorusPoint(cmath.phase(link_f1(z, w, params)), cmath.phase(link_f2(z, w, params)))


def rotate_response_params(params: ModelParams, W1: UnitComplex, W2: UnitComplex) -> ModelParams:
	"""Параметры после поворота откликов: β₀ ← W₁β₀, γ₀ ← W₂γ₀."""
	_check_unit("W1", W1)
	_check_unit("W2", W2)
	return replace(
		params,
		phi0=params.phi0 + cmath.phase(W1),
		theta0=params.theta0 + cmath.phase(W2),
	)


def rotate_covariate_params(params: ModelParams, W1: UnitComplex, W2: UnitComplex) -> ModelParams:
	"""Параметры, воспроизводящие прогнозы при повороте ковариат (z, w) ↦ (W₁z, W₂w).

	β₀ ← W̄₁W₂β₀, β₁ ← (W₁/W₂)β₁, γ₀ ← W̄₂W₁γ₀, γ₁ ← (W₂/W₁)γ₁.

	Исключения:
		DomainError: если |W₁| или |W₂| отличается от 1 больше чем на 1e−9.
	"""
	_check_unit("W1", W1)
	_check_unit("W2", W2)
	return ModelParams.from_complex(
		beta0=np.conj(W1) * W2 * params.beta0,
		beta1=(W1 / W2) * params.beta1,
		gamma0=np.conj(W2) * W1 * params.gamma0,
		gamma1=(W2 / W1) * params.gamma1,
	)
