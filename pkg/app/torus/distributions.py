# -*- coding: utf-8 -*-
"""Круговые и тороидальные распределения: плотности и генераторы выборок.

Содержит:
- bessel_i: модифицированная функция Бесселя первого рода (степенной ряд)
- фон Мизес (vm_density, sample_vm), обёрнутое Коши (wc_density, sample_wc)
- двумерные модели фон Мизеса: синусная и косинусная, их смесь
  (плотности и сэмплеры Гиббса с точными условными распределениями)
- derive_seed: вывод независимых зерён для параллельных задач
- CovariateSpec, ErrorSpec: описания распределений ковариат и ошибок,
  разбираемые из компактных строк вида "vm:0:1" или "sine:3:3:0"

Все генераторы детерминированы при заданном зерне. Зерно может быть целым
числом, numpy.random.SeedSequence или готовым numpy.random.Generator.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple, Union

import numpy as np

from ..errors import ConfigError, DomainError
from .geometry import TWO_PI, TorusPoint, wrap_angle

logger = logging.getLogger(__name__)

RngSeed = Union[int, np.random.SeedSequence, np.random.Generator]

BESSEL_MAX_TERMS = 300
BESSEL_REL_TOL = 1e-15
NORMALIZER_MAX_TERMS = 300
GIBBS_BURN_IN = 1000
GIBBS_THIN = 5
# Ниже этого κ распределение фон Мизеса неотличимо от равномерного
KAPPA_UNIFORM = 1e-8

_MASK64 = (1 << 64) - 1


def make_rng(seed: RngSeed) -> np.random.Generator:
	"""Генератор numpy по зерну (Generator возвращается как есть)."""
	if isinstance(seed, np.random.Generator):
		return seed
	return np.random.default_rng(seed)


def derive_seed(seed: int, index: int) -> int:
	"""Зерно для задачи с номером index (смешивание в стиле splitmix64).

	Одинаковые (seed, index) всегда дают одинаковый результат, поэтому
	порядок выполнения параллельных задач не влияет на итог.
	"""
	z = (int(seed) + (int(index) + 1) * 0x9E3779B97F4A7C15) & _MASK64
	z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
	z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
	return z ^ (z >> 31)


# ---------------------------------------------------------------------------
# Функции Бесселя
# ---------------------------------------------------------------------------

def bessel_i(order: int, x: float) -> float:
	"""Модифицированная функция Бесселя I_order(x) по восходящему ряду.

	Σ_k (x/2)^{2k+order} / (k! (k+order)!); суммирование прекращается, когда
	очередной член меньше 1e−15 от суммы, либо после 300 членов.

	Параметры:
		order: int
			Порядок m ≥ 0.
		x: float
			Аргумент x ≥ 0.

	Исключения:
		DomainError: при x < 0 или отрицательном порядке.
	"""
	if order < 0 or int(order) != order:
		raise DomainError(f"Порядок функции Бесселя должен быть целым ≥ 0, получено {order}")
	if not (x >= 0.0) or not math.isfinite(x):
		raise DomainError(f"Аргумент функции Бесселя должен быть ≥ 0, получено {x}")
	order = int(order)
	if x == 0.0:
		return 1.0 if order == 0 else 0.0
	half = 0.5 * x
	# первый член (x/2)^m / m! в логарифмах, чтобы не переполниться при больших m
	term = math.exp(order * math.log(half) - math.lgamma(order + 1))
	total = term
	q = half * half
	for k in range(1, BESSEL_MAX_TERMS):
		term *= q / (k * (k + order))
		total += term
		if term < BESSEL_REL_TOL * total:
			break
	return total


def _signed_bessel(order: int, x: float) -> float:
	"""I_m(x) для любого вещественного x: I_m(−x) = (−1)^m I_m(x)."""
	value = bessel_i(order, abs(x))
	if x < 0 and order % 2 == 1:
		return -value
	return value


# ---------------------------------------------------------------------------
# Одномерные распределения
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VonMisesParams:
	"""Параметры фон Мизеса: среднее направление mu и концентрация kappa ≥ 0."""

	mu: float = 0.0
	kappa: float = 1.0

	def __post_init__(self) -> None:
		object.__setattr__(self, "mu", wrap_angle(float(self.mu)))
		if not (self.kappa >= 0.0) or not math.isfinite(self.kappa):
			raise DomainError(f"Концентрация фон Мизеса должна быть ≥ 0, получено {self.kappa}")


@dataclass(frozen=True)
class WrappedCauchyParams:
	"""Параметры обёрнутого Коши: mu и концентрация 0 ≤ zeta < 1."""

	mu: float = 0.0
	zeta: float = 0.5

	def __post_init__(self) -> None:
		object.__setattr__(self, "mu", wrap_angle(float(self.mu)))
		if not (0.0 <= self.zeta < 1.0):
			raise DomainError(f"Концентрация обёрнутого Коши должна лежать в [0, 1), получено {self.zeta}")


def vm_density(theta, p: VonMisesParams):
	"""Плотность фон Мизеса e^{κ cos(θ−μ)} / (2π I₀(κ))."""
	value = np.exp(p.kappa * np.cos(np.asarray(theta, dtype=float) - p.mu)) / (TWO_PI * bessel_i(0, p.kappa))
	return float(value) if np.ndim(value) == 0 else value


def _vm_rejection(mu: float, kappa: float, rng: np.random.Generator) -> float:
	"""Одна выборка фон Мизеса методом Беста–Фишера (огибающая — обёрнутое Коши)."""
	if kappa < KAPPA_UNIFORM:
		return wrap_angle(rng.random() * TWO_PI)
	tau = 1.0 + math.sqrt(1.0 + 4.0 * kappa * kappa)
	rho = (tau - math.sqrt(2.0 * tau)) / (2.0 * kappa)
	r = (1.0 + rho * rho) / (2.0 * rho)
	while True:
		u1, u2, u3 = rng.random(3)
		z = math.cos(math.pi * u1)
		f = (1.0 + r * z) / (r + z)
		c = kappa * (r - f)
		if c * (2.0 - c) - u2 > 0.0 or (u2 > 0.0 and math.log(c / u2) + 1.0 - c >= 0.0):
			angle = math.acos(max(-1.0, min(1.0, f)))
			if u3 < 0.5:
				angle = -angle
			return wrap_angle(mu + angle)


def sample_vm(p: VonMisesParams, n: int, seed: RngSeed) -> np.ndarray:
	"""n независимых выборок фон Мизеса (массив углов в [0, 2π))."""
	if n < 0:
		raise DomainError(f"Размер выборки должен быть ≥ 0, получено {n}")
	rng = make_rng(seed)
	return np.array([_vm_rejection(p.mu, p.kappa, rng) for _ in range(int(n))], dtype=float)


def wc_density(theta, p: WrappedCauchyParams):
	"""Плотность обёрнутого Коши (1/2π)(1 − ζ²)/(1 + ζ² − 2ζ cos(θ − μ))."""
	z = p.zeta
	value = (1.0 - z * z) / (TWO_PI * (1.0 + z * z - 2.0 * z * np.cos(np.asarray(theta, dtype=float) - p.mu)))
	return float(value) if np.ndim(value) == 0 else value


def sample_wc(p: WrappedCauchyParams, n: int, seed: RngSeed) -> np.ndarray:
	"""Выборка обёрнутого Коши: линейный Коши с масштабом −ln ζ, обёрнутый по модулю 2π."""
	if n < 0:
		raise DomainError(f"Размер выборки должен быть ≥ 0, получено {n}")
	rng = make_rng(seed)
	if p.zeta == 0.0:
		return wrap_angle(rng.random(int(n)) * TWO_PI)
	scale = -math.log(p.zeta)
	return wrap_angle(p.mu + scale * rng.standard_cauchy(int(n)))


# ---------------------------------------------------------------------------
# Тороидальные распределения
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BvmSineParams:
	"""Синусная модель фон Мизеса: mu_phi, mu_theta, kappa1, kappa2 > 0, kappa3."""

	mu_phi: float = 0.0
	mu_theta: float = 0.0
	kappa1: float = 3.0
	kappa2: float = 3.0
	kappa3: float = 0.0

	def __post_init__(self) -> None:
		object.__setattr__(self, "mu_phi", wrap_angle(float(self.mu_phi)))
		object.__setattr__(self, "mu_theta", wrap_angle(float(self.mu_theta)))
		if not (self.kappa1 > 0 and self.kappa2 > 0):
			raise DomainError(f"kappa1, kappa2 должны быть > 0, получено {self.kappa1}, {self.kappa2}")


@dataclass(frozen=True)
class BvmCosineParams:
	"""Косинусная модель фон Мизеса: mu_phi, mu_theta, rho1, rho2 > 0, rho3."""

	mu_phi: float = 0.0
	mu_theta: float = 0.0
	rho1: float = 4.0
	rho2: float = 4.0
	rho3: float = 0.0

	def __post_init__(self) -> None:
		object.__setattr__(self, "mu_phi", wrap_angle(float(self.mu_phi)))
		object.__setattr__(self, "mu_theta", wrap_angle(float(self.mu_theta)))
		if not (self.rho1 > 0 and self.rho2 > 0):
			raise DomainError(f"rho1, rho2 должны быть > 0, получено {self.rho1}, {self.rho2}")


@dataclass(frozen=True)
class MixtureParams:
	"""Смесь синусной и косинусной моделей; weight — вероятность синусной компоненты."""

	sine: BvmSineParams = field(default_factory=BvmSineParams)
	cosine: BvmCosineParams = field(default_factory=BvmCosineParams)
	weight: float = 0.5

	def __post_init__(self) -> None:
		if not (0.0 <= self.weight <= 1.0):
			raise DomainError(f"Вес смеси должен лежать в [0, 1], получено {self.weight}")


def torus_normalizer_numeric(log_density: Callable[[np.ndarray, np.ndarray], np.ndarray], grid: int = 512) -> float:
	"""∫∫ exp(log_density) по тору периодическим правилом трапеций.

	Для гладких периодических подынтегральных функций правило сходится
	экспоненциально, поэтому сетки 512×512 достаточно.
	"""
	t = np.arange(grid) * (TWO_PI / grid)
	phi, theta = np.meshgrid(t, t, indexing="ij")
	values = log_density(phi, theta)
	shift = float(np.max(values))
	return float(np.exp(shift) * np.mean(np.exp(values - shift)) * TWO_PI * TWO_PI)


def _sine_exponent(p: BvmSineParams, phi, theta):
	a = np.asarray(phi, dtype=float) - p.mu_phi
	b = np.asarray(theta, dtype=float) - p.mu_theta
	return p.kappa1 * np.cos(a) + p.kappa2 * np.cos(b) + p.kappa3 * np.sin(a) * np.sin(b)


def _cosine_exponent(p: BvmCosineParams, phi, theta):
	a = np.asarray(phi, dtype=float) - p.mu_phi
	b = np.asarray(theta, dtype=float) - p.mu_theta
	return p.rho1 * np.cos(a) + p.rho2 * np.cos(b) + p.rho3 * np.cos(a - b)


def bvm_sine_normalizer(p: BvmSineParams) -> float:
	"""C̃ = 4π² Σ_m C(2m, m) (κ₃²/(4κ₁κ₂))^m I_m(κ₁) I_m(κ₂).

	Если ряд не сошёлся за 300 членов или дал нечисловое значение,
	используется численная нормировка по тору.
	"""
	ratio = p.kappa3 * p.kappa3 / (4.0 * p.kappa1 * p.kappa2)
	total = 0.0
	binom = 1.0
	converged = False
	for m in range(NORMALIZER_MAX_TERMS):
		if m > 0:
			binom *= (2.0 * m) * (2.0 * m - 1.0) / (m * m)
		term = binom * ratio ** m * bessel_i(m, p.kappa1) * bessel_i(m, p.kappa2)
		if not math.isfinite(term):
			break
		total += term
		if ratio == 0.0 or term < BESSEL_REL_TOL * total:
			converged = True
			break
	if converged and math.isfinite(total) and total > 0:
		return 4.0 * math.pi ** 2 * total
	logger.warning("Ряд нормировки синусной модели не сошёлся (%s), численная нормировка", p)
	return torus_normalizer_numeric(lambda a, b: _sine_exponent(p, a, b))


def bvm_cosine_normalizer(p: BvmCosineParams) -> float:
	"""C̃ = 4π² [I₀(ρ₁)I₀(ρ₂)I₀(ρ₃) + 2 Σ_{m≥1} I_m(ρ₁)I_m(ρ₂)I_m(ρ₃)]."""
	total = bessel_i(0, p.rho1) * bessel_i(0, p.rho2) * _signed_bessel(0, p.rho3)
	if p.rho3 != 0.0:
		for m in range(1, NORMALIZER_MAX_TERMS):
			term = 2.0 * bessel_i(m, p.rho1) * bessel_i(m, p.rho2) * _signed_bessel(m, p.rho3)
			total += term
			if abs(term) < BESSEL_REL_TOL * abs(total):
				break
	return 4.0 * math.pi ** 2 * total


def bvm_sine_density(point, p: BvmSineParams, normalizer: Optional[float] = None):
	"""Плотность синусной модели exp{κ₁cos a + κ₂cos b + κ₃ sin a sin b} / C̃.

	Параметры:
		point: TorusPoint | Tuple[np.ndarray, np.ndarray]
			Точка тора или пара массивов (phi, theta).
		p: BvmSineParams
			Параметры модели.
		normalizer: Optional[float]
			Заранее вычисленная C̃ (для повторных вызовов).
	"""
	phi, theta = point.as_tuple() if isinstance(point, TorusPoint) else point
	c = bvm_sine_normalizer(p) if normalizer is None else normalizer
	value = np.exp(_sine_exponent(p, phi, theta)) / c
	return float(value) if np.ndim(value) == 0 else value


def bvm_cosine_density(point, p: BvmCosineParams, normalizer: Optional[float] = None):
	"""Плотность косинусной модели exp{ρ₁cos a + ρ₂cos b + ρ₃cos(a − b)} / C̃."""
	phi, theta = point.as_tuple() if isinstance(point, TorusPoint) else point
	c = bvm_cosine_normalizer(p) if normalizer is None else normalizer
	value = np.exp(_cosine_exponent(p, phi, theta)) / c
	return float(value) if np.ndim(value) == 0 else value


def _gibbs(
	n: int,
	seed: RngSeed,
	start: Tuple[float, float],
	phi_given_theta: Callable[[float], Tuple[float, float]],
	theta_given_phi: Callable[[float], Tuple[float, float]],
) -> np.ndarray:
	"""Общий цикл Гиббса: прогрев GIBBS_BURN_IN проходов, прореживание GIBBS_THIN.

	Условные распределения задаются функциями, возвращающими (μ, κ)
	фон Мизеса при фиксированной второй координате.
	"""
	if n < 0:
		raise DomainError(f"Размер выборки должен быть ≥ 0, получено {n}")
	out = np.empty((int(n), 2), dtype=float)
	if n == 0:
		return out
	rng = make_rng(seed)
	phi, theta = start
	kept = 0
	sweep = 0
	while kept < n:
		mu, kappa = phi_given_theta(theta)
		phi = _vm_rejection(mu, kappa, rng)
		mu, kappa = theta_given_phi(phi)
		theta = _vm_rejection(mu, kappa, rng)
		sweep += 1
		if sweep > GIBBS_BURN_IN and (sweep - GIBBS_BURN_IN) % GIBBS_THIN == 0:
			out[kept] = (phi, theta)
			kept += 1
	return out


def sample_bvm_sine(p: BvmSineParams, n: int, seed: RngSeed) -> np.ndarray:
	"""Выборка синусной модели сэмплером Гиббса, массив формы (n, 2).

	φ | θ ~ vM(μ_φ + atan2(κ₃ sin(θ−μ_θ), κ₁), √(κ₁² + κ₃² sin²(θ−μ_θ))),
	θ | φ — симметрично.
	"""
	def phi_given_theta(theta: float) -> Tuple[float, float]:
		s = p.kappa3 * math.sin(theta - p.mu_theta)
		return p.mu_phi + math.atan2(s, p.kappa1), math.hypot(p.kappa1, s)

	def theta_given_phi(phi: float) -> Tuple[float, float]:
		s = p.kappa3 * math.sin(phi - p.mu_phi)
		return p.mu_theta + math.atan2(s, p.kappa2), math.hypot(p.kappa2, s)

	return _gibbs(n, seed, (p.mu_phi, p.mu_theta), phi_given_theta, theta_given_phi)


def sample_bvm_cosine(p: BvmCosineParams, n: int, seed: RngSeed) -> np.ndarray:
	"""Выборка косинусной модели сэмплером Гиббса, массив формы (n, 2).

	φ | θ ~ vM(μ_φ + atan2(ρ₃ sin b, ρ₁ + ρ₃ cos b), √(ρ₁² + ρ₃² + 2ρ₁ρ₃ cos b)),
	b = θ − μ_θ; θ | φ — симметрично.
	"""
	def phi_given_theta(theta: float) -> Tuple[float, float]:
		b = theta - p.mu_theta
		x = p.rho1 + p.rho3 * math.cos(b)
		y = p.rho3 * math.sin(b)
		return p.mu_phi + math.atan2(y, x), math.hypot(x, y)

	def theta_given_phi(phi: float) -> Tuple[float, float]:
		a = phi - p.mu_phi
		x = p.rho2 + p.rho3 * math.cos(a)
		y = p.rho3 * math.sin(a)
		return p.mu_theta + math.atan2(y, x), math.hypot(x, y)

	return _gibbs(n, seed, (p.mu_phi, p.mu_theta), phi_given_theta, theta_given_phi)


def mixture_seeds(seed: RngSeed) -> Tuple[np.random.SeedSequence, np.random.SeedSequence, np.random.SeedSequence]:
	"""Подпоследовательности зерна смеси: (выбор компоненты, синусная, косинусная)."""
	if isinstance(seed, np.random.Generator):
		seed = int(seed.integers(0, 2 ** 63))
	base = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(int(seed))
	selector, sine, cosine = base.spawn(3)
	return selector, sine, cosine


def sample_mixture(p: MixtureParams, n: int, seed: RngSeed) -> np.ndarray:
	"""Выборка смеси: каждая точка берётся из синусной модели с вероятностью weight.

	Компоненты генерируются по собственным подпоследовательностям зерна
	(см. mixture_seeds), поэтому при weight = 1 результат совпадает с
	sample_bvm_sine(p.sine, n, sine_seed).
	"""
	if n < 0:
		raise DomainError(f"Размер выборки должен быть ≥ 0, получено {n}")
	selector_seed, sine_seed, cosine_seed = mixture_seeds(seed)
	choose_sine = make_rng(selector_seed).random(int(n)) < p.weight
	n_sine = int(np.count_nonzero(choose_sine))
	out = np.empty((int(n), 2), dtype=float)
	out[choose_sine] = sample_bvm_sine(p.sine, n_sine, sine_seed)
	out[~choose_sine] = sample_bvm_cosine(p.cosine, int(n) - n_sine, cosine_seed)
	return out


# ---------------------------------------------------------------------------
# Спецификации ковариат и ошибок
# ---------------------------------------------------------------------------

def _parse_numbers(text: str, expected: Tuple[int, ...], family: str) -> Tuple[float, ...]:
	parts = [t for t in text.split(":")[1:] if t != ""]
	if len(parts) not in expected:
		raise ConfigError(f"Спецификация '{text}': для '{family}' ожидается {expected} чисел, получено {len(parts)}")
	try:
		return tuple(float(t) for t in parts)
	except ValueError as exc:
		raise ConfigError(f"Спецификация '{text}': не число ({exc})") from exc


@dataclass(frozen=True)
class CovariateSpec:
	"""Распределение ковариат: φ_z и φ_w независимы и одинаково распределены.

	family: "vm" (mu, kappa), "wc" (mu, zeta) или "uniform".
	"""

	family: str = "vm"
	mu: float = 0.0
	concentration: float = 1.0

	def __post_init__(self) -> None:
		if self.family not in ("vm", "wc", "uniform"):
			raise ConfigError(f"Неизвестное семейство ковариат '{self.family}'")

	@classmethod
	def parse(cls, text: str) -> "CovariateSpec":
		family = text.split(":")[0].strip().lower()
		if family == "uniform":
			return cls("uniform", 0.0, 0.0)
		mu, conc = _parse_numbers(text, (2,), family)
		return cls(family, mu, conc)

	def describe(self) -> str:
		if self.family == "uniform":
			return "uniform"
		return f"{self.family}:{self.mu:g}:{self.concentration:g}"

	def sample(self, n: int, seed: RngSeed) -> np.ndarray:
		"""Массив (n, 2) ковариат; компоненты берутся из независимых подпоследовательностей."""
		base = make_rng(seed)
		seeds = [int(s) for s in base.integers(0, 2 ** 63, size=2)]
		cols = []
		for s in seeds:
			if self.family == "vm":
				cols.append(sample_vm(VonMisesParams(self.mu, self.concentration), n, s))
			elif self.family == "wc":
				cols.append(sample_wc(WrappedCauchyParams(self.mu, self.concentration), n, s))
			else:
				cols.append(wrap_angle(make_rng(s).random(int(n)) * TWO_PI))
		return np.column_stack(cols) if n > 0 else np.empty((0, 2))


@dataclass(frozen=True)
class ErrorSpec:
	"""Распределение угловых ошибок с нулевым средним направлением.

	family:
		"zero" — ошибок нет;
		"vm" — независимые компоненты фон Мизеса (kappa1, kappa2);
		"sine" — (kappa1, kappa2, kappa3);
		"cosine" — (rho1, rho2, rho3);
		"mixture" — (kappa1, kappa2, kappa3, rho1, rho2, rho3, weight).
	"""

	family: str = "zero"
	values: Tuple[float, ...] = ()

	_ARITY = {"zero": (0,), "vm": (2,), "sine": (3,), "cosine": (3,), "mixture": (6, 7)}

	def __post_init__(self) -> None:
		if self.family not in self._ARITY:
			raise ConfigError(f"Неизвестное семейство ошибок '{self.family}'")
		if len(self.values) not in self._ARITY[self.family]:
			raise ConfigError(f"Для ошибок '{self.family}' ожидается {self._ARITY[self.family]} чисел")
		# проверка допустимости параметров сразу при построении
		self.distribution()

	@classmethod
	def parse(cls, text: str) -> "ErrorSpec":
		family = text.split(":")[0].strip().lower()
		if family not in cls._ARITY:
			raise ConfigError(f"Неизвестное семейство ошибок '{family}'")
		return cls(family, _parse_numbers(text, cls._ARITY[family], family))

	def describe(self) -> str:
		return ":".join([self.family] + [f"{v:g}" for v in self.values])

	def distribution(self):
		v = self.values
		if self.family == "sine":
			return BvmSineParams(0.0, 0.0, v[0], v[1], v[2])
		if self.family == "cosine":
			return BvmCosineParams(0.0, 0.0, v[0], v[1], v[2])
		if self.family == "mixture":
			weight = v[6] if len(v) == 7 else 0.5
			return MixtureParams(BvmSineParams(0.0, 0.0, v[0], v[1], v[2]), BvmCosineParams(0.0, 0.0, v[3], v[4], v[5]), weight)
		if self.family == "vm":
			return (VonMisesParams(0.0, v[0]), VonMisesParams(0.0, v[1]))
		return None

	def sample(self, n: int, seed: RngSeed) -> np.ndarray:
		"""Массив (n, 2) угловых ошибок."""
		dist = self.distribution()
		if self.family == "zero":
			return np.zeros((int(n), 2))
		if self.family == "sine":
			return sample_bvm_sine(dist, n, seed)
		if self.family == "cosine":
			return sample_bvm_cosine(dist, n, seed)
		if self.family == "mixture":
			return sample_mixture(dist, n, seed)
		rng = make_rng(seed)
		return np.column_stack([sample_vm(dist[0], n, rng), sample_vm(dist[1], n, rng)]) if n > 0 else np.empty((0, 2))
