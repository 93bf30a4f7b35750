# -*- coding: utf-8 -*-
"""Настройки запуска: значения по умолчанию, файл key = value и флаги командной строки.

Приоритет: явно заданный флаг > значение из файла > значение по умолчанию.
"""
from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass
from typing import Any, Dict, Mapping, Optional

from .errors import ConfigError, DomainError
from .optim.selection import FitConfig, default_bounds
from .torus.geometry import TorusGeometry

logger = logging.getLogger(__name__)

UNITS = ("degrees", "radians")


@dataclass(frozen=True)
class RunConfig:
	"""Полный набор настроек одного запуска CLI.

	Атрибуты:
		R, r: float
			Радиусы тора для функции потерь (R ≥ r > 0).
		restarts: int
			Число стартов оценки.
		b_bound: float
			Границы b₁…b₄ ∈ [−b_bound, b_bound].
		seed: int
			Зерно всех случайных шагов.
		tol, h: float
			Критерий остановки и шаг численного градиента.
		max_iter: int
			Максимум итераций на старт.
		bootstrap: int
			Число бутстреп-повторов B (0 — не считать стандартные ошибки).
		bootstrap_restarts: int
			Число стартов в каждом бутстреп-повторе.
		workers: int
			Число потоков.
		units: str
			Единицы углов в CSV: "degrees" или "radians".
	"""

	R: float = 2.0
	r: float = 1.0
	restarts: int = 64
	b_bound: float = 20.0
	seed: int = 0
	tol: float = 1e-10
	h: float = 1e-6
	max_iter: int = 500
	bootstrap: int = 0
	bootstrap_restarts: int = 8
	workers: int = 1
	units: str = "degrees"

	def __post_init__(self) -> None:
		if self.units not in UNITS:
			raise ConfigError(f"units должно быть одним из {UNITS}, получено '{self.units}'")
		if self.restarts < 1:
			raise ConfigError(f"restarts должно быть ≥ 1, получено {self.restarts}")
		if self.workers < 1:
			raise ConfigError(f"workers должно быть ≥ 1, получено {self.workers}")
		if self.bootstrap < 0 or self.bootstrap_restarts < 1:
			raise ConfigError("bootstrap должно быть ≥ 0, bootstrap_restarts ≥ 1")
		if self.b_bound <= 0 or self.tol <= 0 or self.h <= 0 or self.max_iter < 1:
			raise ConfigError("b_bound, tol, h и max_iter должны быть положительными")
		try:
			TorusGeometry(self.R, self.r)
		except DomainError as exc:
			raise ConfigError(str(exc)) from exc

	@property
	def geometry(self) -> TorusGeometry:
		return TorusGeometry(self.R, self.r)

	def fit_config(self, restarts: Optional[int] = None) -> FitConfig:
		"""FitConfig для estimation.fit; restarts можно переопределить (бутстреп)."""
		return FitConfig(
			restarts=self.restarts if restarts is None else restarts,
			bounds=default_bounds(self.b_bound),
			h=self.h,
			tol=self.tol,
			max_iter=self.max_iter,
			seed=self.seed,
			geometry=self.geometry,
			workers=self.workers,
		)

	@classmethod
	def from_sources(
		cls,
		file_values: Optional[Mapping[str, str]] = None,
		flag_values: Optional[Mapping[str, Any]] = None,
	) -> "RunConfig":
		"""Собрать настройки: флаги со значением None считаются незаданными."""
		merged: Dict[str, Any] = {}
		for key, raw in (file_values or {}).items():
			merged[key] = _coerce(key, raw)
		for key, value in (flag_values or {}).items():
			if value is not None:
				merged[key] = value
		return cls(**merged)


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}


def _coerce(key: str, raw: str) -> Any:
	kind = type(_FIELDS[key].default)
	try:
		if kind is int:
			return int(raw)
		if kind is float:
			return float(raw)
	except ValueError as exc:
		raise ConfigError(f"Значение '{raw}' ключа {key} не является числом") from exc
	return raw


def parse_config_text(text: str, source: str = "<config>") -> Dict[str, str]:
	"""Разобрать строки вида key = value; '#' начинает комментарий.

	Исключения:
		ConfigError: строка без '=', неизвестный или повторный ключ.
	"""
	values: Dict[str, str] = {}
	for lineno, line in enumerate(text.splitlines(), start=1):
		line = line.split("#", 1)[0].strip()
		if not line:
			continue
		if "=" not in line:
			raise ConfigError(f"{source}, строка {lineno}: ожидалось key = value, получено '{line}'")
		key, value = (part.strip() for part in line.split("=", 1))
		if key not in _FIELDS:
			raise ConfigError(f"{source}, строка {lineno}: неизвестный ключ '{key}'")
		if key in values:
			raise ConfigError(f"{source}, строка {lineno}: ключ '{key}' задан повторно")
		values[key] = value
	return values


def load_config_file(path: str) -> Dict[str, str]:
	"""Прочитать файл настроек; ошибки формата поднимаются как ConfigError."""
	with open(path, "r", encoding="utf-8") as fh:
		text = fh.read()
	values = parse_config_text(text, source=path)
	logger.debug("Прочитаны настройки из %s: %s", path, sorted(values))
	return values
