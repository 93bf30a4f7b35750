# -*- coding: utf-8 -*-
"""Иерархия исключений пакета.

Каждый класс наследует и от общего базового TorusRegressionError, и от
подходящего встроенного исключения, чтобы вызывающий код мог ловить
привычные ValueError/ZeroDivisionError.
"""
from __future__ import annotations

from typing import Any, Dict, List, Optional


class TorusRegressionError(Exception):
	"""Базовое исключение пакета."""


class DomainError(TorusRegressionError, ValueError):
	"""Аргумент вне математической области определения операции."""


class SingularInputError(TorusRegressionError, ZeroDivisionError):
	"""Вырожденный знаменатель преобразования Мёбиуса."""


class PreconditionError(TorusRegressionError, ValueError):
	"""Нарушено предусловие операции (пустые данные, малая выборка и т.п.)."""


class ConfigError(TorusRegressionError, ValueError):
	"""Некорректный файл конфигурации или строка спецификации."""


class EstimationError(TorusRegressionError, RuntimeError):
	"""Ни один старт оптимизации не дал допустимых параметров.

	Атрибуты:
		diagnostics: List[Dict[str, Any]]
			Сводка по каждому старту (начальная точка, итог, причина отказа).
	"""

	def __init__(self, message: str, diagnostics: Optional[List[Dict[str, Any]]] = None):
		super().__init__(message)
		self.diagnostics: List[Dict[str, Any]] = list(diagnostics or [])


class CsvParseError(TorusRegressionError, ValueError):
	"""Ошибка разбора CSV с указанием файла, строки и столбца."""

	def __init__(self, message: str, path: str = "", row: Optional[int] = None, column: Optional[str] = None):
		where = []
		if path:
			where.append(f"файл {path}")
		if row is not None:
			where.append(f"строка {row}")
		if column is not None:
			where.append(f"столбец {column}")
		full = f"{message} ({', '.join(where)})" if where else message
		super().__init__(full)
		self.path = path
		self.row = row
		self.column = column
