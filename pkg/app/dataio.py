# -*- coding: utf-8 -*-
"""Чтение и запись файлов: CSV наборов данных, отчёты оценки и диагностики, метаданные.

Формат CSV: UTF-8, запятая, обязательная строка заголовка со столбцами
cov_phi, cov_theta, resp_phi, resp_theta (для файла ковариат только
cov_phi, cov_theta) и необязательным первым столбцом timestamp. Углы по
умолчанию в градусах. Направления берутся как есть: соглашение «откуда /
куда» должно быть одинаковым в пределах файла.

Отчёт оценки: строки «ключ = значение», затем строка «starts:» и CSV-таблица
стартов. Числа параметров пишутся через repr, поэтому чтение отчёта
восстанавливает их без потерь.
"""
from __future__ import annotations

import json
import logging
import math
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .errors import CsvParseError, PreconditionError
from .optim.selection import FitResult
from .torus.distributions import CovariateSpec, ErrorSpec
from .torus.geometry import TorusGeometry, wrap_angle
from .torus.mobius import PARAM_NAMES, ModelParams
from .torus.model import Dataset, simulate_responses

logger = logging.getLogger(__name__)

TIMESTAMP = "timestamp"
COVARIATE_COLUMNS = ("cov_phi", "cov_theta")
RESPONSE_COLUMNS = ("resp_phi", "resp_theta")
DATASET_COLUMNS = COVARIATE_COLUMNS + RESPONSE_COLUMNS
PREDICTION_COLUMNS = ("pred_phi", "pred_theta")
FLOAT_FORMAT = "%.12f"
REPORT_STARTS = "starts:"

EXAMPLE_PARAMS = ModelParams(1.0472, -1.7, 1.2, -1.8, 1.5, 3.1416)
EXAMPLE_COVARIATES = "vm:3.1416:2"
EXAMPLE_ERRORS = "sine:6:6:0"
EXAMPLE_ROWS = 60
EXAMPLE_SEED = 20241001
EXAMPLE_START = "2024-10-01 06:00"


def to_radians(values: np.ndarray, units: str) -> np.ndarray:
	"""Перевести углы в радианы [0, 2π); градусы сначала приводятся к [0, 360)."""
	values = np.asarray(values, dtype=float)
	if units == "degrees":
		values = np.mod(values, 360.0) * (math.pi / 180.0)
	return wrap_angle(values) if values.size else values


def from_radians(values: np.ndarray, units: str) -> np.ndarray:
	"""Радианы → единицы файла; градусы в [0, 360)."""
	values = wrap_angle(np.asarray(values, dtype=float)) if np.size(values) else np.asarray(values, dtype=float)
	if units == "degrees":
		deg = np.degrees(values)
		return np.where(deg >= 360.0, 0.0, deg)
	return values


def _read_table(path: str, required: Sequence[str]) -> pd.DataFrame:
	try:
		frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
	except pd.errors.EmptyDataError as exc:
		raise CsvParseError("файл пуст, нет строки заголовка", path) from exc
	except pd.errors.ParserError as exc:
		raise CsvParseError(f"некорректный CSV ({exc})", path) from exc
	frame.columns = [str(c).strip() for c in frame.columns]
	for column in required:
		if column not in frame.columns:
			raise CsvParseError(f"столбец {column} не найден", path, column=column)
	return frame


def _numeric_column(frame: pd.DataFrame, column: str, path: str) -> np.ndarray:
	raw = frame[column].str.strip()
	values = pd.to_numeric(raw, errors="coerce").to_numpy(dtype=float)
	bad = ~np.isfinite(values)
	if bad.any():
		i = int(np.flatnonzero(bad)[0])
		# строка 1 занята заголовком
		raise CsvParseError(f"значение '{raw.iloc[i]}' не является конечным числом", path, row=i + 2, column=column)
	return values


def _labels(frame: pd.DataFrame) -> Optional[Tuple[str, ...]]:
	if TIMESTAMP not in frame.columns:
		return None
	return tuple(str(v) for v in frame[TIMESTAMP])


def load_dataset(path: str, units: str = "degrees") -> Dataset:
	"""Прочитать набор данных из CSV.

	Параметры:
		path: str
			Путь к файлу.
		units: str
			"degrees" (по умолчанию) или "radians".

	Возвращает:
		Dataset: по строке на запись, углы в радианах [0, 2π).

	Исключения:
		CsvParseError: пустой файл, отсутствующий столбец, нечисловая ячейка.
	"""
	frame = _read_table(path, DATASET_COLUMNS)
	columns = [to_radians(_numeric_column(frame, c, path), units) for c in DATASET_COLUMNS]
	data = Dataset(*columns, labels=_labels(frame))
	logger.info("Прочитано %d наблюдений из %s", data.n, path)
	return data


def load_covariates(path: str, units: str = "degrees") -> Tuple[np.ndarray, Optional[Tuple[str, ...]]]:
	"""Прочитать ковариаты (cov_phi, cov_theta): массив (n, 2) в радианах и метки строк."""
	frame = _read_table(path, COVARIATE_COLUMNS)
	phi = to_radians(_numeric_column(frame, "cov_phi", path), units)
	theta = to_radians(_numeric_column(frame, "cov_theta", path), units)
	return np.column_stack([phi, theta]).reshape(-1, 2), _labels(frame)


def _write_frame(columns: Dict[str, Any], labels: Optional[Sequence[str]], path: str) -> None:
	frame = pd.DataFrame(columns)
	if labels is not None:
		frame.insert(0, TIMESTAMP, list(labels))
	frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_dataset(data: Dataset, path: str, units: str = "degrees") -> None:
	"""Записать набор данных в CSV (при n = 0 остаётся только заголовок)."""
	columns = {name: from_radians(getattr(data, name), units) for name in DATASET_COLUMNS}
	_write_frame(columns, data.labels, path)
	logger.info("Записано %d наблюдений в %s", data.n, path)


def write_predictions(
	phi: np.ndarray,
	theta: np.ndarray,
	path: str,
	units: str = "degrees",
	labels: Optional[Sequence[str]] = None,
) -> None:
	"""Записать прогнозы (pred_phi, pred_theta) в CSV."""
	columns = dict(zip(PREDICTION_COLUMNS, (from_radians(phi, units), from_radians(theta, units))))
	_write_frame(columns, labels, path)


def write_metadata(path: str, payload: Mapping[str, Any]) -> str:
	"""Записать метаданные рядом с артефактом (path + ".json"); возвращает путь."""
	meta_path = f"{path}.json"
	with open(meta_path, "w", encoding="utf-8", newline="\n") as fh:
		json.dump(payload, fh, ensure_ascii=False, indent=2, sort_keys=True)
		fh.write("\n")
	return meta_path


# ---------------------------------------------------------------------------
# Отчёт оценки
# ---------------------------------------------------------------------------

def _num(value: float) -> str:
	return repr(float(value))


def write_fit_report(
	result: FitResult,
	path: str,
	settings: Mapping[str, Any],
	n: int,
	bootstrap: Optional[Mapping[str, Any]] = None,
) -> None:
	"""Записать отчёт оценки.

	Время выполнения и число потоков в отчёт не попадают, поэтому отчёт
	побайтно повторяется при одинаковых данных и зерне.
	"""
	lines: List[str] = ["# torus-to-torus regression fit report", f"n = {int(n)}"]
	for key, value in settings.items():
		lines.append(f"{key} = {value}")
	lines.append(f"loss = {_num(result.loss)}")
	for name, value in zip(PARAM_NAMES, result.params.to_vector()):
		lines.append(f"{name} = {_num(value)}")
	if result.standard_errors is not None:
		for name, value in zip(PARAM_NAMES, result.standard_errors):
			lines.append(f"se_{name} = {_num(value)}")
		for key, value in (bootstrap or {}).items():
			lines.append(f"{key} = {value}")
	lines.append(REPORT_STARTS)
	records = []
	for rec in result.per_start:
		row: Dict[str, Any] = {"index": rec.index}
		row.update({f"init_{k}": v for k, v in zip(PARAM_NAMES, rec.init)})
		row.update({f"final_{k}": v for k, v in zip(PARAM_NAMES, rec.final)})
		row.update({
			"loss": rec.final_loss,
			"converged": int(rec.converged),
			"iterations": rec.iterations,
			"method": rec.method,
			"valid": int(rec.valid),
		})
		records.append(row)
	table = pd.DataFrame.from_records(records).to_csv(index=False, float_format="%.10e", lineterminator="\n")
	with open(path, "w", encoding="utf-8", newline="\n") as fh:
		fh.write("\n".join(lines) + "\n" + table)
	logger.info("Отчёт оценки записан в %s", path)


def read_fit_report(path: str) -> Tuple[ModelParams, Dict[str, str]]:
	"""Прочитать параметры и поля отчёта оценки.

	Исключения:
		CsvParseError: нет поля параметра или значение не число.
	"""
	fields: Dict[str, str] = {}
	with open(path, "r", encoding="utf-8") as fh:
		for lineno, line in enumerate(fh, start=1):
			line = line.strip()
			if line == REPORT_STARTS:
				break
			if not line or line.startswith("#"):
				continue
			if "=" not in line:
				raise CsvParseError(f"ожидалось «ключ = значение», получено '{line}'", path, row=lineno)
			key, value = (part.strip() for part in line.split("=", 1))
			fields[key] = value
	values = []
	for name in PARAM_NAMES:
		if name not in fields:
			raise CsvParseError(f"поле {name} не найдено в отчёте", path, column=name)
		try:
			values.append(float(fields[name]))
		except ValueError as exc:
			raise CsvParseError(f"значение '{fields[name]}' не является числом", path, column=name) from exc
	return ModelParams.from_vector(values), fields


def report_geometry(fields: Mapping[str, str], default: Optional[TorusGeometry] = None) -> TorusGeometry:
	"""Геометрия тора, с которой была выполнена оценка."""
	if "R" in fields and "r" in fields:
		return TorusGeometry(float(fields["R"]), float(fields["r"]))
	return default or TorusGeometry()


# ---------------------------------------------------------------------------
# Отчёт диагностики
# ---------------------------------------------------------------------------

def write_key_values(path: str, header: str, items: Sequence[Tuple[str, Any]]) -> None:
	"""Записать отчёт «ключ = значение» с заголовком-комментарием."""
	lines = [f"# {header}"]
	for key, value in items:
		if isinstance(value, bool):
			value = str(value).lower()
		elif isinstance(value, float):
			value = f"{value:.10g}"
		lines.append(f"{key} = {value}")
	with open(path, "w", encoding="utf-8", newline="\n") as fh:
		fh.write("\n".join(lines) + "\n")


def write_qq_csv(path: str, pairs_by_component: Mapping[str, Sequence[Tuple[float, float]]]) -> None:
	"""Записать QQ-пары: столбцы component, observed, predicted (радианы)."""
	records = [
		{"component": name, "observed": x, "predicted": y}
		for name, pairs in pairs_by_component.items()
		for x, y in pairs
	]
	frame = pd.DataFrame.from_records(records, columns=["component", "observed", "predicted"])
	frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


# ---------------------------------------------------------------------------
# Встроенный пример
# ---------------------------------------------------------------------------

def example_dataset() -> Dataset:
	"""Синтетический набор «ветер → волны»: 60 измерений дважды в сутки.

	Ковариаты — фон Мизес, ошибки — синус-модель, зерно фиксировано;
	углы φ — направление ветра, θ — направление волн.
	"""
	stamps = pd.Timestamp(EXAMPLE_START) + pd.to_timedelta(np.arange(EXAMPLE_ROWS) * 12, unit="h")
	labels = tuple(t.strftime("%Y-%m-%dT%H:%M") for t in stamps)
	seeds = np.random.SeedSequence(EXAMPLE_SEED).spawn(2)
	covariates = CovariateSpec.parse(EXAMPLE_COVARIATES).sample(EXAMPLE_ROWS, seeds[0])
	return simulate_responses(EXAMPLE_PARAMS, covariates, ErrorSpec.parse(EXAMPLE_ERRORS), seeds[1], labels=labels)


def check_same_rows(data: Dataset, expected_n: int, what: str) -> None:
	"""Проверить, что файл данных соответствует отчёту по числу строк."""
	if data.n != expected_n:
		raise PreconditionError(f"Файлы не согласованы: в {what} {expected_n} строк, в данных {data.n}")

