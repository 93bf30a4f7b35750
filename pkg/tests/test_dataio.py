# -*- coding: utf-8 -*-
"""Тесты чтения и записи CSV, отчётов оценки и встроенного примера."""
import json
import math

import numpy as np
import pytest

from app.dataio import (
	EXAMPLE_ROWS,
	check_same_rows,
	example_dataset,
	from_radians,
	load_covariates,
	load_dataset,
	read_fit_report,
	report_geometry,
	to_radians,
	write_dataset,
	write_fit_report,
	write_metadata,
	write_predictions,
	write_qq_csv,
)
from app.errors import CsvParseError, PreconditionError
from app.optim.selection import FitConfig, fit
from app.torus.geometry import TWO_PI, TorusGeometry
from app.torus.mobius import ModelParams


def test_degree_conversion():
	"""90° → π/2, 360° → 0, −90° → 3π/2; обратно в [0, 360)."""
	rad = to_radians(np.array([90.0, 360.0, -90.0, 720.5]), "degrees")
	assert rad == pytest.approx([math.pi / 2, 0.0, 3 * math.pi / 2, math.radians(0.5)])
	deg = from_radians(np.array([0.0, math.pi, TWO_PI - 1e-15, -math.pi / 2]), "degrees")
	assert np.all((deg >= 0.0) & (deg < 360.0))
	assert deg[1] == pytest.approx(180.0)
	assert deg[3] == pytest.approx(270.0)
	assert to_radians(np.array([7.0]), "radians")[0] == pytest.approx(7.0 - TWO_PI)


def test_load_dataset_with_timestamps(tmp_path):
	"""Углы в градусах, метки времени сохраняются, пробелы после запятых допустимы."""
	path = tmp_path / "data.csv"
	path.write_text(
		"timestamp,cov_phi,cov_theta,resp_phi,resp_theta\n"
		"2024-01-01T00:00, 90, 180, 270, 360\n"
		"2024-01-01T12:00, 0, 45, 10, 20\n",
		encoding="utf-8",
	)
	data = load_dataset(str(path))
	assert data.n == 2
	assert data.labels == ("2024-01-01T00:00", "2024-01-01T12:00")
	assert data.cov_phi[0] == pytest.approx(math.pi / 2)
	assert data.resp_theta[0] == 0.0


def test_missing_column_is_reported(tmp_path):
	"""Отсутствие resp_theta называется в сообщении."""
	path = tmp_path / "data.csv"
	path.write_text("cov_phi,cov_theta,resp_phi\n1,2,3\n", encoding="utf-8")
	with pytest.raises(CsvParseError, match="resp_theta") as info:
		load_dataset(str(path))
	assert info.value.column == "resp_theta"


def test_bad_cell_reports_row_and_column(tmp_path):
	"""Нечисловая ячейка: номер строки файла и столбец."""
	path = tmp_path / "data.csv"
	path.write_text("cov_phi,cov_theta,resp_phi,resp_theta\n1,2,3,4\n1,x,3,4\n", encoding="utf-8")
	with pytest.raises(CsvParseError) as info:
		load_dataset(str(path))
	assert info.value.row == 3
	assert info.value.column == "cov_theta"


def test_empty_file(tmp_path):
	"""Пустой файл без заголовка отвергается; один заголовок даёт n = 0."""
	path = tmp_path / "empty.csv"
	path.write_text("", encoding="utf-8")
	with pytest.raises(CsvParseError):
		load_dataset(str(path))
	path.write_text("cov_phi,cov_theta,resp_phi,resp_theta\n", encoding="utf-8")
	assert load_dataset(str(path)).n == 0


def test_dataset_write_read_preserves_angles(tmp_path):
	"""Запись и чтение в градусах сохраняют углы с точностью формата."""
	data = example_dataset()
	path = tmp_path / "example.csv"
	write_dataset(data, str(path))
	again = load_dataset(str(path))
	assert again.labels == data.labels
	for name in ("cov_phi", "cov_theta", "resp_phi", "resp_theta"):
		diff = np.angle(np.exp(1j * (getattr(again, name) - getattr(data, name))))
		assert np.max(np.abs(diff)) < 1e-10


def test_example_dataset_is_fixed():
	"""Встроенный пример: 60 строк дважды в сутки, повторяем."""
	a, b = example_dataset(), example_dataset()
	assert a.n == EXAMPLE_ROWS
	assert np.array_equal(a.resp_phi, b.resp_phi)
	assert a.labels[0] == "2024-10-01T06:00"
	assert a.labels[1] == "2024-10-01T18:00"


def test_predictions_and_covariates(tmp_path):
	"""Прогнозы пишутся в [0, 360), ковариаты читаются массивом (n, 2)."""
	out = tmp_path / "pred.csv"
	write_predictions(np.array([0.0, -0.5]), np.array([math.pi, 7.0]), str(out), labels=["a", "b"])
	lines = out.read_text(encoding="utf-8").splitlines()
	assert lines[0] == "timestamp,pred_phi,pred_theta"
	values = [float(v) for line in lines[1:] for v in line.split(",")[1:]]
	assert all(0.0 <= v < 360.0 for v in values)

	cov = tmp_path / "cov.csv"
	cov.write_text("cov_phi,cov_theta\n90,0\n", encoding="utf-8")
	array, labels = load_covariates(str(cov))
	assert array.shape == (1, 2)
	assert labels is None
	assert array[0, 0] == pytest.approx(math.pi / 2)


def test_metadata_sidecar(tmp_path):
	"""Метаданные пишутся в <path>.json с упорядоченными ключами."""
	meta = write_metadata(str(tmp_path / "out.csv"), {"seed": 1, "n": 2})
	assert meta.endswith("out.csv.json")
	with open(meta, encoding="utf-8") as fh:
		assert json.load(fh) == {"n": 2, "seed": 1}


def test_fit_report_round_trip(tmp_path):
	"""Параметры отчёта читаются без потерь, геометрия восстанавливается."""
	data = example_dataset().subset(list(range(12)))
	config = FitConfig(restarts=2, seed=1, geometry=TorusGeometry(3.0, 1.0))
	result = fit(data, config)
	result.standard_errors = np.full(6, 0.1)
	path = tmp_path / "fit.txt"
	write_fit_report(result, str(path), {"R": 3.0, "r": 1.0, "seed": 1}, data.n, {"bootstrap_B": 20})
	params, fields = read_fit_report(str(path))
	assert np.array_equal(params.to_vector(), result.params.to_vector())
	assert fields["n"] == "12"
	assert fields["se_b1"] == "0.1"
	assert fields["bootstrap_B"] == "20"
	assert report_geometry(fields) == TorusGeometry(3.0, 1.0)
	text = path.read_text(encoding="utf-8")
	assert "starts:" in text
	assert text.split("starts:\n", 1)[1].startswith("index,init_phi0")


def test_fit_report_missing_field(tmp_path):
	"""Отчёт без параметра отвергается."""
	path = tmp_path / "bad.txt"
	path.write_text("phi0 = 0.1\nb1 = 0.2\n", encoding="utf-8")
	with pytest.raises(CsvParseError, match="b2"):
		read_fit_report(str(path))


def test_qq_csv(tmp_path):
	"""QQ-пары пишутся по компонентам."""
	path = tmp_path / "qq.csv"
	write_qq_csv(str(path), {"phi": [(0.1, 0.2)], "theta": [(1.0, 1.5), (2.0, 2.5)]})
	lines = path.read_text(encoding="utf-8").splitlines()
	assert lines[0] == "component,observed,predicted"
	assert len(lines) == 4
	assert lines[1].startswith("phi,")


def test_check_same_rows():
	"""Несогласованные файлы отвергаются."""
	data = example_dataset()
	check_same_rows(data, EXAMPLE_ROWS, "fit.txt")
	with pytest.raises(PreconditionError):
		check_same_rows(data, 10, "fit.txt")
