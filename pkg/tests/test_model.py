# -*- coding: utf-8 -*-
"""Тесты набора данных, моделирования откликов, невязок и функции потерь."""
import math

import numpy as np
import pytest

from app.errors import PreconditionError
from app.torus.distributions import CovariateSpec, ErrorSpec
from app.torus.geometry import TWO_PI, TorusGeometry, TorusPoint, angular_distance, square_angle_sphere, square_angle_torus
from app.torus.mobius import ModelParams, predict_mean, predict_mean_arrays, rotate_covariate_params, rotate_response_params, unit_complex
from app.torus.model import (
	Dataset,
	loss_sphere,
	loss_torus,
	loss_total,
	residual_arrays,
	residual_pair,
	signed_residuals,
	simulate_responses,
)

TRUTH = ModelParams(1.0472, -1.7, 1.2, -1.8, 1.5, 3.1416)


def make_data(n: int = 30, errors: str = "sine:3:3:0", seed: int = 1) -> Dataset:
	"""Смоделированный набор с ковариатами фон Мизеса."""
	cov = CovariateSpec.parse("vm:0:1").sample(n, seed)
	return simulate_responses(TRUTH, cov, ErrorSpec.parse(errors), seed + 1)


def test_dataset_validation():
	"""Разная длина столбцов и нечисловые значения отвергаются."""
	with pytest.raises(PreconditionError):
		Dataset(np.zeros(3), np.zeros(3), np.zeros(2), np.zeros(3))
	with pytest.raises(PreconditionError):
		Dataset(np.zeros(2), np.array([0.0, np.nan]), np.zeros(2), np.zeros(2))
	with pytest.raises(PreconditionError):
		Dataset(np.zeros(2), np.zeros(2), np.zeros(2), np.zeros(2), labels=("a",))


def test_dataset_wraps_angles_and_rows():
	"""Углы приводятся к [0, 2π), from_rows и rows согласованы."""
	data = Dataset(np.array([-1.0]), np.array([7.0]), np.array([TWO_PI]), np.array([0.5]))
	assert data.cov_phi[0] == pytest.approx(TWO_PI - 1.0)
	assert data.resp_phi[0] == 0.0
	rows = list(data.rows())
	again = Dataset.from_rows(rows)
	assert np.array_equal(again.cov_theta, data.cov_theta)
	assert len(again) == 1


def test_simulate_zero_errors_equals_prediction():
	"""Без ошибок отклики совпадают с условным средним."""
	data = make_data(errors="zero")
	for cov, resp in data.rows():
		pred = predict_mean(TRUTH, cov)
		assert angular_distance(resp.phi, pred.phi) < 1e-12
		assert angular_distance(resp.theta, pred.theta) < 1e-12


def test_simulate_empty_and_labels():
	"""n = 0 даёт пустой набор; метки сохраняются."""
	empty = simulate_responses(TRUTH, np.empty((0, 2)), ErrorSpec.parse("sine:3:3:0"), 1)
	assert empty.n == 0
	cov = np.array([[0.1, 0.2], [0.3, 0.4]])
	data = simulate_responses(TRUTH, cov, ErrorSpec.parse("zero"), 1, labels=["t0", "t1"])
	assert data.labels == ("t0", "t1")


def test_simulate_is_seeded():
	"""Одинаковые зёрна дают одинаковые отклики."""
	a, b = make_data(seed=5), make_data(seed=5)
	assert np.array_equal(a.resp_phi, b.resp_phi)
	assert not np.array_equal(a.resp_phi, make_data(seed=6).resp_phi)


def test_loss_zero_at_truth_on_noiseless_data():
	"""На данных без ошибок потеря в истинной точке практически нулевая."""
	data = make_data(errors="zero")
	assert loss_total(TRUTH, data, TorusGeometry()) < 1e-10


def test_loss_components_match_residuals():
	"""loss_total = loss_torus + loss_sphere и согласована с поточечными невязками."""
	data = make_data(n=20)
	geom = TorusGeometry(2.0, 1.0)
	params = ModelParams(0.5, 0.3, -0.2, 1.5, 0.5, 2.0)
	total = loss_total(params, data, geom)
	assert total == pytest.approx(loss_torus(params, data, geom) + loss_sphere(params, data), rel=1e-12)
	manual = 0.0
	for cov, resp in data.rows():
		r = residual_pair(params, cov, resp)
		manual += square_angle_torus(geom, r.psi) + square_angle_torus(geom, r.xi) + square_angle_sphere(r.sphere_deflection)
	assert total == pytest.approx(manual / data.n, rel=1e-9)


def test_loss_is_mean_not_sum():
	"""Дублирование набора данных не меняет потерю."""
	data = make_data(n=15)
	doubled = data.subset(list(range(data.n)) * 2)
	params = ModelParams(0.1, 0.2, 0.3, 0.4, 0.5, 0.6)
	geom = TorusGeometry()
	assert loss_total(params, doubled, geom) == pytest.approx(loss_total(params, data, geom), rel=1e-12)


def test_loss_empty_dataset():
	"""Потеря пустого набора не определена."""
	empty = Dataset(np.empty(0), np.empty(0), np.empty(0), np.empty(0))
	with pytest.raises(PreconditionError):
		loss_total(TRUTH, empty, TorusGeometry())


def test_loss_depends_on_geometry():
	"""Потеря на торе растёт с R при ненулевых невязках."""
	data = make_data(n=20)
	params = ModelParams(0.0, 0.5, 0.0, 0.5, 0.0, 0.0)
	assert loss_torus(params, data, TorusGeometry(3.0, 1.0)) > loss_torus(params, data, TorusGeometry(2.0, 1.0))


def test_residuals_ranges():
	"""ψ, ξ, отклонение в [0, π]; знаковые невязки в [−π, π)."""
	data = make_data(n=40)
	params = ModelParams(0.0, 0.2, 0.1, 3.0, 0.0, 1.0)
	psi, xi, defl = residual_arrays(params, data)
	for arr in (psi, xi, defl):
		assert np.all((arr >= 0) & (arr <= math.pi))
	s_psi, s_xi = signed_residuals(params, data)
	assert np.all((s_psi >= -math.pi) & (s_psi < math.pi))
	assert np.allclose(np.abs(s_psi), psi, atol=1e-12)
	assert np.allclose(np.abs(s_xi), xi, atol=1e-12)


def test_torus_loss_invariant_under_rotations():
	"""Поворот обоих углов данных и соответствующее преобразование параметров сохраняют loss_torus."""
	data = make_data(n=25)
	params = ModelParams(0.4, 0.3, -0.6, 2.0, 1.0, 5.0)
	W1, W2, V1, V2 = (unit_complex(a) for a in (0.7, 2.1, 1.3, 4.0))
	moved = rotate_response_params(rotate_covariate_params(params, W1, W2), V1, V2)
	geom = TorusGeometry()
	rotated = data.rotated(W1, W2, V1, V2)
	assert loss_torus(moved, rotated, geom) == pytest.approx(loss_torus(params, data, geom), rel=1e-9, abs=1e-12)


def test_total_loss_invariant_under_phi_rotations():
	"""Полная потеря сохраняется при повороте только первых углов ковариат и откликов."""
	data = make_data(n=25)
	params = ModelParams(0.4, 0.3, -0.6, 2.0, 1.0, 5.0)
	geom = TorusGeometry()
	for a_cov, a_resp in ((0.7, 1.3), (2.1, 4.0), (5.5, 0.2)):
		W1, V1 = unit_complex(a_cov), unit_complex(a_resp)
		moved = rotate_response_params(rotate_covariate_params(params, W1, 1.0), V1, 1.0)
		rotated = data.rotated(W1, 1.0, V1, 1.0)
		assert loss_total(moved, rotated, geom) == pytest.approx(loss_total(params, data, geom), rel=1e-9, abs=1e-12)
		assert loss_sphere(moved, rotated) == pytest.approx(loss_sphere(params, data), rel=1e-9, abs=1e-12)


def test_loss_invariant_under_row_permutation():
	"""Перестановка строк не меняет полную потерю."""
	data = make_data(n=40)
	geom = TorusGeometry()
	params = ModelParams(0.4, 0.3, -0.6, 2.0, 1.0, 5.0)
	rng = np.random.default_rng(3)
	for _ in range(5):
		shuffled = data.subset(rng.permutation(data.n))
		assert loss_total(params, shuffled, geom) == pytest.approx(loss_total(params, data, geom), rel=1e-12)


def random_truth(rng: np.random.Generator) -> ModelParams:
	"""Случайные параметры с |β₁|, |γ₁| в [0.1, 0.8] ∪ [1.2, 4]."""
	def coefficient():
		modulus = rng.uniform(0.1, 0.8) if rng.random() < 0.5 else rng.uniform(1.2, 4.0)
		angle = rng.uniform(0, TWO_PI)
		return modulus * math.cos(angle), modulus * math.sin(angle)
	b1, b2 = coefficient()
	b3, b4 = coefficient()
	return ModelParams(rng.uniform(0, TWO_PI), b1, b2, b3, b4, rng.uniform(0, TWO_PI))


def test_truth_is_local_minimum_on_noiseless_data():
	"""Без ошибок потеря в истинной точке < 1e-12, сдвиг любой координаты на ±0.05 её увеличивает."""
	rng = np.random.default_rng(21)
	geom = TorusGeometry()
	for draw in range(20):
		truth = random_truth(rng)
		cov = CovariateSpec.parse("uniform").sample(50, draw)
		data = simulate_responses(truth, cov, ErrorSpec.parse("zero"), draw)
		at_truth = loss_total(truth, data, geom)
		assert at_truth < 1e-12
		base = truth.to_vector()
		for k in range(6):
			for step in (-0.05, 0.05):
				x = base.copy()
				x[k] += step
				assert loss_total(ModelParams.from_vector(x), data, geom) > at_truth


def test_predict_arrays_match_scalar():
	"""Векторизованный прогноз совпадает с поточечным."""
	cov = CovariateSpec.parse("uniform").sample(10, 3)
	phi, theta = predict_mean_arrays(TRUTH, cov[:, 0], cov[:, 1])
	for i in range(10):
		p = predict_mean(TRUTH, TorusPoint(*cov[i]))
		assert angular_distance(phi[i], p.phi) < 1e-12
		assert angular_distance(theta[i], p.theta) < 1e-12
