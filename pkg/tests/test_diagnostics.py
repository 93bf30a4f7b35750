# -*- coding: utf-8 -*-
"""Тесты круговых сводок, оценок фон Мизеса и теста Ватсона U²."""
import math

import numpy as np
import pytest
from scipy import integrate

from app.errors import PreconditionError
from app.torus.diagnostics import (
	KAPPA_CAP,
	bessel_ratio,
	circular_summary,
	kappa_from_resultant,
	qq_pairs,
	vm_cdf,
	vm_mle,
	watson_critical_value,
	watson_u2,
)
from app.torus.distributions import VonMisesParams, WrappedCauchyParams, sample_vm, sample_wc, vm_density
from app.torus.geometry import TWO_PI


def test_circular_summary_basic():
	"""Среднее направление и R̄ для симметричной выборки."""
	s = circular_summary([0.1, -0.1, 0.0])
	assert s.mean_direction == pytest.approx(0.0, abs=1e-12)
	assert 0.99 < s.resultant_length <= 1.0
	assert s.n == 3 and not s.mean_undefined


def test_circular_summary_undefined_mean():
	"""Диаметрально противоположные углы: R̄ = 0, среднее не определено."""
	s = circular_summary([0.0, math.pi])
	assert s.mean_undefined
	assert s.resultant_length == 0.0
	assert math.isinf(s.circular_sd)
	with pytest.raises(PreconditionError):
		circular_summary([])


@pytest.mark.parametrize("kappa", [0.1, 0.5, 1.0, 2.0, 5.0, 50.0, 500.0])
def test_kappa_from_resultant_inverts_bessel_ratio(kappa):
	"""Обращение A₁(κ) = R̄ восстанавливает κ."""
	value, capped = kappa_from_resultant(bessel_ratio(kappa))
	assert not capped
	assert value == pytest.approx(kappa, rel=1e-6)


def test_kappa_from_resultant_cap():
	"""R̄ = 1 даёт обрезанное κ̂."""
	value, capped = kappa_from_resultant(1.0)
	assert capped and value == KAPPA_CAP
	assert kappa_from_resultant(0.0) == (0.0, False)


def test_vm_mle_recovers_parameters():
	"""Оценки по большой выборке близки к истинным."""
	est = vm_mle(sample_vm(VonMisesParams(1.0, 4.0), 5000, 3))
	assert abs(math.remainder(est.mu_hat - 1.0, TWO_PI)) < 0.05
	assert est.kappa_hat == pytest.approx(4.0, rel=0.1)
	mu, kappa = est
	assert mu == est.mu_hat and kappa == est.kappa_hat


def test_vm_mle_degenerate_cases():
	"""n < 2 отвергается; совпадающие углы дают обрезанное κ̂."""
	with pytest.raises(PreconditionError):
		vm_mle([1.0])
	est = vm_mle([0.5] * 10)
	assert est.capped
	assert est.kappa_hat == KAPPA_CAP


@pytest.mark.parametrize("mu,kappa", [(0.0, 1.0), (2.0, 3.0), (5.5, 0.3), (3.0, 200.0)])
def test_vm_cdf_matches_density_integral(mu, kappa):
	"""Функция распределения совпадает с интегралом плотности и монотонна."""
	p = VonMisesParams(mu, kappa)
	assert vm_cdf(0.0, mu, kappa) == 0.0
	assert vm_cdf(TWO_PI, mu, kappa) == pytest.approx(1.0, abs=1e-9)
	if kappa < 100:
		expected, _ = integrate.quad(vm_density, 0.0, 2.5, args=(p,), points=[mu] if 0.0 < mu < 2.5 else None)
		assert vm_cdf(2.5, mu, kappa) == pytest.approx(expected, abs=1e-9)
	grid = [vm_cdf(t, mu, kappa) for t in np.linspace(0, TWO_PI, 40)]
	assert np.all(np.diff(grid) >= -1e-12)


def test_vm_cdf_uniform():
	"""При κ = 0 распределение равномерное."""
	assert vm_cdf(math.pi, 1.0, 0.0) == pytest.approx(0.5)


def test_watson_critical_value_table():
	"""Узлы таблицы, интерполяция и предел при больших κ̂."""
	assert watson_critical_value(0.0) == pytest.approx(0.061)
	assert watson_critical_value(1.0) == pytest.approx(0.079)
	assert watson_critical_value(0.75) == pytest.approx((0.066 + 0.079) / 2)
	assert watson_critical_value(4.0) == pytest.approx(0.113)
	assert watson_critical_value(8.0) == pytest.approx(0.115)
	assert 0.113 < watson_critical_value(1e4) < 0.117


def test_reported_statistics_do_not_reject():
	"""Значения 0.0318 и 0.0325 лежат ниже критических значений таблицы."""
	assert 0.0318 < watson_critical_value(4.0)
	assert 0.0325 < watson_critical_value(KAPPA_CAP)


def test_watson_small_sample():
	"""n < 10 отвергается."""
	with pytest.raises(PreconditionError):
		watson_u2([0.1] * 9)


def test_watson_accepts_von_mises_sample():
	"""Выборка фон Мизеса обычно не отвергается."""
	result = watson_u2(sample_vm(VonMisesParams(2.0, 2.0), 200, 17))
	assert result.statistic >= 0
	assert result.critical_value_5pct == pytest.approx(watson_critical_value(result.kappa_hat))
	assert result.reject == (result.statistic > result.critical_value_5pct)


def test_watson_rejects_bimodal_sample():
	"""Смесь двух далёких мод не похожа на фон Мизеса."""
	a = sample_vm(VonMisesParams(0.0, 20.0), 150, 1)
	b = sample_vm(VonMisesParams(2.5, 20.0), 150, 2)
	assert watson_u2(np.concatenate([a, b])).reject


def test_watson_degenerate_residuals_flag_cap():
	"""Вырожденные невязки: κ̂ обрезан и это отражено в результате."""
	angles = np.array([1e-12 * i for i in range(20)])
	result = watson_u2(angles)
	assert result.kappa_capped
	assert result.kappa_hat == KAPPA_CAP


@pytest.mark.slow
def test_watson_size_calibration():
	"""Доля отвержений при верной нулевой гипотезе около 5%."""
	rejections = 0
	for seed in range(500):
		rejections += watson_u2(sample_vm(VonMisesParams(1.0, 2.0), 200, seed)).reject
	assert 0.03 <= rejections / 500 <= 0.07


@pytest.mark.slow
def test_watson_power_against_wrapped_cauchy():
	"""Против острого обёрнутого Коши тест отвергает заметно чаще 5%."""
	rejections = sum(watson_u2(sample_wc(WrappedCauchyParams(0.0, 0.8), 200, s)).reject for s in range(100))
	assert rejections > 20


def test_qq_pairs_sorted_and_validated():
	"""QQ-пары сортируются покомпонентно; разная длина и пустые входы отвергаются."""
	pairs = qq_pairs([3.0, 1.0, 2.0], [0.5, 6.0, -0.5])
	assert [p[0] for p in pairs] == [1.0, 2.0, 3.0]
	assert [p[1] for p in pairs] == pytest.approx([0.5, TWO_PI - 0.5, 6.0])
	with pytest.raises(PreconditionError):
		qq_pairs([1.0], [1.0, 2.0])
	with pytest.raises(PreconditionError):
		qq_pairs([], [])
