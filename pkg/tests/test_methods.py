# -*- coding: utf-8 -*-
"""Тесты минимизации из одной точки: градиент, защитная полоса, L-BFGS-B и симплекс.

Включает параметризованные проверки на нескольких квадратичных функциях с
разными минимумами и масштабами.
"""
import numpy as np
import pytest

from app.optim.methods import (
	guarded,
	lbfgsb_start,
	minimize_start,
	numerical_gradient,
	project_guard_band,
	simplex_start,
)
from app.torus.mobius import MODULUS_GUARD, ModelParams, params_valid

BOUNDS = [(-10.0, 10.0)] * 6


def make_quad(c: float, shift: float, bias: float):
	"""Создать f(x) = c·|x − shift|² + bias в R⁶."""
	def f(x: np.ndarray) -> float:
		return float(c * np.sum((np.asarray(x) - shift) ** 2) + bias)
	return f


def test_numerical_gradient_quadratic():
	"""Центральные разности точны для квадратичной функции."""
	f = make_quad(2.0, 1.0, 0.0)
	x = np.array([0.0, 1.0, 2.0, -1.0, 0.5, 3.0])
	assert np.allclose(numerical_gradient(f, x), 4.0 * (x - 1.0), atol=1e-6)


def test_numerical_gradient_accepts_params():
	"""Градиент принимает ModelParams и возвращает вектор длины 6."""
	g = numerical_gradient(lambda x: float(np.sum(x)), ModelParams(0.1, 0.2, 0.3, 0.4, 0.5, 0.6))
	assert g.shape == (6,)
	assert np.allclose(g, 1.0, atol=1e-6)


def test_numerical_gradient_invalid_step():
	"""h ≤ 0 недопустим."""
	with pytest.raises(ValueError):
		numerical_gradient(lambda x: 0.0, np.zeros(6), h=0.0)


@pytest.mark.parametrize("b", [(1.0, 0.0), (0.6, 0.8), (0.0, 1.0 - MODULUS_GUARD / 3)])
def test_project_guard_band_moves_out(b):
	"""Точки в полосе |β₁| ≈ 1 выносятся на её край, результат допустим."""
	x = np.array([0.0, b[0], b[1], 0.2, 0.0, 0.0])
	y = project_guard_band(x)
	assert abs(np.hypot(y[1], y[2]) - 1.0) >= MODULUS_GUARD
	assert np.allclose(y[[0, 3, 4, 5]], x[[0, 3, 4, 5]])
	assert params_valid(ModelParams.from_vector(y))[0]


def test_project_guard_band_keeps_valid_points():
	"""Точки вне полосы не меняются, вход не изменяется на месте."""
	x = np.array([1.0, 0.5, 0.5, 2.0, 0.0, 3.0])
	y = project_guard_band(x)
	assert np.array_equal(x, y)
	assert y is not x


def test_guarded_evaluates_outside_band():
	"""Обёрнутая функция вычисляется в спроецированной точке."""
	seen = []
	f = guarded(lambda x: seen.append(np.array(x)) or 0.0)
	f(np.array([0.0, 1.0, 0.0, 0.0, 0.0, 0.0]))
	assert abs(np.hypot(seen[0][1], seen[0][2]) - 1.0) >= MODULUS_GUARD


def test_lbfgsb_converges_with_history():
	"""L-BFGS-B находит минимум квадратичной функции и ведёт историю."""
	f = make_quad(1.0, 2.0, 3.0)
	res = lbfgsb_start(f, np.zeros(6), BOUNDS, tol=1e-12)
	assert np.allclose(res.x_min, 2.0, atol=1e-5)
	assert res.f_min == pytest.approx(3.0, abs=1e-8)
	assert res.method == "L-BFGS-B"
	assert res.history and res.history[-1]["iter"] == len(res.history)
	assert all(set(step) == {"iter", "f"} for step in res.history)
	assert res.execution_time >= 0.0


def test_lbfgsb_respects_bounds():
	"""Минимум вне границ: решение прижимается к границе."""
	f = make_quad(1.0, 20.0, 0.0)
	res = lbfgsb_start(f, np.zeros(6), BOUNDS)
	assert np.allclose(res.x_min, 10.0, atol=1e-6)


def test_simplex_converges():
	"""Симплекс Нелдера–Мида находит минимум без градиента."""
	f = make_quad(1.0, -1.0, 0.5)
	res = simplex_start(f, np.zeros(6), BOUNDS, tol=1e-12, max_iter=2000)
	assert np.allclose(res.x_min, -1.0, atol=1e-3)
	assert res.method == "Nelder-Mead"


def test_minimize_start_keeps_initial_point():
	"""minimize_start сохраняет исходную начальную точку."""
	f = make_quad(1.5, 0.5, 0.0)
	x0 = np.full(6, -3.0)
	res = minimize_start(f, x0, BOUNDS)
	assert np.array_equal(res.init, x0)
	assert res.f_min == pytest.approx(0.0, abs=1e-8)


def test_minimize_start_falls_back_to_simplex():
	"""При недифференцируемой функции линейный поиск может сорваться, итог не хуже старта."""
	def f(x):
		return float(np.sum(np.abs(np.asarray(x) - 0.3)))
	x0 = np.full(6, 4.0)
	res = minimize_start(f, x0, BOUNDS)
	assert res.method in ("L-BFGS-B", "Nelder-Mead")
	assert res.f_min <= f(x0)
	assert np.array_equal(res.init, x0)


@pytest.mark.parametrize("c,shift,bias", [
	(1.0, 0.0, 0.0),
	(2.5, -3.0, 5.0),
	(0.5, 4.2, -7.0),
])
def test_all_methods_on_various_quadratics(c, shift, bias):
	"""Оба метода и их комбинация на квадратичных функциях с разными параметрами."""
	f = make_quad(c, shift, bias)
	x0 = np.full(6, 1.0)

	res = lbfgsb_start(f, x0, BOUNDS, tol=1e-14)
	assert np.allclose(res.x_min, shift, atol=1e-4)
	assert res.f_min == pytest.approx(bias, abs=1e-6)

	res = simplex_start(f, x0, BOUNDS, tol=1e-14, max_iter=3000)
	assert np.allclose(res.x_min, shift, atol=1e-3)

	res = minimize_start(f, x0, BOUNDS, tol=1e-14)
	assert res.f_min == pytest.approx(bias, abs=1e-6)
