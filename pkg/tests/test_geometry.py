# -*- coding: utf-8 -*-
"""Тесты геометрии тора: площади квадратного угла, расстояния, элемент площади."""
import math

import numpy as np
import pytest
import sympy as sp
from scipy import integrate

from app.errors import DomainError
from app.torus.geometry import (
	TWO_PI,
	TorusGeometry,
	TorusPoint,
	angular_distance,
	area_element_expr,
	area_element_function,
	embed_torus,
	great_circle_distance,
	signed_angle,
	square_angle_sphere,
	square_angle_torus,
	torus_area_density,
	torus_normal,
	wrap_angle,
)


def test_wrap_angle_edges():
	"""Приведение к [0, 2π): отрицательные углы, кратные 2π и крошечные отрицательные."""
	assert wrap_angle(-math.pi / 2) == pytest.approx(3 * math.pi / 2)
	assert wrap_angle(TWO_PI) == 0.0
	assert wrap_angle(-1e-20) == 0.0
	arr = wrap_angle(np.array([-TWO_PI, 7.0, 0.5]))
	assert np.all((arr >= 0) & (arr < TWO_PI))


def test_signed_angle_range():
	"""signed_angle возвращает значения в [−π, π)."""
	v = signed_angle(np.linspace(-10, 10, 101))
	assert np.all(v >= -math.pi) and np.all(v < math.pi)
	assert signed_angle(3 * math.pi / 2) == pytest.approx(-math.pi / 2)


def test_torus_geometry_validation():
	"""R ≥ r > 0 обязательно; r = R допустим."""
	TorusGeometry(1.0, 1.0)
	with pytest.raises(DomainError):
		TorusGeometry(1.0, 2.0)
	with pytest.raises(DomainError):
		TorusGeometry(2.0, 0.0)


def test_square_angle_torus_values():
	"""A_T(0) = 0 и A_T(π) = π²rR при R=2, r=1."""
	geom = TorusGeometry(2.0, 1.0)
	assert square_angle_torus(geom, 0.0) == 0.0
	assert square_angle_torus(geom, math.pi) == pytest.approx(2.0 * math.pi ** 2, rel=1e-12)
	assert square_angle_torus(geom, math.pi / 2) == pytest.approx(math.pi ** 2 / 2 + math.pi / 2, rel=1e-12)


def test_square_angle_sphere_values():
	"""A_S(π/2) = π/2, A_S(π) = 2π, непрерывность в π/2."""
	assert square_angle_sphere(math.pi / 2) == pytest.approx(math.pi / 2, rel=1e-12)
	assert square_angle_sphere(math.pi) == pytest.approx(2 * math.pi, rel=1e-12)
	left = square_angle_sphere(math.pi / 2 - 1e-9)
	right = square_angle_sphere(math.pi / 2 + 1e-9)
	assert abs(left - right) < 1e-6


@pytest.mark.parametrize("delta", [-0.1, math.pi + 1e-9, float("nan")])
def test_square_angle_domain(delta):
	"""δ вне [0, π] отвергается."""
	with pytest.raises(DomainError):
		square_angle_torus(TorusGeometry(), delta)
	with pytest.raises(DomainError):
		square_angle_sphere(delta)


@pytest.mark.parametrize("R,r", [(2.0, 1.0), (1.0, 1.0), (3.0, 0.3)])
def test_square_angle_torus_matches_quadrature(R, r):
	"""Закрытая формула совпадает с двойным интегралом элемента площади тора."""
	geom = TorusGeometry(R, r)
	for delta in np.linspace(0.05, math.pi, 50):
		value, _ = integrate.dblquad(lambda t, p: r * (R + r * math.cos(t)), 0.0, delta, 0.0, delta, epsabs=1e-13, epsrel=1e-12)
		assert square_angle_torus(geom, delta) == pytest.approx(value, rel=1e-6)


def test_square_angle_sphere_matches_quadrature():
	"""Закрытая формула совпадает с двойным интегралом |cos t| по [0, δ]²."""
	for delta in np.linspace(0.05, math.pi, 50):
		inner, _ = integrate.quad(lambda t: abs(math.cos(t)), 0.0, delta, points=[math.pi / 2] if delta > math.pi / 2 else None, epsabs=1e-13)
		assert square_angle_sphere(delta) == pytest.approx(delta * inner, rel=1e-6)


def test_square_angle_monotone():
	"""Обе площади неубывают по δ."""
	d = np.linspace(0, math.pi, 400)
	assert np.all(np.diff(square_angle_torus(TorusGeometry(), d)) >= 0)
	assert np.all(np.diff(square_angle_sphere(d)) >= 0)


@pytest.mark.parametrize("a,b,expected", [
	(0.0, 0.0, 0.0),
	(0.1, TWO_PI - 0.1, 0.2),
	(0.0, math.pi, math.pi),
	(1.0, 1.0 + 4 * math.pi, 0.0),
])
def test_angular_distance(a, b, expected):
	"""Минимальное угловое расстояние лежит в [0, π] и симметрично."""
	assert angular_distance(a, b) == pytest.approx(expected, abs=1e-12)
	assert angular_distance(b, a) == pytest.approx(expected, abs=1e-12)


def test_angular_distance_shift_invariant():
	"""Общий сдвиг обоих углов и сдвиг одного на 2πk расстояние не меняют."""
	rng = np.random.default_rng(8)
	a, b, s = rng.uniform(-10.0, 10.0, (3, 500))
	k = rng.integers(-3, 4, 500)
	base = angular_distance(a, b)
	assert np.max(np.abs(angular_distance(a + s, b + s) - base)) < 1e-9
	assert np.max(np.abs(angular_distance(a + TWO_PI * k, b) - base)) < 1e-9


def test_great_circle_distance_metric_on_random_triples():
	"""Симметрия и неравенство треугольника на случайных тройках точек."""
	rng = np.random.default_rng(9)
	for _ in range(300):
		p, q, s = (TorusPoint(*rng.uniform(0, TWO_PI, 2)) for _ in range(3))
		d_pq = great_circle_distance(p, q)
		assert abs(d_pq - great_circle_distance(q, p)) < 1e-9
		assert great_circle_distance(p, s) <= d_pq + great_circle_distance(q, s) + 1e-9


def test_great_circle_distance_depends_on_absolute_theta():
	"""Общий сдвиг φ расстояние сохраняет, общий сдвиг θ нет: у полюсов разница φ пропадает."""
	p, q = TorusPoint(0.5, 0.0), TorusPoint(0.0, 0.0)
	assert great_circle_distance(p, q) == pytest.approx(0.5, abs=1e-12)
	assert great_circle_distance(TorusPoint(2.5, 0.0), TorusPoint(2.0, 0.0)) == pytest.approx(0.5, abs=1e-12)
	assert great_circle_distance(TorusPoint(0.5, math.pi / 2), TorusPoint(0.0, math.pi / 2)) < 1e-7


def test_great_circle_distance_identity_and_antipode():
	"""Расстояние между совпадающими нормалями 0, между противоположными π."""
	p = TorusPoint(0.3, 0.7)
	assert great_circle_distance(p, p) == pytest.approx(0.0, abs=1e-7)
	q = TorusPoint(0.3 + math.pi, -0.7)
	assert great_circle_distance(p, q) == pytest.approx(math.pi, abs=1e-7)


def test_great_circle_distance_matches_normals():
	"""Расстояние равно углу между единичными нормалями."""
	rng = np.random.default_rng(5)
	for _ in range(50):
		p = TorusPoint(*rng.uniform(0, TWO_PI, 2))
		q = TorusPoint(*rng.uniform(0, TWO_PI, 2))
		n1, n2 = torus_normal(p), torus_normal(q)
		assert np.linalg.norm(n1) == pytest.approx(1.0)
		expected = math.atan2(np.linalg.norm(np.cross(n1, n2)), float(np.dot(n1, n2)))
		assert great_circle_distance(p, q) == pytest.approx(expected, abs=1e-7)


def test_embed_torus_radii():
	"""Точка (0, 0) лежит на расстоянии R + r от оси."""
	geom = TorusGeometry(2.0, 0.5)
	x = embed_torus(geom, TorusPoint(0.0, 0.0))
	assert np.allclose(x, [2.5, 0.0, 0.0])


def test_area_element_symbolic():
	"""Символьный √(EG − F²) совпадает с r (R + r cos θ)."""
	expr = area_element_expr()
	R, r, theta = sp.symbols("R r", positive=True) + (sp.Symbol("theta", real=True),)
	expected = r * (R + r * sp.cos(theta))
	for values in ({R: 2, r: 1, theta: 0.4}, {R: 3, r: 0.5, theta: 2.9}):
		assert float(expr.subs(values)) == pytest.approx(float(expected.subs(values)), rel=1e-12)


def test_area_element_function_matches_density():
	"""Лямбдифицированный элемент площади совпадает с torus_area_density."""
	geom = TorusGeometry(2.0, 1.0)
	f = area_element_function(geom)
	t = np.linspace(0, TWO_PI, 33)
	assert np.allclose(f(t), torus_area_density(geom, t), rtol=1e-12)
