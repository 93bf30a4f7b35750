# -*- coding: utf-8 -*-
"""Self-test: быстрая проверка моделирования и оценки регрессии «тор → тор».

Запускается так:
	python selftest.py
"""
from __future__ import annotations

import numpy as np

from app.optim.selection import FitConfig, fit
from app.torus.distributions import CovariateSpec, ErrorSpec
from app.torus.geometry import TorusGeometry, square_angle_sphere, square_angle_torus
from app.torus.mobius import ModelParams
from app.torus.model import simulate_responses


def run_all() -> None:
	geom = TorusGeometry(2.0, 1.0)
	print("Площади квадратного угла при δ = π/2:")
	print(f"[Тор] A = {square_angle_torus(geom, np.pi / 2):.6f}")
	print(f"[Сфера] A = {square_angle_sphere(np.pi / 2):.6f}\n")

	truth = ModelParams(1.0472, -1.7, 1.2, -1.8, 1.5, 3.1416)
	covariates = CovariateSpec.parse("vm:0:1").sample(100, 1)
	for errors in ("zero", "sine:3:3:0"):
		data = simulate_responses(truth, covariates, ErrorSpec.parse(errors), 2)
		res = fit(data, FitConfig(restarts=8, seed=3))
		est = np.round(res.params.to_vector(), 4)
		print(f"[{errors}] loss={res.loss:.3e}, оценка={est.tolist()}, {res.wall_time:.1f} с")

	print(f"\nИстина: {truth.to_vector().round(4).tolist()}")
	print("OK: проверьте, что при ошибках zero потеря близка к нулю, а оценки к истине.")


if __name__ == "__main__":
	run_all()
