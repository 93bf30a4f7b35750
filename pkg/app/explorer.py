# -*- coding: utf-8 -*-
"""Streamlit-приложение: оценка регрессии «тор → тор» и графики невязок."""
from __future__ import annotations

import os
import sys
import tempfile

import numpy as np
import pandas as pd
import streamlit as st

# streamlit запускает файл как скрипт, пакет app ищется от корня репозитория
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app import dataio  # noqa: E402
from app.errors import TorusRegressionError  # noqa: E402
from app.optim.selection import FitConfig, default_bounds, fit  # noqa: E402
from app.svgplot import PlotSeries, circular_scatter_svg, spoke_plot_svg  # noqa: E402
from app.torus.diagnostics import WATSON_MIN_N, watson_u2  # noqa: E402
from app.torus.geometry import TorusGeometry  # noqa: E402
from app.torus.mobius import PARAM_NAMES, predict_mean_arrays  # noqa: E402
from app.torus.model import signed_residuals  # noqa: E402
from app.visualize import plot_loss_history, plot_qq, plot_residuals  # noqa: E402


st.set_page_config(page_title="Torus regression", layout="wide")
st.title("Регрессия «тор → тор» со связями Мёбиуса")

with st.sidebar:
	st.header("Данные")
	source = st.radio("Источник", ["Встроенный пример", "Загрузить CSV"])
	units = st.selectbox("Единицы углов", ["degrees", "radians"])
	uploaded = st.file_uploader("CSV (cov_phi, cov_theta, resp_phi, resp_theta)", type=["csv"]) if source == "Загрузить CSV" else None

	st.header("Оценка")
	col1, col2 = st.columns(2)
	with col1:
		R = st.number_input("R", value=2.0, min_value=0.01, step=0.5)
	with col2:
		r = st.number_input("r", value=1.0, min_value=0.01, step=0.25)
	if r > R:
		st.warning("Требуется R ≥ r")
	restarts = st.number_input("Число стартов", value=16, min_value=1, step=1)
	b_bound = st.number_input("Границы b₁…b₄", value=20.0, min_value=0.5, step=1.0)
	seed = st.number_input("Зерно", value=0, min_value=0, step=1)
	workers = st.number_input("Потоки", value=1, min_value=1, max_value=32, step=1)


def load_data():
	"""Набор данных из выбранного источника."""
	if source == "Встроенный пример":
		return dataio.example_dataset()
	if uploaded is None:
		return None
	with tempfile.NamedTemporaryFile("wb", suffix=".csv", delete=False) as fh:
		fh.write(uploaded.getvalue())
		path = fh.name
	try:
		return dataio.load_dataset(path, units)
	finally:
		os.unlink(path)


run = st.button("Оценить параметры")

if run:
	try:
		data = load_data()
		if data is None:
			st.info("Загрузите CSV-файл")
			st.stop()
		config = FitConfig(
			restarts=int(restarts),
			bounds=default_bounds(float(b_bound)),
			seed=int(seed),
			geometry=TorusGeometry(float(R), float(r)),
			workers=int(workers),
		)
		with st.spinner("Многостартовая оценка..."):
			result = fit(data, config)

		st.success(f"Потеря: {result.loss:.6g} (n = {data.n}, {result.wall_time:.1f} с)")
		st.dataframe(pd.DataFrame({"параметр": PARAM_NAMES, "оценка": result.params.to_vector()}), use_container_width=True)

		pred_phi, pred_theta = predict_mean_arrays(result.params, data.cov_phi, data.cov_theta)
		psi, xi = signed_residuals(result.params, data)

		left, right = st.columns(2)
		for column, name, observed, predicted in (
			(left, "φ", data.resp_phi, pred_phi),
			(right, "θ", data.resp_theta, pred_theta),
		):
			with column:
				st.subheader(f"Компонента {name}")
				scatter = circular_scatter_svg([
					PlotSeries("observed", observed, "circle", "#1f77b4"),
					PlotSeries("predicted", predicted, "cross", "#d62728"),
				])
				st.markdown(scatter.inline, unsafe_allow_html=True)
				st.markdown(spoke_plot_svg(observed, predicted).inline, unsafe_allow_html=True)
				st.pyplot(plot_qq(observed, predicted, title=f"QQ: {name}"))

		st.subheader("Невязки")
		st.pyplot(plot_residuals(psi, xi, times=data.labels))
		if data.n >= WATSON_MIN_N:
			rows = []
			for name, residuals in (("ψ", psi), ("ξ", xi)):
				w = watson_u2(residuals)
				rows.append({
					"невязка": name,
					"μ̂": w.mu_hat,
					"κ̂": w.kappa_hat,
					"U²": w.statistic,
					"крит. 5%": w.critical_value_5pct,
					"отвергаем": w.reject,
				})
			st.dataframe(pd.DataFrame(rows), use_container_width=True)

		st.subheader("Старты")
		best = min((s for s in result.per_start if s.valid), key=lambda s: (s.final_loss, s.index))
		st.caption(f"Лучший старт: {best.index}, метод {best.method}")
		st.dataframe(
			pd.DataFrame([
				{
					"старт": s.index,
					"потеря": s.final_loss,
					"итераций": s.iterations,
					"метод": s.method,
					"сошёлся": s.converged,
					"допустим": s.valid,
				}
				for s in result.per_start
			]),
			use_container_width=True,
		)
		if np.isfinite(best.final_loss):
			st.pyplot(plot_loss_history(best.history, title=f"Старт {best.index}"))
	except TorusRegressionError as e:
		st.error(str(e))
