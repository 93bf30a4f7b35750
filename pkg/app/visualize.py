# -*- coding: utf-8 -*-
"""Графики matplotlib: QQ-график невязок, невязки по номеру наблюдения, история потерь старта."""
from __future__ import annotations

from typing import Any, Dict, List, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .errors import PreconditionError
from .torus.diagnostics import qq_pairs
from .torus.geometry import TWO_PI


def plot_qq(
	observed: Sequence[float],
	predicted: Sequence[float],
	title: str = "",
	labels: Tuple[str, str] = ("observed", "predicted"),
):
	"""QQ-график двух угловых выборок.

	Параметры:
		observed, predicted: Sequence[float]
			Углы одинаковой длины; квантили сопоставляются по рангу.
		title: str
			Заголовок графика.
		labels: Tuple[str, str]
			Подписи осей x и y.

	Возвращает:
		matplotlib.figure.Figure: фигура с точками и диагональю y = x.

	Исключения:
		PreconditionError: при пустых входах или разной длине.
	"""
	pairs = qq_pairs(observed, predicted)
	xs = np.array([p[0] for p in pairs])
	ys = np.array([p[1] for p in pairs])
	fig, ax = plt.subplots(figsize=(5, 5))
	ax.plot([0.0, TWO_PI], [0.0, TWO_PI], color="#888888", linewidth=0.8, label="y = x")
	ax.plot(xs, ys, marker="o", linestyle="none", color="#1f77b4", alpha=0.8, markersize=4, label="квантили")
	ax.set_xlim(0.0, TWO_PI)
	ax.set_ylim(0.0, TWO_PI)
	ax.set_aspect("equal")
	if title:
		ax.set_title(title)
	ax.set_xlabel(labels[0])
	ax.set_ylabel(labels[1])
	ax.grid(True, alpha=0.2)
	ax.legend(loc="upper left")
	fig.tight_layout()
	return fig


def plot_residuals(
	psi: Sequence[float],
	xi: Sequence[float],
	times: Optional[Sequence[str]] = None,
	title: str = "",
):
	"""Знаковые невязки ψ и ξ (в (−π, π]) по номеру наблюдения.

	Если переданы метки времени, они используются как подписи оси x
	(не более десяти подписей).
	"""
	psi = np.asarray(psi, dtype=float)
	xi = np.asarray(xi, dtype=float)
	if psi.size != xi.size:
		raise PreconditionError(f"Длины невязок различаются: {psi.size} и {xi.size}")
	idx = np.arange(psi.size)
	fig, ax = plt.subplots(figsize=(8, 3.5))
	ax.axhline(0.0, color="#888888", linewidth=0.8)
	ax.plot(idx, psi, marker="o", markersize=3, linewidth=0.8, color="#1f77b4", label="ψ (φ)")
	ax.plot(idx, xi, marker="x", markersize=3, linewidth=0.8, color="#d62728", label="ξ (θ)")
	ax.set_ylim(-np.pi, np.pi)
	if times is not None and len(times) == psi.size and psi.size > 0:
		step = max(1, psi.size // 10)
		ax.set_xticks(idx[::step])
		ax.set_xticklabels([str(t) for t in list(times)[::step]], rotation=45, ha="right", fontsize=7)
	ax.set_xlabel("наблюдение")
	ax.set_ylabel("невязка, рад")
	if title:
		ax.set_title(title)
	ax.grid(True, alpha=0.2)
	ax.legend(loc="best")
	fig.tight_layout()
	return fig


def plot_loss_history(history: List[Dict[str, Any]], title: str = ""):
	"""Значения функции потерь по итерациям одного старта (логарифмическая шкала)."""
	fig, ax = plt.subplots(figsize=(7, 4))
	its = [int(step["iter"]) for step in history]
	fs = [float(step["f"]) for step in history]
	if its:
		ax.plot(its, fs, marker="o", markersize=3, color="#d62728")
		if min(fs) > 0:
			ax.set_yscale("log")
	if title:
		ax.set_title(title)
	ax.set_xlabel("итерация")
	ax.set_ylabel("потеря")
	ax.grid(True, alpha=0.2)
	fig.tight_layout()
	return fig


def save_svg(fig, path: str) -> None:
	"""Сохранить фигуру в SVG без даты и со стабильными идентификаторами."""
	with matplotlib.rc_context({"svg.hashsalt": "torus-regression"}):
		fig.savefig(path, format="svg", metadata={"Date": None})
	plt.close(fig)
