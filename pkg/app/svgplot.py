# -*- coding: utf-8 -*-
"""Детерминированные SVG-графики для круговых данных.

- circular_scatter_svg: круговая диаграмма рассеяния (i-е наблюдение на
  окружности радиуса i/n под своим углом)
- spoke_plot_svg: спицевая диаграмма (наблюдения на внешнем кольце,
  прогнозы на внутреннем, хорды между парами)

Координаты печатаются с фиксированными 4 знаками после запятой, дат и
случайных идентификаторов в выводе нет: одинаковый вход даёт побайтно
одинаковый документ. Серии рисуются в порядке списка, поэтому прогнозы
передаются последними, чтобы оказаться поверх наблюдений.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import List, Sequence
from xml.sax.saxutils import escape

from .errors import PreconditionError

MARKERS = ("circle", "cross", "box")
MARGIN = 40.0
MARKER_SIZE = 4.0
LEGEND_ROW = 18.0
SPOKE_INNER = 0.7
_HEX = re.compile(r"^#(?:[0-9a-fA-F]{3}|[0-9a-fA-F]{6})$")


def fmt(value: float) -> str:
	"""Число с 4 знаками после запятой без «-0.0000»."""
	if abs(value) < 5e-5:
		value = 0.0
	return f"{value:.4f}"


@dataclass(frozen=True)
class PlotSeries:
	"""Серия точек: подпись, углы, тип маркера и цвет в шестнадцатеричной записи."""

	label: str
	angles: Sequence[float]
	marker: str = "circle"
	color: str = "#000000"

	def __post_init__(self) -> None:
		if not self.label:
			raise ValueError("Подпись серии не может быть пустой")
		if self.marker not in MARKERS:
			raise ValueError(f"Неизвестный маркер '{self.marker}', допустимы {MARKERS}")
		if not _HEX.match(self.color):
			raise ValueError(f"Цвет должен быть в виде #rrggbb, получено '{self.color}'")
		object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))


@dataclass(frozen=True)
class SvgDoc:
	"""SVG-документ: размеры в пикселях и полный текст."""

	width: float
	height: float
	body: str

	@property
	def inline(self) -> str:
		"""Текст без XML-декларации для встраивания в HTML."""
		return self.body.split("\n", 1)[1] if self.body.startswith("<?xml") else self.body

	def save(self, path: str) -> None:
		with open(path, "w", encoding="utf-8", newline="\n") as fh:
			fh.write(self.body)


class _Canvas:
	"""Накопитель элементов SVG."""

	def __init__(self, width: float, height: float):
		self.width = width
		self.height = height
		self.items: List[str] = []

	def circle(self, x: float, y: float, r: float, stroke: str, fill: str = "none", css: str = "", width: float = 1.0) -> None:
		cls = f' class="{css}"' if css else ""
		self.items.append(
			f'<circle{cls} cx="{fmt(x)}" cy="{fmt(y)}" r="{fmt(r)}" fill="{fill}" stroke="{stroke}" stroke-width="{fmt(width)}"/>'
		)

	def line(self, x1: float, y1: float, x2: float, y2: float, stroke: str, css: str = "", width: float = 1.0) -> None:
		cls = f' class="{css}"' if css else ""
		self.items.append(
			f'<line{cls} x1="{fmt(x1)}" y1="{fmt(y1)}" x2="{fmt(x2)}" y2="{fmt(y2)}" stroke="{stroke}" stroke-width="{fmt(width)}"/>'
		)

	def text(self, x: float, y: float, content: str, size: float = 11.0) -> None:
		self.items.append(
			f'<text x="{fmt(x)}" y="{fmt(y)}" font-family="sans-serif" font-size="{fmt(size)}">{escape(content)}</text>'
		)

	def marker(self, kind: str, x: float, y: float, color: str, css: str) -> None:
		s = MARKER_SIZE
		if kind == "circle":
			self.circle(x, y, s, stroke=color, fill=color, css=css)
		elif kind == "box":
			self.items.append(
				f'<rect class="{css}" x="{fmt(x - s)}" y="{fmt(y - s)}" width="{fmt(2 * s)}" height="{fmt(2 * s)}" '
				f'fill="none" stroke="{color}" stroke-width="1.0000"/>'
			)
		else:
			self.items.append(
				f'<path class="{css}" d="M {fmt(x - s)} {fmt(y - s)} L {fmt(x + s)} {fmt(y + s)} '
				f'M {fmt(x - s)} {fmt(y + s)} L {fmt(x + s)} {fmt(y - s)}" fill="none" stroke="{color}" stroke-width="1.5000"/>'
			)

	def render(self) -> SvgDoc:
		head = (
			'<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n'
			f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{fmt(self.width)}" height="{fmt(self.height)}" '
			f'viewBox="0 0 {fmt(self.width)} {fmt(self.height)}">\n'
			f'<rect x="0.0000" y="0.0000" width="{fmt(self.width)}" height="{fmt(self.height)}" fill="#ffffff"/>\n'
		)
		return SvgDoc(self.width, self.height, head + "\n".join(self.items) + "\n</svg>\n")


def _to_screen(cx: float, cy: float, radius: float, angle: float):
	# ось y экрана направлена вниз
	return cx + radius * math.cos(angle), cy - radius * math.sin(angle)


def _zero_tick(canvas: _Canvas, cx: float, cy: float, radius: float) -> None:
	canvas.line(cx + radius, cy, cx + radius + 8.0, cy, stroke="#444444", css="tick")
	canvas.text(cx + radius + 10.0, cy + 4.0, "0")


def _legend(canvas: _Canvas, top: float, entries: Sequence[PlotSeries]) -> None:
	for k, s in enumerate(entries):
		y = top + k * LEGEND_ROW + LEGEND_ROW / 2
		canvas.marker(s.marker, MARGIN / 2, y, s.color, css="legend-marker")
		canvas.text(MARGIN / 2 + 12.0, y + 4.0, s.label)


def circular_scatter_svg(series: Sequence[PlotSeries], size: float = 400.0) -> SvgDoc:
	"""Круговая диаграмма рассеяния.

	Строятся n концентрических направляющих окружностей радиусов i/n
	(в долях радиуса графика); i-е значение каждой серии ставится в точку
	(i/n)(cos θᵢ, sin θᵢ).

	Параметры:
		series: Sequence[PlotSeries]
			Серии одинаковой длины n ≥ 1.
		size: float
			Ширина графика в пикселях.

	Исключения:
		PreconditionError: нет серий, пустые серии или разная длина.
	"""
	if not series:
		raise PreconditionError("Нужна хотя бы одна серия")
	n = len(series[0].angles)
	if any(len(s.angles) != n for s in series):
		raise PreconditionError("Все серии должны иметь одинаковую длину")
	if n < 1:
		raise PreconditionError("Серии не должны быть пустыми")
	radius = size / 2.0 - MARGIN
	cx = cy = size / 2.0
	canvas = _Canvas(size, size + LEGEND_ROW * len(series))
	for i in range(1, n + 1):
		canvas.circle(cx, cy, radius * i / n, stroke="#cccccc", css="guide", width=0.5)
	_zero_tick(canvas, cx, cy, radius)
	for s in series:
		for i, angle in enumerate(s.angles, start=1):
			x, y = _to_screen(cx, cy, radius * i / n, angle)
			canvas.marker(s.marker, x, y, s.color, css="marker")
	_legend(canvas, size, series)
	return canvas.render()


def spoke_plot_svg(observed: Sequence[float], predicted: Sequence[float], size: float = 400.0) -> SvgDoc:
	"""Спицевая диаграмма: наблюдения на кольце радиуса 1, прогнозы на кольце 0.7, хорды между парами.

	Исключения:
		PreconditionError: пустые входы или разная длина.
	"""
	obs = [float(a) for a in observed]
	pred = [float(a) for a in predicted]
	if len(obs) != len(pred):
		raise PreconditionError(f"Длины наблюдений и прогнозов различаются: {len(obs)} и {len(pred)}")
	if not obs:
		raise PreconditionError("Для спицевой диаграммы нужна хотя бы одна пара")
	radius = size / 2.0 - MARGIN
	cx = cy = size / 2.0
	entries = (PlotSeries("observed", (), "circle", "#000000"), PlotSeries("predicted", (), "cross", "#2ca02c"))
	canvas = _Canvas(size, size + LEGEND_ROW * len(entries))
	canvas.circle(cx, cy, radius, stroke="#999999", css="ring")
	canvas.circle(cx, cy, radius * SPOKE_INNER, stroke="#999999", css="ring")
	_zero_tick(canvas, cx, cy, radius)
	for a, b in zip(obs, pred):
		x1, y1 = _to_screen(cx, cy, radius, a)
		x2, y2 = _to_screen(cx, cy, radius * SPOKE_INNER, b)
		canvas.line(x1, y1, x2, y2, stroke="#1f77b4", css="chord", width=0.75)
	for a in obs:
		x, y = _to_screen(cx, cy, radius, a)
		canvas.marker("circle", x, y, "#000000", css="marker observed")
	for b in pred:
		x, y = _to_screen(cx, cy, radius * SPOKE_INNER, b)
		canvas.marker("cross", x, y, "#2ca02c", css="marker predicted")
	_legend(canvas, size, entries)
	return canvas.render()
