# -*- coding: utf-8 -*-
"""Командная строка: simulate, fit, predict, mc-study, diagnose, plot, example, ui.

Коды завершения:
	0 — успех
	2 — ошибка использования (argparse)
	3 — ошибка разбора файла или настроек
	4 — нарушено предусловие или область определения
	5 — оценка не удалась
	6 — ошибка ввода-вывода
"""
from __future__ import annotations

import argparse
import logging
import os
import subprocess
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from . import dataio
from .config import UNITS, RunConfig, load_config_file
from .errors import (
	ConfigError,
	CsvParseError,
	DomainError,
	EstimationError,
	PreconditionError,
	SingularInputError,
)
from .optim.selection import fit
from .optim.study import STUDY_PRESETS, StudyCell, bootstrap_se, monte_carlo_study, run_preset, summary_table
from .svgplot import PlotSeries, circular_scatter_svg, spoke_plot_svg
from .torus.diagnostics import WATSON_MIN_N, circular_summary, qq_pairs, watson_u2
from .torus.distributions import CovariateSpec, ErrorSpec
from .torus.mobius import PARAM_NAMES, ModelParams, predict_mean_arrays
from .torus.model import signed_residuals, simulate_responses

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_PRECONDITION = 4
EXIT_ESTIMATION = 5
EXIT_IO = 6

PLOT_KINDS = ("circular-scatter", "spoke", "qq")
DEFAULT_PARAMS = "1.0472,-1.7,1.2,-1.8,1.5,3.1416"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# флаги, совпадающие с полями RunConfig
_CONFIG_FLAGS = (
	"R", "r", "restarts", "b_bound", "seed", "tol", "h", "max_iter",
	"bootstrap", "bootstrap_restarts", "workers", "units",
)


def parse_params(text: str) -> ModelParams:
	"""Разобрать «phi0,b1,b2,b3,b4,theta0» (радианы)."""
	parts = [p for p in text.replace(";", ",").split(",") if p.strip()]
	if len(parts) != len(PARAM_NAMES):
		raise ConfigError(f"Ожидалось {len(PARAM_NAMES)} чисел параметров через запятую, получено '{text}'")
	try:
		return ModelParams.from_vector([float(p) for p in parts])
	except ValueError as exc:
		raise ConfigError(f"Параметры должны быть числами: '{text}'") from exc


def _common_parser() -> argparse.ArgumentParser:
	common = argparse.ArgumentParser(add_help=False)
	group = common.add_argument_group("настройки запуска")
	group.add_argument("--config", help="файл настроек key = value")
	group.add_argument("--R", type=float, dest="R", help="большой радиус тора")
	group.add_argument("--r", type=float, dest="r", help="малый радиус тора")
	group.add_argument("--restarts", type=int, help="число стартов оценки")
	group.add_argument("--b-bound", type=float, dest="b_bound", help="границы b1..b4")
	group.add_argument("--seed", type=int, help="зерно")
	group.add_argument("--tol", type=float, help="критерий остановки")
	group.add_argument("--h", type=float, dest="h", help="шаг численного градиента")
	group.add_argument("--max-iter", type=int, dest="max_iter", help="максимум итераций на старт")
	group.add_argument("--bootstrap", type=int, help="число бутстреп-повторов B (0 — без стандартных ошибок)")
	group.add_argument("--bootstrap-restarts", type=int, dest="bootstrap_restarts", help="стартов в бутстреп-повторе")
	group.add_argument("--workers", type=int, help="число потоков")
	group.add_argument("--units", choices=UNITS, help="единицы углов в CSV")
	verbosity = common.add_mutually_exclusive_group()
	verbosity.add_argument("-v", "--verbose", action="store_true", help="подробный журнал")
	verbosity.add_argument("-q", "--quiet", action="store_true", help="только предупреждения и ошибки")
	return common


def build_parser() -> argparse.ArgumentParser:
	common = _common_parser()
	parser = argparse.ArgumentParser(
		prog="torus-regression",
		description="Регрессия «тор → тор» с обобщёнными связями Мёбиуса",
	)
	sub = parser.add_subparsers(dest="command", metavar="command")
	sub.required = True

	p = sub.add_parser("simulate", parents=[common], help="смоделировать набор данных")
	p.add_argument("--params", default=DEFAULT_PARAMS, help="phi0,b1,b2,b3,b4,theta0")
	p.add_argument("--covariates", default="vm:0:1", help="распределение ковариат, например vm:0:1 или wc:3.1416:0.2")
	p.add_argument("--errors", default="sine:3:3:0", help="распределение ошибок, например sine:3:3:0, zero")
	p.add_argument("--n", type=int, required=True, help="число наблюдений")
	p.add_argument("--out", required=True, help="выходной CSV")
	p.set_defaults(handler=cmd_simulate)

	p = sub.add_parser("fit", parents=[common], help="оценить параметры")
	p.add_argument("--data", required=True, help="CSV с наблюдениями")
	p.add_argument("--out", required=True, help="файл отчёта")
	p.set_defaults(handler=cmd_fit)

	p = sub.add_parser("predict", parents=[common], help="прогноз по отчёту оценки")
	p.add_argument("--report", required=True, help="отчёт оценки")
	p.add_argument("--covariates", required=True, help="CSV с cov_phi, cov_theta")
	p.add_argument("--out", required=True, help="выходной CSV прогнозов")
	p.set_defaults(handler=cmd_predict)

	p = sub.add_parser("mc-study", parents=[common], help="исследование Монте-Карло")
	p.add_argument("--preset", choices=sorted(STUDY_PRESETS), help="готовое исследование")
	p.add_argument("--params", default=DEFAULT_PARAMS, help="истинные параметры (без --preset)")
	p.add_argument("--covariates", default="vm:0:1", help="распределение ковариат (без --preset)")
	p.add_argument("--errors", default="sine:3:3:0", help="распределение ошибок (без --preset)")
	p.add_argument("--n", type=int, nargs="+", help="объёмы выборки; с --preset отбирают ячейки")
	p.add_argument("--reps", type=int, required=True, help="число репликаций")
	p.add_argument("--spread", choices=("se", "sd"), default="se", help="разброс в скобках")
	p.add_argument("--out", required=True, help="файл таблицы")
	p.set_defaults(handler=cmd_mc_study)

	p = sub.add_parser("diagnose", parents=[common], help="диагностика невязок")
	p.add_argument("--report", required=True, help="отчёт оценки")
	p.add_argument("--data", required=True, help="CSV с наблюдениями")
	p.add_argument("--out", required=True, help="отчёт диагностики")
	p.add_argument("--qq-out", help="CSV QQ-пар (по умолчанию <out>.qq.csv)")
	p.set_defaults(handler=cmd_diagnose)

	p = sub.add_parser("plot", parents=[common], help="SVG-график")
	p.add_argument("kind", choices=PLOT_KINDS, help="вид графика")
	p.add_argument("--data", required=True, help="CSV с наблюдениями")
	p.add_argument("--report", help="отчёт оценки (прогнозы для spoke и qq)")
	p.add_argument("--component", choices=("phi", "theta"), default="phi", help="угловая компонента")
	p.add_argument("--size", type=float, default=400.0, help="ширина в пикселях")
	p.add_argument("--out", required=True, help="выходной SVG")
	p.set_defaults(handler=cmd_plot)

	p = sub.add_parser("example", parents=[common], help="записать встроенный пример данных")
	p.add_argument("--out", required=True, help="выходной CSV")
	p.set_defaults(handler=cmd_example)

	p = sub.add_parser("ui", parents=[common], help="запустить Streamlit-интерфейс")
	p.set_defaults(handler=cmd_ui)
	return parser


def setup_logging(verbose: bool = False, quiet: bool = False) -> None:
	level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
	logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def resolve_config(args: argparse.Namespace) -> RunConfig:
	"""Настройки запуска: значения по умолчанию < файл --config < явные флаги."""
	file_values = load_config_file(args.config) if args.config else {}
	flags = {name: getattr(args, name, None) for name in _CONFIG_FLAGS}
	return RunConfig.from_sources(file_values, flags)


def _settings(config: RunConfig) -> Dict[str, Any]:
	echo = config.fit_config().echo()
	echo["bounds"] = ";".join(f"{lo!r}:{hi!r}" for lo, hi in echo["bounds"])
	echo["units"] = config.units
	return echo


# ---------------------------------------------------------------------------
# Подкоманды
# ---------------------------------------------------------------------------

def cmd_simulate(args: argparse.Namespace, config: RunConfig) -> int:
	if args.n < 0:
		raise PreconditionError(f"n должно быть ≥ 0, получено {args.n}")
	params = parse_params(args.params)
	covariate_spec = CovariateSpec.parse(args.covariates)
	error_spec = ErrorSpec.parse(args.errors)
	cov_seed, err_seed = np.random.SeedSequence(config.seed).spawn(2)
	covariates = covariate_spec.sample(args.n, cov_seed)
	data = simulate_responses(params, covariates, error_spec, err_seed)
	dataio.write_dataset(data, args.out, config.units)
	dataio.write_metadata(args.out, {
		"params": dict(zip(PARAM_NAMES, params.to_vector().tolist())),
		"covariates": covariate_spec.describe(),
		"errors": error_spec.describe(),
		"n": args.n,
		"seed": config.seed,
		"units": config.units,
	})
	logger.info("Смоделировано %d наблюдений: ковариаты %s, ошибки %s", args.n, covariate_spec.describe(), error_spec.describe())
	return EXIT_OK


def cmd_fit(args: argparse.Namespace, config: RunConfig) -> int:
	data = dataio.load_dataset(args.data, config.units)
	fit_config = config.fit_config()
	result = fit(data, fit_config)
	bootstrap = None
	if config.bootstrap > 0:
		se, failures = bootstrap_se(
			data, fit_config, config.bootstrap, restarts=config.bootstrap_restarts, workers=config.workers,
		)
		result.standard_errors = se
		bootstrap = {"bootstrap_B": config.bootstrap, "bootstrap_failures": failures}
	dataio.write_fit_report(result, args.out, _settings(config), data.n, bootstrap)
	logger.info("Потеря %.6g, параметры %s", result.loss, np.round(result.params.to_vector(), 4).tolist())
	return EXIT_OK


def cmd_predict(args: argparse.Namespace, config: RunConfig) -> int:
	params, _ = dataio.read_fit_report(args.report)
	covariates, labels = dataio.load_covariates(args.covariates, config.units)
	if covariates.shape[0]:
		phi, theta = predict_mean_arrays(params, covariates[:, 0], covariates[:, 1])
	else:
		phi, theta = np.empty(0), np.empty(0)
	dataio.write_predictions(phi, theta, args.out, config.units, labels)
	logger.info("Записано %d прогнозов в %s", covariates.shape[0], args.out)
	return EXIT_OK


def cmd_mc_study(args: argparse.Namespace, config: RunConfig) -> int:
	fit_config = config.fit_config()
	if args.preset:
		preset = STUDY_PRESETS[args.preset]
		rows = run_preset(preset, args.reps, fit_config, sizes=args.n, workers=config.workers)
		if not rows:
			raise PreconditionError(f"В исследовании {args.preset} нет ячеек с n из {args.n}")
		meta: Dict[str, Any] = {"preset": args.preset}
	else:
		if not args.n:
			raise PreconditionError("Без --preset нужно задать --n")
		params = parse_params(args.params)
		covariate_spec = CovariateSpec.parse(args.covariates)
		error_spec = ErrorSpec.parse(args.errors)
		rows = []
		for n in args.n:
			summary = monte_carlo_study(params, covariate_spec, error_spec, n, args.reps, fit_config, config.workers)
			rows.append((StudyCell(n, error_spec.describe(), error_spec), summary))
		meta = {"params": args.params, "covariates": covariate_spec.describe(), "errors": error_spec.describe()}
	table = summary_table(rows, spread=args.spread)
	with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
		fh.write(table.to_string(index=False) + "\n")
	meta.update({"reps": args.reps, "spread": args.spread, **fit_config.echo()})
	dataio.write_metadata(args.out, meta)
	logger.info("Таблица исследования записана в %s", args.out)
	return EXIT_OK


def _component_diagnostics(name: str, residuals: np.ndarray) -> List[tuple]:
	summary = circular_summary(residuals)
	items: List[tuple] = [
		(f"{name}.mean_direction", summary.mean_direction),
		(f"{name}.resultant_length", summary.resultant_length),
		(f"{name}.circular_sd", summary.circular_sd),
	]
	if residuals.size < WATSON_MIN_N:
		logger.warning("Компонента %s: n = %d < %d, тест Ватсона пропущен", name, residuals.size, WATSON_MIN_N)
		items.append((f"{name}.watson", "skipped"))
		return items
	result = watson_u2(residuals)
	if result.kappa_capped:
		logger.warning("Компонента %s: невязки вырождены, κ̂ обрезан до %g", name, result.kappa_hat)
	items += [
		(f"{name}.mu_hat", result.mu_hat),
		(f"{name}.kappa_hat", result.kappa_hat),
		(f"{name}.kappa_capped", result.kappa_capped),
		(f"{name}.watson_u2", result.statistic),
		(f"{name}.critical_5pct", result.critical_value_5pct),
		(f"{name}.reject", result.reject),
	]
	return items


def cmd_diagnose(args: argparse.Namespace, config: RunConfig) -> int:
	params, fields = dataio.read_fit_report(args.report)
	data = dataio.load_dataset(args.data, config.units)
	if "n" in fields:
		dataio.check_same_rows(data, int(fields["n"]), args.report)
	if data.n == 0:
		raise PreconditionError("Для диагностики нужна хотя бы одна строка данных")
	psi, xi = signed_residuals(params, data)
	pred_phi, pred_theta = predict_mean_arrays(params, data.cov_phi, data.cov_theta)
	items: List[tuple] = [("n", data.n)]
	items += _component_diagnostics("phi", psi)
	items += _component_diagnostics("theta", xi)
	dataio.write_key_values(args.out, "torus-to-torus regression residual diagnostics", items)
	qq_path = args.qq_out or f"{args.out}.qq.csv"
	dataio.write_qq_csv(qq_path, {
		"phi": qq_pairs(data.resp_phi, pred_phi),
		"theta": qq_pairs(data.resp_theta, pred_theta),
	})
	logger.info("Диагностика записана в %s и %s", args.out, qq_path)
	return EXIT_OK


def cmd_plot(args: argparse.Namespace, config: RunConfig) -> int:
	data = dataio.load_dataset(args.data, config.units)
	observed = data.resp_phi if args.component == "phi" else data.resp_theta
	predicted = None
	if args.report:
		params, _ = dataio.read_fit_report(args.report)
		if data.n:
			pred = predict_mean_arrays(params, data.cov_phi, data.cov_theta)
			predicted = pred[0] if args.component == "phi" else pred[1]
		else:
			predicted = np.empty(0)
	if args.kind != "circular-scatter" and predicted is None:
		raise PreconditionError(f"Для графика {args.kind} нужен --report с оценёнными параметрами")

	if args.kind == "circular-scatter":
		series = [PlotSeries("observed", observed, "circle", "#1f77b4")]
		if predicted is not None:
			series.append(PlotSeries("predicted", predicted, "cross", "#d62728"))
		circular_scatter_svg(series, size=args.size).save(args.out)
	elif args.kind == "spoke":
		spoke_plot_svg(observed, predicted, size=args.size).save(args.out)
	else:
		from .visualize import plot_qq, save_svg

		fig = plot_qq(observed, predicted, title=f"QQ: {args.component}")
		save_svg(fig, args.out)
	logger.info("График %s записан в %s", args.kind, args.out)
	return EXIT_OK


def cmd_example(args: argparse.Namespace, config: RunConfig) -> int:
	data = dataio.example_dataset()
	dataio.write_dataset(data, args.out, config.units)
	return EXIT_OK


def cmd_ui(args: argparse.Namespace, config: RunConfig) -> int:
	app_path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "explorer.py")
	cmd = [sys.executable, "-m", "streamlit", "run", app_path, "--server.headless", "true"]
	return subprocess.call(cmd)


_EXIT_CODES = (
	((CsvParseError, ConfigError), EXIT_PARSE),
	((PreconditionError, DomainError, SingularInputError), EXIT_PRECONDITION),
	((EstimationError,), EXIT_ESTIMATION),
	((OSError,), EXIT_IO),
)


def exit_code_for(exc: BaseException) -> int:
	for kinds, code in _EXIT_CODES:
		if isinstance(exc, kinds):
			return code
	raise exc


def main(argv: Optional[Sequence[str]] = None) -> int:
	"""Разобрать аргументы и выполнить подкоманду; возвращает код завершения."""
	parser = build_parser()
	try:
		args = parser.parse_args(argv)
	except SystemExit as exc:
		return int(exc.code or 0)
	setup_logging(args.verbose, args.quiet)
	handler: Callable[[argparse.Namespace, RunConfig], int] = args.handler
	try:
		config = resolve_config(args)
		return handler(args, config)
	except (CsvParseError, ConfigError, PreconditionError, DomainError, SingularInputError, EstimationError, OSError) as exc:
		code = exit_code_for(exc)
		logger.error("%s", exc)
		if isinstance(exc, EstimationError):
			for entry in exc.diagnostics:
				logger.error("старт %s: %s", entry.get("index"), entry.get("diagnostic"))
		return code
