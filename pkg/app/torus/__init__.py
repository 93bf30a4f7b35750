# -*- coding: utf-8 -*-
"""Регрессия тор → тор через обобщённые преобразования Мёбиуса.

Смотрите:
- torus.geometry — геометрия вложенного тора и сферы нормалей
- torus.mobius — связующие функции и преобразования параметров
- torus.distributions — круговые и тороидальные распределения
- torus.model — набор данных, невязки и функция потерь
- torus.diagnostics — круговые сводки и тест Ватсона
"""
