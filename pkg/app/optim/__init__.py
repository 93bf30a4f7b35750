# -*- coding: utf-8 -*-
"""Оценка параметров и исследования.

Смотрите:
- optim.methods — минимизация из одной начальной точки и тип результата
- optim.selection — многостартовая оценка и выбор лучшего старта
- optim.study — Монте-Карло и бутстреп
"""
