# -*- coding: utf-8 -*-
"""Регрессия «тор → тор» с обобщёнными связями Мёбиуса: библиотека, CLI и Streamlit-приложение."""
