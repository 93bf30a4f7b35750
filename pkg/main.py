# -*- coding: utf-8 -*-
"""Точка входа: `python main.py <подкоманда>`; `python main.py ui` запускает Streamlit."""
import sys

from app.cli import main


if __name__ == "__main__":
	sys.exit(main())
