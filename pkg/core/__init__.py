#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CURVE-QE - Core Module
© 2025 - Licence Apache 2.0

Élimination des quantificateurs sur les prédicats de courbes algébriques
et reproductions exactes des contre-exemples associés
"""

__version__ = "1.0.0"

from .config import ConfigManager, ExperimentConfig
from .logger import Logger, get_logger
from .errors import CurveQEError
from .formula import Signature
from .parser import parse, parse_file
from .oracle import CurveOracle
from .qe_engine import QEEngine, qe
from .semantics import check_equivalence_sampled, evaluate
from .report import CheckResult, Report, emit_report

__all__ = [
    "ConfigManager",
    "ExperimentConfig",
    "Logger",
    "get_logger",
    "CurveQEError",
    "Signature",
    "parse",
    "parse_file",
    "CurveOracle",
    "QEEngine",
    "qe",
    "check_equivalence_sampled",
    "evaluate",
    "CheckResult",
    "Report",
    "emit_report",
]
