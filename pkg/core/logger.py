#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CURVE-QE - Système de Logging
© 2025 - Licence Apache 2.0

Logging unifié : console colorée (colorlog) et fichier texte
"""

import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional

import colorlog

LOG_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# Fichier et niveau partagés, modifiables par setup_logging
_log_file = Path("logs") / "curveqe.log"
_global_level = "INFO"


class Logger:
    """Logger du projet, avec données supplémentaires en key=value"""

    def __init__(self, name: str, log_level: Optional[str] = None):
        """
        Initialise le logger

        Args:
            name: Nom du logger
            log_level: Niveau de log (DEBUG, INFO, WARNING, ERROR, CRITICAL),
                niveau global si absent
        """
        self.name = name
        log_level = log_level or _global_level
        self.logger = logging.getLogger(f"curveqe.{name}")
        self.logger.propagate = False

        # Éviter la duplication des handlers
        if not self.logger.handlers:
            self._setup_logger(log_level)

    def _setup_logger(self, log_level: str):
        """Configure le logger avec handlers console et fichier"""
        level = getattr(logging, log_level.upper(), logging.INFO)
        self.logger.setLevel(level)

        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(level)
        console_handler.setFormatter(
            colorlog.ColoredFormatter(
                "%(log_color)s" + LOG_FORMAT,
                datefmt=DATE_FORMAT,
                log_colors={
                    "DEBUG": "cyan",
                    "INFO": "green",
                    "WARNING": "yellow",
                    "ERROR": "red",
                    "CRITICAL": "bold_red",
                },
            )
        )
        self.logger.addHandler(console_handler)

        try:
            _log_file.parent.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(_log_file, encoding="utf-8")
            file_handler.setLevel(level)
            file_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
            self.logger.addHandler(file_handler)
        except OSError as e:
            print(f"Erreur création handler fichier: {e}", file=sys.stderr)

    def debug(self, message: str, extra: Optional[Dict[str, Any]] = None):
        """Log niveau DEBUG"""
        self._log(logging.DEBUG, message, extra)

    def info(self, message: str, extra: Optional[Dict[str, Any]] = None):
        """Log niveau INFO"""
        self._log(logging.INFO, message, extra)

    def warning(self, message: str, extra: Optional[Dict[str, Any]] = None):
        """Log niveau WARNING"""
        self._log(logging.WARNING, message, extra)

    def error(self, message: str, extra: Optional[Dict[str, Any]] = None):
        """Log niveau ERROR"""
        self._log(logging.ERROR, message, extra)

    def _log(self, level: int, message: str, extra: Optional[Dict[str, Any]] = None):
        """
        Log interne avec données supplémentaires

        Args:
            level: Niveau de log
            message: Message principal
            extra: Données supplémentaires à logger
        """
        if extra:
            extra_str = " | ".join([f"{k}={v}" for k, v in extra.items()])
            full_message = f"{message} | {extra_str}"
        else:
            full_message = message

        self.logger.log(level, full_message)

    def log_performance(self, operation: str, duration_ms: float, **kwargs):
        """
        Log spécialisé pour les durées de calcul

        Args:
            operation: Nom de l'opération
            duration_ms: Durée en millisecondes
            **kwargs: Métriques supplémentaires
        """
        metrics = {
            "operation": operation,
            "duration_ms": f"{duration_ms:.2f}",
            **kwargs,
        }
        self.info(f"Performance: {operation}", metrics)

    def log_certificate(self, name: str, status: str, **kwargs):
        """
        Log d'un certificat (PASS/FAIL)

        Args:
            name: Nom du certificat ou de la vérification
            status: Statut obtenu
            **kwargs: Champs supplémentaires
        """
        level = logging.INFO if status == "PASS" else logging.WARNING
        self._log(level, f"Certificat: {name}", {"status": status, **kwargs})

    def log_escalation(self, operation: str, bits: int, **kwargs):
        """Trace une montée en précision"""
        self.debug(f"Précision: {operation}", {"bits": bits, **kwargs})

    def log_error_with_context(self, error: Exception, context: Dict[str, Any]):
        """
        Log d'erreur avec contexte détaillé

        Args:
            error: Exception capturée
            context: Contexte de l'erreur
        """
        error_info = {
            "error_type": type(error).__name__,
            "error_message": str(error),
            **context,
        }
        self.error(f"Erreur: {type(error).__name__}", error_info)


# Loggers déjà créés, par nom
_loggers: Dict[str, Logger] = {}


def get_logger(name: str = "CURVEQE") -> Logger:
    """
    Récupère ou crée un logger

    Args:
        name: Nom du logger

    Returns:
        Instance de Logger
    """
    if name not in _loggers:
        _loggers[name] = Logger(name, _global_level)
    return _loggers[name]


def setup_logging(level: str = "INFO", log_file: Optional[str] = None) -> Logger:
    """
    Configure le logging global

    Args:
        level: Niveau de log global
        log_file: Fichier de log (sinon logs/curveqe.log)

    Returns:
        Logger racine du projet
    """
    global _global_level, _log_file
    _global_level = level
    if log_file:
        _log_file = Path(log_file)
    numeric = getattr(logging, level.upper(), logging.INFO)
    for name, existing in logging.Logger.manager.loggerDict.items():
        if name.startswith("curveqe.") and isinstance(existing, logging.Logger):
            existing.setLevel(numeric)
            for handler in existing.handlers:
                handler.setLevel(numeric)
    return get_logger("CURVEQE")
