#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CURVE-QE - Rapports d'expériences
© 2025 - Licence Apache 2.0

Résultats de vérification et sérialisation déterministe : clés triées,
durées regroupées sous la seule clé "timing".
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from . import __version__
from .logger import get_logger

TOOL_NAME = "curveqe"


@dataclass
class CheckResult:
    """Une vérification : statut, détails sérialisables, durée"""

    name: str
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)
    duration_ms: float = 0.0
    error: Optional[Dict[str, str]] = None

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    @classmethod
    def from_error(cls, name: str, error: Exception, duration_ms: float = 0.0) -> "CheckResult":
        return cls(
            name=name,
            passed=False,
            duration_ms=duration_ms,
            error={"type": type(error).__name__, "message": str(error)},
        )

    def to_dict(self) -> Dict[str, Any]:
        data = {"name": self.name, "status": self.status, "details": self.details}
        if self.error is not None:
            data["error"] = self.error
        return data


@dataclass
class Report:
    """Ensemble de vérifications d'une exécution"""

    command: str
    config: Dict[str, Any] = field(default_factory=dict)
    checks: List[CheckResult] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        return check

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)
        for note in other.notes:
            if note not in self.notes:
                self.notes.append(note)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tool": TOOL_NAME,
            "version": __version__,
            "command": self.command,
            "config": self.config,
            "status": self.status,
            "checks": [c.to_dict() for c in self.checks],
            "notes": self.notes,
            "timing": {
                "checks_ms": {c.name: round(c.duration_ms, 3) for c in self.checks},
                "total_ms": round(sum(c.duration_ms for c in self.checks), 3),
            },
        }

    def to_markdown(self) -> str:
        lines = [
            f"# {TOOL_NAME} {__version__} - {self.command}",
            "",
            f"Statut global : **{self.status}**",
            "",
            "| Vérification | Statut | Durée (ms) |",
            "|---|---|---|",
        ]
        for c in self.checks:
            lines.append(f"| {c.name} | {c.status} | {c.duration_ms:.1f} |")
        if self.notes:
            lines += ["", "## Remarques", ""]
            lines += [f"- {note}" for note in self.notes]
        errors = [c for c in self.checks if c.error]
        if errors:
            lines += ["", "## Erreurs", ""]
            lines += [f"- {c.name}: {c.error['type']}: {c.error['message']}" for c in errors]
        return "\n".join(lines) + "\n"


def _default(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (set, frozenset, tuple)):
        return sorted(value) if isinstance(value, (set, frozenset)) else list(value)
    if hasattr(value, "to_dict"):
        return value.to_dict()
    return str(value)


def strip_timing(data: Dict[str, Any]) -> Dict[str, Any]:
    """Copie d'un rapport sans la clé timing (comparaisons reproductibles)"""
    return {k: v for k, v in data.items() if k != "timing"}


def render_report(report: Report, fmt: str = "json") -> str:
    if fmt == "markdown":
        return report.to_markdown()
    return json.dumps(report.to_dict(), sort_keys=True, indent=2, ensure_ascii=False, default=_default) + "\n"


def emit_report(report: Report, path: Optional[Union[str, Path]] = None, fmt: str = "json") -> str:
    """
    Sérialise le rapport et l'écrit si un chemin est donné

    Args:
        report: Rapport à écrire
        path: Fichier de sortie (aucune écriture si None)
        fmt: "json" ou "markdown"

    Returns:
        Texte sérialisé
    """
    text = render_report(report, fmt)
    if path is not None:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8") as f:
            f.write(text)
        get_logger("Report").info("Rapport écrit", {"path": str(target), "status": report.status})
    return text
