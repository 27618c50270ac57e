#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CURVE-QE - Gestionnaire de Configuration
© 2025 - Licence Apache 2.0

Configuration centralisée (config.json) et paramètres d'expérience
"""

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

from .errors import ConfigError

PRECISION_CAP_BITS = 4096
ESCALATION_FACTOR = 4


def parse_rational_list(text: str) -> List[Fraction]:
    """
    Convertit "1,2,-3,5/7" en liste de rationnels

    Args:
        text: Valeurs séparées par des virgules

    Returns:
        Liste de Fraction
    """
    try:
        return [Fraction(part.strip()) for part in text.split(",") if part.strip()]
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"Liste de rationnels invalide: {text!r}") from e


def parse_int_range(text: str) -> List[int]:
    """Convertit "2..6" ou "2,3,5" en liste d'entiers"""
    try:
        if ".." in text:
            low, high = text.split("..", 1)
            return list(range(int(low), int(high) + 1))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigError(f"Intervalle d'entiers invalide: {text!r}") from e


@dataclass
class ExperimentConfig:
    """Paramètres d'une exécution du banc d'essai"""

    seed: int = 20240601
    precision_bits: int = 128
    escalation_factor: int = ESCALATION_FACTOR
    a_values: List[Fraction] = field(
        default_factory=lambda: [Fraction(1), Fraction(2), Fraction(-3), Fraction(5, 7)]
    )
    n_range: List[int] = field(default_factory=lambda: [2, 3, 4, 5, 6])
    N_range: List[int] = field(default_factory=lambda: [4, 5, 6, 7, 8])
    sample_points: int = 500
    dnf_cap: int = 256
    output: str = "reports/report.json"
    format: str = "json"
    corpus_dir: str = "corpus"
    signature: str = "corpus/signature.json"

    def validate(self) -> "ExperimentConfig":
        """Vérifie la cohérence des paramètres"""
        if not 16 <= self.precision_bits <= PRECISION_CAP_BITS:
            raise ConfigError(
                f"precision_bits doit être entre 16 et {PRECISION_CAP_BITS}: {self.precision_bits}"
            )
        if self.escalation_factor < 1:
            raise ConfigError(f"escalation_factor doit être >= 1: {self.escalation_factor}")
        if not self.a_values:
            raise ConfigError("a_values est vide")
        if not self.n_range or min(self.n_range) < 2:
            raise ConfigError(f"n_range invalide: {self.n_range}")
        if not self.N_range or min(self.N_range) < 2:
            raise ConfigError(f"N_range invalide: {self.N_range}")
        if self.format not in ("json", "markdown"):
            raise ConfigError(f"Format de rapport inconnu: {self.format}")
        if self.sample_points < 1 or self.dnf_cap < 1:
            raise ConfigError("sample_points et dnf_cap doivent être positifs")
        return self

    def to_dict(self) -> Dict[str, Any]:
        """Forme sérialisable (rationnels en texte)"""
        data = asdict(self)
        data["a_values"] = [str(a) for a in self.a_values]
        return data


class ConfigManager:
    """Gestionnaire de configuration centralisé"""

    def __init__(self, config_path: str = "config.json"):
        """
        Initialise le gestionnaire de configuration

        Args:
            config_path: Chemin vers le fichier de configuration
        """
        self.config_path = Path(config_path)
        self._config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """Charge la configuration depuis le fichier JSON, fusionnée aux défauts"""
        config = self._get_default_config()
        if not self.config_path.exists():
            return config

        try:
            with open(self.config_path, "r", encoding="utf-8") as f:
                loaded = json.load(f)
        except (json.JSONDecodeError, IOError) as e:
            print(f"Erreur chargement config: {e}")
            return config
        _deep_update(config, loaded)
        return config

    def _get_default_config(self) -> Dict[str, Any]:
        """Configuration par défaut"""
        return {
            "app": {
                "name": "CURVE-QE",
                "version": "1.0.0",
                "description": "Élimination des quantificateurs sur les courbes et contre-exemples certifiés",
                "license": "Apache 2.0",
                "author": "© 2025",
            },
            "algebra": {
                "precision_bits": 128,
                "escalation_factor": ESCALATION_FACTOR,
            },
            "qe": {"dnf_cap": 256, "sample_points": 500, "seed": 20240601},
            "experiments": {
                "a_values": ["1", "2", "-3", "5/7"],
                "n_range": "2..6",
                "N_range": "4..8",
                "format": "json",
                "output": "reports/report.json",
            },
            "logging": {"level": "INFO", "file": "logs/curveqe.log"},
            "paths": {
                "corpus": "corpus/",
                "signature": "corpus/signature.json",
                "reports": "reports/",
                "logs": "logs/",
            },
        }

    def get(self, key: str, default: Any = None) -> Any:
        """
        Récupère une valeur de configuration

        Args:
            key: Clé de configuration (notation pointée ex: "algebra.precision_bits")
            default: Valeur par défaut si clé non trouvée

        Returns:
            Valeur de configuration ou default
        """
        keys = key.split(".")
        value = self._config

        try:
            for k in keys:
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def get_experiment_config(self, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
        """
        Construit les paramètres d'expérience

        Args:
            overrides: Valeurs prioritaires (drapeaux CLI), None ignorés

        Returns:
            ExperimentConfig validée
        """
        experiments = self._config.get("experiments", {})
        a_values = experiments.get("a_values", ["1"])
        if isinstance(a_values, str):
            parsed_a = parse_rational_list(a_values)
        else:
            parsed_a = [Fraction(str(a)) for a in a_values]

        def as_range(value: Any) -> List[int]:
            return parse_int_range(value) if isinstance(value, str) else [int(v) for v in value]

        config = ExperimentConfig(
            seed=int(self.get("qe.seed", 20240601)),
            precision_bits=int(self.get("algebra.precision_bits", 128)),
            escalation_factor=int(self.get("algebra.escalation_factor", ESCALATION_FACTOR)),
            a_values=parsed_a,
            n_range=as_range(experiments.get("n_range", "2..6")),
            N_range=as_range(experiments.get("N_range", "4..8")),
            sample_points=int(self.get("qe.sample_points", 500)),
            dnf_cap=int(self.get("qe.dnf_cap", 256)),
            output=experiments.get("output", "reports/report.json"),
            format=experiments.get("format", "json"),
            corpus_dir=self.get("paths.corpus", "corpus/").rstrip("/"),
            signature=self.get("paths.signature", "corpus/signature.json"),
        )
        for key, value in (overrides or {}).items():
            if value is None:
                continue
            if not hasattr(config, key):
                raise ConfigError(f"Paramètre inconnu: {key}")
            setattr(config, key, value)
        return config.validate()


def _deep_update(base_dict: Dict, update_dict: Dict) -> Dict:
    """Mise à jour récursive des dictionnaires"""
    for key, value in update_dict.items():
        if key in base_dict and isinstance(base_dict[key], dict) and isinstance(value, dict):
            _deep_update(base_dict[key], value)
        else:
            base_dict[key] = value
    return base_dict
