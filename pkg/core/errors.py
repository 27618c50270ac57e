#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CURVE-QE - Exceptions
© 2025 - Licence Apache 2.0

Hiérarchie des erreurs levées par le banc d'essai
"""

from typing import Optional


class CurveQEError(Exception):
    """Erreur de base du projet"""


class ConfigError(CurveQEError, ValueError):
    """Configuration invalide"""


class FormulaSyntaxError(CurveQEError, ValueError):
    """Erreur de syntaxe dans une formule, avec position"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = f" (ligne {line}, colonne {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class SignatureError(CurveQEError, ValueError):
    """Symbole non déclaré ou arité incorrecte"""


class SubstitutionError(CurveQEError, ValueError):
    """Substitution impossible (variable liée)"""


class AlgebraError(CurveQEError, ValueError):
    """Précondition algébrique violée"""


class PrecisionCapError(CurveQEError, ArithmeticError):
    """La précision maximale a été atteinte sans certificat"""

    def __init__(self, message: str, bits: int):
        self.bits = bits
        super().__init__(f"{message} (précision {bits} bits)")


class SamplingError(CurveQEError):
    """Impossible de produire des points sur une courbe"""


class OracleError(CurveQEError):
    """Réponse de l'oracle géométrique incohérente"""


class UnsupportedShapeError(CurveQEError, ValueError):
    """Forme de formule hors du fragment traité"""


class DnfExplosionError(CurveQEError):
    """Forme normale disjonctive trop grande"""

    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"DNF de {size} disjonctions (limite {cap})")


class SearchRefusedError(CurveQEError):
    """Recherche exhaustive refusée (univers trop grand)"""


class CertificateError(CurveQEError):
    """Certificat rejeté"""
