#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CURVE-QE - Élimination des quantificateurs sur les courbes algébriques
© 2025 - Licence Apache 2.0

Point d'entrée principal unifié
"""

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from rich.console import Console
from rich.table import Table

# Configuration du chemin
sys.path.insert(0, str(Path(__file__).parent))

from core import __version__  # noqa: E402
from core.config import ConfigManager, parse_int_range, parse_rational_list  # noqa: E402
from core.errors import CurveQEError  # noqa: E402
from core.experiments import RUNNERS, run_eval, run_qe  # noqa: E402
from core.logger import setup_logging  # noqa: E402
from core.report import CheckResult, Report, emit_report, render_report  # noqa: E402

SUBCOMMANDS = ("qe", "eval", "galois", "example21", "combi", "theta", "claimB", "binarize", "all")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curveqe",
        description="CURVE-QE - Élimination des quantificateurs et contre-exemples certifiés",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exemples d'utilisation:
  python main.py galois                          # Certificats S4
  python main.py example21 --a 1                 # Triangle / étoile
  python main.py combi --n 2..6                  # Structures impair/pair
  python main.py theta --N 4..8 --a 1,2,-3,5/7   # Injectivité des sommes
  python main.py qe --formula parab_circ.sexp    # Élimination + trace
  python main.py eval --formula "(Parab x y)" --point "x=1;y=1"
  python main.py all --out reports/all.json      # Suite d'acceptation
        """,
    )
    parser.add_argument("command", choices=SUBCOMMANDS, help="Sous-commande")

    # Arguments d'expérience
    parser.add_argument("--seed", type=int, help="Graine des tirages aléatoires")
    parser.add_argument("--precision-bits", type=int, help="Précision initiale des boules (<= 4096)")
    parser.add_argument("--a", type=str, help="Valeurs de a0, séparées par des virgules (ex: 1,2,-3,5/7)")
    parser.add_argument("--n", type=str, help="Plage de n (ex: 2..6)")
    parser.add_argument("--N", dest="N_range", type=str, help="Plage de N (ex: 4..8)")

    # Entrées
    parser.add_argument("--formula", type=str, help="Fichier ou texte de formule (qe, eval)")
    parser.add_argument("--signature", type=str, help="Fichier de signature JSON")
    parser.add_argument("--point", type=str, help="Point d'évaluation: x=1/2;y=root(z^2-2, 1)")

    # Sortie
    parser.add_argument("--out", type=str, help="Fichier de rapport")
    parser.add_argument("--format", choices=["json", "markdown"], help="Format du rapport")
    parser.add_argument("--json", action="store_true", help="Rapport JSON sur la sortie standard")
    parser.add_argument("--config", type=str, default="config.json", help="Fichier de configuration")
    parser.add_argument("--log-level", type=str, help="Niveau de log (DEBUG, INFO, ...)")
    return parser


def overrides_from_args(args: argparse.Namespace) -> Dict[str, Any]:
    """Drapeaux CLI prioritaires sur config.json"""
    return {
        "seed": args.seed,
        "precision_bits": args.precision_bits,
        "a_values": parse_rational_list(args.a) if args.a else None,
        "n_range": parse_int_range(args.n) if args.n else None,
        "N_range": parse_int_range(args.N_range) if args.N_range else None,
        "output": args.out,
        "format": "json" if args.json else args.format,
        "signature": args.signature,
    }


def print_summary(report: Report, console: Console) -> None:
    """Tableau récapitulatif des vérifications"""
    table = Table(title=f"curveqe {__version__} - {report.command}")
    table.add_column("Vérification")
    table.add_column("Statut")
    table.add_column("Durée (ms)", justify="right")
    for check in report.checks:
        style = "green" if check.passed else "red"
        table.add_row(check.name, f"[{style}]{check.status}[/{style}]", f"{check.duration_ms:.1f}")
    console.print(table)
    for note in report.notes:
        console.print(f"[dim]- {note}[/dim]")


def dispatch(command: str, config, args: argparse.Namespace) -> Report:
    if command == "qe":
        return run_qe(config, args.formula, args.signature)
    if command == "eval":
        if not args.formula or not args.point:
            raise CurveQEError("eval exige --formula et --point")
        return run_eval(config, args.formula, args.point, args.signature)
    return RUNNERS[command](config)


def main(argv: Optional[List[str]] = None) -> int:
    """Point d'entrée principal"""
    args = build_parser().parse_args(argv)
    manager = ConfigManager(args.config)
    logger = setup_logging(
        args.log_level or manager.get("logging.level", "INFO"),
        manager.get("logging.file"),
    )
    console = Console(stderr=True)
    logger.info("Démarrage CURVE-QE", {"command": args.command, "version": __version__})

    config = None
    try:
        config = manager.get_experiment_config(overrides_from_args(args))
        report = dispatch(args.command, config, args)
    except CurveQEError as e:
        logger.log_error_with_context(e, {"command": args.command})
        report = Report(args.command, config.to_dict() if config is not None else {})
        report.add(CheckResult.from_error(args.command, e))
    except KeyboardInterrupt:
        logger.warning("Arrêt demandé par l'utilisateur")
        return 130

    fmt = config.format if config is not None else "json"
    output = args.out or (config.output if config is not None else None)
    try:
        emit_report(report, output, fmt)
    except OSError as e:
        logger.log_error_with_context(e, {"path": output})
        return 2

    if args.json:
        sys.stdout.write(render_report(report, "json"))
    print_summary(report, console)
    logger.info("Fin d'exécution", {"status": report.status, "checks": len(report.checks)})
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
