import argparse
import logging
import re
import sys
from typing import List, Optional

from . import __version__
from .cli.commands import get_command_registry
from .core.exceptions import CCBallError, InvalidArgument
from .core.logging import setup_logging

logger = logging.getLogger("ccball.cli")

INTERNAL_ERROR_EXIT = 3
# Liste de nombres commençant par un signe moins, ex. -1,-1,1,1
NEGATIVE_LIST = re.compile(r"^-[\d.][\d.eE+\-]*(,\s*[\d.eE+\-]+)*$")


class CommandLineParser(argparse.ArgumentParser):
    """Parser dont les erreurs d'usage deviennent des InvalidArgument (sortie 2, ligne d'erreur)."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise InvalidArgument(f"{self.prog}: {message}")


def create_main_parser() -> argparse.ArgumentParser:
    """Crée le parser principal avec toutes les commandes."""
    parser = CommandLineParser(
        prog='ccball',
        description="ccball - Carnot-Caratheodory balls on model hypersurfaces Im z2 = P(z1)",
        formatter_class=argparse.RawDescriptionHelpFormatter
    )

    # Options globales
    parser.add_argument('--verbose', '-v', action='store_true',
                        help='Show INFO logs on the diagnostic stream')
    parser.add_argument('--log-dir', help='Log directory (default: $CCBALL_HOME/logs)')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')

    subparsers = parser.add_subparsers(dest='command', help='Available commands')
    for command in get_command_registry().list_commands():
        cmd_parser = subparsers.add_parser(command.name, help=command.description,
                                           description=command.description)
        command.add_arguments(cmd_parser)
        cmd_parser.set_defaults(command_obj=command)

    return parser


def join_negative_values(argv: List[str]) -> List[str]:
    """Colle `--opt -1,2` en `--opt=-1,2` pour qu'argparse ne lise pas la valeur comme une option."""
    joined: List[str] = []
    for token in argv:
        previous = joined[-1] if joined else ""
        if previous.startswith("--") and "=" not in previous and NEGATIVE_LIST.match(token):
            joined[-1] = f"{previous}={token}"
        else:
            joined.append(token)
    return joined


def format_error(error: CCBallError) -> str:
    """Ligne d'erreur unique, analysable par machine."""
    message = str(error).replace('\\', '\\\\').replace('"', '\\"').replace('\n', ' ')
    return f'error kind={error.kind} exit={error.exit_code} message="{message}"'


def run_command_mode(args: argparse.Namespace) -> int:
    """Exécute une sous-commande et traduit les erreurs en codes de sortie."""
    setup_logging(log_dir=args.log_dir, verbose=args.verbose)
    logger.info(f"Running command '{args.command}'")
    try:
        return args.command_obj.execute(args)
    except CCBallError as e:
        logger.warning(f"{args.command} failed: {e}")
        print(format_error(e), file=sys.stderr)
        return e.exit_code
    except KeyboardInterrupt:
        print('error kind=Interrupted exit=130 message="interrupted"', file=sys.stderr)
        return 130
    except Exception as e:
        logger.exception("Command execution failed")
        message = str(e).replace('"', '\\"').replace('\n', ' ')
        print(f'error kind={type(e).__name__} exit={INTERNAL_ERROR_EXIT} message="{message}"', file=sys.stderr)
        return INTERNAL_ERROR_EXIT


def main(argv: Optional[List[str]] = None) -> int:
    """Point d'entrée principal."""
    parser = create_main_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(join_negative_values(list(argv)))
    except InvalidArgument as e:
        print(format_error(e), file=sys.stderr)
        return e.exit_code
    if args.command is None:
        parser.print_help(sys.stderr)
        return 2
    return run_command_mode(args)


if __name__ == "__main__":
    sys.exit(main())
