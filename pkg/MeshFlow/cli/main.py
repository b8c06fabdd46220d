"""
Command line frontend: `meshflow <command> [options]`.

Exit codes: 0 on success, 2 when a loss diverges, 1 on any other error
(usage errors included). Messages go to stderr.
"""

import argparse
import logging
import sys
from typing import List, Sequence
from MeshFlow.core import ConfigError, DivergenceError, MeshFlowError
from .commands import Commands
from .config import RunConfig, loadConfig, schemaLines

LOGFORMAT = '%(levelname)s %(name)s: %(message)s'

class ArgumentParser(argparse.ArgumentParser):
    """argparse parser whose usage errors raise `ConfigError` instead of exiting."""

    def error(self, message: str):
        raise ConfigError(f"{self.prog}: {message}")

def globalOptions(suppress: bool) -> ArgumentParser:
    default = argparse.SUPPRESS if suppress else None
    parser = ArgumentParser(add_help=False)
    parser.add_argument('--config', default=default, help="'key = value' config file.")
    parser.add_argument('--seed', type=int, default=default, help='Run seed, overrides the config.')
    parser.add_argument(
        '--verbose', '-v', action='count', default=argparse.SUPPRESS if suppress else 0,
        help='More log output; repeat for debug records.'
    )
    parser.add_argument(
        '--print-config-schema', dest='printSchema', action='store_true',
        default=argparse.SUPPRESS if suppress else False, help='List every config key and exit.'
    )
    return parser

def buildParser() -> ArgumentParser:
    shared = globalOptions(suppress=True)
    parser = ArgumentParser(prog='meshflow', description='Mesh deformation toward point cloud or mesh targets.', parents=[globalOptions(suppress=False)])
    commands = parser.add_subparsers(dest='command', parser_class=ArgumentParser)

    sample = commands.add_parser('sample', parents=[shared], help='Sample points on a mesh surface.')
    sample.add_argument('mesh')
    sample.add_argument('--count', '-n', type=int, default=2048)
    sample.add_argument('--out', '-o', required=True)

    deform = commands.add_parser('deform', parents=[shared], help='Deform a source mesh toward a target.')
    deform.add_argument('source')
    deform.add_argument('target')
    deform.add_argument('--mode', choices=('direct', 'network'), default='direct')
    deform.add_argument('--checkpoint')
    deform.add_argument('--out', '-o', required=True)

    train = commands.add_parser('train', parents=[shared], help='Train the deformation network.')
    train.add_argument('manifest')
    train.add_argument('--out', '-o', required=True)

    evaluate = commands.add_parser('eval', parents=[shared], help='Compare two shapes.')
    evaluate.add_argument('a')
    evaluate.add_argument('b')
    evaluate.add_argument('--csv', action='store_true')

    select = commands.add_parser('select-template', parents=[shared], help='Pick the template nearest to a target.')
    select.add_argument('target')
    select.add_argument('templates')
    select.add_argument('--mode', choices=('embedding', 'chamfer'), default='embedding')
    select.add_argument('--checkpoint')
    select.add_argument('--encoder-out', dest='encoderOut')

    interp = commands.add_parser('interp', parents=[shared], help='Deform toward blends of two targets.')
    interp.add_argument('source')
    interp.add_argument('a')
    interp.add_argument('b')
    interp.add_argument('--t', dest='times', required=True, help="Comma separated weights in [0, 1].")
    interp.add_argument('--checkpoint', required=True)
    interp.add_argument('--out', '-o', required=True, help='Output folder.')

    return parser

def configureLogging(verbose: int) -> None:
    """Attach one stderr handler to the package logger."""
    level = logging.WARNING if verbose <= 0 else logging.INFO if verbose == 1 else logging.DEBUG
    root = logging.getLogger('MeshFlow')
    root.setLevel(level)
    for handler in root.handlers:
        if getattr(handler, 'meshflow', False):
            handler.setStream(sys.stderr)
            return

    handler = logging.StreamHandler(sys.stderr)
    handler.meshflow = True
    handler.setFormatter(logging.Formatter(LOGFORMAT))
    root.addHandler(handler)

def dispatch(args: argparse.Namespace, config: RunConfig) -> int:
    commands = Commands(config)
    if args.command == 'sample':
        return commands.sample(args.mesh, args.count, args.out)
    if args.command == 'deform':
        return commands.deform(args.source, args.target, args.mode, args.out, args.checkpoint)
    if args.command == 'train':
        return commands.train(args.manifest, args.out)
    if args.command == 'eval':
        return commands.evaluate(args.a, args.b, args.csv)
    if args.command == 'select-template':
        return commands.selectTemplate(args.target, args.templates, args.mode, args.checkpoint, args.encoderOut)
    if args.command == 'interp':
        return commands.interp(args.source, args.a, args.b, args.times, args.checkpoint, args.out)
    raise ConfigError("No command given; run 'meshflow --help' for the list.")

def main(argv: Sequence[str] | None = None) -> int:
    """
    Run one command line invocation.

    Args:
        argv (Sequence[str], optional): Arguments without the program name.
            Defaults to `sys.argv[1:]`.

    Returns:
        int: The process exit code.
    """
    arguments: List[str] = list(sys.argv[1:] if argv is None else argv)
    try:
        args = buildParser().parse_args(arguments)
        configureLogging(args.verbose)

        if args.printSchema:
            print('\n'.join(schemaLines()))
            return 0

        config = loadConfig(args.config) if args.config else RunConfig()
        return dispatch(args, config.withSeed(args.seed))
    except DivergenceError as e:
        print(f"meshflow: diverged: {e}", file=sys.stderr)
        return e.exitCode
    except MeshFlowError as e:
        print(f"meshflow: error: {e}", file=sys.stderr)
        return e.exitCode
    except (ValueError, OSError) as e:
        print(f"meshflow: error: {e}", file=sys.stderr)
        return 1
