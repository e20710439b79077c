"""
Base class for the simulation management commands.
"""

import logging
import sys
from io import BytesIO
from pathlib import Path
from typing import Any, Dict, Optional, Union

from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ParseError
from rest_framework.parsers import JSONParser

from core.exceptions import ConfigurationError, SimulatorError
from core.provenance import run_metadata

from ..serializers import SimulationConfig, load_config
from ..services.protocol import MAX_SEED
from ..services.sweeps import SweepKind, SweepService, SweepSpec, SweepTable
from ..services.units import PhysicalConstants

logger = logging.getLogger(__name__)


def _seed(value: str) -> int:
    seed = int(value)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(value)
    return seed


class SimulationCommand(BaseCommand):
    """
    Shared flags (--config, --out, --format, --seed), config loading and
    translation of simulator errors into process exit codes.
    """
    requires_system_checks = []
    default_format = 'csv'

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)

        def usage_error(message):
            if parser.called_from_command_line:
                parser.print_usage(sys.stderr)
                parser.exit(ConfigurationError.exit_code, f"{parser.prog}: error: {message}\n")
            raise CommandError(f"Error: {message}", returncode=ConfigurationError.exit_code)

        parser.error = usage_error
        return parser

    def add_arguments(self, parser):
        parser.add_argument('--config', help='JSON config file')
        parser.add_argument('--out', help='Write the result here instead of stdout')
        parser.add_argument(
            '--format',
            choices=['csv', 'json'],
            default=self.default_format,
            help=f'Output format (default: {self.default_format})'
        )
        parser.add_argument('--seed', type=_seed, help='Unsigned 64-bit RNG seed')

    def handle(self, *args, **options):
        try:
            config = self.read_config(options.get('config'))
            result = self.run(config, options)
        except SimulatorError as exc:
            logger.error(f"{self.__module__.rsplit('.', 1)[-1]} failed: {exc.detail}")
            raise CommandError(str(exc.detail), returncode=exc.exit_code) from exc
        self.write_result(result, options.get('out'))

    def run(self, config: SimulationConfig, options: Dict[str, Any]) -> Union[str, bytes]:
        raise NotImplementedError('Subclasses must implement run().')

    def read_config(self, path: Optional[str]) -> SimulationConfig:
        if not path:
            return SimulationConfig(constants=PhysicalConstants.from_settings())
        try:
            raw = Path(path).read_bytes()
        except OSError as exc:
            raise ConfigurationError(f"Cannot read config file {path}: {exc.strerror}.") from exc
        try:
            payload = JSONParser().parse(BytesIO(raw))
        except ParseError as exc:
            raise ConfigurationError(f"Config file {path} is not valid JSON: {exc.detail}") from exc
        return load_config(payload)

    def write_result(self, result: Union[str, bytes], out: Optional[str]) -> None:
        text = result.decode('utf-8') if isinstance(result, bytes) else result
        if out:
            try:
                with open(out, 'w', encoding='utf-8', newline='\n') as handle:
                    handle.write(text)
            except OSError as exc:
                raise CommandError(f"Cannot write {out}: {exc.strerror}.", returncode=ConfigurationError.exit_code) from exc
            logger.info(f"Wrote {len(text)} characters to {out}")
        else:
            self.stdout.write(text, ending='')


class SweepCommand(SimulationCommand):
    """Runs one figure sweep; subclasses pick the kind."""
    kind: SweepKind

    def run(self, config: SimulationConfig, options: Dict[str, Any]) -> Union[str, bytes]:
        params = config.params.as_dict() if config.params else None
        spec = SweepSpec.from_config(self.kind, config.sweep, params)
        meta = run_metadata({'sweep': spec.as_dict()}, seed=options.get('seed'))
        table = self.sweep(SweepService(), spec, meta)
        return table.to_json() if options['format'] == 'json' else table.to_csv()

    def sweep(self, service: SweepService, spec: SweepSpec, meta: Dict[str, Any]) -> SweepTable:
        return service.run(spec, meta)
