"""Common options and error handling for the experiment management commands."""
import logging

from django.core.management.base import BaseCommand, CommandError

from .config import NAMINGS, RunConfig, load_run_config
from .exceptions import exit_code_for

logger = logging.getLogger(__name__)


class ExperimentCommand(BaseCommand):
    """Adds ``--config`` plus the flags shared by every workflow and maps failures to exit codes.

    Subclasses implement ``run(config, options)``; ``config_overrides`` maps
    option names onto ``RunConfig`` fields.
    """

    config_overrides = {
        'root': 'dataset_root',
        'naming': 'naming',
        'seed': 'seed',
        'batch_size': 'batch_size',
        'out_dir': 'out_dir',
    }

    def add_arguments(self, parser):
        parser.add_argument('--config', help='Run configuration file (key=value lines)')
        parser.add_argument('--root', help='Dataset root directory')
        parser.add_argument('--naming', choices=NAMINGS, help='Sample naming scheme of the dataset')
        parser.add_argument('--seed', type=int, help='Seed for every random stream of the run')
        parser.add_argument('--batch-size', type=int, help='Clips per batch (default: 12)')
        parser.add_argument('--out-dir', help='Directory for checkpoints and reports')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def load_config(self, options) -> RunConfig:
        overrides = {field: options.get(option) for option, field in self.config_overrides.items()}
        return load_run_config(options.get('config'), **overrides)

    def run(self, config: RunConfig, options):
        raise NotImplementedError

    def handle(self, *args, **options):
        try:
            config = self.load_config(options)
            self.run(config, options)
        except CommandError:
            raise
        except Exception as e:
            code = exit_code_for(e)
            if code is None:
                raise
            logger.error(f"{type(e).__name__}: {e}")
            raise CommandError(f"❌ {e}", returncode=code) from e
