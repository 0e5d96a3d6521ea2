from pathlib import Path

from clips.ingestion.service import DatasetReportService

from experiments.commands import ExperimentCommand
from experiments.exceptions import ConfigError

NTU_LENGTH_RANGE = (26, 300)


class Command(ExperimentCommand):
    help = 'Scan a dataset root and write its index, per-class/subject/camera counts and length histogram.'

    config_overrides = {**ExperimentCommand.config_overrides, 'dataset': 'dataset'}

    def add_command_arguments(self, parser):
        parser.add_argument('--dataset', help='Dataset name recorded in the index (ntu, nwucla, uwa3dii)')

    def run(self, config, options):
        if config.dataset_root is None:
            raise ConfigError("scan needs a dataset root (--root)")
        self.stdout.write(f"Scanning {config.dataset_root}...")
        report = DatasetReportService(config.dataset_root, config.naming, config.dataset).run(config.out_dir)

        self.stdout.write(self.style.SUCCESS(
            f"✅ Found {report['samples']} samples in {report['classes']} classes "
            f"(lengths {report['min_length']}-{report['max_length']} frames). Report in {config.out_dir}"
        ))

        low, high = NTU_LENGTH_RANGE
        if config.naming == 'ntu' and report['samples'] and (report['min_length'] < low or report['max_length'] > high):
            self.stdout.write(self.style.WARNING(
                f"Video lengths fall outside the {low}-{high} frames expected for NTU RGB+D."
            ))

        if report['rejects']:
            rejects = Path(config.out_dir) / 'rejects.txt'
            self.stderr.write(f"❌ {report['rejects']} entries were rejected (see {rejects}):")
            for line in rejects.read_text(encoding='utf-8').splitlines()[:5]:
                self.stderr.write(f" - {line}")
