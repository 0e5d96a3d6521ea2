import math

from clips.ingestion.service import scan_dataset
from clips.synthetic import synthetic_dataset
from fcnn import checkpoint
from fcnn.model import build

from experiments.benchmark import LATENCY_MODES, benchmark_latency
from experiments.commands import ExperimentCommand
from experiments.reports import write_bench
from experiments.runs import clip_dataset


class Command(ExperimentCommand):
    help = 'Measure per-clip inference latency and write bench.csv.'

    config_overrides = {
        **ExperimentCommand.config_overrides,
        'checkpoint': 'checkpoint',
        'dataset': 'dataset',
        'classes': 'n_classes',
        'clips': 'bench_clips',
        'repetitions': 'bench_repetitions',
        'warmup': 'bench_warmup',
    }

    def add_command_arguments(self, parser):
        parser.add_argument('--checkpoint', help='Checkpoint to time (default: a freshly initialized network)')
        parser.add_argument('--dataset', help='Dataset preset for the class count (ntu, nwucla, uwa3dii)')
        parser.add_argument('--classes', type=int, help='Class count of the network (checked against --checkpoint)')
        parser.add_argument('--mode', choices=LATENCY_MODES + ('both',), default='both',
                            help='Time the forward pass, loading plus forward, or both (default)')
        parser.add_argument('--clips', type=int, help='Clips to time (default: 10)')
        parser.add_argument('--repetitions', type=int, help='Timed passes over the clips (default: 3)')
        parser.add_argument('--warmup', type=int, help='Untimed passes before measuring (default: 3)')

    def _dataset(self, config):
        if config.dataset_root is not None:
            index = scan_dataset(config.dataset_root, config.naming, config.dataset).index
            return clip_dataset(index.head(config.bench_clips), config)
        self.stdout.write("No dataset root given; timing synthetic moving-blob clips.")
        return synthetic_dataset(math.ceil(config.bench_clips / 4), 4, config.seed, prefix='bench').subset(
            slice(0, config.bench_clips)
        )

    def run(self, config, options):
        if config.checkpoint is not None:
            model = checkpoint.load(config.checkpoint, expected_classes=config.n_classes)
        else:
            model = build(config.n_classes, config.seed)

        dataset = self._dataset(config)
        positions = list(range(len(dataset)))
        mode = options.get('mode', 'both')
        modes = LATENCY_MODES if mode == 'both' else (mode,)

        reports = []
        if 'forward' in modes:
            clips = [dataset.load(position, 'eval').frames for position in positions]
            reports.append(benchmark_latency(model, clips, config.bench_repetitions, config.bench_warmup))
        if 'pipeline' in modes:
            reports.append(benchmark_latency(
                model, positions, config.bench_repetitions, config.bench_warmup,
                load=lambda position: dataset.load(position, 'eval').frames,
            ))

        path = write_bench(reports, config.out_dir)
        for report in reports:
            self.stdout.write(
                f"{report.mode}: mean {report.mean_s:.4f}s, p50 {report.p50_s:.4f}s, p95 {report.p95_s:.4f}s per clip"
            )
        self.stdout.write(self.style.SUCCESS(f"✅ Timed {len(positions)} clips. Results in {path}"))
