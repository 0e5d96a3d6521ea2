from fcnn import checkpoint

from experiments.classes import class_names
from experiments.commands import ExperimentCommand
from experiments.exceptions import ConfigError
from experiments.metrics import evaluate
from experiments.reports import write_evaluation
from experiments.runs import clip_dataset, load_split


class Command(ExperimentCommand):
    help = 'Evaluate a checkpoint on the test side of a split and write the evaluation CSVs.'

    config_overrides = {
        **ExperimentCommand.config_overrides,
        'checkpoint': 'checkpoint',
        'protocol': 'protocol',
        'dataset': 'dataset',
        'classes': 'n_classes',
    }

    def add_command_arguments(self, parser):
        parser.add_argument('--checkpoint', help='Checkpoint to evaluate')
        parser.add_argument('--protocol', help='Split protocol file (default: evaluate every sample)')
        parser.add_argument('--dataset', help='Dataset preset for class count and names (ntu, nwucla, uwa3dii)')
        parser.add_argument('--classes', type=int, help='Number of action classes')
        parser.add_argument('--top', type=int, default=10, help='Rows of the top/confused table (default: 10)')

    def run(self, config, options):
        if config.checkpoint is None:
            raise ConfigError("eval needs a checkpoint (--checkpoint)")
        model = checkpoint.load(config.checkpoint, expected_classes=config.n_classes)

        split = load_split(config)
        table = split.test if config.protocol is not None else split.train
        self.stdout.write(f"Evaluating {len(table)} clips...")
        result = evaluate(model, clip_dataset(table, config), config.batch_size, config.prefetch)

        out_dir = write_evaluation(
            result,
            config.out_dir,
            names=class_names(config.dataset, config.n_classes),
            checkpoint=str(config.checkpoint),
            k=options.get('top', 10),
        )
        self.stdout.write(self.style.SUCCESS(
            f"✅ Accuracy {100 * result.accuracy:.2f}% over {result.confusion.total} clips. Reports in {out_dir}"
        ))
