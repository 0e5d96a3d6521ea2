import numpy as np

from clips.videos import load_clip_file
from fcnn import checkpoint

from experiments.classes import class_label, class_names
from experiments.commands import ExperimentCommand
from experiments.exceptions import ConfigError


class Command(ExperimentCommand):
    help = 'Print the most probable action classes of one clip.'

    config_overrides = {
        **ExperimentCommand.config_overrides,
        'checkpoint': 'checkpoint',
        'dataset': 'dataset',
        'classes': 'n_classes',
    }

    def add_command_arguments(self, parser):
        parser.add_argument('clip', help='Frame directory, raw L×H×W .npy video or prepared 64×64×30 .npy clip')
        parser.add_argument('--checkpoint', help='Trained checkpoint')
        parser.add_argument('--dataset', help='Dataset preset for class names (ntu, nwucla, uwa3dii)')
        parser.add_argument('--classes', type=int, help='Class count the checkpoint must have (default: dataset preset)')
        parser.add_argument('--top', type=int, default=5, help='Classes to print (default: 5)')

    def run(self, config, options):
        if config.checkpoint is None:
            raise ConfigError("predict needs a checkpoint (--checkpoint)")
        model = checkpoint.load(config.checkpoint, expected_classes=config.n_classes)
        clip = load_clip_file(options['clip'], config.max_depth_mm)

        probabilities = model.predict(clip[None])[0]
        names = class_names(config.dataset, model.n_classes)
        ranked = np.argsort(-probabilities, kind='stable')[:max(1, options.get('top', 5))]
        for rank, label in enumerate(ranked, start=1):
            self.stdout.write(f"{rank}. {class_label(int(label), names)}\t{probabilities[label]:.6f}")
        self.stdout.write(self.style.SUCCESS(f"✅ Predicted {class_label(int(ranked[0]), names)}"))
