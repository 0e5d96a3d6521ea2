from fcnn.model import build

from experiments.commands import ExperimentCommand
from experiments.runs import train_model


class Command(ExperimentCommand):
    help = 'Train the 3D fully convolutional network from scratch on the train side of a split.'

    config_overrides = {
        **ExperimentCommand.config_overrides,
        'protocol': 'protocol',
        'dataset': 'dataset',
        'classes': 'n_classes',
        'epochs': 'epochs',
    }

    def add_command_arguments(self, parser):
        parser.add_argument('--protocol', help='Split protocol file (default: train on every sample)')
        parser.add_argument('--dataset', help='Dataset preset for the class count (ntu, nwucla, uwa3dii)')
        parser.add_argument('--classes', type=int, help='Number of action classes')
        parser.add_argument('--epochs', type=int, help='Training epochs (default: 50)')
        parser.add_argument('--progress', action='store_true', help='Show a progress bar per epoch')

    def run(self, config, options):
        model = build(config.n_classes, config.seed, config.model_spec())
        self.stdout.write(f"Training {model.parameter_count()} parameters for {config.epochs} epochs...")

        result = train_model(model, config, show_progress=options.get('progress', False))

        final = result.history.iloc[-1]
        self.stdout.write(self.style.SUCCESS(
            f"✅ Trained {len(result.history)} epochs: train_acc {final['train_acc']:.4f}, "
            f"val_acc {final['val_acc']:.4f}. Last checkpoint: {result.last_checkpoint}"
        ))
