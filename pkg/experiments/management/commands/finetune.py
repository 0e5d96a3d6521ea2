from fcnn import checkpoint
from fcnn.exceptions import CheckpointMismatchError
from fcnn.model import freeze_for_finetune, swap_head
from fcnn.seeding import substream

from experiments.commands import ExperimentCommand
from experiments.exceptions import ConfigError
from experiments.runs import train_model


class Command(ExperimentCommand):
    help = 'Fine-tune the last convolution blocks of a trained checkpoint with the same schedule.'

    config_overrides = {
        **ExperimentCommand.config_overrides,
        'checkpoint': 'checkpoint',
        'protocol': 'protocol',
        'dataset': 'dataset',
        'classes': 'n_classes',
        'epochs': 'epochs',
        'tail': 'trainable_tail',
        'swap_head': 'swap_head',
    }

    def add_command_arguments(self, parser):
        parser.add_argument('--checkpoint', help='Base checkpoint to fine-tune')
        parser.add_argument('--protocol', help='Split protocol file (default: train on every sample)')
        parser.add_argument('--dataset', help='Dataset preset for the class count (ntu, nwucla, uwa3dii)')
        parser.add_argument('--classes', type=int, help='Number of action classes of the target dataset')
        parser.add_argument('--epochs', type=int, help='Fine-tuning epochs (default: 50)')
        parser.add_argument('--tail', type=int, help='Convolution blocks left trainable (default: 3)')
        parser.add_argument(
            '--swap-head',
            action='store_true',
            default=None,
            help='Replace the classifier when the checkpoint has a different class count',
        )
        parser.add_argument('--progress', action='store_true', help='Show a progress bar per epoch')

    def run(self, config, options):
        if config.checkpoint is None:
            raise ConfigError("finetune needs a base checkpoint (--checkpoint)")
        model = checkpoint.load(config.checkpoint)

        if model.n_classes != config.n_classes:
            if not config.swap_head:
                raise CheckpointMismatchError(
                    f"checkpoint has {model.n_classes} classes but the run is configured for "
                    f"{config.n_classes}; pass --swap-head to replace the classifier"
                )
            swap_head(model, config.n_classes, substream(config.seed, 'head'))
            self.stdout.write(f"Swapped in a fresh {model.n_classes}-class head.")

        freeze_for_finetune(model, config.trainable_tail)
        self.stdout.write(f"Fine-tuning the last {config.trainable_tail} convolution blocks for {config.epochs} epochs...")

        result = train_model(model, config, show_progress=options.get('progress', False))

        final = result.history.iloc[-1]
        self.stdout.write(self.style.SUCCESS(
            f"✅ Fine-tuned {len(result.history)} epochs: train_acc {final['train_acc']:.4f}, "
            f"val_acc {final['val_acc']:.4f}. Last checkpoint: {result.last_checkpoint}"
        ))
