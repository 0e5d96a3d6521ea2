from pathlib import Path

from clips.synthetic import write_ntu_tree

from experiments.commands import ExperimentCommand


class Command(ExperimentCommand):
    help = 'Write a synthetic moving-blob depth dataset as NTU-named frame directories.'

    config_overrides = {'seed': 'seed'}

    def add_arguments(self, parser):
        parser.add_argument('target', help='Directory to write the videos into')
        parser.add_argument('--per-class', type=int, default=2, help='Videos per class (default: 2)')
        parser.add_argument('--classes', type=int, default=4, help='Motion classes (default: 4)')
        parser.add_argument('--cameras', type=int, default=3, help='Camera ids to cycle through (default: 3)')
        parser.add_argument('--performers', type=int, default=4, help='Performer ids to cycle through (default: 4)')
        parser.add_argument('--seed', type=int, help='Seed of the generated motion')
        parser.add_argument('--manifest', action='store_true',
                            help='Also write manifest.csv so the tree can be scanned with --naming generic')
        parser.add_argument('--progress', action='store_true', help='Show a progress bar')

    def run(self, config, options):
        target = Path(options['target'])
        index = write_ntu_tree(
            target,
            n_per_class=options['per_class'],
            n_classes=options['classes'],
            seed=config.seed,
            cameras=options['cameras'],
            performers=options['performers'],
            show_progress=options.get('progress', False),
        )
        if options.get('manifest'):
            manifest = index[['name', 'label', 'performer', 'camera']].rename(
                columns={'name': 'path', 'performer': 'subject'}
            )
            manifest.to_csv(target / 'manifest.csv', index=False)
        self.stdout.write(self.style.SUCCESS(f"✅ Wrote {len(index)} synthetic videos under {target}"))
