"""Action class names and per-dataset class counts."""
from typing import Optional, Sequence

DATASET_CLASSES = {
    'ntu': 60,
    'nwucla': 10,
    'uwa3dii': 30,
}

NTU_ACTIONS = (
    'drink water', 'eat meal', 'brush teeth', 'brush hair', 'drop', 'pick up', 'throw',
    'sit down', 'stand up', 'clapping', 'reading', 'writing', 'tear up paper',
    'put on jacket', 'take off jacket', 'put on a shoe', 'take off a shoe',
    'put on glasses', 'take off glasses', 'put on a hat/cap', 'take off a hat/cap',
    'cheer up', 'hand waving', 'kicking something', 'reach into pocket',
    'hopping', 'jump up', 'phone call', 'play with phone/tablet', 'type on a keyboard',
    'point to something', 'taking a selfie', 'check time (from watch)', 'rub two hands',
    'nod head/bow', 'shake head', 'wipe face', 'salute', 'put palms together',
    'cross hands in front', 'sneeze/cough', 'staggering', 'falling down', 'headache',
    'chest pain', 'back pain', 'neck pain', 'nausea/vomiting', 'fan self',
    'punch/slap', 'kicking', 'pushing', 'pat on back', 'point finger', 'hugging',
    'giving object', 'touch pocket', 'shaking hands', 'walking towards', 'walking apart',
)


def class_names(dataset: Optional[str], n_classes: int) -> Optional[Sequence[str]]:
    """Bundled names when they match ``n_classes``, otherwise None."""
    if dataset == 'ntu' and n_classes == len(NTU_ACTIONS):
        return NTU_ACTIONS
    return None


def class_label(index: int, names: Optional[Sequence[str]] = None) -> str:
    if names is not None and 0 <= index < len(names):
        return names[index]
    return str(index)
