"""
Django settings for the depthHar project.

The project has no web surface: Django provides the app registry, the
management-command CLI (``python manage.py train ...``) and logging. Every
experiment default below can be overridden from the environment or from the
``.env`` file selected by ``DJANGO_ENV``.
"""
from pathlib import Path
import os
import environ

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Initialize environment variables
env = environ.Env(
    DEBUG=(bool, False)
)

# Determine environment
ENVIRONMENT = os.getenv("DJANGO_ENV", "development")
ENV_FILE = ".env.production" if ENVIRONMENT == "production" else ".env"
if os.path.exists(os.path.join(BASE_DIR, ENV_FILE)):
    environ.Env.read_env(os.path.join(BASE_DIR, ENV_FILE))

SECRET_KEY = env('SECRET_KEY', default='depthhar-local-cli-only')

DEBUG = env.bool('DEBUG')


# Application definition

INSTALLED_APPS = [
    'fcnn',
    'clips',
    'experiments',
]

# No ORM models: checkpoints, reports and datasets all live on the filesystem.
DATABASES = {}

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

USE_TZ = True
TIME_ZONE = 'UTC'


# Experiment defaults (precedence: CLI flags > run config file > these values)

HAR_DATASET_ROOT = env('HAR_DATASET_ROOT', default=None)
HAR_NAMING = env('HAR_NAMING', default='ntu')
HAR_OUT_DIR = env('HAR_OUT_DIR', default=str(BASE_DIR / 'runs'))
HAR_SEED = env.int('HAR_SEED', default=0)
HAR_N_CLASSES = env.int('HAR_N_CLASSES', default=None)  # None: taken from the dataset preset
HAR_BATCH_SIZE = env.int('HAR_BATCH_SIZE', default=12)
HAR_EPOCHS = env.int('HAR_EPOCHS', default=50)
HAR_DROPOUT_RATE = env.float('HAR_DROPOUT_RATE', default=0.25)
HAR_PADDING_MODE = env('HAR_PADDING_MODE', default='reflect')
HAR_WORKERS = env.int('HAR_WORKERS', default=4)
HAR_PREFETCH = env.int('HAR_PREFETCH', default=2)
HAR_MAX_DEPTH_MM = env.float('HAR_MAX_DEPTH_MM', default=4500.0)
HAR_TRAINABLE_TAIL = env.int('HAR_TRAINABLE_TAIL', default=3)
HAR_BENCH_WARMUP = env.int('HAR_BENCH_WARMUP', default=3)
HAR_BENCH_REPETITIONS = env.int('HAR_BENCH_REPETITIONS', default=3)
HAR_BENCH_CLIPS = env.int('HAR_BENCH_CLIPS', default=10)

HAR_DEFAULTS = {
    'dataset_root': HAR_DATASET_ROOT,
    'naming': HAR_NAMING,
    'out_dir': HAR_OUT_DIR,
    'seed': HAR_SEED,
    'n_classes': HAR_N_CLASSES,
    'batch_size': HAR_BATCH_SIZE,
    'epochs': HAR_EPOCHS,
    'dropout_rate': HAR_DROPOUT_RATE,
    'padding_mode': HAR_PADDING_MODE,
    'workers': HAR_WORKERS,
    'prefetch': HAR_PREFETCH,
    'max_depth_mm': HAR_MAX_DEPTH_MM,
    'trainable_tail': HAR_TRAINABLE_TAIL,
    'bench_warmup': HAR_BENCH_WARMUP,
    'bench_repetitions': HAR_BENCH_REPETITIONS,
    'bench_clips': HAR_BENCH_CLIPS,
}


# Logging

HAR_LOG_LEVEL = env('HAR_LOG_LEVEL', default='INFO')
HAR_LOG_FILE = env('HAR_LOG_FILE', default=str(BASE_DIR / 'depthhar.log'))

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'file': {
            'level': HAR_LOG_LEVEL,
            'class': 'logging.FileHandler',
            'filename': HAR_LOG_FILE,
            'formatter': 'plain',
            'delay': True,
        },
        'console': {
            'level': HAR_LOG_LEVEL,
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'fcnn': {
            'handlers': ['file', 'console'],
            'level': HAR_LOG_LEVEL,
            'propagate': True,
        },
        'clips': {
            'handlers': ['file', 'console'],
            'level': HAR_LOG_LEVEL,
            'propagate': True,
        },
        'experiments': {
            'handlers': ['file', 'console'],
            'level': HAR_LOG_LEVEL,
            'propagate': True,
        },
    },
}
