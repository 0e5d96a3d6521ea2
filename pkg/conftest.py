import os

import django


def pytest_configure(config):
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'depthHar.settings')
    os.environ.setdefault('HAR_LOG_FILE', os.devnull)
    django.setup()
