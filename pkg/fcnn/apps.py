from django.apps import AppConfig


class FcnnConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'fcnn'
    verbose_name = '3D fully convolutional network engine'
