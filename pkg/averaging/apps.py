from django.apps import AppConfig


class AveragingConfig(AppConfig):
    name = 'averaging'
