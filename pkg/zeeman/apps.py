from django.apps import AppConfig


class ZeemanConfig(AppConfig):
    name = 'zeeman'
