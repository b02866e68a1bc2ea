from django.apps import AppConfig


class FieldpointConfig(AppConfig):
    name = 'fieldpoint'
