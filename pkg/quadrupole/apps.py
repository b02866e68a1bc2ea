from django.apps import AppConfig


class QuadrupoleConfig(AppConfig):
    name = 'quadrupole'
