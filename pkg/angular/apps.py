from django.apps import AppConfig


class AngularConfig(AppConfig):
    name = 'angular'
