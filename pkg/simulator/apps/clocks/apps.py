from django.apps import AppConfig


class ClocksConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.clocks'
    verbose_name = 'Gravitationally Coupled Clocks'
