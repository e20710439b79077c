from django.apps import AppConfig


class QubitsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.qubits'
    verbose_name = 'Two-Qubit Primitives'
