from django.apps import AppConfig


class SignalsConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "src.signals"
    verbose_name = "Time-series containers and cumulants"
