from django.apps import AppConfig


class SicaAppConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "src.sica"
    label = "sica"
