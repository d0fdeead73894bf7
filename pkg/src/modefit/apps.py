from django.apps import AppConfig


class ModefitConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "src.modefit"
