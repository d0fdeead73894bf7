from django.apps import AppConfig


class BecsimConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "src.becsim"
    verbose_name = "Condensate collective-mode simulator"
