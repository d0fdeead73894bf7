import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Nothing is served over HTTP; the key only satisfies Django's startup checks.
SECRET_KEY = os.getenv("SECRET_KEY", "eigenmode-ica-local")

DEBUG = os.getenv("DEBUG", "False").lower() in ("1", "true", "yes")

ALLOWED_HOSTS = []

# Pipeline defaults
MODES_OUTPUT_DIR = Path(os.getenv("MODES_OUTPUT_DIR", BASE_DIR.parent / "runs"))
MODES_DEFAULT_SEED = int(os.getenv("MODES_DEFAULT_SEED", "0"))
MODES_LOG_LEVEL = os.getenv("MODES_LOG_LEVEL", "INFO").upper()

# Application definition

INSTALLED_APPS = [
    "src.signals",
    "src.sica",
    "src.baseline",
    "src.becsim",
    "src.modefit",
    "src.pipeline",
    "rest_framework",
]

# The project keeps no tables: artifacts are files on disk.
DATABASES = {}

REST_FRAMEWORK = {
    "UNAUTHENTICATED_USER": None,
}

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {
            "format": "%(asctime)s %(levelname)s %(name)s: %(message)s",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "plain",
        },
    },
    "loggers": {
        "src": {
            "handlers": ["console"],
            "level": MODES_LOG_LEVEL,
            "propagate": False,
        },
    },
}

# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"
