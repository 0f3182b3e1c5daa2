"""
Django settings for breakdown_lab project.

Generated by 'django-admin startproject' using Django 5.2.8.

For more information on this file, see
https://docs.djangoproject.com/en/5.2/topics/settings/

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# Command-line only project; the key just satisfies Django's startup checks.
SECRET_KEY = os.environ.get(
    "BREAKDOWN_LAB_SECRET_KEY",
    "django-insecure-breakdown-lab-local-only",
)

DEBUG = False

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    "completion",
]

TEMPLATES = [
    {
        "BACKEND": "django.template.backends.django.DjangoTemplates",
        "DIRS": [],
        "APP_DIRS": True,
        "OPTIONS": {
            "autoescape": False,
        },
    },
]


# Database
# https://docs.djangoproject.com/en/5.2/ref/settings/#databases

DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": os.environ.get("BREAKDOWN_LAB_DB", BASE_DIR / "db.sqlite3"),
    }
}


# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True


# Default primary key field type
# https://docs.djangoproject.com/en/5.2/ref/settings/#default-auto-field

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"


# Logging: reports go to stdout, diagnostics to stderr
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {
            "format": "{levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "plain",
        },
    },
    "loggers": {
        "completion": {
            "handlers": ["console"],
            "level": os.environ.get("BREAKDOWN_LAB_LOG_LEVEL", "WARNING"),
            "propagate": False,
        },
    },
}


# Quadrature
QUADRATURE_ABS_TOL = 1e-10
QUADRATURE_REL_TOL = 1e-10
QUADRATURE_TAIL_MASS = 1e-12  # integrate up to the 1 - tail quantile
QUADRATURE_SUBDIVISION_LIMIT = 200

# Moment engine
NEAR_DEGENERATE_Q = 1.0 - 1e-12
VARIANCE_REL_SLACK = 1e-9

# Simulation
SIMULATION_WORKERS = int(os.environ.get("BREAKDOWN_LAB_WORKERS", "1"))
SIMULATION_DEFAULT_N = 100_000
SIMULATION_DEFAULT_SEED = 0
SIMULATION_MAX_ATTEMPTS = 1_000_000
SIMULATION_HISTOGRAM_BINS = 10

# Validation
VALIDATION_Z_THRESHOLD = 5.0
