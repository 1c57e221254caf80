"""
Django settings for szx_project project.

The project has no HTTP surface: it hosts the szx app, its management
commands and the sqlite log of verification runs.
"""

from pathlib import Path
import os

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'django-insecure-szx-local-only')

DEBUG = False

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'szx',
]

MIDDLEWARE = []

CACHES = {
    'default': {
        'BACKEND': 'django.core.cache.backends.locmem.LocMemCache',
        'LOCATION': 'szx-catalogue',
    }
}


# Database

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Logging

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'szx': {
            'handlers': ['console'],
            'level': os.environ.get('SZX_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
    },
}


# Engine configuration

SZX = {
    'TOLERANCE_ABS': 1e-9,
    'TOLERANCE_REL': 1e-9,
    'SEED': int(os.environ.get('SZX_SEED', '0')),
    'SOUNDNESS_TRIALS': 100,
    'ASSETS_DIR': BASE_DIR / 'szx' / 'assets',
}

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'
