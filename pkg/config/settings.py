"""
Django settings for the hfavg project.

The project has no web surface and no database; Django provides settings,
caching, logging, the management-command CLI and the test runner.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.0/ref/settings/
"""

from pathlib import Path
import os

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.environ.get('SECRET_KEY', 'hfavg-insecure-local-key')

DEBUG = os.environ.get('DEBUG', 'False').lower() in ('true', '1', 'yes')

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    # Third-party
    'rest_framework',

    # Local
    'angular',
    'species',
    'zeeman',
    'quadrupole',
    'averaging',
    'fieldpoint',
    'cli',
]

# No ORM models anywhere in the project
DATABASES = {}

# REST Framework (serializers only; there are no views)
REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
    'STRICT_JSON': True,
    'COERCE_DECIMAL_TO_STRING': False,
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
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': os.environ.get('DJANGO_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
        **{
            app: {
                'handlers': ['console'],
                'level': os.environ.get('HFAVG_LOG_LEVEL', 'WARNING'),
                'propagate': False,
            }
            for app in ('angular', 'species', 'zeeman', 'quadrupole', 'averaging', 'fieldpoint', 'cli')
        },
    },
}

# In-process memo table for Wigner symbols and B-independent operator matrices
CACHES = {
    'default': {
        'BACKEND': 'django.core.cache.backends.locmem.LocMemCache',
        'LOCATION': 'hfavg',
        'KEY_PREFIX': 'hfavg',
        'TIMEOUT': None,  # Values are pure functions of their key
        'OPTIONS': {
            'MAX_ENTRIES': 200000,
        },
    }
}

# Calculation defaults
HFAVG = {
    'SPECIES_PATH': os.environ.get('HFAVG_SPECIES_PATH') or None,
    'DEFAULT_LEVEL': 'lu176/3D1',
    'DEFAULT_SCHEME': 'lu176_m0',
    # A (V/m^2), epsilon, alpha (rad), beta (rad)
    'DEFAULT_GEOMETRY': (1.0e6, 0.0, 0.0, 0.0),
    # lo (G), hi (G), steps
    'B_RANGE': (0.0, 1.0, 11),
    'FIP_SEARCH_RANGE': (1.0, 1.0e4),
    'FIP_SCAN_STEPS': 32,
    'FIP_SLOPE_TOLERANCE': 1.0e-3,  # Hz/G
    'FIP_BRACKET_WIDTH': 1.0e-2,  # G
    'FIP_MAX_STEP': 8.0,  # G
    'MIN_STEP_GAUSS': 1.0e-3,
    'RELATIVE_STEP': 1.0e-3,
    'SLOPE_PROBE_GAUSS': 1.0e-3,
    'THEOREM_TOLERANCE': 1.0e-9,
    'GEOMETRY_SEED': 20140101,
    'GEOMETRY_SAMPLES': 10,
    'VERSION': '1.0.0',
}
