"""
Django settings for the RRAM memory compiler.

The compiler runs mainly through management commands (generate, simulate,
characterize, calibrate); a small stateless JSON API exposes generation,
area estimation and characterization to other tools.

Features:
- Netlist generation for (M, N, B) RRAM instances
- Behavioral simulation with VCD waveforms
- Corner/frequency/size characterization sweeps
- Profile calibration
- Stateless operation (no database use)

For more information on this file, see
https://docs.djangoproject.com/en/4.2/topics/settings/
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.getenv('SECRET_KEY', 'django-insecure-rram-compiler-change-in-production')

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = os.getenv('DEBUG', 'True').lower() == 'true'

ALLOWED_HOSTS = os.getenv('ALLOWED_HOSTS', 'localhost,127.0.0.1').split(',')

# Application definition
INSTALLED_APPS = [
    'django.contrib.auth',
    'django.contrib.contenttypes',

    # Third party apps
    'rest_framework',
    'corsheaders',

    # Local apps
    'compiler_api',
]

MIDDLEWARE = [
    'corsheaders.middleware.CorsMiddleware',
    'django.middleware.security.SecurityMiddleware',
    'django.middleware.common.CommonMiddleware',
]

ROOT_URLCONF = 'rram_compiler.urls'

TEMPLATES = []

WSGI_APPLICATION = 'rram_compiler.wsgi.application'

# Database - not used for main functionality; Django's test runner expects one
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = True
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Django REST Framework settings
REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'DEFAULT_PARSER_CLASSES': [
        'rest_framework.parsers.JSONParser',
    ],
    'DEFAULT_PERMISSION_CLASSES': [
        'rest_framework.permissions.AllowAny',
    ],
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'UNAUTHENTICATED_USER': None,
}

# CORS settings for open access
CORS_ALLOWED_ORIGINS = os.getenv(
    'CORS_ALLOWED_ORIGINS',
    'http://localhost:3000,http://127.0.0.1:3000,http://localhost:8000,http://127.0.0.1:8000'
).split(',')

CORS_ALLOW_METHODS = [
    'GET',
    'OPTIONS',
    'POST',
]

# RRAM compiler settings
RRAM_PROFILE_PATH = Path(os.getenv('RRAM_PROFILE_PATH', BASE_DIR / 'profiles' / 'default_profile.json'))
RRAM_OUTPUT_DIR = Path(os.getenv('RRAM_OUTPUT_DIR', 'build'))

# Largest characterization request the API accepts (sizes x clocks x corners)
RRAM_API_MAX_SWEEP_CELLS = int(os.getenv('RRAM_API_MAX_SWEEP_CELLS', '64'))

# Logging configuration
RRAM_LOG_LEVEL = os.getenv('RRAM_LOG_LEVEL', 'INFO').upper()
RRAM_LOG_FILE = os.getenv('RRAM_LOG_FILE', '')

_log_handlers = ['console'] + (['file'] if RRAM_LOG_FILE else [])

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'level': RRAM_LOG_LEVEL,
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'root': {
        'handlers': _log_handlers,
        'level': 'WARNING',
    },
    'loggers': {
        'django': {
            'handlers': _log_handlers,
            'level': 'INFO',
            'propagate': False,
        },
        'compiler_modules': {
            'handlers': _log_handlers,
            'level': RRAM_LOG_LEVEL,
            'propagate': False,
        },
        'compiler_api': {
            'handlers': _log_handlers,
            'level': RRAM_LOG_LEVEL,
            'propagate': False,
        },
    },
}

if RRAM_LOG_FILE:
    LOGGING['handlers']['file'] = {
        'level': RRAM_LOG_LEVEL,
        'class': 'logging.FileHandler',
        'filename': RRAM_LOG_FILE,
        'formatter': 'verbose',
    }

# Security settings for production
if not DEBUG:
    SECURE_BROWSER_XSS_FILTER = True
    SECURE_CONTENT_TYPE_NOSNIFF = True
    SECURE_HSTS_INCLUDE_SUBDOMAINS = True
    SECURE_HSTS_SECONDS = 31536000
    SECURE_SSL_REDIRECT = True
