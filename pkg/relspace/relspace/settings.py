"""
Django settings for the relspace project.

relspace has no web surface and no database: Django provides the settings
layer, logging configuration, the management-command CLI and the test runner.
"""

from pathlib import Path
import os
from dotenv import load_dotenv
load_dotenv()


# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Only used by Django internals (signing); nothing here is served.
SECRET_KEY = os.getenv("RELSPACE_SECRET_KEY", "relspace-local-only")

DEBUG = os.getenv("DEBUG", "False") == "True"

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'rest_framework',
    'relations',
    'diagrams',
    'grammar',
    'spaces',
    'inference',
    'console',
]

# No persistence: scenes, lexicons and diagrams live in JSON files.
DATABASES = {}

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Engine configuration

# Upper bound on the number of elements of any materialized space product.
RELSPACE_MAX_SPACE = int(os.getenv("RELSPACE_MAX_SPACE", "1000000"))

# Upper bound on the joint state of all tracked inhabitants (one space copy each).
RELSPACE_MAX_JOINT = int(os.getenv("RELSPACE_MAX_JOINT", "100000000"))

# hypothesis profile loaded by the property suites
RELSPACE_HYPOTHESIS_PROFILE = os.getenv("RELSPACE_HYPOTHESIS_PROFILE", "relspace")

RELSPACE_LOG_LEVEL = os.getenv("RELSPACE_LOG_LEVEL", "WARNING")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "console": {"class": "logging.StreamHandler", "formatter": "plain"},
    },
    "loggers": {
        app: {"handlers": ["console"], "level": RELSPACE_LOG_LEVEL, "propagate": False}
        for app in ("relations", "diagrams", "grammar", "spaces", "inference", "console")
    },
}
