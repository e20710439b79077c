"""
Production settings for the gravclock simulator.

Meant for long batch runs (figure regeneration, Monte-Carlo campaigns)
where only warnings and failures should reach the log.
"""

import os

from .base import *

DEBUG = False

SWEEP_WORKERS = int(os.environ.get('GRAVCLOCK_WORKERS', os.cpu_count() or 1))

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
}
