"""
Base settings for the SGML solver.
"""

from pathlib import Path

from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent.parent

DEBUG = config("DEBUG", default=False, cast=bool)

# Solver defaults (overridden by command-line flags)
SGML_NR = config("SGML_NR", default=2, cast=int)
SGML_TOL = config("SGML_TOL", default=1e-12, cast=float)
SGML_MAX_CYCLES = config("SGML_MAX_CYCLES", default=50, cast=int)
SGML_SAFETY = config("SGML_SAFETY", default=0.9, cast=float)
SGML_STAGNATION_CYCLES = config("SGML_STAGNATION_CYCLES", default=3, cast=int)

# Kernel execution
SGML_THREADS = config("SGML_THREADS", default=1, cast=int)

# Memory guard of the dense oracle
SGML_ORACLE_MAX_UNKNOWNS = config("SGML_ORACLE_MAX_UNKNOWNS", default=40_000, cast=int)

# Output files
SGML_OUTPUT_DIR = Path(config("SGML_OUTPUT_DIR", default=str(BASE_DIR / "output")))

# Logging
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {
            "format": "{levelname} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "simple",
        },
    },
    "root": {
        "handlers": ["console"],
        "level": "WARNING",
    },
}
