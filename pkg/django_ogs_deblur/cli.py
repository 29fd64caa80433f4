"""
Console entry point.

Runs the app's management commands without a Django project: when no
settings module is configured, a minimal in-memory configuration with just
this app installed is used.

    ogs-deblur degrade --input a.pgm --kernel gaussian:7:5 --noise 0.4 --seed 42 --output g.pgm
"""

import os
import sys

import django
from django.conf import settings
from django.core.management import ManagementUtility

COMMANDS = ("degrade", "deblur", "evaluate", "sweep")


def configure():
    if not settings.configured and not os.environ.get("DJANGO_SETTINGS_MODULE"):
        settings.configure(
            INSTALLED_APPS=["django_ogs_deblur"],
            LOGGING_CONFIG=None,
        )
    django.setup()


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    configure()
    if argv and argv[0] not in COMMANDS and argv[0] not in ("help", "-h", "--help"):
        sys.stderr.write(
            "Unknown command: %r\nAvailable commands: %s\n" % (argv[0], ", ".join(COMMANDS))
        )
        return 1
    ManagementUtility(["ogs-deblur"] + argv).execute()
    return 0


if __name__ == "__main__":
    sys.exit(main())
