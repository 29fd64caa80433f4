SECRET_KEY = "ogs-deblur-tests"

INSTALLED_APPS = [
    "django_ogs_deblur",
]

DATABASES = {}

USE_TZ = True
