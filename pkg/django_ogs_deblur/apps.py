from django.apps import AppConfig


class DjangoOgsDeblurConfig(AppConfig):
    name = "django_ogs_deblur"
    verbose_name = "OGS-TV Lp image deblurring"
