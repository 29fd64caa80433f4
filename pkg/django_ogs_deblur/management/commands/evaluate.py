from django.core.management.base import CommandError

from django_ogs_deblur.management.base import USAGE_ERROR, ImageCommand
from django_ogs_deblur.metrics import quality_report
from django_ogs_deblur.settings import deblur_settings


def format_metric(value):
    return format(value, "#.6g")


class Command(ImageCommand):
    help = "Prints PSNR, global SSIM and relative error of a test image."

    def add_arguments(self, parser):
        parser.add_argument("ref", help="reference PGM image")
        parser.add_argument("test", help="PGM image to evaluate")

    def handle(self, *args, **options):
        ref = self.load_image(options["ref"])
        test = self.load_image(options["test"])
        try:
            report = quality_report(
                ref, test, deblur_settings.SSIM_K1, deblur_settings.SSIM_K2
            )
        except ValueError as exc:
            raise CommandError(str(exc), returncode=USAGE_ERROR)
        self.stdout.write("psnr=%s" % format_metric(report.psnr_db))
        self.stdout.write("ssim=%s" % format_metric(report.ssim))
        self.stdout.write("re=%s" % format_metric(report.re))
