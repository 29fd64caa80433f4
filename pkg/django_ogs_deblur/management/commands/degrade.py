from django.core.management.base import CommandError

from django_ogs_deblur.degrade import NoiseSpec, degrade, salt_pepper_mask
from django_ogs_deblur.management.base import USAGE_ERROR, ImageCommand


class Command(ImageCommand):
    help = "Blurs a clean PGM image and corrupts it with salt-and-pepper noise."

    def add_arguments(self, parser):
        parser.add_argument("--input", required=True, help="clean PGM image")
        parser.add_argument(
            "--kernel",
            default="gaussian:7:5",
            help="blur kernel, gaussian:<size>:<sigma>, mean:<size> or identity",
        )
        parser.add_argument(
            "--noise", type=float, default=0.0, help="fraction of corrupted pixels"
        )
        parser.add_argument("--seed", type=int, default=0, help="noise seed")
        parser.add_argument("--output", required=True, help="degraded PGM image")

    def handle(self, *args, **options):
        clean = self.load_image(options["input"])
        kernel = self.parse_kernel(options["kernel"])
        try:
            spec = NoiseSpec(options["noise"], options["seed"])
            observed = degrade(clean, kernel, spec)
        except ValueError as exc:
            raise CommandError(str(exc), returncode=USAGE_ERROR)
        corrupted, _ = salt_pepper_mask(observed.shape, spec)
        self.save_image(options["output"], observed)
        self.stdout.write("corrupted_fraction=%.6f" % corrupted.mean())
