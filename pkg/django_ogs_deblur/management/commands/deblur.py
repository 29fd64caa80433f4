import csv

from django.core.management.base import CommandError

from django_ogs_deblur.management.base import (
    RUNTIME_ERROR,
    USAGE_ERROR,
    ImageCommand,
    add_solver_arguments,
    build_config,
    resolve_params,
)
from django_ogs_deblur.metrics import quality_report
from django_ogs_deblur.reports import RecordWriter, RunRecord, format_value
from django_ogs_deblur.settings import deblur_settings
from django_ogs_deblur.solvers import SolverError, solve


class Command(ImageCommand):
    help = "Restores a blurred, salt-and-pepper corrupted PGM image."

    def add_arguments(self, parser):
        parser.add_argument("--input", required=True, help="observed PGM image")
        parser.add_argument("--kernel", default="gaussian:7:5", help="blur kernel spec")
        parser.add_argument("--output", required=True, help="restored PGM image")
        parser.add_argument("--p", type=float, default=None, help="fidelity exponent")
        parser.add_argument("--mu", type=float, default=None, help="fidelity weight")
        parser.add_argument(
            "--group-size", type=int, default=None, dest="group_size", help="K"
        )
        parser.add_argument(
            "--noise",
            type=float,
            default=None,
            help="noise level used to pick default p and mu",
        )
        parser.add_argument(
            "--seed", type=int, default=0, help="noise seed, recorded in the run record"
        )
        parser.add_argument("--ref", default=None, help="clean reference PGM image")
        parser.add_argument(
            "--metrics-csv",
            default=None,
            dest="metrics_csv",
            help="append a run record to this CSV (requires --ref and --noise)",
        )
        parser.add_argument(
            "--history-csv",
            default=None,
            dest="history_csv",
            help="write the per-iteration relative change (and PSNR with --ref)",
        )
        add_solver_arguments(parser)

    def handle(self, *args, **options):
        observed = self.load_image(options["input"])
        kernel = self.parse_kernel(options["kernel"])
        ref = self.load_image(options["ref"]) if options["ref"] else None
        if ref is not None and ref.shape != observed.shape:
            raise CommandError(
                "reference is %dx%d but the observation is %dx%d"
                % (ref.shape + observed.shape),
                returncode=USAGE_ERROR,
            )
        self.check_kernel(kernel, observed.shape)
        if options["metrics_csv"] and ref is None:
            raise CommandError("--metrics-csv requires --ref", returncode=USAGE_ERROR)
        if options["metrics_csv"] and options["noise"] is None:
            raise CommandError(
                "--metrics-csv requires --noise, the level recorded in the run record",
                returncode=USAGE_ERROR,
            )

        p, mu = resolve_params(options["p"], options["mu"], options["noise"])
        config = build_config(options, p, mu, options["group_size"])
        try:
            restored, report = solve(observed, kernel, config, reference=ref)
        except (SolverError, ValueError) as exc:
            raise CommandError("restoration failed: %s" % exc, returncode=RUNTIME_ERROR)

        self.save_image(options["output"], restored)
        self.stdout.write(
            "method=%s iterations=%d converged=%s"
            % (config.method, report.iterations, report.converged)
        )
        if options["history_csv"]:
            self.write_history(options["history_csv"], report)
        if ref is not None:
            quality = quality_report(
                ref, restored, deblur_settings.SSIM_K1, deblur_settings.SSIM_K2
            )
            self.stdout.write(
                "psnr=%s ssim=%s re=%s"
                % (
                    format_value(quality.psnr_db),
                    format_value(quality.ssim),
                    format_value(quality.re),
                )
            )
            if options["metrics_csv"]:
                record = RunRecord(
                    image_id=self.image_id(options["ref"]),
                    kernel_spec=options["kernel"],
                    noise_level=options["noise"],
                    seed=options["seed"],
                    method=config.method,
                    p=config.p,
                    mu=config.mu,
                    K=config.group.K,
                    iterations=report.iterations,
                    psnr_db=quality.psnr_db,
                    ssim=quality.ssim,
                    re=quality.re,
                    wall_time_s=report.wall_time if options["timing"] else 0.0,
                )
                try:
                    RecordWriter(options["metrics_csv"]).write(record)
                except OSError as exc:
                    raise CommandError(
                        'Cannot write "%s": %s'
                        % (options["metrics_csv"], exc.strerror or exc),
                        returncode=RUNTIME_ERROR,
                    )

    def write_history(self, path, report):
        header = ["iteration", "re"]
        if report.psnr_history:
            header.append("psnr_db")
        try:
            with open(path, "w", newline="", encoding="ascii") as f:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(header)
                for i, re in enumerate(report.re_history):
                    row = [i + 1, format_value(re)]
                    if report.psnr_history:
                        row.append(format_value(report.psnr_history[i]))
                    writer.writerow(row)
        except OSError as exc:
            raise CommandError(
                'Cannot write "%s": %s' % (path, exc.strerror or exc),
                returncode=RUNTIME_ERROR,
            )
