import itertools
import threading
from concurrent import futures

from django.core.management.base import CommandError

from django_ogs_deblur.degrade import NoiseSpec, degrade
from django_ogs_deblur.management.base import (
    RUNTIME_ERROR,
    USAGE_ERROR,
    ImageCommand,
    add_solver_arguments,
    build_config,
    float_list,
    int_list,
    resolve_params,
)
from django_ogs_deblur.metrics import quality_report
from django_ogs_deblur.pgm import quantize
from django_ogs_deblur.reports import RunRecord, render_csv
from django_ogs_deblur.settings import deblur_settings
from django_ogs_deblur.signals import restoration_finished
from django_ogs_deblur.solvers import SolverError, solve


class Command(ImageCommand):
    help = "Runs restorations over a parameter grid and writes one CSV row per solve."

    def add_arguments(self, parser):
        parser.add_argument(
            "--input", nargs="+", required=True, help="clean reference PGM image(s)"
        )
        parser.add_argument("--kernel", default="gaussian:7:5", help="blur kernel spec")
        parser.add_argument(
            "--noise", type=float_list, required=True, help="noise levels, comma-separated"
        )
        parser.add_argument(
            "--seeds", type=int_list, default=[0], help="noise seeds, comma-separated"
        )
        parser.add_argument(
            "--mu",
            type=float_list,
            default=None,
            help="fidelity weights, comma-separated (default: noise schedule)",
        )
        parser.add_argument(
            "--p",
            type=float_list,
            default=None,
            help="fidelity exponents, comma-separated (default: noise schedule)",
        )
        parser.add_argument(
            "--group-size",
            type=int_list,
            default=None,
            dest="group_size",
            help="group sizes K, comma-separated",
        )
        parser.add_argument(
            "--jobs", type=int, default=None, help="number of worker threads"
        )
        parser.add_argument("--output", required=True, help="CSV report path")
        add_solver_arguments(parser)

    def handle(self, *args, **options):
        self.verbosity = options["verbosity"]
        kernel = self.parse_kernel(options["kernel"])
        references = [(self.image_id(path), self.load_image(path)) for path in options["input"]]
        group_sizes = options["group_size"] or [deblur_settings.GROUP_SIZE]
        jobs = options["jobs"] if options["jobs"] is not None else deblur_settings.SWEEP_WORKERS
        if jobs < 1:
            raise CommandError("--jobs must be at least 1", returncode=USAGE_ERROR)

        tasks = []
        for (image_id, clean), noise, seed in itertools.product(
            references, options["noise"], options["seeds"]
        ):
            try:
                observed = quantize(degrade(clean, kernel, NoiseSpec(noise, seed)))
            except ValueError as exc:
                raise CommandError(str(exc), returncode=USAGE_ERROR)
            default_p, default_mu = resolve_params(
                options["p"][0] if options["p"] else None,
                options["mu"][0] if options["mu"] else None,
                noise,
            )
            mus = options["mu"] or [default_mu]
            ps = options["p"] or [default_p]
            for mu, p, K in itertools.product(mus, ps, group_sizes):
                record = RunRecord(
                    image_id=image_id,
                    kernel_spec=options["kernel"],
                    noise_level=noise,
                    seed=seed,
                    method=options["method"],
                    p=p,
                    mu=mu,
                    K=K,
                )
                tasks.append((record, clean, observed))

        self._done = 0
        self._lock = threading.Lock()
        self._total = len(tasks)
        restoration_finished.connect(self.on_finished)
        try:
            with futures.ThreadPoolExecutor(max_workers=jobs) as executor:
                records = list(
                    executor.map(
                        lambda task: self.run_job(*task, kernel=kernel, options=options),
                        tasks,
                    )
                )
        finally:
            restoration_finished.disconnect(self.on_finished)

        try:
            with open(options["output"], "w", newline="", encoding="ascii") as f:
                f.write(render_csv(records))
        except OSError as exc:
            raise CommandError(
                'Cannot write "%s": %s' % (options["output"], exc.strerror or exc),
                returncode=RUNTIME_ERROR,
            )

        failed = [record for record in records if record.error]
        self.stdout.write(
            "%d of %d runs succeeded, report written to %s"
            % (len(records) - len(failed), len(records), options["output"])
        )
        if records and len(failed) == len(records):
            raise CommandError("every sweep run failed", returncode=RUNTIME_ERROR)

    def run_job(self, record, clean, observed, kernel, options):
        try:
            config = build_config(options, record.p, record.mu, record.K)
            restored, report = solve(observed, kernel, config)
            quality = quality_report(
                clean, restored, deblur_settings.SSIM_K1, deblur_settings.SSIM_K2
            )
        except (CommandError, SolverError, ValueError) as exc:
            record.error = str(exc).replace("\n", " ")
            return record
        record.iterations = report.iterations
        record.psnr_db = quality.psnr_db
        record.ssim = quality.ssim
        record.re = quality.re
        record.wall_time_s = report.wall_time if options["timing"] else 0.0
        return record

    def on_finished(self, sender, report, **kwargs):
        with self._lock:
            self._done += 1
            done = self._done
        if self.verbosity > 1:
            self.stderr.write(
                "[%d/%d] %s finished in %d iterations"
                % (done, self._total, report.method, report.iterations)
            )
