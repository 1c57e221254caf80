"""
Management command to run the acceptance suite.
"""
from szx.services import ConfigService, VerificationService

from ._base import SZXCommand


class Command(SZXCommand):
    help = 'Run the acceptance suite; deterministic under a fixed seed'

    def add_arguments(self, parser):
        parser.add_argument('--filter', dest='name_filter', help='Run only sections whose name contains this')
        parser.add_argument('--seed', type=int, help='Seed (default SZX_SEED)')
        parser.add_argument('--trials', type=int, help='Samples per rule soundness check')
        parser.add_argument('--json', action='store_true', help='Print a JSON report')
        parser.add_argument('--save', action='store_true', help='Record the run in the database')

    def handle(self, *args, **options):
        seed = ConfigService.seed(options['seed'])
        report, elapsed = VerificationService.run_suite(seed, options['name_filter'], options['trials'])
        data = report.as_dict()

        if options['save']:
            VerificationService.record('suite', options['name_filter'] or 'all', seed, data, elapsed)

        if options['json']:
            self.write_json(data)
        else:
            for name, section in report.sections.items():
                status = self.style.SUCCESS('pass') if section.passed else self.style.ERROR('FAIL')
                self.stdout.write(self.style.WARNING(f'\n{name}') + f' [{status}]')
                self.write_checks(c for c in section.checks if not c.passed)
                passed = sum(c.passed for c in section.checks)
                self.stdout.write(f'  {passed}/{len(section.checks)} checks passed')
            self.stdout.write(f'\n({elapsed:.1f}s, seed {seed})')

        if not report.sections:
            self.stderr.write(self.style.WARNING('no section matched the filter'))
        self.finish(report.passed, 'suite passed' if report.passed else 'suite failed')
