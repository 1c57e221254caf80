"""
Management command to list recorded verification runs.
"""
from szx.models import VerificationRun
from szx.services import VerificationService

from ._base import SZXCommand


class Command(SZXCommand):
    help = 'List recorded verification runs'

    def add_arguments(self, parser):
        parser.add_argument('--limit', type=int, default=10, help='Number of runs to show')
        parser.add_argument('--command', dest='run_command', choices=['verify', 'suite', 'check_proof'])
        parser.add_argument(
            '--detailed',
            action='store_true',
            help='Show breakdown by command and the failing checks of each run',
        )

    def handle(self, *args, **options):
        total_count = VerificationRun.objects.count()

        self.stdout.write(self.style.SUCCESS(f'\nRecorded runs: {total_count}\n'))

        if options['detailed']:
            self.stdout.write(self.style.WARNING('Breakdown by command:'))
            for command, _ in VerificationRun.COMMAND_CHOICES:
                runs = VerificationRun.objects.filter(command=command)
                count = runs.count()
                passed = runs.filter(passed=True).count()
                percentage = (passed / count * 100) if count > 0 else 0
                self.stdout.write(f'  {command:12} {count:4} runs, {passed:4} passed ({percentage:5.1f}%)')
            self.stdout.write('')

        for run in VerificationService.recent_runs(options['limit'], options['run_command']):
            status = self.style.SUCCESS('pass') if run.passed else self.style.ERROR('FAIL')
            self.stdout.write(f'  #{run.id} {run.created_at:%Y-%m-%d %H:%M} {run.command:12} [{status}] '
                              f'{run.target} (seed {run.seed}, {run.duration:.2f}s)')
            if options['detailed'] and not run.passed:
                for name in _failing_checks(run.report):
                    self.stdout.write(f'      ✗ {name}')

        self.stdout.write('')


def _failing_checks(report):
    if 'sections' in report:
        return [f"{section}: {c['name']}" for section, data in report['sections'].items()
                for c in data['checks'] if not c['passed']]
    if 'checks' in report:
        return [c['name'] for c in report['checks'] if not c['passed']]
    return [f"step {s['index']} {s['rule']}: {s['status']}" for s in report.get('steps', []) if s['status'] != 'ok']
