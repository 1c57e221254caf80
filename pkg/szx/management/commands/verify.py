"""
Management command to verify an oracle algorithm on one instance.
"""
from szx.algorithms import KINDS
from szx.documents import INSTANCE_FORMAT
from szx.errors import TypeMismatch
from szx.services import ConfigService, DocumentService, VerificationService

from ._base import SZXCommand


class Command(SZXCommand):
    help = 'Build and verify Bernstein-Vazirani, Deutsch-Jozsa, Simon or Grover on an instance'

    def add_arguments(self, parser):
        parser.add_argument('algorithm', choices=KINDS)
        parser.add_argument('instance', nargs='?', help='instance document (overrides the flags below)')
        parser.add_argument('--n', type=int, help='Number of input bits')
        parser.add_argument('--m', type=int, help='Number of output bits of f')
        parser.add_argument('--s', help='Hidden string (bv, simon)')
        parser.add_argument('--x', help='Marked word (grover)')
        parser.add_argument('--k', type=int, help='Iteration count (grover; default optimal)')
        parser.add_argument('--table', help='Comma separated truth table of f')
        parser.add_argument('--seed', type=int, help='Seed (default SZX_SEED)')
        parser.add_argument('--tol', type=float, help='Absolute and relative tolerance')
        parser.add_argument('--json', action='store_true', help='Print a JSON report')
        parser.add_argument('--save', action='store_true', help='Record the run in the database')

    def handle(self, *args, **options):
        if options['instance']:
            instance = DocumentService.load(options['instance'], INSTANCE_FORMAT, options.get('stdin'))
        else:
            table = None
            if options['table']:
                try:
                    table = [int(v) for v in options['table'].split(',')]
                except ValueError:
                    raise TypeMismatch(f"--table expects comma separated integers, got {options['table']!r}") from None
            instance = VerificationService.instance_from_options(
                options['algorithm'], n=options['n'], s=options['s'], x=options['x'],
                k=options['k'], table=table, m=options['m'])
        if instance.kind != options['algorithm']:
            self.stderr.write(self.style.WARNING(
                f"instance is a {instance.kind} instance; verifying it as such"))

        seed = ConfigService.seed(options['seed'])
        report, elapsed = VerificationService.verify(
            instance, ConfigService.tolerance(options['tol'], options['tol']), seed)
        data = report.as_dict()
        target = ' '.join([instance.kind] + [f'{key}={value}' for key, value in data['instance'].items()
                                           if key not in ('algorithm', 'table')])

        if options['save']:
            VerificationService.record('verify', target, seed, data, elapsed)

        if options['json']:
            self.write_json(data)
        else:
            self.stdout.write(self.style.WARNING(f'{target}:'))
            self.write_checks(report.checks)
            self.stdout.write(f'  ({elapsed:.2f}s)')
        self.finish(report.passed, 'verified' if report.passed else 'verification failed')
