"""
Management command to replay proof scripts.
"""
import json

from django.core.management.base import CommandError

from szx.documents import PROOF_FORMAT, dumps, proof_to_dict
from szx.services import ConfigService, DocumentService, ProofService, VerificationService

from ._base import INPUT_ERROR, SZXCommand


class Command(SZXCommand):
    help = 'Replay a proof script step by step, or the bundled derivations'

    def add_arguments(self, parser):
        parser.add_argument('file', nargs='?', help="proof document, or '-' for stdin")
        parser.add_argument('--bundled', metavar='NAME', help="A bundled derivation, or 'all'")
        parser.add_argument('--dump', metavar='PATH', help='Write the bundled derivation as a proof document')
        parser.add_argument('--tol', type=float, help='Absolute and relative tolerance')
        parser.add_argument('--json', action='store_true', help='Print a JSON report')
        parser.add_argument('--save', action='store_true', help='Record the run in the database')

    def _scripts(self, options):
        if options['bundled']:
            names = ProofService.bundled_names() if options['bundled'] == 'all' else [options['bundled']]
            return [ProofService.bundled(name) for name in names]
        if options['file']:
            return [DocumentService.load(options['file'], PROOF_FORMAT, options.get('stdin'))]
        raise CommandError('give a proof document or --bundled NAME', returncode=INPUT_ERROR)

    def handle(self, *args, **options):
        scripts = self._scripts(options)

        if options['dump']:
            if len(scripts) != 1:
                raise CommandError('--dump needs a single script', returncode=INPUT_ERROR)
            with open(options['dump'], 'w', encoding='utf-8') as fh:
                fh.write(dumps(proof_to_dict(scripts[0])))
            self.stdout.write(self.style.SUCCESS(f"wrote {scripts[0].name} to {options['dump']}"))
            return

        tol = ConfigService.tolerance(options['tol'], options['tol'])
        reports = [ProofService.check(script, tol) for script in scripts]

        if options['save']:
            for report in reports:
                VerificationService.record('check_proof', report.name, ConfigService.seed(), report.as_dict())

        if options['json']:
            self.stdout.write(json.dumps([r.as_dict() for r in reports], indent=2, sort_keys=True))
        else:
            for report in reports:
                self._write_report(report)

        failed = [r.name for r in reports if not r.passed]
        self.finish(not failed, f"failed: {', '.join(failed)}" if failed else f'{len(reports)} proof(s) replayed')

    def _write_report(self, report):
        self.stdout.write(self.style.WARNING(f'\n{report.name}:'))
        for step in report.steps:
            mark = self.style.SUCCESS('✓') if step.status == 'ok' else self.style.ERROR('✗')
            detail = f' {step.status}: {step.detail}' if step.status != 'ok' else ''
            self.stdout.write(f'  {mark} {step.index:3} {step.rule} ({step.direction}){detail}')
        if report.steps and report.first_failure() is None:
            end = self.style.SUCCESS('end matches') if report.end_matches else self.style.ERROR(report.end_detail)
            self.stdout.write(f'  {end}')
