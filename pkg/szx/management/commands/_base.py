"""
Shared behaviour of the szx commands: exit codes and report output.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""
import json

from django.core.management.base import BaseCommand, CommandError

from szx.errors import SZXError

VERIFICATION_FAILED = 1
INPUT_ERROR = 2


class SZXCommand(BaseCommand):
    stealth_options = ('stdin',)

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except SZXError as exc:
            raise CommandError(f"{type(exc).__name__}: {exc}", returncode=INPUT_ERROR) from exc

    def write_json(self, data):
        self.stdout.write(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False, default=str))

    def write_checks(self, checks):
        for check in checks:
            mark = self.style.SUCCESS('✓') if check.passed else self.style.ERROR('✗')
            detail = ''
            if check.measured is not None or check.expected is not None:
                detail = f'  (measured {check.measured}, expected {check.expected})'
            self.stdout.write(f'  {mark} {check.name}{detail}')

    def finish(self, passed, message):
        if not passed:
            raise CommandError(message, returncode=VERIFICATION_FAILED)
        self.stdout.write(self.style.SUCCESS(message))
