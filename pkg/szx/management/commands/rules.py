"""
Management command to list the rewrite rules and sample their soundness.
"""
from szx.services import ConfigService, RuleService

from ._base import SZXCommand


class Command(SZXCommand):
    help = 'List the rule catalogue, or check rules semantically on sampled parameters'

    def add_arguments(self, parser):
        parser.add_argument('names', nargs='*', help='Rules to check (default: every sampled rule)')
        parser.add_argument('--check', action='store_true', help='Compare both sides on sampled parameters')
        parser.add_argument('--trials', type=int, help='Samples per rule')
        parser.add_argument('--seed', type=int, help='Seed (default SZX_SEED)')
        parser.add_argument('--json', action='store_true', help='Print JSON')

    def handle(self, *args, **options):
        if not options['check']:
            catalogue = RuleService.catalogue()
            if options['names']:
                catalogue = [entry for entry in catalogue if entry['name'] in options['names']]
            if options['json']:
                self.write_json(catalogue)
                return
            for entry in catalogue:
                flag = self.style.WARNING(' [promise]') if entry['conditional'] else ''
                self.stdout.write(f"  {entry['name']:24} {entry['summary']}{flag}")
            self.stdout.write(f'\n{len(catalogue)} rules')
            return

        reports = RuleService.soundness(options['names'], options['trials'], ConfigService.seed(options['seed']))
        if options['json']:
            self.write_json([r.as_dict() for r in reports])
        else:
            for report in reports:
                mark = self.style.SUCCESS('✓') if report.sound else self.style.ERROR('✗')
                self.stdout.write(f'  {mark} {report.rule:24} {report.checked} checked, {report.rejected} rejected, '
                                  f'{len(report.failures)} failures')
        unsound = [r.rule for r in reports if not r.sound]
        self.finish(not unsound, f"unsound: {', '.join(unsound)}" if unsound else f'{len(reports)} rules sound')
