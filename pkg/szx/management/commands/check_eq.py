"""
Management command to compare two diagram documents semantically.
"""
from szx.semantics import equal_semantics
from szx.services import ConfigService, DocumentService

from ._base import SZXCommand


class Command(SZXCommand):
    help = 'Exit 0 iff two diagram documents denote the same superoperator'

    def add_arguments(self, parser):
        parser.add_argument('first', help="diagram document, or '-' for stdin")
        parser.add_argument('second', help='diagram document')
        parser.add_argument('--tol', type=float, help='Absolute and relative tolerance')
        parser.add_argument('--json', action='store_true', help='Print a JSON report')

    def handle(self, *args, **options):
        first = DocumentService.load_diagram(options['first'], options.get('stdin'))
        second = DocumentService.load_diagram(options['second'])
        tol = ConfigService.tolerance(options['tol'], options['tol'])
        equal = equal_semantics(first, second, tol)

        if options['json']:
            self.write_json({'equal': equal, 'tolerance': tol.abs,
                             'first': options['first'], 'second': options['second']})
        self.finish(equal, 'equal' if equal else 'not equal')
