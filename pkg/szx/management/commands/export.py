"""
Management command to export a diagram document for figures.
"""
from szx.documents import to_dot, to_tikz
from szx.services import DocumentService

from ._base import SZXCommand


class Command(SZXCommand):
    help = 'Export a diagram document as graphviz dot or a tikz picture'

    def add_arguments(self, parser):
        parser.add_argument('file', help="diagram document, or '-' for stdin")
        fmt = parser.add_mutually_exclusive_group()
        fmt.add_argument('--dot', dest='format', action='store_const', const='dot', help='Graphviz (default)')
        fmt.add_argument('--tikz', dest='format', action='store_const', const='tikz', help='TikZ picture')

    def handle(self, *args, **options):
        diagram = DocumentService.load_diagram(options['file'], options.get('stdin'))
        exporter = to_tikz if options['format'] == 'tikz' else to_dot
        self.stdout.write(exporter(diagram), ending='')
