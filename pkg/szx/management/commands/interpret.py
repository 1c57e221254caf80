"""
Management command to print the interpretation of a diagram document.
"""
import numpy as np

from szx.services import DocumentService, InterpretationService

from ._base import SZXCommand


class Command(SZXCommand):
    help = 'Print the matrix (pure) or superoperator (cpm) denoted by a diagram document'

    def add_arguments(self, parser):
        parser.add_argument('file', help="diagram document, or '-' for stdin")
        mode = parser.add_mutually_exclusive_group()
        mode.add_argument('--pure', dest='mode', action='store_const', const='pure',
                          help='Interpret as a linear map (fails on discards)')
        mode.add_argument('--cpm', dest='mode', action='store_const', const='cpm',
                          help='Interpret as a superoperator')
        parser.add_argument('--json', action='store_true', help='Print a JSON document')

    def handle(self, *args, **options):
        diagram = DocumentService.load_diagram(options['file'], options.get('stdin'))
        mode, values = InterpretationService.interpret(diagram, options['mode'])

        if options['json']:
            self.write_json(InterpretationService.as_dict(mode, values))
            return

        self.stdout.write(self.style.WARNING(f'{mode} interpretation, shape {values.shape[0]}×{values.shape[1]}:'))
        if np.allclose(values.imag, 0):
            values = values.real
        self.stdout.write(np.array2string(values, precision=8, suppress_small=True, max_line_width=120))
