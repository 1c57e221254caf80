"""
Service layer used by the management commands.
Reads engine settings, caches the rule catalogue and bundled proofs, and
records verification runs.
"""
import logging
import sys
import time

import numpy as np
from django.conf import settings
from django.core.cache import cache

from . import documents, scripts
from .algorithms import AlgorithmInstance, verify
from .errors import DocumentError, UnknownName
from .models import VerificationRun
from .rewrite import REGISTRY, check_proof, check_rule_soundness, list_rules
from .semantics import Tolerance, interp_cpm, interp_pure
from .suite import run_suite

logger = logging.getLogger(__name__)

# Constants
CACHE_TIMEOUT = 3600  # 1 hour
CATALOGUE_CACHE_KEY = 'szx_rule_catalogue'


class ConfigService:
    """Engine settings with command-line overrides"""

    @staticmethod
    def tolerance(abs_tol=None, rel_tol=None):
        config = settings.SZX
        return Tolerance(abs_tol or config['TOLERANCE_ABS'], rel_tol or config['TOLERANCE_REL'])

    @staticmethod
    def seed(seed=None):
        return settings.SZX['SEED'] if seed is None else seed

    @staticmethod
    def trials(trials=None):
        return settings.SZX['SOUNDNESS_TRIALS'] if trials is None else trials

    @staticmethod
    def assets_dir():
        return settings.SZX['ASSETS_DIR']


class DocumentService:
    """Reading documents from files or stdin"""

    @staticmethod
    def read_text(path, stdin=None):
        if path == '-':
            return (stdin or sys.stdin).read()
        try:
            with open(path, encoding='utf-8') as fh:
                return fh.read()
        except OSError as exc:
            raise DocumentError(f"cannot read {path}: {exc.strerror}") from exc

    @staticmethod
    def load(path, expected=None, stdin=None):
        return documents.loads(DocumentService.read_text(path, stdin), expected)

    @staticmethod
    def load_diagram(path, stdin=None):
        return DocumentService.load(path, documents.DIAGRAM_FORMAT, stdin)

    @staticmethod
    def asset(*parts):
        return ConfigService.assets_dir().joinpath(*parts)


class InterpretationService:
    """Matrices of diagrams with the scale resolved"""

    @staticmethod
    def interpret(diagram, mode=None):
        """
        Interpret a diagram.

        Args:
            diagram: the Diagram
            mode: 'pure', 'cpm' or None for pure when the diagram allows it

        Returns:
            tuple: (mode, numpy array of values)
        """
        if mode is None:
            mode = 'pure' if diagram.is_pure else 'cpm'
        matrix = interp_pure(diagram) if mode == 'pure' else interp_cpm(diagram)
        return mode, matrix.value()

    @staticmethod
    def as_dict(mode, values):
        values = np.asarray(values)
        return {'mode': mode, 'shape': list(values.shape),
                'real': np.round(values.real, 12).tolist(), 'imag': np.round(values.imag, 12).tolist()}


class RuleService:
    """Rule catalogue and soundness checks"""

    @staticmethod
    def catalogue():
        catalogue = cache.get(CATALOGUE_CACHE_KEY)
        if not catalogue:
            catalogue = list_rules()
            cache.set(CATALOGUE_CACHE_KEY, catalogue, CACHE_TIMEOUT)
        return catalogue

    @staticmethod
    def soundness(names=None, trials=None, seed=None, tol=None):
        rng = np.random.default_rng(ConfigService.seed(seed))
        rules = [REGISTRY.get(name) for name in names] if names else [r for r in REGISTRY if r.sampler]
        return [check_rule_soundness(rule, trials=ConfigService.trials(trials),
                                     tol=tol or ConfigService.tolerance(), rng=rng)
                for rule in rules]


class ProofService:
    """Bundled proof scripts and proof replay"""

    @staticmethod
    def bundled_names():
        return list(scripts.BUNDLED)

    @staticmethod
    def bundled(name):
        if name not in scripts.BUNDLED:
            raise UnknownName(f"no bundled proof {name!r}; expected one of {', '.join(scripts.BUNDLED)}")
        cache_key = f'szx_bundled_proof_{name}'
        data = cache.get(cache_key)
        if not data:
            data = documents.proof_to_dict(scripts.bundled(name))
            cache.set(cache_key, data, CACHE_TIMEOUT)
        return documents.proof_from_dict(data)

    @staticmethod
    def check(script, tol=None):
        return check_proof(script, tol or ConfigService.tolerance())

    @staticmethod
    def invalidate_cache():
        cache.delete(CATALOGUE_CACHE_KEY)
        for name in scripts.BUNDLED:
            cache.delete(f'szx_bundled_proof_{name}')


class VerificationService:
    """Algorithm verification, the acceptance suite and the run log"""

    @staticmethod
    def instance_from_options(algorithm, n=None, s=None, x=None, k=None, table=None, m=None):
        if n is None:
            raise DocumentError("an instance needs --n or an instance file")
        return AlgorithmInstance.build(algorithm, n=n, s=s, x=x, k=k, table=table, m=m)

    @staticmethod
    def verify(instance, tol=None, seed=None):
        started = time.perf_counter()
        rng = np.random.default_rng(ConfigService.seed(seed))
        report = verify(instance, tol or ConfigService.tolerance(), rng)
        return report, time.perf_counter() - started

    @staticmethod
    def run_suite(seed=None, name_filter=None, trials=None, tol=None):
        started = time.perf_counter()
        report = run_suite(ConfigService.seed(seed), name_filter, tol or ConfigService.tolerance(),
                           ConfigService.trials(trials))
        return report, time.perf_counter() - started

    @staticmethod
    def record(command, target, seed, report, duration=0.0):
        run = VerificationRun.objects.create(
            command=command,
            target=target[:200],
            seed=seed,
            passed=bool(report.get('passed')),
            report=report,
            duration=duration,
        )
        logger.info("recorded %s run %s for %s", command, run.id, target)
        return run

    @staticmethod
    def recent_runs(limit=10, command=None):
        runs = VerificationRun.objects.all()
        if command:
            runs = runs.filter(command=command)
        return list(runs.order_by('-created_at')[:limit])
