"""
Single-point evaluation of Bob's outcome probabilities.
"""

import pandas as pd
from django.conf import settings
from rest_framework.renderers import JSONRenderer

from apps.qubits.services.qops import Basis, Outcome, born_probabilities
from core.exceptions import ConditioningError
from core.provenance import run_metadata

from ..base import SimulationCommand
from ...serializers import ProbabilityPointSerializer
from ...services.clockmodel import ClockParams
from ...services.protocol import ConditioningMode, ProtocolConfig, bob_probability, compare_modes, condition_bob
from ...services.sweeps import SweepTable

PROBABILITY_COLUMNS = ['epsilon1', 'epsilon2', 'xi', 'delta_p', 'p_plus', 'p_minus']


class Command(SimulationCommand):
    help = 'Evaluate P(+) and P(-) at one parameter point and compare the two collapse models'
    default_format = 'json'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--delta-p', type=float, dest='delta_p', help='Time difference in Planck times')
        parser.add_argument(
            '--mode',
            choices=[mode.value for mode in ConditioningMode],
            default=ConditioningMode.PAPER.value,
            help='Collapse model for Bob\'s state (default: paper)'
        )
        parser.add_argument(
            '--alice',
            choices=[Outcome.PLUS.value, Outcome.MINUS.value],
            default=Outcome.PLUS.value,
            help='Outcome published by Alice (minus needs --mode full)'
        )

    def run(self, config, options):
        defaults = settings.ESTIMATION_EXPERIMENT
        params = config.params or ClockParams(**defaults['params'])
        delta_p = options.get('delta_p')
        if delta_p is None:
            delta_p = config.estimate.get('delta_p', defaults['delta_p'])

        cfg = ProtocolConfig(params, delta_p, options['mode'], options['alice'])
        conditioning_probability, bob_state = condition_bob(cfg)
        point = {
            'params': params,
            'delta_p': cfg.delta_p,
            'p_plus': bob_probability(params, cfg.delta_p, Outcome.PLUS),
            'p_minus': bob_probability(params, cfg.delta_p, Outcome.MINUS),
            'mode': cfg.mode.value,
            'alice_outcome': cfg.alice_outcome.value,
            'conditioning_probability': conditioning_probability,
            'bob_plus_probability': born_probabilities(bob_state, Basis.DUAL)[0],
            'mode_comparison': self.mode_comparison(cfg),
        }
        meta = run_metadata(
            {
                'params': params.as_dict(),
                'delta_p': cfg.delta_p,
                'mode': cfg.mode.value,
                'alice': cfg.alice_outcome.value,
            },
            seed=options.get('seed'),
        )

        if options['format'] == 'json':
            payload = {'meta': meta, 'result': ProbabilityPointSerializer(point).data}
            return JSONRenderer().render(payload) + b'\n'
        row = [params.eps1, params.eps2, params.xi, cfg.delta_p, point['p_plus'], point['p_minus']]
        frame = pd.DataFrame([row], columns=PROBABILITY_COLUMNS)
        return SweepTable(header=PROBABILITY_COLUMNS, frame=frame, meta=meta).to_csv()

    def mode_comparison(self, cfg):
        """Both collapse models side by side; only defined for Alice's '+' outcome."""
        if cfg.alice_outcome != Outcome.PLUS:
            return None
        try:
            return compare_modes(cfg.params, cfg.delta_p)
        except ConditioningError as exc:
            self.stderr.write(f"Mode comparison skipped: {exc.detail}")
            return None
