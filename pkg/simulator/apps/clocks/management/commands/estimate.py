"""
Monte-Carlo estimation of the gravitational time difference.
"""

from rest_framework.renderers import JSONRenderer

from core.provenance import run_metadata

from ..base import SimulationCommand
from ...serializers import ExperimentReportSerializer
from ...services.experiments import EstimationExperimentService, ExperimentSpec


class Command(SimulationCommand):
    help = 'Sample Bob\'s outcomes, estimate delta_p per replicate and compare with the Cramer-Rao bounds'
    default_format = 'json'

    def run(self, config, options):
        spec = ExperimentSpec.from_config(config.estimate, config.params, options.get('seed'))
        meta = run_metadata({'experiment': spec.as_dict()}, seed=spec.base_seed)
        report = EstimationExperimentService().run_estimation_experiment(spec, meta)
        if options['format'] == 'json':
            return JSONRenderer().render(ExperimentReportSerializer(report).data) + b'\n'
        return report.to_csv()
