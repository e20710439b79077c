from ..base import SweepCommand
from ...services.sweeps import SweepKind


class Command(SweepCommand):
    help = 'Tabulate P(+) against eps1 for several clock separations'
    kind = SweepKind.PROBABILITY

    def sweep(self, service, spec, meta):
        return service.run_probability_sweep(spec, meta)
