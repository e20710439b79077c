from ..base import SweepCommand
from ...services.sweeps import SweepKind


class Command(SweepCommand):
    help = 'Tabulate the concurrence of the two clocks against coordinate time'
    kind = SweepKind.ENTANGLEMENT

    def sweep(self, service, spec, meta):
        return service.run_entanglement_sweep(spec, meta)
