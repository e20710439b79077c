from ..base import SweepCommand
from ...services.sweeps import SweepKind


class Command(SweepCommand):
    help = 'Tabulate numerical and closed-form QFI against eps2 for several clock separations'
    kind = SweepKind.QFI

    def sweep(self, service, spec, meta):
        return service.run_qfi_sweep(spec, meta)
