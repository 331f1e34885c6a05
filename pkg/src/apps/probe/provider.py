"""src/apps/probe/provider.py."""

from dishka import Provider, Scope, provide
from src.apps.probe.services.dataset import ProbeDatasetBuilder
from src.apps.probe.services.training import ProbeAnalysis, ProbeTrainer
from src.apps.tracestore.services.states import HiddenStateReader
from src.core.config import Settings


class ProbeProvider(Provider):
    """
    Dishka provider for the probing module.
    """

    scope = Scope.APP

    @provide
    def dataset_builder(self, reader: HiddenStateReader) -> ProbeDatasetBuilder:
        """Provides the probe dataset builder."""
        return ProbeDatasetBuilder(reader)

    @provide
    def trainer(self, settings: Settings) -> ProbeTrainer:
        """
        Provides a ProbeTrainer with the configured width, epochs,
        seeds and learning rate.
        """
        return ProbeTrainer(
            hidden=settings.PROBE_HIDDEN,
            epochs=settings.PROBE_EPOCHS,
            seeds=settings.PROBE_SEED_VALUES,
            lr=settings.PROBE_LEARNING_RATE,
        )

    @provide
    def analysis(self, builder: ProbeDatasetBuilder, trainer: ProbeTrainer) -> ProbeAnalysis:
        """Provides sweeps and tables over trained probes."""
        return ProbeAnalysis(builder, trainer)
