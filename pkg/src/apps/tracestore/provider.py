"""src/apps/tracestore/provider.py."""

from dishka import Provider, Scope, provide
from src.apps.negdata.services.alignment import SubwordAligner
from src.apps.tracestore.services.container import TraceContainer
from src.apps.tracestore.services.states import HiddenStateReader
from src.apps.tracestore.services.synth import TraceSynthesizer
from src.core.config import Settings


class TraceStoreProvider(Provider):
    """
    Dishka provider for the tracestore module.
    """

    scope = Scope.APP

    @provide
    def trace_container(self, settings: Settings) -> TraceContainer:
        """
        Provides the container codec with the configured row tolerance.
        """
        return TraceContainer(row_tolerance=settings.ATTENTION_ROW_TOLERANCE)

    @provide
    def trace_synthesizer(self) -> TraceSynthesizer:
        """Provides the fixture trace generator."""
        return TraceSynthesizer()

    @provide
    def hidden_state_reader(self, aligner: SubwordAligner, settings: Settings) -> HiddenStateReader:
        """
        Provides the hidden-state reader used by the probe and similarity modules.
        """
        return HiddenStateReader(aligner, settings.SPECIAL_TOKENS)
