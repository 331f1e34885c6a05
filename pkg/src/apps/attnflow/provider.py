"""src/apps/attnflow/provider.py."""

from dishka import Provider, Scope, provide
from src.apps.attnflow.services.flow import FlowAnalyzer
from src.core.config import Settings


class AttnFlowProvider(Provider):
    """
    Dishka provider for the attention-flow module.
    """

    scope = Scope.APP

    @provide
    def flow_analyzer(self, settings: Settings) -> FlowAnalyzer:
        """
        Provides a FlowAnalyzer using the configured head mode,
        decoder mixing and worker count.
        """
        return FlowAnalyzer(head_mode=settings.HEAD_MODE, mixing=settings.DECODER_MIXING, jobs=settings.JOBS)
