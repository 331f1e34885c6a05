"""src/apps/reprsim/provider.py."""

from dishka import Provider, Scope, provide
from src.apps.reprsim.services import SimilarityAnalyzer
from src.apps.tracestore.services.states import HiddenStateReader


class ReprSimProvider(Provider):
    """
    Dishka provider for the representation-similarity module.
    """

    scope = Scope.APP

    @provide
    def similarity_analyzer(self, reader: HiddenStateReader) -> SimilarityAnalyzer:
        """Provides the cue similarity analyzer."""
        return SimilarityAnalyzer(reader)
