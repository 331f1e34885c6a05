"""src/apps/negdata/provider.py."""

from dishka import Provider, Scope, provide
from src.apps.negdata.services.alignment import SubwordAligner
from src.apps.negdata.services.manual import ManualEvalService
from src.apps.negdata.services.negpar import NegParService
from src.core.config import Settings


class NegDataProvider(Provider):
    """
    Dishka provider for the negdata module.
    Responsible for annotation ingestion, subword alignment and manual labels.
    """

    scope = Scope.APP

    @provide
    def negpar_service(self) -> NegParService:
        """
        Provides the NegPar-layout reader/writer.
        """
        return NegParService()

    @provide
    def subword_aligner(self, settings: Settings) -> SubwordAligner:
        """
        Provides a SubwordAligner configured with the marker from settings.
        """
        return SubwordAligner(
            marker=settings.SUBWORD_MARKER, position=settings.SUBWORD_MARKER_POSITION
        )

    @provide
    def manual_eval_service(self) -> ManualEvalService:
        """
        Provides the manual evaluation aggregator.
        """
        return ManualEvalService()
