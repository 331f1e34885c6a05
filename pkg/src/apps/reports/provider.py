"""src/apps/reports/provider.py."""

from dishka import Provider, Scope, provide
from src.apps.reports.services.writer import ReportWriter


class ReportsProvider(Provider):
    """
    Dishka provider for report emission.
    """

    scope = Scope.APP

    @provide
    def report_writer(self) -> ReportWriter:
        """Provides the atomic report writer."""
        return ReportWriter()
