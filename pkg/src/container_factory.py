"""src/container_factory.py."""

from typing import Optional

from dishka import Container, Provider, Scope, make_container, provide
from src.apps.attnflow.provider import AttnFlowProvider
from src.apps.contrastive.provider import ContrastiveProvider
from src.apps.cuescan.provider import CueScanProvider
from src.apps.negdata.provider import NegDataProvider
from src.apps.probe.provider import ProbeProvider
from src.apps.reports.provider import ReportsProvider
from src.apps.reprsim.provider import ReprSimProvider
from src.apps.tracestore.provider import TraceStoreProvider
from src.core.config import Settings, settings as default_settings


class ConfigProvider(Provider):
    """
    Configuration provider.
    """

    def __init__(self, settings: Settings):
        super().__init__()
        self.settings = settings

    @provide(scope=Scope.APP)
    def get_settings(self) -> Settings:
        """
        Provides the Settings of the current run.
        """
        return self.settings


def create_container(settings: Optional[Settings] = None) -> Container:
    """
    Container factory.
    Assembles all providers around one Settings instance.
    """
    return make_container(
        ConfigProvider(settings or default_settings),
        NegDataProvider(),
        ContrastiveProvider(),
        TraceStoreProvider(),
        AttnFlowProvider(),
        ProbeProvider(),
        ReprSimProvider(),
        CueScanProvider(),
        ReportsProvider(),
    )
