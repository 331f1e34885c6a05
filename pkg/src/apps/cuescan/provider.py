"""src/apps/cuescan/provider.py."""

from dishka import Provider, Scope, provide
from src.apps.cuescan.services.lexicon import load_lexicon
from src.apps.cuescan.services.scanner import CueScanner
from src.core.config import Settings


class CueScanProvider(Provider):
    """
    Dishka provider for the corpus cue scanner.
    """

    scope = Scope.APP

    @provide
    def scanner(self, settings: Settings) -> CueScanner:
        """Provides a CueScanner over the configured English and Chinese lexicons."""
        return CueScanner(load_lexicon(settings.EN_LEXICON), load_lexicon(settings.ZH_LEXICON))
