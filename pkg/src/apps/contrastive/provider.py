"""src/apps/contrastive/provider.py."""

from dishka import Provider, Scope, provide
from src.apps.contrastive.services.chinese import ChineseVariantGenerator
from src.apps.contrastive.services.german import GermanVariantGenerator
from src.apps.contrastive.services.scoring import ContrastiveScorer


class ContrastiveProvider(Provider):
    """
    Dishka provider for the contrastive module.
    """

    scope = Scope.APP

    @provide
    def german_generator(self) -> GermanVariantGenerator:
        """
        Provides a German generator without a vocabulary.
        The CLI builds its own when --vocab is given.
        """
        return GermanVariantGenerator()

    @provide
    def chinese_generator(self) -> ChineseVariantGenerator:
        """Provides the Chinese generator with the default cue list."""
        return ChineseVariantGenerator()

    @provide
    def scorer(self) -> ContrastiveScorer:
        """Provides the contrastive scorer."""
        return ContrastiveScorer()
