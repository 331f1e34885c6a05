"""tests/factories/labels.py."""

from polyfactory.factories.pydantic_factory import ModelFactory
from src.apps.negdata.schemas import ManualEvalLabel


class ManualEvalLabelFactory(ModelFactory[ManualEvalLabel]):
    """
    Factory for manual evaluation labels.
    """

    __model__ = ManualEvalLabel

    instance_id = None

    @classmethod
    def pair_id(cls) -> str:
        """Generates a NegPar-like pair id."""
        return cls.__faker__.numerify("pair-#####")
