"""src/core/enum.py."""

import enum


class Split(str, enum.Enum):
    """Corpus split."""

    TRAIN = "train"
    DEV = "dev"
    TEST = "test"


class TranslationCategory(str, enum.Enum):
    """Manual evaluation category of a translated negation."""

    CORRECT = "Correct"
    REPHRASED = "Rephrased"
    REORDERED = "Reordered"
    INCORRECT = "Incorrect"
    DROPPED = "Dropped"


class EditDirection(str, enum.Enum):
    """Whether a contrastive variant removes or adds a negation."""

    DELETION = "deletion"
    INSERTION = "insertion"


class RuleTag(str, enum.Enum):
    """Polarity-reversal rules."""

    NICHT_DEL = "nicht_del"
    KEIN_TO_EIN = "kein_to_ein"
    AFFIX_DEL = "affix_del"
    NICHT_INS = "nicht_ins"
    EIN_TO_KEIN = "ein_to_kein"
    AFFIX_INS = "affix_ins"
    ZH_DEL = "zh_del"
    ZH_INS = "zh_ins"

    @property
    def direction(self) -> EditDirection:
        """Deletion rules remove the negation, the rest insert one."""
        if self in (RuleTag.NICHT_DEL, RuleTag.KEIN_TO_EIN, RuleTag.AFFIX_DEL, RuleTag.ZH_DEL):
            return EditDirection.DELETION
        return EditDirection.INSERTION


class Side(str, enum.Enum):
    """Which half of the encoder-decoder a hidden state comes from."""

    ENC = "enc"
    DEC = "dec"


class HeadMode(str, enum.Enum):
    """How attention heads are combined."""

    AVERAGE = "avg"
    MAX = "max"


class DecoderMixing(str, enum.Enum):
    """How decoder-node capacities are split between cross and self attention."""

    SPLIT = "split"
    FULL = "full"


class CueGroup(str, enum.Enum):
    """Translation outcome of a source cue in the flow report."""

    TRANSLATED = "translated"
    UNDER_TRANSLATED = "under_translated"


class ProbeTask(str, enum.Enum):
    """Probing tasks."""

    CUE = "cue"
    SCOPE = "scope"
    EVENT = "event"


class Pooling(str, enum.Enum):
    """How subword hidden states become probe inputs."""

    WORD = "word"
    SUBWORD = "subword"


class MatchMode(str, enum.Enum):
    """Cue lexicon matching mode."""

    WORD = "word"
    CHARACTER = "character"


class Quadrant(str, enum.Enum):
    """Cell of the 2x2 cue-match table (en = source-side lexicon)."""

    BOTH = "both"
    EN_ONLY = "en_only"
    ZH_ONLY = "zh_only"
    NEITHER = "neither"


class FilterPolicy(str, enum.Enum):
    """Corpus filtering policy."""

    DROP_MISMATCH = "drop_mismatch"
    KEEP_ALL_TAGGED = "keep_all_tagged"


class ChartKind(str, enum.Enum):
    """Supported SVG charts."""

    BARS = "bars"
    LINES = "lines"


class FlowMeasure(str, enum.Enum):
    """What the flow report aggregates per cue."""

    FLOW = "flow"
    RAW = "raw"


class TextMode(str, enum.Enum):
    """How raw corpus lines are split before word-mode cue matching."""

    TOKENIZED = "tokenized"
    RAW = "raw"


class ReportFormat(str, enum.Enum):
    """Report payload formats."""

    CSV = "csv"
    JSON = "json"
