"""tests/fixtures/scan.py."""

import pytest
from src.apps.cuescan.services.lexicon import load_lexicon
from src.apps.cuescan.services.scanner import CueScanner
from src.core.config import Settings

# two pairs per quadrant: both, en_only, zh_only, neither
SCAN_PAIRS = [
    ("I do not know .", "我不知道。"),
    ("He never came back .", "他没回来。"),
    ("Don't worry .", "放心吧。"),
    ("Nothing changed .", "一切如旧。"),
    ("Hardly anyone came .", "几乎没人来。"),
    ("He failed the test .", "他未通过考试。"),
    ("It rains today .", "今天下雨。"),
    ("She bought a notebook .", "她买了一个笔记本。"),
]


@pytest.fixture
def scanner() -> CueScanner:
    """Scanner over the packaged English and Chinese lexicons."""
    defaults = Settings()
    return CueScanner(load_lexicon(defaults.EN_LEXICON), load_lexicon(defaults.ZH_LEXICON))


@pytest.fixture
def scan_pairs() -> list[tuple[str, str]]:
    """Eight pairs, two in every quadrant."""
    return list(SCAN_PAIRS)


@pytest.fixture
def scan_files(tmp_path, scan_pairs):  # pylint: disable=redefined-outer-name
    """The eight pairs as two plain-text files."""
    src, tgt = tmp_path / "corpus.en", tmp_path / "corpus.zh"
    src.write_text("".join(s + "\n" for s, _ in scan_pairs), encoding="utf-8")
    tgt.write_text("".join(t + "\n" for _, t in scan_pairs), encoding="utf-8")
    return src, tgt
