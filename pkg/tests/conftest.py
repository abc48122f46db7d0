import json
from pathlib import Path

import pytest

from prymdeg.curve import parse_curve, validate_and_classify

CORPUS_DIR = Path(__file__).resolve().parent.parent / "corpus"


def corpus_doc(name):
    with open(CORPUS_DIR / f"{name}.json") as fh:
        return json.load(fh)


def corpus_curve(name):
    return validate_and_classify(parse_curve(corpus_doc(name)))


def corpus_names():
    return sorted(p.stem for p in CORPUS_DIR.glob("*.json"))


@pytest.fixture
def curve_of():
    return corpus_curve
