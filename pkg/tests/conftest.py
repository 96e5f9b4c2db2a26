import pytest

from zerosum.constructions import build_paper_group
from zerosum.groupspec import parse_group_spec


def build(text: str):
    return build_paper_group(parse_group_spec(text))


@pytest.fixture
def grp():
    return build
