"""Zero-sum invariants and Loewy lengths of small finite groups."""

from .groups import GroupTable, PcPresentation, Subgroup, build_from_pc, closure
from .groupspec import PaperGroupSpec, parse_group_spec
from .constructions import build_paper_group, catalog, closed_form_L

__all__ = [
    "GroupTable",
    "PcPresentation",
    "Subgroup",
    "PaperGroupSpec",
    "build_from_pc",
    "build_paper_group",
    "catalog",
    "closed_form_L",
    "closure",
    "parse_group_spec",
]

__version__ = "0.1.0"
