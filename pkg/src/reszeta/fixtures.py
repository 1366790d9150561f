"""Bundled worked-example configurations."""

from importlib import resources

from .configio import parse_config

FIXTURES = (
    "fig1_left",
    "fig1_right",
    "fig5_cprime",
    "fig5_cdoubleprime",
    "fig6_left",
    "fig6_right",
    "sec5_fprime",
    "sec5_fdoubleprime",
)


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(FIXTURES)}")
    return (resources.files("reszeta") / "fixtures" / f"{name}.yaml").read_text()


def load_fixture(name: str):
    """-> (BlowUpGraph, SymmetrySpec, ValuationTargets)."""
    return parse_config(fixture_text(name))
