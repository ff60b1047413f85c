"""Graph files for the worked examples, shipped with the package."""

from importlib.resources import files

from ..graph import MixedGraph, parse_graph

NAMES = ("fig1", "fig3a", "fig3b", "fig3c", "fig4", "fig5")


def path(name: str):
    return files(__name__).joinpath(f"{name}.g")


def load(name: str) -> MixedGraph:
    """Parse the bundled graph ``name`` (one of ``NAMES``)."""
    if name not in NAMES:
        raise KeyError(f"no bundled graph named {name!r}")
    return parse_graph(path(name).read_text(encoding="utf-8"))
