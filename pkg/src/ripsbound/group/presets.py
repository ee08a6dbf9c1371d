"""Built-in presentations with known boundaries."""
from __future__ import annotations

from .presentation import GroupPresentation, parse_presentation

PRESETS: dict[str, str] = {
    "z": "gens: a\nrels: (none)\n",
    "f2": "gens: a b\nrels: (none)\n",
    "f3": "gens: a b c\nrels: (none)\n",
    "surface2": "gens: a b c d\nrel: [a,b][c,d]\noracle: dehn\n",
    "surface3": "gens: a b c d e f\nrel: [a,b][c,d][e,f]\noracle: dehn\n",
}

# expected boundary type, used only to document the presets
BOUNDARY = {
    "z": "two points",
    "f2": "Cantor set",
    "f3": "Cantor set",
    "surface2": "circle",
    "surface3": "circle",
}


def preset(name: str) -> GroupPresentation:
    try:
        text = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}") from None
    return parse_presentation(text, name=name)


def preset_text(name: str) -> str:
    return PRESETS[name]
