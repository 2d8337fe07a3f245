"""Bundled terms exercising both principal rules and the search bound:
identity chains, Church arithmetic, combinators, and duplication-heavy
applications."""

from importlib import resources
from pathlib import Path


def corpus_paths() -> list[Path]:
    root = resources.files(__package__)
    return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".lam"))


def corpus_terms() -> list[tuple[str, str]]:
    """(name, source text) for every bundled term."""
    return [(p.stem, p.read_text().strip()) for p in corpus_paths()]
