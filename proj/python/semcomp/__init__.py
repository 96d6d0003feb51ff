"""Python access to the semcomp analysis core."""

from ._core import (
    InputError,
    InvariantError,
    __version__,
    alignment_scores,
    complexity,
    distortion,
    generate_mixture,
    kmeans,
    l_objective,
    load_embeddings,
    run,
    save_embeddings,
    spearman,
)

__all__ = [
    "InputError",
    "InvariantError",
    "__version__",
    "alignment_scores",
    "complexity",
    "distortion",
    "generate_mixture",
    "kmeans",
    "l_objective",
    "load_embeddings",
    "run",
    "save_embeddings",
    "spearman",
]
