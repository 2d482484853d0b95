"""Cross-lingual syntactic similarity over Universal Dependencies parses."""

from ._core import (
    AlignError,
    AlignmentSet,
    AttentionError,
    ConlluError,
    DepTree,
    Hypergraph,
    KernelError,
    ReorgError,
    SimilarityError,
    StatsError,
    Token,
    align,
    build_hypergraph,
    build_matrix,
    expand_bias,
    kernels,
    normalized_score,
    parse_conllu,
    pearson,
    reorganize,
    sabk,
    score,
    self_score,
    serialize_conllu,
    ud_attention,
)

__version__ = "0.1.0"


def read_conllu(path, **kwargs):
    with open(path, encoding="utf-8") as f:
        return parse_conllu(f.read(), **kwargs)
