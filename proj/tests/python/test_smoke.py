import os
import pathlib

import numpy as np
import pytest

import udsim

FIXTURES = pathlib.Path(os.environ.get("UDSIM_FIXTURE_DIR", pathlib.Path(__file__).parents[1] / "fixtures"))


def load(name):
    return udsim.read_conllu(FIXTURES / name)[0]


def test_worked_example():
    en, zh = load("en1.conllu"), load("zh1_figure.conllu")
    links = udsim.align(en, zh, backend="lexicon", lexicon_path=str(FIXTURES / "lexicon_en_zh.tsv"))
    assert links.pairs == [(1, 1), (2, 2), (4, 4)]
    m = udsim.build_matrix(en, zh, links)
    assert m.shape == (4, 4)
    assert abs(m[1, 1] - 7.56) <= 1e-12
    assert np.count_nonzero(m) == 1
    assert abs(udsim.score(m) - 0.945) <= 1e-12
    assert udsim.normalized_score(udsim.score(m), udsim.self_score(en)) < 1


def test_hyperedges_and_heights():
    g = udsim.build_hypergraph(load("zh1_table.conllu"), order="relation_taxonomy")
    assert g.render_lines()[1] == "⟨⟨吉姆_nsubj, 蒂姆_obj, 了_aux⟩, 打败_root⟩"
    h = udsim.build_hypergraph(load("en1.conllu")).heights(0.2)
    assert h == pytest.approx([1.0, 1.4, 1.0, 1.2])


def test_round_trip_and_errors():
    trees = udsim.read_conllu(FIXTURES / "corpus_mixed.conllu")
    assert udsim.parse_conllu(udsim.serialize_conllu(trees)) == trees
    with pytest.raises(udsim.ConlluError, match="MultipleRoots"):
        udsim.parse_conllu("1\ta\t_\t_\t_\t_\t0\troot\t_\t_\n2\tb\t_\t_\t_\t_\t0\troot\t_\t_\n\n")
    t = udsim.DepTree("x", "en", [udsim.Token(1, "w", 0, "root")])
    assert len(t) == 1 and t.root_id == 1


def test_kernels_symmetric():
    corpus = [load("en1.conllu"), load("en2.conllu"), load("zh1_table.conllu")]
    ab = udsim.kernels(corpus, "en1", "en2")
    ba = udsim.kernels(corpus, "en2", "en1")
    assert ab == ba
    assert ab["sabk"] == pytest.approx(11.5 / 8)
    assert ab["msk"] >= ab["tabk"]


def test_attention_and_bias():
    rng = np.random.default_rng(0)
    q, k, v = (rng.uniform(-1, 1, (6, 4)) for _ in range(3))
    out = udsim.ud_attention(q, k, v, np.ones((6, 6)))
    logits = q @ k.T / 2.0
    w = np.exp(logits - logits.max(axis=1, keepdims=True))
    w /= w.sum(axis=1, keepdims=True)
    assert np.allclose(out, w @ v, atol=1e-12)
    bias = udsim.expand_bias(np.array([[2.0]]), "special\nsrc\t1\nspecial\ntgt\t1\nspecial\n")
    assert bias[1, 3] == 2.0 and bias[3, 1] == 2.0 and bias[0, 0] == 1.0


def test_reorg_and_pearson():
    text = (FIXTURES / "quadruples.tsv").read_text(encoding="utf-8")
    assert len(udsim.reorganize(text)) == 4
    assert len(udsim.reorganize(text, "full")) == 8
    r, p = udsim.pearson([0.949, 0.796, 0.747, 0.533, 0.362, 0.526], [90.86, 88.65, 88.11, 77.30, 74.57, 78.26])
    assert r == pytest.approx(0.973, abs=0.01)
    assert p == pytest.approx(0.001, abs=0.005)
