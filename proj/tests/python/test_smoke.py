import math
import random

import pytest

import bwesg


def toks(lang, words):
    return [bwesg.Token(lang, w) for w in words]


def test_frodo_interleaving():
    pair = bwesg.DocumentPair(
        "toy",
        toks("en", ["Frodo", "Sam", "orcs", "goblins", "Mordor", "ring"]),
        toks("es", ["anillo", "orcos", "mago"]),
    )
    doc = bwesg.length_ratio_shuffle(pair)
    assert [t.surface for t in doc.tokens] == [
        "Frodo", "Sam", "anillo", "orcs", "goblins", "orcos", "Mordor", "ring", "mago",
    ]
    merged = bwesg.merge_and_shuffle(pair, 5)
    assert sorted(map(str, merged.tokens)) == sorted(map(str, doc.tokens))
    assert [str(t) for t in bwesg.merge_and_shuffle(pair, 5).tokens] == [str(t) for t in merged.tokens]


def test_similarity_and_mcnemar():
    assert bwesg.cosine([1, 2, 3], [4, 5, 6]) == pytest.approx(32 / math.sqrt(14 * 77))
    assert bwesg.hellinger([0.5, 0.5], [1.0, 0.0]) == pytest.approx(
        math.sqrt((math.sqrt(0.5) - 1) ** 2 + 0.5) / math.sqrt(2)
    )
    with pytest.raises(bwesg.BwesgError):
        bwesg.cosine([0, 0], [1, 1])
    r = bwesg.mcnemar([True] * 10 + [False] * 2, [False] * 10 + [True] * 2)
    assert r.chi2 == pytest.approx(49 / 12)
    assert r.significant


def test_train_query_and_evaluate(tmp_path):
    rng = random.Random(3)
    # Two topics; each aligned pair is about one of them.
    topics = [(["sol", "mar", "playa"], ["sun", "sea", "beach"]),
              (["rey", "reina", "trono"], ["king", "queen", "throne"])]
    docs = []
    for i in range(60):
        src, tgt = topics[i % 2]
        pair = bwesg.DocumentPair(
            str(i), toks("es", rng.choices(src, k=30)), toks("en", rng.choices(tgt, k=30))
        )
        docs.append(bwesg.length_ratio_shuffle(pair))

    cfg = bwesg.TrainingConfig()
    cfg.dim = 10
    cfg.window = 5
    cfg.negatives = 3
    cfg.epochs = 3
    cfg.subsample = 0.0
    cfg.negative_table_size = 10000
    space = bwesg.train(docs, cfg)
    assert len(space) == 12
    assert bwesg.Token("es", "rey") in space

    near = bwesg.nearest_cross(space, "es:rey")
    assert near.surface in {"king", "queen", "throne"}
    items = bwesg.ranked_list(space, "es:sol", bwesg.QueryMode.CROSS_LINGUAL, 3)
    assert len(items) == 3
    assert all(it.token.lang == "en" for it in items)

    result = bwesg.ble_evaluate(space, [(bwesg.Token("es", "rey"), bwesg.Token("en", "king")),
                                        (bwesg.Token("es", "nada"), bwesg.Token("en", "nothing"))])
    assert len(result) == 2
    assert result.covered == [True, False]

    path = tmp_path / "model.txt"
    bwesg.save_space(space, path)
    back = bwesg.load_space(path)
    assert back.vector("es:rey") == space.vector("es:rey")

    inst = [bwesg.SwtcInstance("es:rey", toks("es", ["rey", "trono"]), toks("en", ["king", "sea"]), bwesg.Token("en", "king"))]
    zero = bwesg.swtc_evaluate(space, inst, bwesg.ContextMethod.INTERPOLATED_ADD, 0.0)
    base = bwesg.no_context_baseline(space, inst)
    assert zero.correct == base.correct
