import numpy as np
import pytest

from helpers import make_binary_task, planted_task
from oracles import oracle_best_prefix
from pfv.errors import ConfigError, DegenerateSplitError
from pfv.learners import EXTRA_TREES, LDA, ExtraTreesParams, LearnerSpec
from pfv.ranking import FeatureRanking, RankingParams, rank_features
from pfv.seeding import rng_for
from pfv.selection import SelectionParams, best_prefix, evaluate_subset, select_features, stratified_split


def fixed_ranking(order, names):
    order = np.asarray(order)
    return FeatureRanking(np.zeros(order.size), order, 0, "MAX_ITERS", [], np.zeros((0, order.size)), tuple(names), 1)


LDA_PARAMS = SelectionParams(classifier=LearnerSpec(LDA), eval_seeds=range(5))


def test_separable_task_scores_one():
    t = planted_task(0, n1=50, n2=50, m=3, informative=(0,), shift=20.0)
    assert evaluate_subset(t, [0], LDA_PARAMS, 3) == 1.0


def test_same_seed_same_value():
    t = planted_task(1, m=4)
    p = SelectionParams(classifier=LearnerSpec(EXTRA_TREES, ExtraTreesParams(n_trees=10)))
    assert evaluate_subset(t, [0, 1], p, 9) == evaluate_subset(t, [0, 1], p, 9)


def test_split_is_stratified():
    y = np.r_[np.ones(25), np.zeros(75)]
    tr, te = stratified_split(y, 0.2, rng_for(0))
    assert y[te].sum() == 5 and (y[te] == 0).sum() == 15
    assert np.intersect1d(tr, te).size == 0 and tr.size + te.size == 100


def test_unsplittable_task():
    t = make_binary_task(np.arange(6.0)[:, None], [1, 0, 0, 0, 0, 0])
    with pytest.raises(DegenerateSplitError):
        evaluate_subset(t, [0], LDA_PARAMS, 0)


def test_two_informative_ranked_first():
    t = planted_task(2, n1=150, n2=150, m=8, informative=(0, 1), shift=1.5)
    r = select_features(t, fixed_ranking(range(8), t.feature_names), LDA_PARAMS)
    assert r.best_k == 2
    assert r.curve_mean[1] > r.curve_mean[-1]
    assert r.selected == ["f0", "f1"]


def test_single_feature():
    t = planted_task(0, m=1)
    r = select_features(t, fixed_ranking([0], t.feature_names), LDA_PARAMS)
    assert r.curve_mean.shape == (1,) and r.best_k == 1
    assert r.baseline_auroc == r.curve_mean[0]


@pytest.mark.parametrize("seed", range(5))
def test_matches_prefix_oracle(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(2, 11))
    t = planted_task(seed, n1=60, n2=140, m=m, informative=(0,), shift=0.8)
    ranking = fixed_ranking(rng.permutation(m), t.feature_names)
    assert select_features(t, ranking, LDA_PARAMS).best_k == oracle_best_prefix(t, ranking, LDA_PARAMS)


def test_prefix_property_and_parallel_determinism():
    t = planted_task(6, m=6)
    ranking = rank_features(t, RankingParams(max_iters=20, patience=5))
    p = SelectionParams(classifier=LearnerSpec(EXTRA_TREES, ExtraTreesParams(n_trees=10)), eval_seeds=range(3))
    a = select_features(t, ranking, p)
    b = select_features(t, ranking, SelectionParams(classifier=p.classifier, eval_seeds=range(3), n_jobs=3))
    assert a.selected == ranking.ranked_names()[: a.best_k]
    assert np.array_equal(a.per_seed, b.per_seed) and a.best_k == b.best_k


def test_max_subset_size_still_has_baseline():
    t = planted_task(7, m=5)
    r = select_features(t, fixed_ranking(range(5), t.feature_names),
                        SelectionParams(classifier=LearnerSpec(LDA), eval_seeds=range(3), max_subset_size=2))
    assert r.curve_mean.size == 2
    full = np.mean([evaluate_subset(t, range(5), LDA_PARAMS, s) for s in range(3)])
    assert r.baseline_auroc == pytest.approx(full)


def test_best_prefix_ties_to_smaller_k():
    assert best_prefix([0.5, 0.7, 0.7, 0.6]) == 2


def test_params_validation():
    with pytest.raises(ConfigError):
        SelectionParams(test_fraction=1.0)
    with pytest.raises(ConfigError):
        SelectionParams(eval_seeds=())
