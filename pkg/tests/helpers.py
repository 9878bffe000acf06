import numpy as np

from pfv.cohort import Label
from pfv.strata import BinaryTask, StratumSpec


def make_binary_task(X, y, names=None):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y).astype(np.int8)
    names = tuple(names or (f"f{j}" for j in range(X.shape[1])))
    return BinaryTask(Label.LATE, Label.CONTROL, StratumSpec(), X, y, names, np.arange(y.size))


def planted_task(seed, n1=100, n2=400, m=30, informative=(0, 1, 2), shift=1.0):
    rng = np.random.default_rng(seed)
    y = np.r_[np.ones(n1), np.zeros(n2)].astype(np.int8)
    X = rng.standard_normal((n1 + n2, m))
    X[:n1, [j for j in informative if j < m]] += shift
    return make_binary_task(X, y)


LIGHT_RUN = {
    "pairs": [["LATE", "CONTROL"], ["AD", "CONTROL"]],
    "strata": ["all", "sex=Female"],
    "ranking": {"max_iters": 60, "patience": 10, "top_d": 4},
    "selection": {"eval_seeds": 3, "classifier": {"kind": "extra_trees", "extra_trees": {"n_trees": 10}}},
    "validation": [{"kind": "lda"}, {"kind": "mlp", "mlp": {"epochs": 15, "hidden_sizes": [4]}}],
    "statistics": {
        "strata": ["all", "sex=Male"],
        "anova": ["f0", "age"],
        "chi2": ["sex", "f5"],
        "chi2_association": [{"variable": "f5", "with": "sex"}],
        "logit": [{"covariates": ["f0", "f5"]}],
    },
}


def write_light_fixture(directory, seed=0, counts=(0, 90, 60, 240), **overrides):
    """Small synthetic cohort plus a fast config; returns the config path."""
    import yaml

    from pfv.synth import MEAN_SHIFT, Planted, SynthSpec, fixture_config, generate, write_fixture

    directory.mkdir(parents=True, exist_ok=True)
    noise = ["normal"] * 5 + ["categorical:3"]
    spec = SynthSpec(counts, 6, (Planted(0, MEAN_SHIFT, 1.0, ("LATE", "CONTROL")),), noise=noise, seed=seed)
    write_fixture(generate(spec), directory / "cohort.csv", seed=seed)
    cfg = fixture_config("cohort.csv", "out", **{**LIGHT_RUN, **overrides})
    path = directory / "config.yaml"
    path.write_text(yaml.safe_dump(cfg, sort_keys=False))
    return path


def snapshot(directory):
    return {p.relative_to(directory).as_posix(): p.read_bytes() for p in sorted(directory.rglob("*")) if p.is_file()}


def generated_task(seed, informative=(0, 1, 2), shift=1.0, n_minority=100, n_majority=400, m=30):
    """LATE vs Control task drawn from the synthetic cohort generator with mean-shift features."""
    from pfv.cohort import Label
    from pfv.strata import make_task
    from pfv.synth import MEAN_SHIFT, Planted, SynthSpec, generate

    planted = tuple(Planted(j, MEAN_SHIFT, shift, (Label.LATE, Label.CONTROL)) for j in informative)
    cohort = generate(SynthSpec((0, n_minority, 0, n_majority), m=m, planted=planted, seed=seed))
    return make_task(cohort, Label.LATE, Label.CONTROL, StratumSpec())
