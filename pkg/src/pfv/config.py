"""Run configuration: one YAML (or JSON) file drives the whole pipeline."""
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .cohort import DEFAULT_MISSING, ColumnType, Label, LabelRule, StrataColumns, read_header
from .errors import ConfigError, PFVError
from .learners import EXTRA_TREES, LDA, MLP, LearnerSpec
from .ranking import RankingParams
from .selection import SelectionParams
from .stats.mi import MIConfig
from .strata import DEFAULT_PAIRS, DEFAULT_STRATA, AdequacyPolicy, StratumSpec

_TOP_KEYS = {
    "input", "label_rule", "pairs", "strata", "exclude_tasks", "adequacy", "ranking",
    "selection", "validation", "statistics", "output_dir", "n_jobs", "manifest_timing",
}


EXECUTION_KEYS = ("n_jobs",)


@dataclass(frozen=True)
class InputSpec:
    path: Path
    delimiter: str = ","
    missing_values: tuple = DEFAULT_MISSING
    schema: dict = field(default_factory=dict)
    id_column: str | None = None
    features: tuple | None = None
    exclude: tuple = ()
    strata_columns: StrataColumns = field(default_factory=StrataColumns)


@dataclass(frozen=True)
class LogitSpec:
    covariates: tuple


@dataclass(frozen=True)
class StatsSpec:
    strata: tuple = (StratumSpec(),)
    anova: tuple = ()
    chi2: tuple = ()
    chi2_association: tuple = ()  # (variable, other) pairs
    logit: tuple = ()

    @property
    def empty(self):
        return not (self.anova or self.chi2 or self.chi2_association or self.logit)


@dataclass(frozen=True)
class RunConfig:
    input: InputSpec
    label_rule: LabelRule
    pairs: tuple = DEFAULT_PAIRS
    strata: tuple = DEFAULT_STRATA
    exclude_tasks: frozenset = frozenset()
    adequacy: AdequacyPolicy = field(default_factory=AdequacyPolicy)
    ranking: RankingParams = field(default_factory=RankingParams)
    selection: SelectionParams = field(default_factory=SelectionParams)
    validation: tuple = (LearnerSpec(LDA), LearnerSpec(MLP))
    statistics: StatsSpec = field(default_factory=StatsSpec)
    output_dir: Path = Path("out")
    n_jobs: int = 1
    manifest_timing: bool = False
    raw: dict = field(default_factory=dict, compare=False)

    def echo(self):
        # execution-only keys do not change results and would break byte-identity across thread counts
        return {k: v for k, v in self.raw.items() if k not in EXECUTION_KEYS}


def _pair(p):
    try:
        a, b = p
        a, b = Label(str(a).upper().replace("+", "_")), Label(str(b).upper().replace("+", "_"))
    except (ValueError, TypeError):
        raise ConfigError(f"cannot interpret class pair {p!r}") from None
    if a == b:
        raise ConfigError(f"class pair {p!r} repeats one class")
    return a, b


def _seeds(v):
    if isinstance(v, int):
        return tuple(range(v))
    return tuple(int(s) for s in v)


def parse_config(data: dict, base_dir=Path(".")) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    base_dir = Path(base_dir)
    try:
        inp = dict(data["input"])
        path = Path(inp.pop("path"))
        sc = inp.pop("strata_columns", {})
        schema = {k: ColumnType.parse(v) for k, v in inp.pop("schema", {}).items()}
        input_spec = InputSpec(
            path=path if path.is_absolute() else base_dir / path,
            delimiter=inp.pop("delimiter", ","),
            missing_values=tuple(inp.pop("missing_values", DEFAULT_MISSING)),
            schema=schema,
            id_column=inp.pop("id_column", None),
            features=tuple(inp["features"]) if inp.get("features") is not None else None,
            exclude=tuple(inp.pop("exclude", ())),
            strata_columns=StrataColumns(**sc),
        )
        inp.pop("features", None)
        if inp:
            raise ConfigError(f"unknown input option(s): {', '.join(inp)}")

        rule = LabelRule.from_dict(data["label_rule"]) if "label_rule" in data else LabelRule.default()
        pairs = tuple(_pair(p) for p in data.get("pairs", DEFAULT_PAIRS))
        strata = tuple(StratumSpec.parse(s) for s in data.get("strata", DEFAULT_STRATA))
        excluded = frozenset(
            (_pair(e["pair"]), StratumSpec.parse(e.get("stratum", "all"))) for e in data.get("exclude_tasks", ())
        )
        adequacy = AdequacyPolicy(**data.get("adequacy", {}))

        n_jobs = int(data.get("n_jobs", 1))
        rk = dict(data.get("ranking", {}))
        mi = MIConfig(**rk.pop("mi", {}))
        ranking = RankingParams(mi_config=mi, n_jobs=n_jobs, **rk)

        sel = dict(data.get("selection", {}))
        classifier = LearnerSpec.from_dict(sel.pop("classifier", {"kind": EXTRA_TREES}))
        if "eval_seeds" in sel:
            sel["eval_seeds"] = _seeds(sel["eval_seeds"])
        selection = SelectionParams(classifier=classifier, n_jobs=n_jobs, **sel)

        validation = tuple(LearnerSpec.from_dict(v) for v in data.get("validation", ({"kind": LDA}, {"kind": MLP})))

        st = dict(data.get("statistics") or {})
        stats = StatsSpec(
            strata=tuple(StratumSpec.parse(s) for s in st.pop("strata", ["all"])),
            anova=tuple(st.pop("anova", ())),
            chi2=tuple(st.pop("chi2", ())),
            chi2_association=tuple((a["variable"], a["with"]) for a in st.pop("chi2_association", ())),
            logit=tuple(LogitSpec(tuple(lg["covariates"])) for lg in st.pop("logit", ())),
        )
        if st:
            raise ConfigError(f"unknown statistics option(s): {', '.join(st)}")
        out = Path(data.get("output_dir", "out"))
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError, PFVError) as exc:
        raise ConfigError(f"invalid config: {exc}") from exc
    return RunConfig(
        input=input_spec,
        label_rule=rule,
        pairs=pairs,
        strata=strata,
        exclude_tasks=excluded,
        adequacy=adequacy,
        ranking=ranking,
        selection=selection,
        validation=validation,
        statistics=stats,
        output_dir=out if out.is_absolute() else base_dir / out,
        n_jobs=n_jobs,
        manifest_timing=bool(data.get("manifest_timing", False)),
        raw=data,
    )


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(data, base_dir=path.parent)


def check_columns(config: RunConfig):
    """Validate every column the config references against the input header."""
    try:
        header = read_header(config.input.path, config.input.delimiter)
    except OSError as exc:
        raise ConfigError(f"cannot read input {config.input.path}: {exc}") from exc
    present = set(header)
    needed = set(config.label_rule.columns()) | set(config.input.schema)
    if config.input.id_column:
        needed.add(config.input.id_column)
    if config.input.features:
        needed |= set(config.input.features)
    st = config.statistics
    needed |= set(st.anova) | set(st.chi2)
    for a, b in st.chi2_association:
        needed |= {a, b}
    for lg in st.logit:
        needed |= set(lg.covariates)
    uses = {s.kind for s in (*config.strata, *st.strata)}
    sc = config.input.strata_columns
    for kind, col in (("SEX", sc.sex), ("RACE", sc.race)):
        if kind in uses:
            needed.add(col)
    if uses & {"AGE_GT", "AGE_LE"}:
        needed.add(sc.age)
    missing = sorted(c for c in needed if c not in present)
    if missing:
        raise ConfigError(f"config references column(s) absent from {config.input.path.name}: {', '.join(missing)}")
    return header
