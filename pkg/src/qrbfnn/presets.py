"""Named experiment configurations for every benchmark task."""
from __future__ import annotations

from typing import Callable, Dict, List

from .experiments import ExperimentConfig, Variant
from .qlearn import TrainConfig

SYSTEM_ID_ADAPTIVE = dict(beta=0.9, gamma=5.0, q_max=5.0)
MIMO_ADAPTIVE = dict(beta=1.0, gamma=10.0, q_max=10.0)


def _two_cluster(experiment: str, variant: Variant, name: str, epochs: int, mu: float = 0.1) -> ExperimentConfig:
    return ExperimentConfig(experiment, variant, neurons=2, spread=0.1,
                            train=TrainConfig(mu=mu, epochs=epochs, trials=100), name=name)


def _bench(experiment, variant, name, mu, epochs=1, **kw) -> ExperimentConfig:
    return ExperimentConfig(experiment, variant, neurons=6, spread=1.0,
                            train=TrainConfig(mu=mu, epochs=epochs, trials=100), name=name, **kw)


def _build() -> Dict[str, Callable[[], ExperimentConfig]]:
    p: Dict[str, Callable[[], ExperimentConfig]] = {}
    for q in (2, 5, 10, 12):
        p[f"sensitivity-q{q}"] = (lambda q=q: _two_cluster(
            "sensitivity", Variant("fixed", q=float(q), q0=float(q)), f"sensitivity-q{q}", epochs=200))
    for q in (1, 2, 4):
        p[f"analysis-validation-q{q}"] = (lambda q=q: _two_cluster(
            "analysis-validation", Variant("fixed", q=float(q), q0=float(q)), f"analysis-validation-q{q}",
            epochs=200))
    p["classification"] = lambda: _two_cluster("classification", Variant("adaptive", **SYSTEM_ID_ADAPTIVE),
                                               "classification", epochs=200, mu=0.1)
    p["classification-baseline"] = lambda: _two_cluster("classification", Variant("baseline"),
                                                        "classification-baseline", epochs=200, mu=0.1)
    p["system-id"] = lambda: _bench("system-id", Variant("adaptive", **SYSTEM_ID_ADAPTIVE), "system-id", 1e-2,
                                    threshold_db=-14.5)
    p["system-id-baseline"] = lambda: _bench("system-id", Variant("baseline"), "system-id-baseline", 1e-2,
                                             threshold_db=-14.5)
    p["hammerstein"] = lambda: _bench("hammerstein", Variant("adaptive", **SYSTEM_ID_ADAPTIVE), "hammerstein",
                                      1e-2, epochs=HAMMERSTEIN_EPOCHS)
    p["hammerstein-baseline"] = lambda: _bench("hammerstein", Variant("baseline"), "hammerstein-baseline", 1e-2,
                                               epochs=HAMMERSTEIN_EPOCHS)
    p["mimo"] = lambda: _bench("mimo", Variant("adaptive", **MIMO_ADAPTIVE), "mimo", 1e-3, threshold_db=-16.0)
    p["mimo-baseline"] = lambda: _bench("mimo", Variant("baseline"), "mimo-baseline", 1e-3, threshold_db=-16.0)
    p["mackey-glass"] = lambda: _bench("mackey-glass", Variant("adaptive", **SYSTEM_ID_ADAPTIVE), "mackey-glass",
                                       1e-3, epochs=100)
    p["mackey-glass-baseline"] = lambda: _bench("mackey-glass", Variant("baseline"), "mackey-glass-baseline",
                                                1e-3, epochs=100)
    return p


HAMMERSTEIN_EPOCHS = 10
PRESETS = _build()


def preset_names() -> List[str]:
    return sorted(PRESETS)


def get_preset(name: str) -> ExperimentConfig:
    try:
        return PRESETS[name]()
    except KeyError:
        raise KeyError(f"unknown preset {name!r}") from None
