"""Seeded replication harness: generate block-structured samples, cluster, score with ARI."""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product

import numpy as np

from .cluster import DissimilaritySpec, agglomerate, make_provider
from .core import Partition, PseudoObsMatrix, cut_dendrogram
from .copulalab.families import BlockProduct, Clayton, Comonotone, Frank, GaussianEquicorr, Gumbel, sample
from .copulalab.params import tau_to_param
from .empirical import MeasureKind
from .evaluation import adjusted_rand_index

__all__ = [
    "SimulationConfig",
    "ConfigError",
    "random3_sizes",
    "even_block_sizes",
    "family_block",
    "run_simulation",
    "ROW_FIELDS",
]

SIM_FAMILIES = ("clayton", "frank", "gumbel", "gaussian", "comonotone")
ROW_FIELDS = ("seed", "replication", "family", "tau", "N", "method", "ari", "wall_ms")
_KEYS = {"family", "tau", "N", "B", "seed", "design", "methods", "tail_k", "replication_offset"}


class ConfigError(ValueError):
    pass


def random3_sizes(rng: np.random.Generator, m: int = 15, low: int = 2, high: int = 11) -> tuple[int, int, int]:
    """Uniform draw over ordered triples in [low, high]^3 summing to ``m`` (rejection)."""
    if not 3 * low <= m <= 3 * high:
        raise ValueError(f"no triple in [{low}, {high}] sums to {m}")
    while True:
        sizes = rng.integers(low, high + 1, size=3)
        if sizes.sum() == m:
            return tuple(int(s) for s in sizes)


def even_block_sizes(m: int, K: int) -> tuple[int, ...]:
    """``K`` sizes as equal as possible, larger blocks first."""
    if not 1 <= K <= m:
        raise ValueError(f"need 1 <= K <= m, got K={K}, m={m}")
    q, r = divmod(m, K)
    return tuple(q + 1 if i < r else q for i in range(K))


def family_block(family: str, tau: float, dim: int):
    family = family.lower()
    if family == "comonotone":
        return Comonotone(dim)
    param = tau_to_param(family, tau)
    cls = {"clayton": Clayton, "frank": Frank, "gumbel": Gumbel, "gaussian": GaussianEquicorr}[family]
    return cls(dim, param)


def _parse_method(text) -> DissimilaritySpec:
    if isinstance(text, dict):
        return DissimilaritySpec(MeasureKind.parse(text["measure"], text.get("tail_k")), text.get("mode", "average"))
    mode, _, measure = str(text).partition(":")
    if not measure:
        raise ConfigError(f"method {text!r} should look like 'mode:measure'")
    return DissimilaritySpec(MeasureKind.parse(measure), mode)


def _as_list(x):
    return list(x) if isinstance(x, (list, tuple)) else [x]


@dataclass(frozen=True)
class SimulationConfig:
    families: tuple[str, ...]
    taus: tuple[float, ...]
    Ns: tuple[int, ...]
    B: int
    seed: int
    design: dict
    methods: tuple[DissimilaritySpec, ...]
    replication_offset: int = 0

    @classmethod
    def from_dict(cls, cfg: dict) -> "SimulationConfig":
        unknown = set(cfg) - _KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        missing = {"family", "tau", "N", "B", "seed", "design", "methods"} - set(cfg)
        if missing:
            raise ConfigError(f"missing config keys: {sorted(missing)}")
        try:
            families = tuple(str(f).lower() for f in _as_list(cfg["family"]))
            for f in families:
                if f not in SIM_FAMILIES:
                    raise ConfigError(f"unknown family {f!r}; expected one of {SIM_FAMILIES}")
            taus = tuple(float(t) for t in _as_list(cfg["tau"]))
            for t in taus:
                if not 0.0 < t < 1.0:
                    raise ConfigError(f"tau must lie in (0, 1), got {t}")
            Ns = tuple(int(n) for n in _as_list(cfg["N"]))
            if any(n < 2 for n in Ns):
                raise ConfigError("every N must be at least 2")
            B, seed = int(cfg["B"]), int(cfg["seed"])
            if B < 1:
                raise ConfigError("B must be positive")
            offset = int(cfg.get("replication_offset", 0))
            if offset < 0:
                raise ConfigError("replication_offset must be non-negative")
            design = cfg["design"]
            if isinstance(design, str):
                design = {"type": design}
            design = dict(design)
            kind = design.get("type")
            if kind == "random3":
                design.setdefault("m", 15)
                if set(design) - {"type", "m"}:
                    raise ConfigError(f"random3 design takes only 'm', got {sorted(design)}")
                random3_sizes(np.random.default_rng(0), int(design["m"]))
            elif kind == "blocks":
                if set(design) != {"type", "m", "K"}:
                    raise ConfigError("blocks design needs exactly 'm' and 'K'")
                even_block_sizes(int(design["m"]), int(design["K"]))
            else:
                raise ConfigError(f"design type must be 'random3' or 'blocks', got {kind!r}")
            tail_k = cfg.get("tail_k")
            methods = []
            for text in _as_list(cfg["methods"]):
                spec = _parse_method(text)
                if tail_k is not None and spec.kind.tail_k is None:
                    spec = DissimilaritySpec(MeasureKind(spec.kind.measure, tail_k), spec.mode)
                methods.append(spec)
            if not methods:
                raise ConfigError("methods must not be empty")
        except ConfigError:
            raise
        except (TypeError, ValueError, KeyError) as exc:
            raise ConfigError(str(exc)) from exc
        return cls(families, taus, Ns, B, seed, design, tuple(methods), offset)

    def block_sizes(self, rng) -> tuple[int, ...]:
        if self.design["type"] == "random3":
            return random3_sizes(rng, int(self.design["m"]))
        return even_block_sizes(int(self.design["m"]), int(self.design["K"]))


def _replication(cfg: SimulationConfig, scenario, r: int, timing: bool) -> list[dict]:
    family, tau, N = scenario
    # child stream depends only on (seed, replication index), so runs split by offset concatenate
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(r,)))
    sizes = cfg.block_sizes(rng)
    spec = BlockProduct(tuple(family_block(family, tau, g) for g in sizes))
    x = sample(spec, N, rng)
    P = PseudoObsMatrix.from_uniforms(x)
    truth = Partition(tuple(i + 1 for i, g in enumerate(sizes) for _ in range(g)))
    rows = []
    for method in cfg.methods:
        t0 = time.perf_counter()
        dendro = agglomerate(make_provider(P, method), P.m, P.column_names)
        labels = cut_dendrogram(dendro, truth.k)
        wall = (time.perf_counter() - t0) * 1000.0 if timing else 0.0
        rows.append(
            {
                "seed": cfg.seed,
                "replication": r,
                "family": family,
                "tau": tau,
                "N": N,
                "method": method.label,
                "ari": adjusted_rand_index(truth, labels),
                "wall_ms": wall,
            }
        )
    return rows


def run_simulation(cfg: SimulationConfig, threads: int = 1, timing: bool = True) -> list[dict]:
    """All rows, ordered by (scenario, replication, method) whatever the thread count."""
    scenarios = list(product(cfg.families, cfg.taus, cfg.Ns))
    jobs = [(s, r) for s in scenarios for r in range(cfg.replication_offset, cfg.replication_offset + cfg.B)]

    def work(job):
        return _replication(cfg, job[0], job[1], timing)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(work, jobs))
    else:
        chunks = [work(j) for j in jobs]
    return [row for chunk in chunks for row in chunk]
