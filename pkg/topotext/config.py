from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Optional

from topotext.clustering import CutRule, parse_cut_rule
from topotext.constants import (
    DEFAULT_BOTH_THRESHOLD,
    DEFAULT_LANDSCAPE_LEVELS,
    DEFAULT_MAX_DIM,
    DEFAULT_OVERLAP,
    DEFAULT_RESOLUTION,
    DEFAULT_SEED,
    DEFAULT_TOP_TERMS,
)
from topotext.errors import ConfigError
from topotext.metricspace import METRICS

LENSES = ("svd", "pca", "axis")
SYNTH_KINDS = ("corpus", "circle", "blobs", "square")


@dataclass
class RunConfig:
    """Every setting of one command-line run, with the library defaults."""

    command: str
    points: Optional[Path] = None
    id_column: bool = False
    complex_path: Optional[Path] = None
    corpus: Optional[str] = None
    labels: Optional[str] = None
    label: Optional[str] = None
    inputs: tuple[str, ...] = ()
    out: Path = Path(".")

    metric: Optional[str] = None
    max_dim: int = DEFAULT_MAX_DIM
    max_eps: Optional[float] = None
    keep_zero: bool = False
    k_max: int = DEFAULT_LANDSCAPE_LEVELS
    cap: Optional[float] = None
    parts: Optional[int] = None
    part_size: Optional[int] = None

    dim: int = 1
    p: float = 1.0
    bottleneck: bool = False
    table: bool = False
    consecutive: bool = False

    lens: str = "svd"
    lens_dim: int = 2
    axis: int = 0
    resolution: int = DEFAULT_RESOLUTION
    overlap: float = DEFAULT_OVERLAP
    cut: str = "first-gap"
    seed: int = DEFAULT_SEED
    purity: bool = False
    both_threshold: float = DEFAULT_BOTH_THRESHOLD
    top_terms: int = DEFAULT_TOP_TERMS
    workers: int = 1
    stop_words: Optional[Path] = None

    kind: str = "corpus"
    count: Optional[int] = None

    @property
    def cut_rule(self) -> CutRule:
        return parse_cut_rule(self.cut)

    def validate(self) -> RunConfig:
        """
        Check every numeric range before anything is computed.

        Returns:
            The config itself.
        Raises:
            ConfigError: naming the first offending setting.
        """
        if self.metric is not None and self.metric not in METRICS:
            raise ConfigError(f"--metric must be one of {', '.join(METRICS)}")
        if self.max_dim < 0:
            raise ConfigError("--max-dim must be nonnegative")
        if self.max_eps is not None and not (
            self.max_eps > 0 and math.isfinite(self.max_eps)
        ):
            raise ConfigError("--max-eps must be a positive number")
        if self.k_max < 1:
            raise ConfigError("--k-max must be at least 1")
        if self.cap is not None and not self.cap > 0:
            raise ConfigError("--cap must be positive")
        if self.parts is not None and self.parts < 1:
            raise ConfigError("--parts must be at least 1")
        if self.part_size is not None and self.part_size < 1:
            raise ConfigError("--part-size must be at least 1")
        if self.parts is not None and self.part_size is None:
            raise ConfigError("--parts needs --part-size")
        if self.dim < 0:
            raise ConfigError("--dim must be nonnegative")
        if not (self.p >= 1 and math.isfinite(self.p)):
            raise ConfigError("-p must be a finite number at least 1")
        if self.table and self.consecutive:
            raise ConfigError("--table and --consecutive are exclusive")
        if self.lens not in LENSES:
            raise ConfigError(f"--lens must be one of {', '.join(LENSES)}")
        if self.lens_dim not in (1, 2):
            raise ConfigError("--lens-dim must be 1 or 2")
        if self.axis < 0:
            raise ConfigError("--axis must be nonnegative")
        if self.resolution < 1:
            raise ConfigError("--resolution must be at least 1")
        if not 0 <= self.overlap < 1:
            raise ConfigError("--overlap must lie in [0, 1)")
        if not 0.5 <= self.both_threshold <= 1:
            raise ConfigError("--both-threshold must lie in [0.5, 1]")
        if self.top_terms < 0:
            raise ConfigError("--top-terms must be nonnegative")
        if self.workers < 1:
            raise ConfigError("--workers must be at least 1")
        if self.kind not in SYNTH_KINDS:
            raise ConfigError(f"synth kind must be one of {', '.join(SYNTH_KINDS)}")
        if self.count is not None and self.count < 1:
            raise ConfigError("--count must be at least 1")
        given = [self.points, self.corpus, self.complex_path]
        if sum(source is not None for source in given) > 1:
            raise ConfigError("give only one of --points, --corpus and --complex")
        parse_cut_rule(self.cut)
        return self

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        return {
            key: str(value) if isinstance(value, Path) else value
            for key, value in data.items()
        }
