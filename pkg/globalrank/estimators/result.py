"""Result type shared by all rank estimators."""

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class RankEstimate:
    """Real-valued estimated global rank of one node."""

    node: int
    value: float
    method: str
    sample_frac: Optional[float] = None
    seed: Optional[int] = None

    def rounded(self) -> int:
        """Nearest integer rank, for presentation only."""
        return int(round(self.value))


def clamp_rank(value: float, n: int) -> float:
    """Clamp a raw rank estimate into [1, n]."""
    return float(min(max(value, 1.0), float(n)))
