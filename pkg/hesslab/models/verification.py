#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Data structures for the property suite.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple


@dataclass
class PropertyResult:
    """Outcome of one property at one (n, k).

    `min_margin` is the smallest relative margin over the samples; the
    property holds iff it is nonnegative.
    """
    name: str
    n: int
    k: int
    samples: int
    min_margin: float
    passed: bool
    worst: List[Tuple[float, Tuple[float, ...]]] = field(default_factory=list)
    statistic: Optional[float] = None  # empirical constant, where one is reported

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "n": self.n,
            "k": self.k,
            "samples": self.samples,
            "min_margin": self.min_margin,
            "passed": self.passed,
            "statistic": self.statistic,
        }
