"""Presentations, word oracles, Cayley balls and the slim-triangle constant."""
from .ball import (BallTooLarge, CayleyBall, DistanceUnavailable, OracleInconsistency, OutsideBall,
                   build_ball)
from .delta import DeltaEstimate, estimate_delta
from .oracles import DehnOracle, FreeOracle, OracleBudgetExceeded, TableOracle, WordOracle, make_oracle
from .presentation import GroupPresentation, PresentationError, load_presentation, parse_presentation
from .presets import preset

__all__ = [
    "BallTooLarge", "CayleyBall", "DistanceUnavailable", "OracleInconsistency", "OutsideBall", "build_ball",
    "DeltaEstimate", "estimate_delta", "DehnOracle", "FreeOracle", "OracleBudgetExceeded", "TableOracle",
    "WordOracle", "make_oracle", "GroupPresentation", "PresentationError", "load_presentation",
    "parse_presentation", "preset",
]
