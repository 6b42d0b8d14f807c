"""Coloring, Grundy and marking games on incomparability graphs of posets.

Library + CLI: poset core (width, chain partitions, induced-subposet search),
adversarial chain constructions with role metadata, rule-complete game engines
(standard and auxiliary modes), scripted strategies for both players, the
interval presentation game with its recursive painter, exact small-scale
solvers, and an experiment harness.
"""

from .poset import (
    ChainInterval,
    ChainPartition,
    ContiguityViolation,
    DensePoset,
    Poset,
    PosetError,
    StackedPoset,
    StructuredPoset,
    ValidationError,
    contains_induced,
    incomparability_interval,
    incomparables,
    load_poset,
    max_antichain,
    min_chain_partition,
    random_width_poset,
    save_poset,
    validate_poset,
    width,
)
from .constructions import (
    ConstructionMeta,
    MonotoneChainSpec,
    boundary_interval_poset,
    boundary_intervals,
    fence_poset,
    monotone_chain_poset,
    sliding_window_poset,
    stack_copies,
)
from .engine import (
    ALICE,
    AUXILIARY,
    BOB,
    COLORING,
    GRUNDY,
    MARKING,
    STANDARD,
    AgentProtocolError,
    GameConfig,
    GameState,
    IllegalMove,
    Move,
    Transcript,
    first_fit_sequence,
    play_match,
    replay,
)

__version__ = "0.1.0"
