"""
Heavy-Tail Framework Test Suite

- unit/: One file per module
- integration/: Command-line runs end to end
- comprehensive/: Acceptance-scale Monte Carlo checks, marked slow
"""

__version__ = "1.0.0"
