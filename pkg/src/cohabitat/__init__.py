"""Multi-agent thermal-comfort simulator: hierarchical-RL occupants and a
Q-learning climate controller sharing one thermal zone."""

__version__ = "0.1.0"
