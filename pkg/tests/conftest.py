# keeps tests/ importable (oracles.py) regardless of invocation directory
