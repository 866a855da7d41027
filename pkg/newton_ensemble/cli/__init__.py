from newton_ensemble.cli.app import NewtonEnsemble, main

__all__ = [
    'NewtonEnsemble',
    'main',
]
