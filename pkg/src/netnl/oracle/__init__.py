"""Independent verification layer: density-operator simulation, correlators,
randomized bound maximization and explicit witnesses."""
